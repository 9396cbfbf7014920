"""Suspension of finite carriers, compact elements, and the coherence-type checkers.

Subsets of a carrier are bitmasks. The suspension preorder is the definitional
one: ``S <= T`` when every ``s`` in S lies below the join of some finite
``T_s`` inside T. All checks run exhaustively when the carrier has at most
``EXHAUSTIVE_LIMIT`` elements and on a seeded sample of subsets otherwise.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations

from .order import Carrier, iter_bits, mask_of
from .quantale import FiniteQuantale

EXHAUSTIVE_LIMIT = 12


@dataclass(frozen=True)
class SuspensionClass:
    """A class of nonempty subsets, keyed by the ideal they generate.

    S and T are equivalent exactly when every element of each lies below a
    finite join from the other, i.e. when their generated ideals coincide.
    """

    carrier: Carrier
    ideal: int

    @staticmethod
    def of(c: Carrier, subset: int) -> "SuspensionClass":
        ideal = 0
        for s in iter_bits(subset):
            ideal |= c.down_masks[s]
        changed = True
        while changed:
            changed = False
            for a in iter_bits(ideal):
                for b in iter_bits(ideal):
                    j = c.join(a, b)
                    if not ideal >> j & 1:
                        ideal |= c.down_masks[j]
                        changed = True
        return SuspensionClass(c, ideal)


@lru_cache(maxsize=64)
def subset_joins(c: Carrier) -> tuple[int, ...]:
    """joins[mask] for every nonempty mask (index 0 unused)."""
    n = c.size
    out = [0] * (1 << n)
    for mask in range(1, 1 << n):
        low = mask & -mask
        rest = mask ^ low
        x = low.bit_length() - 1
        out[mask] = x if not rest else c.join(out[rest], x)
    return tuple(out)


def _join(c: Carrier, mask: int) -> int:
    if c.size <= EXHAUSTIVE_LIMIT:
        return subset_joins(c)[mask]
    return c.join_mask(mask)


def cover_witness(c: Carrier, s: int, T: int) -> int | None:
    """A smallest finite T_s inside T with s <= join(T_s), or None."""
    items = list(iter_bits(T))
    for k in range(1, len(items) + 1):
        for sub in combinations(items, k):
            if c.leq(s, c.join_set(sub)):
                return mask_of(sub)
    return None


def suspension_leq(c: Carrier, S: int, T: int) -> bool:
    """Every s in S is below the join of a finite part of T (T is finite here)."""
    jT = _join(c, T)
    return all(c.leq(s, jT) for s in iter_bits(S))


def suspension_leq_witness(c: Carrier, S: int, T: int) -> dict[int, int] | None:
    out = {}
    for s in iter_bits(S):
        w = cover_witness(c, s, T)
        if w is None:
            return None
        out[s] = w
    return out


def sigma(c: Carrier, S: int) -> int:
    return _join(c, S)


def iota(c: Carrier, x: int) -> int:
    return 1 << x


def _subsets(c: Carrier, budget: int, seed: int):
    n = c.size
    if n <= EXHAUSTIVE_LIMIT:
        return range(1, 1 << n)
    rng = random.Random(seed)
    singles = [1 << x for x in range(n)]
    return singles + [rng.randrange(1, 1 << n) for _ in range(budget)]


def suspension_collapse_check(c: Carrier, sample_budget: int = 2000, seed: int = 0) -> tuple[bool, int | None]:
    """Every subset S is equivalent to the singleton {join S}; returns (ok, failing subset)."""
    for S in _subsets(c, sample_budget, seed):
        single = 1 << sigma(c, S)
        if suspension_leq_witness(c, S, single) is None or suspension_leq_witness(c, single, S) is None:
            return False, S
    return True, None


def sigma_flat(c: Carrier, a: int, sample_budget: int = 2000, seed: int = 0) -> int | None:
    """A least subset (in the suspension preorder) among those whose join is >= a.

    Candidates are scanned and the first one below every candidate is
    returned, so existence is checked rather than assumed.
    """
    cands = [S for S in _subsets(c, sample_budget, seed) if c.leq(a, sigma(c, S))]
    # S <= T depends on T only through join(T), so compare against the
    # distinct candidate joins
    cand_joins = sorted({sigma(c, T) for T in cands})
    for S in sorted(cands, key=lambda m: (bin(m).count("1"), m)):
        if all(all(c.leq(s, j) for s in iter_bits(S)) for j in cand_joins):
            return S
    return None


def adjunction_check(c: Carrier, sample_budget: int = 2000, seed: int = 0) -> bool:
    """sigma_flat(a) <= S iff a <= sigma(S)."""
    for a in range(c.size):
        fa = sigma_flat(c, a, sample_budget, seed)
        if fa is None:
            return False
        for S in _subsets(c, sample_budget, seed):
            if suspension_leq(c, fa, S) != c.leq(a, sigma(c, S)):
                return False
    return True


def suspension_meet(c: Carrier, S: int, T: int) -> int | None:
    """Greatest lower bound of S and T in the suspension, found by brute force."""
    lows = [U for U in range(1, 1 << c.size) if suspension_leq(c, U, S) and suspension_leq(c, U, T)]
    # V <= U only looks at the elements of V, so U dominates every lower bound
    # exactly when it dominates their union
    everything = 0
    for V in lows:
        everything |= V
    for U in lows:
        if suspension_leq(c, everything, U):
            return U
    return None


def meet_theorem_check(c: Carrier) -> bool:
    """sigma(S meet T) = sigma(S) meet sigma(T) for all S, T (carriers of size <= 6)."""
    n = c.size
    for S in range(1, 1 << n):
        for T in range(S, 1 << n):
            rhs = c.meet(sigma(c, S), sigma(c, T))
            if rhs is None:
                continue
            U = suspension_meet(c, S, T)
            if U is None or sigma(c, U) != rhs:
                return False
    return True


def compact_elements(c: Carrier, sample_budget: int = 2000, seed: int = 0) -> list[int]:
    """x such that x <= join(X) forces x <= join of a finite part of X."""
    out = []
    for x in range(c.size):
        if all(
            cover_witness(c, x, X) is not None
            for X in _subsets(c, sample_budget, seed)
            if c.leq(x, sigma(c, X))
        ):
            out.append(x)
    return out


def is_algebraic(c: Carrier, sample_budget: int = 2000, seed: int = 0) -> bool:
    """Every element is a join of compact elements below it."""
    K = compact_elements(c, sample_budget, seed)
    return all(any(k == x for k in K) or _join_below(c, K, x) == x for x in range(c.size))


def _join_below(c: Carrier, K: list[int], x: int) -> int | None:
    below = [k for k in K if c.leq(k, x)]
    return c.join_set(below) if below else None


def is_precoherent(q: FiniteQuantale, sample_budget: int = 2000, seed: int = 0) -> bool:
    c = q.carrier
    K = set(compact_elements(c, sample_budget, seed))
    return is_algebraic(c, sample_budget, seed) and all(q.mult(a, b) in K for a in K for b in K)


def is_coherent(q: FiniteQuantale, sample_budget: int = 2000, seed: int = 0) -> bool:
    return is_precoherent(q, sample_budget, seed) and q.top in compact_elements(q.carrier, sample_budget, seed)


def _subset_product(q: FiniteQuantale, S: int, T: int) -> int:
    return mask_of(q.mult(s, t) for s in iter_bits(S) for t in iter_bits(T))


def is_blooming(q: FiniteQuantale, sample_budget: int = 2000, seed: int = 0) -> bool:
    """sigma_flat(xy) is equivalent to sigma_flat(x) sigma_flat(y) in the suspension."""
    c = q.carrier
    flats = [sigma_flat(c, a, sample_budget, seed) for a in range(c.size)]
    if any(f is None for f in flats):
        return False
    for x in range(c.size):
        for y in range(c.size):
            lhs = flats[q.mult(x, y)]
            rhs = _subset_product(q, flats[x], flats[y])
            if not (suspension_leq(c, lhs, rhs) and suspension_leq(c, rhs, lhs)):
                return False
    return True


def is_continuous(c: Carrier, sample_budget: int = 2000, seed: int = 0) -> bool:
    """sigma has a left adjoint: the least preimage exists and maps back onto a."""
    for a in range(c.size):
        fa = sigma_flat(c, a, sample_budget, seed)
        if fa is None or sigma(c, fa) != a:
            return False
    return True


def is_shrinkable(c: Carrier, sample_budget: int = 2000, seed: int = 0) -> bool:
    """For every S and b <= sigma(S) there is S' <= S with sigma(S') = b."""
    subsets = list(_subsets(c, sample_budget, seed))
    by_join: dict[int, list[int]] = {}
    for S in subsets:
        by_join.setdefault(sigma(c, S), []).append(S)
    for S in subsets:
        top = sigma(c, S)
        for b in range(c.size):
            if not c.leq(b, top):
                continue
            if not any(suspension_leq(c, S2, S) for S2 in by_join.get(b, [])):
                return False
    return True


def selective_base_check(q: FiniteQuantale, base: list[int]) -> bool:
    """Every element is a finite join of base elements below it, and the base is
    closed under products (the selective-base route to precoherence)."""
    B = set(base)
    if any(q.mult(a, b) not in B for a in B for b in B):
        return False
    return all(_join_below(q.carrier, base, x) == x for x in range(q.size))


def coherence_report(q: FiniteQuantale, sample_budget: int = 2000, seed: int = 0) -> dict:
    c = q.carrier
    return {
        "compact_elements": [c.names[x] for x in compact_elements(c, sample_budget, seed)],
        "algebraic": is_algebraic(c, sample_budget, seed),
        "precoherent": is_precoherent(q, sample_budget, seed),
        "coherent": is_coherent(q, sample_budget, seed),
        "blooming": is_blooming(q, sample_budget, seed),
        "continuous": is_continuous(c, sample_budget, seed),
        "shrinkable": is_shrinkable(c, sample_budget, seed),
    }
