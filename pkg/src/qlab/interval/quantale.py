"""Opens of a finite union of rational segments as an (idempotent) quantale.

Filters come from a closed list of families, each with a closed-form
saturation operator D(b) = union{x : s n x <= b for some s in F}. Every
closed form is backed by an explicit witness construction and a randomised
soundness probe (see ``validate_closed_form``).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from ..order import InputError
from .sets import IntervalSet, Space, frac


@dataclass(frozen=True)
class Above:
    """F_U = {V : U <= V}."""

    U: IntervalSet


@dataclass(frozen=True)
class Comax:
    """F_{perp U} = {V : V u U = X}."""

    U: IntervalSet


@dataclass(frozen=True)
class Dense:
    """F_{not| empty}: the dense opens."""


@dataclass(frozen=True)
class ContainsPoints:
    """{V : Y <= V} for a finite set of rational points Y."""

    Y: IntervalSet


@dataclass(frozen=True)
class SumOf:
    parts: tuple


@dataclass(frozen=True)
class ProdOf:
    parts: tuple


IntervalFilter = Union[Above, Comax, Dense, ContainsPoints, SumOf, ProdOf]


class Unsupported(InputError):
    pass


def _sum_above_comax(f: SumOf) -> tuple[IntervalSet, IntervalSet] | None:
    if len(f.parts) != 2:
        return None
    a, b = f.parts
    if isinstance(a, Comax) and isinstance(b, Above):
        a, b = b, a
    if isinstance(a, Above) and isinstance(b, Comax):
        return a.U, b.U
    return None


def describe(f) -> str:
    if isinstance(f, Above):
        return f"Above({f.U})"
    if isinstance(f, Comax):
        return f"Comax({f.U})"
    if isinstance(f, Dense):
        return "Dense"
    if isinstance(f, ContainsPoints):
        return f"ContainsPoints({f.Y})"
    if isinstance(f, SumOf):
        return "Sum(" + ", ".join(describe(p) for p in f.parts) + ")"
    if isinstance(f, ProdOf):
        return "Prod(" + ", ".join(describe(p) for p in f.parts) + ")"
    raise Unsupported(f"unknown filter family {f!r}")


def contains(space: Space, f, V: IntervalSet) -> bool:
    """Exact membership test for the defining predicate of each family."""
    if isinstance(f, Above):
        return f.U <= V
    if isinstance(f, Comax):
        return (V | f.U) == space.whole
    if isinstance(f, Dense):
        return space.is_dense(V)
    if isinstance(f, ContainsPoints):
        return f.Y <= V
    if isinstance(f, ProdOf):
        return all(contains(space, g, V) for g in f.parts)
    if isinstance(f, SumOf):
        pair = _sum_above_comax(f)
        if pair is None:
            raise Unsupported(f"sum {describe(f)} is outside the supported families")
        U, W = pair
        # V >= U n N for some open N containing W^c  <=>  W^c <= int(U^c u V)
        return space.complement(W) <= space.interior(space.complement(U) | V)
    raise Unsupported(f"unknown filter family {f!r}")


# ---------------------------------------------------------------- closed forms


def regularize(space: Space, b: IntervalSet) -> IntervalSet:
    """D for the dense filter: int(cl(b))."""
    return space.interior(space.closure(b))


def heyting(space: Space, U: IntervalSet, b: IntervalSet) -> IntervalSet:
    """D for F_U: int(U^c u b)."""
    return space.interior(space.complement(U) | b)


def saturate_comax(space: Space, U: IntervalSet, b: IntervalSet) -> IntervalSet:
    """D for F_{perp U}: b u U."""
    return b | U


def saturate(space: Space, f, b: IntervalSet) -> IntervalSet:
    if isinstance(f, Above):
        return heyting(space, f.U, b)
    if isinstance(f, Comax):
        return saturate_comax(space, f.U, b)
    if isinstance(f, Dense):
        return regularize(space, b)
    if isinstance(f, ContainsPoints):
        return b | space.complement(f.Y)
    if isinstance(f, SumOf):
        pair = _sum_above_comax(f)
        if pair is None:
            raise Unsupported(f"no closed form for {describe(f)}")
        U, W = pair
        return W | heyting(space, U, b)
    if isinstance(f, ProdOf):
        if _prod_is_trivial(space, f):
            return b
        raise Unsupported(f"no closed form for {describe(f)}")
    raise Unsupported(f"unknown filter family {f!r}")


def _prod_is_trivial(space: Space, f: ProdOf) -> bool:
    """Above(U) n Comax(U') with U' <= U only contains X."""
    aboves = [g.U for g in f.parts if isinstance(g, Above)]
    comaxes = [g.U for g in f.parts if isinstance(g, Comax)]
    return any(c <= a for a in aboves for c in comaxes) or any(a == space.whole for a in aboves)


def saturation_orbit(space: Space, f, b: IntervalSet, max_steps: int = 64) -> list[IntervalSet]:
    seq = [b]
    for _ in range(max_steps):
        nxt = saturate(space, f, seq[-1])
        if nxt == seq[-1]:
            return seq
        seq.append(nxt)
    return seq


def local_steps(space: Space, f, a: IntervalSet, b: IntervalSet, max_steps: int = 64) -> int | None:
    """Least n with a <= D^n(b), or None within the bound."""
    for n, y in enumerate(saturation_orbit(space, f, b, max_steps)):
        if a <= y:
            return n
    return None


def dense_quotient_class(space: Space, b: IntervalSet) -> IntervalSet:
    return regularize(space, b)


def hbar(space: Space, b: IntervalSet) -> IntervalSet:
    """Annihilator join: the largest open disjoint from b, i.e. int(b^c)."""
    return space.exterior(b)


# ---------------------------------------------------------------- witnesses


def _separating_radius(space: Space, p: Fraction, avoid: IntervalSet) -> Fraction:
    """Radius r > 0 such that [p - r, p + r] n X stays inside p's segment and off ``avoid``.

    ``avoid`` must be closed and must not contain p.
    """
    seg = space.segment_of(p)
    if seg is None or p in avoid:
        raise InputError(f"{p} cannot be separated")
    dists = [abs(p - e) for e in avoid.endpoints()]
    for a, b in space.segments:
        if (a, b) != seg:
            dists.append(min(abs(p - a), abs(p - b)))
    dists.append(seg[1] - seg[0])
    return min(d for d in dists if d > 0) / 2


def small_neighbourhood(space: Space, p: Fraction, avoid: IntervalSet) -> IntervalSet:
    """An open x containing p whose closure misses the closed set ``avoid``."""
    r = _separating_radius(space, p, avoid)
    return IntervalSet.open(p - r, p + r) & space.whole


def witness_at(space: Space, f, b: IntervalSet, p: Fraction) -> tuple[IntervalSet, IntervalSet]:
    """A pair (x, s) with p in x, s in F and s n x <= b, for p in D(b)."""
    X = space.whole
    if isinstance(f, Above):
        return heyting(space, f.U, b), f.U
    if isinstance(f, Dense):
        return regularize(space, b), b | space.exterior(b)
    if p in b:
        return b, X
    if isinstance(f, Comax):
        x = small_neighbourhood(space, p, space.complement(f.U))
        return x, X - space.closure(x)
    if isinstance(f, ContainsPoints):
        x = small_neighbourhood(space, p, f.Y)
        return x, X - space.closure(x)
    if isinstance(f, SumOf):
        pair = _sum_above_comax(f)
        if pair is None:
            raise Unsupported(describe(f))
        U, W = pair
        h = heyting(space, U, b)
        if p in h:
            return h, U
        x = small_neighbourhood(space, p, space.complement(W))
        return x, U & (X - space.closure(x))
    raise Unsupported(describe(f))


def sample_points(space: Space, s: IntervalSet, grid: int = 32) -> list[Fraction]:
    """Endpoints, midpoints of parts, and grid points lying in s."""
    pts = set()
    for lo, hi, lc, hc in s.parts:
        if lc:
            pts.add(lo)
        if hc:
            pts.add(hi)
        pts.add((lo + hi) / 2)
    for a, b in space.segments:
        for k in range(grid + 1):
            x = a + (b - a) * Fraction(k, grid)
            if x in s:
                pts.add(x)
    return sorted(pts)


# ---------------------------------------------------------------- random grid opens


def random_open(rng: random.Random, space: Space, denom: int = 32, max_parts: int = 3) -> IntervalSet:
    out = IntervalSet(())
    for _ in range(rng.randint(0, max_parts)):
        a, b = space.segments[rng.randrange(len(space.segments))]
        ticks = sorted(rng.sample(range(denom + 1), 2))
        lo = a + (b - a) * Fraction(ticks[0], denom)
        hi = a + (b - a) * Fraction(ticks[1], denom)
        out = out | IntervalSet.of((lo, hi, lo == a, hi == b))
    return out


def random_member(rng: random.Random, space: Space, f, denom: int = 32) -> IntervalSet:
    """A random element of the filter, drawn from the rational grid."""
    X = space.whole
    extra = random_open(rng, space, denom)
    eps = Fraction(1, rng.choice((64, 128, 256, 1024)))
    if isinstance(f, Above):
        return f.U | extra
    if isinstance(f, Comax):
        return space.neighbourhood(space.complement(f.U), eps) | extra
    if isinstance(f, Dense):
        holes = [
            a + (b - a) * Fraction(rng.randrange(denom + 1), denom)
            for a, b in space.segments
            for _ in range(rng.randint(0, 3))
        ]
        return X - IntervalSet.points(holes)
    if isinstance(f, ContainsPoints):
        return space.neighbourhood(f.Y, eps) | extra
    if isinstance(f, SumOf):
        pair = _sum_above_comax(f)
        if pair is None:
            raise Unsupported(describe(f))
        U, W = pair
        return (U & space.neighbourhood(space.complement(W), eps)) | extra
    if isinstance(f, ProdOf):
        return X
    raise Unsupported(describe(f))


def validate_closed_form(space: Space, f, b: IntervalSet, rng: random.Random, probes: int = 200, denom: int = 32) -> dict:
    """Check D(b) from both sides.

    Soundness: random (x, s) with s in F and s n x <= b never leave D(b).
    Attainment: every sample point of D(b) sits in an explicit witness x with
    a filter element s such that s n x <= b.
    """
    d = saturate(space, f, b)
    sound = True
    hits = 0
    for _ in range(probes):
        s = random_member(rng, space, f, denom)
        if not contains(space, f, s):
            raise AssertionError(f"sampled {s} is not in {describe(f)}")
        x = random_open(rng, space, denom) | (d if rng.random() < 0.5 else IntervalSet(()))
        if (s & x) <= b:
            hits += 1
            if not x <= d:
                sound = False
    attained = True
    for p in sample_points(space, d, denom):
        x, s = witness_at(space, f, b, p)
        if not (p in x and contains(space, f, s) and (s & x) <= b and space.is_open(x)):
            attained = False
    return {"sound": sound, "attained": attained, "probes_hit": hits, "closed_form": str(d)}


# ---------------------------------------------------------------- deciders


def is_solid_interval(space: Space, f) -> tuple[bool, dict]:
    """Solidity with a certificate (finite subcover or refuting family)."""
    X = space.whole
    if isinstance(f, Comax):
        K = space.complement(f.U)
        return True, {
            "rule": "complement is a finite union of closed bounded intervals, hence compact",
            "complement_components": [str(c) for c in K.components()],
        }
    if isinstance(f, Above):
        compact = space.is_closed(f.U)
        cert = {"rule": "principal filter: solid iff U is compact, i.e. closed in the space"}
        if not compact:
            cert["refuting_family"] = [str(c) for c in exhausting_family(space, f.U, 6)]
        return compact, cert
    if isinstance(f, ContainsPoints):
        return True, {"rule": "a cover of a finite point set has a finite subcover"}
    if isinstance(f, Dense):
        fam = rational_cover(space, 40)
        union = IntervalSet(())
        for x in fam:
            union = union | x
        return False, {
            "rule": "intervals of radius L/2^(k+3) around an enumeration of rationals; "
            "the union is dense but every finite subunion has length < L",
            "prefix": [str(x) for x in fam[:8]],
            "prefix_length": str(union.length()),
            "space_length": str(X.length()),
            "prefix_dense": space.is_dense(union),
        }
    raise Unsupported(f"no solidity decider for {describe(f)}")


def exhausting_family(space: Space, U: IntervalSet, k: int) -> list[IntervalSet]:
    """Opens increasing to U, each with closure inside U's closure minus the open ends."""
    out = []
    for j in range(1, k + 1):
        piece = IntervalSet(())
        for lo, hi, lc, hc in U.parts:
            w = (hi - lo) / (2 ** (j + 1))
            piece = piece | IntervalSet.of((lo if lc else lo + w, hi if hc else hi - w, lc, hc))
        out.append(piece)
    return out


def rational_enumeration(space: Space, count: int) -> list[Fraction]:
    seen: list[Fraction] = []
    q = 1
    while len(seen) < count:
        for a, b in space.segments:
            for p in range(q + 1):
                x = a + (b - a) * Fraction(p, q)
                if x not in seen:
                    seen.append(x)
        q += 1
    return seen[:count]


def rational_cover(space: Space, count: int) -> list[IntervalSet]:
    L = space.whole.length()
    out = []
    for k, x in enumerate(rational_enumeration(space, count)):
        r = L / 2 ** (k + 3)
        out.append(IntervalSet.open(x - r, x + r) & space.whole)
    return out


def is_normal_interval(space: Space, f) -> tuple[bool, dict]:
    if isinstance(f, Comax):
        return True, {"rule": "regular space: separate the complement from points of U by rational gaps"}
    if isinstance(f, Above):
        if space.is_closed(f.U):
            return True, {"rule": "U clopen, so Above(U) = Comax(complement of U)"}
        d1 = saturate(space, SumOf((f, Comax(f.U))), IntervalSet(()))
        d2 = saturate(space, SumOf((f, Comax(f.U))), d1)
        return False, {
            "rule": "sum with the normal Comax(U) would be normal, hence 1-step, but it needs 2 steps",
            "D(empty)": str(d1),
            "D2(empty)": str(d2),
        }
    raise Unsupported(f"no normality decider for {describe(f)}")


def is_conormal_interval(space: Space, f) -> tuple[bool, dict]:
    if isinstance(f, Dense):
        return True, {"rule": "s = (x n y) u ext(x n y) is dense and s n x <= y"}
    if isinstance(f, Above):
        return True, {"rule": "s = U works for every pair"}
    if isinstance(f, Comax):
        if space.is_closed(f.U):
            return True, {"rule": "U closed: s = U^c u y works"}
        boundary = space.complement(f.U) & space.closure(f.U)
        p = boundary.parts[0][0]
        return False, {
            "m": str(f.U),
            "n": "{}",
            "rule": "m <= D(n) = U, but s contains the complement of U and the boundary point, so s meets m",
            "boundary_point": str(p),
        }
    raise Unsupported(f"no conormality decider for {describe(f)}")


def normal_witness(space: Space, f, s: IntervalSet, m: IntervalSet, family: list[IntervalSet]) -> list[tuple[IntervalSet, IntervalSet]]:
    """Decompose m for a normality instance of Comax(U) (or clopen Above(U)).

    Given s in F with s n m <= union(family), returns pairs (m'_j, s_j) with
    m <= union m'_j and s_j n m'_j <= union(family).
    """
    if isinstance(f, Above) and space.is_closed(f.U):
        f = Comax(space.complement(f.U))
    if not isinstance(f, Comax):
        raise Unsupported(describe(f))
    X = space.whole
    cover = IntervalSet(())
    for g in family:
        cover = cover | g
    if not contains(space, f, s) or not (s & m) <= cover:
        raise InputError("not a normality instance")
    pieces = [(m & s, X)]
    # the complement of s is compact and sits inside U: thicken each of its
    # components inside U, keeping closures in U
    K = space.complement(s)
    Uc = space.complement(f.U)
    for comp in K.components():
        lo, hi = comp.parts[0][0], comp.parts[0][1]
        r = min(_separating_radius(space, lo, Uc), _separating_radius(space, hi, Uc))
        x = IntervalSet.open(lo - r, hi + r) & X
        pieces.append((x & m, X - space.closure(x)))
    return pieces


def check_normal_witness(space: Space, f, m: IntervalSet, family, pieces) -> bool:
    cover = IntervalSet(())
    for g in family:
        cover = cover | g
    union = IntervalSet(())
    for mp, sj in pieces:
        if not contains(space, f, sj) or not (sj & mp) <= cover:
            return False
        union = union | mp
    return m <= union


def conormal_witness(space: Space, x: IntervalSet, y: IntervalSet) -> IntervalSet:
    """For x one-step below y under the dense filter: s with s n x <= y."""
    if not x <= regularize(space, y):
        raise InputError("x is not locally below y for the dense filter")
    xy = x & y
    return xy | space.exterior(xy)


def gnf_comax(space: Space, U: IntervalSet) -> Comax:
    """Greatest normal filter inside Comax(U): Comax(U) itself, which is normal."""
    return Comax(U)


def gnf_above(space: Space, U: IntervalSet) -> Comax:
    """Greatest normal filter inside Above(U): Comax(int(U^c)).

    Comax(W) sits inside Above(U) exactly when W misses U, and the largest
    such open W is int(U^c).
    """
    return Comax(space.interior(space.complement(U)))


def gnf_interval(space: Space, f):
    if isinstance(f, Comax):
        return gnf_comax(space, f.U)
    if isinstance(f, Above):
        return gnf_above(space, f.U)
    raise Unsupported(f"no gnf rule for {describe(f)}")


def containment_witness(space: Space, f, g) -> IntervalSet | None:
    """An open in f but not in g, tried over the natural candidates, or None."""
    X = space.whole
    cands = [X]
    for h in (f, g):
        if isinstance(h, (Above, ContainsPoints)):
            cands.append(h.U if isinstance(h, Above) else space.neighbourhood(h.Y, Fraction(1, 64)))
        if isinstance(h, Comax):
            K = space.complement(h.U)
            cands += [space.interior(K), space.neighbourhood(K, Fraction(1, 64)), X - K]
    for V in cands:
        if space.is_open(V) and contains(space, f, V) and not contains(space, g, V):
            return V
    return None


# ---------------------------------------------------------------- the two-step example


def two_step_counterexample(space: Space | None = None, a: IntervalSet | None = None) -> dict:
    """F_a + F_{perp a} on [0,1] with a = [0,1/2): empty ~ X in exactly two steps,
    and the compatible pair (class of empty, class of X) has no preimage."""
    space = space or Space.unit()
    X = space.whole
    a = a if a is not None else IntervalSet.of((0, Fraction(1, 2), True, False))
    empty = IntervalSet(())
    fa, fperp = Above(a), Comax(a)
    fsum = SumOf((fa, fperp))
    orbit = saturation_orbit(space, fsum, empty)
    steps = local_steps(space, fsum, X, empty)
    # class of empty in Q_{F_a} is the down-set of its maximum; class of X in
    # Q_{F_perp a} is {W : W u a = X} = {W : W >= a^c}
    max_empty = saturation_orbit(space, fa, empty)[-1]
    need = space.complement(a)
    gap = need - max_empty
    # the product filter: V >= a and V u a = X force V = X
    prod_trivial = _prod_is_trivial(space, ProdOf((fa, fperp)))
    # every open collapses in the sum localization once X ~ empty
    sum_trivial = steps is not None
    return {
        "a": str(a),
        "orbit_of_empty": [str(o) for o in orbit],
        "steps_empty_to_X": steps,
        "one_step": steps is not None and steps <= 1,
        "class_of_empty_under_F_a": f"W <= {max_empty}",
        "class_of_X_under_F_perp_a": f"W >= {need}",
        "incompatibility_points": str(gap),
        "has_preimage": gap.is_empty(),
        "product_filter_is_trivial": prod_trivial,
        "sum_localization_trivial": sum_trivial,
    }


def random_grid_corpus(space: Space, count: int, seed: int, denom: int = 32) -> list[IntervalSet]:
    rng = random.Random(seed)
    return [random_open(rng, space, denom, max_parts=4) for _ in range(count)]


def parse_open(space: Space, data) -> IntervalSet:
    s = IntervalSet.from_json(data)
    if not space.is_open(s):
        raise InputError(f"{s} is not open in the space")
    return s


def to_fraction(x) -> Fraction:
    return frac(x)
