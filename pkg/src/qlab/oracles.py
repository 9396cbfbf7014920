"""Definitional brute-force oracles, kept apart from the fast decision procedures."""

from __future__ import annotations

from .mfilter import MFilter
from .order import iter_bits
from .quantale import FiniteQModule


def one_step_definitional(mod: FiniteQModule, f: MFilter, a: int, b: int) -> tuple | None:
    """Search for a witness family for ``a`` one-step below ``b``.

    Walks every nonempty subset {a_i} of the carrier with a <= join(a_i) and,
    for it, every per-element choice of s_i in F (depth-first, abandoning a
    branch as soon as s_i.a_i <= b fails). Returns the first witness as a
    tuple of (a_i, s_i) pairs, or None.
    """
    n = mod.size
    fs = list(iter_bits(f.members))
    leq, act, c = mod.carrier.leq_matrix, mod.action_table, mod.carrier
    for subset in range(1, 1 << n):
        if not leq[a][c.join_mask(subset)]:
            continue
        items = list(iter_bits(subset))
        chosen: list[tuple[int, int]] = []

        def choose(k: int) -> bool:
            if k == len(items):
                return True
            x = items[k]
            for s in fs:
                if leq[act[s][x]][b]:
                    chosen.append((x, s))
                    if choose(k + 1):
                        return True
                    chosen.pop()
            return False

        if choose(0):
            return tuple(chosen)
    return None


def n_step_definitional(mod: FiniteQModule, f: MFilter, a: int, b: int, n: int) -> bool:
    """a locally below b in n steps: a chain a = x_n, ..., x_0 = b of one-step links."""
    if n == 0:
        return mod.leq(a, b)
    reach = {b}
    for _ in range(n):
        reach = {x for x in range(mod.size) for y in reach if one_step_definitional(mod, f, x, y) is not None}
    return a in reach
