"""Local preorder and localization of finite modules.

Everything runs through one operator, ``D_F(b) = join{x : s.x <= b for some s in F}``.
``a`` is one-step locally below ``b`` exactly when ``a <= D_F(b)``, because the
set of all admissible ``x`` is itself the largest witness family.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, lru_cache

from .mfilter import (
    DEFAULT_CAP,
    MFilter,
    enumerate_mfilters,
    filter_sum,
    generate_filter,
    product_of_filters,
    sum_of_filters,
)
from .order import Carrier, InputError, iter_bits
from .quantale import FiniteQModule, FiniteQuantale, self_module, validate_module, validate_quantale


class LocalizationError(RuntimeError):
    """A structural claim failed on a concrete instance."""


def as_module(m) -> FiniteQModule:
    if isinstance(m, FiniteQuantale):
        return self_module(m)
    if isinstance(m, FiniteQModule):
        return m
    raise InputError(f"expected a quantale or module, got {type(m).__name__}")


def _check_filter(mod: FiniteQModule, f: MFilter) -> None:
    if f.q != mod.q:
        raise InputError("filter lives on a different quantale than the module")


def saturate1(m, f: MFilter, b: int) -> int:
    """D_F(b): the join of every x pushed below b by some member of F."""
    mod = as_module(m)
    _check_filter(mod, f)
    act, leq = mod.action_table, mod.carrier.leq_matrix
    out = b
    j = mod.carrier.join_table
    for x in range(mod.size):
        if any(leq[act[s][x]][b] for s in iter_bits(f.members)):
            out = j[out][x]
    return out


@dataclass(frozen=True)
class SaturationOperator:
    module: FiniteQModule
    filter: MFilter
    table: tuple[int, ...]

    def __call__(self, b: int) -> int:
        return self.table[b]

    def iterate(self, b: int, k: int) -> int:
        for _ in range(k):
            b = self.table[b]
        return b

    def orbit(self, b: int) -> list[int]:
        """b, D(b), D^2(b), ... up to and including the first repeat-free fixpoint."""
        seq = [b]
        while True:
            nxt = self.table[seq[-1]]
            if nxt == seq[-1]:
                return seq
            seq.append(nxt)

    def closure(self, b: int) -> int:
        return self.orbit(b)[-1]

    def steps_to_fix(self, b: int) -> int:
        return len(self.orbit(b)) - 1


@lru_cache(maxsize=4096)
def _saturation_cached(mod: FiniteQModule, f: MFilter) -> SaturationOperator:
    return SaturationOperator(mod, f, tuple(saturate1(mod, f, b) for b in range(mod.size)))


def saturation(m, f: MFilter) -> SaturationOperator:
    mod = as_module(m)
    _check_filter(mod, f)
    return _saturation_cached(mod, f)


def local_leq(m, f: MFilter, a: int, b: int) -> int | None:
    """Least n with a <= D^n(b); None (unreachable) if no iterate dominates a."""
    d = saturation(m, f)
    leq = d.module.carrier.leq_matrix
    for n, y in enumerate(d.orbit(b)):
        if leq[a][y]:
            return n
    return None


def step_degree_at(m, f: MFilter, b: int) -> int:
    return saturation(m, f).steps_to_fix(b)


def step_degree(m, f: MFilter) -> int:
    d = saturation(m, f)
    return max(d.steps_to_fix(b) for b in range(d.module.size))


def is_one_step(m, f: MFilter) -> bool:
    return step_degree(m, f) <= 1


@dataclass
class LocalizationQuotient:
    module: FiniteQModule
    filter: MFilter
    class_rep: tuple[int, ...]
    classes: tuple[int, ...]  # representatives, in handle order
    quotient_module: FiniteQModule
    quotient_quantale: FiniteQuantale | None = None
    checks: dict = field(default_factory=dict)

    @cached_property
    def _index(self) -> dict[int, int]:
        return {r: i for i, r in enumerate(self.classes)}

    def project(self, x: int) -> int:
        """Class index of x."""
        return self._index[self.class_rep[x]]

    def members(self, i: int) -> list[int]:
        r = self.classes[i]
        return [x for x in range(self.module.size) if self.class_rep[x] == r]

    @property
    def size(self) -> int:
        return len(self.classes)

    def class_labels(self) -> list[list[str]]:
        names = self.module.carrier.names
        return [[names[x] for x in self.members(i)] for i in range(self.size)]


def localize(m, f: MFilter, validate: bool = True) -> LocalizationQuotient:
    """Quotient by mutual local comparability; classes are named by their maxima."""
    mod = as_module(m)
    d = saturation(mod, f)
    rep = tuple(d.closure(x) for x in range(mod.size))
    classes = tuple(sorted(set(rep)))
    idx = {r: i for i, r in enumerate(classes)}
    mj = mod.carrier.join_table
    join = [[idx[rep[mj[a][b]]] for b in classes] for a in classes]
    names = [mod.carrier.names[r] for r in classes]
    carrier = Carrier.from_table(names, join, idx[rep[mod.carrier.top]])
    action = tuple(tuple(idx[rep[mod.action_table[s][r]]] for r in classes) for s in range(mod.q.size))
    qmod = FiniteQModule(mod.q, carrier, action)
    quotient_q = None
    if mod.is_self:
        qm = mod.q.mult_table
        mult = tuple(tuple(idx[rep[qm[a][b]]] for b in classes) for a in classes)
        quotient_q = FiniteQuantale(carrier, mult)
    out = LocalizationQuotient(mod, f, rep, classes, qmod, quotient_q)
    if validate:
        out.checks = check_quotient(out)
        if not all(out.checks.values()):
            bad = [k for k, v in out.checks.items() if not v]
            raise LocalizationError(f"localization failed structural checks: {bad}")
    return out


def check_quotient(lq: LocalizationQuotient) -> dict[str, bool]:
    """Well-definedness of the induced tables and validity of the quotient."""
    mod, rep = lq.module, lq.class_rep
    mj, act = mod.carrier.join_table, mod.action_table
    n = mod.size
    leq = mod.carrier.leq_matrix
    checks = {
        "rep-idempotent": all(rep[rep[x]] == rep[x] for x in range(n)),
        "rep-inflationary": all(leq[x][rep[x]] for x in range(n)),
        "rep-monotone": all(leq[rep[x]][rep[y]] for x in range(n) for y in range(n) if leq[x][y]),
        "join-well-defined": all(
            rep[mj[x][y]] == rep[mj[rep[x]][rep[y]]] for x in range(n) for y in range(n)
        ),
        "action-well-defined": all(
            rep[act[s][x]] == rep[act[s][rep[x]]] for s in range(mod.q.size) for x in range(n)
        ),
        "module-valid": validate_module(lq.quotient_module).ok,
    }
    if lq.quotient_quantale is not None:
        qm = mod.q.mult_table
        checks["mult-well-defined"] = all(
            rep[qm[x][y]] == rep[qm[rep[x]][rep[y]]] for x in range(n) for y in range(n)
        )
        checks["quantale-valid"] = validate_quantale(lq.quotient_quantale).ok
    return checks


def localization_map(m, f: MFilter, g: MFilter) -> tuple[int, ...]:
    """The induced map M_f -> M_g on class indices (requires f inside g)."""
    if not f <= g:
        raise InputError("localization_map needs the first filter inside the second")
    lf, lg = localize(m, f), localize(m, g)
    image: dict[int, int] = {}
    for x in range(lf.module.size):
        i, j = lf.project(x), lg.project(x)
        if image.setdefault(i, j) != j:
            raise LocalizationError(f"class map not well defined at element {x}")
    out = tuple(image[i] for i in range(lf.size))
    qf, qg = lf.quotient_module, lg.quotient_module
    for i in range(lf.size):
        for k in range(lf.size):
            if out[qf.join(i, k)] != qg.join(out[i], out[k]):
                raise LocalizationError("class map does not preserve joins")
        for s in range(qf.q.size):
            if out[qf.act(s, i)] != qg.act(s, out[i]):
                raise LocalizationError("class map does not preserve the action")
    return out


def compose_localizations(m, f: MFilter, g: MFilter) -> dict:
    """Explicit bijection M_{f+g} -> (M_f)_g, checked against both structures."""
    mod = as_module(m)
    left = localize(mod, filter_sum(f, g))
    mid = localize(mod, f)
    right = localize(mid.quotient_module, g)
    bij: dict[int, int] = {}
    for x in range(mod.size):
        i, j = left.project(x), right.project(mid.project(x))
        if bij.setdefault(i, j) != j:
            raise LocalizationError(f"M_(F+G) -> (M_F)_G is not well defined at element {x}")
    if sorted(bij.values()) != list(range(right.size)) or len(bij) != left.size:
        raise LocalizationError("M_(F+G) and (M_F)_G are not in bijection")
    lm, rm = left.quotient_module, right.quotient_module
    for i in range(left.size):
        for k in range(left.size):
            if bij[lm.join(i, k)] != rm.join(bij[i], bij[k]):
                raise LocalizationError("bijection does not preserve joins")
        for s in range(mod.q.size):
            if bij[lm.act(s, i)] != rm.act(s, bij[i]):
                raise LocalizationError("bijection does not preserve the action")
    return {
        "size": left.size,
        "map": [bij[i] for i in range(left.size)],
        "left_classes": left.class_labels(),
        "right_classes": [[mid.quotient_module.carrier.names[c] for c in right.members(j)] for j in range(right.size)],
    }


# ---------------------------------------------------------------- normal / conormal


def normality_counterexample(m, f: MFilter) -> tuple | None:
    """Search the definition of normality for a failing instance.

    For s in F and x with s.x below the join v of some family, there must be a
    witness family (x'_j, s_j) with x <= join x'_j and s_j.x'_j <= v. The
    largest candidate family collects every admissible pair, so it suffices to
    test that one. Families are enumerated by their join value.
    """
    mod = as_module(m)
    act, leq, j = mod.action_table, mod.carrier.leq_matrix, mod.carrier.join_table
    fs = list(iter_bits(f.members))
    for v in range(mod.size):
        admissible = [y for y in range(mod.size) if any(leq[act[t][y]][v] for t in fs)]
        reach = admissible[0] if admissible else None
        for y in admissible[1:]:
            reach = j[reach][y]
        for s in fs:
            for x in range(mod.size):
                if leq[act[s][x]][v] and (reach is None or not leq[x][reach]):
                    return (s, x, v)
    return None


def conormality_counterexample(m, f: MFilter) -> tuple | None:
    """Find (x, y) with x one-step below y but no single s in F with s.x <= y."""
    mod = as_module(m)
    d = saturation(mod, f)
    act, leq = mod.action_table, mod.carrier.leq_matrix
    fs = list(iter_bits(f.members))
    for y in range(mod.size):
        for x in range(mod.size):
            if leq[x][d(y)] and not any(leq[act[s][x]][y] for s in fs):
                return (x, y)
    return None


def is_normal(m, f: MFilter) -> bool:
    return normality_counterexample(m, f) is None


def is_conormal(m, f: MFilter) -> bool:
    return conormality_counterexample(m, f) is None


def is_binormal(m, f: MFilter) -> bool:
    return is_normal(m, f) and is_conormal(m, f)


def gnf(m, f: MFilter, cap: int = DEFAULT_CAP) -> MFilter:
    """Sum of all normal m-filters contained in f."""
    normals = [g for g in enumerate_mfilters(f.q, cap) if g <= f and is_normal(m, g)]
    return sum_of_filters(normals)  # {1} is always normal, so the list is nonempty


def lcf(m, f: MFilter, cap: int = DEFAULT_CAP) -> MFilter:
    """Intersection of all conormal m-filters containing f."""
    conormals = [g for g in enumerate_mfilters(f.q, cap) if f <= g and is_conormal(m, g)]
    return product_of_filters(conormals)  # the whole quantale is conormal


# ---------------------------------------------------------------- ring cross-check


def xS_crosscheck(n: int, S) -> bool:
    return not xS_discrepancies(n, S)


def xS_discrepancies(n: int, S) -> list[dict]:
    """Compare the ring-side saturation x_S with D_F(x) for F generated by {(s)}.

    ``S`` is closed under multiplication mod n (and given 1) before use.
    """
    from math import gcd

    from . import rings
    from .quantale import build_ideal_quantale

    q = build_ideal_quantale(n)
    h = {int(name.strip("()")): i for i, name in enumerate(q.names)}
    closed = rings.multiplicative_closure(n, S)
    f = generate_filter(q, [h[gcd(s, n)] for s in closed])
    d = saturation(q, f)
    bad = []
    for dv, i in h.items():
        ring_side = rings.saturate_ideal(n, dv, closed)
        quantale_side = int(q.names[d(i)].strip("()"))
        if ring_side != quantale_side:
            bad.append({"ideal": f"({dv})", "ring": f"({ring_side})", "quantale": f"({quantale_side})"})
    return bad
