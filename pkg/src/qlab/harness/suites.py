"""Proposition suites run over a corpus of finite quantales.

Each proposition is a function ``q -> witness or None`` (None means the
instance passes). Failing instances are shrunk by greedy element deletion
through subquantales before being reported.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from .. import coherence as coh
from ..localization import (
    LocalizationError,
    compose_localizations,
    gnf,
    is_conormal,
    is_normal,
    is_one_step,
    lcf,
    local_leq,
    localization_map,
    localize,
    saturation,
)
from ..mfilter import (
    check_mfilter,
    codense_filter,
    comaximal_filter,
    enumerate_mfilters,
    filter_product,
    filter_sum,
    is_solid,
    mf_quantale,
    minimal_filter,
    product_of_filters,
    trivial_filter,
)
from ..oracles import one_step_definitional
from ..order import InputError, is_compact_lattice, is_noetherian, iter_bits, validate_carrier
from ..quantale import (
    FiniteQuantale,
    build_ideal_quantale,
    is_idempotent,
    maximal_elements_below_top,
    prime_elements,
    self_module,
    subquantale,
    validate_quantale,
)
from . import applications
from .corpus import Corpus, Instance

Prop = Callable[[FiniteQuantale], object]


@dataclass
class CheckResult:
    suite: str
    prop: str
    instance: str
    ok: bool
    witness: str = ""
    minimal: str = ""

    def to_json(self) -> dict:
        out = {"suite": self.suite, "prop": self.prop, "instance": self.instance, "ok": self.ok}
        if not self.ok:
            out["witness"] = self.witness
            out["minimal"] = self.minimal
        return out


@dataclass
class SuiteReport:
    name: str
    seed: int
    results: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.ok for r in self.results)

    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.ok]

    def to_json(self) -> dict:
        props: dict[str, list[int]] = {}
        for r in self.results:
            tally = props.setdefault(r.prop, [0, 0])
            tally[0 if r.ok else 1] += 1
        return {
            "suite": self.name,
            "seed": self.seed,
            "passed": self.passed,
            "checks": len(self.results),
            "props": {k: {"pass": v[0], "fail": v[1]} for k, v in sorted(props.items())},
            "failures": [r.to_json() for r in self.failures()],
        }


# ---------------------------------------------------------------- helpers


@lru_cache(maxsize=256)
def _filters(q: FiniteQuantale):
    return tuple(enumerate_mfilters(q))


def _lab(q: FiniteQuantale, *xs: int) -> str:
    return "(" + ", ".join(q.names[x] for x in xs) + ")"


def _flab(f) -> str:
    return "{" + ",".join(f.labels()) + "}"


def _pairs(q: FiniteQuantale):
    fs = _filters(q)
    return [(f, g) for i, f in enumerate(fs) for g in fs[i:]]


# ---------------------------------------------------------------- core-axioms


def p_carrier(q):
    rep = validate_carrier(q.carrier)
    return None if rep.ok else str(rep.violations[0].to_json())


def p_quantale(q):
    rep = validate_quantale(q)
    return None if rep.ok else str(rep.violations[0].to_json())


def p_monotone_product(q):
    E = q.elements()
    for a, a2, b, b2 in itertools.product(E, repeat=4):
        if q.leq(a, a2) and q.leq(b, b2) and not q.leq(q.mult(a, b), q.mult(a2, b2)):
            return _lab(q, a, a2, b, b2)
    return None


def p_meet_glb(q):
    c = q.carrier
    for a in q.elements():
        for b in q.elements():
            m = c.meet(a, b)
            if m is None:
                continue
            for x in q.elements():
                if (c.leq(x, a) and c.leq(x, b)) != c.leq(x, m):
                    return _lab(q, a, b, x)
    return None


def p_comaximal_lemma(q):
    for a, b, c in itertools.product(q.elements(), repeat=3):
        if q.join(a, b) == q.top and q.join(a, c) == q.top and q.join(a, q.mult(b, c)) != q.top:
            return _lab(q, a, b, c)
    return None


def p_power_corollary(q):
    for k in (1, 2, 3):
        for fam in itertools.combinations(q.elements(), k):
            if q.carrier.join_set(fam) != q.top:
                continue
            for m in range(1, 5):
                if q.carrier.join_set([q.power(a, m) for a in fam]) != q.top:
                    return f"{_lab(q, *fam)} m={m}"
    return None


def p_finite_noetherian(q):
    return None if is_noetherian(q.carrier) and is_compact_lattice(q.carrier) else "finite carrier not Noetherian"


def p_idempotent_meet(q):
    try:
        is_idempotent(q)
    except AssertionError as exc:
        return str(exc)
    return None


def p_prime_codense(q):
    for p in prime_elements(q):
        expected = sum(1 << x for x in q.elements() if not q.leq(x, p))
        if codense_filter(q, p).members != expected:
            return _lab(q, p)
    return None


# ---------------------------------------------------------------- filters


def p_filters_valid(q):
    for f in _filters(q):
        err = check_mfilter(q, f.members)
        if err:
            return f"{_flab(f)}: {err}"
    return None


def p_minimal_product(q):
    for f, g in itertools.product(q.elements(), repeat=2):
        if filter_product(minimal_filter(q, f), minimal_filter(q, g)) != minimal_filter(q, q.join(f, g)):
            return _lab(q, f, g)
    return None


def p_minimal_sum(q):
    for f, g in itertools.product(q.elements(), repeat=2):
        if filter_sum(minimal_filter(q, f), minimal_filter(q, g)) != minimal_filter(q, q.mult(f, g)):
            return _lab(q, f, g)
    return None


def p_sum_is_intersection(q):
    for f, g in _pairs(q):
        joins = 0
        for a in iter_bits(f.members):
            for b in iter_bits(g.members):
                joins |= 1 << q.join(a, b)
        if joins != f.members & g.members:
            return f"{_flab(f)} {_flab(g)}"
    return None


def p_mf_quantale(q):
    mq, fs = mf_quantale(q)
    if not validate_quantale(mq).ok:
        return "mF(Q) fails the quantale axioms"
    if not is_idempotent(mq):
        return "mF(Q) is not idempotent"
    least = fs.index(trivial_filter(q))
    if any(not mq.leq(least, x) for x in mq.elements()):
        return "{1} is not the least m-filter"
    return None


def p_solid(q):
    for f in _filters(q):
        if not is_solid(f):
            return _flab(f)
    return None


def p_prime_avoidance(q):
    primes = prime_elements(q)
    for f in _filters(q):
        for x in q.elements():
            if x in f:
                continue
            if not any(q.leq(x, p) and p not in f for p in primes):
                return f"{_flab(f)} {q.names[x]}"
    return None


# ---------------------------------------------------------------- localization


def p_oracle_one_step(q):
    mod = self_module(q)
    for f in _filters(q):
        d = saturation(mod, f)
        for a in q.elements():
            for b in q.elements():
                if (one_step_definitional(mod, f, a, b) is not None) != q.leq(a, d(b)):
                    return f"{_flab(f)} {_lab(q, a, b)}"
    return None


def p_quotient_valid(q):
    for f in _filters(q):
        try:
            localize(q, f)
        except LocalizationError as exc:
            return f"{_flab(f)}: {exc}"
    return None


def p_one_step(q):
    for f in _filters(q):
        if not is_one_step(q, f):
            return _flab(f)
    return None


def p_trivial_identity(q):
    return None if localize(q, trivial_filter(q)).size == q.size else "M_{1} differs from M"


def p_wedge(q):
    c = q.carrier
    for f in _filters(q):
        lq = localize(q, f)
        qc = lq.quotient_module.carrier
        for a in q.elements():
            for b in q.elements():
                m = c.meet(a, b)
                if m is None:
                    continue
                if qc.meet(lq.project(a), lq.project(b)) != lq.project(m):
                    return f"{_flab(f)} {_lab(q, a, b)}"
    return None


def p_localization_map(q):
    for f, g in _pairs(q):
        for lo, hi in ((f, g), (g, f)):
            if lo <= hi:
                try:
                    localization_map(q, lo, hi)
                except LocalizationError as exc:
                    return f"{_flab(lo)} {_flab(hi)}: {exc}"
    return None


def p_compose(q):
    for f, g in _pairs(q):
        try:
            compose_localizations(q, f, g)
            compose_localizations(q, g, f)
        except LocalizationError as exc:
            return f"{_flab(f)} {_flab(g)}: {exc}"
    return None


# ---------------------------------------------------------------- shrink-suspension


def _budget(seed):
    return {"sample_budget": 300, "seed": seed}


def p_collapse(q, seed=0):
    ok, bad = coh.suspension_collapse_check(q.carrier, **_budget(seed))
    return None if ok else f"subset mask {bad}"


def p_adjunction(q, seed=0):
    return None if coh.adjunction_check(q.carrier, **_budget(seed)) else "adjunction fails"


def p_meet_theorem(q):
    return None if coh.meet_theorem_check(q.carrier) else "meet theorem fails"


def p_shrinkable(q, seed=0):
    return None if coh.is_shrinkable(q.carrier, **_budget(seed)) else "not shrinkable"


def merge_bound_violation(q, f, g):
    """First (a, b) breaking steps_FG <= max(1, steps_F) + max(1, steps_G) - 1."""
    fg = filter_product(f, g)
    for a in q.elements():
        for b in q.elements():
            n, m = local_leq(q, f, a, b), local_leq(q, g, a, b)
            if n is None or m is None:
                continue
            k = local_leq(q, fg, a, b)
            if k is None or k > max(1, n) + max(1, m) - 1:
                return (a, b, n, m, k)
    return None


def p_filter_merge(q):
    for f, g in _pairs(q):
        bad = merge_bound_violation(q, f, g)
        if bad:
            a, b, n, m, k = bad
            return f"{_flab(f)} {_flab(g)} {_lab(q, a, b)} steps {n},{m} -> {k}"
    return None


# ---------------------------------------------------------------- gluing


def gluing_check(q, fs) -> str | None:
    """Injectivity of M_{prod F} -> prod M_{F_k} and image = pairwise compatible tuples."""
    whole = localize(q, product_of_filters(fs))
    locs = [localize(q, f) for f in fs]
    image = {tuple(lq.project(r) for lq in locs) for r in whole.classes}
    if len(image) != whole.size:
        return "not injective"
    pair_locs = {(i, j): localize(q, filter_sum(fs[i], fs[j])) for i, j in itertools.combinations(range(len(fs)), 2)}
    compatible = set()
    for t in itertools.product(*(range(lq.size) for lq in locs)):
        if all(
            lij.project(locs[i].classes[t[i]]) == lij.project(locs[j].classes[t[j]])
            for (i, j), lij in pair_locs.items()
        ):
            compatible.add(t)
    if compatible != image:
        return f"image {len(image)} vs compatible {len(compatible)}"
    return None


def p_gluing_pairs(q):
    for f, g in _pairs(q):
        bad = gluing_check(q, [f, g])
        if bad:
            return f"{_flab(f)} {_flab(g)}: {bad}"
    return None


def p_gluing_triples(q):
    fs = _filters(q)
    for trip in itertools.combinations_with_replacement(fs, 3):
        bad = gluing_check(q, list(trip))
        if bad:
            return " ".join(_flab(f) for f in trip) + f": {bad}"
    return None


def p_maximal_merge(q):
    maxes = maximal_elements_below_top(q)
    if not maxes:
        return None
    locs = [localize(q, codense_filter(q, m)) for m in maxes]
    images = {tuple(lq.project(x) for lq in locs) for x in q.elements()}
    return None if len(images) == q.size else "Q -> prod Q_(not| m) is not injective"


def crt_instance() -> dict:
    q = build_ideal_quantale(12)
    f3 = minimal_filter(q, q.carrier.index("(3)"))
    f2 = minimal_filter(q, q.carrier.index("(2)"))
    l3, l2 = localize(q, f3), localize(q, f2)
    image = {(l3.project(x), l2.project(x)) for x in q.elements()}
    return {"sizes": [l3.size, l2.size], "image": len(image), "bijective": len(image) == q.size == l3.size * l2.size,
            "gluing": gluing_check(q, [f3, f2])}


# ---------------------------------------------------------------- coherence


def p_coherence(q, seed=0):
    rep = coh.coherence_report(q, **_budget(seed))
    bad = [k for k, v in rep.items() if v is False]
    if len(rep["compact_elements"]) != q.size:
        bad.append("compact_elements")
    return ", ".join(bad) or None


def p_selective_base(q):
    return None if coh.selective_base_check(q, list(q.elements())) else "selective base fails"


# ---------------------------------------------------------------- normal-conormal


def p_binormal(q):
    for f in _filters(q):
        if not (is_normal(q, f) and is_conormal(q, f)):
            return _flab(f)
    return None


def p_gnf_lcf(q):
    for f in _filters(q):
        if gnf(q, f) != f or lcf(q, f) != f:
            return _flab(f)
    return None


def p_normal_sum(q):
    for f, g in _pairs(q):
        s = filter_sum(f, g)
        if is_normal(q, f) and is_normal(q, g) and not is_normal(q, s):
            return f"normal {_flab(f)} {_flab(g)}"
        if is_conormal(q, f) and is_conormal(q, g) and not is_conormal(q, s):
            return f"conormal {_flab(f)} {_flab(g)}"
    return None


def p_normal_one_step(q):
    for f in _filters(q):
        if is_normal(q, f) and not is_one_step(q, f):
            return _flab(f)
    return None


def p_comax_codense_binormal(q):
    for a in q.elements():
        for f in (comaximal_filter(q, a), codense_filter(q, a)):
            if not (is_normal(q, f) and is_conormal(q, f)):
                return f"{_flab(f)} at {q.names[a]}"
    return None


# ---------------------------------------------------------------- registry

SIZE_ALL = 10**9

# suite -> list of (prop name, function, max instance size, takes seed)
SUITES: dict[str, list[tuple[str, Callable, int, bool]]] = {
    "core-axioms": [
        ("carrier-axioms", p_carrier, SIZE_ALL, False),
        ("quantale-axioms", p_quantale, SIZE_ALL, False),
        ("monotone-product", p_monotone_product, 12, False),
        ("meet-is-glb", p_meet_glb, SIZE_ALL, False),
        ("comaximal-lemma", p_comaximal_lemma, SIZE_ALL, False),
        ("power-corollary", p_power_corollary, SIZE_ALL, False),
        ("finite-noetherian", p_finite_noetherian, SIZE_ALL, False),
        ("idempotent-is-meet", p_idempotent_meet, SIZE_ALL, False),
        ("prime-codense", p_prime_codense, SIZE_ALL, False),
    ],
    "filters": [
        ("filters-valid", p_filters_valid, SIZE_ALL, False),
        ("minimal-filter-product", p_minimal_product, SIZE_ALL, False),
        ("minimal-filter-sum", p_minimal_sum, SIZE_ALL, False),
        ("sum-is-intersection", p_sum_is_intersection, SIZE_ALL, False),
        ("mF-idempotent-quantale", p_mf_quantale, SIZE_ALL, False),
        ("solid", p_solid, SIZE_ALL, False),
        ("prime-avoidance", p_prime_avoidance, SIZE_ALL, False),
    ],
    "localization": [
        ("oracle-one-step", p_oracle_one_step, 4, False),
        ("quotient-valid", p_quotient_valid, SIZE_ALL, False),
        ("one-step", p_one_step, SIZE_ALL, False),
        ("trivial-filter-identity", p_trivial_identity, SIZE_ALL, False),
        ("wedge-preservation", p_wedge, SIZE_ALL, False),
        ("localization-map", p_localization_map, 12, False),
        ("compose-localizations", p_compose, 8, False),
    ],
    "shrink-suspension": [
        ("suspension-collapse", p_collapse, SIZE_ALL, True),
        ("adjunction", p_adjunction, 12, True),
        ("meet-theorem", p_meet_theorem, 6, False),
        ("shrinkable", p_shrinkable, 12, True),
        ("filter-merge", p_filter_merge, 12, False),
    ],
    "gluing": [
        ("gluing-pairs", p_gluing_pairs, 12, False),
        ("gluing-triples", p_gluing_triples, 4, False),
        ("maximal-merge", p_maximal_merge, SIZE_ALL, False),
    ],
    "coherence": [
        ("coherence-checks", p_coherence, 12, True),
        ("selective-base", p_selective_base, SIZE_ALL, False),
    ],
    "normal-conormal": [
        ("binormal", p_binormal, SIZE_ALL, False),
        ("gnf-lcf", p_gnf_lcf, 12, False),
        ("normal-conormal-sums", p_normal_sum, 12, False),
        ("normal-one-step", p_normal_one_step, SIZE_ALL, False),
        ("comax-codense-binormal", p_comax_codense_binormal, SIZE_ALL, False),
    ],
    "applications": [],
}

SUITE_NAMES = tuple(SUITES)


def minimize(q: FiniteQuantale, fails: Callable[[FiniteQuantale], bool]) -> FiniteQuantale:
    """Greedy element deletion while the failure persists."""
    current = q
    changed = True
    while changed:
        changed = False
        for x in current.elements():
            if x == current.top:
                continue
            sub = subquantale(current, [y for y in current.elements() if y != x])
            if sub is None or not validate_quantale(sub).ok:
                continue
            try:
                still = fails(sub)
            except Exception:  # a smaller instance that crashes the check is not a cleaner witness
                still = False
            if still:
                current, changed = sub, True
                break
    return current


def _instances(corpus) -> list[Instance]:
    if isinstance(corpus, Corpus):
        return corpus.all()
    return list(corpus)


def _application_results(name: str, seed: int) -> list[CheckResult]:
    out = []

    def add(prop, inst, ok, witness=""):
        out.append(CheckResult(name, prop, inst, bool(ok), witness, witness))

    for n in range(2, 61):
        for b in applications.radical_ideals(n):
            r = applications.algebraic_baire(n, b)
            add("algebraic-baire", f"Z{n}/({b})", r["found"])
    for n in range(2, 61):
        primes = [p for p in range(2, n + 1) if n % p == 0 and all(p % d for d in range(2, p))]
        gens = []
        for p in primes:
            k = n
            while k % p == 0:
                k //= p
            gens.append(k)
        if len(gens) < 2:
            gens = [1]
        r = applications.spec_injectivity(n, gens)
        add("spec-injectivity", f"Z{n}{gens}", r["injective"] and r["ring_injective"] and r["filter_product_trivial"])
    for k in range(1, 4):
        for r_ in range(k + 1):
            for Y in itertools.combinations(range(1, k + 1), r_):
                rep = applications.subset_filter_check(k, Y)
                add("subset-filter", f"D{k}/{list(Y)}", all(v for key, v in rep.items() if key != "classes"))
    from .corpus import all_topologies

    for k in range(1, 5):
        for t, fam in enumerate(all_topologies(k)):
            bad = applications.codense_description_check(list(range(1, k + 1)), fam)
            add("codense-description", f"O{k}.{t}", not bad, ",".join(bad))
    return out


def run_suite(name: str, corpus, seed: int = 0) -> SuiteReport:
    if name not in SUITES:
        raise InputError(f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)} or all")
    report = SuiteReport(name, seed)
    insts = sorted(_instances(corpus), key=lambda i: i.ident)
    for prop, fn, max_size, seeded in SUITES[name]:
        check = (lambda q, fn=fn: fn(q, seed=seed)) if seeded else fn
        for inst in insts:
            if inst.q.size > max_size:
                continue
            witness = check(inst.q)
            if witness is None:
                report.results.append(CheckResult(name, prop, inst.ident, True))
                continue
            small = minimize(inst.q, lambda s: check(s) is not None)
            report.results.append(
                CheckResult(name, prop, inst.ident, False, str(witness), f"{small.size} elements: {list(small.names)}")
            )
    if name == "gluing":
        crt = crt_instance()
        report.results.append(CheckResult(name, "crt-bijection", "Z12", crt["bijective"] and crt["gluing"] is None,
                                          str(crt)))
    if name == "applications":
        report.results.extend(_application_results(name, seed))
    return report


def run_all(corpus, seed: int = 0) -> list[SuiteReport]:
    return [run_suite(n, corpus, seed) for n in SUITE_NAMES]
