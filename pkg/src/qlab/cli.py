"""Command-line front end: ``qlab <command> ...``.

Exit codes: 0 success, 1 a check failed, 2 bad input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from pathlib import Path

from . import coherence as coh
from .harness.applications import algebraic_baire, algebraic_baire_sweep
from .harness.corpus import build_corpus
from .harness.suites import SUITE_NAMES, run_suite
from .interval import quantale as iq
from .interval.baire import baire_witness, parse_closed_set
from .interval.sets import IntervalSet, Space
from .io import ValidationFailed, dumps, load_module, load_quantale, read_json
from .localization import is_one_step, localize, step_degree
from .mfilter import DEFAULT_CAP, CapExceeded, enumerate_mfilters, is_solid, parse_filter_spec
from .order import InputError
from .ordinal import (
    OMEGA2,
    ExceedsBound,
    integer,
    nonlocalizability_report,
    ord_min_steps,
    ordinal,
    saturation_certificate,
)
from .quantale import idempotence_witness, is_idempotent, maximal_elements_below_top, prime_elements


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _digest(path) -> str:
    try:
        return "sha256:" + hashlib.sha256(Path(path).read_bytes()).hexdigest()[:16]
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


# ---------------------------------------------------------------- commands


def cmd_analyze(args) -> tuple[dict, bool]:
    inputs = {"quantale": _digest(args.quantale)}
    q = load_quantale(args.quantale)
    out = {
        "valid": True,
        "size": q.size,
        "elements": list(q.names),
        "idempotent": is_idempotent(q),
        "primes": [q.names[p] for p in prime_elements(q)],
        "maximal": [q.names[m] for m in maximal_elements_below_top(q)],
    }
    w = idempotence_witness(q)
    if w is not None:
        out["idempotence_witness"] = f"{q.names[w]}*{q.names[w]} = {q.names[q.mult(w, w)]}"
    try:
        out["mfilters"] = len(enumerate_mfilters(q, args.cap))
    except CapExceeded as exc:
        out["mfilters"] = f"refused: {exc}"
    out.update(coh.coherence_report(q, sample_budget=args.budget, seed=args.seed))
    if args.module:
        inputs["module"] = _digest(args.module)
        mod = load_module(q, args.module)
        out["module"] = {"valid": True, "size": mod.size, "elements": list(mod.carrier.names)}
    return {"inputs": inputs, "result": out}, True


def cmd_filters(args) -> tuple[dict, bool]:
    q = load_quantale(args.quantale)
    inputs = {"quantale": _digest(args.quantale)}
    if args.spec:
        f = parse_filter_spec(q, args.spec)
        res = dict(f.to_json())
        res.update({"spec": args.spec, "solid": is_solid(f), "one_step": is_one_step(q, f)})
        return {"inputs": inputs, "result": res}, True
    try:
        fs = enumerate_mfilters(q, args.cap)
    except CapExceeded as exc:
        raise InputError(str(exc)) from exc
    return {"inputs": inputs, "result": {"count": len(fs), "filters": [f.to_json() for f in fs]}}, True


def cmd_localize(args) -> tuple[dict, bool]:
    q = load_quantale(args.quantale)
    inputs = {"quantale": _digest(args.quantale)}
    target = q
    if args.module:
        inputs["module"] = _digest(args.module)
        target = load_module(q, args.module)
    f = parse_filter_spec(q, args.filter)
    lq = localize(target, f)
    res = {
        "filter": f.to_json(),
        "classes": lq.class_labels(),
        "size": lq.size,
        "step_degree": step_degree(target, f),
        "checks": lq.checks,
    }
    if lq.quotient_quantale is not None:
        res["quotient"] = lq.quotient_quantale.to_json()
    return {"inputs": inputs, "result": res}, all(lq.checks.values())


def cmd_suspend(args) -> tuple[dict, bool]:
    q = load_quantale(args.quantale)
    c = q.carrier
    ok, bad = coh.suspension_collapse_check(c, args.budget, args.seed)
    res = {
        "collapse": ok,
        "adjunction": coh.adjunction_check(c, args.budget, args.seed),
        "shrinkable": coh.is_shrinkable(c, args.budget, args.seed),
        "compact_elements": [c.names[x] for x in coh.compact_elements(c, args.budget, args.seed)],
        "exhaustive": c.size <= coh.EXHAUSTIVE_LIMIT,
    }
    if bad is not None:
        res["collapse_failure"] = [c.names[x] for x in range(c.size) if bad >> x & 1]
    if c.size <= 6:
        res["meet_theorem"] = coh.meet_theorem_check(c)
    passed = all(v for k, v in res.items() if isinstance(v, bool) and k != "exhaustive")
    return {"inputs": {"quantale": _digest(args.quantale)}, "result": res}, passed


def cmd_verify(args) -> tuple[dict, bool]:
    corpus = build_corpus(max_size=args.max_size, samples=args.samples, seed=args.seed, random_max=args.random_max)
    names = SUITE_NAMES if args.suite == "all" else (args.suite,)
    if args.suite != "all" and args.suite not in SUITE_NAMES:
        raise InputError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITE_NAMES)} or all")
    reports = [run_suite(n, corpus, args.seed).to_json() for n in names]
    res = {
        "corpus": {"curated": len(corpus.curated), "exhaustive": len(corpus.exhaustive), "random": len(corpus.randomized)},
        "suites": reports,
        "passed": all(r["passed"] for r in reports),
    }
    return {"result": res}, res["passed"]


def _space(args) -> tuple[Space, dict]:
    if args.space:
        return Space.from_json(read_json(args.space)), {"space": _digest(args.space)}
    return Space.unit(), {}


def _json_arg(text: str):
    p = Path(text)
    if p.exists():
        return read_json(p)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"cannot parse {text!r} as JSON: {exc}") from exc


def _family(space: Space, name: str, U: IntervalSet | None):
    name = name.lower()
    if name == "dense":
        return iq.Dense()
    if U is None:
        raise InputError(f"family {name!r} needs --open")
    if name == "comax":
        return iq.Comax(U)
    if name == "above":
        return iq.Above(U)
    if name == "points":
        return iq.ContainsPoints(U)
    raise InputError(f"unknown family {name!r}; use dense, comax, above or points")


def cmd_interval(args) -> tuple[dict, bool]:
    space, inputs = _space(args)
    U = None
    if args.open is not None:
        data = _json_arg(args.open)
        U = IntervalSet.from_json(data) if args.family == "points" else iq.parse_open(space, data)
    case = args.case
    if case == "two-step":
        res = iq.two_step_counterexample(space, U)
        ok = res["steps_empty_to_X"] == 2 and not res["has_preimage"]
    elif case == "gnf":
        if U is None:
            raise InputError("--case gnf needs --open")
        f = _family(space, args.family, U)
        g = iq.gnf_interval(space, f)
        res = {
            "filter": iq.describe(f),
            "gnf": iq.describe(g),
            "normal": iq.is_normal_interval(space, g)[0],
            "escapes_filter": str(iq.containment_witness(space, g, f) or "none found"),
        }
        if isinstance(f, iq.Comax):
            # Above(int U^c) is not a candidate: it leaves Comax(U) unless U is closed
            literal = iq.Above(space.interior(space.complement(U)))
            w = iq.containment_witness(space, literal, f)
            res["above_int_complement_escapes"] = str(w) if w is not None else "none found"
        ok = res["normal"] and res["escapes_filter"] == "none found"
    elif case == "dense-classes":
        opens = iq.random_grid_corpus(space, args.count, args.seed)
        X, empty = space.whole, IntervalSet(())
        idem = all(iq.regularize(space, iq.regularize(space, b)) == iq.regularize(space, b) for b in opens)
        cls = [iq.dense_quotient_class(space, b) for b in opens]
        hb = [iq.hbar(space, b) for b in opens]
        # same class <=> same hbar, for every pair: the pairing is a bijection of realised values
        agree = len(set(zip(cls, hb))) == len(set(cls)) == len(set(hb))
        distinct = iq.dense_quotient_class(space, X) != iq.dense_quotient_class(space, empty)
        res = {"count": len(opens), "regularize_idempotent": idem, "class_iff_hbar": agree, "class_X_ne_class_empty": distinct}
        ok = idem and agree and distinct
    elif case in ("solid", "normal", "conormal"):
        f = _family(space, args.family, U)
        decider = {"solid": iq.is_solid_interval, "normal": iq.is_normal_interval, "conormal": iq.is_conormal_interval}[case]
        verdict, cert = decider(space, f)
        res = {"family": iq.describe(f), case: verdict, "certificate": cert}
        ok = True
    else:
        raise InputError(f"unknown case {case!r}")
    return {"inputs": inputs, "result": res}, ok


def cmd_ordinal(args) -> tuple[dict, bool]:
    if args.max_n < 1:
        raise InputError("--max-n must be at least 1")
    rep = nonlocalizability_report(args.max_n)
    w2 = ord_min_steps(OMEGA2, ordinal(0, 0), args.bound)
    certs = [saturation_certificate(b) for b in (integer(-3), ordinal(0, 0), ordinal(2, 5), OMEGA2)]
    rep["w2_to_0"] = str(w2)
    rep["certificates"] = certs
    ok = rep["steps_equal_n"] and isinstance(w2, ExceedsBound) and all(
        c["positive"] and c["negative"] and c["tight"] for c in certs
    )
    return {"result": rep}, ok


def cmd_baire(args) -> tuple[dict, bool]:
    space, inputs = _space(args)
    inputs["sets"] = _digest(args.sets)
    data = read_json(args.sets)
    if not isinstance(data, list):
        raise InputError("the sets file must hold a list of closed sets")
    sets = [parse_closed_set(space, item) for item in data]
    p = baire_witness(space, sets)
    return {"inputs": inputs, "result": {"point": str(p), "sets": len(sets), "avoids_all": all(p not in c for c in sets)}}, True


def cmd_ring_baire(args) -> tuple[dict, bool]:
    if args.b is not None:
        if args.n is None:
            raise InputError("--b needs --n")
        res = algebraic_baire(args.n, args.b)
        return {"result": res}, res["found"]
    res = algebraic_baire_sweep(args.max_n)
    res["failures"] = [list(x) for x in res["failures"]]
    return {"result": res}, not res["failures"]


# ---------------------------------------------------------------- plumbing


def render_text(obj, indent: int = 0) -> str:
    """Plain text view of a JSON report."""
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)) and not _flat(v):
                lines.append(f"{pad}-")
                lines.append(render_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(pad + _scalar(obj))
    return "\n".join(lines)


def _flat(v) -> bool:
    return isinstance(v, list) and all(not isinstance(x, (dict, list)) for x in v)


def _scalar(v) -> str:
    if isinstance(v, list):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v is None:
        return "-"
    if isinstance(v, dict):
        return "{}"
    return str(v)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", choices=("json", "text"), default=None)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--quiet", action="store_true")
    common.add_argument("--timing", action="store_true", help="add wall time to the report")

    p = _Parser(prog="qlab", description="Finite quantales, m-filters and localization.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", parents=[common], help="property report for a quantale")
    a.add_argument("--quantale", required=True)
    a.add_argument("--module")
    a.add_argument("--cap", type=int, default=DEFAULT_CAP)
    a.add_argument("--budget", type=int, default=2000)
    a.set_defaults(fn=cmd_analyze)

    f = sub.add_parser("filters", parents=[common], help="enumerate or evaluate m-filters")
    f.add_argument("--quantale", required=True)
    g = f.add_mutually_exclusive_group()
    g.add_argument("--enumerate", action="store_true")
    g.add_argument("--spec")
    f.add_argument("--cap", type=int, default=DEFAULT_CAP)
    f.set_defaults(fn=cmd_filters)

    lo = sub.add_parser("localize", parents=[common], help="localize at a filter")
    lo.add_argument("--quantale", required=True)
    lo.add_argument("--filter", required=True)
    lo.add_argument("--module")
    lo.set_defaults(fn=cmd_localize)

    s = sub.add_parser("suspend", parents=[common], help="suspension checks")
    s.add_argument("--quantale", required=True)
    s.add_argument("--budget", type=int, default=2000)
    s.set_defaults(fn=cmd_suspend)

    v = sub.add_parser("verify", parents=[common], help="run proposition suites")
    v.add_argument("--suite", default="all")
    v.add_argument("--max-size", type=int, default=4)
    v.add_argument("--samples", type=int, default=0)
    v.add_argument("--random-max", type=int, default=8)
    v.set_defaults(fn=cmd_verify)

    i = sub.add_parser("interval", parents=[common], help="interval quantale cases")
    i.add_argument("--case", required=True, choices=("two-step", "gnf", "dense-classes", "solid", "normal", "conormal"))
    i.add_argument("--space")
    i.add_argument("--open", help="JSON interval list (or a file holding one)")
    i.add_argument("--family", default="comax")
    i.add_argument("--count", type=int, default=1000)
    i.set_defaults(fn=cmd_interval)

    o = sub.add_parser("ordinal", parents=[common], help="the non-localizable ordinal example")
    o.add_argument("--max-n", type=int, default=16)
    o.add_argument("--bound", type=int, default=64)
    o.set_defaults(fn=cmd_ordinal)

    b = sub.add_parser("baire", parents=[common], help="point avoiding nowhere-dense closed sets")
    b.add_argument("--space")
    b.add_argument("--sets", required=True)
    b.set_defaults(fn=cmd_baire)

    r = sub.add_parser("ring-baire", parents=[common], help="algebraic Baire search on Z/n")
    r.add_argument("--n", type=int)
    r.add_argument("--b", type=int)
    r.add_argument("--max-n", type=int, default=200)
    r.set_defaults(fn=cmd_ring_baire)
    return p


def _echo(args) -> dict:
    skip = {"fn", "command", "report", "quiet", "timing"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = args.report or os.environ.get("QLAB_REPORT") or "text"
    if fmt not in ("json", "text"):
        print(f"qlab: error: QLAB_REPORT must be json or text, got {fmt!r}", file=sys.stderr)
        return 2
    start = time.perf_counter()
    try:
        body, ok = args.fn(args)
    except ValidationFailed as exc:
        print(f"qlab: error: {exc}", file=sys.stderr)
        for v in exc.report.violations:
            print(f"  {v.axiom}: witness {list(v.witness)} {v.detail}".rstrip(), file=sys.stderr)
        return 2
    except (InputError, CapExceeded) as exc:
        print(f"qlab: error: {exc}", file=sys.stderr)
        return 2
    report = {"command": args.command, "args": _echo(args), **body, "ok": ok}
    if args.timing:
        report["timing_s"] = round(time.perf_counter() - start, 3)
    if not args.quiet:
        sys.stdout.write(dumps(report) if fmt == "json" else render_text(report) + "\n")
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
