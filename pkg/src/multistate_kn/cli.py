"""``msrel`` command-line interface.

Exit codes: 0 success, 1 invalid input, 2 enumeration budget exceeded,
3 a brute-force cross-check disagreed with the algebraic result.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Sequence

from .combinatorics import (
    sum_threshold_generator_count,
    sum_threshold_numerator_terms,
    sum_threshold_ordered_generators,
)
from .documents import SystemDocument, TankScenario, load_json, parse_law, parse_system, parse_tank
from .errors import DimensionError, DomainError, ResourceError, ValidationError
from .monomial import Monomial
from .mvt import HilbertNumerator, betti_bounds, build_mvt, hilbert_numerator
from .oracle import brute_force_generators, brute_force_reliability, inclusion_exclusion_numerator
from .reliability import (
    classic_lower_bounds,
    evaluate,
    evaluate_tree,
    level_reliabilities,
)
from .systems import (
    DEFAULT_BUDGET,
    build_reliability_ideal,
    lower_boundary_points,
    minimal_cuts,
    upper_boundary_points,
)

EXIT_OK, EXIT_INVALID, EXIT_BUDGET, EXIT_MISMATCH = 0, 1, 2, 3


class OracleMismatch(Exception):
    pass


class Result:
    """Rows of flat records plus scalar metadata, rendered in any output format."""

    def __init__(self, command: str, columns: Sequence[str], rows: list[dict], meta: dict | None = None,
                 float_columns: Sequence[str] = ()):
        self.command = command
        self.columns = list(columns)
        self.rows = rows
        self.meta = meta or {}
        self.float_columns = set(float_columns)


def _fmt(value: Any, precision: int) -> Any:
    if isinstance(value, float):
        if math.isnan(value) or math.isinf(value):
            return str(value)
        return float(f"{value:.{precision}g}")
    return value


def _text(value: Any) -> str:
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return "(" + ",".join(str(v) for v in value) + ")"
    return str(value)


def render(result: Result, fmt: str, precision: int) -> str:
    rows = [{c: _fmt(r.get(c), precision) for c in result.columns} for r in result.rows]
    meta = {k: _fmt(v, precision) for k, v in result.meta.items()}
    if fmt == "json":
        doc = {"command": result.command, **meta, "rows": rows}
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(result.columns)
        for r in rows:
            writer.writerow([_text(r[c]) for c in result.columns])
        return buf.getvalue()
    lines = [f"{k}: {_text(v)}" for k, v in meta.items()]
    cells = [result.columns] + [[_text(r[c]) for c in result.columns] for r in rows]
    widths = [max(len(row[i]) for row in cells) for i in range(len(result.columns))]
    for i, row in enumerate(cells):
        lines.append("  ".join(v.rjust(w) for v, w in zip(row, widths)).rstrip())
        if i == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def _parallel_map(fn: Callable, items: list, threads: int) -> list:
    if threads <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=min(threads, len(items))) as pool:
        return list(pool.map(fn, items))


def _load_system(path: str) -> SystemDocument:
    return parse_system(load_json(path))


def _level(doc: SystemDocument, level: int | None, default: int = 1) -> int:
    j = default if level is None else level
    if not 1 <= j <= doc.spec.max_level:
        raise ValidationError(f"level {j} outside 1..{doc.spec.max_level}")
    return j


def cmd_generators(args) -> Result:
    doc = _load_system(args.system)
    j = _level(doc, args.level)
    ideal = build_reliability_ideal(doc.spec, j)
    rows = [{"index": i, "monomial": Monomial(g).pretty(), "exponents": list(g)}
            for i, g in enumerate(ideal.generators, start=1)]
    return Result("generators", ["index", "monomial", "exponents"], rows, {"level": j, "count": len(rows)})


def cmd_betti(args) -> Result:
    doc = _load_system(args.system)
    j = _level(doc, args.level)
    ideal = build_reliability_ideal(doc.spec, j)
    if ideal.is_zero:
        return Result("betti", ["dimension", "degree", "lower", "upper"], [], {"level": j, "exact": True})
    summary = betti_bounds(build_mvt(ideal), compatibility=args.compatibility)
    rows = []
    if args.multigraded:
        for d in sorted(summary.upper):
            for mu in sorted(summary.upper[d], key=lambda m: (sum(m), m)):
                lo, hi = summary.betti(d, mu)
                rows.append({"dimension": d, "multidegree": list(mu), "monomial": Monomial(mu).pretty(),
                             "lower": lo, "upper": hi})
        cols = ["dimension", "multidegree", "monomial", "lower", "upper"]
    else:
        up, low = summary.graded_upper(), summary.graded_lower()
        for d in sorted(up):
            for deg in sorted(up[d]):
                rows.append({"dimension": d, "degree": deg, "lower": low.get(d, {}).get(deg, 0),
                             "upper": up[d][deg]})
        cols = ["dimension", "degree", "lower", "upper"]
    return Result("betti", cols, rows, {"level": j, "exact": summary.exact})


def cmd_hilbert(args) -> Result:
    doc = _load_system(args.system)
    j = _level(doc, args.level)
    ideal = build_reliability_ideal(doc.spec, j)
    hn = HilbertNumerator.zero(ideal.n) if ideal.is_zero else hilbert_numerator(build_mvt(ideal))
    if args.collapsed:
        rows = [{"coefficient": c, "multidegree": list(mu), "monomial": Monomial(mu).pretty()}
                for mu, c in hn.coefficients().items()]
        cols = ["coefficient", "multidegree", "monomial"]
    else:
        rows = [{"dimension": d, "sign": "-" if d % 2 else "+", "multidegree": list(mu),
                 "monomial": Monomial(mu).pretty()} for mu, d in hn.terms()]
        cols = ["dimension", "sign", "multidegree", "monomial"]
    return Result("hilbert", cols, rows, {"level": j, "terms": len(hn)})


def cmd_reliability(args) -> Result:
    doc = _load_system(args.system)
    model = doc.require_model()
    rows = [{"level": lv.level, "R": lv.reliability, "r": lv.probability}
            for lv in level_reliabilities(doc.spec, model)]
    return Result("reliability", ["level", "R", "r"], rows)


def _bounds_rows(spec, model, j: int, budget: int) -> list[dict]:
    ideal = build_reliability_ideal(spec, j)
    rows = []
    if ideal.is_zero:
        rows.append({"level": j, "bound": "exact", "value": 0.0})
    else:
        seq = evaluate_tree(build_mvt(ideal), model)
        rows += [{"level": j, "bound": label, "value": v} for label, v in seq.items()]
        rows.append({"level": j, "bound": "exact", "value": seq.exact})
    classic = classic_lower_bounds(spec, model, j, budget=budget)
    rows.append({"level": j, "bound": "l_path", "value": classic.path_bound})
    rows.append({"level": j, "bound": "l_cut", "value": classic.cut_bound})
    return rows


def cmd_bounds(args) -> Result:
    doc = _load_system(args.system)
    model = doc.require_model()
    levels = [_level(doc, args.level)] if args.level is not None else list(range(1, doc.spec.max_level + 1))
    rows = []
    for j in levels:
        rows += _bounds_rows(doc.spec, model, j, args.budget)
    return Result("bounds", ["level", "bound", "value"], rows)


def cmd_boundary(args) -> Result:
    doc = _load_system(args.system)
    if args.kind == "lower":
        j = _level(doc, args.level)
        points = lower_boundary_points(doc.spec, j)
    else:
        j = 0 if args.level is None else args.level
        if not 0 <= j <= doc.spec.max_level - 1:
            raise ValidationError(f"upper boundary level {j} outside 0..{doc.spec.max_level - 1}")
        points = upper_boundary_points(doc.spec, j, budget=args.budget)
    rows = [{"index": i, "state": list(p)} for i, p in enumerate(points, start=1)]
    return Result("boundary", ["index", "state"], rows, {"kind": args.kind, "level": j, "count": len(rows)})


def cmd_cuts(args) -> Result:
    doc = _load_system(args.system)
    j = _level(doc, args.level)
    cuts = minimal_cuts(doc.spec, j, budget=args.budget)
    rows = [{"index": i, "state": list(z)} for i, z in enumerate(cuts, start=1)]
    return Result("cuts", ["index", "state"], rows, {"level": j, "count": len(rows)})


def cmd_oracle(args) -> Result:
    doc = _load_system(args.system)
    spec, model = doc.spec, doc.model
    rows = []

    def check(level, quantity, ok, detail=""):
        rows.append({"level": level, "quantity": quantity, "status": "pass" if ok else "FAIL", "detail": detail})

    for j in range(1, spec.max_level + 1):
        ideal = build_reliability_ideal(spec, j)
        gens = sorted(ideal.as_tuples())
        ref = brute_force_generators(spec, j, budget=args.budget)
        check(j, "generators", gens == ref, f"{len(gens)} vs {len(ref)}")
        hn = HilbertNumerator.zero(spec.n) if ideal.is_zero else hilbert_numerator(build_mvt(ideal))
        if len(ideal) <= args.max_ie_generators:
            check(j, "numerator", hn.coefficients() == inclusion_exclusion_numerator(ideal, args.max_ie_generators),
                  f"{len(hn)} terms")
        if model is not None:
            seq = evaluate(hn, model)
            r_ref = brute_force_reliability(spec, model, j, budget=args.budget)
            diff = abs(seq.exact - r_ref)
            check(j, "reliability", diff <= args.tolerance, f"|diff|={diff:.3g}")
            bad = [label for label, v in seq.items()
                   if (label[0] == "u" and v < r_ref - args.tolerance) or (label[0] == "l" and v > r_ref + args.tolerance)]
            check(j, "sandwich", not bad, ",".join(bad))
    result = Result("oracle", ["level", "quantity", "status", "detail"], rows,
                    {"passed": all(r["status"] == "pass" for r in rows)})
    return result


def _tank_row(task: tuple[TankScenario, int, bool]) -> dict:
    scenario, level, timing = task
    t0 = time.perf_counter()
    spec = scenario.system(level)
    if spec is None:
        count, prob = 0, 0.0
    else:
        count = sum_threshold_generator_count(spec.m, spec.n, spec.k)
        if count != len(sum_threshold_ordered_generators(spec.m, spec.n, spec.k)):
            raise OracleMismatch(f"generator count formula disagrees with enumeration at level {level}")
        terms = sum_threshold_numerator_terms(spec.m, spec.n, spec.k)
        prob = evaluate(HilbertNumerator.from_terms(spec.n, terms), scenario.model(level)).exact
    elapsed = time.perf_counter() - t0 if timing else 0.0
    return {"level": level, "num_generators": count, "probability": prob, "runtime_seconds": round(elapsed, 3)}


def cmd_tank_sweep(args) -> Result:
    scenario = parse_tank(load_json(args.tank))
    if args.law:
        scenario = scenario.with_law(parse_law(args.law))
    tasks = [(scenario, level, not args.no_timing) for level in scenario.levels]
    rows = _parallel_map(_tank_row, tasks, args.threads)
    return Result("tank-sweep", ["level", "num_generators", "probability", "runtime_seconds"], rows)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="msrel", description="Algebraic reliability of multi-state k-out-of-n systems.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["table", "json", "csv"], help="default: table (csv for tank-sweep)")
    common.add_argument("--precision", type=int, default=6, help="significant digits for probabilities")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max lattice states to enumerate")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, level=True):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("system", help="system JSON document")
        if level:
            p.add_argument("--level", type=int)
        p.set_defaults(func=fn)
        return p

    add("generators", cmd_generators, "minimal generators of a reliability ideal")
    p = add("betti", cmd_betti, "Betti-number bounds from a Mayer-Vietoris tree")
    p.add_argument("--multigraded", action="store_true")
    p.add_argument("--compatibility", action="store_true", help="apply the compatible-node refinement")
    p = add("hilbert", cmd_hilbert, "Hilbert-series numerator terms")
    p.add_argument("--collapsed", action="store_true", help="print the signed coefficient map instead")
    add("reliability", cmd_reliability, "per-level reliabilities", level=False)
    add("bounds", cmd_bounds, "truncation bounds and path/cut bounds")
    p = add("boundary", cmd_boundary, "lower or upper boundary points")
    p.add_argument("--kind", choices=["lower", "upper"], default="lower")
    add("cuts", cmd_cuts, "minimal cut vectors")
    p = add("oracle", cmd_oracle, "cross-check against brute force", level=False)
    p.add_argument("--tolerance", type=float, default=1e-12)
    p.add_argument("--max-ie-generators", type=int, default=18)

    p = sub.add_parser("tank-sweep", parents=[common], help="storage-tank level sweep (CSV by default)")
    p.add_argument("tank", help="tank scenario JSON document")
    p.add_argument("--law", help="generate survival arrays from '1-(c*j)^e'")
    p.add_argument("--no-timing", action="store_true", help="report runtime_seconds as 0")
    p.set_defaults(func=cmd_tank_sweep)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = "csv" if args.command == "tank-sweep" else "table"
    try:
        result = args.func(args)
    except ResourceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except OracleMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (ValidationError, DomainError, DimensionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    sys.stdout.write(render(result, args.format, args.precision))
    if result.command == "oracle" and not result.meta.get("passed", True):
        return EXIT_MISMATCH
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
