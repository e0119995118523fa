# Command-line front end: spec ingestion, validation reports, attaching
# element display, series tables, decompositions, classification verdicts
# and the spectral replay. Exit codes: 0 success, 1 domain failure
# (validation or cross-check), 2 input error.

from __future__ import annotations

import argparse
import json
import sys

from .complexes import (
    ManifoldSpec,
    PDComplexSpec,
    StructuralError,
    skeleton_splitting,
    to_general,
    validate_integral,
    validate_pd,
)
from .decompose import (
    classify,
    classify_integral,
    decompose,
    fiber_series,
    integral_decompose,
    quotient_dims,
)
from .quotient import closed_form_dims, quotient_algebra_for, series_table
from .spectral import build_pages, verify_acyclic
from .tensor import build_chi_general, build_chi_pd

CAP_LIMIT = 200


class InputError(Exception):
    """Problems with files, JSON, schemas or flags (exit code 2)."""


def _load_spec(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}") from exc
    if not isinstance(data, dict):
        raise InputError(f"{path}: expected a JSON object")
    try:
        if "torsion" in data:
            return ManifoldSpec.from_json_dict(data)
        return PDComplexSpec.from_json_dict(data)
    except StructuralError as exc:
        raise InputError(f"{path}: {exc}") from exc


def _resolve_cap(args, spec):
    cap = args.cap
    if cap is None:
        cap = 3 * spec.n if isinstance(spec, PDComplexSpec) else 6 * spec.m
    if cap < 1:
        raise InputError("--cap must be >= 1")
    return min(cap, CAP_LIMIT)


def _parse_units(args, spec):
    if args.units is None:
        return None
    try:
        units = [int(x) for x in args.units.split(",")]
    except ValueError as exc:
        raise InputError(f"--units must be comma-separated integers: {exc}") from exc
    expected = 2  # degrees n-1 and n for a rank-k complex
    if len(units) != expected:
        raise InputError(f"--units needs {expected} entries for this spec")
    if any(u % spec.p == 0 for u in units):
        raise InputError("every unit must be prime to p")
    return units


def _emit(args, text_lines, json_obj):
    if args.format == "json":
        print(json.dumps(json_obj, indent=2, sort_keys=True))
    else:
        print("\n".join(text_lines))


def _require_pd(spec, command):
    if not isinstance(spec, PDComplexSpec):
        raise InputError(f"{command} expects a Poincare complex spec")


def cmd_validate(args):
    spec = _load_spec(args.input)
    if isinstance(spec, PDComplexSpec):
        report = validate_pd(spec)
    else:
        report = validate_integral(spec)
    lines = ["ok"] if report.ok else [f"violation: {v}" for v in report.violations]
    lines += [f"advisory: {a}" for a in report.advisories]
    _emit(args, lines, {
        "ok": report.ok,
        "violations": list(report.violations),
        "advisories": list(report.advisories),
    })
    return 0 if report.ok else 1


def cmd_chi(args):
    spec = _load_spec(args.input)
    _require_pd(spec, "chi")
    units = _parse_units(args, spec)
    if units is None:
        chi = build_chi_pd(spec)
    else:
        chi = build_chi_general(to_general(spec), units)
    _emit(args, [f"chi = {chi.render()}"], {"chi": chi.render(), "degree": chi.degree})
    return 0


def cmd_series(args):
    spec = _load_spec(args.input)
    _require_pd(spec, "series")
    cap = _resolve_cap(args, spec)
    units = _parse_units(args, spec)
    qa = quotient_algebra_for(spec, cap, units)
    rows = series_table(qa)
    lines = ["degree  dim_T  dim_I  dim_A"]
    for d, t, i, a in rows:
        lines.append(f"{d:>6}  {t:>5}  {i:>5}  {a:>5}")
    _emit(args, lines, {"cap": cap, "rows": [list(row) for row in rows]})
    return 0


def cmd_decompose(args):
    spec = _load_spec(args.input)
    _require_pd(spec, "decompose")
    dec = decompose(spec)
    _emit(args, [dec.render()], {"decomposition": dec.render()})
    return 0


def cmd_classify(args):
    a = _load_spec(args.input_a)
    b = _load_spec(args.input_b)
    if isinstance(a, ManifoldSpec) != isinstance(b, ManifoldSpec):
        raise InputError("cannot classify a manifold spec against a p-local spec")
    verdict = classify_integral(a, b) if isinstance(a, ManifoldSpec) else classify(a, b)
    obj = {
        "equivalent": verdict.equivalent,
        "verdict": verdict.verdict,
        "invariant_a": verdict.invariant_a.to_json_dict(),
        "invariant_b": verdict.invariant_b.to_json_dict(),
    }
    _emit(args, [verdict.verdict], obj)
    return 0


def cmd_oracle(args):
    spec = _load_spec(args.input)
    _require_pd(spec, "oracle")
    cap = _resolve_cap(args, spec)
    gspec = to_general(spec)
    qa = quotient_algebra_for(gspec, cap)
    replay = build_pages(gspec, qa, cap)
    report = verify_acyclic(replay, cap)
    lines = []
    pages_json = []
    for page in replay.pages:
        if not page.diffs and page.r != 2 and page.r != replay.pages[-1].r:
            continue  # quiet pages carry no new information
        cells = " ".join(f"({s},{t}):{d}" for (s, t), d in sorted(page.dims.items()))
        lines.append(f"page {page.r}: {cells if cells else 'empty'}")
        pages_json.append({
            "r": page.r,
            "cells": [[s, t, d] for (s, t), d in sorted(page.dims.items())],
        })
    final = " ".join(f"({s},{t}):{d}" for (s, t), d in sorted(replay.final_dims.items()))
    lines.append(f"final: {final if final else 'empty'}")
    status = "ok" if report.ok else f"FAILED at {report.first_surviving}"
    lines.append(f"acyclic: {status} (indeterminate cells: {len(report.indeterminate)})")
    _emit(args, lines, {
        "acyclic": report.ok,
        "first_surviving": list(report.first_surviving) if report.first_surviving else None,
        "indeterminate": [list(c) for c in report.indeterminate],
        "d2_ok": report.d2_ok,
        "pages": pages_json,
        "final": [[s, t, d] for (s, t), d in sorted(replay.final_dims.items())],
    })
    return 0 if report.ok else 1


def cmd_integral(args):
    spec = _load_spec(args.input)
    if not isinstance(spec, ManifoldSpec):
        raise InputError("integral expects a manifold spec")
    report = validate_integral(spec)
    if not report.ok:
        _emit(args, [f"violation: {v}" for v in report.violations], {
            "ok": False,
            "violations": list(report.violations),
        })
        return 1
    cap = args.cap if args.cap is not None else 6 * spec.m
    cap = min(max(cap, 1), CAP_LIMIT)
    dec = integral_decompose(spec, cap)
    _emit(args, dec.render().split("\n"), {
        "m": dec.m,
        "q_factors": [[q, e] for q, e in dec.q_factors],
        "loop_sphere_dim": dec.loop_sphere_dim,
        "complement_cells": [[q, e] for q, e in dec.complement_cells],
        "local": {str(q): d.render(prime=str(q)) for q, d in dec.local},
        "rendered": dec.render(),
    })
    return 0


def cmd_report(args):
    spec = _load_spec(args.input)
    _require_pd(spec, "report")
    cap = _resolve_cap(args, spec)
    units = _parse_units(args, spec)
    lines = []
    obj = {"spec": spec.to_json_dict(), "cap": cap}
    lines.append("== spec ==")
    lines.append(f"p={spec.p} n={spec.n} k={spec.k} k1={spec.k1} r={list(spec.r)}")
    lines.append("== validation ==")
    report = validate_pd(spec)
    obj["validation"] = {
        "ok": report.ok,
        "violations": list(report.violations),
        "advisories": list(report.advisories),
    }
    if not report.ok:
        lines.extend(f"violation: {v}" for v in report.violations)
        lines.extend(f"advisory: {a}" for a in report.advisories)
        _emit(args, lines, obj)
        return 1
    lines.append("ok")
    failed = False

    lines.append("== skeleton ==")
    splitting = skeleton_splitting(spec)
    lines.append(splitting.render())
    obj["skeleton"] = splitting.render()

    lines.append("== attaching element ==")
    if units is None:
        chi = build_chi_pd(spec)
    else:
        chi = build_chi_general(to_general(spec), units)
    lines.append(f"chi = {chi.render()}")
    obj["chi"] = chi.render()

    lines.append(f"== loop homology (cap {cap}) ==")
    qa = quotient_algebra_for(spec, cap, units)
    rows = series_table(qa)
    lines.append("degree  dim_T  dim_I  dim_A")
    for d, t, i, a in rows:
        lines.append(f"{d:>6}  {t:>5}  {i:>5}  {a:>5}")
    dims = qa.dims_series()
    lines.append("dim_A: [" + ",".join(str(c) for c in dims.coeffs) + "]")
    closed = closed_form_dims(spec, cap)
    closed_ok = closed == dims
    failed = failed or not closed_ok
    lines.append("closed form match: " + ("ok" if closed_ok else "MISMATCH"))
    relation_degree = 2 * spec.n - 3
    if cap < relation_degree:
        lines.append(f"note: relation degree {relation_degree} beyond cap")
    obj["series"] = {
        "rows": [list(row) for row in rows],
        "dim_A": list(dims.coeffs),
        "closed_form": list(closed.coeffs),
        "closed_form_match": closed_ok,
        "relation_degree": relation_degree,
    }

    lines.append("== decomposition ==")
    if spec.n % 2 == 0 and spec.n // 2 > 2:
        dec = decompose(spec)
        lines.append(dec.render())
        product_ok = dec.series(cap) == dims
        failed = failed or not product_ok
        lines.append("series product match: " + ("ok" if product_ok else "MISMATCH"))
        obj["decomposition"] = {"string": dec.render(), "series_product_match": product_ok}
        if spec.k >= 2:
            lines.append("== fiber ==")
            fib = fiber_series(spec, cap)
            lines.append("fiber series: [" + ",".join(str(c) for c in fib.coeffs) + "]")
            obj["fiber_series"] = list(fib.coeffs)
    else:
        lines.append("not available: decomposition needs n = 2m with m > 2")
        obj["decomposition"] = None

    lines.append("== spectral replay ==")
    gspec = to_general(spec)
    gqa = quotient_algebra_for(gspec, cap)
    acyc = verify_acyclic(build_pages(gspec, gqa, cap), cap)
    failed = failed or not acyc.ok
    status = "ok" if acyc.ok else f"FAILED at {acyc.first_surviving}"
    lines.append(f"acyclic: {status} (indeterminate cells: {len(acyc.indeterminate)})")
    obj["oracle"] = {
        "acyclic": acyc.ok,
        "indeterminate": [list(c) for c in acyc.indeterminate],
    }

    _emit(args, lines, obj)
    return 1 if failed else 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="loophom",
        description="Loop space homology of highly connected Poincare duality complexes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, cap=False, units=False):
        p.add_argument("--format", choices=["text", "json"], default="text")
        if cap:
            p.add_argument("--cap", type=int, default=None, help="degree cap (default 6m, max 200)")
        if units:
            p.add_argument("--units", default=None, help="comma-separated units for the attaching element")

    p = sub.add_parser("validate", help="check a spec against the duality constraints")
    p.add_argument("input")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("chi", help="print the attaching element in loop homology")
    p.add_argument("input")
    common(p, units=True)
    p.set_defaults(func=cmd_chi)

    p = sub.add_parser("series", help="loop homology dimension table")
    p.add_argument("input")
    common(p, cap=True, units=True)
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("decompose", help="loop space decomposition")
    p.add_argument("input")
    common(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("classify", help="decide loop-space homotopy equivalence")
    p.add_argument("input_a")
    p.add_argument("input_b")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("oracle", help="replay the formal spectral sequence")
    p.add_argument("input")
    common(p, cap=True)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("integral", help="integral loop decomposition of a manifold spec")
    p.add_argument("input")
    common(p, cap=True)
    p.set_defaults(func=cmd_integral)

    p = sub.add_parser("report", help="full report with every cross-check")
    p.add_argument("input")
    common(p, cap=True, units=True)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
