"""Command line front end.

    bentkit analyze table.csv
    bentkit surgery --knot 4_1 --slope 1/1
    bentkit bent complex.json --s 0
    bentkit ss complex.json --map d

Exit codes: 0 success, 1 I/O error, 2 data failures, 3 schema violation.
"""
from __future__ import annotations

import argparse
import os
import sys
from functools import lru_cache
from typing import Any, Sequence

from . import knots as K
from .bent import build_bent, build_dual_bent, is_positive_chain, large_surgery_dims
from .couple import converge, couple_from_filtered, pages, total_homology_dim
from .errors import BentkitError, NotApplicable, SchemaError, UnknownKnot
from .formats import dump_json, load_complex, read_knot_csv, shipped_text
from .lift import roundtrip_check
from .linalg import Field

FIELD_ENV = "BENTKIT_FIELD"
EXIT_OK, EXIT_IO, EXIT_DATA, EXIT_SCHEMA = 0, 1, 2, 3


@lru_cache(maxsize=None)
def _pipeline(a: int, case: str, subcase: str | None, field_name: str) -> K.GenusOneReport:
    return K.genus_one_pipeline(a, case, subcase, Field.parse(field_name))


def _genus_one_section(rec: K.KnotRecord, field_name: str) -> dict[str, Any]:
    case, a = K.genus_one_case(rec.alexander)
    out: dict[str, Any] = {"case": case, "a": a}
    inv = rec.invariants()
    if inv is None:
        out["error"] = "NotApplicable: case 2a-1 with signature 0 needs nu_sharp"
        return out
    try:
        sub = K.subcase_for_nu(inv.nu_sharp, case)
    except NotApplicable as exc:
        out["error"] = f"NotApplicable: {exc}"
        return out
    rep = _pipeline(a, case, sub, field_name)
    out.update({
        "subcase": sub,
        "nu_sharp": inv.nu_sharp,
        "tau_sharp": str(inv.tau_sharp),
        "dim_H_A0": rep.dim_H_A0,
        "dim_slope_minus3": rep.dim_slope_minus3,
        "dim_slope_plus3": rep.dim_slope_plus3,
        "closed_form_agrees": rep.agrees,
        "surgery_dim": {f"{u}/1": K.surgery_dim(case, a, u, 1, inv.nu_sharp) for u in (-3, 3)},
    })
    return out


def analyze_record(rec: K.KnotRecord, field_name: str = "rational") -> dict[str, Any]:
    g = rec.seifert_genus
    delta = rec.alexander
    back = K.normalize_alexander(K.parse_alexander_cell(delta.to_cell()))
    form = K.lspace_form_check(delta, g)
    det = K.determinant_bound_check(delta, g)
    verdict = K.su2_verdict(rec)
    bounds = K.grading_bounds(1, g)
    rep: dict[str, Any] = {
        "name": rec.name,
        "alexander": {"cell": delta.to_cell(), "text": str(delta), "roundtrip": back == delta},
        "genus": g,
        "lspace_form": None if form is None else {"k": form.k, "n": list(form.n)},
        "determinant": {"det": det.det, "bound": det.bound, "ok": det.ok},
        "su2_verdict": {"verdict": verdict.verdict, "reasons": list(verdict.reasons)},
        "khi_support": {"i_max": bounds.i_max, "i_min": bounds.i_min},
        "jn_consistent": K.jn_consistency(1, 0, g, 2 * g + 1),
    }
    if g == 1 and delta.degree == 1:
        shell = K.thin_profile(delta)
        rep["thin_profile"] = {"dims": shell.dims_by_grading(),
                               "parities": {str(z): p for (z, p), _ in shell.dims}}
        rep["genus_one"] = _genus_one_section(rec, field_name)
        rep["self_sum_dims"] = K.connected_sum_profile(shell, shell).dims_by_grading()
    else:
        rep["thin_profile"] = None
        rep["genus_one"] = None
        rep["self_sum_dims"] = None
    if form is not None:
        prof = K.lspace_profile(form, Field.parse(field_name))
        rep["lspace_profile"] = {"gradings": [z for z, _ in prof.space.keys], "positive_chain": is_positive_chain(prof)}
    else:
        rep["lspace_profile"] = None
    return rep


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _emit(obj: Any, args) -> None:
    text = dump_json(obj, args.json_pretty)
    if args.output and args.output != "-":
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_analyze(args) -> int:
    recs, errs = read_knot_csv(_read(args.csv))
    reports = [analyze_record(r, args.field) for r in recs]
    errors = [{"line": e.line, "name": e.name, "message": e.message} for e in errs]
    _emit({"reports": reports, "errors": errors}, args)
    return EXIT_DATA if errors else EXIT_OK


def _parse_slope(s: str) -> tuple[int, int]:
    try:
        if "/" in s:
            u, v = s.split("/")
            return int(u), int(v)
        return int(s), 1
    except ValueError:
        raise K.BadSlope(f"slope {s!r} is not u/v") from None


def cmd_surgery(args) -> int:
    text = _read(args.csv) if args.csv else shipped_text("table1.csv")
    recs, _ = read_knot_csv(text)
    match = [r for r in recs if r.name == args.knot]
    if not match:
        raise UnknownKnot(f"no knot named {args.knot!r}")
    rec = match[0]
    u, v = _parse_slope(args.slope)
    case, a = K.genus_one_case(rec.alexander)
    inv = rec.invariants()
    nu = args.nu_sharp if args.nu_sharp is not None else (inv.nu_sharp if inv else None)
    if case == "2a-1" and nu not in (1, -1):
        raise NotApplicable(f"{rec.name}: case 2a-1 with signature 0 needs --nu-sharp")
    res = K.surgery_dim_report(case, a, u, v, nu)
    _emit({"knot": rec.name, "slope": f"{u}/{v}", "dim": res.dim, "case": res.case, "a": a,
           "formula_used": res.formula, "nu_sharp": res.nu_sharp}, args)
    return EXIT_OK


def cmd_bent(args) -> int:
    cf = load_complex(args.complex, Field.parse(args.field))
    p = cf.profile()
    if args.surgery is not None:
        rep = large_surgery_dims(p, args.surgery)
        out = {"n": rep.n, "s_min": rep.s_min, "s_max": rep.s_max,
               "class_dims": [{"class": c, "dim": d} for c, d in rep.class_dims], "total": rep.total}
    else:
        s = args.s
        a = build_bent(p, s)
        out = {"s": s, "class_dim": a.space.dim, "bent": a.dim_homology,
               "dual_bent": build_dual_bent(p, s).dim_homology}
    _emit(out, args)
    return EXIT_OK


def cmd_ss(args) -> int:
    cf = load_complex(args.complex, Field.parse(args.field))
    fc = cf.filtered(args.map)
    c = couple_from_filtered(fc)
    pgs = pages(c)
    e_inf = pgs[-1].dims
    try:
        conv = converge(c)
        conv_out = {"direction": conv.direction, "total": conv.total,
                    "dims": {str(s): d for s, d in conv.dims.items()}}
    except BentkitError:
        conv_out = None
    rt = roundtrip_check(c)
    out = {
        "map": args.map,
        "s_range": [c.s1, c.s2],
        "pages": [{"r": pg.r, "dims": {str(s): d for s, d in pg.dims.items()}} for pg in pgs],
        "e_infinity": {str(s): d for s, d in e_inf.items()},
        "e_infinity_total": sum(e_inf.values()),
        "homology_dim": total_homology_dim(fc.d),
        "convergence": conv_out,
        "roundtrip": {"ok": rt.ok, "mismatches": [list(m) for m in rt.mismatches]},
    }
    _emit(out, args)
    return EXIT_OK


def _common(defaults: bool) -> argparse.ArgumentParser:
    # subcommands get SUPPRESS so they do not overwrite flags given before the subcommand name
    def d(v):
        return v if defaults else argparse.SUPPRESS
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", default=d(None), help="write JSON here instead of standard output")
    common.add_argument("--field", default=d(os.environ.get(FIELD_ENV, "rational")),
                        help=f"rational or prime:p (default from ${FIELD_ENV}, else rational)")
    common.add_argument("--json-pretty", action="store_true", default=d(False), help="indent the JSON output")
    return common


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="bentkit", description=__doc__.split("\n")[0], parents=[_common(True)])
    common = _common(False)
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", parents=[common], help="report on every row of a knot CSV")
    a.add_argument("csv")
    a.set_defaults(func=cmd_analyze)

    s = sub.add_parser("surgery", parents=[common], help="surgery dimension for a genus-one knot")
    s.add_argument("--knot", required=True)
    s.add_argument("--slope", required=True, help="u/v")
    s.add_argument("--csv", help="knot table (default: the shipped genus-one table)")
    s.add_argument("--nu-sharp", type=int, choices=(-1, 0, 1))
    s.set_defaults(func=cmd_surgery)

    b = sub.add_parser("bent", parents=[common], help="bent complex homology of a profile JSON")
    b.add_argument("complex")
    g = b.add_mutually_exclusive_group(required=True)
    g.add_argument("--s", type=int)
    g.add_argument("--surgery", type=int, metavar="N")
    b.set_defaults(func=cmd_bent)

    q = sub.add_parser("ss", parents=[common], help="spectral sequence of a filtered complex JSON")
    q.add_argument("complex")
    q.add_argument("--map", default="d", help="name of the differential (default d)")
    q.set_defaults(func=cmd_ss)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        Field.parse(args.field)
    except ValueError as exc:
        print(f"bentkit: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    try:
        return args.func(args)
    except OSError as exc:
        print(f"bentkit: {exc}", file=sys.stderr)
        return EXIT_IO
    except SchemaError as exc:
        print(f"bentkit: schema: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except BentkitError as exc:
        print(f"bentkit: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
