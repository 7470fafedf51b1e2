"""
Command-line interface.

Presentations travel as JSON on stdin/stdout (or files), so commands chain::

    toricflip construct bdn --dim 4 --points 2 \\
        | toricflip transform antiflip --wall y1,y2 \\
        | toricflip check oracle --json

Exit codes: 0 success, 1 failed check or rejected transform, 2 usage error.
"""

import argparse
import json
import os
import sys
from typing import List, Optional

from . import constructions, mori, oracle, transforms
from .presentation import (FanPresentation, PresentationError, fano_degree, is_fano,
                           sort_labels, to_bigint_dict, validate)


class UsageError(Exception):
    pass


def _labels(text: str) -> List[str]:
    out = [t.strip() for t in text.split(",") if t.strip()]
    if not out:
        raise argparse.ArgumentTypeError("expected a comma-separated list of labels")
    return out


def _read(path: str) -> FanPresentation:
    try:
        text = sys.stdin.read() if path == "-" else open(path).read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}")
    try:
        return FanPresentation.from_json(text)
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"malformed presentation JSON: {exc}")


def _wall(F: FanPresentation, labels):
    try:
        return F.relation(labels)
    except KeyError as exc:
        raise UsageError(exc.args[0])


def _dump(obj, out) -> None:
    out.write(json.dumps(obj, sort_keys=True) + "\n")


def _emit_presentation(F: FanPresentation, args, out) -> None:
    data = F.to_dict()
    if getattr(args, "bigint", False):
        data = to_bigint_dict(data)
    _dump(data, out)


def _table(rows, out) -> None:
    widths = [max(len(str(r[i])) for r in rows) for i in range(len(rows[0]))]
    for r in rows:
        out.write("  ".join(str(c).ljust(w) for c, w in zip(r, widths)).rstrip() + "\n")


# -- verbs ------------------------------------------------------------------

def cmd_construct(args, out) -> int:
    if args.kind == "pd":
        F = constructions.projective_space(args.dim)
    else:
        if args.points is None:
            raise UsageError("construct bdn requires --points")
        F = constructions.blowup_at_points(args.dim, args.points)
    _emit_presentation(F, args, out)
    return 0


def cmd_transform(args, out) -> int:
    F = _read(args.input)
    if args.kind == "blowup":
        if not args.cone or not args.label:
            raise UsageError("transform blowup requires --cone and --label")
        G = transforms.blow_up(F, args.cone, args.label)
    else:
        if not args.wall:
            raise UsageError(f"transform {args.kind} requires --wall")
        R = _wall(F, args.wall)
        if args.kind == "blowdown":
            G = transforms.blow_down(F, R)
        else:
            G = transforms.star_flip(F, transforms.FlipSpec(R))
    _emit_presentation(G, args, out)
    return 0


def cmd_check(args, out) -> int:
    F = _read(args.input)
    if args.kind == "fano":
        problems = validate(F)
        fano = None if problems else is_fano(F)
        if args.json:
            _dump({"fano": fano, "violations": problems,
                   "degrees": [[sort_labels(r.lhs), fano_degree(r)] for r in F.sorted_relations()]},
                  out)
        else:
            rows = [("relation", "degree")] + [(str(r), fano_degree(r)) for r in F.sorted_relations()]
            _table(rows, out)
            out.write(f"fano: {fano}\n")
            for p in problems:
                out.write(f"violation: {p}\n")
        if problems or (args.expect_fano and not fano):
            return 1
        return 0
    if args.kind == "oracle":
        report = oracle.verify(F, projective=not args.skip_projective)
        data = report.to_dict()
        if args.emit_cones and not report.violations and report.error is None:
            data["cones"] = oracle.reconstruct(F).to_dict()
        if args.json:
            _dump(data, out)
        else:
            out.write(f"ok: {report.ok}\n")
            for key in ("violations", "error", "round_trip", "projective"):
                out.write(f"{key}: {data[key]}\n")
            if report.smooth_complete is not None:
                sc = report.smooth_complete
                out.write(f"smooth: {sc.smooth}\ncomplete: {sc.complete}\n")
            if "cones" in data:
                out.write(f"maximal cones ({len(data['cones']['max_cones'])}):\n")
                for c in data["cones"]["max_cones"]:
                    out.write("  " + ",".join(c) + "\n")
        return 0 if report.ok else 1
    # projective
    problems = validate(F)
    if problems:
        raise PresentationError("invalid: " + "; ".join(problems))
    C = oracle.reconstruct(F)
    psi = oracle.support_function(C)
    if args.json:
        _dump({"projective": psi is not None,
               "support_function": None if psi is None else
               {k: str(v) for k, v in psi.items()}}, out)
    else:
        out.write(f"projective: {psi is not None}\n")
        if psi is not None:
            _table([("ray", "value")] + [(k, str(psi[k])) for k in sort_labels(psi)], out)
    return 0 if psi is not None else 1


def cmd_mori(args, out) -> int:
    F = _read(args.input)
    rels = [_wall(F, args.wall)] if args.wall else F.sorted_relations()
    rows = []
    for R in rels:
        ext = mori.is_extremal(F, R)
        entry = {"relation": R.to_dict(), "degree": fano_degree(R), "extremal": ext}
        if args.kind == "classify":
            if ext:
                entry["type"] = list(mori.classify(F, R, check=False))
            elif args.wall:
                raise mori.MoriError("not extremal")
            else:
                entry["type"] = None
        rows.append((R, entry))
    if args.json:
        _dump(rows[0][1] if args.wall else [e for _, e in rows], out)
    else:
        header = ("relation", "degree", "extremal") + (("type",) if args.kind == "classify" else ())
        table = [header]
        for R, e in rows:
            line = (str(R), e["degree"], e["extremal"])
            if args.kind == "classify":
                line += ("-" if e["type"] is None else "/".join(e["type"]),)
            table.append(line)
        _table(table, out)
    if args.kind == "extremal" and args.wall:
        return 0 if rows[0][1]["extremal"] else 1
    return 0


def cmd_schedule(args, out) -> int:
    verify = None
    if args.verify == "oracle":
        def verify(F):
            rep = oracle.verify(F)
            if not rep.ok:
                raise constructions.ConstructionError(
                    f"oracle rejected a presentation: {rep.to_dict()}")
    report = constructions.run_construction(args.dim, args.points, shuffle=args.shuffle,
                                            verify=verify)
    refs = None
    if args.snapshots:
        os.makedirs(args.snapshots, exist_ok=True)
        refs = {}
        for r, F in sorted(report.stage_snapshots.items()):
            path = os.path.join(args.snapshots, f"stage_{r}.json")
            with open(path, "w") as fh:
                fh.write(F.to_json() + "\n")
            refs[r] = path
    data = report.to_dict(snapshot_refs=refs)
    data["verified"] = args.verify == "oracle"
    if args.json:
        _dump(data, out)
    else:
        out.write(f"B^{args.dim}_{args.points}: {report.outcome}\n")
        out.write(f"flips: {report.flip_count} (predicted {data['predicted_flip_count']})\n")
        if report.schedule:
            _table([("stage", "step", "wall", "degree")] +
                   [(rec.stage, rec.step, str(rec.relation), rec.degree) for rec in report.schedule],
                   out)
        if report.obstruction is not None:
            out.write(f"obstruction at r={report.obstruction.stage}: "
                      f"{report.obstruction.relation} (degree 0)\n")
        if report.final is not None:
            out.write("final relations:\n")
            for R in report.final.sorted_relations():
                out.write(f"  {R}\n")
        for note in report.notes:
            out.write(f"note: {note}\n")
    return 0


def cmd_info(args, out) -> int:
    F = _read(args.input)
    problems = validate(F)
    data = {"dim": F.dim, "generators": len(F.generators), "picard_number": F.picard_number,
            "relations": len(F.relations), "violations": problems,
            "fano": None if problems else is_fano(F),
            "degrees": [[sort_labels(r.lhs), fano_degree(r)] for r in F.sorted_relations()]}
    if args.json:
        _dump(data, out)
    else:
        for key in ("dim", "generators", "picard_number", "relations", "fano"):
            out.write(f"{key}: {data[key]}\n")
        _table([("relation", "degree")] + [(str(r), fano_degree(r)) for r in F.sorted_relations()],
               out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    inp = argparse.ArgumentParser(add_help=False)
    inp.add_argument("input", nargs="?", default="-", help="presentation JSON file (default stdin)")

    p = argparse.ArgumentParser(prog="toricflip",
                                description="Primitive relation calculus for smooth toric varieties.")
    sub = p.add_subparsers(dest="verb", required=True)

    c = sub.add_parser("construct", help="build P^d or B^d_n")
    c_sub = c.add_subparsers(dest="kind", required=True)
    for kind in ("pd", "bdn"):
        k = c_sub.add_parser(kind, parents=[common])
        k.add_argument("--dim", type=int, required=True)
        if kind == "bdn":
            k.add_argument("--points", type=int, required=True)
        k.add_argument("--bigint", action="store_true", help="write integers as strings")
    c.set_defaults(func=cmd_construct)

    t = sub.add_parser("transform", help="blow up, blow down or cross a wall")
    t_sub = t.add_subparsers(dest="kind", required=True)
    b = t_sub.add_parser("blowup", parents=[common, inp])
    b.add_argument("--cone", type=_labels, required=True)
    b.add_argument("--label", required=True)
    for kind in ("blowdown", "antiflip"):
        k = t_sub.add_parser(kind, parents=[common, inp])
        k.add_argument("--wall", type=_labels, required=True,
                       help="primitive collection of the relation, e.g. y1,y2")
    for k in t_sub.choices.values():
        k.add_argument("--bigint", action="store_true")
    t.set_defaults(func=cmd_transform)

    ch = sub.add_parser("check", help="Fano test and oracle verification")
    ch_sub = ch.add_subparsers(dest="kind", required=True)
    f = ch_sub.add_parser("fano", parents=[common, inp])
    f.add_argument("--expect-fano", action="store_true", help="exit 1 unless Fano")
    o = ch_sub.add_parser("oracle", parents=[common, inp])
    o.add_argument("--emit-cones", action="store_true", help="attach the reconstructed complex")
    o.add_argument("--skip-projective", action="store_true")
    ch_sub.add_parser("projective", parents=[common, inp])
    ch.set_defaults(func=cmd_check)

    m = sub.add_parser("mori", help="extremality and contraction type of relations")
    m_sub = m.add_subparsers(dest="kind", required=True)
    for kind in ("classify", "extremal"):
        k = m_sub.add_parser(kind, parents=[common, inp])
        k.add_argument("--wall", type=_labels, help="restrict to one relation")
    m.set_defaults(func=cmd_mori)

    s = sub.add_parser("schedule", help="run the anti-flip construction")
    s_sub = s.add_subparsers(dest="kind", required=True)
    run = s_sub.add_parser("run", parents=[common])
    run.add_argument("--dim", type=int, required=True)
    run.add_argument("--points", type=int, required=True)
    run.add_argument("--verify", choices=["none", "oracle"], default="none")
    run.add_argument("--shuffle", type=int, metavar="SEED",
                     help="permute the flip order inside each stage")
    run.add_argument("--snapshots", metavar="DIR", help="write stage presentations to DIR")
    s.set_defaults(func=cmd_schedule)

    i = sub.add_parser("info", parents=[common, inp], help="summary of a presentation")
    i.set_defaults(func=cmd_info)
    return p


def main(argv: Optional[List[str]] = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except UsageError as exc:
        sys.stderr.write(f"toricflip: {exc}\n")
        return 2
    except ValueError as exc:
        # covers rejected transforms, invalid presentations and parameters
        sys.stderr.write(f"toricflip: {exc}\n")
        return 1
    except constructions.ConstructionError as exc:
        sys.stderr.write(f"toricflip: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
