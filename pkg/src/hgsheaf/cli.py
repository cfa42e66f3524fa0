"""Command-line front end.

Exit codes: 0 success (valid / equivalent / all checks passed), 1 a semantic
negative (invalid, resonant, inequivalent, failed check), 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Sequence

from . import appendix, classify, cone, hgdata, mellin, moves, sampling
from .charsum import FiniteField
from .hgdata import HGData
from .residues import Residue

OK, NEGATIVE, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    paths: list[str]
    N: int | None = None
    q: int | None = None
    p: int | None = None
    dps: int = 64
    fmt: str = "json"
    seed: int = 0


# ----------------------------------------------------------------- input


def load_data(path: str) -> HGData:
    try:
        text = Path(path).read_text(encoding="utf-8") if path != "-" else sys.stdin.read()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror}") from exc
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise UsageError(f"{path}: top-level value must be an object")
    for i, k in enumerate(obj.get("kappa", [])):
        try:
            Residue.parse(str(k))
        except ValueError as exc:
            raise UsageError(f"{path}: kappa[{i}] = {k!r}: {exc}") from exc
    try:
        return HGData.from_dict(obj)
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from exc


def parse_character(text: str, rank: int) -> tuple[Residue, ...]:
    parts = [s for s in text.replace(";", ",").split(",") if s.strip()]
    if len(parts) == 1 and rank > 1:
        parts = parts * rank
    try:
        chi = tuple(Residue.parse(s.strip()) for s in parts)
    except ValueError as exc:
        raise UsageError(f"--chi: {exc}") from exc
    if len(chi) != rank:
        raise UsageError(f"--chi needs {rank} components, got {len(chi)}")
    return chi


# ---------------------------------------------------------------- output


def _text(obj: Any, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {json.dumps(v) if not isinstance(v, str) else v}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(
            _text(v, indent) if isinstance(v, dict)
            else f"{pad}- {json.dumps(v) if isinstance(v, list) else v}" for v in obj
        )
    return f"{pad}{obj}"


def _csv_rows(rows: list[dict[str, Any]]) -> str:
    buf = io.StringIO()
    if rows:
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return buf.getvalue()


def emit(obj: Any, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(obj, indent=2) + "\n")
    elif fmt == "text":
        out.write(_text(obj) + "\n")
    elif fmt == "csv":
        rows = obj if isinstance(obj, list) else [
            {k: (json.dumps(v) if isinstance(v, (dict, list)) else v) for k, v in obj.items()}
        ]
        out.write(_csv_rows(rows))
    else:
        raise UsageError(f"unknown format {fmt}")


# -------------------------------------------------------------- commands


def validity_report(data: HGData) -> dict[str, Any]:
    rep = hgdata.validate(data).to_dict()
    try:
        res = cone.resonant_facets(data)
        rep["nonresonant"] = not res
        rep["resonant_facets"] = [list(f.h) for f in res]
    except ValueError as exc:
        rep["nonresonant"] = None
        rep["resonance_error"] = str(exc)
    return rep


def cmd_validate(cfg: RunConfig) -> int:
    data = load_data(cfg.paths[0])
    rep = validity_report(data)
    emit(rep, cfg.fmt)
    return OK if rep["valid"] and rep["nonresonant"] else NEGATIVE


def cmd_resonance(cfg: RunConfig) -> int:
    data = load_data(cfg.paths[0])
    cok = hgdata.presentation(data)
    cs = cone.ConeSpec.of(cok.omega, cok.basis_rank)
    fs = cone.facets(cs)
    a = hgdata.alpha(data, cok)
    rows = [{"facet": list(f.h), "value": str(cone.facet_value(f, a)),
             "resonant": cone.facet_value(f, a).is_zero()} for f in fs]
    rep = {"omega": [list(w) for w in cok.omega], "alpha": [str(x) for x in a], "facets": rows,
           "nonresonant": not any(r["resonant"] for r in rows)}
    emit(rows if cfg.fmt == "csv" else rep, cfg.fmt)
    return OK if rep["nonresonant"] else NEGATIVE


def cmd_mellin(cfg: RunConfig, args: argparse.Namespace) -> int:
    data = load_data(cfg.paths[0])
    if args.grid is not None:
        grid = mellin.profile(data, args.grid or None)
        if cfg.fmt == "csv":
            sys.stdout.write(grid.to_csv())
        else:
            emit([{"chi": [str(c) for c in chi], "t": t, "value": str(v)}
                  for (chi, t), v in grid.items()], cfg.fmt)
        return OK
    if args.chi is None:
        raise UsageError("--chi is required unless --grid is given")
    chi = parse_character(args.chi, data.rank)
    if args.hodge:
        emit(mellin.hodge_type(data, chi, args.t).to_dict(), cfg.fmt)
        return OK
    if data.p is None:
        raise UsageError("complex data: use --hodge or --grid")
    order = mellin.mellin_order(data, chi, args.t)
    if args.order_only:
        emit({"order": str(order)}, cfg.fmt)
        return OK
    if cfg.q is None:
        raise UsageError("--q is required for the transform value")
    try:
        field_ = FiniteField.of_order(cfg.q)
    except ValueError as exc:
        raise UsageError(f"--q: {exc}") from exc
    if field_.p != data.p:
        raise UsageError(f"--q={cfg.q} has characteristic {field_.p}, data has p={data.p}")
    value = mellin.mellin_fq(data, chi, field_)
    emit({"q": cfg.q, "value": value.to_dict(), "order": str(order),
          "order_times_degree": str(order * field_.e)}, cfg.fmt)
    return OK


def cmd_normalize(cfg: RunConfig) -> int:
    data = load_data(cfg.paths[0])
    out, transcript = moves.normalize(data)
    emit({"normal_form": out.to_dict(), "transcript": transcript.to_dict()}, cfg.fmt)
    return OK


def cmd_equiv(cfg: RunConfig) -> int:
    a, b = load_data(cfg.paths[0]), load_data(cfg.paths[1])
    if a.rank != b.rank or a.p != b.p:
        raise UsageError("data differ in rank or flavor")
    verdict = classify.decide_isomorphism(a, b)
    emit(verdict.to_dict(), cfg.fmt)
    return OK if verdict.equivalent else NEGATIVE


def cmd_recover(cfg: RunConfig) -> int:
    path = cfg.paths[0]
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            rows = list(csv.DictReader(fh))
        values = {Residue.parse(r["x"]): Fraction(r["value"]) for r in rows}
    except (OSError, KeyError, ValueError) as exc:
        raise UsageError(f"{path}: expected CSV columns x,value ({exc})") from exc
    N = cfg.N or max(1, max((x.den for x in values), default=2) // 2)
    try:
        terms, c = classify.recover_rank1(values, N)
    except classify.ClassifyError as exc:
        emit({"error": str(exc)}, cfg.fmt)
        return NEGATIVE
    emit({"N": N, "constant": str(c),
          "terms": [{"sign": s, "kappa": str(k), "multiplicity": m} for s, k, m in terms]},
         cfg.fmt)
    return OK


def cmd_audit(cfg: RunConfig) -> int:
    if cfg.N is None or cfg.p is None:
        raise UsageError("--N and --p are required")
    try:
        report = appendix.phi_rank_audit(cfg.N, cfg.p)
    except appendix.AuditError as exc:
        raise UsageError(str(exc)) from exc
    N, p = cfg.N, cfg.p
    out = report.to_dict()
    out["generators"] = [[M, j] for M, j in appendix.listed_generators(report.split)]
    thetas = []
    for M in report.split.Sc:
        for lp in appendix.l_primes(N, M):
            worst = 0.0
            ratio = None
            for k in range(N):
                fv = appendix.theta_functional(N, p, M, lp, Fraction(k, N), cfg.dps)
                worst = max(worst, abs(fv.value - fv.expected))
                ratio = fv.normalizer_ratio
            thetas.append({"M": M, "l_prime": lp, "max_error": worst,
                           "formula_over_pinned": [ratio.real, ratio.imag]})
    out["theta_checks"] = thetas
    lvals = []
    for M in sorted({m for m in appendix.divisors(N) if m > 2}):
        for chi in appendix.odd_characters(M):
            v = appendix.l_value(M, chi, cfg.dps)
            lvals.append({"N": M, "chi": {str(u): str(e) for u, e in chi.table},
                          "L": [float(v.real), float(v.imag)]})
    out["l_values"] = lvals
    emit(out, cfg.fmt)
    ok = report.ok and all(t["max_error"] < 1e-8 for t in thetas)
    return OK if ok else NEGATIVE


def selftest(seed: int = 0, n: int = 10) -> dict[str, Any]:
    """A small randomized sweep over moves and the decision procedure."""
    rng = random.Random(seed)
    results = {"seed": seed, "instances": n, "failures": []}
    for i in range(n):
        p = rng.choice([None, 3, 5, 7])
        d = sampling.random_data(rng, p=p, primitive=True, reduced=True, nondivisorial=True)
        if not classify.decide_isomorphism(d, sampling.permute(d, rng)).equivalent:
            results["failures"].append({"instance": i, "check": "permutation", "data": d.to_dict()})
        v = classify.decide_isomorphism(d, sampling.perturb(d, rng))
        if v.equivalent or v.witness is None:
            results["failures"].append({"instance": i, "check": "perturbation", "data": d.to_dict()})
    for N, p in [(4, 3), (4, 5), (12, 5)]:
        if not appendix.phi_rank_audit(N, p).ok:
            results["failures"].append({"check": "audit", "N": N, "p": p})
    results["passed"] = not results["failures"]
    return results


def cmd_selftest(cfg: RunConfig, args: argparse.Namespace) -> int:
    res = selftest(cfg.seed, args.instances)
    emit(res, cfg.fmt)
    return OK if res["passed"] else NEGATIVE


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="json")
    ap = argparse.ArgumentParser(prog="hgsheaf", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    for name, help_ in [("validate", "validity and non-resonance of a data file"),
                        ("resonance", "facets of the cone and their values on alpha"),
                        ("normalize", "primitive reduced normal form with transcript")]:
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("path")

    sp = sub.add_parser("mellin", parents=[common], help="Mellin transform, order, Hodge type, grid")
    sp.add_argument("path")
    sp.add_argument("--chi", help="character components, comma separated (e.g. 1/3,0)")
    sp.add_argument("--q", type=int)
    sp.add_argument("--t", type=int, default=1, help="Galois twist (unit mod N)")
    sp.add_argument("--order-only", action="store_true")
    sp.add_argument("--hodge", action="store_true")
    sp.add_argument("--grid", type=int, nargs="?", const=0, default=None,
                    help="emit the whole profile grid at level N (default: lcm of denominators)")

    sp = sub.add_parser("equiv", parents=[common], help="decide equivalence of two data files")
    sp.add_argument("path_a")
    sp.add_argument("path_b")

    sp = sub.add_parser("recover", parents=[common], help="rank-1 terms from a CSV profile x,value")
    sp.add_argument("path")
    sp.add_argument("--N", type=int)

    sp = sub.add_parser("audit", parents=[common], help="rank audit of the bracket functionals")
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--dps", type=int, default=30, help="decimal digits for L and theta values")

    sp = sub.add_parser("selftest", parents=[common], help="seeded randomized sanity sweep")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--instances", type=int, default=10)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    paths = [getattr(args, k) for k in ("path", "path_a", "path_b") if getattr(args, k, None)]
    cfg = RunConfig(args.command, paths, N=getattr(args, "N", None), q=getattr(args, "q", None),
                    p=getattr(args, "p", None), dps=getattr(args, "dps", 64), fmt=args.format,
                    seed=getattr(args, "seed", 0))
    try:
        if cfg.command == "validate":
            return cmd_validate(cfg)
        if cfg.command == "resonance":
            return cmd_resonance(cfg)
        if cfg.command == "mellin":
            return cmd_mellin(cfg, args)
        if cfg.command == "normalize":
            return cmd_normalize(cfg)
        if cfg.command == "equiv":
            return cmd_equiv(cfg)
        if cfg.command == "recover":
            return cmd_recover(cfg)
        if cfg.command == "audit":
            return cmd_audit(cfg)
        return cmd_selftest(cfg, args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    except ValueError as exc:
        # library precondition failures (divisibility, resonance, ...)
        print(f"error: {exc}", file=sys.stderr)
        return NEGATIVE


if __name__ == "__main__":
    raise SystemExit(main())
