"""Command-line front end.

Exit codes: 0 verdict computed (whatever the outcome), 1 a classification or
oracle cross-check did not match, 2 usage or input error, 3 a resource cap
was exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from itertools import product
from typing import Any, Sequence

from . import catalog
from .cocycles import InvalidOrientation, Orientation, cocycle_spaces, max_valid_precision
from .oracle import TooLarge, presentation_cocycles
from .padics import PrimeCtx
from .pairs import (
    CyclotomicPair,
    PairFormatError,
    kummerian_verdict,
    read_pair,
    theta_ab_module,
    theta_abelian_certify,
)
from .presentations import PresentationError
from .subgroups import (
    BadSubgroup,
    IndexPSubgroup,
    SweepTooLarge,
    orientation_sweep,
    rewrite,
    smooth_check,
    subgroup_report,
    sweep_candidates,
)
from .verdicts import CERTIFIED_NO, CERTIFIED_YES, UNDECIDED, InternalInconsistency, Verdict

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class UsageError(ValueError):
    pass


# argument helpers ---------------------------------------------------------


def _parse_value(text: str) -> Any:
    try:
        return int(text)
    except ValueError:
        return text


def parse_bindings(items: Sequence[str] | None) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for item in items or []:
        for part in item.split(";"):
            if not part.strip():
                continue
            if "=" not in part:
                raise UsageError(f"parameter {part!r} is not of the form k=v")
            k, v = part.split("=", 1)
            out[k.strip()] = _parse_value(v.strip())
    return out


def parse_index_bound(text: str, p: int) -> int:
    """Exponent k from "p", "p^k" or an integer power of p."""
    t = text.strip().replace(" ", "")
    if t == "p":
        return 1
    if t.startswith("p^"):
        try:
            k = int(t[2:])
        except ValueError as exc:
            raise UsageError(f"bad index bound {text!r}") from exc
        if k < 0:
            raise UsageError("index bound exponent must be >= 0")
        return k
    try:
        m = int(t)
    except ValueError as exc:
        raise UsageError(f"bad index bound {text!r}") from exc
    k = 0
    while m > 1 and m % p == 0:
        m //= p
        k += 1
    if m != 1:
        raise UsageError(f"index bound {text} is not a power of {p}")
    return k


def _load_theta_file(path: str) -> dict[str, int]:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read theta file {path}: {exc}") from exc
    if isinstance(data, dict) and "values" in data:
        data = data["values"]
    if not isinstance(data, dict):
        raise UsageError("theta file must map generator names to integers")
    return {str(k): int(v) for k, v in data.items()}


def load_pair(args) -> CyclotomicPair:
    """Pair from --file or --catalog, at precision max(n, own precision)."""
    bindings = parse_bindings(args.param)
    n = args.n
    if bool(args.file) == bool(args.catalog):
        raise UsageError("give exactly one of --file or --catalog")
    if args.catalog:
        p = args.p if args.p is not None else 3
        pair = catalog.build(args.catalog, p, max(n, 1), **bindings)
    else:
        pair = read_pair(args.file, bindings)
        if args.p is not None and args.p != pair.p:
            raise UsageError(f"--p {args.p} disagrees with the file's p = {pair.p}")
    theta = getattr(args, "theta", None)
    if theta is None or theta == "sweep":
        values = pair.orientation.values
    elif theta == "trivial":
        values = (1,) * pair.d
    else:
        mapping = _load_theta_file(theta)
        unknown = set(mapping) - set(pair.generators)
        if unknown:
            raise UsageError(f"theta file names unknown generators {sorted(unknown)}")
        values = tuple(mapping.get(g, 1) for g in pair.generators)
    orient = Orientation(values, PrimeCtx(pair.p, n))
    try:
        return CyclotomicPair(pair.presentation, orient)
    except InvalidOrientation as exc:
        k = max_valid_precision(pair.presentation, orient)
        raise InvalidOrientation(f"{exc}; the orientation is valid up to precision {k} only") from exc


# output -------------------------------------------------------------------


def emit(args, report: dict, lines: list[str]) -> None:
    if args.format == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
        return
    for line in lines:
        print(line)
    if "verdict" in report:
        print("verdict: " + json.dumps(report["verdict"], sort_keys=True))


def _levels(v: Verdict) -> str:
    passes = v.evidence.get("passes_at", [])
    if not passes:
        return "no level passes"
    return f"passes at n={passes[0]}..{passes[-1]}" if len(passes) > 1 else f"passes at n={passes[0]}"


def describe(v: Verdict) -> str:
    if v.outcome == CERTIFIED_NO:
        w = v.witness or {}
        if w.get("kind") == "subgroup":
            inner = w.get("inner", {})
            return (
                f"CertifiedNo at n={v.level}: subgroup of index {w['index']} (phi chain {w['chain']}) "
                f"is not Kummerian, witness class {inner.get('class')} torsion {inner.get('torsion')}"
            )
        return f"CertifiedNo at n={v.level}, witness class {w.get('class')}, torsion {w.get('torsion')}"
    if v.outcome == CERTIFIED_YES:
        return f"{_levels(v)}; structural certificate: {v.certificate}"
    return f"UndecidedUpTo(n={v.level}): {_levels(v)}"


def _oracle_check(pair: CyclotomicPair, n: int) -> dict:
    out = {}
    for k in range(1, min(n, 2) + 1):
        try:
            brute = set(presentation_cocycles(pair.at(k), k))
        except TooLarge as exc:
            out[str(k)] = f"skipped: {exc}"
            continue
        solver = set(cocycle_spaces(pair, k).Z1.elements())
        if brute != solver:
            raise InternalInconsistency(f"oracle disagrees with the solver at n={k}")
        out[str(k)] = f"match ({len(brute)} cocycles)"
    return out


def _sweep(args, pair: CyclotomicPair, predicate, label: str):
    n = args.n
    results = orientation_sweep(pair.presentation, n, predicate, cap=args.cap)
    rows = [{"theta": dict(zip(pair.generators, th.values)), "verdict": v.to_json()} for th, v in results]
    outcomes = [v.outcome for _, v in results]
    if results and all(o == CERTIFIED_NO for o in outcomes):
        agg = Verdict.no(n, {"kind": "sweep", "refuted": len(results)}, admissible=len(results))
        summary = f"CertifiedNo for all {len(results)} admissible orientations"
    elif not results:
        agg = Verdict.undecided(n, admissible=0)
        summary = "no admissible orientation"
    else:
        best = next((v for _, v in results if v.outcome == CERTIFIED_YES), None)
        if best is None:
            best = next(v for _, v in results if v.outcome == UNDECIDED)
        agg = Verdict(best.outcome, best.level, None, best.certificate, {"admissible": len(results)})
        refuted = outcomes.count(CERTIFIED_NO)
        summary = f"{len(results) - refuted} of {len(results)} admissible orientations are not refuted"
    candidates = sweep_candidates(pair.presentation, n)
    lines = [f"{label} sweep over {candidates} candidates mod {pair.p}^{n}", summary]
    for r in rows:
        lines.append(f"  theta={r['theta']}: {Verdict.from_json(r['verdict']).summary()}")
    report = {"command": label, "n": n, "candidates": candidates, "results": rows, "verdict": agg.to_json()}
    return report, lines


# commands -----------------------------------------------------------------


def cmd_check(args) -> int:
    pair = load_pair(args)
    n = args.n
    kind = args.what
    if kind == "kummerian":
        pred = lambda pr: kummerian_verdict(pr, n)  # noqa: E731
    elif kind == "smooth":
        k = parse_index_bound(args.index_bound, pair.p)
        pred = lambda pr: smooth_check(pr, k, n)  # noqa: E731
    else:
        pred = lambda pr: theta_abelian_certify(pr, n)  # noqa: E731
    if args.theta == "sweep":
        report, lines = _sweep(args, pair, pred, f"check {kind}")
        emit(args, report, lines)
        return EXIT_OK
    lines = [f"pair: {pair}"]
    report: dict[str, Any] = {"command": f"check {kind}", "n": n, "pair": pair.to_json()}
    if args.oracle:
        report["oracle"] = _oracle_check(pair, n)
        lines += [f"oracle n={k}: {msg}" for k, msg in report["oracle"].items()]
    if kind == "smooth":
        k = parse_index_bound(args.index_bound, pair.p)
        table = subgroup_report(pair, n) if pair.d else []
        for entry in table:
            lines.append(f"  U = ker {entry['phi']}: {Verdict.from_json(entry['verdict']).summary()}")
        report["subgroups"] = table
        report["index_bound"] = pair.p ** k
    v = pred(pair)
    report["verdict"] = v.to_json()
    lines.append(describe(v))
    emit(args, report, lines)
    return EXIT_OK


def cmd_module(args) -> int:
    pair = load_pair(args)
    n = args.n
    mod = theta_ab_module(pair, n)
    sp = cocycle_spaces(pair, n)
    report = {
        "command": "module invariants",
        "n": n,
        "pair": pair.to_json(),
        "module": mod.to_json(),
        "Z1": [list(r) for r in sp.Z1.rows],
        "B1": [list(r) for r in sp.B1.rows],
    }
    prof = mod.profile
    lines = [
        f"pair: {pair}",
        f"diagonal invariants (exponents of p): {list(prof.exponents)}",
        f"units: {prof.unit_count}, torsion: {list(prof.torsion)}, zero at precision {n}: {prof.zero_count}",
        "cokernel: " + (" + ".join(f"Z/p^{e}" for e in prof.cokernel()) or "0"),
        f"Z1 rows: {report['Z1']}",
    ]
    emit(args, report, lines)
    return EXIT_OK


def _phi_arg(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad --phi {text!r}") from exc


def cmd_subgroups(args) -> int:
    pair = load_pair(args)
    n = args.n
    if args.action == "list":
        entries = subgroup_report(pair, n)
        lines = [f"pair: {pair}", f"{len(entries)} subgroups of index {pair.p}"]
        for e in entries:
            pres = e["presentation"]
            lines.append(
                f"  phi={e['phi']}: {len(pres['generators'])} generators, {len(pres['relators'])} relators; "
                f"{Verdict.from_json(e['verdict']).summary()}"
            )
        emit(args, {"command": "subgroups list", "n": n, "subgroups": entries}, lines)
        return EXIT_OK
    if not args.phi:
        raise UsageError("subgroups rewrite needs --phi")
    phi = _phi_arg(args.phi)
    t = args.t if args.t is not None else next((i for i, x in enumerate(phi) if x % pair.p), 0)
    rw = rewrite(pair, IndexPSubgroup(phi, t, args.style))
    simp = rw.simplified()
    report = {
        "command": "subgroups rewrite",
        "phi": list(phi),
        "schreier_words": {name: pair.presentation.format(w) for name, w in zip(rw.pair.generators, rw.schreier_words)},
        "rewritten": rw.pair.to_json(),
        "simplified": simp.to_json(),
    }
    lines = [
        f"U = ker {list(phi)} with transversal powers of {pair.generators[t]}",
        f"Schreier generators: {len(rw.schreier_words)}",
    ]
    lines += [f"  {k} = {v}" for k, v in report["schreier_words"].items()]
    lines.append(f"rewritten: {rw.pair}")
    lines.append(f"simplified: {simp}")
    emit(args, report, lines)
    return EXIT_OK


def cmd_catalog(args) -> int:
    if args.action == "list":
        rows = []
        for i in catalog.list_ids():
            try:
                e = catalog.entry(i)
                rows.append({"id": i, "params": catalog.parameters(i), "note": e.note, "expected": e.expected})
            except catalog.BadParameters:
                rows.append({"id": i, "params": catalog.parameters(i)})
        lines = [f"{r['id']:<14} {r['params']}  {r.get('note', '')}" for r in rows]
        emit(args, {"command": "catalog list", "entries": rows}, lines)
        return EXIT_OK
    if not args.id:
        raise UsageError("catalog build needs an id")
    bindings = parse_bindings(args.param)
    p = args.p if args.p is not None else 3
    e = catalog.entry(args.id, p, args.n, **bindings)
    data = e.pair.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(data, fh, indent=2)
            fh.write("\n")
    if args.format == "json" or not args.out:
        print(json.dumps(data, indent=2))
    else:
        print(f"wrote {args.out}")
    return EXIT_OK


_DEFAULT_ROWS = {
    "G0": [{"s": 0}, {"s": 1}],
    "G1": [{"s": 1}, {"s": 2}],
    "G2": [{"s": 1, "r": 0, "d": 0}, {"s": 1, "r": 0, "d": 1}, {"s": 1, "r": 1, "d": 0}],
    "G4": [{"s": 1, "r": 0}, {"s": 0, "r": 1}],
}


def _family_rows(args) -> list[dict]:
    if args.row:
        return [parse_bindings([r.replace(",", ";")]) for r in args.row]
    grid = parse_bindings_multi(args.param)
    if grid:
        keys = sorted(grid)
        return [dict(zip(keys, combo)) for combo in product(*(grid[k] for k in keys))]
    return _DEFAULT_ROWS[args.family]


def parse_bindings_multi(items: Sequence[str] | None) -> dict[str, list[Any]]:
    out: dict[str, list[Any]] = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"parameter {item!r} is not of the form k=v1,v2")
        k, v = item.split("=", 1)
        out[k.strip()] = [_parse_value(x.strip()) for x in v.split(",") if x.strip()]
    return out


def classify_row(family: str, p: int, n: int, params: dict, cap: int) -> dict:
    pair = catalog.build(family, p, n, **params)
    if family == "G0":
        pred = lambda pr: smooth_check(pr, 1, n)  # noqa: E731
        predicate = "smooth"
    else:
        pred = lambda pr: theta_abelian_certify(pr, n)  # noqa: E731
        predicate = "kummerian"
    results = orientation_sweep(pair.presentation, n, pred, cap=cap)
    certified = [(th, v) for th, v in results if v.outcome == CERTIFIED_YES]
    refuted = sum(1 for _, v in results if v.refuted)
    undecided = len(results) - refuted - len(certified)
    if certified:
        best = certified[0][1]
    elif undecided:
        best = next(v for _, v in results if v.outcome == UNDECIDED)
    else:
        best = results[0][1] if results else Verdict.undecided(n)
    if family == "G1":
        expected = "theta-abelian for exactly the orientations it certifies, refuted otherwise"
        ok = bool(certified) and undecided == 0
    else:
        expected = "every admissible orientation refuted"
        ok = bool(results) and refuted == len(results)
    return {
        "family": family,
        "params": params,
        "predicate": predicate,
        "admissible": len(results),
        "refuted": refuted,
        "certified": len(certified),
        "undecided": undecided,
        "best_verdict": best.to_json(),
        "theta_abelian": (
            {"theta": dict(zip(pair.generators, certified[0][0].values)), "certificate": certified[0][1].certificate}
            if certified
            else None
        ),
        "expected": expected,
        "match": ok,
    }


def cmd_classify(args) -> int:
    if args.family not in catalog.FAMILIES:
        raise catalog.BadParameters(f"family must be one of {', '.join(catalog.FAMILIES)}")
    p = args.p if args.p is not None else 3
    rows = [classify_row(args.family, p, args.n, params, args.cap) for params in _family_rows(args)]
    all_ok = all(r["match"] for r in rows)
    lines = [f"family {args.family}, p={p}, n={args.n}"]
    for r in rows:
        lines.append(
            f"  {r['params']}: {r['admissible']} admissible, {r['refuted']} refuted, "
            f"{r['certified']} theta-abelian; best {Verdict.from_json(r['best_verdict']).summary()}; "
            f"{'ok' if r['match'] else 'MISMATCH'}"
        )
    verdict = {"outcome": "match" if all_ok else "mismatch", "rows": len(rows)}
    emit(args, {"command": "classify family", "rows": rows, "verdict": verdict}, lines)
    return EXIT_OK if all_ok else EXIT_MISMATCH


# parser -------------------------------------------------------------------


def _source_args(sp: argparse.ArgumentParser, theta: bool = True) -> None:
    sp.add_argument("--file", help="pair file (JSON)")
    sp.add_argument("--catalog", help="catalog id, see 'catalog list'")
    sp.add_argument("--param", "--let", action="append", metavar="K=V", help="catalog parameter or {expr} binding")
    sp.add_argument("--p", type=int, help="prime for catalog entries (default 3)")
    sp.add_argument("--n", type=int, default=3, help="precision / maximal level (default 3)")
    if theta:
        sp.add_argument("--theta", help="'trivial', a JSON file of values, or 'sweep'")
        sp.add_argument("--sweep-theta", dest="theta", action="store_const", const="sweep", help="same as --theta sweep")
    sp.add_argument("--format", choices=("text", "json"), default="text")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="smoothpairs", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    chk = sub.add_parser("check", help="Kummerian, 1-smooth or theta-abelian verdicts")
    chk.add_argument("what", choices=("kummerian", "smooth", "theta-abelian"))
    _source_args(chk)
    chk.add_argument("--index-bound", default="p", help="p, p^k or a power of p (default p)")
    chk.add_argument("--oracle", action="store_true", help="cross-check Z1 by brute force")
    chk.add_argument("--cap", type=int, default=10**6, help="orientation sweep cap")
    chk.set_defaults(func=cmd_check)

    mod = sub.add_parser("module", help="theta-abelianization module data")
    mod.add_argument("what", choices=("invariants",))
    _source_args(mod)
    mod.set_defaults(func=cmd_module)

    sg = sub.add_parser("subgroups", help="index-p subgroups")
    sg.add_argument("action", choices=("list", "rewrite"))
    _source_args(sg)
    sg.add_argument("--phi", help="comma separated functional, e.g. 1,0")
    sg.add_argument("--t", type=int, help="index of the transversal generator")
    sg.add_argument("--style", choices=("positive", "negative"), default="positive")
    sg.set_defaults(func=cmd_subgroups)

    cat = sub.add_parser("catalog", help="example pairs")
    cat.add_argument("action", choices=("list", "build"))
    cat.add_argument("id", nargs="?")
    cat.add_argument("--param", "--let", action="append", metavar="K=V")
    cat.add_argument("--p", type=int)
    cat.add_argument("--n", type=int, default=3, help="orientation precision (default 3)")
    cat.add_argument("--out", help="write the pair file here")
    cat.add_argument("--format", choices=("text", "json"), default="text")
    cat.set_defaults(func=cmd_catalog)

    cl = sub.add_parser("classify", help="sweep a family over orientations")
    cl.add_argument("what", choices=("family",))
    cl.add_argument("family")
    cl.add_argument("--param", action="append", metavar="K=V1,V2", help="parameter grid")
    cl.add_argument("--row", action="append", metavar="K=V,K=V", help="explicit parameter row")
    cl.add_argument("--p", type=int)
    cl.add_argument("--n", type=int, default=3)
    cl.add_argument("--cap", type=int, default=10**6)
    cl.add_argument("--format", choices=("text", "json"), default="text")
    cl.set_defaults(func=cmd_classify)
    return ap


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "n", 1) is not None and args.n < 1:
        print("error: --n must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    try:
        return args.func(args)
    except SweepTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except InternalInconsistency as exc:
        print(f"error: internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (UsageError, PairFormatError, PresentationError, InvalidOrientation, catalog.BadParameters, BadSubgroup, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
