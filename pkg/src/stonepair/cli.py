"""Command-line interface.

Subcommands: pair, converge, check-measure, eval, entail, soundness,
duality-verify, integrate.  All numeric output uses the canonical text forms
(lowest-terms rationals, ``^o``/``^-`` tags) and is byte-stable across runs.
Exit codes: 0 success, 1 domain/parse/check failures (message on stderr where
appropriate), 2 usage errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence, TextIO

from . import chains, fo, measure as measure_mod, pairing, pl
from .errors import Error, InternalInvariantError
from .gamma import GammaGrid, format_gamma
from .lattice import FiniteLattice, parse_lattice
from .pairing import DirectoryFamily, FenceFamily, StructureFamily


class UsageError(Exception):
    """Wrong flag combination or statically malformed flag value."""


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stonepair",
        description="Exact Stone pairings, lattice measures, and chain duality checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("pair", help="pair a formula against one finite structure")
    p.add_argument("--structure", metavar="PATH")
    p.add_argument("--family", metavar="NAME")
    p.add_argument("--index", type=int, metavar="N")
    p.add_argument("--formula", required=True, metavar="TEXT|@PATH")
    p.add_argument("--vars", metavar="CSV")

    p = sub.add_parser("converge", help="pair a formula along a structure family")
    p.add_argument("--family", required=True, metavar="NAME")
    p.add_argument("--formula", required=True, metavar="TEXT|@PATH")
    p.add_argument("--horizon", type=int, required=True, metavar="N")
    p.add_argument("--vars", metavar="CSV")
    p.add_argument("--csv", metavar="PATH")

    p = sub.add_parser("check-measure", help="validate a measure file")
    p.add_argument("--lattice", metavar="PATH")
    p.add_argument("--measure", required=True, metavar="PATH")

    p = sub.add_parser("eval", help="evaluate a threshold formula")
    p.add_argument("--structure", metavar="PATH")
    p.add_argument("--lattice", metavar="PATH")
    p.add_argument("--measure", metavar="PATH")
    p.add_argument("--formula", required=True, metavar="TEXT|@PATH")

    p = sub.add_parser("entail", help="grid entailment between threshold formulas")
    p.add_argument("--lattice", required=True, metavar="PATH")
    p.add_argument("--grid", type=int, required=True, metavar="K")
    p.add_argument("--lhs", required=True, metavar="TEXT")
    p.add_argument("--rhs", required=True, metavar="TEXT")

    p = sub.add_parser("soundness", help="exhaustive rule soundness on a grid")
    p.add_argument("--lattice", required=True, metavar="PATH")
    p.add_argument("--grid", type=int, required=True, metavar="K")

    p = sub.add_parser("duality-verify", help="chain operator and projection checks")
    p.add_argument("--max-n", type=int, required=True, metavar="N")
    p.add_argument("--max-m", type=int, required=True, metavar="N")

    p = sub.add_parser("integrate", help="integrate the uniform assignment weights")
    p.add_argument("--structure", required=True, metavar="PATH")
    p.add_argument("--formula", required=True, metavar="TEXT|@PATH")
    p.add_argument("--vars", metavar="CSV")

    return parser


def _formula_text(spec: str) -> str:
    if spec.startswith("@"):
        return Path(spec[1:]).read_text()
    return spec


def _load_structure(path: str) -> fo.FiniteStructure:
    return fo.parse_structure(Path(path).read_text())


def _family(name: str) -> StructureFamily:
    if name == "fence":
        return FenceFamily()
    path = Path(name)
    if path.is_dir():
        return DirectoryFamily(path)
    raise Error(f"unknown family {name!r} (not built in, not a directory)")


def _context(args, phi: fo.Formula) -> tuple[str, ...] | None:
    if args.vars is None:
        return None
    ctx = tuple(v.strip() for v in args.vars.split(",") if v.strip())
    if not ctx:
        raise UsageError(f"bad --vars value {args.vars!r}")
    return ctx


def _pair_line(result: pairing.PairingResult) -> str:
    return f"{result.count} {result.total} {result.classical} {format_gamma(result.gamma)}"


def _csv_row(index: int, r: pairing.PairingResult) -> str:
    return f'{index},{r.count},{r.total},{r.classical},"{format_gamma(r.gamma)}"'


def _render_verdict(report: pairing.SequenceReport) -> str:
    v = report.verdict
    if v.kind in (pairing.VerdictKind.CONVERGES_EXACT, pairing.VerdictKind.CONVERGES_APPROX):
        line = f"CONVERGES {format_gamma(v.limit)}"
    elif v.kind is pairing.VerdictKind.DIVERGENT_AT_HORIZON:
        line = f"DIVERGENT odd->{_render_sub(report.odd)} even->{_render_sub(report.even)}"
    else:
        line = "INCONCLUSIVE"
    # closed-form verdicts are exact; everything else is horizon-bounded
    return line if report.exact else line + " (at horizon)"


def _render_sub(v: pairing.Verdict) -> str:
    if v.limit is not None:
        return format_gamma(v.limit)
    return "?"


def _load_measure(args, *, require_lattice_arg: bool = False) -> tuple[FiniteLattice, measure_mod.Measure, str]:
    measure_path = Path(args.measure)
    text = measure_path.read_text()
    ref = measure_mod.measure_lattice_reference(text)
    lattice_path: Path
    if args.lattice is not None:
        lattice_path = Path(args.lattice)
    elif ref is not None:
        lattice_path = measure_path.parent / ref
    else:
        raise UsageError("no lattice given: pass --lattice or add a 'lattice:' line")
    L = parse_lattice(lattice_path.read_text())
    mu = measure_mod.parse_measure(text, L)
    return L, mu, str(lattice_path)


def _cmd_pair(args, out: TextIO) -> int:
    if args.structure is not None:
        A = _load_structure(args.structure)
    elif args.family is not None:
        if args.index is None:
            raise UsageError("--family needs --index")
        A = _family(args.family).structure(args.index)
    else:
        raise UsageError("pass --structure or --family/--index")
    phi = fo.parse_formula(_formula_text(args.formula), A.signature)
    result = pairing.stone_pairing(A, phi, _context(args, phi))
    print(_pair_line(result), file=out)
    return 0


def _cmd_converge(args, out: TextIO) -> int:
    family = _family(args.family)
    probe = family.structure(1)
    phi = fo.parse_formula(_formula_text(args.formula), probe.signature)
    report = pairing.pairing_sequence(
        family, phi, _context(args, phi), horizon=args.horizon
    )
    rows = [_csv_row(i, r) for i, r in enumerate(report.results, start=1)]
    for row in rows:
        print(row, file=out)
    print(_render_verdict(report), file=out)
    if args.csv is not None:
        Path(args.csv).write_text(
            "index,count,total,classical,gamma\n" + "\n".join(rows) + "\n"
        )
    return 0


def _cmd_check_measure(args, out: TextIO) -> int:
    L, mu, _ = _load_measure(args)
    violations = measure_mod.validate_measure(mu)
    if not violations:
        print("OK", file=out)
        return 0
    for v in violations:
        print(v.render(L), file=out)
    return 1


def _cmd_eval(args, out: TextIO) -> int:
    if args.structure is not None:
        A = _load_structure(args.structure)
        phi = pl.parse_pl_formula(_formula_text(args.formula), signature=A.signature)
        value = pl.eval_pl_structure(A, phi)
    elif args.measure is not None:
        L, mu, _ = _load_measure(args)
        phi = pl.parse_pl_formula(_formula_text(args.formula), lattice=L)
        value = pl.eval_pl_measure(mu, phi)
    else:
        raise UsageError("pass --structure, or --lattice/--measure")
    print("TRUE" if value else "FALSE", file=out)
    return 0


def _cmd_entail(args, out: TextIO) -> int:
    L = parse_lattice(Path(args.lattice).read_text())
    lhs = pl.parse_pl_formula(args.lhs, lattice=L)
    rhs = pl.parse_pl_formula(args.rhs, lattice=L)
    result = pl.entails_grid(lhs, rhs, L, args.grid)
    if result.holds:
        print("HOLDS", file=out)
    else:
        print(measure_mod.format_measure(result.countermodel, args.lattice), end="", file=out)
    return 0


def _cmd_soundness(args, out: TextIO) -> int:
    L = parse_lattice(Path(args.lattice).read_text())
    report = pl.check_soundness_grid(L, args.grid)
    failures_by_rule: dict[str, int] = {}
    for inst, _ in report.failures:
        failures_by_rule[inst.rule] = failures_by_rule.get(inst.rule, 0) + 1
    for rule in sorted(report.instance_counts):
        bad = failures_by_rule.get(rule, 0)
        print(
            f"{rule}: {report.instance_counts[rule]} instances, {bad} countermodels",
            file=out,
        )
    print(
        f"total: {report.total_instances} instances over {report.measures_checked} "
        f"grid measures, {len(report.failures)} countermodels",
        file=out,
    )
    return 0 if not report.failures else 1


def _cmd_duality_verify(args, out: TextIO) -> int:
    max_n, max_m = args.max_n, args.max_m
    if max_n < 1 or max_m < 2:
        raise UsageError("need --max-n >= 1 and --max-m >= 2")
    triples = 0
    for n in range(1, max_n + 1):
        bad = chains.check_adjunction(n)
        if bad is not None:
            print(f"adjunction n<={max_n}: FAIL at n={n} {bad}", file=out)
            return 1
        triples += (n + 2) ** 3
    print(f"adjunction n<={max_n}: {triples} triples: PASS", file=out)

    pairs = 0
    for n in range(1, max_n + 1):
        for m in range(2, max_m + 1):
            bad_pair = chains.check_oplus_preserved(n, m)
            if bad_pair is not None:
                print(
                    f"oplus-preservation n<={max_n} m<={max_m}: FAIL at n={n} m={m} {bad_pair}",
                    file=out,
                )
                return 1
            pairs += (n + 2) ** 2
    print(f"oplus-preservation n<={max_n} m<={max_m}: {pairs} pairs: PASS", file=out)

    for n in range(1, max_n + 1):
        for m in range(2, max_m + 1):
            w = chains.find_ominus_counterexample(n, m)
            print(
                f"ominus-counterexample n={n} m={m}: u={w.u} v={w.v}: "
                f"embed(u ominus v)={w.embedded_of_result}, "
                f"embed(u) ominus embed(v)={w.result_of_embedded}",
                file=out,
            )

    for n in range(1, max_n + 1):
        chains.derive_partial_minus(n)
        chains.derive_partial_plus(n)
    print(f"derived-minus n<={max_n}: {max_n} tables: PASS", file=out)
    print(f"derived-plus n<={max_n}: {max_n} tables: PASS", file=out)

    checked = 0
    for n in range(1, max_n + 1):
        for m in range(2, max_m + 1):
            for xa in range(n * m + 1):
                x = chains.ChainPoint(n * m, xa)
                for ya in range(n + 1):
                    y = chains.ChainPoint(n, ya)
                    lhs = chains.ceiling_map(n, m, x).a <= ya
                    rhs = x.a <= chains.embed_point(y, m).a
                    ok1 = lhs == rhs
                    lhs2 = chains.embed_point(y, m).a <= xa
                    rhs2 = ya <= chains.floor_map(n, m, x).a
                    ok2 = lhs2 == rhs2
                    if not (ok1 and ok2):
                        print(
                            f"floor-ceiling n<={max_n} m<={max_m}: FAIL at n={n} m={m} x={x} y={y}",
                            file=out,
                        )
                        return 1
                    checked += 1
    print(f"floor-ceiling n<={max_n} m<={max_m}: {checked} pairs: PASS", file=out)

    cone = 0
    for x in GammaGrid(10).points:
        for n in range(1, max_n + 1):
            for m in range(2, max_m + 1):
                projected = chains.project_gamma(x, n * m)
                if chains.floor_map(n, m, projected) != chains.project_gamma(x, n):
                    print(
                        f"projection-cone grid=10 n<={max_n} m<={max_m}: "
                        f"FAIL at x={format_gamma(x)} n={n} m={m}",
                        file=out,
                    )
                    return 1
                cone += 1
    print(f"projection-cone grid=10 n<={max_n} m<={max_m}: {cone} cases: PASS", file=out)
    return 0


def _cmd_integrate(args, out: TextIO) -> int:
    A = _load_structure(args.structure)
    phi = fo.parse_formula(_formula_text(args.formula), A.signature)
    ctx = _context(args, phi)
    if ctx is None:
        ctx = pairing.default_context(phi)
    f = pairing.assignment_distribution(A, ctx)
    sat = fo.satisfying_set(A, phi, ctx)
    print(format_gamma(measure_mod.integrate(f, sat)), file=out)
    return 0


_COMMANDS = {
    "pair": _cmd_pair,
    "converge": _cmd_converge,
    "check-measure": _cmd_check_measure,
    "eval": _cmd_eval,
    "entail": _cmd_entail,
    "soundness": _cmd_soundness,
    "duality-verify": _cmd_duality_verify,
    "integrate": _cmd_integrate,
}


def run(argv: Sequence[str], stdout: TextIO | None = None, stderr: TextIO | None = None) -> int:
    out = stdout if stdout is not None else sys.stdout
    err = stderr if stderr is not None else sys.stderr
    parser = _build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return _COMMANDS[args.command](args, out)
    except UsageError as exc:
        print(f"usage error: {exc}", file=err)
        return 2
    except InternalInvariantError:
        raise
    except (Error, OSError) as exc:
        print(f"error: {exc}", file=err)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
