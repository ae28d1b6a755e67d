"""Command-line front end: compute, verify, scan, identify.

Group sources are either catalog-spec strings (``dihedral:n=4``) or
``file:<path>`` pointing at one of the two JSON formats accepted by
``load_group_file``.  All reports are machine-readable JSON ("schema": 1)
with exact rationals serialized as decimal strings {"num", "den"}; decimal
renderings are display-only.  Exit codes: 0 ok, 2 input error, 3 budget
exceeded, 4 hypothesis not met (suppressed by --allow-skip).
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Optional

from . import catalog, engine, formulas, groups, symplectic, tensor
from .errors import (
    AbelianInput,
    BudgetExceeded,
    CheckFailed,
    ClosureExceedsCap,
    CommProbError,
    DomainError,
    HypothesisNotMet,
    InvalidParameters,
    NotAGroup,
    NotClass2ExponentP,
    NotNormal,
)

SCHEMA_VERSION = 1
DECIMAL_DIGITS = 20

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_HYPOTHESIS = 4


def decimal_string(value: Fraction, digits: int = DECIMAL_DIGITS) -> str:
    """Display-only rendering to the given number of significant digits."""
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(value.numerator) / Decimal(value.denominator))


def fraction_json(value: Fraction, with_decimal: bool = True) -> dict:
    out = {"num": str(value.numerator), "den": str(value.denominator)}
    if with_decimal:
        out["decimal"] = decimal_string(value)
    return out


def parse_fraction(text: str) -> Fraction:
    num, _, den = text.strip().partition("/")
    try:
        if den:
            return Fraction(int(num), int(den))
        return Fraction(int(num))
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"cannot parse rational {text!r}: {exc}") from None


def resolve_group(source: str) -> groups.FiniteGroup:
    if source.startswith("file:"):
        return groups.load_group_file(source[len("file:") :])
    return catalog.build(source)


def _emit(payload: dict, args) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _stamp(payload: dict, args) -> dict:
    # the stamp sits outside the deterministic body on purpose
    if getattr(args, "stamp", False):
        payload["stamp"] = datetime.now(timezone.utc).isoformat()
    return payload


# -- prob -----------------------------------------------------------------------


def cmd_prob(args) -> int:
    group = resolve_group(args.group)
    results = []
    for r in range(2, args.rmax + 1):
        res = engine.commuting_probability(group, r, method=args.method, budget=args.budget)
        results.append(
            {
                "label": f"P_{r}",
                **fraction_json(res.p_r),
                "comm_count": str(res.comm_count),
                "kappa_prev": str(res.kappa_prev),
            }
        )
    payload = _stamp(
        {
            "schema": SCHEMA_VERSION,
            "command": "prob",
            "group": {"source": args.group, "name": group.name, "order": group.order},
            "method": args.method,
            "results": results,
            "assertions": [],
        },
        args,
    )
    if args.format == "table":
        lines = [f"# {group.name} (order {group.order})"]
        for row in results:
            lines.append(f"{row['label']:>6} = {row['num']}/{row['den']}  ({row['decimal']})")
        text = "\n".join(lines) + "\n"
        if args.output:
            with open(args.output, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    else:
        _emit(payload, args)
    return EXIT_OK


# -- verify suites ----------------------------------------------------------------


def _entry(name: str, passed: bool, expected_pass: bool = True, witness=None) -> dict:
    status = "pass" if passed else "fail"
    expected = "pass" if expected_pass else "fail"
    out = {"name": name, "status": status, "expected": expected, "ok": status == expected}
    if witness is not None:
        out["witness"] = witness
    return out


def _check_entry(name: str, thunk, expected_pass: bool = True) -> dict:
    try:
        thunk()
    except CheckFailed as exc:
        return _entry(name, False, expected_pass, witness=str(exc))
    return _entry(name, True, expected_pass)


def _suite_bounds(group, args) -> list:
    entries = []
    for r in (2, 3, 4):
        entries.append(_check_entry(f"sharp_bound_r{r}", lambda r=r: formulas.check_sharp_bound(group, r)))
        entries.append(
            _check_entry(f"deficit_lower_bound_r{r}", lambda r=r: formulas.deficit_lower_bound(group, r))
        )
    report = formulas.check_sharp_bound(group, 2)
    entries.append(
        _entry(
            "extremal_structure",
            True,
            witness=f"is_equal={report.is_equal}, extremal={report.extremal_structure}",
        )
    )
    return entries


def _suite_cyclic_index(group, args, subgroup) -> list:
    data = formulas.find_cyclic_index_data(group, subgroup=subgroup)
    if data is None:
        raise HypothesisNotMet("no abelian normal subgroup with cyclic quotient")
    entries = [
        _entry(
            "fixed_subgroup_hypothesis",
            data.hypothesis_holds,
            expected_pass=data.hypothesis_holds,
            witness=(
                f"A order {data.n}, omega {data.omega}, f {data.f}"
                + (
                    f"; fails at j={data.failure_witness[0]} with size "
                    f"{data.failure_witness[1]}"
                    if data.failure_witness
                    else ""
                )
            ),
        )
    ]
    expect = data.hypothesis_holds
    for r in range(2, 6):
        formula = formulas.cyclic_index_probability(data.omega, data.n, data.f, r)
        engine_value = engine.commuting_probability(group, r).p_r
        entries.append(
            _entry(
                f"formula_equals_engine_r{r}",
                formula == engine_value,
                expected_pass=expect,
                witness=f"formula {formula}, engine {engine_value}",
            )
        )
        count = formulas.cyclic_index_comm_count(data.omega, data.n, data.f, r)
        entries.append(
            _entry(
                f"comm_count_equals_engine_r{r}",
                count == engine.commuting_probability(group, r).comm_count,
                expected_pass=expect,
            )
        )
    return entries


def _suite_inequalities(group, args) -> list:
    entries = []
    for r in (2, 3, 4):
        entries.append(_check_entry(f"one_step_r{r}", lambda r=r: formulas.one_step_bound(group, r)))
    for n in range(1, 5):
        for m in range(1, 5):
            if n + m <= 5:
                entries.append(
                    _check_entry(
                        f"two_block_n{n}_m{m}",
                        lambda n=n, m=m: formulas.two_block_bounds(group, n, m),
                    )
                )
                entries.append(
                    _check_entry(
                        f"expcentral_n{n}_m{m}",
                        lambda n=n, m=m: formulas.expcentral_bound(group, n, m),
                    )
                )
    if not group.is_abelian():
        for r in (2, 3, 4):
            entries.append(
                _check_entry(f"deficit_r{r}", lambda r=r: formulas.deficit_lower_bound(group, r))
            )
    return entries


def _suite_gap(group, args) -> list:
    report = formulas.gap_p3(group)
    return [
        _entry(
            "gap_p3",
            True,
            witness=(
                f"bound {report.bound}, classification_triggered="
                f"{report.classification_triggered}"
            ),
        )
    ]


def _suite_prime_index(group, args, subgroup) -> list:
    report = formulas.prime_index_equivalences(group, subgroup=subgroup)
    witness = (
        f"f={report.f}, n={report.n}, p={report.p}, "
        f"maximal_abelian_count={report.maximal_abelian_count}"
    )
    return [
        _entry("equivalences_agree", True, witness=witness),
        _entry(
            "extremal",
            report.fixed_ratio_extremal,
            expected_pass=report.fixed_ratio_extremal,
            witness=witness,
        ),
    ]


def _suite_class2(group, args) -> list:
    entries = []
    try:
        t = tensor.extract_tensor(group)
    except NotClass2ExponentP as exc:
        raise HypothesisNotMet(str(exc)) from None
    entries.append(
        _check_entry(
            "rank_distribution_matches_engine",
            lambda: _assert_equal(
                tensor.p2_rank_distribution(t),
                engine.commuting_probability(group, 2).p_r,
                "rank-distribution P_2",
            ),
        )
    )
    z = group.center().order
    for r in (2, 3):
        direct = tensor.isotropic_count_tensor(t, r)
        entries.append(
            _check_entry(
                f"tensor_count_matches_engine_r{r}",
                lambda direct=direct, r=r: _assert_equal(
                    direct * z**r,
                    engine.commuting_probability(group, r).comm_count,
                    f"tensor count r={r}",
                ),
            )
        )
        entries.append(
            _check_entry(
                f"span_recursion_matches_direct_r{r}",
                lambda direct=direct, r=r: _assert_equal(
                    tensor.isotropic_span_count(t, r - 1), direct, f"span count r={r}"
                ),
            )
        )
    entries.append(
        _check_entry("full_contraction", lambda: tensor.full_contraction_group_check(group, t))
    )
    p = symplectic.prime_power(group.order)[0]
    if group.derived_subgroup().order == p:
        entries.append(
            _check_entry(
                "symplectic_reduction", lambda: tensor.verify_symplectic_reduction(group)
            )
        )
    type_report = tensor.heisenberg_type_report(group)
    entries.append(
        _entry(
            "rank_family_necessary_conditions",
            True,
            witness=(
                f"hold={type_report.necessary_conditions_hold}, "
                f"q={type_report.q}, fq_linearity={type_report.fq_linearity}"
            ),
        )
    )
    return entries


def _assert_equal(left, right, what: str) -> None:
    if left != right:
        raise CheckFailed(f"{what}: {left} != {right}")


SUITES = ("bounds", "cyclic-index", "inequalities", "gap", "prime-index", "class2")


def cmd_verify(args) -> int:
    group = resolve_group(args.group)
    subgroup = None
    if args.subgroup_gens:
        gens = [int(x) for x in args.subgroup_gens.split(",")]
        subgroup = group.subgroup_generated(gens)
    try:
        if args.suite == "bounds":
            entries = _suite_bounds(group, args)
        elif args.suite == "cyclic-index":
            entries = _suite_cyclic_index(group, args, subgroup)
        elif args.suite == "inequalities":
            entries = _suite_inequalities(group, args)
        elif args.suite == "gap":
            entries = _suite_gap(group, args)
        elif args.suite == "prime-index":
            entries = _suite_prime_index(group, args, subgroup)
        else:
            entries = _suite_class2(group, args)
    except (HypothesisNotMet, AbelianInput) as exc:
        payload = _stamp(
            {
                "schema": SCHEMA_VERSION,
                "command": "verify",
                "suite": args.suite,
                "group": {"source": args.group, "name": group.name, "order": group.order},
                "results": [],
                "assertions": [
                    {"name": "hypothesis", "status": "skip", "reason": str(exc)}
                ],
            },
            args,
        )
        _emit(payload, args)
        return EXIT_OK if args.allow_skip else EXIT_HYPOTHESIS
    except CheckFailed as exc:
        entries = [_entry("validator", False, witness=str(exc))]
    all_ok = all(e.get("ok", False) for e in entries)
    payload = _stamp(
        {
            "schema": SCHEMA_VERSION,
            "command": "verify",
            "suite": args.suite,
            "group": {"source": args.group, "name": group.name, "order": group.order},
            "results": [],
            "assertions": entries,
        },
        args,
    )
    _emit(payload, args)
    return EXIT_OK if all_ok else 1


# -- scan -------------------------------------------------------------------------


def _parse_range(text: str):
    lo, _, hi = text.partition("..")
    try:
        if hi:
            return range(int(lo), int(hi) + 1)
        return range(int(lo), int(lo) + 1)
    except ValueError:
        raise DomainError(f"bad range {text!r}") from None


def cmd_scan(args) -> int:
    rows = []
    warnings = []
    rmax = args.rmax
    if args.family in ("dihedral", "cyclic"):
        if not args.n:
            raise DomainError("scan needs --n A..B")
        for n in _parse_range(args.n):
            spec = f"{args.family}:n={n}"
            try:
                group = catalog.build(spec)
                values = {
                    f"P_{r}": engine.commuting_probability(group, r).p_r
                    for r in range(2, rmax + 1)
                }
                rows.append(
                    {"name": group.name, "order": group.order, "values": values}
                )
            except (CommProbError,) as exc:
                warnings.append(f"{spec}: {exc}")
                rows.append({"name": spec, "order": None, "failed": str(exc)})
    elif args.family == "heisenberg":
        if not args.q or not args.n:
            raise DomainError("scan heisenberg needs --q Q and --n A..B")
        q = args.q
        if symplectic.prime_power(q) is None:
            raise DomainError(f"q={q} is not a prime power")
        for n in _parse_range(args.n):
            values = {
                f"P_{r}": symplectic.heisenberg_probability(q, n, r)
                for r in range(2, rmax + 1)
            }
            rows.append(
                {"name": f"Heis(q={q},n={n})", "order": q ** (2 * n + 1), "values": values}
            )
    else:
        raise DomainError(f"scan does not support family {args.family!r}")

    if args.format == "csv":
        header = ["name", "order"]
        for r in range(2, rmax + 1):
            header += [f"P_{r}", f"P_{r}_decimal"]
        lines = [",".join(header)]
        for row in rows:
            if "failed" in row:
                lines.append(f"{row['name']},FAILED,{row['failed']}")
                continue
            cells = [str(row["name"]), str(row["order"])]
            for r in range(2, rmax + 1):
                v = row["values"][f"P_{r}"]
                cells += [f"{v.numerator}/{v.denominator}", decimal_string(v)]
            lines.append(",".join(cells))
        text = "\n".join(lines) + "\n"
        if args.output:
            with open(args.output, "w") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
        return EXIT_OK

    payload_rows = []
    for row in rows:
        if "failed" in row:
            payload_rows.append(row)
            continue
        payload_rows.append(
            {
                "name": row["name"],
                "order": row["order"],
                "values": {k: fraction_json(v) for k, v in row["values"].items()},
            }
        )
    payload = _stamp(
        {
            "schema": SCHEMA_VERSION,
            "command": "scan",
            "family": args.family,
            "rows": payload_rows,
            "warnings": warnings,
        },
        args,
    )
    _emit(payload, args)
    return EXIT_OK


# -- identify -----------------------------------------------------------------------


def cmd_identify(args) -> int:
    p2 = parse_fraction(args.p2)
    mode = args.mode
    if mode.startswith("rank1:"):
        p = int(mode.split(":", 1)[1])
        n = symplectic.rank1_identify(p, p2)
        match = None if n is None else {"p": p, "n": n}
    else:
        if not args.p3:
            raise DomainError("heisenberg identification needs --p3")
        p3 = parse_fraction(args.p3)
        qn = symplectic.identify_heisenberg(p2, p3)
        match = None if qn is None else {"q": qn[0], "n": qn[1]}
    payload = _stamp(
        {
            "schema": SCHEMA_VERSION,
            "command": "identify",
            "mode": mode,
            "inputs": {"p2": args.p2, "p3": args.p3},
            "match": match,
        },
        args,
    )
    _emit(payload, args)
    return EXIT_OK


# -- entry point ---------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="commprob",
        description="Exact higher commuting probabilities of finite groups",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("prob", help="compute P_r and orbit counts for a group")
    p.add_argument("group", help="catalog spec or file:<path>")
    p.add_argument("--rmax", type=int, default=4)
    p.add_argument("--method", choices=engine.METHODS, default="kappa_recursion")
    p.add_argument("--budget", type=int, default=engine.DEFAULT_BUDGET)
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.add_argument("--output", "-o")
    p.add_argument("--stamp", action="store_true")
    p.set_defaults(func=cmd_prob)

    v = sub.add_parser("verify", help="run a theorem-validator suite on a group")
    v.add_argument("group")
    v.add_argument("--suite", choices=SUITES, required=True)
    v.add_argument("--allow-skip", action="store_true")
    v.add_argument(
        "--subgroup-gens",
        help="comma-separated element indices generating an explicit subgroup",
    )
    v.add_argument("--output", "-o")
    v.add_argument("--stamp", action="store_true")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("scan", help="tabulate P_r over a family range")
    s.add_argument("family", choices=("dihedral", "cyclic", "heisenberg"))
    s.add_argument("--n", help="range A..B for the family parameter")
    s.add_argument("--q", type=int, help="prime power (heisenberg)")
    s.add_argument("--rmax", type=int, default=3)
    s.add_argument("--format", choices=("rows-structured", "csv"), default="rows-structured")
    s.add_argument("--output", "-o")
    s.add_argument("--stamp", action="store_true")
    s.set_defaults(func=cmd_scan)

    i = sub.add_parser("identify", help="recover family parameters from P_2, P_3")
    i.add_argument("--p2", required=True)
    i.add_argument("--p3")
    i.add_argument("--mode", default="heisenberg", help="heisenberg or rank1:<p>")
    i.add_argument("--output", "-o")
    i.add_argument("--stamp", action="store_true")
    i.set_defaults(func=cmd_identify)
    return parser


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (
        NotAGroup,
        InvalidParameters,
        DomainError,
        NotClass2ExponentP,
        NotNormal,
        ClosureExceedsCap,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (HypothesisNotMet, AbelianInput) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS


if __name__ == "__main__":
    raise SystemExit(main())
