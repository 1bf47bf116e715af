"""Command-line front end.

Subcommands: solve, perfect, census, rough, chain, verify-oeis.  Results go
to stdout (or --out PATH); progress and diagnostics go to stderr, so stdout
is always machine-consumable.  Exit statuses: 0 success, 1 node budget
exhausted, 2 usage error, 3 internal consistency failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .census import (
    CENSUS_CSV_HEADER,
    census_csv_row,
    census_json_dict,
    compare_oeis,
    load_bfile,
    run_chain_census,
    theorem_report,
)
from .errors import BFileParseError, BudgetExceededError, InternalConsistencyError
from .numtheory import build_factor_table, compute_z, rough_count
from .tiling import check_perfect, solve_m, tiling_to_json, verify_tiling

__all__ = ["RunConfig", "parse_args", "dispatch", "main"]

DEFAULT_BUDGET = 10**8

EXIT_OK = 0
EXIT_BUDGET = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3

_FORMATS_BY_COMMAND = {
    "solve": ("text", "json"),
    "perfect": ("text", "json"),
    "census": ("text", "json", "csv"),
    "rough": ("text", "json", "csv"),
    "chain": ("text", "json"),
    "verify-oeis": ("text", "json"),
}


@dataclass(frozen=True)
class RunConfig:
    command: str
    n: int | None = None
    x: int | None = None
    z: int | None = None
    from_n: int | None = None
    to_n: int | None = None
    node_budget: int = DEFAULT_BUDGET
    output_format: str = "text"
    output_path: Path | None = None
    worker_count: int = 1
    bfile: Path | None = None


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mondrian",
        description="Mondrian tilings, the perfect-tiling divisor filter, and rough-number censuses",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help_: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_)
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, dest="node_budget",
                       help="search node budget (placement attempts)")
        p.add_argument("--format", choices=("text", "json", "csv"), default="text",
                       dest="output_format")
        p.add_argument("--out", type=Path, default=None, dest="output_path",
                       help="write results to PATH instead of stdout")
        p.add_argument("--workers", type=int, default=None, dest="worker_count")
        return p

    p = add("solve", "minimum defect M(n) with a tiling certificate")
    p.add_argument("--n", type=int, required=True)

    p = add("perfect", "decide whether an equal-area (defect 0) tiling exists")
    p.add_argument("--n", type=int, required=True)

    p = add("census", "chain census record over [3, x]")
    p.add_argument("--x", type=int, required=True)

    p = add("rough", "count z-rough integers up to x")
    p.add_argument("--x", type=int, required=True)
    p.add_argument("--z", type=int, default=None)

    p = add("chain", "census counts against their asymptotic reference values")
    p.add_argument("--x", type=int, required=True)

    p = add("verify-oeis", "recompute M(n) against an OEIS b-file")
    p.add_argument("--bfile", type=Path, required=True)
    p.add_argument("--from", type=int, required=True, dest="from_n")
    p.add_argument("--to", type=int, required=True, dest="to_n")

    return parser


def parse_args(argv: list[str]) -> RunConfig:
    """Validate argv into a RunConfig; bad usage exits with status 2."""
    parser = _build_parser()
    ns = parser.parse_args(argv)

    workers = ns.worker_count
    if workers is None:
        env = os.environ.get("MONDRIAN_THREADS")
        if env is not None:
            try:
                workers = int(env)
            except ValueError:
                parser.error(f"MONDRIAN_THREADS must be an integer, got {env!r}")
        else:
            workers = 1
    if workers < 1:
        parser.error(f"--workers must be >= 1, got {workers}")
    if ns.node_budget < 1:
        parser.error(f"--budget must be >= 1, got {ns.node_budget}")
    if ns.output_format not in _FORMATS_BY_COMMAND[ns.command]:
        parser.error(f"--format {ns.output_format} is not available for {ns.command}")

    config = RunConfig(
        command=ns.command,
        n=getattr(ns, "n", None),
        x=getattr(ns, "x", None),
        z=getattr(ns, "z", None),
        from_n=getattr(ns, "from_n", None),
        to_n=getattr(ns, "to_n", None),
        node_budget=ns.node_budget,
        output_format=ns.output_format,
        output_path=ns.output_path,
        worker_count=workers,
        bfile=getattr(ns, "bfile", None),
    )

    if config.command in ("solve", "perfect") and config.n < 3:
        parser.error(f"--n must be >= 3, got {config.n}")
    if config.command in ("census", "chain") and config.x < 16:
        parser.error(f"--x must be >= 16, got {config.x}")
    if config.command == "rough":
        if config.x < 1:
            parser.error(f"--x must be >= 1, got {config.x}")
        if config.z is not None and config.z < 0:
            parser.error(f"--z must be >= 0, got {config.z}")
    if config.command == "verify-oeis" and config.from_n < 3:
        parser.error(f"--from must be >= 3, got {config.from_n}")
    return config


def _log(message: str) -> None:
    print(message, file=sys.stderr)


def _emit(config: RunConfig, text: str) -> None:
    if config.output_path is not None:
        config.output_path.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# command bodies
# ---------------------------------------------------------------------------


def _run_solve(config: RunConfig) -> str:
    value, cert = solve_m(config.n, node_budget=config.node_budget)
    if config.output_format == "json":
        return tiling_to_json(cert) + "\n"
    report = verify_tiling(cert)
    lines = [
        f"M({config.n}) = {value}",
        f"defect {report.defect} (min area {report.min_area}, max area {report.max_area})",
        "pieces:",
    ]
    for p in cert.placements:
        lines.append(f"  {p.width}x{p.height} @ ({p.x},{p.y})")
    return "\n".join(lines) + "\n"


def _run_perfect(config: RunConfig) -> str:
    table = build_factor_table(max(config.n, 2))
    outcome = check_perfect(config.n, table, node_budget=config.node_budget)
    if config.output_format == "json":
        obj = {
            "n": outcome.n,
            "verdict": outcome.verdict.value,
            "witness_d": outcome.witness_d,
            "nodes_searched": outcome.nodes_searched,
            "certificate": None
            if outcome.certificate is None
            else json.loads(tiling_to_json(outcome.certificate)),
        }
        return json.dumps(obj) + "\n"
    return outcome.verdict.value + "\n"


def _run_census(config: RunConfig) -> str:
    table = build_factor_table(config.x)
    record = run_chain_census(config.x, table, workers=config.worker_count)
    if config.output_format == "csv":
        return CENSUS_CSV_HEADER + "\n" + census_csv_row(record) + "\n"
    if config.output_format == "json":
        return json.dumps(census_json_dict(record)) + "\n"
    d = census_json_dict(record)
    d.pop("notes")
    return "".join(f"{k} = {v}\n" for k, v in d.items())


def _run_rough(config: RunConfig) -> str:
    z = config.z if config.z is not None else compute_z(config.x)
    count = rough_count(config.x, z, workers=config.worker_count)
    if config.output_format == "json":
        return json.dumps({"x": config.x, "z": z, "count_rough": count}) + "\n"
    if config.output_format == "csv":
        return f"x,z,count_rough\n{config.x},{z},{count}\n"
    return f"{count}\n"


def _run_chain(config: RunConfig) -> str:
    table = build_factor_table(config.x)
    report = theorem_report(config.x, table, workers=config.worker_count)
    if config.output_format == "json":
        return json.dumps(report.as_dict()) + "\n"
    r = report.record
    lines = [
        f"x = {r.x}, z = {r.z}",
        f"chain: rough_small_tau={r.count_rough_small_tau} <= p3={r.count_p3} "
        f"<= p2={r.count_p2} <= p1={r.count_p1}",
        f"count_rough [3..x]          = {r.count_rough}",
        f"x * mertens_product(z)      = {report.product_reference:.6g} "
        f"(ratio {report.rough_to_product_ratio:.6g})",
        f"mertens_rhs  e^-g x / ln z  = {r.mertens_rhs:.6g} "
        f"(ratio {report.rough_to_mertens_ratio:.6g})",
        f"theorem_rhs  e^-g/2 x/lnlnx = {r.theorem_rhs:.6g}",
        f"count_excess_tau            = {r.count_excess_tau}",
    ]
    lines.extend(f"note: {note}" for note in report.notes)
    return "\n".join(lines) + "\n"


def _run_verify_oeis(config: RunConfig) -> tuple[str, int]:
    series = load_bfile(config.bfile)
    outcome = compare_oeis(
        series, config.from_n, config.to_n, node_budget=config.node_budget
    )
    if config.output_format == "json":
        obj = {
            "from": config.from_n,
            "to": config.to_n,
            "mismatches": [list(m) for m in outcome.mismatches],
            "budget_exceeded": list(outcome.budget_exceeded),
        }
        text = json.dumps(obj) + "\n"
    else:
        lines = [f"{len(outcome.mismatches)} mismatches"]
        for n, computed, expected in outcome.mismatches:
            lines.append(f"n={n}: computed {computed}, expected {expected}")
        for n in outcome.budget_exceeded:
            lines.append(f"n={n}: budget exceeded")
        text = "\n".join(lines) + "\n"
    status = EXIT_BUDGET if outcome.budget_exceeded else EXIT_OK
    return text, status


def dispatch(config: RunConfig) -> int:
    """Run the configured command; returns the process exit status."""
    try:
        if config.command == "solve":
            text = _run_solve(config)
        elif config.command == "perfect":
            text = _run_perfect(config)
        elif config.command == "census":
            text = _run_census(config)
        elif config.command == "rough":
            text = _run_rough(config)
        elif config.command == "chain":
            text = _run_chain(config)
        elif config.command == "verify-oeis":
            text, status = _run_verify_oeis(config)
            _emit(config, text)
            return status
        else:  # pragma: no cover - parse_args guarantees the command
            _log(f"unknown command {config.command}")
            return EXIT_USAGE
    except BudgetExceededError as exc:
        _log(f"budget exceeded: {exc}")
        if exc.lower_bound is not None:
            _log(f"proven lower bound: {exc.lower_bound}")
        if exc.unresolved:
            _log(f"unresolved piece areas: {list(exc.unresolved)}")
        return EXIT_BUDGET
    except InternalConsistencyError as exc:
        _log(f"internal consistency error: {exc}")
        return EXIT_INTERNAL
    except (BFileParseError, OSError, ValueError) as exc:
        _log(f"error: {exc}")
        return EXIT_USAGE
    _emit(config, text)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    config = parse_args(sys.argv[1:] if argv is None else argv)
    return dispatch(config)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
