from __future__ import annotations

import argparse
import logging
import sys

from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Callable, Dict, List, NoReturn, Optional, Sequence

from . import __version__
from .config import RunConfig
from .enums import Commands, ExitStatus, OutputFormat, Side
from .exactnum import DyadicInterval, DyadicRational
from .exceptions import CostGuard, InsufficientDepth, OdogibbsError, OutOfScope, UsageError
from .formats import Deserializer, Reader, Serializer
from .language import Word, subword_violations
from .measure import family_measures, monte_carlo_cylinder
from .odometer import derive_seed, sample_point
from .report import Report, Row
from .session import Session
from .thermo import partition_sum_Qn
from .thermo.lemmas import MU_BETA_BAND, check_measure_bounds

# Flags shared by every command, mapped to configuration keys.
COMMON_FLAGS: Dict[str, Dict[str, Any]] = {
    "--depth": {"help": "language build depth"},
    "--max-len": {"help": "longest word of the language table"},
    "--n-max": {"help": "largest n for partition sums and the Gibbs range"},
    "--tolerance": {"help": "measure tolerance, for instance 2^-24"},
    "--depth-cap": {"help": "deepest residue level for measures"},
    "--seed": {"help": "seed of every random stream"},
    "--samples": {"help": "number of seeded samples"},
    "--workers": {"help": "worker threads"},
    "--series-terms": {"help": "terms of the nu(A) series"},
    "--scan-limit": {"help": "bit scan limit per letter"},
    "--threshold-scale": {"help": "multiplies the Gibbs threshold"},
}

MIN_GIBBS_N: int = 5


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        raise UsageError(f"{self.prog}: {message}")


class RunPlan:
    """
    A fully resolved invocation.

    Attributes
    ----------
    command:
        The subcommand to run.
    config:
        Defaults, then the configuration file, then the flags.
    output:
        Output format.
    options:
        Command specific options.
    """

    __slots__ = ("command", "config", "output", "out", "options", "verbosity")

    def __init__(
        self,
        command: Commands,
        config: RunConfig,
        output: OutputFormat = OutputFormat.JSON,
        out: Optional[Path] = None,
        options: Optional[Dict[str, Any]] = None,
        verbosity: int = 0,
    ) -> None:
        self.command: Commands = command
        self.config: RunConfig = config
        self.output: OutputFormat = output
        self.out: Optional[Path] = out
        self.options: Dict[str, Any] = dict(options or {})
        self.verbosity: int = verbosity

    def __repr__(self) -> str:
        return f"<RunPlan(command={self.command.value}, output={self.output.value}, options={self.options})>"

    @property
    def seed(self) -> int:
        return self.config.seed

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RunPlan):
            return NotImplemented
        return (self.command, self.config, self.output, self.out, self.options) == (
            other.command,
            other.config,
            other.output,
            other.out,
            other.options,
        )


def _int_list(text: str) -> List[int]:
    try:
        values = [int(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text!r} is not a comma separated list of integers.") from None
    if not values:
        raise argparse.ArgumentTypeError("The list is empty.")
    return values


def _common() -> argparse.ArgumentParser:
    parent = _Parser(add_help=False)
    for flag, settings in COMMON_FLAGS.items():
        parent.add_argument(flag, default=None, **settings)

    parent.add_argument("--allow-large", action="store_true", default=None, help="allow n up to 20")
    parent.add_argument("--format", choices=[f.value for f in OutputFormat], default=OutputFormat.JSON.value)
    parent.add_argument("--out", type=Path, default=None, help="write the report to FILE")
    parent.add_argument("--config", type=Path, default=None, help="key=value configuration file")
    parent.add_argument("--table", default=None, help="read the language table from PREFIX.under and PREFIX.over")
    parent.add_argument("-v", "--verbose", action="count", default=0)
    return parent


def build_parser() -> argparse.ArgumentParser:
    parent = _common()
    parser = _Parser(prog="odogibbs", description="Exact checks on the odometer coded subshift.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    language = commands.add_parser(Commands.LANGUAGE.value, parents=[parent], help="build the language table")
    language.add_argument("--save", default=None, help="write PREFIX.under and PREFIX.over")

    measure = commands.add_parser(Commands.MEASURE.value, parents=[parent], help="cylinder and family measures")
    measure.add_argument("--word", default=None, help="word of a and b letters")
    measure.add_argument("--monte-carlo", action="store_true", help="add a sampled estimate of the word")
    measure.add_argument("--k-max", type=int, default=None, help="add nu(A_k) and nu(E_k) rows up to k")

    pressure = commands.add_parser(Commands.PRESSURE.value, parents=[parent], help="pressure enclosure")
    pressure.add_argument("--trend", action="store_true", help="add (1/n) log Q_n rows up to --n-max")

    commands.add_parser(Commands.GIBBS_O.value, parents=[parent], help="Gibbs ratio at the fixed point")

    scan = commands.add_parser(Commands.VW_SCAN.value, parents=[parent], help="very weak Gibbs scan")
    scan.add_argument("--ns", type=_int_list, default=[16, 32], help="comma separated window lengths")
    scan.add_argument("--proxy-samples", type=int, default=20, help="orbits for the ergodicity proxy, 0 to skip")
    scan.add_argument("--steps", type=int, default=1 << 16, help="orbit length for the ergodicity proxy")

    orbit = commands.add_parser(Commands.ORBIT.value, parents=[parent], help="block structure of orbits")
    orbit.add_argument("--k", type=_int_list, default=list(range(5, 11)), help="comma separated values of k")
    orbit.add_argument("--horizon", type=int, default=1 << 16)

    commands.add_parser(Commands.LEMMAS.value, parents=[parent], help="verify every lemma")
    return parser


def parse_args(argv: Optional[Sequence[str]] = None) -> RunPlan:
    """
    Resolves the command line into a plan.

    Raises
    ------
    UsageError
        An unknown flag, a bad value or a parameter out of range.
    """
    namespace = build_parser().parse_args(list(argv) if argv is not None else None)
    values: Dict[str, Any] = vars(namespace)

    config: RunConfig = RunConfig.load(values["config"]) if values["config"] else RunConfig()
    flags: Dict[str, Any] = {}
    for flag in COMMON_FLAGS:
        key: str = flag[2:].replace("-", "_")
        if values.get(key) is not None:
            flags[key] = values[key]
    if values.get("allow_large"):
        flags["allow_large"] = True
    config.update(flags)

    command = Commands(values["command"])
    options: Dict[str, Any] = {"table": values.get("table")}

    if command is Commands.LANGUAGE:
        options["save"] = values["save"]
    elif command is Commands.MEASURE:
        if values["word"] is not None:
            try:
                Word.parse(values["word"])
            except ValueError as exception:
                raise UsageError(str(exception)) from None
        if values["k_max"] is not None and not MIN_GIBBS_N <= values["k_max"] <= config.depth_cap:
            raise UsageError(f"--k-max must lie in [{MIN_GIBBS_N}, {config.depth_cap}].")
        options.update(word=values["word"], monte_carlo=values["monte_carlo"], k_max=values["k_max"])
    elif command is Commands.PRESSURE:
        options["trend"] = values["trend"]
    elif command is Commands.GIBBS_O:
        if config.n_max < MIN_GIBBS_N:
            raise UsageError(f"gibbs-o needs --n-max >= {MIN_GIBBS_N}, got {config.n_max}.")
        options["ns"] = list(range(MIN_GIBBS_N, config.n_max + 1))
    elif command is Commands.VW_SCAN:
        if min(values["ns"]) < 1 or values["proxy_samples"] < 0 or values["steps"] < 1:
            raise UsageError("--ns, --proxy-samples and --steps must be positive.")
        options.update(ns=sorted(set(values["ns"])), proxy_samples=values["proxy_samples"], steps=values["steps"])
    elif command is Commands.ORBIT:
        if min(values["k"]) < MIN_GIBBS_N or values["horizon"] < 2:
            raise UsageError(f"--k must be at least {MIN_GIBBS_N} and --horizon at least 2.")
        options.update(k=sorted(set(values["k"])), horizon=values["horizon"])

    return RunPlan(command, config, OutputFormat(values["format"]), values["out"], options, values["verbose"])


def _meta(plan: RunPlan, session: Session) -> Dict[str, Any]:
    params: Dict[str, Any] = dict(plan.config.as_dict())
    params.update(
        beta_weight=session.params.beta_weight,
        cusp_coeff=session.params.cusp_coeff,
        cusp_exp=session.params.cusp_exp,
        min_run=session.params.min_run,
    )
    params.update({key: value for key, value in plan.options.items() if value is not None})
    return {
        "command": plan.command.value,
        "version": __version__,
        "seed": plan.seed,
        "params": params,
        "timestamp": datetime.now(timezone.utc).isoformat().replace("+00:00", "Z"),
    }


def _load_table(prefix: str) -> Any:
    try:
        under = Reader(Path(f"{prefix}.under").read_bytes())
        over = Reader(Path(f"{prefix}.over").read_bytes())
        return Deserializer().load_language(under, over)
    except (OSError, ValueError) as exception:
        raise UsageError(f"Cannot read the language table {prefix}: {exception}") from None


def _language(plan: RunPlan, session: Session) -> Report:
    table = session.table()
    rows: List[Row] = []
    for d in range(1, table.max_len + 1):
        under, over = table.count(d)
        bound: int = 2 * (d + 1) ** 3
        rows.append(
            {
                "n": d,
                "under": under,
                "over": over,
                "bound": bound,
                "subword_violations": subword_violations(table, d),
                "pass": under <= bound,
            }
        )

    if plan.options.get("save"):
        serializer = Serializer()
        for side in Side:
            Path(f"{plan.options['save']}.{side.value}").write_text(serializer.serialize_language(table, side))

    return Report(plan.command, rows, checks_passed=all(row["pass"] for row in rows))


def _measure(plan: RunPlan, session: Session) -> Report:
    config: RunConfig = plan.config
    rows: List[Row] = []
    passed, converged = True, True

    word: Optional[str] = plan.options.get("word")
    if word is not None:
        result = session.measure(Word.parse(word))
        rows.append(result.as_row(word))
        converged = result.converged

        if plan.options.get("monte_carlo"):
            estimate = monte_carlo_cylinder(Word.parse(word), config.samples, config.seed, config.scan_limit, session.pool)
            rows.append(
                {
                    "event": f"{word} sampled",
                    "estimate": estimate.estimate,
                    "standard_error": estimate.standard_error,
                    "discards": estimate.discards,
                    "discard_fraction": estimate.discard_fraction,
                }
            )
    else:
        series: DyadicInterval = session.series()
        measured = session.mu_beta()
        rows.append({"event": "nu(A) series", "lo": series.lo, "hi": series.hi, "converged": True})
        rows.append(measured.as_row("b"))

        narrow: DyadicRational = DyadicRational.power_of_two(-20)
        passed = (
            MU_BETA_BAND.contains(series)
            and check_measure_bounds([series, measured.interval]).violations == 0
            and measured.interval.width() <= narrow
        )
        converged = measured.converged

    k_max: Optional[int] = plan.options.get("k_max")
    if k_max is not None:
        for row in family_measures(k_max, config.tolerance, config.depth_cap):
            rows.append(
                {
                    "event": f"family k={row.k:03d}",
                    "k": row.k,
                    "a_k": row.a_k,
                    "lo": row.e_k.lo,
                    "hi": row.e_k.hi,
                    "h_k": row.h_k,
                    "pass": row.within_bound,
                    "converged": row.converged,
                }
            )
            passed = passed and row.within_bound
            converged = converged and row.converged

    return Report(plan.command, rows, checks_passed=passed, converged=converged)


def _pressure(plan: RunPlan, session: Session) -> Report:
    level: DyadicInterval = session.pressure()
    view = level.to_real()
    rows: List[Row] = [{"kind": "pressure", "lo": level.lo, "hi": level.hi, "real_lo": view.lo, "real_hi": view.hi}]

    if plan.options.get("trend"):
        table = session.table()
        for n in range(1, plan.config.n_max + 1):
            qn = partition_sum_Qn(
                n, table, session.params, n_max=plan.config.n_max, allow_large=plan.config.allow_large, pool=session.pool
            )
            rows.append({"kind": "trend", "n": n, "qn_lo": qn.lo, "qn_hi": qn.hi, "rate": (qn.log() * (1.0 / n)).hi})

    return Report(plan.command, rows)


def _gibbs(plan: RunPlan, session: Session) -> Report:
    reports = [session.gibbs(n) for n in plan.options["ns"]]
    return Report(
        plan.command,
        [report.as_row() for report in reports],
        checks_passed=all(report.satisfied and report.beats_uniform for report in reports),
        converged=all(report.measure.converged for report in reports),
    )


def _scan(plan: RunPlan, session: Session) -> Report:
    report = session.scan(plan.options["ns"])
    rows: List[Row] = [row.as_row() for row in report.rows]
    rows.append(report.summary())
    rows.extend({"kind": "non-generic", "sample": index} for index in report.non_generic)

    passed: bool = report.gate
    if plan.options["proxy_samples"]:
        proxy = session.proxy(plan.options["proxy_samples"], plan.options["steps"])
        rows.extend(row.as_row() for row in proxy)
        passed = passed and all(row.passed for row in proxy)

    return Report(plan.command, rows, checks_passed=passed, converged=report.converged)


def _orbit(plan: RunPlan, session: Session) -> Report:
    rows: List[Row] = []
    passed: bool = True

    for sample in range(plan.config.samples):
        point = sample_point(derive_seed(plan.seed, sample))
        for k in plan.options["k"]:
            result = session.orbit(point, k, plan.options["horizon"])
            if result.failure:
                rows.append({"sample": sample, "k": k, "flag": result.error})
                continue

            structure = result.unwrap()
            rows.append(structure.as_row(sample))
            passed = passed and structure.violations == 0

    return Report(plan.command, rows, checks_passed=passed)


def _lemmas(plan: RunPlan, session: Session) -> Report:
    rows = session.lemmas()
    return Report(
        plan.command,
        [row.as_row() for row in rows],
        columns=("id", "instances", "worst_margin", "pass", "violations", "gate"),
        checks_passed=all(row.passed for row in rows if row.gate),
    )


HANDLERS: Dict[Commands, Callable[[RunPlan, Session], Report]] = {
    Commands.LANGUAGE: _language,
    Commands.MEASURE: _measure,
    Commands.PRESSURE: _pressure,
    Commands.GIBBS_O: _gibbs,
    Commands.VW_SCAN: _scan,
    Commands.ORBIT: _orbit,
    Commands.LEMMAS: _lemmas,
}


def execute(plan: RunPlan, session: Optional[Session] = None) -> Report:
    """
    Runs a plan.

    Raises
    ------
    UsageError
        A parameter is out of scope for the computation it feeds.
    """
    if session is None:
        table = _load_table(plan.options["table"]) if plan.options.get("table") else None
        session = Session(plan.config, table=table)

    try:
        report: Report = HANDLERS[plan.command](plan, session)
    except (CostGuard, InsufficientDepth, OutOfScope) as exception:
        raise UsageError(str(exception)) from None

    report.meta.update(_meta(plan, session))
    logging.info("cli -> %s finished with status %s.", plan.command.value, report.status.name)
    return report


def render(report: Report, output: OutputFormat) -> bytes:
    return Serializer().render(report, output)


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Console entry point. Returns the exit status."""
    try:
        plan: RunPlan = parse_args(argv)
        if plan.verbosity:
            logging.basicConfig(
                level=logging.DEBUG if plan.verbosity > 1 else logging.INFO,
                format="%(asctime)s %(levelname)s %(message)s",
            )

        report: Report = execute(plan)
    except UsageError as exception:
        print(f"odogibbs: {exception}", file=sys.stderr)
        return ExitStatus.USAGE.value
    except OdogibbsError as exception:
        print(f"odogibbs: {exception}", file=sys.stderr)
        return ExitStatus.NOT_CONVERGED.value

    payload: bytes = render(report, plan.output)
    if plan.out is not None:
        plan.out.write_bytes(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()

    return report.status.value
