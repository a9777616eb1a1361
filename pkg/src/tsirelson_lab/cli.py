"""Command dispatch, report files and plot data.

Results go to --out (written atomically) or to stdout; diagnostics go to stderr. The exit status is the
``code`` of the error that stopped the command: 0 on success, 1 for precondition and input errors, 2 for caps.
"""

import csv
import io
import json
import os
import sys
import tempfile
from contextlib import contextmanager
from typing import Annotated, Any, Callable, Iterator

from pydantic import Field

from . import probes
from .logger import get_logger
from .norm_engine import t2_norm, t_norm, verify_certificate
from .schema import CSV_COLUMNS, Command, GaussianConfig, ProbeReport, ProbeRow, RunConfig, Space
from .schema.exceptions import CertificateError, InputParseError, PreconditionError, TsirelsonError
from .symmetric import dual_t2_norm, s_dual_norm, s_norm
from .vectors import (Saturation, decreasing_rearrange, hierarchy_g, iter_exp, iter_log, kwapien_count, spread,
                      vector_from_json, vector_to_json)

log = get_logger()

DEFAULT_NS = [4, 8, 16, 32]
DEFAULT_BLOCK_LENS = [8, 16, 32, 64]
DEFAULT_SPREAD_FACTORS = [1, 2, 4, 8]

# Plot series of the probes whose rows are not indexed by n.
PROBE_SERIES: dict[str, list[tuple[str, str]]] = {
    "upper-h": [("block_len", "M"), ("block_len", "ratio")],
}


# Files.

def write_atomic(path: str, text: str) -> None:
    """Writes through a temporary file in the target directory, so a failed run leaves no partial file."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=".tsl-", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def _emit(text: str, path: str | None) -> None:
    if path:
        write_atomic(path, text)
        log.info(f"Wrote {path}")
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return f.read()
    except OSError as e:
        log.error(f"Cannot read {path}: {e}")
        raise InputParseError(message=f"Cannot read {path}: {e.strerror or e}")


def read_vector(path: str):
    return vector_from_json(_read_text(path), source=path)


def _dumps(payload: Any) -> str:
    # json writes floats with repr, the shortest string that round-trips.
    return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"


def _format_cell(value: Any) -> str:
    if isinstance(value, float):
        return "%.17g" % value
    return str(value)


def report_to_csv(report: ProbeReport) -> str:
    extras = report.extra_columns
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow([*CSV_COLUMNS, *extras])
    for row in report.rows:
        cells = [report.probe, report.space, row.n, float(row.estimate), float(row.stderr), float(row.ratio),
                 row.seed, row.samples]
        cells += [float(row.extras[name]) if name in row.extras else "" for name in extras]
        writer.writerow([_format_cell(c) for c in cells])
    return buffer.getvalue()


def write_report_csv(report: ProbeReport, path: str | None) -> None:
    _emit(report_to_csv(report), path)


def read_report_csv(path: str) -> ProbeReport:
    """Parses a report written by write_report_csv; extra columns come back as extras."""
    text = _read_text(path)
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if header is None or tuple(header[:len(CSV_COLUMNS)]) != CSV_COLUMNS:
        raise InputParseError(message=f"{path}: expected a report header starting with {','.join(CSV_COLUMNS)}",
                              line=1, column=1)
    extras = header[len(CSV_COLUMNS):]
    probe, space, rows = "", "", []
    for line, cells in enumerate(reader, start=2):
        if not cells:
            continue
        if len(cells) != len(header):
            raise InputParseError(message=f"{path}: line {line} has {len(cells)} cells, expected {len(header)}",
                                  line=line, column=1)
        try:
            probe, space = cells[0], cells[1]
            rows.append(ProbeRow(n=int(cells[2]), estimate=float(cells[3]), stderr=float(cells[4]),
                                 ratio=float(cells[5]), seed=int(cells[6]), samples=int(cells[7]),
                                 extras={name: float(v) for name, v in zip(extras, cells[len(CSV_COLUMNS):]) if v}))
        except ValueError as e:
            raise InputParseError(message=f"{path}: line {line}: {e}", line=line, column=1)
    return ProbeReport(probe=probe, space=space, rows=rows,
                       series=PROBE_SERIES.get(probe, [("n", "ratio")]))


def _series_path(path: str, x: str, y: str) -> str:
    stem, ext = os.path.splitext(path)
    return f"{stem}_{x}_{y}{ext or '.csv'}"


def emit_plot_data(
        report: Annotated[ProbeReport, Field(description="Report whose declared series are written.")],
        path: Annotated[str, Field(description="Target CSV; further series get '_<x>_<y>' appended to the stem.")],
) -> Annotated[list[str], Field(description="The files written, one per series.")]:
    """Writes one two-column (x, y) CSV per declared series.

    Raises:
        PreconditionError: If the report has no rows.
    """
    if not report.rows:
        log.error(f"Report '{report.probe}' is empty, nothing to plot")
        raise PreconditionError(message=f"Report '{report.probe}' has no rows to plot")
    written = []
    for k, (x, y) in enumerate(report.series):
        target = path if k == 0 else _series_path(path, x, y)
        lines = [f"{x},{y}"]
        lines += [f"{_format_cell(float(a))},{_format_cell(float(b))}"
                  for a, b in zip(report.column(x), report.column(y))]
        write_atomic(target, "\n".join(lines) + "\n")
        written.append(target)
    return written


# Commands.

@contextmanager
def _overrides(config: RunConfig) -> Iterator[None]:
    """Exposes --max-support and --tol to the engines through TSL_MAX_SUPPORT and TSL_NORM_TOL for the
    duration of a command."""
    values = {"TSL_NORM_TOL": repr(config.tol)}
    if config.max_support is not None:
        values["TSL_MAX_SUPPORT"] = str(config.max_support)
    previous = {name: os.environ.get(name) for name in values}
    os.environ.update(values)
    try:
        yield
    finally:
        for name, value in previous.items():
            if value is None:
                os.environ.pop(name, None)
            else:
                os.environ[name] = value


def _replayed(x, result, tol: float) -> float:
    """Replays the norming tree of ``result`` on ``x``; it must match the reported value within ``tol``, relative
    above 1."""
    replayed = verify_certificate(x, result.certificate)
    if abs(replayed - result.value) > tol * max(1.0, result.value):
        log.error(f"Certificate replays to {replayed!r}, the engine reported {result.value!r}")
        raise CertificateError(message=f"Certificate replays to {replayed!r} but the norm is {result.value!r} "
                                       f"(tolerance {tol:g})")
    return replayed


def _write_certificate(config: RunConfig, certificate) -> None:
    if config.certificate:
        write_atomic(config.certificate, _dumps(certificate.to_json()))


# The result is written before the certificate, so a failed --out never leaves a certificate behind.

def cmd_norm(config: RunConfig) -> None:
    x = read_vector(config.inputs[0])
    engine = t_norm if config.space == Space.T else t2_norm
    result = engine(x, max_support=config.max_support)
    replayed = _replayed(x, result, config.tol)
    _emit(_dumps({"space": config.space.value, "value": result.value, "iterations": result.iterations,
                  "support": x.support_size, "replayed": replayed}), config.output)
    _write_certificate(config, result.certificate)


def cmd_snorm(config: RunConfig) -> None:
    x = read_vector(config.inputs[0])
    result = s_norm(x, max_support=config.max_support)
    replayed = _replayed(result.rearranged, result.inner, config.tol)
    _emit(_dumps({"space": Space.ST2.value, "value": result.value, "iterations": result.inner.iterations,
                  "rearranged": result.rearranged.to_literal(), "replayed": replayed}), config.output)
    _write_certificate(config, result.inner.certificate)


def cmd_dualnorm(config: RunConfig) -> None:
    y = read_vector(config.inputs[0])
    if config.space == Space.ST2:
        pair = s_dual_norm(y, gap_target=config.gap_target, max_support=config.max_support)
    else:
        pair = dual_t2_norm(y, gap_target=config.gap_target, max_support=config.max_support)
    _emit(_dumps({"space": config.space.value, "lower": pair.lower, "upper": pair.upper, "gap": pair.gap,
                  "iterations": pair.iterations, "witness": pair.witness.to_literal()}), config.output)


def cmd_rearrange(config: RunConfig) -> None:
    _emit(vector_to_json(decreasing_rearrange(read_vector(config.inputs[0]))) + "\n", config.output)


def cmd_spread(config: RunConfig) -> None:
    x = read_vector(config.inputs[0])
    k, j = int(config.params.get("k", 1)), int(config.params.get("j", 0))
    _emit(vector_to_json(spread(x, k, j)) + "\n", config.output)


def cmd_hierarchy(config: RunConfig) -> None:
    params = config.params
    kind = params.get("kind", "g")
    if kind == "g":
        value = hierarchy_g(int(params.get("i", 0)), int(params.get("n", 1)))
    elif kind == "exp":
        value = iter_exp(int(params.get("i", 0)), float(params.get("n", 1)))
    elif kind == "log":
        value = iter_log(int(params.get("i", 0)), float(params.get("n", 1)))
    elif kind == "kwapien":
        value = kwapien_count(int(params.get("k", 1)), float(params.get("eps", 0.5)))
    else:
        raise PreconditionError(message=f"Unknown hierarchy function '{kind}', use g, exp, log or kwapien")
    payload = {"kind": kind, **{k: v for k, v in params.items() if k != "kind"},
               "value": value.value if isinstance(value, Saturation) else value}
    if isinstance(payload["value"], float) and payload["value"] == float("inf"):
        payload["value"] = "inf"
    _emit(_dumps(payload), config.output)


def _gaussian(config: RunConfig) -> GaussianConfig:
    return GaussianConfig(samples=config.samples, seed=config.seed, workers=config.workers)


def _probe_space(config: RunConfig) -> Space:
    if config.space == Space.T:
        raise PreconditionError(message="Probes run in 't2' or 'st2'")
    return config.space


def _probe_report(config: RunConfig) -> ProbeReport:
    params = config.params
    ns = [int(n) for n in params.get("ns") or DEFAULT_NS]
    offset = int(params.get("offset", 1))
    space = _probe_space(config)
    cfg = _gaussian(config)
    available: dict[str, Callable[[], ProbeReport]] = {
        "cotype": lambda: probes.cotype_trend(ns, cfg, space, float(params.get("q", 2.0)), offset),
        "type": lambda: probes.type_trend(ns, cfg, space, float(params.get("p", 2.0)), offset),
        "prop-p": lambda: probes.property_p_trend(ns, cfg, space, offset),
        "separated": lambda: _separated(ns, int(params.get("N", 64)), cfg, int(params.get("families", 1)), space),
        "h-growth": lambda: probes.h_growth_trend(ns, space, offset),
        "upper-h": lambda: probes.upper_h_sweep([int(b) for b in params.get("block_lens") or DEFAULT_BLOCK_LENS],
                                                int(params.get("copies", 16))),
        "spread": lambda: probes.spread_report(probes.harmonic_block(int(params.get("block_len", 16))),
                                               [int(n) for n in params.get("ns") or DEFAULT_SPREAD_FACTORS]),
        "distortion": lambda: probes.distortion_trend(ns, cfg, space, offset,
                                                      int(params.get("candidates", probes.DEFAULT_CANDIDATES))),
        "lower-h2": lambda: probes.lower_h2_witness(ns),
    }
    if config.probe not in available:
        names = ", ".join(available)
        log.error(f"Unknown probe '{config.probe}'")
        raise PreconditionError(message=f"Unknown probe '{config.probe}', use one of: {names}")
    log.info(f"Running probe '{config.probe}' with {params}")
    return available[config.probe]()


def _separated(ns: list[int], N: int, cfg: GaussianConfig, families: int, space: Space) -> ProbeReport:
    report = None
    for n in ns:
        part = probes.separated_family_probe(n, N, cfg, families, space=space)
        report = part if report is None else report.merged(part)
    return report


def cmd_probe(config: RunConfig) -> None:
    write_report_csv(_probe_report(config), config.output)


def cmd_plot_data(config: RunConfig) -> None:
    report = read_report_csv(config.inputs[0])
    if config.output:
        emit_plot_data(report, config.output)
        return
    if not report.rows:
        raise PreconditionError(message=f"Report '{report.probe}' has no rows to plot")
    x, y = report.series[0]
    lines = [f"{x},{y}"] + [f"{_format_cell(float(a))},{_format_cell(float(b))}"
                            for a, b in zip(report.column(x), report.column(y))]
    _emit("\n".join(lines) + "\n", None)


COMMANDS: dict[Command, Callable[[RunConfig], None]] = {
    Command.NORM: cmd_norm,
    Command.SNORM: cmd_snorm,
    Command.DUALNORM: cmd_dualnorm,
    Command.REARRANGE: cmd_rearrange,
    Command.SPREAD: cmd_spread,
    Command.PROBE: cmd_probe,
    Command.HIERARCHY: cmd_hierarchy,
    Command.PLOT_DATA: cmd_plot_data,
}


def run(
        config: Annotated[RunConfig, Field(description="Validated invocation.")],
) -> Annotated[int, Field(description="Exit status: 0 success, 1 precondition or input error, 2 cap exceeded.")]:
    name = config.command.value
    try:
        try:
            with _overrides(config):
                COMMANDS[config.command](config)
        except TsirelsonError:
            raise
        except BaseException as e:
            import traceback
            log.error(f"Error running command '{name}': {e}:\n{traceback.format_exc()}")
            raise TsirelsonError(message=f"Error running command '{name}': {e}", code=1)
    except TsirelsonError as e:
        print(f"tsirelson-lab {name}: {e}", file=sys.stderr)
        return e.code or 1
    return 0
