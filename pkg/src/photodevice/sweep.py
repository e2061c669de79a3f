"""Config files, parameter sweeps, figure presets and CSV output."""
from __future__ import annotations

import csv
import logging
import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from .device import solve_device
from .errors import ConfigurationError, InvalidParameterError
from .fcs import counting_spec_particles, noise_drazin
from .model import DeviceParams
from .thermo import conductance, thermo_from_solution

log = logging.getLogger(__name__)

CSV_HEADER = ("U", "nu", "z", "V", "J", "JQ_l", "JQ_r", "JQ_gamma", "sigma_dot", "Q", "G", "D", "SNR", "residual", "regime")
UNDEF = "undef"
AXES = ("U", "nu", "z", "V")
PARAM_KEYS = tuple(f.name for f in fields(DeviceParams))
THERMO_OUTPUTS = frozenset({"J", "JQ_l", "JQ_r", "JQ_gamma", "sigma_dot", "Q"})
ALL_OUTPUTS = THERMO_OUTPUTS | {"G", "D", "SNR"}
DEFAULT_OUTPUTS = THERMO_OUTPUTS | {"D", "SNR"}


@dataclass(frozen=True)
class SweepConfig:
    base: DeviceParams = field(default_factory=DeviceParams)
    axis: str | None = None
    grid: tuple[float, ...] = ()
    outputs: frozenset[str] = DEFAULT_OUTPUTS
    seed: int = 0
    out_path: str | None = None

    def points(self) -> list[DeviceParams]:
        if self.axis is None:
            return [self.base]
        return [self.base.with_(**{self.axis: x}) for x in self.grid]


@dataclass(frozen=True)
class ResultRow:
    U: float
    nu: float
    z: float
    V: float
    J: float | None = None
    JQ_l: float | None = None
    JQ_r: float | None = None
    JQ_gamma: float | None = None
    sigma_dot: float | None = None
    Q: float | str | None = None
    G: float | None = None
    D: float | None = None
    SNR: float | None = None
    residual: float = 0.0
    regime: str = ""


def parse_grid(text: str) -> tuple[float, ...]:
    """``start:stop:step`` (inclusive of ``stop``) or a comma-separated list."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigurationError(f"grid range must be start:stop:step, got {text!r}")
        start, stop, step = map(float, parts)
        if step <= 0:
            raise ConfigurationError("grid step must be positive")
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        values = [round(start + k * step, 12) for k in range(n)]
    else:
        values = [float(v) for v in text.split(",") if v.strip()]
    if not values:
        raise ConfigurationError("empty grid")
    return tuple(values)


def _parse_value(key: str, raw: str):
    if key in PARAM_KEYS:
        return float(raw)
    if key == "axis":
        if raw not in AXES:
            raise ConfigurationError(f"axis must be one of {AXES}, got {raw!r}")
        return raw
    if key == "grid":
        return parse_grid(raw)
    if key == "outputs":
        outs = frozenset(s.strip() for s in raw.split(",") if s.strip())
        bad = outs - ALL_OUTPUTS
        if bad:
            raise ConfigurationError(f"unknown outputs {sorted(bad)}")
        return outs
    if key == "seed":
        return int(raw)
    if key == "out":
        return raw
    raise ConfigurationError(f"unknown key {key!r}")


def parse_assignments(lines, source="<config>") -> dict:
    values = {}
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{source}:{lineno}: expected 'key = value', got {line!r}")
        key, raw = (s.strip() for s in line.split("=", 1))
        try:
            values[key] = _parse_value(key, raw)
        except ValueError as exc:
            if isinstance(exc, ConfigurationError):
                raise ConfigurationError(f"{source}:{lineno}: {exc}") from None
            raise ConfigurationError(f"{source}:{lineno}: bad value for {key!r}: {raw!r}") from None
    return values


def config_from_values(values: dict) -> SweepConfig:
    params = {k: v for k, v in values.items() if k in PARAM_KEYS}
    try:
        base = DeviceParams(**params)
    except InvalidParameterError as exc:
        raise InvalidParameterError(f"invalid parameter: {exc}") from None
    axis = values.get("axis")
    grid = values.get("grid", ())
    if (axis is None) != (not grid):
        raise ConfigurationError("axis and grid must be given together")
    if grid:
        diffs = np.diff(grid)
        if len(grid) > 1 and not (np.all(diffs > 0) or np.all(diffs < 0)):
            raise ConfigurationError("grid must be strictly monotone")
        for x in grid:
            try:
                base.with_(**{axis: x})
            except InvalidParameterError as exc:
                raise InvalidParameterError(f"grid value {axis}={x}: {exc}") from None
    return SweepConfig(
        base=base,
        axis=axis,
        grid=tuple(grid),
        outputs=values.get("outputs", DEFAULT_OUTPUTS),
        seed=values.get("seed", 0),
        out_path=values.get("out"),
    )


def load_config(path=None, overrides=()) -> SweepConfig:
    """Read a flat ``key = value`` file, then apply ``key=value`` overrides."""
    values = {}
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            values.update(parse_assignments(fh, str(path)))
    values.update(parse_assignments(overrides, "--set"))
    return config_from_values(values)


def evaluate_point(params: DeviceParams, outputs=DEFAULT_OUTPUTS, conductance_step: float = 1e-4) -> ResultRow:
    sol = solve_device(params)
    th = thermo_from_solution(sol)
    row = dict(U=params.U, nu=params.nu, z=params.z, V=params.V, residual=sol.lindblad.residual, regime=th.regime)
    values = dict(J=th.J, JQ_l=th.JQ_l, JQ_r=th.JQ_r, JQ_gamma=th.JQ_gamma, sigma_dot=th.sigma_dot,
                  Q=UNDEF if th.Q is None else th.Q)
    if outputs & {"D", "SNR"}:
        noise = noise_drazin(counting_spec_particles("l"), sol.liouvillian, sol.rho)
        values["D"] = noise.D
        values["SNR"] = th.J ** 2 / noise.D if noise.D > 0 else None
    if "G" in outputs:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            values["G"] = conductance(params, h=conductance_step)
        for w in caught:
            log.debug("%s", w.message)
    row.update({k: v for k, v in values.items() if k in outputs})
    return ResultRow(**row)


def _evaluate_task(task):
    params, outputs = task
    return evaluate_point(params, outputs)


def evaluate_many(points: list[DeviceParams], outputs=DEFAULT_OUTPUTS, jobs: int | None = None) -> list[ResultRow]:
    """Evaluate points on a process pool; rows come back in input order."""
    tasks = [(p, frozenset(outputs)) for p in points]
    jobs = jobs or os.cpu_count() or 1
    if jobs <= 1 or len(tasks) < 2:
        return [_evaluate_task(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_evaluate_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))


def run_sweep(config: SweepConfig, jobs: int | None = None) -> list[ResultRow]:
    return evaluate_many(config.points(), config.outputs, jobs)


# --- presets ---------------------------------------------------------------

FIG1B_NU = (0.0, 1.0, 10.0)
FIG2_NU = (25.0, 50.0, 100.0)
FIG2_Z = (1.0, 0.1)
FIG3_U = (0.0, 0.5, 1.0, 1.5, 2.0)
BIAS_U = (0.0, 0.5, 1.0, 1.5, 2.0)
BIAS_Z = (1.0, 0.1)
BIAS_NU = 50.0

U_GRID = "0:2.5:0.05"
Z_GRID = "0:1:0.02"
V_GRID = "0:5:0.05"


def bias_regime_boundaries(params: DeviceParams) -> tuple[float, float]:
    """Biases where ``mu_l`` crosses the HOMO and ``mu_r`` crosses the LUMO."""
    return 2.0 * (params.mu - params.eps_H), 2.0 * (params.eps_L - params.mu)


@dataclass
class PresetResult:
    name: str
    rows: list[ResultRow]
    comments: list[str]


def run_preset(name: str, base: DeviceParams | None = None, jobs: int | None = None) -> PresetResult:
    base = base or DeviceParams()
    thermo_noise = DEFAULT_OUTPUTS
    if name == "fig1b":
        points = [base.with_(U=u, nu=nu, V=0.0) for nu in FIG1B_NU for u in parse_grid(U_GRID)]
        rows = evaluate_many(points, THERMO_OUTPUTS | {"G"}, jobs)
        G0 = conductance(base.with_(U=0.0, nu=0.0, V=0.0))
        rows = [replace(r, G=r.G / G0) for r in rows]
        comments = [f"preset fig1b: G column holds G/G0, G0 = G(U=0, nu=0, z={base.z!r}) = {G0!r}",
                    f"nu values {list(FIG1B_NU)}, U grid {U_GRID}, V = 0"]
    elif name == "fig2":
        points = [base.with_(U=u, nu=nu, z=z, V=1.0) for z in FIG2_Z for nu in FIG2_NU for u in parse_grid(U_GRID)]
        rows = evaluate_many(points, thermo_noise, jobs)
        comments = [f"preset fig2: z values {list(FIG2_Z)}, nu values {list(FIG2_NU)}, U grid {U_GRID}, V = 1"]
    elif name == "fig3":
        points = [base.with_(z=z, U=u, nu=100.0, V=1.0) for u in FIG3_U for z in parse_grid(Z_GRID)]
        rows = evaluate_many(points, THERMO_OUTPUTS, jobs)
        comments = [f"preset fig3: U values {list(FIG3_U)}, z grid {Z_GRID}, nu = 100, V = 1"]
    elif name == "bias":
        points = [base.with_(V=v, U=u, z=z, nu=BIAS_NU) for z in BIAS_Z for u in BIAS_U for v in parse_grid(V_GRID)]
        rows = evaluate_many(points, THERMO_OUTPUTS, jobs)
        lo, hi = bias_regime_boundaries(base)
        comments = [f"preset bias: z values {list(BIAS_Z)}, U values {list(BIAS_U)}, V grid {V_GRID}, nu = {BIAS_NU}",
                    f"regime boundaries V = {lo!r}, {hi!r}"]
    else:
        raise ConfigurationError(f"unknown preset {name!r}; choose from {PRESET_NAMES}")
    return PresetResult(name, rows, comments)


PRESET_NAMES = ("fig1b", "fig2", "fig3", "bias")


# --- CSV -------------------------------------------------------------------

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    return format(float(value), ".17e")


def format_rows(rows) -> list[list[str]]:
    return [[_fmt(getattr(r, c)) for c in CSV_HEADER] for r in rows]


def write_csv(rows, path, comments=()) -> None:
    """UTF-8 CSV; ``comments`` become leading ``# `` lines."""
    if not rows:
        raise ValueError("no rows to write")
    if hasattr(path, "write"):
        _write(rows, path, comments)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        _write(rows, fh, comments)


def _write(rows, fh, comments):
    for c in comments:
        fh.write(f"# {c}\n")
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    writer.writerows(format_rows(rows))


def read_csv(path) -> list[dict[str, str]]:
    with open(path, encoding="utf-8", newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    return list(csv.DictReader(lines))


def parse_row(record: dict[str, str]) -> ResultRow:
    """Inverse of the CSV formatting."""
    out = {}
    for key in CSV_HEADER:
        raw = record[key]
        if key == "regime":
            out[key] = raw
        elif raw == "":
            out[key] = None
        elif raw == UNDEF:
            out[key] = UNDEF
        else:
            out[key] = float(raw)
    return ResultRow(**out)
