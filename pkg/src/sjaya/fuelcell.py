"""PEM fuel-cell stack design: polarization model, max power point, cost.

A stack is N_p parallel groups of N_s series cells of area A_cell (cm^2).
Stack voltage as a function of the aggregate load current density
i_load_d (mA/cm^2) combines the Nernst e.m.f. with activation,
concentration and ohmic losses:

    V_st = N_s * { E_nernst - A*ln(j/i_0_d) + B*ln(1 - j/i_limit_d) - j*r_a }
    with j = i_load_d / N_p + i_n_d

Units: current densities in mA/cm^2, r_a in kOhm*cm^2 (so j*r_a is volts),
load current I = i_load_d * A_cell / 1000 amperes, power P = V_st * I watts.

The design cost penalizes cell count, cell area, distance of the
maximum-power-point voltage from the rated voltage, and any shortfall of
the maximum power against the rated power.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Union

import numpy as np

from .problem import Bounds, Problem

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib


@dataclass(frozen=True)
class CellParams:
    """Electrochemical constants and cost coefficients (defaults as rated)."""

    e_nernst: float = 1.04       # V
    a: float = 0.05              # V, activation-loss slope
    b: float = 0.08              # V, concentration-loss slope
    r_a: float = 98.0e-6         # kOhm*cm^2, area-specific resistance
    i_limit_d: float = 129.0     # mA/cm^2
    i_0_d: float = 0.21          # mA/cm^2
    i_n_d: float = 1.26          # mA/cm^2, internal/crossover density
    v_load_rated: float = 12.0   # V
    p_load_rated: float = 200.0  # W
    k_n: float = 0.5             # cost per cell
    k_diff: float = 10.0         # cost per volt off the rated voltage
    k_a: float = 0.001           # cost per cm^2
    c: float = 200.0             # penalty per watt of power shortfall

    def __post_init__(self):
        for f in fields(self):
            if getattr(self, f.name) <= 0:
                raise ValueError(f"parameter {f.name} must be positive")
        if self.i_n_d >= self.i_limit_d:
            raise ValueError("i_n_d must be below i_limit_d")

    @classmethod
    def from_mapping(cls, mapping: dict) -> "CellParams":
        unknown = set(mapping) - {f.name for f in fields(cls)}
        if unknown:
            raise ValueError(f"unknown fuel-cell parameters: {sorted(unknown)}")
        return replace(cls(), **{k: float(v) for k, v in mapping.items()})


def load_params(path: Union[str, Path]) -> CellParams:
    """Read parameters from a TOML or JSON file of field-name keys."""
    path = Path(path)
    if path.suffix.lower() == ".json":
        mapping = json.loads(path.read_text())
    else:
        with open(path, "rb") as fh:
            mapping = tomllib.load(fh)
    return CellParams.from_mapping(mapping)


@dataclass(frozen=True)
class StackDesign:
    """Series cells per group, parallel groups, and cell area in cm^2."""

    n_s: float
    n_p: float
    a_cell: float


@dataclass(frozen=True)
class PowerPoint:
    p_load_max: float   # W
    v_load_mpp: float   # V
    i_at_mpp: float     # mA/cm^2, aggregate load current density


DESIGN_BOUNDS = Bounds(np.array([1.0, 1.0, 10.0]), np.array([50.0, 50.0, 400.0]))

_GRID_POINTS = 10000
_GOLDEN_ITERATIONS = 60
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def stack_voltage(i_load_d, design: StackDesign, params: CellParams):
    """Stack terminal voltage at the given load current density.

    Accepts a scalar or an ndarray of densities.  The per-group density
    plus the internal density must stay inside (0, i_limit_d), otherwise
    a log-domain error is raised.
    """
    j = np.asarray(i_load_d, dtype=float) / design.n_p + params.i_n_d
    if np.any(j <= 0.0) or np.any(j >= params.i_limit_d):
        raise ValueError(
            "current density outside the polarization domain "
            f"(0, {params.i_limit_d}) mA/cm^2"
        )
    v = design.n_s * (
        params.e_nernst
        - params.a * np.log(j / params.i_0_d)
        + params.b * np.log(1.0 - j / params.i_limit_d)
        - j * params.r_a
    )
    return v if v.ndim else float(v)


def max_power_point(
    design: StackDesign,
    params: CellParams,
    grid_points: int = _GRID_POINTS,
    golden_iterations: int = _GOLDEN_ITERATIONS,
) -> PowerPoint:
    """Locate the maximum of P = V_st * I over the load current density.

    A uniform grid over [0, 0.9999 * N_p * (i_limit_d - i_n_d)) finds the
    coarse maximum; golden-section iterations on the bracketing interval
    refine it.  The refined power is never below the coarse-grid maximum.
    """
    amps_per_density = design.a_cell / 1000.0
    n_s, n_p = design.n_s, design.n_p
    e, a, b = params.e_nernst, params.a, params.b
    r_a, i_lim, i_0, i_n = params.r_a, params.i_limit_d, params.i_0_d, params.i_n_d

    def power(i):
        # scalar twin of stack_voltage; the golden loop is too hot for ufuncs
        j = i / n_p + i_n
        v = n_s * (e - a * math.log(j / i_0) + b * math.log(1.0 - j / i_lim) - j * r_a)
        return v * i * amps_per_density

    upper = 0.9999 * design.n_p * (params.i_limit_d - params.i_n_d)
    grid = np.linspace(0.0, upper, grid_points, endpoint=False)
    p = stack_voltage(grid, design, params) * grid * amps_per_density
    k = int(np.argmax(p))
    best_i, best_p = float(grid[k]), float(p[k])

    lo = float(grid[max(k - 1, 0)])
    hi = float(grid[min(k + 1, grid_points - 1)])
    c = hi - _INVPHI * (hi - lo)
    d = lo + _INVPHI * (hi - lo)
    fc, fd = power(c), power(d)
    for _ in range(golden_iterations):
        if fc > fd:
            hi, d, fd = d, c, fc
            c = hi - _INVPHI * (hi - lo)
            fc = power(c)
            if fc > best_p:
                best_i, best_p = c, fc
        else:
            lo, c, fc = c, d, fd
            d = lo + _INVPHI * (hi - lo)
            fd = power(d)
            if fd > best_p:
                best_i, best_p = d, fd

    return PowerPoint(
        p_load_max=best_p,
        v_load_mpp=stack_voltage(best_i, design, params),
        i_at_mpp=best_i,
    )


def _round_half_up(value: float) -> float:
    # cell counts are positive, so half away from zero == floor(x + 0.5)
    return float(math.floor(value + 0.5))


def stack_cost(
    design: StackDesign,
    params: CellParams = CellParams(),
    integer_rounding: bool = True,
) -> float:
    """Penalized cost of one stack design.

    With ``integer_rounding`` (the default) the cell counts n_s and n_p
    are rounded to the nearest integer before evaluation, so a continuous
    optimizer can search the box while evaluating physically buildable
    stacks; the area stays continuous.
    """
    x = np.array([design.n_s, design.n_p, design.a_cell])
    if not DESIGN_BOUNDS.contains(x):
        raise ValueError(f"design {design} outside the design bounds")
    if integer_rounding:
        design = StackDesign(
            _round_half_up(design.n_s), _round_half_up(design.n_p), design.a_cell
        )
    pp = max_power_point(design, params)
    shortfall = params.p_load_rated - pp.p_load_max
    penalty = params.c * shortfall if shortfall > 0.0 else 0.0
    return (
        params.k_n * design.n_p * design.n_s
        + params.k_diff * abs(params.v_load_rated - pp.v_load_mpp)
        + params.k_a * design.a_cell
        + penalty
    )


@dataclass(frozen=True)
class _CostObjective:
    # picklable callable so fuel-cell batches can run in worker processes
    params: CellParams
    integer_rounding: bool

    def __call__(self, x: np.ndarray) -> float:
        return stack_cost(
            StackDesign(float(x[0]), float(x[1]), float(x[2])),
            self.params,
            self.integer_rounding,
        )


SUCCESS_COST = 13.62


def make_problem(
    params: CellParams = CellParams(),
    integer_rounding: bool = True,
) -> Problem:
    """The stack design task as a 3-variable bounded minimization problem.

    The decision vector is (n_s, n_p, a_cell); a run counts as successful
    once it produces a design costing at most 13.62.
    """
    return Problem(
        name="fuelcell",
        objective=_CostObjective(params, integer_rounding),
        bounds=DESIGN_BOUNDS,
        optimum_value=None,
        success_target=SUCCESS_COST,
        metadata={"integer_rounding": integer_rounding},
    )
