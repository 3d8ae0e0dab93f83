"""Flux linkage, coenergy, and static torque.

The lumped circuit has no field distribution, so torque comes from the
energy route: flux linkage lambda(i, theta) sampled on a (current x
angle) grid, coenergy W' = integral of lambda over current at fixed
angle, and torque as the angle derivative of W' at constant current.

Coenergy is anchored at W'(0, theta) = 0 for every angle, which absorbs
the magnet-only stored energy into the baseline.  The angle dependence
of that magnet-only state therefore contributes torque only through its
interaction with current; pure magnet cogging at i = 0 is invisible to
this account and the zero-current curve is identically zero by
convention.  See audit_notes in the fidelity module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .motor import FluxSolution, MaterialSet, MotorGeometry
from .saturation import BhCurve, NonlinearConfig, solve_nonlinear_grid

DEFAULT_CURRENT_POINTS = 33
DEFAULT_ANGLE_STEP_DEG = 0.25

# Slack for the nondecreasing-linkage check: solver-noise scale, far
# below any physical inductance change across one grid step.
_MONOTONE_SLACK = 1e-9


@dataclass(frozen=True)
class WindingSpec:
    """Phase winding seen by the flux-linkage computation.

    Args:
        turns_per_pole: coil turns on each pole tooth.
        series_coils: pole coils connected in series per phase.
        orientation: +1 counts pole flux positive in the mesh
            convention (toward the yoke); -1 flips for a winding wound
            the other way.  The default machine links its own coil flux
            positively at +1.
    """

    turns_per_pole: int
    series_coils: int = 4
    orientation: float = 1.0

    def __post_init__(self) -> None:
        if self.turns_per_pole < 1:
            raise ValueError("turns_per_pole must be >= 1")
        if self.series_coils < 1:
            raise ValueError("series_coils must be >= 1")
        if self.orientation not in (1.0, -1.0):
            raise ValueError("orientation must be +1 or -1")

    @classmethod
    def for_geometry(cls, geometry: MotorGeometry, series_coils: int = 4) -> "WindingSpec":
        return cls(turns_per_pole=geometry.turns_per_pole, series_coils=series_coils)

    @property
    def effective_turns(self) -> float:
        """Signed linkage coefficient: orientation * turns * series coils."""
        return self.orientation * self.turns_per_pole * self.series_coils


def flux_linkage(solution: FluxSolution, winding: WindingSpec) -> float:
    """Wb-turns linked by the phase winding: effective turns x pole flux."""
    return winding.effective_turns * solution.branches.phi_sp


@dataclass(frozen=True)
class FluxLinkageGrid:
    """lambda(i, theta) sampled on a rectangular grid.

    currents are A, ascending from exactly zero; angles are deg,
    ascending and uniform, covering one period half-open (the last
    point is one step short of angles[0] + period_deg); linkages are
    Wb-turns, shape (n_currents, n_angles), nondecreasing in current at
    fixed angle for this motor class.
    """

    currents: np.ndarray
    angles: np.ndarray
    linkages: np.ndarray
    period_deg: float

    def __post_init__(self) -> None:
        currents = np.asarray(self.currents, dtype=float)
        angles = np.asarray(self.angles, dtype=float)
        linkages = np.asarray(self.linkages, dtype=float)
        if currents.ndim != 1 or currents.size < 2:
            raise ValueError("currents must be a 1-D grid with at least two points")
        if not np.all(np.isfinite(currents)) or currents[0] != 0.0:
            raise ValueError("currents must be finite and start at exactly 0 A")
        if np.any(np.diff(currents) <= 0.0):
            raise ValueError("currents must be strictly ascending")
        if angles.ndim != 1 or angles.size < 4:
            raise ValueError("angles must be a 1-D grid with at least four points")
        steps = np.diff(angles)
        if not np.all(np.isfinite(angles)) or np.any(steps <= 0.0):
            raise ValueError("angles must be finite and strictly ascending")
        step = steps[0]
        if np.any(np.abs(steps - step) > 1e-9 * step):
            raise ValueError("angles must be uniformly spaced")
        if not self.period_deg > 0.0:
            raise ValueError("period_deg must be positive")
        span = angles[-1] - angles[0] + step
        if abs(span - self.period_deg) > 1e-9 * self.period_deg:
            raise ValueError(
                f"angle grid spans {span:g} deg, expected one period ({self.period_deg:g} deg)"
            )
        if linkages.shape != (currents.size, angles.size):
            raise ValueError("linkages shape must be (n_currents, n_angles)")
        if not np.all(np.isfinite(linkages)):
            raise ValueError("linkages must be finite")
        slack = _MONOTONE_SLACK * max(float(np.max(np.abs(linkages))), 1e-300)
        if np.any(np.diff(linkages, axis=0) < -slack):
            raise ValueError("linkage must be nondecreasing in current at fixed angle")

    @property
    def angle_step_deg(self) -> float:
        return float(self.angles[1] - self.angles[0])

    def angle_index(self, angle_deg: float) -> int:
        """Index of a grid angle; rejects off-grid angles."""
        offset = (angle_deg - float(self.angles[0])) / self.angle_step_deg
        index = round(offset)
        if not 0 <= index < self.angles.size or abs(offset - index) > 1e-6:
            raise ValueError(f"angle {angle_deg!r} deg is not on the grid")
        return index


def build_flux_linkage_grid(
    geometry: MotorGeometry,
    materials: MaterialSet,
    curve: BhCurve,
    peak_current: float,
    winding: WindingSpec | None = None,
    current_points: int = DEFAULT_CURRENT_POINTS,
    angle_step_deg: float = DEFAULT_ANGLE_STEP_DEG,
    config: NonlinearConfig | None = None,
) -> FluxLinkageGrid:
    """Sample lambda over (0..peak_current) x one angle period.

    All operating points are solved by the saturating grid engine in
    one batched run; the winding defaults to the geometry's own turns
    with four series coils.
    """
    if not (math.isfinite(peak_current) and peak_current > 0.0):
        raise ValueError("peak_current must be positive")
    if current_points < 2:
        raise ValueError("current_points must be >= 2")
    period = geometry.period_deg
    cells = period / angle_step_deg
    if not (angle_step_deg > 0.0 and abs(cells - round(cells)) < 1e-9):
        raise ValueError("angle_step_deg must divide the period evenly")
    winding = winding or WindingSpec.for_geometry(geometry)
    currents = np.linspace(0.0, peak_current, current_points)
    angles = angles_for_period(geometry, angle_step_deg)
    result = solve_nonlinear_grid(geometry, materials, curve, currents, angles, config=config)
    pole_flux = result.mesh_fluxes[:, :, 1] - result.mesh_fluxes[:, :, 0]
    return FluxLinkageGrid(
        currents=currents,
        angles=angles,
        linkages=winding.effective_turns * pole_flux,
        period_deg=period,
    )


def angles_for_period(geometry: MotorGeometry, step_deg: float = DEFAULT_ANGLE_STEP_DEG) -> np.ndarray:
    """Uniform half-open angle grid [0, period) at the given step."""
    count = round(geometry.period_deg / step_deg)
    return np.arange(count) * step_deg


def _coenergy_columns(grid: FluxLinkageGrid) -> np.ndarray:
    """W'(i_max, theta) per angle: full trapezoid over the current axis."""
    widths = np.diff(grid.currents)[:, None]
    return np.sum(0.5 * (grid.linkages[1:] + grid.linkages[:-1]) * widths, axis=0)


def coenergy(grid: FluxLinkageGrid, current: float, angle_deg: float) -> float:
    """W'(current, angle) in J: trapezoid of lambda over [0, current].

    Exact for linkage linear in current (each cell integrates its
    chord); a current between grid points closes the last cell with the
    linearly interpolated linkage.  W'(0, theta) = 0 by convention.
    """
    if not (math.isfinite(current) and 0.0 <= current <= grid.currents[-1]):
        raise ValueError(
            f"current {current!r} A outside the grid range [0, {grid.currents[-1]:g}]"
        )
    column = grid.linkages[:, grid.angle_index(angle_deg)]
    full = np.searchsorted(grid.currents, current, side="right") - 1
    widths = np.diff(grid.currents[: full + 1])
    total = float(np.sum(0.5 * (column[1 : full + 1] + column[:full]) * widths))
    if current > grid.currents[full]:
        span = grid.currents[full + 1] - grid.currents[full]
        frac = (current - grid.currents[full]) / span
        lam_end = column[full] + frac * (column[full + 1] - column[full])
        total += 0.5 * (column[full] + lam_end) * (current - grid.currents[full])
    return total


@dataclass(frozen=True)
class TorqueSample:
    """One finite-difference torque value.

    one_sided marks boundary angles where only a forward or backward
    difference fits inside the grid window.
    """

    torque_nm: float
    one_sided: bool


def static_torque(grid: FluxLinkageGrid, current: float, angle_deg: float) -> TorqueSample:
    """Virtual-work torque at constant current, N*m.

    Central difference of coenergy over one grid step (in radians);
    the first and last grid angles fall back to one-sided differences
    and are flagged.  The grid is treated as a window here; periodic
    wraparound is applied only by torque_angle_sweep, which knows its
    grid covers exactly one period.
    """
    index = grid.angle_index(angle_deg)
    step_rad = math.radians(grid.angle_step_deg)
    angles = grid.angles
    if 0 < index < angles.size - 1:
        w_plus = coenergy(grid, current, float(angles[index + 1]))
        w_minus = coenergy(grid, current, float(angles[index - 1]))
        return TorqueSample(torque_nm=(w_plus - w_minus) / (2.0 * step_rad), one_sided=False)
    inner = 1 if index == 0 else angles.size - 2
    w_edge = coenergy(grid, current, float(angles[index]))
    w_inner = coenergy(grid, current, float(angles[inner]))
    sign = 1.0 if index == 0 else -1.0
    return TorqueSample(torque_nm=sign * (w_inner - w_edge) / step_rad, one_sided=True)


@dataclass(frozen=True)
class TorqueCurve:
    """Static torque over one period at a fixed current.

    samples are N*m on the angle grid, computed with periodic
    wraparound (every sample is a central difference).  mean_torque is
    the arithmetic mean of the samples over the period; for a periodic
    coenergy surface the central differences telescope, so it is zero
    up to rounding at any current.  stroke_mean_torque averages the
    motoring stroke (unaligned to aligned, the first half period),
    which is the figure a commutated drive extracts and the quantity
    that grows with current.  peak_torque = max |sample|.
    """

    current: float
    angles: np.ndarray
    samples: np.ndarray
    mean_torque: float
    stroke_mean_torque: float
    peak_torque: float

    def __post_init__(self) -> None:
        if np.asarray(self.samples).shape != np.asarray(self.angles).shape:
            raise ValueError("samples and angles must have matching shapes")


def torque_angle_sweep(
    geometry: MotorGeometry,
    materials: MaterialSet,
    curve: BhCurve,
    current: float,
    winding: WindingSpec | None = None,
    current_points: int = DEFAULT_CURRENT_POINTS,
    angle_step_deg: float = DEFAULT_ANGLE_STEP_DEG,
    config: NonlinearConfig | None = None,
) -> TorqueCurve:
    """Torque-angle curve at one phase current over one period.

    Builds the flux-linkage grid (one batched saturating solve),
    integrates coenergy per angle, and differences it periodically.  A
    zero current returns the identically zero curve that follows from
    the W'(0, theta) = 0 convention (magnet cogging is outside this
    energy account; see the module docstring).  A non-convergent
    operating point aborts the sweep with the failing (current, angle)
    points identified in the error.
    """
    if not (math.isfinite(current) and current >= 0.0):
        raise ValueError("current must be nonnegative")
    angles = angles_for_period(geometry, angle_step_deg)
    if current == 0.0:
        samples = np.zeros_like(angles)
        return TorqueCurve(
            current=0.0,
            angles=angles,
            samples=samples,
            mean_torque=0.0,
            stroke_mean_torque=0.0,
            peak_torque=0.0,
        )
    grid = build_flux_linkage_grid(
        geometry,
        materials,
        curve,
        peak_current=current,
        winding=winding,
        current_points=current_points,
        angle_step_deg=angle_step_deg,
        config=config,
    )
    coenergy_row = _coenergy_columns(grid)
    step_rad = math.radians(grid.angle_step_deg)
    samples = (np.roll(coenergy_row, -1) - np.roll(coenergy_row, 1)) / (2.0 * step_rad)
    stroke = angles <= 0.5 * geometry.period_deg + 1e-9
    return TorqueCurve(
        current=current,
        angles=angles,
        samples=samples,
        mean_torque=float(np.mean(samples)),
        stroke_mean_torque=float(np.mean(samples[stroke])),
        peak_torque=float(np.max(np.abs(samples))),
    )


@dataclass(frozen=True)
class TorqueComponents:
    """Mean-torque split between coil excitation and magnets.

    Stroke means, N*m.  coil_only reruns the identical sweep with the
    magnet remanence (and any explicit coercivity) zeroed, so
    pm_contribution = total - coil_only is exact by construction and
    captures everything the magnets change, including their effect on
    the saturation state.
    """

    current: float
    total: float
    coil_only: float
    pm_contribution: float

    @property
    def pm_share(self) -> float:
        """Magnet fraction of the total mean torque."""
        if self.total == 0.0:
            raise ZeroDivisionError("total mean torque is zero; share undefined")
        return self.pm_contribution / self.total


def torque_components(
    geometry: MotorGeometry,
    materials: MaterialSet,
    curve: BhCurve,
    current: float,
    winding: WindingSpec | None = None,
    current_points: int = DEFAULT_CURRENT_POINTS,
    angle_step_deg: float = DEFAULT_ANGLE_STEP_DEG,
    config: NonlinearConfig | None = None,
) -> TorqueComponents:
    """Split the stroke mean torque into coil-only and magnet parts."""
    kwargs = dict(
        winding=winding,
        current_points=current_points,
        angle_step_deg=angle_step_deg,
        config=config,
    )
    total = torque_angle_sweep(geometry, materials, curve, current, **kwargs)
    no_pm = replace(materials, pm_remanence=0.0, pm_coercivity=0.0)
    coil = torque_angle_sweep(geometry, no_pm, curve, current, **kwargs)
    return TorqueComponents(
        current=current,
        total=total.stroke_mean_torque,
        coil_only=coil.stroke_mean_torque,
        pm_contribution=total.stroke_mean_torque - coil.stroke_mean_torque,
    )
