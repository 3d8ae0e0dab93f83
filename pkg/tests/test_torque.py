"""Tests for flux linkage, coenergy integration, and static torque."""

import math

import numpy as np
import pytest

from srmec.motor import FluxSolution, MaterialSet, MotorGeometry
from srmec.saturation import BhCurve
from srmec.torque import (
    DEFAULT_ANGLE_STEP_DEG,
    DEFAULT_CURRENT_POINTS,
    FluxLinkageGrid,
    TorqueCurve,
    WindingSpec,
    angles_for_period,
    build_flux_linkage_grid,
    coenergy,
    flux_linkage,
    static_torque,
    torque_angle_sweep,
    torque_components,
)

ALIGNED = 10.0


@pytest.fixture(scope="module")
def geometry():
    return MotorGeometry()


@pytest.fixture(scope="module")
def materials():
    return MaterialSet()


@pytest.fixture(scope="module")
def curve():
    return BhCurve.default()


@pytest.fixture(scope="module")
def sweeps(geometry, materials, curve):
    """Torque-angle curves keyed by phase current (A)."""
    return {
        i: torque_angle_sweep(geometry, materials, curve, i) for i in (0.0, 2.0, 4.0, 8.0)
    }


def synthetic_grid(linkage_of_current, currents, period_deg=20.0, step_deg=0.25):
    """Grid with angle-independent linkage, for current-axis tests."""
    currents = np.asarray(currents, dtype=float)
    angles = np.arange(round(period_deg / step_deg)) * step_deg
    column = np.asarray([linkage_of_current(i) for i in currents])
    return FluxLinkageGrid(
        currents=currents,
        angles=angles,
        linkages=np.repeat(column[:, None], angles.size, axis=1),
        period_deg=period_deg,
    )


def inductance_grid(l0, l1, peak_current, period_deg=20.0, step_deg=0.25, points=9):
    """lambda = (l0 + l1*cos(2*pi*theta/period)) * i: closed-form torque."""
    currents = np.linspace(0.0, peak_current, points)
    angles = np.arange(round(period_deg / step_deg)) * step_deg
    inductance = l0 + l1 * np.cos(2.0 * np.pi * angles / period_deg)
    return FluxLinkageGrid(
        currents=currents,
        angles=angles,
        linkages=currents[:, None] * inductance[None, :],
        period_deg=period_deg,
    )


class TestWindingSpec:
    def test_defaults_and_effective_turns(self):
        winding = WindingSpec(turns_per_pole=140)
        assert winding.series_coils == 4
        assert winding.effective_turns == 560.0

    def test_for_geometry_reads_turns(self, geometry):
        winding = WindingSpec.for_geometry(geometry)
        assert winding.turns_per_pole == geometry.turns_per_pole == 140

    def test_reversed_orientation_flips_sign(self):
        winding = WindingSpec(turns_per_pole=140, orientation=-1.0)
        assert winding.effective_turns == -560.0

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(turns_per_pole=0),
            dict(turns_per_pole=140, series_coils=0),
            dict(turns_per_pole=140, orientation=0.5),
        ],
    )
    def test_rejects_bad_values(self, kwargs):
        with pytest.raises(ValueError):
            WindingSpec(**kwargs)

    def test_flux_linkage_worked_value(self):
        # 140 turns x 4 series coils x 1e-4 Wb of pole flux = 0.056 Wb.
        mesh = np.array([0.0, 1e-4, 1e-4, 0.0, 1e-4])
        solution = FluxSolution(
            mesh_fluxes=mesh,
            coil_mesh_fluxes=np.zeros(5),
            pm_mesh_fluxes=np.zeros(5),
            residual=0.0,
        )
        winding = WindingSpec(turns_per_pole=140)
        assert flux_linkage(solution, winding) == pytest.approx(0.056, rel=1e-12)


class TestFluxLinkageGridValidation:
    def test_accepts_well_formed_grid(self):
        grid = synthetic_grid(lambda i: 0.1 * i, np.linspace(0.0, 4.0, 5))
        assert grid.angle_step_deg == pytest.approx(0.25)
        assert grid.angles.size == 80

    def test_rejects_currents_not_starting_at_zero(self):
        with pytest.raises(ValueError, match="start at exactly 0"):
            synthetic_grid(lambda i: 0.1 * i, [1.0, 2.0, 3.0])

    def test_rejects_non_ascending_currents(self):
        with pytest.raises(ValueError, match="strictly ascending"):
            synthetic_grid(lambda i: 0.1 * i, [0.0, 2.0, 2.0])

    def test_rejects_single_current_point(self):
        with pytest.raises(ValueError, match="at least two"):
            synthetic_grid(lambda i: 0.1 * i, [0.0])

    def test_rejects_too_few_angles(self):
        with pytest.raises(ValueError, match="at least four"):
            FluxLinkageGrid(
                currents=np.array([0.0, 1.0]),
                angles=np.array([0.0, 10.0]),
                linkages=np.zeros((2, 2)),
                period_deg=20.0,
            )

    def test_rejects_nonuniform_angles(self):
        with pytest.raises(ValueError, match="uniformly spaced"):
            FluxLinkageGrid(
                currents=np.array([0.0, 1.0]),
                angles=np.array([0.0, 1.0, 3.0, 19.0]),
                linkages=np.zeros((2, 4)),
                period_deg=20.0,
            )

    def test_rejects_span_not_equal_to_period(self):
        # 0..15 deg at 5 deg steps spans one step short of 20 deg only
        # if the period were 20; declare 25 and the span check trips.
        with pytest.raises(ValueError, match="expected one period"):
            FluxLinkageGrid(
                currents=np.array([0.0, 1.0]),
                angles=np.arange(4) * 5.0,
                linkages=np.zeros((2, 4)),
                period_deg=25.0,
            )

    def test_rejects_wrong_linkage_shape(self):
        with pytest.raises(ValueError, match="shape"):
            FluxLinkageGrid(
                currents=np.array([0.0, 1.0]),
                angles=np.arange(4) * 5.0,
                linkages=np.zeros((2, 3)),
                period_deg=20.0,
            )

    def test_rejects_linkage_decreasing_in_current(self):
        with pytest.raises(ValueError, match="nondecreasing"):
            synthetic_grid(lambda i: -0.1 * i, [0.0, 1.0, 2.0])

    def test_angle_index_round_trip(self):
        grid = synthetic_grid(lambda i: 0.1 * i, [0.0, 1.0])
        assert grid.angle_index(0.0) == 0
        assert grid.angle_index(10.0) == 40
        assert grid.angle_index(19.75) == 79

    def test_angle_index_rejects_off_grid(self):
        grid = synthetic_grid(lambda i: 0.1 * i, [0.0, 1.0])
        with pytest.raises(ValueError, match="not on the grid"):
            grid.angle_index(0.1)
        with pytest.raises(ValueError, match="not on the grid"):
            grid.angle_index(20.0)


class TestCoenergy:
    def test_zero_current_is_zero_everywhere(self):
        grid = synthetic_grid(lambda i: -0.05 + 0.12 * i, np.linspace(0.0, 5.0, 6))
        assert coenergy(grid, 0.0, 0.0) == 0.0
        assert coenergy(grid, 0.0, ALIGNED) == 0.0

    def test_linear_linkage_integrates_exactly(self):
        # lambda = lam0 + L*i integrates to lam0*i + L*i^2/2; the
        # trapezoid rule is exact on each linear cell.
        lam0, slope = -0.05, 0.12
        grid = synthetic_grid(lambda i: lam0 + slope * i, np.linspace(0.0, 5.0, 6))
        for current in (1.0, 3.0, 5.0):
            expected = lam0 * current + 0.5 * slope * current**2
            assert coenergy(grid, current, 0.0) == pytest.approx(expected, rel=1e-12)

    def test_partial_cell_is_exact_for_linear_linkage(self):
        lam0, slope = -0.05, 0.12
        grid = synthetic_grid(lambda i: lam0 + slope * i, np.linspace(0.0, 5.0, 6))
        current = 2.3
        expected = lam0 * current + 0.5 * slope * current**2
        assert coenergy(grid, current, 0.0) == pytest.approx(expected, rel=1e-12)

    def test_rejects_current_outside_range(self):
        grid = synthetic_grid(lambda i: 0.1 * i, [0.0, 1.0, 2.0])
        with pytest.raises(ValueError, match="outside the grid range"):
            coenergy(grid, -0.5, 0.0)
        with pytest.raises(ValueError, match="outside the grid range"):
            coenergy(grid, 2.5, 0.0)

    def test_rejects_off_grid_angle(self):
        grid = synthetic_grid(lambda i: 0.1 * i, [0.0, 1.0, 2.0])
        with pytest.raises(ValueError, match="not on the grid"):
            coenergy(grid, 1.0, 0.3)

    def test_trapezoid_error_shrinks_second_order(self):
        # lambda = tanh(i) gives W'(I) = ln cosh(I) exactly; halving the
        # current step must cut the quadrature error about fourfold.
        peak = 3.0
        exact = math.log(math.cosh(peak))
        coarse = synthetic_grid(math.tanh, np.linspace(0.0, peak, 9))
        fine = synthetic_grid(math.tanh, np.linspace(0.0, peak, 17))
        err_coarse = abs(coenergy(coarse, peak, 0.0) - exact)
        err_fine = abs(coenergy(fine, peak, 0.0) - exact)
        assert err_coarse / err_fine == pytest.approx(4.0, abs=0.5)


class TestStaticTorque:
    def test_matches_analytic_derivative_within_one_percent(self):
        # Sinusoidal inductance: T = i^2/2 * dL/dtheta in mechanical
        # radians.  Central differences at 0.25 deg carry a uniform
        # sin(kh)/kh factor, about 0.1% here.
        l0, l1, period = 0.1, 0.02, 20.0
        current = 4.0
        grid = inductance_grid(l0, l1, peak_current=current, period_deg=period)
        k_rad = 2.0 * np.pi / math.radians(period)
        for index in range(1, grid.angles.size - 1):
            theta = float(grid.angles[index])
            expected = (
                -0.5 * current**2 * l1 * k_rad * math.sin(2.0 * math.pi * theta / period)
            )
            if abs(expected) < 1e-12:
                continue
            sample = static_torque(grid, current, theta)
            assert not sample.one_sided
            assert sample.torque_nm == pytest.approx(expected, rel=0.01)

    def test_boundary_samples_are_flagged_one_sided(self):
        grid = inductance_grid(0.1, 0.02, peak_current=4.0)
        assert static_torque(grid, 4.0, float(grid.angles[0])).one_sided
        assert static_torque(grid, 4.0, float(grid.angles[-1])).one_sided
        assert not static_torque(grid, 4.0, float(grid.angles[1])).one_sided

    def test_zero_current_gives_zero_torque(self):
        grid = inductance_grid(0.1, 0.02, peak_current=4.0)
        assert static_torque(grid, 0.0, 5.0).torque_nm == 0.0


class TestBuildFluxLinkageGrid:
    def test_grid_metadata(self, geometry, materials, curve):
        grid = build_flux_linkage_grid(geometry, materials, curve, peak_current=4.0)
        assert grid.currents.size == DEFAULT_CURRENT_POINTS
        assert grid.currents[0] == 0.0 and grid.currents[-1] == 4.0
        assert grid.angle_step_deg == pytest.approx(DEFAULT_ANGLE_STEP_DEG)
        assert grid.period_deg == pytest.approx(geometry.period_deg)
        assert grid.linkages.shape == (33, 80)

    def test_linkage_grows_with_current(self, geometry, materials, curve):
        grid = build_flux_linkage_grid(geometry, materials, curve, peak_current=4.0)
        aligned = grid.linkages[:, grid.angle_index(ALIGNED)]
        assert aligned[-1] > aligned[0]

    def test_aligned_coenergy_exceeds_unaligned(self, geometry, materials, curve):
        grid = build_flux_linkage_grid(geometry, materials, curve, peak_current=4.0)
        assert coenergy(grid, 4.0, ALIGNED) > coenergy(grid, 4.0, 0.0)

    def test_rejects_nonpositive_peak_current(self, geometry, materials, curve):
        with pytest.raises(ValueError, match="peak_current"):
            build_flux_linkage_grid(geometry, materials, curve, peak_current=0.0)

    def test_rejects_too_few_current_points(self, geometry, materials, curve):
        with pytest.raises(ValueError, match="current_points"):
            build_flux_linkage_grid(
                geometry, materials, curve, peak_current=4.0, current_points=1
            )

    def test_rejects_step_not_dividing_period(self, geometry, materials, curve):
        with pytest.raises(ValueError, match="divide the period"):
            build_flux_linkage_grid(
                geometry, materials, curve, peak_current=4.0, angle_step_deg=0.3
            )

    def test_angles_for_period_is_half_open(self, geometry):
        angles = angles_for_period(geometry)
        assert angles[0] == 0.0
        assert angles[-1] == pytest.approx(geometry.period_deg - DEFAULT_ANGLE_STEP_DEG)


class TestTorqueAngleSweep:
    def test_zero_current_curve_is_identically_zero(self, sweeps):
        curve0 = sweeps[0.0]
        assert np.all(curve0.samples == 0.0)
        assert curve0.mean_torque == 0.0
        assert curve0.stroke_mean_torque == 0.0
        assert curve0.peak_torque == 0.0

    def test_period_mean_vanishes(self, sweeps):
        # Central differences of a periodic coenergy telescope; the
        # period mean is zero to rounding at every current.
        for current in (2.0, 4.0, 8.0):
            curve = sweeps[current]
            assert abs(curve.mean_torque) <= 1e-10 * curve.peak_torque

    def test_torque_vanishes_at_aligned_and_unaligned(self, sweeps):
        # Both positions are symmetry axes of the gap permeance, so the
        # neighboring coenergy samples match exactly.
        for current in (2.0, 4.0, 8.0):
            curve = sweeps[current]
            aligned_index = int(round(ALIGNED / DEFAULT_ANGLE_STEP_DEG))
            assert curve.samples[0] == 0.0
            assert curve.samples[aligned_index] == 0.0

    def test_stroke_mean_grows_with_current(self, sweeps):
        assert 0.0 < sweeps[2.0].stroke_mean_torque
        assert sweeps[2.0].stroke_mean_torque < sweeps[4.0].stroke_mean_torque
        assert sweeps[4.0].stroke_mean_torque < sweeps[8.0].stroke_mean_torque

    def test_peak_bounds_mean(self, sweeps):
        for current in (2.0, 4.0, 8.0):
            curve = sweeps[current]
            assert curve.peak_torque >= abs(curve.stroke_mean_torque)
            assert curve.peak_torque > 0.0

    def test_rerun_is_byte_identical(self, geometry, materials, curve, sweeps):
        again = torque_angle_sweep(geometry, materials, curve, 4.0)
        assert np.array_equal(again.samples, sweeps[4.0].samples)
        assert again.stroke_mean_torque == sweeps[4.0].stroke_mean_torque

    def test_halved_angle_step_agrees_at_midstroke(
        self, geometry, materials, curve, sweeps
    ):
        # Virtual-work consistency: the finite-difference torque at a
        # smooth interior angle is step-size independent to O(h^2).
        fine = torque_angle_sweep(geometry, materials, curve, 4.0, angle_step_deg=0.125)
        theta = 5.0
        coarse_sample = sweeps[4.0].samples[int(round(theta / DEFAULT_ANGLE_STEP_DEG))]
        fine_sample = fine.samples[int(round(theta / 0.125))]
        assert fine_sample == pytest.approx(coarse_sample, rel=0.01)

    def test_rejects_negative_current(self, geometry, materials, curve):
        with pytest.raises(ValueError, match="nonnegative"):
            torque_angle_sweep(geometry, materials, curve, -1.0)

    def test_curve_shape_validation(self):
        with pytest.raises(ValueError, match="matching shapes"):
            TorqueCurve(
                current=1.0,
                angles=np.arange(4.0),
                samples=np.zeros(3),
                mean_torque=0.0,
                stroke_mean_torque=0.0,
                peak_torque=0.0,
            )


class TestTorqueComponents:
    def test_split_is_self_consistent(self, geometry, materials, curve):
        parts = torque_components(geometry, materials, curve, 8.0)
        assert parts.current == 8.0
        assert parts.pm_contribution == parts.total - parts.coil_only
        assert parts.total > 0.0 and parts.coil_only > 0.0

    def test_magnets_help_more_at_high_current(self, geometry, materials, curve):
        # The saturation-diversion mechanism: the magnet share of the
        # mean torque rises steeply once the yoke saturates.
        low = torque_components(geometry, materials, curve, 2.0)
        high = torque_components(geometry, materials, curve, 8.0)
        assert high.pm_share > low.pm_share

    def test_zero_remanence_has_zero_pm_contribution(self, geometry, curve):
        no_pm = MaterialSet(pm_remanence=0.0, pm_coercivity=0.0)
        parts = torque_components(geometry, no_pm, curve, 4.0)
        assert parts.pm_contribution == 0.0

    def test_share_undefined_at_zero_torque(self, geometry, materials, curve):
        parts = torque_components(geometry, materials, curve, 0.0)
        assert parts.total == 0.0
        with pytest.raises(ZeroDivisionError):
            parts.pm_share
