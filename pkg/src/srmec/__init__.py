"""Lumped magnetic-circuit analysis for a hybrid-excited multi-tooth
switched reluctance motor: exact and numeric mesh solvers, closed-form
fidelity auditing, saturating flux solution, energy-route torque, and
torque-density comparison metrics.
"""

from .config import ConfigError, RunConfig, config_hash, default_config, load_config
from .exact import residual_exact, solve_exact
from .fidelity import FidelityRow, audit_notes, run_fidelity_audit
from .metrics import (
    MetricsRow,
    MotorDataError,
    MotorRecord,
    comparison_table,
    derive_metrics,
    improvement_percent,
    load_motor_records,
)
from .motor import (
    BranchFluxes,
    FluxSolution,
    MaterialSet,
    MotorGeometry,
    OperatingPoint,
    RegimeReport,
    ReluctanceSet,
    SourceSet,
    airgap_reluctance,
    branch_fluxes,
    build_network,
    closed_form_branch_fluxes,
    closed_form_mesh_fluxes,
    composite_reluctances,
    regime_check,
    reluctances_from_geometry,
    solve_flux,
    sources_for,
)
from .network import (
    MeshFluxes,
    MeshSystem,
    NetworkDefinitionError,
    SolveError,
    assemble_mesh_system,
    kirchhoff_residual,
    solve_linear,
)
from .saturation import (
    BhCurve,
    NonConvergenceError,
    NonlinearConfig,
    NonlinearGridResult,
    solve_nonlinear,
    solve_nonlinear_grid,
)
from .torque import (
    FluxLinkageGrid,
    TorqueComponents,
    TorqueCurve,
    TorqueSample,
    WindingSpec,
    build_flux_linkage_grid,
    coenergy,
    flux_linkage,
    static_torque,
    torque_angle_sweep,
    torque_components,
)

__version__ = "0.1.0"

__all__ = [
    "BhCurve",
    "BranchFluxes",
    "ConfigError",
    "FidelityRow",
    "FluxLinkageGrid",
    "FluxSolution",
    "MaterialSet",
    "MeshFluxes",
    "MeshSystem",
    "MetricsRow",
    "MotorDataError",
    "MotorGeometry",
    "MotorRecord",
    "NetworkDefinitionError",
    "NonConvergenceError",
    "NonlinearConfig",
    "NonlinearGridResult",
    "OperatingPoint",
    "RegimeReport",
    "ReluctanceSet",
    "RunConfig",
    "SolveError",
    "SourceSet",
    "TorqueComponents",
    "TorqueCurve",
    "TorqueSample",
    "WindingSpec",
    "airgap_reluctance",
    "assemble_mesh_system",
    "audit_notes",
    "branch_fluxes",
    "build_flux_linkage_grid",
    "build_network",
    "closed_form_branch_fluxes",
    "closed_form_mesh_fluxes",
    "coenergy",
    "comparison_table",
    "composite_reluctances",
    "config_hash",
    "default_config",
    "derive_metrics",
    "flux_linkage",
    "improvement_percent",
    "kirchhoff_residual",
    "load_config",
    "load_motor_records",
    "regime_check",
    "reluctances_from_geometry",
    "residual_exact",
    "solve_exact",
    "solve_flux",
    "solve_linear",
    "solve_nonlinear",
    "solve_nonlinear_grid",
    "sources_for",
    "static_torque",
    "torque_angle_sweep",
    "torque_components",
    "__version__",
]
