"""Unknown input observer design, verification and simulation."""

from ._uio_lab import (
    LinearSystem,
    UioGains,
    ExistenceReport,
    GainCheck,
    Scenario,
    Trajectory,
    UioError,
    InputError,
    NoUioError,
    SingularError,
    builtin_scenario,
    design_scenario,
    check_existence,
    compute_decoupling,
    convergence_time,
    design,
    design_full_measurement,
    eigvals,
    export_model,
    full_rank_factorization,
    lqr_gain,
    obsv_matrix,
    parse_model,
    pinv,
    place_full_measurement,
    place_poles,
    rank,
    scenario_names,
    simulate_scenario,
    solve_care,
    solve_sylvester,
    verify_gains,
)

__all__ = [name for name in dir() if not name.startswith("_")]
