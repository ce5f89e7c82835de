from ._core import (
    ValidationError,
    classical_max,
    f_value,
    normal_form,
    normal_form_value,
    omega_closed,
    optimize_omega,
    run_claim,
    seesaw_restarts,
    strategy_value,
    verify_builtin,
)

__all__ = [
    "ValidationError",
    "classical_max",
    "f_value",
    "normal_form",
    "normal_form_value",
    "omega_closed",
    "optimize_omega",
    "run_claim",
    "seesaw_restarts",
    "strategy_value",
    "verify_builtin",
]
