"""Discrete-time quantum walk search on 2-D grids under phase-potential fields."""

__version__ = "0.1.0"

from .state import (  # noqa: E402
    Boundary,
    GridGeometry,
    PositionDistribution,
    WalkerState,
    basis_state,
    decode,
    encode,
    inner_product,
    norm,
    position_distribution,
    success_probability,
    uniform_state,
)
from .operators import (  # noqa: E402
    CoinKind,
    CoinOperator,
    ModelLabel,
    ShiftKind,
    ShiftRule,
    WalkModel,
    apply_coin,
    apply_shift,
    custom_coin,
    flip_flop_shift,
    grover_coin,
    hadamard_coin,
    model1,
    model2,
    standard_reflective_shift,
    walk_substep,
)
from .potentials import (  # noqa: E402
    FieldKind,
    GaussianParams,
    OracleSpec,
    PotentialField,
    ackley_field,
    apply_phase,
    bivariate_gaussian_field,
    constant_field,
    custom_field,
    delta_oracle_field,
    linear_field,
    load_field_text,
    rastrigin_field,
    save_field_text,
)
from .engine import EvolutionConfig, RunRecord, peak_in_window, run, step  # noqa: E402
