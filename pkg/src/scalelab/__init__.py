"""Compute-optimal scaling analysis toolkit.

Parameter accounting in total and non-embedding bases, parametric loss
surfaces, closed-form compute-optimal allocation with local scaling
exponents, synthetic training-curve frontiers, and power-law fitting.
"""

from .analytic import (
    ExponentSample,
    ce_of_optimal_ne,
    exponent_curve,
    local_loss_exponent,
    local_param_exponent,
    loss_compute_exponent_total,
    optimal_nt,
    param_exponent_large_scale_limit,
    param_exponent_small_scale_limit,
    transition_point,
)
from .fitting import (
    PowerLawFit,
    fit_kaplan_form,
    fit_power_law,
    fit_power_law_with_offset,
    sum_squared_error,
)
from .frontier import (
    Frontier,
    FrontierPoint,
    TrainingCurve,
    bracketing_token_schedule,
    extract_frontier,
    fit_loss_scaling,
    fit_param_scaling,
    kaplan_size_grid,
    read_frontier_csv,
    simulate_curves,
    size_grid,
    write_curves_csv,
    write_frontier_csv,
)
from .lossmodel import (
    CHINCHILLA,
    EPOCH,
    SPEC_CATALOG,
    LossSpec,
    compute_flops,
    load_loss_spec,
    loss_nd,
    loss_ne_ce,
    loss_nt_ct,
    resolve_spec,
)
from .params import (
    DEFAULT_EMBED_MAP,
    DEFAULT_OMEGA,
    EmbedMap,
    EmbedMapFit,
    ModelShape,
    ParamSplit,
    bundled_config_path,
    count_params,
    fit_embed_map,
    load_model_configs,
    nonembed_from_total,
    omega_from_shape,
    total_from_nonembed,
)

__version__ = "0.1.0"
