"""Sequential indirect measurements with Gaussian pointers."""

from ._core import (
    Chain,
    DensityMatrix,
    Observable,
    PureState,
    SeqmeasError,
    Stage,
    __version__,
    backward_pdf,
    backward_stats,
    chain_log_likelihood,
    conditional_state,
    conditional_stats_k,
    forward_pdf,
    forward_stats,
    joint_model,
    kraus_at,
    log_joint,
    mc_conditional_variance,
    mpur_check,
    presets,
    spin,
    variance_of,
)

__all__ = [
    "Chain",
    "DensityMatrix",
    "Observable",
    "PureState",
    "SeqmeasError",
    "Stage",
    "backward_pdf",
    "backward_stats",
    "chain_log_likelihood",
    "conditional_state",
    "conditional_stats_k",
    "forward_pdf",
    "forward_stats",
    "joint_model",
    "kraus_at",
    "log_joint",
    "mc_conditional_variance",
    "mpur_check",
    "presets",
    "spin",
    "variance_of",
]
