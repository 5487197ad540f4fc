from .kernels import (
    ShapeMismatch,
    attention_backward,
    attention_forward,
    cross_entropy,
    gelu_backward,
    gelu_forward,
    layernorm_backward,
    layernorm_forward,
    linear_backward,
    linear_forward,
    mse,
    softmax,
    tanh_backward,
    tanh_forward,
)
from .fsq import (
    DEFAULT_LEVELS,
    FsqSpec,
    code_to_index,
    fsq_backward,
    fsq_bound,
    fsq_forward,
    fsq_quantize,
    index_to_code,
)
from .optim import (
    AR_ADAM_DEFAULTS,
    LDM_ADAM_DEFAULTS,
    AdamConfig,
    adamw_step,
    init_moments,
    learning_rate,
)
from .gradcheck import GradCheckReport, grad_check
from .checkpoint import CheckpointError, load_params, save_params

__all__ = [
    "AdamConfig",
    "AR_ADAM_DEFAULTS",
    "CheckpointError",
    "DEFAULT_LEVELS",
    "FsqSpec",
    "GradCheckReport",
    "LDM_ADAM_DEFAULTS",
    "ShapeMismatch",
    "adamw_step",
    "attention_backward",
    "attention_forward",
    "code_to_index",
    "cross_entropy",
    "fsq_backward",
    "fsq_bound",
    "fsq_forward",
    "fsq_quantize",
    "gelu_backward",
    "gelu_forward",
    "grad_check",
    "index_to_code",
    "init_moments",
    "layernorm_backward",
    "layernorm_forward",
    "learning_rate",
    "linear_backward",
    "linear_forward",
    "load_params",
    "mse",
    "save_params",
    "softmax",
    "tanh_backward",
    "tanh_forward",
]
