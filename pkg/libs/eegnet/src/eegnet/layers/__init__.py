from eegnet.layers.activations import elu, elu_forward, relu, relu_forward
from eegnet.layers.context import (
    ContextReuseError,
    Gradients,
    LayerContext,
    Mode,
    NonFiniteError,
    layer_backward,
    register_backward,
)
from eegnet.layers.convolution import (
    conv2d_forward,
    depthwise_conv2d_forward,
    separable_conv2d_forward,
)
from eegnet.layers.dense import dense_forward
from eegnet.layers.gradcheck import (
    GRADCHECK_CASES,
    GRADCHECK_TOLERANCE,
    GradcheckCase,
    GradcheckResult,
    gradcheck,
    run_gradcheck_suite,
)
from eegnet.layers.losses import softmax_xent
from eegnet.layers.normalization import BN_EPS, BN_MOMENTUM, batchnorm_forward
from eegnet.layers.pooling import avgpool_forward, flatten_forward
from eegnet.layers.regularization import dropout_forward

__all__ = [
    "BN_EPS",
    "BN_MOMENTUM",
    "GRADCHECK_CASES",
    "GRADCHECK_TOLERANCE",
    "ContextReuseError",
    "GradcheckCase",
    "GradcheckResult",
    "Gradients",
    "LayerContext",
    "Mode",
    "NonFiniteError",
    "avgpool_forward",
    "batchnorm_forward",
    "conv2d_forward",
    "dense_forward",
    "depthwise_conv2d_forward",
    "dropout_forward",
    "elu",
    "elu_forward",
    "flatten_forward",
    "gradcheck",
    "layer_backward",
    "register_backward",
    "relu",
    "relu_forward",
    "run_gradcheck_suite",
    "separable_conv2d_forward",
    "softmax_xent",
]
