"""HTTP service and the shared ops layer."""

from .app import create_app
from .ops import op_bench, op_eval, op_gen, op_quantize, op_sweep, op_train

__all__ = [
    "create_app",
    "op_bench",
    "op_eval",
    "op_gen",
    "op_quantize",
    "op_sweep",
    "op_train",
]
