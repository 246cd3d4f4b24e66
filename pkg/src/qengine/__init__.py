"""Dynamic-precision Q16.16 math engine.

Scalar fixed-point arithmetic (`qcore`), shift-add trigonometry
(`cordic`), tiled deferred-shift matrix kernels (`matq`), a runtime
precision-switching engine (`engine`), and the paired benchmark harness
(`bench` / the `qengine` CLI).
"""

from .engine import MathEngine, Mode, init, static_footprint
from .matq import FMatrix, QMatrix, TileConfig

__all__ = [
    "FMatrix",
    "MathEngine",
    "Mode",
    "QMatrix",
    "TileConfig",
    "init",
    "static_footprint",
]

__version__ = "0.1.0"
