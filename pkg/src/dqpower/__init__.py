"""Dual quaternion matrices: arithmetic, power-method eigensolvers, graph
Laplacians and pose-graph SLAM by rank-one completion."""
from .dual import DualNumber, DualQuaternion, Quaternion
from .eigen import EigenPair, PowerConfig, SpectrumResult, all_eigenpairs, power_method
from .errors import DQError, NoConvergence
from .linalg import DQMatrix, DQVector

__all__ = [
    "DQError",
    "DQMatrix",
    "DQVector",
    "DualNumber",
    "DualQuaternion",
    "EigenPair",
    "NoConvergence",
    "PowerConfig",
    "Quaternion",
    "SpectrumResult",
    "all_eigenpairs",
    "power_method",
]
