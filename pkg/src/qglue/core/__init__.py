"""
qglue 核心模块 - 多体纠缠态的胶合、递推与均匀性分析
"""

__version__ = "0.1.0"

from .analysis import analyze, average_purity, is_k_uniform, max_uniformity, reduced_density
from .builders import parse_builder
from .config_manager import ConfigManager, QGlueConfig
from .entangling_gates import TwoQuditGate, builtin, resolve_gate
from .gluing import GlueOutcome, GlueVariant, glue, glue_star, glue_star_star
from .recursion_chain import ChainPolicy, RecursionMatrix, run_chain
from .state_core import PureState, from_amplitudes

__all__ = [
    "PureState",
    "from_amplitudes",
    "TwoQuditGate",
    "builtin",
    "resolve_gate",
    "GlueOutcome",
    "GlueVariant",
    "glue",
    "glue_star",
    "glue_star_star",
    "ChainPolicy",
    "RecursionMatrix",
    "run_chain",
    "reduced_density",
    "is_k_uniform",
    "max_uniformity",
    "average_purity",
    "analyze",
    "parse_builder",
    "ConfigManager",
    "QGlueConfig",
]
