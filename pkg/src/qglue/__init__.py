"""
qglue - 通过纠缠门胶合多体纠缠态
"""

from .core import __version__

__all__ = ["__version__"]
