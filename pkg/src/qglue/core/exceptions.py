"""
异常定义 - qglue 全部模块共用的异常层级

库代码只负责抛出异常，进程退出码由命令行入口根据 exit_code 决定。
"""


class QGlueError(Exception):
    """qglue 基础异常"""

    exit_code = 2


class DimensionError(QGlueError, ValueError):
    """维度不匹配（局部维数、粒子数或矩阵形状）"""
    pass


class DegenerateInputError(QGlueError, ValueError):
    """退化输入（例如全零振幅向量）"""
    pass


class GateValidationError(QGlueError, ValueError):
    """门或基校验失败（非幺正、非正交归一）"""
    pass


class ArgumentError(QGlueError, ValueError):
    """参数错误（重复位点、越界索引、未知名称等）"""
    pass


class ZeroProbabilityBranchError(QGlueError):
    """强制测量结果的分支概率为零"""

    exit_code = 3


class StateFormatError(QGlueError):
    """JSON 文档格式错误"""
    pass
