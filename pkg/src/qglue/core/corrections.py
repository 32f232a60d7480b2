"""
局域幺正修正 - 单 qudit Pauli 门及按粒子施加的修正表

用于把胶合后不同测量分支的态转换为同一个态（确定性胶合）。
"""

import logging
from typing import Dict, List, Optional, Sequence

import numpy as np

from .exceptions import ArgumentError, DimensionError
from .state_core import PureState, apply_local

logger = logging.getLogger(__name__)

Correction = Sequence[Optional[np.ndarray]]


def pauli_x(d: int = 2) -> np.ndarray:
    """广义 X：|j⟩ → |j+1 mod d⟩"""
    return np.roll(np.eye(d, dtype=np.complex128), shift=1, axis=0)


def pauli_z(d: int = 2) -> np.ndarray:
    """广义 Z：|j⟩ → ω^j |j⟩"""
    omega = np.exp(2j * np.pi / d)
    return np.diag(omega ** np.arange(d))


def pauli(name: str, d: int = 2) -> np.ndarray:
    """
    按名称返回单 qudit Pauli 门

    Args:
        name: I | X | Y | Z（Y 仅限 qubit）
        d: 局部维数
    """
    key = name.upper()
    if key == "I":
        return np.eye(d, dtype=np.complex128)
    if key == "X":
        return pauli_x(d)
    if key == "Z":
        return pauli_z(d)
    if key == "Y":
        if d != 2:
            raise DimensionError("Y 门只对 qubit 定义")
        return np.array([[0, -1j], [1j, 0]])
    raise ArgumentError(f"未知的 Pauli 门: {name}")


def parse_correction(text: str, d: int = 2) -> List[np.ndarray]:
    """
    解析形如 "I,X,ZX" 的修正串，逗号分隔每个粒子；
    同一粒子内按矩阵乘积从左到右书写（ZX = Z·X，先作用 X）

    Returns:
        每个粒子一个 d×d 矩阵
    """
    matrices = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            raise ArgumentError(f"修正串中存在空项: {text!r}")
        matrix = np.eye(d, dtype=np.complex128)
        for letter in token:
            matrix = matrix @ pauli(letter, d)
        matrices.append(matrix)
    return matrices


def apply_corrections(state: PureState, correction: Correction) -> PureState:
    """
    对每个粒子施加单 qudit 修正

    Args:
        state: 输入态
        correction: 长度为 n 的列表，元素为 d×d 幺正矩阵或 None（恒等）

    Returns:
        修正后的态
    """
    if len(correction) != state.num_parties:
        raise ArgumentError(
            f"修正列表长度 {len(correction)} 与粒子数 {state.num_parties} 不一致"
        )
    result = state
    for site, matrix in enumerate(correction):
        if matrix is None:
            continue
        matrix = np.asarray(matrix, dtype=np.complex128)
        if matrix.shape != (state.local_dim, state.local_dim):
            raise ArgumentError(f"粒子 {site} 的修正矩阵形状错误: {matrix.shape}")
        result = apply_local(result, matrix, [site])
    return result


def identity_correction(num_parties: int) -> List[Optional[np.ndarray]]:
    return [None] * num_parties


def chain_correction(num_parties: int, d: int = 2) -> List[Optional[np.ndarray]]:
    """
    V1 链式胶合中结果 1 → 结果 0 的修正：Z_y ⊗ (ZX)_z，
    y、z 为链态的最后两个粒子
    """
    if num_parties < 2:
        raise ArgumentError("链态至少需要两个粒子")
    correction = identity_correction(num_parties)
    correction[-2] = pauli("Z", d)
    correction[-1] = pauli("Z", d) @ pauli("X", d)
    return correction


def swap_correction(m: int, n: int, outcome: Sequence[int]) -> List[Optional[np.ndarray]]:
    """
    GHZ_m ⋄⋆⋆ GHZ_n（V1）分支 (a, b) 的修正：
    a⊕b = 1 时对 ȳ 的全部粒子作用 X，a = 1 时对 x̄ 的第一个粒子作用 Z

    Args:
        m: 左侧 GHZ 的粒子数
        n: 右侧 GHZ 的粒子数
        outcome: 测量结果 (a, b)
    """
    a, b = (int(v) for v in outcome)
    correction = identity_correction(m + n - 2)
    if a ^ b:
        for site in range(m - 1, m + n - 2):
            correction[site] = pauli("X")
    if a:
        correction[0] = pauli("Z")
    return correction


def w_swap_correction(m: int, n: int, outcome: Sequence[int]) -> List[Optional[np.ndarray]]:
    """
    W_m ⋄⋆⋆ W_n（V1）中 ψ± 分支的修正：
    结果 (0,1) 无需修正，结果 (1,0) 对 ȳ 的全部粒子作用 Z
    """
    outcome = tuple(int(v) for v in outcome)
    if outcome not in ((0, 1), (1, 0)):
        raise ArgumentError(f"只有 ψ± 分支可修正为 W 态: {outcome}")
    correction = identity_correction(m + n - 2)
    if outcome == (1, 0):
        for site in range(m - 1, m + n - 2):
            correction[site] = pauli("Z")
    return correction


# 非对称 W 态 ⋄⋆ φ⁺（V4）两个分支到非对称 W 态的修正
ASYMMETRIC_W_FLIP = "I,I,X"
ASYMMETRIC_W_OUTCOME_1 = "X,X,Z"

ASYMMETRIC_W_CORRECTIONS: Dict[int, str] = {
    0: ASYMMETRIC_W_FLIP,
    1: ASYMMETRIC_W_OUTCOME_1,
}
