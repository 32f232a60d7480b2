"""
纠缠门 - 两 qudit 门 V = Σ|χ_ij⟩⟨i,j| 的构造与校验

列 (i, j) 按大端两位编码排列，即第 i*d + j 列是 V|i,j⟩。
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Sequence

import numpy as np

from .exceptions import ArgumentError, DimensionError, GateValidationError
from .state_core import NORM_TOL, PureState, is_unitary

logger = logging.getLogger(__name__)

MAX_ENTANGLED_TOL = 1e-10


class GateKind(Enum):
    """门类型"""
    ENTANGLING_BASIS = "entangling-basis"   # 每一列都是最大纠缠态
    PLAIN = "plain"                         # 普通幺正门


def _column_is_maximally_entangled(column: np.ndarray, d: int) -> bool:
    """单体约化密度矩阵是否为 I/d"""
    block = column.reshape(d, d)
    reduced = block @ block.conj().T
    return float(np.max(np.abs(reduced - np.eye(d) / d))) < MAX_ENTANGLED_TOL


@dataclass(frozen=True, eq=False)
class TwoQuditGate:
    """
    两 qudit 幺正门

    Attributes:
        local_dim: 局部维数 d
        matrix: d²×d² 幺正矩阵（只读副本）
        name: 门名称
        kind: 由列的纠缠性自动判定
    """
    local_dim: int
    matrix: np.ndarray
    name: str = "custom"
    kind: GateKind = field(init=False)

    def __post_init__(self):
        d = int(self.local_dim)
        if d < 2:
            raise DimensionError(f"局部维数必须 >= 2: {d}")
        matrix = np.array(self.matrix, dtype=np.complex128)
        if matrix.shape != (d * d, d * d):
            raise DimensionError(f"门矩阵形状 {matrix.shape} 应为 ({d * d}, {d * d})")
        if not is_unitary(matrix, NORM_TOL):
            raise GateValidationError(f"门 {self.name} 不是幺正矩阵")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

        columns_ok = [
            _column_is_maximally_entangled(matrix[:, c], d) for c in range(d * d)
        ]
        kind = GateKind.ENTANGLING_BASIS if all(columns_ok) else GateKind.PLAIN
        object.__setattr__(self, "kind", kind)
        if kind is GateKind.PLAIN:
            logger.debug(f"门 {self.name} 存在非最大纠缠列，按普通幺正门处理")

    def column(self, i: int, j: int) -> PureState:
        """V|i,j⟩，即 |χ_ij⟩"""
        d = self.local_dim
        if not (0 <= i < d and 0 <= j < d):
            raise ArgumentError(f"列下标 ({i}, {j}) 超出范围")
        return PureState(d, 2, self.matrix[:, i * d + j])

    def is_entangling_basis(self) -> bool:
        return self.kind is GateKind.ENTANGLING_BASIS


def generalized_bell_basis(d: int) -> List[PureState]:
    """
    广义 Bell 基 |χ_ij⟩ = (1/√d) Σ_k ω^{ik} |k, k+j mod d⟩

    Args:
        d: 局部维数 (>= 2)

    Returns:
        按 (i, j) 大端顺序排列的 d² 个两体态
    """
    if int(d) < 2:
        raise ArgumentError(f"局部维数必须 >= 2: {d}")
    omega = np.exp(2j * np.pi / d)
    basis = []
    for i in range(d):
        for j in range(d):
            amps = np.zeros(d * d, dtype=np.complex128)
            for k in range(d):
                amps[k * d + (k + j) % d] = omega ** (i * k)
            basis.append(PureState(d, 2, amps / np.sqrt(d)))
    return basis


def gate_from_basis(basis: Sequence[PureState], name: str = "custom") -> TwoQuditGate:
    """
    由正交归一基构造 V = Σ|χ_ij⟩⟨i,j|

    Args:
        basis: d² 个两体态，按 (i, j) 大端顺序
        name: 门名称

    Returns:
        列依次为 basis 的幺正门
    """
    if not basis:
        raise GateValidationError("基不能为空")
    d = basis[0].local_dim
    if len(basis) != d * d:
        raise GateValidationError(f"基应包含 {d * d} 个态，实际 {len(basis)}")
    for state in basis:
        if state.local_dim != d or state.num_parties != 2:
            raise DimensionError("基中的态必须是局部维数一致的两体态")

    matrix = np.column_stack([state.amplitudes for state in basis])
    gram = matrix.conj().T @ matrix
    if float(np.max(np.abs(gram - np.eye(d * d)))) >= NORM_TOL:
        raise GateValidationError("给定的基不是正交归一的")

    gate = TwoQuditGate(d, matrix, name=name)
    if not gate.is_entangling_basis():
        logger.warning(f"门 {name} 的列不全是最大纠缠态")
    return gate


_S = 1 / np.sqrt(2)

BUILTIN_MATRICES: Dict[str, np.ndarray] = {
    "V1": _S * np.array([
        [1, 0, 0, 1],
        [0, 1, 1, 0],
        [0, 1, -1, 0],
        [1, 0, 0, -1],
    ]),
    "V2": _S * np.array([
        [1, 0, 0, 1],
        [0, 1, -1, 0],
        [0, 1, 1, 0],
        [1, 0, 0, -1],
    ]),
    "V3": np.array([
        [1, 0, 0, 0],
        [0, 0, 0, 1],
        [0, 0, 1, 0],
        [0, 1, 0, 0],
    ]),
    "V4": np.array([
        [_S, 0, 0, _S],
        [0, 1, 0, 0],
        [0, 0, 1, 0],
        [_S, 0, 0, -_S],
    ]),
}


def builtin(name: str) -> TwoQuditGate:
    """
    内置的四个两 qubit 胶合门 V1–V4

    Args:
        name: V1 | V2 | V3 | V4

    Returns:
        对应的门 (d = 2)
    """
    key = str(name).upper()
    if key not in BUILTIN_MATRICES:
        raise ArgumentError(
            f"未知的内置门: {name}，可选 {', '.join(BUILTIN_MATRICES)}"
        )
    return TwoQuditGate(2, BUILTIN_MATRICES[key], name=key)


def bell_gate(d: int) -> TwoQuditGate:
    """广义 Bell 基对应的默认胶合门"""
    return gate_from_basis(generalized_bell_basis(d), name=f"bell{d}")


def resolve_gate(name: str, d: int = 2) -> TwoQuditGate:
    """
    按名称解析胶合门

    Args:
        name: V1–V4（仅 d=2）或 bell
        d: 局部维数

    Returns:
        胶合门
    """
    if str(name).lower() == "bell":
        return bell_gate(d)
    gate = builtin(name)
    if d != 2:
        raise DimensionError(f"内置门 {gate.name} 只适用于 d=2，当前 d={d}")
    return gate


def list_gates() -> List[Dict[str, str]]:
    """列出可用的门名称"""
    gates = [
        {"name": key, "kind": builtin(key).kind.value, "description": "两 qubit 内置门"}
        for key in BUILTIN_MATRICES
    ]
    gates.append({
        "name": "bell",
        "kind": GateKind.ENTANGLING_BASIS.value,
        "description": "广义 Bell 基门，适用于任意 d",
    })
    return gates
