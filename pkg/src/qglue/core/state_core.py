"""
纯态核心 - 多体 qudit 纯态的不可变稠密表示与基本线性代数运算

振幅下标采用大端编码：第 0 个粒子对应最高位的 d 进制数字，
与右矢从左到右的书写顺序一致。所有运算都返回新的态，不修改输入。
"""

import logging
from dataclasses import dataclass
from typing import NamedTuple, Optional, Sequence, Union

import numpy as np

from .exceptions import (
    ArgumentError,
    DegenerateInputError,
    DimensionError,
    GateValidationError,
    ZeroProbabilityBranchError,
)

logger = logging.getLogger(__name__)

NORM_TOL = 1e-10
ZERO_PROBABILITY_TOL = 1e-12

Seed = Union[int, np.random.SeedSequence]


def _check_shape(d: int, n: int):
    """校验局部维数与粒子数"""
    if int(d) < 2:
        raise DimensionError(f"局部维数必须 >= 2: {d}")
    if int(n) < 1:
        raise DimensionError(f"粒子数必须 >= 1: {n}")


@dataclass(frozen=True, eq=False)
class PureState:
    """
    多体纯态

    Attributes:
        local_dim: 局部维数 d
        num_parties: 粒子数 n
        amplitudes: 长度为 d^n 的复振幅向量（只读副本）
    """
    local_dim: int
    num_parties: int
    amplitudes: np.ndarray

    def __post_init__(self):
        _check_shape(self.local_dim, self.num_parties)
        amps = np.array(self.amplitudes, dtype=np.complex128).reshape(-1)
        if amps.size != self.local_dim ** self.num_parties:
            raise DimensionError(
                f"振幅长度 {amps.size} 与 d^n = "
                f"{self.local_dim}^{self.num_parties} 不一致"
            )
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def dim(self) -> int:
        """希尔伯特空间总维数 d^n"""
        return self.local_dim ** self.num_parties

    @property
    def shape(self):
        return (self.local_dim, self.num_parties)

    def as_tensor(self) -> np.ndarray:
        """按粒子展开为 n 阶张量，每个轴长度为 d"""
        return self.amplitudes.reshape((self.local_dim,) * self.num_parties)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm() ** 2 - 1.0) <= tol

    def __repr__(self) -> str:
        return f"PureState(d={self.local_dim}, n={self.num_parties})"


class MeasurementResult(NamedTuple):
    """计算基测量的结果"""
    outcome: int
    probability: float
    post_state: PureState


def from_amplitudes(d: int, n: int, amps: Sequence[complex]) -> PureState:
    """
    由振幅向量构造归一化纯态

    Args:
        d: 局部维数
        n: 粒子数
        amps: 长度为 d^n 的振幅

    Returns:
        归一化后的纯态
    """
    _check_shape(d, n)
    vector = np.asarray(amps, dtype=np.complex128).reshape(-1)
    if vector.size != d ** n:
        raise DimensionError(f"振幅长度 {vector.size} 与 d^n = {d ** n} 不一致")
    norm = np.linalg.norm(vector)
    if norm == 0.0:
        raise DegenerateInputError("全零振幅向量无法归一化")
    return PureState(d, n, vector / norm)


def basis_state(d: int, digits: Sequence[int]) -> PureState:
    """计算基态 |digits⟩"""
    digits = [int(x) for x in digits]
    _check_shape(d, len(digits))
    if any(not 0 <= x < d for x in digits):
        raise ArgumentError(f"基态数字超出范围 [0, {d}): {digits}")
    amps = np.zeros(d ** len(digits), dtype=np.complex128)
    amps[np.ravel_multi_index(digits, (d,) * len(digits))] = 1.0
    return PureState(d, len(digits), amps)


def _require_same_shape(a: PureState, b: PureState):
    if a.shape != b.shape:
        raise DimensionError(f"态的形状不一致: {a.shape} vs {b.shape}")


def inner_product(a: PureState, b: PureState) -> complex:
    """内积 ⟨a|b⟩（对 a 取共轭）"""
    _require_same_shape(a, b)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def fidelity(a: PureState, b: PureState) -> float:
    """保真度 |⟨a|b⟩|²"""
    return abs(inner_product(a, b)) ** 2


def tensor(a: PureState, b: PureState) -> PureState:
    """张量积 a⊗b，b 的粒子排在 a 之后"""
    if a.local_dim != b.local_dim:
        raise DimensionError(f"局部维数不一致: {a.local_dim} vs {b.local_dim}")
    return PureState(
        a.local_dim,
        a.num_parties + b.num_parties,
        np.kron(a.amplitudes, b.amplitudes),
    )


def is_unitary(matrix: np.ndarray, tol: float = NORM_TOL) -> bool:
    """检查 ‖M†M − I‖_max < tol"""
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        return False
    deviation = matrix.conj().T @ matrix - np.eye(matrix.shape[0])
    return float(np.max(np.abs(deviation))) < tol


def _check_sites(sites: Sequence[int], n: int) -> list:
    sites = [int(s) for s in sites]
    if not sites:
        raise ArgumentError("位点列表不能为空")
    if len(set(sites)) != len(sites):
        raise ArgumentError(f"位点重复: {sites}")
    for site in sites:
        if not 0 <= site < n:
            raise ArgumentError(f"位点 {site} 超出范围 [0, {n})")
    return sites


def apply_local(
    state: PureState,
    gate: np.ndarray,
    sites: Sequence[int],
    tol: float = NORM_TOL,
) -> PureState:
    """
    在指定位点上作用 d^k × d^k 幺正门

    Args:
        state: 输入态
        gate: 幺正矩阵，输入/输出下标按 sites 的顺序大端编码
        sites: k 个互不相同的粒子索引
        tol: 幺正性容差

    Returns:
        作用后的新态
    """
    d, n = state.local_dim, state.num_parties
    sites = _check_sites(sites, n)
    k = len(sites)
    matrix = np.asarray(gate, dtype=np.complex128)
    if matrix.shape != (d ** k, d ** k):
        raise DimensionError(
            f"门的形状 {matrix.shape} 与 {k} 个 d={d} 位点不匹配"
        )
    if not is_unitary(matrix, tol):
        raise GateValidationError("门不是幺正矩阵")

    g = matrix.reshape((d,) * (2 * k))
    out = np.tensordot(g, state.as_tensor(), axes=(list(range(k, 2 * k)), sites))
    out = np.moveaxis(out, list(range(k)), sites)
    return PureState(d, n, out.reshape(-1))


def permute_parties(state: PureState, order: Sequence[int]) -> PureState:
    """
    重排粒子顺序

    Args:
        state: 输入态
        order: 新态第 i 个粒子取自原态的第 order[i] 个粒子

    Returns:
        重排后的态
    """
    order = [int(i) for i in order]
    if sorted(order) != list(range(state.num_parties)):
        raise ArgumentError(f"不是 0..{state.num_parties - 1} 的排列: {order}")
    out = np.transpose(state.as_tensor(), order)
    return PureState(state.local_dim, state.num_parties, out.reshape(-1))


def coefficient_states(state: PureState, site: int) -> np.ndarray:
    """
    按某一粒子展开 |Φ⟩ = Σ_i |φ_i⟩|i⟩_site

    Returns:
        形状为 (d, d^(n-1)) 的数组，第 i 行是未归一化的 |φ_i⟩，
        其余粒子保持原顺序
    """
    (site,) = _check_sites([site], state.num_parties)
    return np.moveaxis(state.as_tensor(), site, 0).reshape(state.local_dim, -1)


def measure_computational(
    state: PureState,
    site: int,
    outcome: Optional[int] = None,
    seed: Seed = 0,
) -> MeasurementResult:
    """
    在计算基下测量单个粒子

    Args:
        state: 归一化输入态
        site: 被测粒子
        outcome: 强制的测量结果；为 None 时按 Born 概率抽样
        seed: 抽样所用随机种子

    Returns:
        (测量结果, 分支概率, 去掉被测粒子并重新归一化的态)
    """
    d, n = state.local_dim, state.num_parties
    (site,) = _check_sites([site], n)
    if n == 1:
        raise ArgumentError("不能测量仅剩的唯一粒子")

    branches = coefficient_states(state, site)
    probabilities = np.sum(np.abs(branches) ** 2, axis=1)

    if outcome is None:
        rng = np.random.default_rng(seed)
        outcome = int(rng.choice(d, p=probabilities / probabilities.sum()))
        logger.debug(f"抽样测量粒子 {site}: 结果 {outcome}")
    else:
        outcome = int(outcome)
        if not 0 <= outcome < d:
            raise ArgumentError(f"测量结果 {outcome} 超出范围 [0, {d})")

    probability = float(probabilities[outcome])
    if probability < ZERO_PROBABILITY_TOL:
        raise ZeroProbabilityBranchError(
            f"粒子 {site} 的结果 {outcome} 概率为零 ({probability:.3e})"
        )
    post_state = PureState(d, n - 1, branches[outcome] / np.sqrt(probability))
    return MeasurementResult(outcome, probability, post_state)
