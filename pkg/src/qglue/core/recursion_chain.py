"""
递推矩阵链 - 线性几何中逐个胶合最大纠缠对的递推矩阵形式

初始态按最后一个粒子展开 |Φ⟩ = Σ_i |φ_i⟩|i⟩，每一步 ⋄⋆ 胶合把系数态
(|φ_0⟩, …, |φ_{d-1}⟩) 右乘一个递推矩阵 𝒢，矩阵元的乘法是张量积、
加法是叠加。矩阵元不归一化，只在 assemble 时统一归一化。
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import reduce
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .builders import max_entangled_pair
from .entangling_gates import TwoQuditGate
from .exceptions import (
    ArgumentError,
    DegenerateInputError,
    DimensionError,
    ZeroProbabilityBranchError,
)
from .gluing import glue_star
from .state_core import (
    ZERO_PROBABILITY_TOL,
    PureState,
    Seed,
    coefficient_states,
    from_amplitudes,
)

logger = logging.getLogger(__name__)


class ChainPolicy(Enum):
    """链式胶合的测量结果策略"""
    ZERO = "zero"        # 每一步强制结果 0，用递推矩阵计算
    SAMPLE = "sample"    # 每一步按 Born 概率抽样，逐步胶合计算


def _parties_of(length: int, d: int) -> int:
    """由向量长度 d^p 反推 p"""
    p, size = 0, 1
    while size < length:
        size *= d
        p += 1
    if size != length:
        raise DimensionError(f"长度 {length} 不是 {d} 的整数次幂")
    return p


@dataclass(frozen=True, eq=False)
class RecursionMatrix:
    """
    d×d 递推矩阵，每个矩阵元是一个 p 体（未归一化）振幅向量

    Attributes:
        local_dim: 局部维数 d
        block_parties: 每个矩阵元的粒子数 p
        entries: 形状为 (d, d, d^p) 的复数组
    """
    local_dim: int
    block_parties: int
    entries: np.ndarray

    def __post_init__(self):
        d, p = int(self.local_dim), int(self.block_parties)
        if d < 2 or p < 1:
            raise DimensionError(f"非法的递推矩阵参数 d={d}, p={p}")
        entries = np.array(self.entries, dtype=np.complex128)
        if entries.shape != (d, d, d ** p):
            raise DimensionError(
                f"矩阵元数组形状 {entries.shape} 应为 ({d}, {d}, {d ** p})"
            )
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    def entry(self, a: int, b: int) -> np.ndarray:
        return self.entries[a, b]

    def __matmul__(self, other: "RecursionMatrix") -> "RecursionMatrix":
        return compose(self, other)


def recursion_from_gate(gate: TwoQuditGate, outcome: int = 0) -> RecursionMatrix:
    """
    由胶合门与 x 的测量结果 o 得到递推矩阵 𝒢_ab = Σ_j V_{(o,j),(a,b)} |j⟩

    Args:
        gate: 胶合门
        outcome: x 的测量结果

    Returns:
        p = 1 的递推矩阵
    """
    d = gate.local_dim
    if not 0 <= int(outcome) < d:
        raise ArgumentError(f"测量结果 {outcome} 超出范围 [0, {d})")
    v = gate.matrix.reshape(d, d, d, d)
    # v[o, j, a, b] -> entries[a, b, j]
    entries = np.transpose(v[int(outcome)], (1, 2, 0))
    return RecursionMatrix(d, 1, entries)


def compose(g1: RecursionMatrix, g2: RecursionMatrix) -> RecursionMatrix:
    """
    递推矩阵乘法 (g1·g2)_ac = Σ_b g1_ab ⊗ g2_bc，g1 的粒子在前

    Returns:
        p = p1 + p2 的递推矩阵
    """
    if g1.local_dim != g2.local_dim:
        raise DimensionError(f"局部维数不一致: {g1.local_dim} vs {g2.local_dim}")
    d = g1.local_dim
    product = np.einsum("abi,bcj->acij", g1.entries, g2.entries)
    return RecursionMatrix(
        d, g1.block_parties + g2.block_parties, product.reshape(d, d, -1)
    )


def power(g: RecursionMatrix, n: int) -> RecursionMatrix:
    """𝒢^n，n >= 1"""
    if int(n) < 1:
        raise ArgumentError(f"幂次必须 >= 1: {n}")
    return reduce(compose, [g] * int(n))


def _as_coefficients(coeffs: Sequence[np.ndarray]) -> np.ndarray:
    try:
        array = np.array([np.asarray(c, dtype=np.complex128).reshape(-1) for c in coeffs])
    except ValueError:
        raise DimensionError("系数态的长度不一致")
    if array.ndim != 2:
        raise DimensionError("系数态的长度不一致")
    return array


def expand(coeffs: Sequence[np.ndarray], g: RecursionMatrix) -> List[np.ndarray]:
    """
    一步递推：output_b = Σ_a coeffs_a ⊗ 𝒢_ab

    Args:
        coeffs: d 个系数向量 |φ_i⟩
        g: 递推矩阵

    Returns:
        d 个新系数向量，粒子数增加 g.block_parties
    """
    array = _as_coefficients(coeffs)
    d = g.local_dim
    if array.shape[0] != d:
        raise DimensionError(f"需要 {d} 个系数态，实际 {array.shape[0]}")
    out = np.einsum("ai,abj->bij", array, g.entries).reshape(d, -1)
    return list(out)


def assemble(coeffs: Sequence[np.ndarray]) -> PureState:
    """
    由系数态组装 Σ_i |φ_i⟩|i⟩（链粒子放在最后）并归一化
    """
    array = _as_coefficients(coeffs)
    d = array.shape[0]
    if not np.any(array):
        raise DegenerateInputError("系数态全为零")
    n = _parties_of(array.shape[1], d) + 1
    return from_amplitudes(d, n, array.T.reshape(-1))


def coefficients_of(state: PureState) -> List[np.ndarray]:
    """按最后一个粒子展开得到系数态"""
    return list(coefficient_states(state, state.num_parties - 1))


@dataclass(frozen=True)
class ChainResult:
    """
    链式胶合结果

    Attributes:
        state: 最终态（归一化）
        outcomes: 每一步 x 的测量结果
        probability: 所有测量结果的联合概率
    """
    state: PureState
    outcomes: Tuple[int, ...]
    probability: float


def chain_via_recursion(
    initial: PureState,
    gates: Sequence[TwoQuditGate],
    outcomes: Optional[Sequence[int]] = None,
) -> ChainResult:
    """
    用递推矩阵计算链式胶合

    Args:
        initial: 初始态，沿最后一个粒子胶合
        gates: 每一步的胶合门
        outcomes: 每一步 x 的结果，默认全 0

    Returns:
        最终态及其联合概率
    """
    outcomes = [0] * len(gates) if outcomes is None else list(outcomes)
    if len(outcomes) != len(gates):
        raise ArgumentError("测量结果个数与胶合门个数不一致")
    if not gates:
        raise ArgumentError("链至少需要一步")

    d = initial.local_dim
    coeffs = coefficients_of(initial)
    for step, (gate, outcome) in enumerate(zip(gates, outcomes), start=1):
        if gate.local_dim != d:
            raise DimensionError(f"第 {step} 步门的局部维数 {gate.local_dim} != {d}")
        coeffs = expand(coeffs, recursion_from_gate(gate, outcome))
        logger.debug(f"递推第 {step} 步: 门 {gate.name}, 结果 {outcome}")

    # 每一步附加的最大纠缠对贡献 1/√d 的振幅因子
    weight = float(np.sum(np.abs(_as_coefficients(coeffs)) ** 2))
    probability = weight / d ** len(gates)
    if probability < ZERO_PROBABILITY_TOL:
        raise ZeroProbabilityBranchError(f"测量结果序列 {outcomes} 的概率为零")
    return ChainResult(assemble(coeffs), tuple(outcomes), probability)


def chain_via_gluing(
    initial: PureState,
    gates: Sequence[TwoQuditGate],
    outcomes: Optional[Sequence[Optional[int]]] = None,
    seed: Seed = 0,
) -> ChainResult:
    """
    逐步 ⋄⋆ 胶合新的最大纠缠对（在其第一个粒子处胶合）

    Args:
        initial: 初始态，沿最后一个粒子胶合
        gates: 每一步的胶合门
        outcomes: 每一步的强制结果，None 表示抽样
        seed: 抽样种子，每一步使用派生的独立随机流

    Returns:
        最终态、各步结果及联合概率
    """
    if not gates:
        raise ArgumentError("链至少需要一步")
    outcomes = [None] * len(gates) if outcomes is None else list(outcomes)
    if len(outcomes) != len(gates):
        raise ArgumentError("测量结果个数与胶合门个数不一致")
    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)

    state, probability, recorded = initial, 1.0, []
    pair = max_entangled_pair(initial.local_dim)
    for step, (gate, forced, step_seed) in enumerate(
        zip(gates, outcomes, seed.spawn(len(gates))), start=1
    ):
        result = glue_star(state, state.num_parties - 1, pair, 0, gate, forced, step_seed)
        state = result.state
        probability *= result.probability
        recorded.append(result.outcomes[0])
        logger.debug(f"胶合第 {step} 步: 门 {gate.name}, 结果 {result.outcomes[0]}")
    return ChainResult(state, tuple(recorded), probability)


def run_chain(
    gates: Sequence[TwoQuditGate],
    policy: ChainPolicy = ChainPolicy.ZERO,
    initial: Optional[PureState] = None,
    seed: Seed = 0,
) -> ChainResult:
    """
    从最大纠缠对出发执行链式胶合

    Args:
        gates: 每一步的胶合门
        policy: zero（强制结果 0）或 sample（抽样）
        initial: 初始态，默认 (1/√d)Σ|kk⟩
        seed: 抽样种子

    Returns:
        链式胶合结果
    """
    if not gates:
        raise ArgumentError("链至少需要一步")
    try:
        policy = ChainPolicy(policy)
    except ValueError:
        choices = ", ".join(p.value for p in ChainPolicy)
        raise ArgumentError(f"未知的结果策略: {policy}，可选 {choices}")
    if initial is None:
        initial = max_entangled_pair(gates[0].local_dim)
    if policy is ChainPolicy.ZERO:
        result = chain_via_recursion(initial, gates)
    else:
        result = chain_via_gluing(initial, gates, seed=seed)
    logger.info(
        f"链式胶合完成: {len(gates)} 步, {result.state.num_parties} 粒子, "
        f"结果 {list(result.outcomes)}, 概率 {result.probability:.6g}"
    )
    return result
