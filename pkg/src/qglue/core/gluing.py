"""
胶合运算 - ⋄、⋄⋆、⋄⋆⋆ 三种胶合

胶合后的粒子顺序固定为 (x̄, x, y, ȳ)：
Φ 中除 x 外的粒子按原顺序，随后是 x、y，最后是 Ψ 中除 y 外的粒子。
被测量的粒子从排布中删除。
"""

import logging
from dataclasses import dataclass
from enum import Enum
from itertools import product
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .entangling_gates import TwoQuditGate
from .exceptions import ArgumentError, DimensionError, ZeroProbabilityBranchError
from .state_core import (
    PureState,
    Seed,
    apply_local,
    measure_computational,
    permute_parties,
    tensor,
)

logger = logging.getLogger(__name__)

PROBABILITY_TOL = 1e-10


class GlueVariant(Enum):
    """胶合类型，星号个数即被测量的粒子数"""
    NONE = "none"
    STAR = "star"
    STAR_STAR = "starstar"

    @property
    def measured_count(self) -> int:
        return {"none": 0, "star": 1, "starstar": 2}[self.value]


def _as_variant(variant) -> GlueVariant:
    try:
        return GlueVariant(variant)
    except ValueError:
        choices = ", ".join(v.value for v in GlueVariant)
        raise ArgumentError(f"未知的胶合类型: {variant}，可选 {choices}")


@dataclass(frozen=True)
class GlueOutcome:
    """
    胶合结果

    Attributes:
        state: 胶合并测量后的归一化态
        measured: (粒子标签, 测量结果) 列表
        probability: 该分支的概率
    """
    state: PureState
    measured: Tuple[Tuple[str, int], ...] = ()
    probability: float = 1.0

    def __post_init__(self):
        if not -PROBABILITY_TOL <= self.probability <= 1.0 + PROBABILITY_TOL:
            raise ArgumentError(f"分支概率超出 [0, 1]: {self.probability}")
        if len(self.measured) > 2:
            raise ArgumentError("最多测量两个粒子")

    @property
    def variant(self) -> GlueVariant:
        return [GlueVariant.NONE, GlueVariant.STAR, GlueVariant.STAR_STAR][
            len(self.measured)
        ]

    @property
    def outcomes(self) -> Tuple[int, ...]:
        return tuple(digit for _, digit in self.measured)


def glue_layout(m: int, x: int, n: int, y: int) -> List[int]:
    """
    返回将 Φ⊗Ψ 重排为 (x̄, x, y, ȳ) 的粒子排列

    Args:
        m: Φ 的粒子数
        x: Φ 中的胶合位点
        n: Ψ 的粒子数
        y: Ψ 中的胶合位点
    """
    if not 0 <= x < m:
        raise ArgumentError(f"胶合位点 x={x} 超出范围 [0, {m})")
    if not 0 <= y < n:
        raise ArgumentError(f"胶合位点 y={y} 超出范围 [0, {n})")
    left = [i for i in range(m) if i != x]
    right = [m + j for j in range(n) if j != y]
    return left + [x, m + y] + right


def glue(
    phi: PureState,
    x: int,
    psi: PureState,
    y: int,
    gate: TwoQuditGate,
) -> PureState:
    """
    无测量胶合 |Φ⟩⋄|Ψ⟩

    Args:
        phi: m 体态
        x: phi 中的胶合位点
        psi: n 体态
        y: psi 中的胶合位点
        gate: 胶合门 V

    Returns:
        排布为 (x̄, x, y, ȳ) 的 m+n 体态
    """
    if not phi.local_dim == psi.local_dim == gate.local_dim:
        raise DimensionError(
            f"局部维数不一致: Φ={phi.local_dim}, Ψ={psi.local_dim}, V={gate.local_dim}"
        )
    m = phi.num_parties
    order = glue_layout(m, x, psi.num_parties, y)
    joined = permute_parties(tensor(phi, psi), order)
    return apply_local(joined, gate.matrix, [m - 1, m])


def glue_star(
    phi: PureState,
    x: int,
    psi: PureState,
    y: int,
    gate: TwoQuditGate,
    outcome: Optional[int] = None,
    seed: Seed = 0,
) -> GlueOutcome:
    """
    单粒子测量胶合 |Φ⟩⋄⋆|Ψ⟩：胶合后在计算基下测量 x

    Returns:
        m+n-1 体态、x 的测量结果及其概率
    """
    glued = glue(phi, x, psi, y, gate)
    result = measure_computational(glued, phi.num_parties - 1, outcome, seed)
    return GlueOutcome(
        state=result.post_state,
        measured=(("x", result.outcome),),
        probability=result.probability,
    )


def glue_star_star(
    phi: PureState,
    x: int,
    psi: PureState,
    y: int,
    gate: TwoQuditGate,
    outcomes: Optional[Sequence[int]] = None,
    seed: Seed = 0,
) -> GlueOutcome:
    """
    双粒子测量胶合 |Φ⟩⋄⋆⋆|Ψ⟩（纠缠交换）：胶合后依次测量 x 和 y

    Args:
        outcomes: 强制的 (x, y) 测量结果；为 None 时按 Born 概率抽样
        seed: 抽样种子，两次测量使用由其派生的独立随机流

    Returns:
        m+n-2 体态、测量结果及联合概率
    """
    if phi.num_parties + psi.num_parties < 3:
        raise ArgumentError("两个单体态的 ⋄⋆⋆ 胶合不会留下任何粒子")
    if outcomes is None:
        forced_x, forced_y = None, None
    else:
        if len(outcomes) != 2:
            raise ArgumentError(f"需要两个测量结果: {outcomes}")
        forced_x, forced_y = (int(v) for v in outcomes)

    if not isinstance(seed, np.random.SeedSequence):
        seed = np.random.SeedSequence(seed)
    seed_x, seed_y = seed.spawn(2)
    glued = glue(phi, x, psi, y, gate)
    site = phi.num_parties - 1
    first = measure_computational(glued, site, forced_x, seed_x)
    # x 被删除后 y 移到了同一位置
    second = measure_computational(first.post_state, site, forced_y, seed_y)
    return GlueOutcome(
        state=second.post_state,
        measured=(("x", first.outcome), ("y", second.outcome)),
        probability=first.probability * second.probability,
    )


def enumerate_branches(
    phi: PureState,
    x: int,
    psi: PureState,
    y: int,
    gate: TwoQuditGate,
    variant: GlueVariant,
) -> List[GlueOutcome]:
    """
    按字典序列出某种胶合的所有非零概率分支

    Returns:
        GlueOutcome 列表；无测量胶合只有一个概率为 1 的分支
    """
    variant = _as_variant(variant)
    d = phi.local_dim
    if variant is GlueVariant.NONE:
        return [GlueOutcome(state=glue(phi, x, psi, y, gate))]

    branches = []
    for digits in product(range(d), repeat=variant.measured_count):
        try:
            if variant is GlueVariant.STAR:
                branch = glue_star(phi, x, psi, y, gate, outcome=digits[0])
            else:
                branch = glue_star_star(phi, x, psi, y, gate, outcomes=digits)
        except ZeroProbabilityBranchError:
            logger.debug(f"跳过零概率分支 {digits}")
            continue
        branches.append(branch)
    return branches


def run_glue(
    phi: PureState,
    x: int,
    psi: PureState,
    y: int,
    gate: TwoQuditGate,
    variant: GlueVariant,
    outcomes: Optional[Sequence[int]] = None,
    seed: Seed = 0,
) -> GlueOutcome:
    """
    按胶合类型分派，统一返回 GlueOutcome

    Args:
        outcomes: 强制测量结果，长度须等于该类型测量的粒子数
    """
    variant = _as_variant(variant)
    if outcomes is not None and len(outcomes) != variant.measured_count:
        raise ArgumentError(
            f"{variant.value} 胶合需要 {variant.measured_count} 个测量结果，"
            f"实际 {len(outcomes)}"
        )
    if variant is GlueVariant.NONE:
        outcome = GlueOutcome(state=glue(phi, x, psi, y, gate))
    elif variant is GlueVariant.STAR:
        forced = None if outcomes is None else outcomes[0]
        outcome = glue_star(phi, x, psi, y, gate, forced, seed)
    else:
        outcome = glue_star_star(phi, x, psi, y, gate, outcomes, seed)
    logger.info(
        f"{variant.value} 胶合完成: {phi.num_parties}+{psi.num_parties} → "
        f"{outcome.state.num_parties} 粒子, 概率 {outcome.probability:.6g}"
    )
    return outcome
