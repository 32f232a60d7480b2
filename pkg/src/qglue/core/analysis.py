"""
分析模块 - 约化密度矩阵、k-均匀性检验、平均纯度与局域幺正等价判定

子集按 itertools.combinations 的字典序枚举；并发求值时结果仍按该顺序收集，
因此报告与求值顺序无关。
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Callable, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from .corrections import Correction, apply_corrections, parse_correction
from .exceptions import ArgumentError
from .gluing import GlueOutcome
from .state_core import NORM_TOL, PureState, inner_product

logger = logging.getLogger(__name__)

UNIFORMITY_TOL = 1e-9
PSD_TOL = 1e-9

Subset = Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """
    约化密度矩阵 ρ_S

    Attributes:
        local_dim: 局部维数 d
        num_parties: 子集大小 |S|
        entries: d^|S| × d^|S| 复矩阵
    """
    local_dim: int
    num_parties: int
    entries: np.ndarray

    def purity(self) -> float:
        """Tr ρ²"""
        return float(np.vdot(self.entries, self.entries).real)

    def eigenvalues(self) -> np.ndarray:
        """升序特征值"""
        return np.linalg.eigvalsh(self.entries)

    def deviation_from_maximally_mixed(self) -> float:
        """‖ρ − I/d^|S|‖_max"""
        size = self.entries.shape[0]
        return float(np.max(np.abs(self.entries - np.eye(size) / size)))

    def check(self, tol: float = NORM_TOL) -> bool:
        """检查厄米性、迹为 1 与半正定性"""
        hermitian = np.max(np.abs(self.entries - self.entries.conj().T)) < tol
        unit_trace = abs(np.trace(self.entries) - 1.0) < tol
        positive = self.eigenvalues()[0] >= -PSD_TOL
        return bool(hermitian and unit_trace and positive)


def _check_subset(subset: Sequence[int], n: int) -> Subset:
    subset = tuple(int(i) for i in subset)
    if not subset:
        raise ArgumentError("子集不能为空")
    if len(set(subset)) != len(subset):
        raise ArgumentError(f"子集中存在重复粒子: {subset}")
    for index in subset:
        if not 0 <= index < n:
            raise ArgumentError(f"粒子 {index} 超出范围 [0, {n})")
    return subset


def reduced_density(state: PureState, subset: Sequence[int]) -> DensityMatrix:
    """
    约化密度矩阵 ρ_S = Tr_{S̄} |ψ⟩⟨ψ|

    Args:
        state: 纯态
        subset: 保留的粒子，ρ_S 的粒子顺序与之相同

    Returns:
        约化密度矩阵
    """
    n, d = state.num_parties, state.local_dim
    subset = _check_subset(subset, n)
    rest = [i for i in range(n) if i not in subset]
    block = np.transpose(state.as_tensor(), list(subset) + rest)
    block = block.reshape(d ** len(subset), -1)
    return DensityMatrix(d, len(subset), block @ block.conj().T)


def subsets(n: int, k: int) -> Iterator[Subset]:
    """按字典序枚举大小为 k 的子集"""
    return combinations(range(n), k)


def subset_deviation(state: PureState, subset: Sequence[int]) -> float:
    """ρ_S 与 I/d^|S| 的最大元素偏差"""
    return reduced_density(state, subset).deviation_from_maximally_mixed()


def _evaluate(func: Callable, items: Iterable, threads: int = 1) -> Iterator:
    """按输入顺序逐个返回 func(item)，threads > 1 时并发求值"""
    if threads is None or threads <= 1:
        return map(func, items)
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return iter(list(executor.map(func, items)))


@dataclass(frozen=True)
class SubsetFailure:
    """未达到最大混合的子集"""
    subset: Subset
    deviation: float


@dataclass
class UniformityReport:
    """
    某个 k 上的均匀性检验结果

    Attributes:
        k: 子集大小
        checked: 已检查的子集数
        failures: 偏差超过容差的子集
    """
    k: int
    checked: int = 0
    failures: List[SubsetFailure] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures


def _check_k(state: PureState, k: int):
    limit = state.num_parties // 2
    if not 1 <= int(k) <= limit:
        raise ArgumentError(
            f"k={k} 超出范围 [1, {limit}]（n={state.num_parties} 的态至多 {limit}-均匀）"
        )


def uniformity_report(
    state: PureState,
    k: int,
    tol: float = UNIFORMITY_TOL,
    threads: int = 1,
    stop_on_failure: bool = False,
) -> UniformityReport:
    """
    检查所有大小为 k 的子集的约化密度矩阵

    Args:
        state: 纯态
        k: 子集大小，1 <= k <= n/2
        tol: 最大元素偏差容差
        threads: 并发线程数
        stop_on_failure: 遇到第一个失败的子集即停止（仅串行时生效）

    Returns:
        检验报告
    """
    _check_k(state, k)
    report = UniformityReport(k=int(k))
    candidates = list(subsets(state.num_parties, int(k)))
    deviations = _evaluate(lambda s: subset_deviation(state, s), candidates, threads)
    for subset, deviation in zip(candidates, deviations):
        report.checked += 1
        if deviation >= tol:
            logger.debug(f"子集 {subset} 未达到最大混合, 偏差 {deviation:.3e}")
            report.failures.append(SubsetFailure(subset, deviation))
            if stop_on_failure:
                break
    return report


def is_k_uniform(
    state: PureState,
    k: int,
    tol: float = UNIFORMITY_TOL,
    threads: int = 1,
) -> bool:
    """所有大小恰为 k 的子集的约化密度矩阵是否都等于 I/d^k"""
    return uniformity_report(state, k, tol, threads, stop_on_failure=True).passed


def max_uniformity(state: PureState, tol: float = UNIFORMITY_TOL, threads: int = 1) -> int:
    """
    最大的 k 使态为 k-均匀

    Returns:
        [0, n/2] 内的整数；连 1-均匀都不满足时为 0
    """
    for k in range(1, state.num_parties // 2 + 1):
        if not is_k_uniform(state, k, tol, threads):
            return k - 1
    return state.num_parties // 2


def average_purity(state: PureState, threads: int = 1) -> float:
    """
    平均纯度 π_ME：所有 n/2 体子集 Tr ρ_S² 的平均值

    Returns:
        [1/d^(n/2), 1] 内的实数
    """
    k = state.num_parties // 2
    if k < 1:
        raise ArgumentError(f"平均纯度需要至少 2 个粒子: n={state.num_parties}")
    candidates = list(subsets(state.num_parties, k))
    purities = np.fromiter(
        _evaluate(lambda s: reduced_density(state, s).purity(), candidates, threads),
        dtype=float,
        count=len(candidates),
    )
    # np.sum 对连续数组采用成对求和
    return float(np.sum(purities) / len(candidates))


def schmidt_spectrum(state: PureState, subset: Sequence[int], cutoff: float = 1e-12) -> np.ndarray:
    """ρ_S 的非零特征值（降序）"""
    values = reduced_density(state, subset).eigenvalues()[::-1]
    return values[values > cutoff]


def equal_up_to_phase(a: PureState, b: PureState, tol: float = NORM_TOL) -> bool:
    """|⟨a|b⟩| > 1 − tol"""
    return abs(inner_product(a, b)) > 1.0 - tol


def lu_correctable(
    branches: Sequence[Union[GlueOutcome, PureState]],
    corrections: Sequence[Union[Correction, str]],
    tol: float = NORM_TOL,
) -> bool:
    """
    施加各分支的局域修正后，所有分支是否两两相差一个全局相位

    Args:
        branches: 测量分支（GlueOutcome 或 PureState）
        corrections: 每个分支一个修正，可以是逐粒子矩阵列表（None 为恒等）
            或形如 "I,X,ZX" 的修正串

    Returns:
        是否可通过局域幺正修正变为同一个态
    """
    if len(branches) != len(corrections):
        raise ArgumentError(
            f"分支数 {len(branches)} 与修正数 {len(corrections)} 不一致"
        )
    corrected = []
    for branch, correction in zip(branches, corrections):
        state = branch.state if isinstance(branch, GlueOutcome) else branch
        if isinstance(correction, str):
            correction = parse_correction(correction, state.local_dim)
        corrected.append(apply_corrections(state, correction))

    for i in range(len(corrected)):
        for j in range(i + 1, len(corrected)):
            if corrected[i].shape != corrected[j].shape:
                return False
            if not equal_up_to_phase(corrected[i], corrected[j], tol):
                return False
    return True


class AnalysisCheck(Enum):
    """分析项"""
    K_UNIFORMITY = "k-uniformity"
    PURITY = "purity"
    ALL = "all"


@dataclass
class AnalysisReport:
    """
    分析报告

    Attributes:
        k_max: 最大均匀度（未检查时为 None）
        pi_me: 平均纯度（未检查时为 None）
        failures: 第 k_max+1 层上未达到最大混合的子集
    """
    k_max: Optional[int] = None
    pi_me: Optional[float] = None
    failures: List[SubsetFailure] = field(default_factory=list)


def analyze(
    state: PureState,
    checks: Union[AnalysisCheck, str] = AnalysisCheck.ALL,
    tol: float = UNIFORMITY_TOL,
    threads: int = 1,
) -> AnalysisReport:
    """
    生成态的分析报告

    Args:
        state: 纯态
        checks: k-uniformity | purity | all
        tol: 均匀性容差
        threads: 并发线程数
    """
    try:
        checks = AnalysisCheck(checks)
    except ValueError:
        raise ArgumentError(f"未知的分析项: {checks}")
    report = AnalysisReport()
    n = state.num_parties

    if checks in (AnalysisCheck.K_UNIFORMITY, AnalysisCheck.ALL):
        report.k_max = max_uniformity(state, tol, threads)
        if report.k_max < n // 2:
            failing = uniformity_report(state, report.k_max + 1, tol, threads)
            report.failures = failing.failures

    if checks in (AnalysisCheck.PURITY, AnalysisCheck.ALL) and n >= 2:
        report.pi_me = average_purity(state, threads)

    logger.info(
        f"分析完成: n={n}, d={state.local_dim}, k_max={report.k_max}, "
        f"pi_me={report.pi_me}"
    )
    return report
