"""
标准态构造器 - Bell、GHZ、W、奇偶叠加态、M4 与环形图态

每个构造器同时注册到 BUILDERS，可通过 "ghz:4"、"bell:phi+" 这类描述串创建。
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Tuple

import numpy as np

from .entangling_gates import BUILTIN_MATRICES
from .exceptions import ArgumentError
from .state_core import PureState, from_amplitudes

logger = logging.getLogger(__name__)

_BELL_AMPLITUDES = {
    "phi+": [1, 0, 0, 1],
    "phi-": [1, 0, 0, -1],
    "psi+": [0, 1, 1, 0],
    "psi-": [0, 1, -1, 0],
}

_BELL_ALIASES = {
    "φ+": "phi+", "φ⁺": "phi+", "φ-": "phi-", "φ⁻": "phi-",
    "ψ+": "psi+", "ψ⁺": "psi+", "ψ-": "psi-", "ψ⁻": "psi-",
}


def bell(which: str = "phi+") -> PureState:
    """
    两 qubit Bell 态

    Args:
        which: phi+ | phi- | psi+ | psi-
    """
    key = _BELL_ALIASES.get(which, str(which).lower())
    if key not in _BELL_AMPLITUDES:
        raise ArgumentError(f"未知的 Bell 态: {which}")
    return from_amplitudes(2, 2, _BELL_AMPLITUDES[key])


def max_entangled_pair(d: int = 2) -> PureState:
    """(1/√d) Σ_k |kk⟩，d=2 时即 φ⁺"""
    amps = np.zeros(d * d)
    amps[[k * d + k for k in range(d)]] = 1.0
    return from_amplitudes(d, 2, amps)


def zero_state(n: int, d: int = 2) -> PureState:
    """全零积态 |0…0⟩"""
    amps = np.zeros(d ** n)
    amps[0] = 1.0
    return PureState(d, n, amps)


def ghz(n: int, d: int = 2) -> PureState:
    """(1/√d) Σ_k |k…k⟩"""
    if n < 2:
        raise ArgumentError(f"GHZ 态至少需要 2 个粒子: {n}")
    amps = np.zeros(d ** n)
    step = sum(d ** p for p in range(n))
    amps[[k * step for k in range(d)]] = 1.0
    return from_amplitudes(d, n, amps)


def w(n: int) -> PureState:
    """n qubit W 态：所有单激发基态的等权叠加"""
    if n < 2:
        raise ArgumentError(f"W 态至少需要 2 个粒子: {n}")
    amps = np.zeros(2 ** n)
    amps[[2 ** p for p in range(n)]] = 1.0
    return from_amplitudes(2, n, amps)


def asymmetric_w3() -> PureState:
    """(1/2)|001⟩ + (1/√2)|010⟩ + (1/2)|100⟩"""
    amps = np.zeros(8)
    amps[0b001] = 0.5
    amps[0b010] = 1 / np.sqrt(2)
    amps[0b100] = 0.5
    return from_amplitudes(2, 3, amps)


def parity_state(n: int, parity: str = "even") -> PureState:
    """
    给定比特和奇偶性的全部 n qubit 基态的等权叠加

    Args:
        n: 粒子数 (>= 1)
        parity: even | odd
    """
    if n < 1:
        raise ArgumentError(f"粒子数必须 >= 1: {n}")
    if parity not in ("even", "odd"):
        raise ArgumentError(f"奇偶性只能是 even 或 odd: {parity}")
    weights = np.array([bin(i).count("1") % 2 for i in range(2 ** n)])
    target = 0 if parity == "even" else 1
    return from_amplitudes(2, n, (weights == target).astype(float))


def m4() -> PureState:
    """
    平均纯度为 1/3 的四 qubit 态，粒子顺序 (a, f, c, e)：
    (1/2)(|00⟩φ⁺ + |01⟩ψ⁺ + |10⟩ψ⁻ + |11⟩φ⁻)
    """
    v1 = BUILTIN_MATRICES["V1"]
    amps = np.zeros(16, dtype=np.complex128)
    for index in range(4):
        label = np.zeros(4)
        label[index] = 1.0
        amps += np.kron(label, v1[:, index]) / 2
    return from_amplitudes(2, 4, amps)


def ring_graph_state(n: int) -> PureState:
    """在 |+⟩^⊗n 上沿环作用受控 Z 得到的图态"""
    if n < 3:
        raise ArgumentError(f"环形图态至少需要 3 个粒子: {n}")
    bits = (np.arange(2 ** n)[:, None] >> np.arange(n - 1, -1, -1)) & 1
    edges = sum(bits[:, i] * bits[:, (i + 1) % n] for i in range(n))
    return from_amplitudes(2, n, (-1.0) ** edges)


def random_state(d: int, n: int, seed: int = 0) -> PureState:
    """复高斯随机向量归一化得到的随机纯态"""
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=d ** n) + 1j * rng.normal(size=d ** n)
    return from_amplitudes(d, n, amps)


@dataclass
class BuilderInfo:
    """构造器元信息"""
    name: str
    usage: str
    description: str
    factory: Callable[..., PureState]
    shape: Callable[..., Tuple[int, int]]    # 由参数得到 (d, n)，构造前用于规模检查


def _int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ArgumentError(f"需要整数参数: {text!r}")


BUILDERS: Dict[str, BuilderInfo] = {
    info.name: info
    for info in [
        BuilderInfo("bell", "bell:phi+|phi-|psi+|psi-", "两 qubit Bell 态",
                    lambda which="phi+": bell(which),
                    lambda which="phi+": (2, 2)),
        BuilderInfo("pair", "pair:d", "qudit 最大纠缠对 (1/√d)Σ|kk⟩",
                    lambda d="2": max_entangled_pair(_int(d)),
                    lambda d="2": (_int(d), 2)),
        BuilderInfo("ghz", "ghz:n[:d]", "GHZ 态",
                    lambda n, d="2": ghz(_int(n), _int(d)),
                    lambda n, d="2": (_int(d), _int(n))),
        BuilderInfo("w", "w:n", "W 态",
                    lambda n: w(_int(n)),
                    lambda n: (2, _int(n))),
        BuilderInfo("asym-w", "asym-w", "非对称三 qubit W 态",
                    lambda: asymmetric_w3(),
                    lambda: (2, 3)),
        BuilderInfo("parity", "parity:n:even|odd", "奇偶等权叠加态",
                    lambda n, parity="even": parity_state(_int(n), parity),
                    lambda n, parity="even": (2, _int(n))),
        BuilderInfo("m4", "m4", "平均纯度 1/3 的四 qubit 态",
                    lambda: m4(),
                    lambda: (2, 4)),
        BuilderInfo("ring", "ring:n", "环形图态",
                    lambda n: ring_graph_state(_int(n)),
                    lambda n: (2, _int(n))),
        BuilderInfo("zero", "zero:n[:d]", "全零积态",
                    lambda n, d="2": zero_state(_int(n), _int(d)),
                    lambda n, d="2": (_int(d), _int(n))),
        BuilderInfo("random", "random:d:n[:seed]", "随机纯态",
                    lambda d, n, seed="0": random_state(_int(d), _int(n), _int(seed)),
                    lambda d, n, seed="0": (_int(d), _int(n))),
    ]
}


def _lookup(spec: str) -> Tuple[BuilderInfo, List[str]]:
    name, *args = str(spec).strip().split(":")
    info = BUILDERS.get(name.lower())
    if info is None:
        raise ArgumentError(f"未知的构造器: {name}，可选 {', '.join(BUILDERS)}")
    return info, args


def builder_shape(spec: str) -> Tuple[int, int]:
    """
    不构造态，仅由描述串得到 (d, n)

    Args:
        spec: 构造描述串
    """
    info, args = _lookup(spec)
    try:
        return info.shape(*args)
    except TypeError:
        raise ArgumentError(f"构造器参数错误: {spec}，用法 {info.usage}")


def parse_builder(spec: str) -> PureState:
    """
    解析构造描述串

    Args:
        spec: 形如 "ghz:4"、"parity:4:even"、"m4" 的描述串

    Returns:
        构造出的态
    """
    info, args = _lookup(spec)
    try:
        state = info.factory(*args)
    except TypeError:
        raise ArgumentError(f"构造器参数错误: {spec}，用法 {info.usage}")
    logger.debug(f"构造态 {spec}: {state}")
    return state


def list_builders() -> List[Dict[str, str]]:
    """列出所有已注册的构造器"""
    return [
        {"name": info.name, "usage": info.usage, "description": info.description}
        for info in BUILDERS.values()
    ]
