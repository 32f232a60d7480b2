"""
JSON 编解码 - 态、胶合门、胶合结果、递推矩阵与分析报告的外部格式

复数统一写成 [re, im]；浮点数按 Python 的最短往返 repr 输出，读回后逐位相同。
"""

import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Union

import jsonschema
import numpy as np
from jsonschema import validate

from .analysis import AnalysisReport, UniformityReport
from .entangling_gates import TwoQuditGate
from .exceptions import DegenerateInputError, StateFormatError
from .gluing import GlueOutcome
from .recursion_chain import ChainResult, RecursionMatrix
from .state_core import PureState, from_amplitudes

logger = logging.getLogger(__name__)

_COMPLEX = {
    "type": "array",
    "items": {"type": "number"},
    "minItems": 2,
    "maxItems": 2,
}

_COMPLEX_VECTOR = {"type": "array", "items": _COMPLEX}


class StateSchemaValidator:
    """态文档模式验证器"""

    DOCUMENT = "态"

    SCHEMA = {
        "$schema": "http://json-schema.org/draft-07/schema#",
        "type": "object",
        "required": ["d", "n", "amps"],
        "properties": {
            "d": {"type": "integer", "minimum": 2},
            "n": {"type": "integer", "minimum": 1},
            "amps": _COMPLEX_VECTOR,
        },
    }

    @classmethod
    def validate_document(cls, doc: Dict[str, Any]):
        """
        验证文档，不通过时抛出 StateFormatError

        Args:
            doc: 已解析的 JSON 文档
        """
        try:
            validate(instance=doc, schema=cls.SCHEMA)
        except jsonschema.exceptions.ValidationError as e:
            raise StateFormatError(f"{cls.DOCUMENT}文档格式错误: {e.message}")


class GateSchemaValidator(StateSchemaValidator):
    """胶合门文档模式验证器"""

    DOCUMENT = "胶合门"

    SCHEMA = {
        "$schema": "http://json-schema.org/draft-07/schema#",
        "type": "object",
        "required": ["d", "matrix"],
        "properties": {
            "d": {"type": "integer", "minimum": 2},
            "name": {"type": "string"},
            "matrix": {"type": "array", "items": _COMPLEX_VECTOR},
        },
    }


class OutcomeSchemaValidator(StateSchemaValidator):
    """胶合结果文档模式验证器"""

    DOCUMENT = "胶合结果"

    SCHEMA = {
        "$schema": "http://json-schema.org/draft-07/schema#",
        "type": "object",
        "required": ["state", "measured", "prob"],
        "properties": {
            "state": {"type": "object"},
            "measured": {
                "type": "array",
                "maxItems": 2,
                "items": {
                    "type": "array",
                    "items": [{"type": "string"}, {"type": "integer", "minimum": 0}],
                    "minItems": 2,
                    "maxItems": 2,
                },
            },
            "prob": {"type": "number", "minimum": 0},
        },
    }


def _complex_list(values: np.ndarray) -> List[List[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(values).reshape(-1)]


def _complex_array(pairs: List[List[float]]) -> np.ndarray:
    array = np.asarray(pairs, dtype=float).reshape(-1, 2)
    return array[:, 0] + 1j * array[:, 1]


def state_to_dict(state: PureState) -> Dict[str, Any]:
    return {
        "d": state.local_dim,
        "n": state.num_parties,
        "amps": _complex_list(state.amplitudes),
    }


def state_from_dict(doc: Dict[str, Any]) -> PureState:
    """
    由 {"d", "n", "amps"} 文档构造态并归一化

    Raises:
        StateFormatError: 文档不符合模式、长度不等于 d^n 或振幅全为零
    """
    StateSchemaValidator.validate_document(doc)
    # 模式中的 integer 也接受 2.0 这样的整值浮点数
    d, n, amps = int(doc["d"]), int(doc["n"]), doc["amps"]
    if len(amps) != d ** n:
        raise StateFormatError(f"振幅个数 {len(amps)} 应为 {d}^{n} = {d ** n}")
    try:
        return from_amplitudes(d, n, _complex_array(amps))
    except DegenerateInputError as e:
        raise StateFormatError(str(e))


def gate_to_dict(gate: TwoQuditGate) -> Dict[str, Any]:
    return {
        "d": gate.local_dim,
        "name": gate.name,
        "matrix": [_complex_list(row) for row in gate.matrix],
    }


def gate_from_dict(doc: Dict[str, Any]) -> TwoQuditGate:
    """按行主序读取 d²×d² 矩阵；幺正性由 TwoQuditGate 检查"""
    GateSchemaValidator.validate_document(doc)
    d, rows = int(doc["d"]), doc["matrix"]
    size = d * d
    if len(rows) != size or any(len(row) != size for row in rows):
        raise StateFormatError(f"胶合门矩阵应为 {size}×{size}")
    matrix = np.array([_complex_array(row) for row in rows])
    return TwoQuditGate(d, matrix, name=doc.get("name", "custom"))


def outcome_to_dict(outcome: GlueOutcome) -> Dict[str, Any]:
    return {
        "state": state_to_dict(outcome.state),
        "measured": [[label, int(digit)] for label, digit in outcome.measured],
        "prob": float(outcome.probability),
    }


def outcome_from_dict(doc: Dict[str, Any]) -> GlueOutcome:
    OutcomeSchemaValidator.validate_document(doc)
    return GlueOutcome(
        state=state_from_dict(doc["state"]),
        measured=tuple((label, int(digit)) for label, digit in doc["measured"]),
        probability=float(doc["prob"]),
    )


def chain_to_dict(result: ChainResult) -> Dict[str, Any]:
    """链式胶合结果写成胶合结果格式，测量标签依步数编号"""
    return {
        "state": state_to_dict(result.state),
        "measured": [[f"x{step}", int(o)] for step, o in enumerate(result.outcomes, 1)],
        "prob": float(result.probability),
    }


def recursion_to_dict(matrix: RecursionMatrix) -> Dict[str, Any]:
    d = matrix.local_dim
    return {
        "d": d,
        "p": matrix.block_parties,
        "entries": [[_complex_list(matrix.entry(a, b)) for b in range(d)] for a in range(d)],
    }


def report_to_dict(report: Union[AnalysisReport, UniformityReport]) -> Dict[str, Any]:
    failures = [
        {"subset": list(f.subset), "deviation": float(f.deviation)} for f in report.failures
    ]
    if isinstance(report, UniformityReport):
        return {"k": report.k, "checked": report.checked, "failures": failures}
    return {"k_max": report.k_max, "pi_me": report.pi_me, "failures": failures}


def read_json(path: Union[str, Path]) -> Dict[str, Any]:
    """
    读取 UTF-8 JSON 文件，"-" 表示标准输入

    Raises:
        StateFormatError: 文件无法读取、不是 UTF-8 编码或无法解析为 JSON
    """
    try:
        if str(path) == "-":
            return json.load(sys.stdin)
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise StateFormatError(f"JSON 解析失败 {path}: {e}")
    except UnicodeDecodeError as e:
        raise StateFormatError(f"文件不是 UTF-8 编码 {path}: {e}")
    except OSError as e:
        raise StateFormatError(f"无法读取文件 {path}: {e}")


def write_json(path: Union[str, Path], doc: Dict[str, Any]):
    """写出 JSON 文档，"-" 表示标准输出"""
    text = json.dumps(doc, ensure_ascii=False, indent=2)
    if str(path) == "-":
        sys.stdout.write(text + "\n")
        return
    with open(path, "w", encoding="utf-8") as f:
        f.write(text + "\n")
    logger.info(f"结果已写入: {path}")


def read_state(path: Union[str, Path]) -> PureState:
    return state_from_dict(read_json(path))
