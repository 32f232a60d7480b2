"""
运行配置 - 数值容差、并发与默认参数的 YAML 配置解析与验证
"""

import logging
import os
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional

import jsonschema
import yaml
from jsonschema import validate

from .exceptions import ArgumentError

logger = logging.getLogger(__name__)

CONFIG_FILENAME = "qglue.yaml"


@dataclass
class QGlueConfig:
    """运行配置数据类"""
    # 数值容差
    uniformity_tol: float = 1e-9

    # 资源限制
    max_amplitudes: int = 2 ** 20
    threads: int = 1
    thread_cap: Optional[int] = None    # 来自 QGLUE_THREADS

    # 默认参数
    seed: int = 0
    default_gate: str = "V1"
    log_level: str = "INFO"

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


class ConfigSchemaValidator:
    """配置模式验证器"""

    SCHEMA = {
        "$schema": "http://json-schema.org/draft-07/schema#",
        "type": "object",
        "properties": {
            "tolerances": {
                "type": "object",
                "properties": {
                    "uniformity": {"type": "number", "exclusiveMinimum": 0},
                },
                "additionalProperties": False,
            },
            "limits": {
                "type": "object",
                "properties": {
                    "max_amplitudes": {"type": "integer", "minimum": 1},
                    "threads": {"type": "integer", "minimum": 1},
                },
                "additionalProperties": False,
            },
            "defaults": {
                "type": "object",
                "properties": {
                    "seed": {"type": "integer", "minimum": 0},
                    "gate": {"type": "string"},
                    "log_level": {
                        "type": "string",
                        "enum": ["DEBUG", "INFO", "WARNING", "ERROR"],
                    },
                },
                "additionalProperties": False,
            },
        },
    }

    @classmethod
    def validate_config(cls, config: Dict[str, Any]) -> bool:
        """
        验证配置是否符合模式

        Args:
            config: 配置字典

        Returns:
            是否验证通过
        """
        try:
            validate(instance=config, schema=cls.SCHEMA)
            return True
        except jsonschema.exceptions.ValidationError as e:
            logger.error(f"配置验证失败: {e.message}")
            return False


class ConfigManager:
    """
    配置管理器

    负责：
    - 在配置目录中查找 qglue.yaml
    - 配置文件的解析和验证
    - 环境变量覆盖（QGLUE_THREADS、QGLUE_LOG_LEVEL）
    """

    def __init__(self, config_paths: Optional[List[str]] = None):
        """
        初始化配置管理器

        Args:
            config_paths: 配置目录或配置文件路径列表
        """
        self.config_paths = config_paths or ["./configs"]
        self.source: Optional[Path] = None

    def _find_config_file(self) -> Optional[Path]:
        for entry in self.config_paths:
            path = Path(entry)
            candidate = path / CONFIG_FILENAME if path.is_dir() else path
            if candidate.is_file():
                return candidate
        return None

    def load(self) -> QGlueConfig:
        """
        加载配置；文件缺失或无效时使用默认值

        Returns:
            运行配置
        """
        config = QGlueConfig()
        config_file = self._find_config_file()
        if config_file is not None:
            try:
                with open(config_file, "r", encoding="utf-8") as f:
                    config_data = yaml.safe_load(f) or {}
                if ConfigSchemaValidator.validate_config(config_data):
                    config = self._convert_to_config(config_data)
                    self.source = config_file
                    logger.debug(f"加载配置: {config_file}")
            except Exception as e:
                logger.error(f"解析配置文件失败 {config_file}: {e}")
        return self._apply_environment(config)

    def _convert_to_config(self, config_data: Dict[str, Any]) -> QGlueConfig:
        """将配置数据转换为 QGlueConfig 对象"""
        tolerances = config_data.get("tolerances", {})
        limits = config_data.get("limits", {})
        defaults = config_data.get("defaults", {})
        base = QGlueConfig()

        return QGlueConfig(
            uniformity_tol=float(tolerances.get("uniformity", base.uniformity_tol)),
            max_amplitudes=int(limits.get("max_amplitudes", base.max_amplitudes)),
            threads=int(limits.get("threads", base.threads)),
            seed=int(defaults.get("seed", base.seed)),
            default_gate=str(defaults.get("gate", base.default_gate)),
            log_level=str(defaults.get("log_level", base.log_level)),
        )

    def _apply_environment(self, config: QGlueConfig) -> QGlueConfig:
        threads = os.environ.get("QGLUE_THREADS")
        if threads:
            try:
                value = int(threads)
                if value < 1:
                    raise ValueError(threads)
                config.thread_cap = value
            except ValueError:
                logger.warning(f"忽略无效的 QGLUE_THREADS: {threads}")

        level = os.environ.get("QGLUE_LOG_LEVEL")
        if level:
            config.log_level = level.upper()
        return config


def ensure_size(d: int, n: int, limit: int, allow_large: bool = False):
    """
    检查 d^n 是否超出振幅个数上限

    Raises:
        ArgumentError: d^n > limit 且未允许大态
    """
    size = int(d) ** int(n)
    if size > limit and not allow_large:
        raise ArgumentError(
            f"态的振幅个数 {d}^{n} = {size} 超过上限 {limit}，如确需计算请加 --allow-large"
        )


def effective_threads(config: QGlueConfig, requested: Optional[int] = None) -> int:
    """命令行请求的线程数，缺省取配置值，并受 QGLUE_THREADS 限制"""
    threads = requested or config.threads
    if config.thread_cap is not None:
        threads = min(threads, config.thread_cap)
    return max(1, threads)
