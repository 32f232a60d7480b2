"""
qglue 命令行入口 - build / glue / chain / analyze / list

退出码：0 成功，2 参数或校验错误，3 强制测量结果的概率为零。
"""

import functools
import logging
import sys
from pathlib import Path
from typing import List, Optional

import click

from .core import __version__
from .core.analysis import analyze
from .core.builders import builder_shape, list_builders, parse_builder
from .core.codec import (
    chain_to_dict,
    outcome_to_dict,
    read_state,
    report_to_dict,
    state_to_dict,
    write_json,
)
from .core.config_manager import ConfigManager, QGlueConfig, effective_threads, ensure_size
from .core.entangling_gates import list_gates, resolve_gate
from .core.exceptions import ArgumentError, QGlueError
from .core.gluing import GlueVariant, run_glue
from .core.recursion_chain import ChainPolicy, run_chain
from .core.state_core import PureState

logger = logging.getLogger("qglue")

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def setup_logging(level: str = "INFO", log_file: Optional[str] = None):
    """设置日志配置，日志统一写到标准错误，标准输出只留给结果"""
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file, encoding="utf-8"))
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.INFO),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )


def handle_errors(func):
    """把 QGlueError 映射为进程退出码"""
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except QGlueError as e:
            logger.error(f"{func.__name__} 失败: {e}")
            click.secho(f"错误: {e}", fg="red", err=True)
            sys.exit(e.exit_code)
    return wrapper


def load_state(
    source: str,
    config: QGlueConfig,
    allow_large: bool = False,
    extra_parties: int = 0,
) -> PureState:
    """
    读取或构造输入态，并检查振幅个数上限

    Args:
        source: JSON 文件路径、"-"（标准输入）或构造描述串
        config: 运行配置
        allow_large: 允许超过上限
        extra_parties: 计入规模检查的额外粒子数（胶合时为另一侧的粒子数）
    """
    if source == "-" or Path(source).is_file():
        state = read_state(source)
        d, n = state.local_dim, state.num_parties
    else:
        # 构造描述串先检查规模再分配
        d, n = builder_shape(source)
        state = None
    ensure_size(d, n + extra_parties, config.max_amplitudes, allow_large)
    return state if state is not None else parse_builder(source)


def parse_outcomes(text: Optional[str]) -> Optional[List[int]]:
    """'0,1' -> [0, 1]"""
    if text is None:
        return None
    try:
        return [int(token) for token in text.split(",")]
    except ValueError:
        raise ArgumentError(f"测量结果格式错误: {text!r}，应为逗号分隔的整数")


def default_gate(config: QGlueConfig, d: int) -> str:
    """内置门只适用于 qubit，d > 2 时缺省使用广义 Bell 门"""
    return config.default_gate if d == 2 else "bell"


def parse_gate_names(values: List[str]) -> List[str]:
    names = []
    for value in values:
        names.extend(token.strip() for token in value.split(",") if token.strip())
    return names


@click.group()
@click.version_option(__version__, prog_name="qglue")
@click.option("-v", "--verbose", is_flag=True, help="输出调试日志")
@click.option("--log-file", type=click.Path(dir_okay=False), help="同时写入日志文件")
@click.option("--config", "config_path", type=click.Path(), help="qglue.yaml 或其所在目录")
@click.pass_context
def cli(ctx: click.Context, verbose: bool, log_file: Optional[str], config_path: Optional[str]):
    """通过纠缠门胶合多体纠缠态"""
    paths = [config_path] if config_path else ["./configs"]
    config = ConfigManager(paths).load()
    setup_logging("DEBUG" if verbose else config.log_level, log_file)
    ctx.obj = config


@cli.command()
@click.option("--state", "spec", required=True, help="构造描述串，如 ghz:4、bell:phi+、m4")
@click.option("-o", "--output", default="-", show_default=True, help="输出 JSON 路径")
@click.option("--allow-large", is_flag=True, help="允许超过振幅个数上限的态")
@click.pass_obj
@handle_errors
def build(config: QGlueConfig, spec: str, output: str, allow_large: bool):
    """构造标准态并写出 JSON"""
    d, n = builder_shape(spec)
    ensure_size(d, n, config.max_amplitudes, allow_large)
    state = parse_builder(spec)
    write_json(output, state_to_dict(state))
    logger.info(f"构造完成: {spec} (d={state.local_dim}, n={state.num_parties})")


@cli.command()
@click.argument("state_a")
@click.argument("state_b")
@click.option("-x", "x", type=int, default=0, show_default=True, help="STATE_A 中的胶合位点")
@click.option("-y", "y", type=int, default=0, show_default=True, help="STATE_B 中的胶合位点")
@click.option("--gate", default=None, help="胶合门：V1–V4 或 bell（缺省取配置）")
@click.option(
    "--variant",
    type=click.Choice([v.value for v in GlueVariant]),
    default=GlueVariant.NONE.value,
    show_default=True,
    help="none: ⋄，star: ⋄⋆，starstar: ⋄⋆⋆",
)
@click.option("--outcome", default=None, help="强制测量结果，如 0 或 0,1")
@click.option("--seed", type=int, default=None, help="抽样种子（缺省取配置）")
@click.option("-o", "--output", default="-", show_default=True, help="输出 JSON 路径")
@click.option("--allow-large", is_flag=True, help="允许超过振幅个数上限的态")
@click.pass_obj
@handle_errors
def glue(
    config: QGlueConfig,
    state_a: str,
    state_b: str,
    x: int,
    y: int,
    gate: Optional[str],
    variant: str,
    outcome: Optional[str],
    seed: Optional[int],
    output: str,
    allow_large: bool,
):
    """
    胶合两个态

    STATE_A / STATE_B 可以是 JSON 文件、"-" 或构造描述串。
    """
    phi = load_state(state_a, config, allow_large)
    psi = load_state(state_b, config, allow_large, extra_parties=phi.num_parties)
    glue_gate = resolve_gate(gate or default_gate(config, phi.local_dim), phi.local_dim)
    result = run_glue(
        phi, x, psi, y, glue_gate, GlueVariant(variant),
        outcomes=parse_outcomes(outcome),
        seed=config.seed if seed is None else seed,
    )
    write_json(output, outcome_to_dict(result))
    # 结果写到标准输出时概率改写到标准错误
    click.echo(f"probability: {result.probability!r}", err=(output == "-"))


@cli.command()
@click.option("--gate", "gates", multiple=True, help="每一步的胶合门，可重复或用逗号分隔")
@click.option("--steps", type=int, default=None, help="步数；只给一个门时重复该门")
@click.option(
    "--outcome-policy",
    type=click.Choice([p.value for p in ChainPolicy]),
    default=ChainPolicy.ZERO.value,
    show_default=True,
)
@click.option("--dim", "d", type=int, default=2, show_default=True, help="局部维数")
@click.option("--seed", type=int, default=None, help="抽样种子（缺省取配置）")
@click.option("-o", "--output", default="-", show_default=True, help="输出 JSON 路径")
@click.option("--allow-large", is_flag=True, help="允许超过振幅个数上限的态")
@click.pass_obj
@handle_errors
def chain(
    config: QGlueConfig,
    gates: List[str],
    steps: Optional[int],
    outcome_policy: str,
    d: int,
    seed: Optional[int],
    output: str,
    allow_large: bool,
):
    """从最大纠缠对出发沿线性几何逐个胶合最大纠缠对"""
    names = parse_gate_names(gates) or [default_gate(config, d)]
    if steps is None:
        steps = len(names)
    if steps < 1:
        raise ArgumentError(f"步数必须 >= 1: {steps}")
    if len(names) == 1:
        names = names * steps
    elif len(names) != steps:
        raise ArgumentError(f"给出了 {len(names)} 个门，但步数为 {steps}")

    policy = ChainPolicy(outcome_policy)
    # 抽样策略逐步胶合，测量前的中间态比结果多一个粒子
    peak_parties = steps + 3 if policy is ChainPolicy.SAMPLE else steps + 2
    ensure_size(d, peak_parties, config.max_amplitudes, allow_large)
    result = run_chain(
        [resolve_gate(name, d) for name in names],
        policy=policy,
        seed=config.seed if seed is None else seed,
    )
    write_json(output, chain_to_dict(result))
    click.echo(f"probability: {result.probability!r}", err=(output == "-"))


@cli.command("analyze")
@click.argument("state")
@click.option(
    "--check",
    "checks",
    type=click.Choice(["k-uniformity", "purity", "all"]),
    default="all",
    show_default=True,
)
@click.option("--tol", type=float, default=None, help="均匀性容差（缺省取配置）")
@click.option("--threads", type=int, default=None, help="并发线程数（受 QGLUE_THREADS 限制）")
@click.option("-o", "--output", default="-", show_default=True, help="输出 JSON 路径")
@click.option("--allow-large", is_flag=True, help="允许超过振幅个数上限的态")
@click.pass_obj
@handle_errors
def analyze_command(
    config: QGlueConfig,
    state: str,
    checks: str,
    tol: Optional[float],
    threads: Optional[int],
    output: str,
    allow_large: bool,
):
    """
    输出态的 k-均匀性与平均纯度报告

    STATE 可以是 JSON 文件、"-" 或构造描述串。
    """
    report = analyze(
        load_state(state, config, allow_large),
        checks,
        tol=config.uniformity_tol if tol is None else tol,
        threads=effective_threads(config, threads),
    )
    write_json(output, report_to_dict(report))


@cli.command("list")
def list_command():
    """列出可用的构造器与胶合门"""
    click.secho("构造器:", bold=True)
    for info in list_builders():
        click.echo(f"  {info['usage']:<24} {info['description']}")
    click.secho("胶合门:", bold=True)
    for info in list_gates():
        click.echo(f"  {info['name']:<24} {info['kind']:<18} {info['description']}")


if __name__ == "__main__":
    cli()
