# app/cli/common.py
"""
* @className : CliCommon
* @description : CLI 명령 공통 유틸리티 모듈
*                로깅 설정, 인자 해석, 제안분포 선택, 오류 → 종료 코드 변환,
*                JSON / CSV 결과 파일 저장을 담당합니다.
*
"""
import json
import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Iterator, List, Optional

import pandas as pd
import typer
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler

from app.config.settings import settings
from app.core.exceptions import BadInputFile, DomainError, GibbsSpectraError, IoError
from app.models.distribution import Axis
from app.models.report import ProposalChoice, RunConfig
from app.core.dependencies import get_distribution_service
from app.services.theory import ProposalFactory

console = Console()
err_console = Console(stderr=True)

logger = logging.getLogger(__name__)


def configure_logging(verbose: int = 0) -> None:
    """루트 로거를 RichHandler로 한 번 설정한다 (-v: INFO, -vv: DEBUG)"""
    level = {0: settings.log_level, 1: "INFO"}.get(verbose, "DEBUG")
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=err_console, rich_tracebacks=True, show_path=False)],
        force=True,
    )


@contextmanager
def cli_errors() -> Iterator[None]:
    """
    도메인 예외와 설정 검증 오류를 한 줄 메시지와 종료 코드로 바꾼다.

    @throws typer.Exit - 예외의 exit_code (입력 오류 2, 수치 오류 1)
    """
    try:
        yield
    except GibbsSpectraError as e:
        err_console.print(f"[red]{e}[/red]")
        raise typer.Exit(code=e.exit_code)
    except ValidationError as e:
        first = e.errors()[0]
        err_console.print(f"[red]InputError: {first.get('msg', e)}[/red]")
        raise typer.Exit(code=2)


def parse_floats(text: str, name: str = "--r") -> List[float]:
    """쉼표로 구분된 실수 목록"""
    try:
        values = [float(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise DomainError(f"{name} expects a comma-separated list of numbers, got {text!r}") from e
    if not values:
        raise DomainError(f"{name} must not be empty")
    return values


def run_config(command: str, r_text: Optional[str] = None, proposal: str = "independence", **fields: Any) -> RunConfig:
    """CLI 인자를 RunConfig로 검증한다 (r ∈ (0,1), 경로 비어있지 않음)"""
    r_values = parse_floats(r_text) if r_text else [settings.default_r]
    choice, path = RunConfig.parse_proposal(proposal)
    return RunConfig(command=command, r_values=r_values, proposal=choice, proposal_path=path, **fields)


def proposal_factory(config: RunConfig) -> ProposalFactory:
    """
    제안분포 선택에 따라 결합분포 → (q1, q2)를 만드는 함수를 돌려준다.
    file:PATH는 쉼표로 여러 파일을 받을 수 있으며 각 파일의 축으로 q1/q2를 배정한다.
    """
    distributions = get_distribution_service()
    if config.proposal == ProposalChoice.FILE:
        loaded = [distributions.load_proposal(part) for part in (config.proposal_path or "").split(",") if part]
        if not loaded:
            raise BadInputFile("file:PATH needs at least one proposal file")
        by_axis = {proposal.axis: proposal for proposal in loaded}
        return lambda joint: (by_axis.get(Axis.Y), by_axis.get(Axis.X))

    builders = {
        ProposalChoice.EXACT: lambda joint, axis: distributions.gen_exact_proposal(joint, axis),
        ProposalChoice.INDEPENDENCE: lambda joint, axis: distributions.gen_independence_proposal(joint, axis),
        ProposalChoice.SWAP: lambda joint, axis: distributions.gen_swap_proposal(joint.nx, joint.ny, axis),
    }
    build = builders[config.proposal]
    return lambda joint: (build(joint, Axis.Y), build(joint, Axis.X))


def emit_json(payload: Any, out: Optional[Path] = None) -> None:
    """결과를 표준출력에 찍고, out이 주어지면 파일로도 저장한다"""
    text = json.dumps(payload, indent=2)
    typer.echo(text)
    if out is not None:
        get_distribution_service().write_json(payload, out)


def write_csv(frame: pd.DataFrame, path: Path) -> Path:
    """17자리 유효숫자 CSV 저장"""
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, float_format=f"%.{settings.output_precision}g", lineterminator="\n")
    except OSError as e:
        raise IoError(f"cannot write {path}: {e}") from e
    logger.info("CSV 저장: %s (%d행)", path, len(frame))
    return path

