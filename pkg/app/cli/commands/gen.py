# app/cli/commands/gen.py
"""
* @className : GenCommand
* @description : 랜덤 Dirichlet 결합분포 생성 명령
*                같은 인자와 시드로 실행하면 항상 동일한 JSON 파일을 씁니다.
*
"""
from pathlib import Path
from typing import Optional

import typer

from app.cli.common import cli_errors, run_config
from app.core.dependencies import get_distribution_service


def gen(
    nx: int = typer.Argument(..., help="X 상태 수 (≥ 2)"),
    ny: int = typer.Argument(..., help="Y 상태 수 (≥ 2)"),
    seed: int = typer.Option(0, "--seed", help="난수 시드"),
    concentration: Optional[float] = typer.Option(None, "--concentration", help="공통 Dirichlet 농도 (기본: U[0.5, 2] 무작위)"),
    out: Optional[Path] = typer.Option(None, "--out", help="출력 JSON 경로"),
) -> None:
    """Dirichlet 결합 pmf를 생성해 JSON으로 저장한다."""
    with cli_errors():
        target = out or Path(f"joint_{nx}x{ny}_seed{seed}.json")
        run_config("gen", output_path=str(target), seed=seed)
        distributions = get_distribution_service()
        joint = distributions.gen_dirichlet_joint(nx, ny, concentration, seed)
        typer.echo(str(distributions.save_joint(joint, target)))
