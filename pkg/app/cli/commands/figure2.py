# app/cli/commands/figure2.py
"""
* @className : Figure2Command
* @description : 랜덤 결합분포 코퍼스에서 (r, ρD, 계산된 ρR, 관계식 ρR) 표를 만드는 명령
*                행은 (인스턴스, r) 순서이며 병렬 실행 여부와 무관합니다.
*                그림은 그리지 않고 CSV만 만듭니다.
*
"""
from pathlib import Path
from typing import List, Optional

import pandas as pd
import typer

from app.cli.common import cli_errors, err_console, run_config, write_csv
from app.config.settings import settings
from app.core.dependencies import get_distribution_service, get_spectral_analyzer, get_theory_verifier
from app.core.exceptions import DomainError
from app.core.parallel import run_ordered
from app.models.distribution import FiniteJointDistribution
from app.models.report import SamplerKind

COLUMNS = ["r", "rho_d", "rho_r_computed", "rho_r_formula"]


def figure2_rows(joint: FiniteJointDistribution, r_values: List[float]) -> List[List[float]]:
    """인스턴스 하나의 r별 행"""
    spectral, theory = get_spectral_analyzer(), get_theory_verifier()
    rho_d = spectral.convergence_rate(SamplerKind.DG, joint, n_powers=0).rate
    return [
        [r, rho_d, spectral.convergence_rate(SamplerKind.RG, joint, r=r, n_powers=0).rate, theory.theorem1_rhs(rho_d, r)]
        for r in r_values
    ]


def figure2_frame(joints: List[FiniteJointDistribution], r_values: List[float], threads: Optional[int] = None) -> pd.DataFrame:
    batches = run_ordered(lambda joint: figure2_rows(joint, r_values), joints, threads)
    return pd.DataFrame([row for batch in batches for row in batch], columns=COLUMNS)


def figure2(
    count: int = typer.Option(20, "--count", help="결합분포 수"),
    nx: int = typer.Option(5, "--nx"),
    ny: int = typer.Option(5, "--ny"),
    r: str = typer.Option("0.25,0.5,0.75", "--r", help="쉼표로 구분된 선택확률 목록"),
    seed: int = typer.Option(0, "--seed"),
    joint_path: Optional[Path] = typer.Option(None, "--joint", help="코퍼스 대신 사용할 결합분포 JSON"),
    out: Path = typer.Option(Path("figure2.csv"), "--out", help="출력 CSV 경로"),
) -> None:
    """ρD에 대한 계산된 ρR과 관계식 값을 CSV로 저장한다."""
    with cli_errors():
        config = run_config("figure2", r, seed=seed, output_path=str(out),
                            input_path=str(joint_path) if joint_path else None)
        if joint_path is not None:
            joints = [get_distribution_service().load_joint(joint_path)]
        else:
            if count < 1:
                raise DomainError("--count must be at least 1")
            joints = get_distribution_service().gen_dirichlet_corpus(count, nx, ny, seed)

        frame = figure2_frame(joints, config.r_values)
        typer.echo(str(write_csv(frame, out)))
        worst = float((frame["rho_r_computed"] - frame["rho_r_formula"]).abs().max())

    if worst >= settings.theorem_tolerance:
        err_console.print(f"[red]computed and formula rates differ by {worst:.3e}[/red]")
        raise typer.Exit(code=1)
