# app/cli/commands/gauss.py
"""
* @className : GaussCommand
* @description : 이변량 정규분포 DG 샘플러 실험 명령
*                γ마다 X 경로의 lag-1 자기상관을 추정해 이론값 γ²와 함께 출력합니다.
*
"""
from pathlib import Path
from typing import Optional

import typer
from rich.table import Table

from app.cli.common import cli_errors, console, parse_floats, run_config
from app.core.dependencies import get_distribution_service, get_simulation_service


def gauss(
    gamma: str = typer.Option("0.5,0.9", "--gamma", help="쉼표로 구분된 상관계수 목록, |γ| < 1"),
    r: float = typer.Option(0.5, "--r", help="이론 ρR 계산용 선택확률"),
    n_steps: int = typer.Option(1_000_000, "--n-steps", help="반복 횟수 (≥ 10⁴)"),
    seed: int = typer.Option(0, "--seed"),
    out: Optional[Path] = typer.Option(None, "--out", help="결과 JSON 경로"),
) -> None:
    """정규 실험 결과를 표로 출력하고 JSON으로 저장한다."""
    with cli_errors():
        run_config("gauss", str(r), seed=seed, n_grid=[n_steps], output_path=str(out) if out else None)
        results = get_simulation_service().gaussian_experiments(parse_floats(gamma, "--gamma"), r, n_steps, seed)

        table = Table(title="bivariate Gaussian DG experiment")
        for column in ("gamma", "lag1_autocorr_x", "theory_rho_d", "theory_rho_r"):
            table.add_column(column, justify="right")
        for result in results:
            table.add_row(f"{result.gamma:g}", f"{result.lag1_autocorr_x:.5f}",
                          f"{result.theory_rho_d:.5f}", f"{result.theory_rho_r:.5f}")
        console.print(table)

        if out is not None:
            typer.echo(str(get_distribution_service().write_json([result.model_dump() for result in results], out)))
