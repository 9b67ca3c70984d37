# app/cli/cli.py
"""
* @className : CLI Router
* @description : CLI 라우터 모듈
*                모든 명령을 하나의 Typer 애플리케이션에 등록하고
*                공통 옵션(로깅 수준)을 콜백에서 처리합니다.
*
"""
import typer

from app.cli.commands import analyze, figure2, gauss, gen, verify
from app.cli.common import configure_logging

cli_app = typer.Typer(
    name="gibbs-spectra",
    help="Exact L² convergence rates of two-component Gibbs and conditional Metropolis-Hastings samplers on finite state spaces.",
    no_args_is_help=True,
    add_completion=False,
)


@cli_app.callback()
def main(
    verbose: int = typer.Option(0, "--verbose", "-v", count=True, help="-v: INFO, -vv: DEBUG"),
) -> None:
    """로깅을 설정한다."""
    configure_logging(verbose)


# 인스턴스 생성
cli_app.command("gen")(gen.gen)

# 수렴률 분석
cli_app.command("analyze")(analyze.analyze)

# 이론 검증 묶음
cli_app.command("verify")(verify.verify)

# ρD 대 ρR 표
cli_app.command("figure2")(figure2.figure2)

# 이변량 정규 실험
cli_app.command("gauss")(gauss.gauss)
