# app/cli/commands/verify.py
"""
* @className : VerifyCommand
* @description : 이론 검증 묶음 실행 명령
*                결합분포 파일, 랜덤 코퍼스, 또는 주기적 반례에 대해 모든 검증을 실행하고
*                주장별 통과/실패/생략 표를 출력합니다.
*
*                 종료 코드:
*                - 0 : 모든 검증 통과 (생략 포함)
*                - 1 : 하나 이상 실패
*                - 2 : 입력 오류
*
"""
from collections import Counter
from pathlib import Path
from typing import List, Optional

import typer
from rich.table import Table

from app.cli.common import cli_errors, console, proposal_factory, run_config
from app.core.dependencies import get_distribution_service, get_theory_verifier
from app.core.exceptions import DomainError, NonPositiveJoint
from app.models.report import ProposalChoice, VerificationReport


def _summary_table(reports: List[VerificationReport]) -> Table:
    table = Table(title="verification summary")
    table.add_column("claim")
    table.add_column("pass", justify="right", style="green")
    table.add_column("fail", justify="right", style="red")
    table.add_column("skipped", justify="right", style="yellow")

    passed, failed, skipped = Counter(), Counter(), Counter()
    claims = []
    for report in reports:
        if report.claim not in claims:
            claims.append(report.claim)
        if report.skipped:
            skipped[report.claim] += 1
        elif report.passed:
            passed[report.claim] += 1
        else:
            failed[report.claim] += 1
    for claim in claims:
        table.add_row(claim, str(passed[claim]), str(failed[claim]), str(skipped[claim]))
    return table


def verify(
    joint_path: Optional[Path] = typer.Argument(None, help="결합분포 JSON (코퍼스/반례 대신)"),
    corpus: Optional[int] = typer.Option(None, "--corpus", help="생성할 랜덤 결합분포 수"),
    nx: int = typer.Option(5, "--nx", help="코퍼스 X 상태 수"),
    ny: int = typer.Option(5, "--ny", help="코퍼스 Y 상태 수"),
    seed: int = typer.Option(0, "--seed", help="코퍼스 시드"),
    r: str = typer.Option("0.5", "--r", help="쉼표로 구분된 선택확률 목록"),
    tol: Optional[float] = typer.Option(None, "--tol", help="수렴률 관계식 허용오차"),
    proposal: str = typer.Option("independence", "--proposal", help="exact | independence | swap | file:PATH[,PATH]"),
    counterexample: bool = typer.Option(False, "--counterexample", help="균등분포 + 교환 제안분포 반례를 검증"),
    dashed: bool = typer.Option(True, "--dashed/--no-dashed", help="조건부(점선) 화살표도 확인"),
    out: Optional[Path] = typer.Option(None, "--out", help="전체 보고서 JSON 경로"),
) -> None:
    """이론 검증 묶음을 실행하고 실패가 있으면 종료 코드 1을 돌려준다."""
    with cli_errors():
        distributions, theory = get_distribution_service(), get_theory_verifier()
        if counterexample:
            proposal = ProposalChoice.SWAP.value
        config = run_config(
            "verify", r, proposal, seed=seed, tolerance=tol,
            input_path=str(joint_path) if joint_path else None, output_path=str(out) if out else None,
        )

        if counterexample:
            joints = [theory.build_counterexample()[0]]
        elif joint_path is not None:
            joints = [distributions.load_joint(joint_path)]
        elif corpus is not None:
            if corpus < 1:
                raise DomainError("--corpus must be at least 1")
            joints = distributions.gen_dirichlet_corpus(corpus, nx, ny, seed)
        else:
            raise DomainError("give a joint file, --corpus N or --counterexample")
        for joint in joints:
            if not joint.is_strictly_positive:
                raise NonPositiveJoint("the verification suite needs a strictly positive joint")

        reports = theory.run_suite(
            joints, config.r_values, proposal_factory(config), seed=seed, tol=tol, assert_dashed=dashed
        )

        console.print(_summary_table(reports))
        failures = [report for report in reports if not report.passed]
        for report in failures[:20]:
            console.print(f"[red]FAIL[/red] {report.claim} ({report.inputs}) {report.details}")
        skips = [report for report in reports if report.skipped or "skipped" in report.details]
        for report in skips[:20]:
            console.print(f"[yellow]SKIP[/yellow] {report.claim} ({report.inputs}) {report.details}")
        if out is not None:
            distributions.write_json([report.model_dump(by_alias=True) for report in reports], out)

    if failures:
        raise typer.Exit(code=1)
