"""
* @className : AnalyzeCommand
* @description : 결합분포 하나의 수렴률 분석 명령
*                DG / RG 수렴률과 최대상관, 제안분포가 있으면 DC / RC / DCMM / RCMM 수렴률과
*                Condition C / C1 상수를 JSON으로 출력합니다.
*                조건 상수가 무한이어도 오류로 끝나지 않고 notes에 기록합니다.
*
*                 추가 출력 파일:
*                - --report-out      : 샘플러별 SpectralReport JSON
*                - --norm-powers-out : 대상 샘플러의 (n, norm) CSV
*                - --kernel-out      : 대상 샘플러 전이핵 JSON
*                - --decay-out       : 대상 샘플러의 (n, chi_square, tv) CSV
*
"""
from pathlib import Path
from typing import Any, Dict, Optional

import pandas as pd
import typer

from app.cli.common import cli_errors, emit_json, proposal_factory, run_config, write_csv
from app.core.dependencies import (
    get_distribution_service,
    get_simulation_service,
    get_spectral_analyzer,
    get_theory_verifier,
)
from app.core.exceptions import DomainError
from app.models.report import SamplerKind

RATE_KEYS = {
    SamplerKind.DG: "rho_d",
    SamplerKind.RG: "rho_r",
    SamplerKind.DC: "rho_dc",
    SamplerKind.RC: "rho_rc",
    SamplerKind.DCMM: "rho_dcmm",
    SamplerKind.RCMM: "rho_rcmm",
}


def analyze(
    joint_path: Path = typer.Argument(..., help="결합분포 JSON"),
    r: float = typer.Option(0.5, "--r", help="선택확률 r ∈ (0,1)"),
    proposal: str = typer.Option("independence", "--proposal", help="exact | independence | swap | file:PATH[,PATH]"),
    restrict_support: bool = typer.Option(False, "--restrict-support", help="질량 0 상태를 제거하고 계산"),
    norm_terms: Optional[int] = typer.Option(None, "--norm-terms", help="보고서의 거듭제곱 노름 개수 (기본 설정값)"),
    report_out: Optional[Path] = typer.Option(None, "--report-out", help="샘플러별 SpectralReport JSON 경로"),
    norm_powers_out: Optional[Path] = typer.Option(None, "--norm-powers-out", help="대상 샘플러의 n,norm CSV 경로"),
    kernel_out: Optional[Path] = typer.Option(None, "--kernel-out", help="대상 샘플러 전이핵 JSON 경로"),
    decay_out: Optional[Path] = typer.Option(None, "--decay-out", help="감쇠 추적 CSV 경로"),
    decay_kind: SamplerKind = typer.Option(SamplerKind.RG, "--decay-kind", help="추가 출력 대상 샘플러"),
    decay_start: int = typer.Option(0, "--decay-start", help="점질량 시작 상태 인덱스"),
    decay_steps: int = typer.Option(30, "--decay-steps", help="반복 횟수"),
    out: Optional[Path] = typer.Option(None, "--out", help="결과 JSON 경로"),
) -> None:
    """수렴률, 최대상관, 조건 상수를 계산한다."""
    with cli_errors():
        distributions, spectral = get_distribution_service(), get_spectral_analyzer()
        theory, simulate = get_theory_verifier(), get_simulation_service()
        config = run_config("analyze", str(r), proposal, input_path=str(joint_path),
                            output_path=str(out) if out else None)
        joint = distributions.load_joint(joint_path)
        q1, q2 = proposal_factory(config)(joint)
        r = config.r_values[0]

        reports = theory.sampler_reports(joint, r, q1, q2, restrict_support, n_powers=norm_terms)
        payload: Dict[str, Any] = {key: reports[kind].rate if kind in reports else None for kind, key in RATE_KEYS.items()}
        payload["maximal_correlation"] = spectral.maximal_correlation(joint, restrict_support)

        notes = []
        for key, proposal_family, condition in (("C", q2, theory.condition_c), ("C1", q1, theory.condition_c1)):
            payload[key] = None
            if proposal_family is None:
                continue
            constant = condition(joint, proposal_family)
            if constant.infinite:
                notes.append(f"InfiniteConditionConstant: {key} fails at {constant.argmax}")
            else:
                payload[key] = constant.value
        payload["notes"] = notes

        if report_out is not None:
            distributions.write_json({kind.value: report.model_dump(mode="json") for kind, report in reports.items()},
                                     report_out)

        if norm_powers_out is not None:
            if decay_kind not in reports:
                raise DomainError(f"{decay_kind.value} needs proposals that were not given")
            norm_powers = reports[decay_kind].norm_powers
            write_csv(pd.DataFrame(norm_powers, columns=["n", "norm"]), norm_powers_out)

        if decay_out is not None or kernel_out is not None:
            kernel = spectral.build_kernel(decay_kind, joint, q1, q2, r, restrict_support)
            if kernel_out is not None:
                distributions.write_json(kernel.to_json_dict(), kernel_out)
            if decay_out is not None:
                trace = simulate.decay_trace(
                    kernel, simulate.point_mass(kernel, decay_start), decay_steps, initial=f"delta_{decay_start}"
                )
                write_csv(pd.DataFrame({"n": trace.n, "chi_square": trace.chi_square, "tv": trace.tv}), decay_out)
                payload["decay_fitted_rate"] = trace.fitted_rate

        emit_json(payload, out)
