# app/models/report.py
"""
* @className : ReportModels
* @description : 분석 결과 및 검증 보고서 모델 모듈
*                스펙트럼 분석 결과, 조건 상수, 정리 검증 결과, 감쇠 추적,
*                가우시안 실험 결과, CLI 실행 설정을 정의합니다.
*                모든 모델은 JSON으로 직렬화됩니다.
*
"""
from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, field_validator

from app.core.exceptions import DomainError


class SamplerKind(str, Enum):
    """성분별 샘플러 종류"""
    DG = "DG"      # deterministic-scan Gibbs
    RG = "RG"      # random-scan Gibbs
    DC = "DC"      # deterministic-scan CMH (X만 MH)
    RC = "RC"      # random-scan CMH
    DCMM = "DCMM"  # 두 성분 모두 MH, deterministic scan
    RCMM = "RCMM"  # 두 성분 모두 MH, random scan


class RateMethod(str, Enum):
    SLEM_REVERSIBLE = "slem-reversible"
    MARGINAL_CHAIN = "marginal-chain"
    SPECTRAL_RADIUS = "spectral-radius"


class SpectralReport(BaseModel):
    """L² 수렴률 계산 결과"""
    kind: SamplerKind
    rate: float = Field(..., ge=0.0, le=1.0, description="L² 수렴률 ρ(P)")
    method: RateMethod
    norm_powers: List[Tuple[int, float]] = Field(default=[], description="(n, ‖Pⁿ‖_π)")
    maximal_correlation: Optional[float] = Field(None, ge=0.0, le=1.0)
    finite_state_only: bool = Field(False, description="유한 상태에서만 성립하는 값 여부 (DCMM)")


class ConditionConstant(BaseModel):
    """Condition C / C1의 상한 상수"""
    value: float = Field(..., description="유한이면 ≥ 1, 무한이면 inf")
    infinite: bool = False
    argmax: Tuple[int, int, int] = Field(..., description="상한을 달성하는 (제안 상태, 현재 상태, 조건 상태)")

    @property
    def finite(self) -> bool:
        return not self.infinite


class VerificationReport(BaseModel):
    """주장별 검증 결과"""
    claim: str
    inputs: str = ""
    computed: Dict[str, Optional[float]] = Field(default={})
    passed: bool = Field(..., alias="pass")
    tolerance: float = 0.0
    details: str = ""
    skipped: bool = False

    class Config:
        populate_by_name = True


class DecayTrace(BaseModel):
    """정확한 분포 반복으로 얻은 χ² / TV 거리 시퀀스"""
    initial: str
    n: List[int]
    chi_square: List[float]
    tv: List[float]
    window: Tuple[int, int]
    fitted_rate: Optional[float] = Field(None, ge=0.0, le=1.0)
    fitted_constant: Optional[float] = None
    tv_fitted_rate: Optional[float] = Field(None, ge=0.0, le=1.0)
    dominant_weight: Optional[float] = None
    degenerate_start: bool = False


class GaussianExperimentResult(BaseModel):
    """이변량 정규분포 DG 샘플러 실험 결과"""
    gamma: float = Field(..., gt=-1.0, lt=1.0)
    r: float
    n_steps: int
    seed: int
    lag1_autocorr_x: float = Field(..., ge=-1.0, le=1.0)
    theory_rho_d: float
    theory_rho_r: float


class ProposalChoice(str, Enum):
    EXACT = "exact"
    INDEPENDENCE = "independence"
    SWAP = "swap"
    FILE = "file"


class RunConfig(BaseModel):
    """CLI 실행 설정"""
    command: str
    input_path: Optional[str] = None
    output_path: Optional[str] = None
    seed: int = 0
    r_values: List[float] = Field(default=[0.5])
    n_grid: List[int] = Field(default=[])
    tolerance: Optional[float] = None
    proposal: ProposalChoice = ProposalChoice.INDEPENDENCE
    proposal_path: Optional[str] = None

    @field_validator("r_values")
    @classmethod
    def _r_in_open_unit(cls, values: List[float]) -> List[float]:
        if not values:
            raise ValueError("at least one r value is required")
        for r in values:
            if not 0.0 < r < 1.0:
                raise ValueError(f"r={r} is outside (0,1)")
        return values

    @field_validator("input_path", "output_path", "proposal_path")
    @classmethod
    def _non_empty(cls, value: Optional[str]) -> Optional[str]:
        if value is not None and not value.strip():
            raise ValueError("path must be non-empty")
        return value

    @classmethod
    def parse_proposal(cls, flag: str) -> Tuple[ProposalChoice, Optional[str]]:
        """--proposal 값 (exact | independence | swap | file:PATH) 해석"""
        if flag.startswith("file:"):
            return ProposalChoice.FILE, flag[len("file:"):]
        try:
            return ProposalChoice(flag), None
        except ValueError as e:
            raise DomainError(f"unknown proposal {flag!r}; use exact, independence, swap or file:PATH") from e
