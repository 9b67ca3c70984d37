"""
* @className : SpectralAnalyzer
* @description : 유한 전이핵의 L² 연산자 노름, 수렴률, 최대상관 계산 모듈
*                u = √π, A = diag(u)·P·diag(u)⁻¹ 로 L²₀(π) 위의 연산자를 유클리드 공간으로
*                옮긴 뒤, 평균 방향 u uᵀ를 제거한 행렬의 특이값/고유값을 조밀 분해로 구합니다.
*
*                 수렴률 계산 방식:
*                - DG : ‖PX‖ (marginal-chain)
*                - DC : ‖PXM‖ (marginal-chain)
*                - RG, RC, RCMM : 곱공간 가역 전이핵의 노름 (slem-reversible)
*                - DCMM : 스펙트럼 반경 (spectral-radius, 유한 상태에서만 의미)
*
"""
import logging
from typing import List, Optional, Tuple

import numpy as np
from scipy import linalg

from app.config.settings import settings
from app.core.exceptions import DomainError, EigenSolverFailure, NonPositiveJoint, TopSingularValueNotOne, ZeroMarginal, ZeroStationaryMass
from app.models.distribution import FiniteJointDistribution, ProposalFamily
from app.models.kernel import TransitionKernel
from app.models.report import RateMethod, SamplerKind, SpectralReport
from app.services.kernels import KernelBuilder

logger = logging.getLogger(__name__)


def _mean_zero_operator(P: np.ndarray, stationary: np.ndarray) -> np.ndarray:
    """L²₀(π) 위의 P를 나타내는 행렬 A − u uᵀ"""
    if np.any(stationary <= 0):
        raise ZeroStationaryMass("stationary distribution has a zero-mass state; restrict the support first")
    u = np.sqrt(stationary)
    A = u[:, None] * P / u[None, :]
    return A - np.outer(u, u)


def _clip_rate(value: float) -> float:
    return float(min(max(value, 0.0), 1.0))


def _operator_norm(P: np.ndarray, stationary: np.ndarray) -> float:
    if P.shape[0] > settings.dense_state_limit:
        logger.warning("상태 수 %d가 조밀 분해 한도 %d를 초과합니다", P.shape[0], settings.dense_state_limit)
    try:
        singular_values = linalg.svdvals(_mean_zero_operator(P, stationary))
    except (linalg.LinAlgError, ValueError) as e:
        raise EigenSolverFailure(f"SVD did not converge: {e}") from e
    return _clip_rate(singular_values[0]) if len(singular_values) else 0.0


def _require(kind: SamplerKind, q1: Optional[ProposalFamily], q2: Optional[ProposalFamily], r: Optional[float]) -> None:
    needs_q2 = kind in (SamplerKind.DC, SamplerKind.RC, SamplerKind.DCMM, SamplerKind.RCMM)
    needs_q1 = kind in (SamplerKind.DCMM, SamplerKind.RCMM)
    needs_r = kind in (SamplerKind.RG, SamplerKind.RC, SamplerKind.RCMM)
    if needs_q2 and q2 is None:
        raise DomainError(f"{kind.value} needs an X-proposal q2")
    if needs_q1 and q1 is None:
        raise DomainError(f"{kind.value} needs a Y-proposal q1")
    if needs_r and r is None:
        raise DomainError(f"{kind.value} needs a selection probability r")


class SpectralAnalyzer:
    """
    L²(π) 스펙트럼 분석 서비스
    """

    def __init__(self, kernels: KernelBuilder):
        self.kernels = kernels  # 샘플러 전이핵 생성기

    def l0_operator_norm(self, kernel: TransitionKernel) -> float:
        """
        평균 0 제곱적분 함수 공간에서의 연산자 노름 ‖P‖_π.

        @throws ZeroStationaryMass - 정상분포에 0 질량 상태가 있는 경우
        """
        return _operator_norm(kernel.P, kernel.stationary)

    def l0_spectral_radius(self, kernel: TransitionKernel) -> float:
        """
        A − u uᵀ 의 고유값 최대 절댓값. 가역 전이핵에서는 연산자 노름과 일치한다.

        @throws EigenSolverFailure - 고유값 분해 실패 또는 비유한 결과
        """
        M = _mean_zero_operator(kernel.P, kernel.stationary)
        try:
            if kernel.reversible:
                # 가역이면 M은 대칭이다
                eigenvalues = linalg.eigvalsh((M + M.T) / 2.0)
            else:
                eigenvalues = linalg.eigvals(M)
        except (linalg.LinAlgError, ValueError) as e:
            raise EigenSolverFailure(f"eigensolver did not converge for {kernel.name}: {e}") from e
        if not np.all(np.isfinite(eigenvalues)):
            raise EigenSolverFailure(f"eigensolver returned non-finite values for {kernel.name}")
        return _clip_rate(np.max(np.abs(eigenvalues)))

    def mean_zero_spectrum(self, kernel: TransitionKernel) -> np.ndarray:
        """가역 전이핵의 평균 0 공간 고유값 (오름차순, 평균 방향의 0 하나 포함)"""
        M = _mean_zero_operator(kernel.P, kernel.stationary)
        return linalg.eigvalsh((M + M.T) / 2.0)

    def dominant_weight(self, kernel: TransitionKernel, deviation: np.ndarray) -> Optional[float]:
        """
        편차 μ − π 의 χ² 노름 중 절댓값 최대 고유공간에 놓인 비율.
        비가역 전이핵은 직교 고유분해가 없으므로 None.
        """
        if not kernel.reversible:
            return None
        M = _mean_zero_operator(kernel.P, kernel.stationary)
        eigenvalues, vectors = linalg.eigh((M + M.T) / 2.0)
        v = np.asarray(deviation, dtype=float) / np.sqrt(kernel.stationary)
        total = np.linalg.norm(v)
        if total == 0.0:
            return 0.0
        top = np.abs(eigenvalues) >= np.max(np.abs(eigenvalues)) - settings.equality_tolerance
        return float(np.linalg.norm(vectors[:, top].T @ v) / total)

    def norm_power_sequence(self, kernel: TransitionKernel, n_max: int) -> List[Tuple[int, float]]:
        """
        명시적 거듭제곱에 대한 (n, ‖Pⁿ‖_π), n = 1..n_max.
        """
        if n_max < 1:
            raise DomainError(f"n_max must be >= 1, got {n_max}")
        sequence = []
        power = np.eye(kernel.n_states)
        for n in range(1, n_max + 1):
            power = power @ kernel.P
            sequence.append((n, _operator_norm(power, kernel.stationary)))
        return sequence

    def maximal_correlation(self, joint: FiniteJointDistribution, restrict_support: bool = False) -> float:
        """
        X와 Y의 최대상관 γ̄ = B[x][y] = p[x][y]/√(pX(x)·pY(y)) 의 두 번째 특이값.

        @throws ZeroMarginal, TopSingularValueNotOne
        """
        if restrict_support:
            joint = joint.restricted()[0]
        p_x, p_y = joint.marginal_x, joint.marginal_y
        if np.any(p_x <= 0) or np.any(p_y <= 0):
            raise ZeroMarginal("maximal correlation needs strictly positive marginals")

        B = joint.p / np.sqrt(np.outer(p_x, p_y))
        try:
            singular_values = linalg.svdvals(B)
        except (linalg.LinAlgError, ValueError) as e:
            raise EigenSolverFailure(f"SVD did not converge: {e}") from e
        if abs(singular_values[0] - 1.0) > settings.equality_tolerance:
            raise TopSingularValueNotOne(f"top singular value {singular_values[0]!r} differs from 1")
        return _clip_rate(singular_values[1]) if len(singular_values) > 1 else 0.0

    def build_kernel(
        self,
        kind: SamplerKind,
        joint: FiniteJointDistribution,
        q1: Optional[ProposalFamily] = None,
        q2: Optional[ProposalFamily] = None,
        r: Optional[float] = None,
        restrict_support: bool = False,
    ) -> TransitionKernel:
        """샘플러 종류에 해당하는 곱공간 전이핵"""
        kind = SamplerKind(kind)
        _require(kind, q1, q2, r)
        builders = {
            SamplerKind.DG: lambda: self.kernels.dg_kernel(joint, restrict_support),
            SamplerKind.RG: lambda: self.kernels.rg_kernel(joint, r, restrict_support),
            SamplerKind.DC: lambda: self.kernels.dc_kernel(joint, q2, restrict_support),
            SamplerKind.RC: lambda: self.kernels.rc_kernel(joint, q2, r, restrict_support),
            SamplerKind.DCMM: lambda: self.kernels.dcmm_kernel(joint, q1, q2, restrict_support),
            SamplerKind.RCMM: lambda: self.kernels.rcmm_kernel(joint, q1, q2, r, restrict_support),
        }
        kernel = builders[kind]()
        return kernel.restrict() if restrict_support else kernel

    def convergence_rate(
        self,
        kind: SamplerKind,
        joint: FiniteJointDistribution,
        q1: Optional[ProposalFamily] = None,
        q2: Optional[ProposalFamily] = None,
        r: Optional[float] = None,
        restrict_support: bool = False,
        n_powers: Optional[int] = None,
    ) -> SpectralReport:
        """
        샘플러의 L² 수렴률을 계산한다.

        @param kind: DG, RG, DC, RC, DCMM, RCMM
        @param restrict_support: True이면 질량 0 상태를 제거한 뒤 계산
        @param n_powers: norm_powers에 기록할 거듭제곱 개수 (기본 settings.norm_power_terms, 0이면 생략)
        @return SpectralReport
        @throws NonPositiveJoint - 0인 원소가 있고 restrict_support=False인 경우
        """
        kind = SamplerKind(kind)
        if not restrict_support and not joint.is_strictly_positive:
            raise NonPositiveJoint("joint has zero entries; pass restrict_support=True to drop zero-mass states")

        product = self.build_kernel(kind, joint, q1, q2, r, restrict_support)
        finite_state_only = False
        if kind == SamplerKind.DG:
            marginal = self.kernels.marginal_x(joint, restrict_support)
            rate, method = self.l0_operator_norm(marginal.restrict() if restrict_support else marginal), RateMethod.MARGINAL_CHAIN
        elif kind == SamplerKind.DC:
            marginal = self.kernels.marginal_xm(joint, q2, restrict_support)
            rate, method = self.l0_operator_norm(marginal.restrict() if restrict_support else marginal), RateMethod.MARGINAL_CHAIN
        elif kind == SamplerKind.DCMM:
            rate, method = self.l0_spectral_radius(product), RateMethod.SPECTRAL_RADIUS
            finite_state_only = True
        else:
            rate, method = self.l0_operator_norm(product), RateMethod.SLEM_REVERSIBLE

        terms = settings.norm_power_terms if n_powers is None else n_powers
        logger.debug("%s 수렴률 %.12g (%s)", kind.value, rate, method.value)
        return SpectralReport(
            kind=kind,
            rate=rate,
            method=method,
            norm_powers=self.norm_power_sequence(product, terms) if terms > 0 else [],
            maximal_correlation=self.maximal_correlation(joint, restrict_support),
            finite_state_only=finite_state_only,
        )
