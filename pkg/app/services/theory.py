"""
* @className : TheoryVerifier
* @description : 정리, 부등식, 조건, minorization, 정성적 함의 그래프의 수치 검증 모듈
*                유한 상태 인스턴스에서 정확히 계산한 수렴률로 각 주장을 확인하고
*                VerificationReport로 결과를 돌려줍니다.
*
*                 검증 항목:
*                - Gibbs 수렴률 관계식 ρR = (1 + √(1 − 4r(1−r)(1−ρD)))/2
*                - 하한 부등식과 Young 부등식, k* ≥ 1/[r(1−r)]
*                - 거듭제곱 노름 항등식, 최대상관 = √ρD
*                - Condition C / C1 상수와 minorization 부등식
*                - 기하 에르고딕성 함의 그래프 (실선 / 조건부 점선 화살표)
*                - 선택확률에 대한 분류 불변성
*
"""
import logging
import math
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from app.config.settings import settings
from app.core.exceptions import (
    AxisMismatch,
    DegenerateRate,
    DimensionMismatch,
    DomainError,
    InfiniteConditionConstant,
    NumericalError,
)
from app.core.parallel import run_ordered
from app.models.distribution import Axis, FiniteJointDistribution, ProposalFamily
from app.models.report import ConditionConstant, SamplerKind, SpectralReport, VerificationReport
from app.services.distributions import DistributionService
from app.services.kernels import KernelBuilder
from app.services.spectral import SpectralAnalyzer

logger = logging.getLogger(__name__)

ProposalFactory = Callable[[FiniteJointDistribution], Tuple[Optional[ProposalFamily], Optional[ProposalFamily]]]

# 실선 화살표: 출발 샘플러가 L² 기하 에르고딕이면 도착 샘플러도 그렇다
SOLID_ARROWS: List[Tuple[SamplerKind, SamplerKind]] = [
    (SamplerKind.DG, SamplerKind.RG),
    (SamplerKind.RG, SamplerKind.DG),
    (SamplerKind.RC, SamplerKind.DG),
    (SamplerKind.RC, SamplerKind.RG),
    (SamplerKind.DC, SamplerKind.RC),
    (SamplerKind.DC, SamplerKind.DG),
    (SamplerKind.DC, SamplerKind.RG),
    (SamplerKind.RCMM, SamplerKind.DG),
    (SamplerKind.RCMM, SamplerKind.RG),
]

# 점선 화살표: 게이트 조건 상수가 유한할 때만 성립. DCMM에서 나가는 화살표는 없다.
DASHED_ARROWS: List[Tuple[SamplerKind, SamplerKind, Tuple[str, ...]]] = [
    (SamplerKind.DG, SamplerKind.DC, ("C",)),
    (SamplerKind.DG, SamplerKind.RC, ("C",)),
    (SamplerKind.RG, SamplerKind.RC, ("C",)),
    (SamplerKind.RG, SamplerKind.DC, ("C",)),
    (SamplerKind.RC, SamplerKind.DC, ("C",)),
    (SamplerKind.DC, SamplerKind.DCMM, ("C1",)),
    (SamplerKind.RC, SamplerKind.RCMM, ("C1",)),
    (SamplerKind.DC, SamplerKind.RCMM, ("C1",)),
    (SamplerKind.DG, SamplerKind.DCMM, ("C", "C1")),
    (SamplerKind.DG, SamplerKind.RCMM, ("C", "C1")),
    (SamplerKind.RG, SamplerKind.DCMM, ("C", "C1")),
    (SamplerKind.RG, SamplerKind.RCMM, ("C", "C1")),
    (SamplerKind.RCMM, SamplerKind.DCMM, ("C", "C1")),
]


def _report(claim: str, inputs: str, computed: Dict[str, Optional[float]], passed: bool,
            tolerance: float, details: str = "", skipped: bool = False) -> VerificationReport:
    report = VerificationReport(
        claim=claim, inputs=inputs, computed=computed, passed=bool(passed),
        tolerance=tolerance, details=details, skipped=skipped,
    )
    if not report.passed:
        logger.warning("검증 실패: %s (%s) %s", claim, inputs, details)
    return report


def _describe(joint: FiniteJointDistribution, r: Optional[float] = None) -> str:
    text = f"{joint.nx}x{joint.ny} joint"
    return text if r is None else f"{text}, r={r:g}"


def _min_slack(lower: np.ndarray, bound: np.ndarray, constant: float) -> float:
    return float(np.min(lower - bound / constant))


def _guard(claim: str, inputs: str, check: Callable[[], VerificationReport]) -> VerificationReport:
    """
    수치 실패를 실패 보고서로, 무한 조건 상수를 생략 보고서로 바꾼다.
    입력 오류는 그대로 전파되어 CLI에서 종료 코드 2가 된다.
    """
    try:
        return check()
    except InfiniteConditionConstant as e:
        return _report(claim, inputs, {}, True, 0.0, f"skipped: {e}", skipped=True)
    except NumericalError as e:
        return _report(claim, inputs, {}, False, 0.0, str(e))


class TheoryVerifier:
    """
    이론적 주장의 수치 검증 서비스
    """

    solid_arrows = SOLID_ARROWS
    dashed_arrows = DASHED_ARROWS

    def __init__(self, kernels: KernelBuilder, spectral: SpectralAnalyzer, distributions: DistributionService):
        self.kernels = kernels
        self.spectral = spectral
        self.distributions = distributions  # 반례 생성용

    def _rate(self, kind: SamplerKind, joint: FiniteJointDistribution, restrict_support: bool = False, **kwargs) -> float:
        return self.spectral.convergence_rate(kind, joint, restrict_support=restrict_support, n_powers=0, **kwargs).rate

    # === 정량적 관계 ===
    @staticmethod
    def theorem1_rhs(rho_d: float, r: float) -> float:
        """
        DG 수렴률로부터 RG 수렴률을 계산한다: (1 + √(1 − 4r(1−r)[1−ρD]))/2.

        @throws DomainError - ρD ∉ [0,1] 또는 r ∉ (0,1)
        """
        if not 0.0 <= rho_d <= 1.0:
            raise DomainError(f"rho_d={rho_d} must lie in [0,1]")
        if not 0.0 < r < 1.0:
            raise DomainError(f"r={r} must lie in (0,1)")
        discriminant = 1.0 - 4.0 * r * (1.0 - r) * (1.0 - rho_d)
        return (1.0 + math.sqrt(max(discriminant, 0.0))) / 2.0  # 반올림으로 음수가 된 판별식은 0

    def optimal_selection_probability(self, rho_d: float) -> Tuple[float, float]:
        """RG 수렴률을 최소화하는 선택확률 r = 1/2와 그때의 수렴률 (1 + √ρD)/2"""
        return 0.5, self.theorem1_rhs(rho_d, 0.5)

    def verify_theorem1(self, joint: FiniteJointDistribution, r: float, tol: Optional[float] = None,
                        restrict_support: bool = False) -> VerificationReport:
        tol = settings.theorem_tolerance if tol is None else tol
        rho_d = self._rate(SamplerKind.DG, joint, restrict_support)
        rho_r = self._rate(SamplerKind.RG, joint, restrict_support, r=r)
        formula = self.theorem1_rhs(rho_d, r)
        error = abs(rho_r - formula)
        return _report(
            "theorem1", _describe(joint, r),
            {"rho_d": rho_d, "rho_r": rho_r, "rho_r_formula": formula, "abs_error": error},
            error < tol, tol,
        )

    def lemma4_and_young_bounds(self, joint: FiniteJointDistribution, r: float,
                                restrict_support: bool = False) -> VerificationReport:
        """ρR의 두 하한, Young 부등식 사슬, k* ≥ 1/[r(1−r)] 확인"""
        slack = settings.inequality_slack
        gamma = self.spectral.maximal_correlation(joint, restrict_support)
        rho_d = self._rate(SamplerKind.DG, joint, restrict_support)
        rho_r = self._rate(SamplerKind.RG, joint, restrict_support, r=r)
        g2 = gamma ** 2

        bound_x = 1.0 - r + r * g2  # x만의 함수
        bound_y = r + (1.0 - r) * g2  # y만의 함수
        young_mid = max(1.0 - 4.0 * r * (1.0 - r) * (1.0 - rho_d), 0.0) ** 0.25
        young = rho_d ** (r * (1.0 - r))
        checks = {
            "lemma4_x": rho_r - bound_x,
            "lemma4_y": rho_r - bound_y,
            "young_mid": rho_r - young_mid,
            "young": rho_r - young,
        }
        passed = all(value >= -slack for value in checks.values())

        computed: Dict[str, Optional[float]] = {
            "rho_d": rho_d, "rho_r": rho_r, "gamma_sq": g2,
            "bound_x": bound_x, "bound_y": bound_y, "young_mid": young_mid, "young": young,
        }
        k_floor = 1.0 / (r * (1.0 - r))
        computed["k_star_floor"] = k_floor
        details = ""
        eq_tol = settings.equality_tolerance
        if eq_tol < rho_d < 1.0 - eq_tol and eq_tol < rho_r < 1.0 - eq_tol:
            k_star = math.log(rho_d) / math.log(rho_r)
            computed["k_star"] = k_star
            passed = passed and k_star >= k_floor - 1e-9
        else:
            computed["k_star"] = None
            details = f"{DegenerateRate.code}: k* undefined at rho_d in {{0,1}}"
        if not passed:
            failed = ", ".join(f"{k}={v:.3e}" for k, v in checks.items() if v < -slack)
            details = (details + "; " if details else "") + failed
        return _report("lemma4_young", _describe(joint, r), computed, passed, slack, details)

    def verify_strict_gap(self, joint: FiniteJointDistribution, r: float,
                          restrict_support: bool = False) -> VerificationReport:
        """ρR ∈ [max{r,1−r}, 1], 그리고 ρD ∈ (0,1)이면 ρR > ρD"""
        slack = settings.inequality_slack
        rho_d = self._rate(SamplerKind.DG, joint, restrict_support)
        rho_r = self._rate(SamplerKind.RG, joint, restrict_support, r=r)
        floor = max(r, 1.0 - r)
        passed = floor - slack <= rho_r <= 1.0 + slack
        if 0.0 < rho_d < 1.0:
            passed = passed and rho_r - rho_d > 0.0
        return _report("strict_gap", _describe(joint, r), {"rho_d": rho_d, "rho_r": rho_r, "floor": floor}, passed, slack)

    def verify_compute_time(self, joint: FiniteJointDistribution, r: float, t1: float, t2: float,
                            restrict_support: bool = False) -> VerificationReport:
        """
        단위 시간당 반복 횟수 k_D = 1/(t1+t2), k_R = 1/(r t1 + (1−r) t2)에서
        ρD^{k_D} ≤ ρR^{k_R} 이고 k_R/k_D ≤ 1/min{r,1−r}.
        """
        if t1 <= 0 or t2 <= 0:
            raise DomainError("sampling times must be positive")
        slack = settings.inequality_slack
        rho_d = self._rate(SamplerKind.DG, joint, restrict_support)
        rho_r = self._rate(SamplerKind.RG, joint, restrict_support, r=r)
        k_d = 1.0 / (t1 + t2)
        k_r = 1.0 / (r * t1 + (1.0 - r) * t2)
        lhs, rhs = rho_d ** k_d, rho_r ** k_r
        speedup = k_r / k_d
        passed = lhs <= rhs + slack and speedup <= 1.0 / min(r, 1.0 - r) + slack
        return _report(
            "compute_time", f"{_describe(joint, r)}, t1={t1:g}, t2={t2:g}",
            {"rho_d_per_time": lhs, "rho_r_per_time": rhs, "k_d": k_d, "k_r": k_r}, passed, slack,
        )

    # === 노름 항등식 ===
    def verify_lemma3(self, joint: FiniteJointDistribution, q2: Optional[ProposalFamily] = None,
                      n_max: Optional[int] = None) -> VerificationReport:
        """
        ‖PDⁿ‖^{1/(n−1/2)}가 n에 대해 일정하며 ρD = ‖PX‖ = ‖PY‖,
        q2가 주어지면 ‖PDMⁿ‖^{1/(n−1)} ≤ ‖PXM‖ ≤ ‖PDMⁿ‖^{1/n}.
        """
        n_max = settings.norm_power_terms if n_max is None else n_max
        eq_tol, rel_tol = settings.equality_tolerance, settings.relative_tolerance

        norm_px = self.spectral.l0_operator_norm(self.kernels.marginal_x(joint))
        norm_py = self.spectral.l0_operator_norm(self.kernels.marginal_y(joint))
        powers = self.spectral.norm_power_sequence(self.kernels.dg_kernel(joint), n_max)
        # 반올림 잡음에 묻히는 작은 노름은 비교에서 제외
        roots = [value ** (1.0 / (n - 0.5)) for n, value in powers if value > 1e-8]

        computed: Dict[str, Optional[float]] = {"norm_px": norm_px, "norm_py": norm_py}
        passed = abs(norm_px - norm_py) < eq_tol
        if roots:
            spread = (max(roots) - min(roots)) / max(roots)
            computed["pd_root_spread"] = spread
            computed["pd_root"] = roots[0]
            passed = passed and spread < rel_tol and abs(roots[0] - norm_px) < rel_tol * max(norm_px, 1.0)
        else:
            # ρD = 0이면 모든 거듭제곱 노름이 0이다
            passed = passed and norm_px < eq_tol

        if q2 is not None:
            rho_dc = self.spectral.l0_operator_norm(self.kernels.marginal_xm(joint, q2))
            computed["rho_dc"] = rho_dc
            for n, value in self.spectral.norm_power_sequence(self.kernels.dc_kernel(joint, q2), n_max):
                if n < 2:
                    continue
                lower, upper = value ** (1.0 / (n - 1)), value ** (1.0 / n)
                computed[f"dc_lower_{n}"], computed[f"dc_upper_{n}"] = lower, upper
                passed = passed and lower <= rho_dc + eq_tol and rho_dc <= upper + eq_tol
        return _report("lemma3", _describe(joint), computed, passed, rel_tol)

    def verify_maximal_correlation(self, joint: FiniteJointDistribution) -> VerificationReport:
        """γ̄² = ρD (SVD 대 주변 체인 고유값)"""
        tol = settings.equality_tolerance
        gamma = self.spectral.maximal_correlation(joint)
        rho_d = self.spectral.l0_operator_norm(self.kernels.marginal_x(joint))
        error = abs(gamma ** 2 - rho_d)
        computed = {"gamma": gamma, "rho_d": rho_d, "abs_error": error}
        return _report("maximal_correlation", _describe(joint), computed, error < tol, tol)

    def verify_nonnegative_definite(self, joint: FiniteJointDistribution, r: float) -> VerificationReport:
        """PX, PY, PR의 평균 0 공간 최소 고유값 ≥ −1e−10"""
        tol = settings.equality_tolerance
        kernels = (self.kernels.marginal_x(joint), self.kernels.marginal_y(joint), self.kernels.rg_kernel(joint, r))
        computed = {f"min_eig_{kernel.name}": float(self.spectral.mean_zero_spectrum(kernel).min()) for kernel in kernels}
        passed = all(value >= -tol for value in computed.values())
        return _report("nonnegative_definite", _describe(joint, r), computed, passed, tol)

    # === 조건 상수와 minorization ===
    def _condition_constant(self, joint: FiniteJointDistribution, proposal: ProposalFamily) -> ConditionConstant:
        target = self.kernels.conditionals(joint).target(proposal.axis)
        q = proposal.q
        if q.shape != target.shape:
            raise DimensionMismatch(f"proposal shape {q.shape} does not match target {target.shape}")

        def witness(index: Tuple[int, int, int]) -> Tuple[int, int, int]:
            # (제안 상태, 현재 상태, 조건 상태)
            x, y, new = (int(i) for i in index)
            return (new, x, y) if proposal.axis == Axis.X else (new, y, x)

        unbounded = (target > 0) & (q <= 0)
        if np.any(unbounded):
            return ConditionConstant(value=math.inf, infinite=True, argmax=witness(np.argwhere(unbounded)[0]))

        ratio = np.zeros_like(q)
        support = target > 0
        ratio[support] = target[support] / q[support]
        index = np.unravel_index(np.argmax(ratio), ratio.shape)
        return ConditionConstant(value=float(ratio[index]), infinite=False, argmax=witness(index))

    def condition_c(self, joint: FiniteJointDistribution, q2: ProposalFamily) -> ConditionConstant:
        """C = sup π_{X|Y}(x'|y) / q(x'|x,y)"""
        if q2.axis != Axis.X:
            raise AxisMismatch("condition C is defined for an X-proposal")
        return self._condition_constant(joint, q2)

    def condition_c1(self, joint: FiniteJointDistribution, q1: ProposalFamily) -> ConditionConstant:
        """C1 = sup π_{Y|X}(y'|x) / q1(y'|x,y)"""
        if q1.axis != Axis.Y:
            raise AxisMismatch("condition C1 is defined for a Y-proposal")
        return self._condition_constant(joint, q1)

    def verify_minorizations(self, joint: FiniteJointDistribution, q2: ProposalFamily, r: float,
                             q1: Optional[ProposalFamily] = None) -> VerificationReport:
        """
        Condition C / C1에서 유도되는 성분별 하한 부등식을 원소별로 확인한다.

        @throws InfiniteConditionConstant - C (또는 q1이 주어졌을 때 C1)가 무한인 경우
        """
        slack = settings.inequality_slack
        c = self.condition_c(joint, q2)
        if c.infinite:
            raise InfiniteConditionConstant(f"condition C fails at {c.argmax}")

        family = self.kernels.conditionals(joint)
        Q = self.kernels.mh_step(family, q2, axis=Axis.X).Q
        prm = self.kernels.rc_kernel(joint, q2, r)
        computed: Dict[str, Optional[float]] = {
            "C": c.value,
            "Q_vs_conditional": _min_slack(Q, family.target(Axis.X), c.value),
            "PXM_vs_PX": _min_slack(self.kernels.marginal_xm(joint, q2).P, self.kernels.marginal_x(joint).P, c.value),
            "PRM_vs_PR": _min_slack(prm.P, self.kernels.rg_kernel(joint, r).P, c.value),
        }

        if q1 is not None:
            c1 = self.condition_c1(joint, q1)
            if c1.infinite:
                raise InfiniteConditionConstant(f"condition C1 fails at {c1.argmax}")
            P1 = self.kernels.mh_step(family, q1, axis=Axis.Y).Q
            computed["C1"] = c1.value
            computed["P1_vs_conditional"] = _min_slack(P1, family.target(Axis.Y), c1.value)
            computed["PRMM_vs_PRM"] = _min_slack(self.kernels.rcmm_kernel(joint, q1, q2, r).P, prm.P, c1.value)
            computed["PDMM_vs_PDM"] = _min_slack(
                self.kernels.dcmm_kernel(joint, q1, q2).P, self.kernels.dc_kernel(joint, q2).P, c1.value
            )

        passed = all(value >= -slack for key, value in computed.items() if key not in ("C", "C1"))
        return _report("minorizations", _describe(joint, r), computed, passed, slack)

    # === 반례와 정성적 관계 ===
    def build_counterexample(self) -> Tuple[FiniteJointDistribution, ProposalFamily]:
        """X = Y = {0,1} 위의 균등분포와 항상 다른 x를 제안하는 교환 제안분포"""
        joint = self.distributions.validate_joint(np.full((2, 2), 0.25))
        return joint, self.distributions.gen_swap_proposal(2, 2, Axis.X)

    def sampler_reports(self, joint: FiniteJointDistribution, r: float, q1: Optional[ProposalFamily] = None,
                        q2: Optional[ProposalFamily] = None, restrict_support: bool = False,
                        n_powers: Optional[int] = 0) -> Dict[SamplerKind, SpectralReport]:
        """
        주어진 제안분포로 계산 가능한 모든 샘플러의 SpectralReport.

        @param n_powers: 보고서마다 기록할 거듭제곱 노름 개수 (None이면 settings.norm_power_terms)
        """
        kinds = [SamplerKind.DG, SamplerKind.RG]
        if q2 is not None:
            kinds += [SamplerKind.DC, SamplerKind.RC]
            if q1 is not None:
                kinds += [SamplerKind.DCMM, SamplerKind.RCMM]
        return {
            kind: self.spectral.convergence_rate(kind, joint, q1=q1, q2=q2, r=r,
                                                 restrict_support=restrict_support, n_powers=n_powers)
            for kind in kinds
        }

    def sampler_rates(self, joint: FiniteJointDistribution, r: float, q1: Optional[ProposalFamily] = None,
                      q2: Optional[ProposalFamily] = None, restrict_support: bool = False) -> Dict[SamplerKind, float]:
        """주어진 제안분포로 계산 가능한 모든 샘플러의 수렴률"""
        reports = self.sampler_reports(joint, r, q1, q2, restrict_support)
        return {kind: report.rate for kind, report in reports.items()}

    def qualitative_audit(self, joint: FiniteJointDistribution, r: float, q1: Optional[ProposalFamily] = None,
                          q2: Optional[ProposalFamily] = None, geo_threshold: Optional[float] = None,
                          assert_dashed: bool = True, restrict_support: bool = False) -> VerificationReport:
        """
        모든 수렴률을 계산해 기하 에르고딕 여부를 분류하고 함의 화살표 위반을 찾는다.
        점선 화살표는 게이트 조건 상수가 유한할 때만 확인한다.
        """
        threshold = settings.geo_threshold if geo_threshold is None else geo_threshold
        rates = self.sampler_rates(joint, r, q1, q2, restrict_support)
        geometric = {kind: rate < threshold for kind, rate in rates.items()}
        gates = {
            "C": q2 is not None and self.condition_c(joint, q2).finite,
            "C1": q1 is not None and self.condition_c1(joint, q1).finite,
        }

        violations, skipped = [], []
        checked = 0
        arrows = [(source, target, ()) for source, target in self.solid_arrows]
        if assert_dashed:
            arrows += self.dashed_arrows
        for source, target, gate in arrows:
            if source not in rates or target not in rates:
                continue  # 제안분포가 없어 계산하지 않은 샘플러
            if not all(gates[name] for name in gate):
                skipped.append(f"{source.value}->{target.value}")
                continue
            checked += 1
            if geometric[source] and not geometric[target]:
                violations.append(f"{source.value}->{target.value}")

        computed: Dict[str, Optional[float]] = {f"rho_{kind.value}": rate for kind, rate in rates.items()}
        computed.update({
            "arrows_checked": float(checked),
            "violations": float(len(violations)),
            "arrows_skipped": float(len(skipped)),
        })
        details = "; ".join(filter(None, [
            f"violated: {', '.join(violations)}" if violations else "",
            f"skipped (condition constant infinite): {', '.join(skipped)}" if skipped else "",
        ]))
        return _report("qualitative_audit", _describe(joint, r), computed, not violations, 1.0 - threshold, details)

    @staticmethod
    def selection_mixture_bound(r: float, r0: float) -> float:
        """P_r ≥ δ·P_{r0} 를 만족하는 혼합 상수 δ = min{r/r0, (1−r)/(1−r0)}"""
        if not (0.0 < r < 1.0 and 0.0 < r0 < 1.0):
            raise DomainError(f"selection probabilities must lie in (0,1), got {r}, {r0}")
        return min(r / r0, (1.0 - r) / (1.0 - r0))

    def selection_robustness(self, joint: FiniteJointDistribution, r_list: Sequence[float],
                             q2: Optional[ProposalFamily] = None, geo_threshold: Optional[float] = None,
                             restrict_support: bool = False) -> VerificationReport:
        """
        RG (및 q2가 주어지면 RC)의 기하 에르고딕 분류가 r에 대해 일정한지 확인하고,
        혼합 전이핵의 minorization P_r ≥ min{r/r0, (1−r)/(1−r0)} P_{r0}도 원소별로 확인한다.
        """
        if not r_list:
            raise DomainError("r_list must be non-empty")
        threshold = settings.geo_threshold if geo_threshold is None else geo_threshold
        slack = settings.inequality_slack
        kinds = [SamplerKind.RG] + ([SamplerKind.RC] if q2 is not None else [])
        r0 = r_list[0]  # 기준 선택확률

        computed: Dict[str, Optional[float]] = {}
        passed = True
        for kind in kinds:
            base = self.spectral.build_kernel(kind, joint, q2=q2, r=r0, restrict_support=restrict_support)
            classes = set()
            for r in r_list:
                kernel = self.spectral.build_kernel(kind, joint, q2=q2, r=r, restrict_support=restrict_support)
                rate = self.spectral.l0_operator_norm(kernel)
                computed[f"rho_{kind.value}@{r:g}"] = rate
                classes.add(rate < threshold)
                delta = self.selection_mixture_bound(r, r0)
                passed = passed and float(np.min(kernel.P - delta * base.P)) >= -slack
            passed = passed and len(classes) == 1
        return _report("selection_robustness", f"{_describe(joint)}, r in {list(r_list)}", computed, passed, slack)

    # === 전체 검증 묶음 ===
    def instance_suite(self, joint: FiniteJointDistribution, r_list: Sequence[float], proposals: ProposalFactory,
                       seed: int = 0, tol: Optional[float] = None, assert_dashed: bool = True) -> List[VerificationReport]:
        """
        한 결합분포에 대한 모든 검증 결과 (r별 검증 → 인스턴스별 검증 순서)

        @throws InputError - 제안분포가 결합분포와 맞지 않는 경우 등 입력 오류
        """
        q1, q2 = proposals(joint)
        rng = np.random.default_rng(seed)
        inputs = _describe(joint)
        reports: List[VerificationReport] = []
        for r in r_list:
            t1, t2 = rng.uniform(0.1, 10.0, size=2)  # 성분별 1회 갱신 비용
            reports += [
                _guard("theorem1", inputs, lambda: self.verify_theorem1(joint, r, tol)),
                _guard("lemma4_young", inputs, lambda: self.lemma4_and_young_bounds(joint, r)),
                _guard("strict_gap", inputs, lambda: self.verify_strict_gap(joint, r)),
                _guard("compute_time", inputs, lambda: self.verify_compute_time(joint, r, t1, t2)),
                _guard("nonnegative_definite", inputs, lambda: self.verify_nonnegative_definite(joint, r)),
                _guard("qualitative_audit", inputs,
                       lambda: self.qualitative_audit(joint, r, q1, q2, assert_dashed=assert_dashed)),
            ]
        reports += [
            _guard("lemma3", inputs, lambda: self.verify_lemma3(joint, q2)),
            _guard("maximal_correlation", inputs, lambda: self.verify_maximal_correlation(joint)),
            _guard("selection_robustness", inputs, lambda: self.selection_robustness(joint, r_list, q2)),
        ]
        if q2 is not None:
            reports.append(_guard("minorizations", inputs, lambda: self.verify_minorizations(joint, q2, r_list[0], q1)))
        return reports

    def run_suite(self, joints: Sequence[FiniteJointDistribution], r_list: Sequence[float], proposals: ProposalFactory,
                  seed: int = 0, tol: Optional[float] = None, assert_dashed: bool = True,
                  threads: Optional[int] = None) -> List[VerificationReport]:
        """
        결합분포 목록 전체에 검증 묶음을 실행한다. 결과는 인스턴스 순서대로 합쳐진다.
        """
        logger.info("검증 시작: 인스턴스 %d개, r=%s", len(joints), list(r_list))
        batches = run_ordered(
            lambda item: self.instance_suite(item[1], r_list, proposals, seed + item[0], tol, assert_dashed),
            list(enumerate(joints)),
            threads,
        )
        reports = [report for batch in batches for report in batch]
        logger.info("검증 완료: %d건 중 실패 %d건", len(reports), sum(not report.passed for report in reports))
        return reports
