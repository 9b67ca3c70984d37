"""
* @className : SimulationService
* @description : 분포 반복, 감쇠율 적합, 체인 표본 추출, 이변량 정규 실험 모듈
*                정확한 행렬 곱으로 μPⁿ을 반복해 χ² / TV 거리를 기록하고
*                지정된 구간에서 로그-선형 최소제곱으로 기하 감쇠율을 추정합니다.
*
*                 표본 추출 규칙:
*                - 유한 체인: 각 행의 누적분포에 대한 역CDF 추출
*                - 정규 난수: 균등 난수의 역CDF 변환 (scipy.special.ndtri)
*
"""
import bisect
import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import special

from app.config.settings import settings
from app.core.exceptions import DimensionMismatch, DomainError, SumNotOne, ZeroDistanceInWindow, ZeroStationaryMass
from app.core.parallel import run_ordered
from app.models.kernel import TransitionKernel
from app.models.report import DecayTrace, GaussianExperimentResult
from app.services.spectral import SpectralAnalyzer
from app.services.theory import TheoryVerifier

logger = logging.getLogger(__name__)


def _start_vector(kernel: TransitionKernel, mu0: Sequence[float]) -> np.ndarray:
    mu = np.asarray(mu0, dtype=float)
    if mu.shape != (kernel.n_states,):
        raise DimensionMismatch(f"start distribution has shape {mu.shape}, kernel has {kernel.n_states} states")
    if abs(mu.sum() - 1.0) > settings.sum_tolerance:
        raise SumNotOne(f"start distribution sums to {mu.sum()!r}")
    return mu


def _fit(distances: Sequence[float], window: Tuple[int, int]) -> Tuple[float, float]:
    n1, n2 = window
    if not 1 <= n1 < n2:
        raise DomainError(f"fit window must satisfy 1 <= n1 < n2, got {window}")
    if n2 >= len(distances):
        raise DomainError(f"fit window {window} exceeds the trace length {len(distances)}")
    values = np.asarray(distances[n1:n2 + 1], dtype=float)
    if np.any(values <= 0):
        raise ZeroDistanceInWindow(f"a distance in window {window} is exactly zero")
    slope, intercept = np.polyfit(np.arange(n1, n2 + 1), np.log(values), 1)
    return float(min(np.exp(slope), 1.0)), float(np.exp(intercept))


class SimulationService:
    """
    분포 반복 / 감쇠 적합 / 표본 추출 서비스
    """

    def __init__(self, spectral: SpectralAnalyzer, theory: TheoryVerifier):
        self.spectral = spectral  # 최대 고유공간 가중치
        self.theory = theory  # 정규 실험의 이론 수렴률

    def point_mass(self, kernel: TransitionKernel, state: int) -> np.ndarray:
        """상태 state에 질량 1을 둔 시작분포"""
        if not 0 <= state < kernel.n_states:
            raise DimensionMismatch(f"state {state} outside 0..{kernel.n_states - 1}")
        mu = np.zeros(kernel.n_states)
        mu[state] = 1.0
        return mu

    def iterate_distribution(self, kernel: TransitionKernel, mu0: Sequence[float], n: int) -> List[np.ndarray]:
        """
        μ0, μ0P, …, μ0Pⁿ 을 반환한다.

        @throws DimensionMismatch - μ0의 길이가 상태 수와 다른 경우
        """
        if n < 0:
            raise DomainError(f"n must be >= 0, got {n}")
        mu = _start_vector(kernel, mu0)
        iterates = [mu]
        for _ in range(n):
            mu = mu @ kernel.P
            iterates.append(mu)
        return iterates

    def chi_square_distance(self, mu: Sequence[float], pi: Sequence[float]) -> float:
        """
        √(Σ π(s)(μ(s)/π(s) − 1)²)

        @throws ZeroStationaryMass - π에 0 질량 상태가 있는 경우
        """
        mu, pi = np.asarray(mu, dtype=float), np.asarray(pi, dtype=float)
        if np.any(pi <= 0):
            raise ZeroStationaryMass("chi-square distance needs a strictly positive reference distribution")
        return float(np.sqrt(np.sum((mu - pi) ** 2 / pi)))

    def tv_distance(self, mu: Sequence[float], pi: Sequence[float]) -> float:
        """전변동 거리 ½ Σ |μ(s) − π(s)|"""
        return float(0.5 * np.abs(np.asarray(mu, dtype=float) - np.asarray(pi, dtype=float)).sum())

    def fit_geometric_rate(self, distances: Sequence[float], window: Optional[Tuple[int, int]] = None) -> float:
        """
        (n, log dₙ) 최소제곱 직선의 기울기를 지수화한 감쇠율. distances[n]은 n번째 거리.

        @throws ZeroDistanceInWindow - 구간 안에서 거리가 정확히 0인 경우
        """
        return _fit(distances, tuple(window or settings.decay_window))[0]

    def decay_trace(
        self,
        kernel: TransitionKernel,
        mu0: Sequence[float],
        n_max: Optional[int] = None,
        window: Optional[Tuple[int, int]] = None,
        initial: str = "",
    ) -> DecayTrace:
        """
        편차 eₙ = μ0Pⁿ − π 를 직접 반복해 χ² / TV 거리와 적합 감쇠율을 기록한다.
        매 단계 e ← e − π·Σe 로 평균 0 공간에 다시 투영하므로 1e−16보다 작은 거리도 정확하다.
        """
        window = tuple(window or settings.decay_window)
        n_max = window[1] if n_max is None else n_max
        pi = kernel.stationary
        if np.any(pi <= 0):
            raise ZeroStationaryMass(f"{kernel.name} has zero-mass states; restrict the kernel first")

        e = _start_vector(kernel, mu0) - pi
        weight = self.spectral.dominant_weight(kernel, e)
        chi_square, tv = [], []
        for _ in range(n_max + 1):
            chi_square.append(float(np.sqrt(np.sum(e ** 2 / pi))))
            tv.append(float(0.5 * np.abs(e).sum()))
            e = e @ kernel.P
            e = e - pi * e.sum()

        fitted_rate = fitted_constant = tv_rate = None
        if n_max >= window[1]:
            try:
                fitted_rate, fitted_constant = _fit(chi_square, window)
            except ZeroDistanceInWindow:
                fitted_rate, fitted_constant = 0.0, 0.0
            try:
                tv_rate = _fit(tv, window)[0]
            except ZeroDistanceInWindow:
                tv_rate = 0.0

        degenerate = weight is not None and weight < settings.dominant_weight_floor
        if degenerate:
            logger.warning("%s: 시작분포의 최대 고유공간 성분 %.3g가 작아 적합 감쇠율이 부차 모드를 반영할 수 있습니다", kernel.name, weight)
        return DecayTrace(
            initial=initial or "custom",
            n=list(range(n_max + 1)),
            chi_square=chi_square,
            tv=tv,
            window=window,
            fitted_rate=fitted_rate,
            fitted_constant=fitted_constant,
            tv_fitted_rate=tv_rate,
            dominant_weight=weight,
            degenerate_start=degenerate,
        )

    def sample_chain(self, kernel: TransitionKernel, s0: int, n: int, seed: int = 0) -> np.ndarray:
        """
        s0에서 시작하는 길이 n+1 경로. 각 단계는 현재 행의 누적분포에 대한 역CDF 추출이다.

        @throws DimensionMismatch - s0가 상태 범위 밖인 경우
        """
        if not 0 <= s0 < kernel.n_states:
            raise DimensionMismatch(f"start state {s0} outside 0..{kernel.n_states - 1}")
        if n < 0:
            raise DomainError(f"n must be >= 0, got {n}")

        cdf = np.cumsum(kernel.P, axis=1).tolist()
        uniforms = np.random.default_rng(seed).random(n).tolist()
        path = [s0]
        s = s0
        for u in uniforms:
            row = cdf[s]
            # 행 합계로 눈금을 맞춰 u·합계 < 합계 이므로 확률 0인 꼬리 상태는 뽑히지 않는다
            s = bisect.bisect_right(row, u * row[-1])
            path.append(s)
        return np.array(path, dtype=int)

    def gaussian_experiment(self, gamma: float, r: float = 0.5, n_steps: int = 1_000_000,
                            seed: int = 0) -> GaussianExperimentResult:
        """
        상관계수 γ인 표준 이변량 정규분포에 대한 DG 샘플러 실험.
        매 단계 두 조건부 추출 yₙ₊₁ ~ N(γxₙ, 1−γ²), xₙ₊₁ ~ N(γyₙ₊₁, 1−γ²)를 차례로 수행하고
        X 경로의 lag-1 자기상관을 잰다. 시작값은 정상분포 N(0,1)에서 뽑는다.

        @throws DomainError - |γ| ≥ 1, r ∉ (0,1), n_steps < 10⁴
        """
        if not -1.0 < gamma < 1.0:
            raise DomainError(f"gamma={gamma} must lie in (-1,1)")
        if not 0.0 < r < 1.0:
            raise DomainError(f"r={r} must lie in (0,1)")
        if n_steps < 10_000:
            raise DomainError(f"n_steps={n_steps} must be at least 10^4")

        rng = np.random.default_rng(seed)
        # 열린 구간 (0,1)의 균등 난수만 역CDF에 넣는다
        uniforms = rng.uniform(np.nextafter(0.0, 1.0), 1.0, size=2 * n_steps + 1)
        normals = special.ndtri(uniforms)
        x = float(normals[0])
        z_y = normals[1:n_steps + 1].tolist()  # Y 갱신 잡음
        z_x = normals[n_steps + 1:].tolist()  # X 갱신 잡음

        s = float(np.sqrt(1.0 - gamma * gamma))  # 조건부 표준편차
        path = np.empty(n_steps + 1)
        path[0] = x
        for n, (e_y, e_x) in enumerate(zip(z_y, z_x), start=1):
            y = gamma * x + s * e_y
            x = gamma * y + s * e_x
            path[n] = x
        lag1 = float(np.corrcoef(path[:-1], path[1:])[0, 1])

        g2 = gamma * gamma
        logger.info("정규 실험 γ=%g: lag-1 자기상관 %.5f (이론값 %.5f)", gamma, lag1, g2)
        return GaussianExperimentResult(
            gamma=gamma,
            r=r,
            n_steps=n_steps,
            seed=seed,
            lag1_autocorr_x=min(max(lag1, -1.0), 1.0),
            theory_rho_d=g2,
            theory_rho_r=self.theory.theorem1_rhs(g2, r),
        )

    def gaussian_experiments(self, gammas: Sequence[float], r: float, n_steps: int, seed: int,
                             threads: Optional[int] = None) -> List[GaussianExperimentResult]:
        """γ마다 seed + i 의 독립 시드로 실험을 실행한다 (결과는 입력 순서)"""
        return run_ordered(
            lambda item: self.gaussian_experiment(item[1], r, n_steps, seed + item[0]),
            list(enumerate(gammas)),
            threads,
        )
