"""
* @className : KernelBuilder
* @description : 유한 곱공간 위의 정확한 전이핵 생성 모듈
*                모든 성분별 샘플러와 주변 체인의 전이핵을
*                조밀 행렬로 구성합니다. 곱 상태 인덱스는 s = x·ny + y (행 우선)입니다.
*
*                 생성하는 전이핵:
*                - PD  : deterministic-scan Gibbs (Y 갱신 → X 갱신)
*                - PR  : random-scan Gibbs (확률 r로 X, 1−r로 Y 갱신)
*                - PDM : Y Gibbs 갱신 → X MH 갱신
*                - PRM : X MH 갱신 / Y Gibbs 갱신 혼합
*                - PDMM: Y MH 갱신(q1) → X MH 갱신(q2)
*                - PRMM: 두 MH 갱신의 혼합
*                - PX, PY, PXM: 주변 체인
*
*                 MH 비율 규칙:
*                - 제안확률 0인 이동은 절대 일어나지 않으며 비율도 평가하지 않음
*                - 자기질량 = 1 − (다른 상태로의 수락 질량 합)
*
"""
import logging
from typing import List, Optional, Tuple

import numpy as np
from pydantic import ValidationError

from app.core.exceptions import AxisMismatch, DimensionMismatch, DomainError, ZeroMarginal
from app.models.distribution import Axis, FiniteJointDistribution, ProposalFamily, SelectionProbability
from app.models.kernel import ConditionalFamily, MhStepFamily, TransitionKernel

logger = logging.getLogger(__name__)


def _check_r(r: float) -> float:
    try:
        return SelectionProbability(r=r).r
    except ValidationError as e:
        raise DomainError(f"selection probability r={r} must lie in (0,1)") from e


def _mh_matrix(pi: np.ndarray, proposal: np.ndarray) -> np.ndarray:
    """
    고정된 조건 성분에서의 MH 전이행렬.

    @param pi: 목표 조건부 확률벡터 (m,)
    @param proposal: proposal[cur, new] = q(new | cur, ·)
    @return (m, m) 확률행렬
    """
    numerator = pi[None, :] * proposal.T  # π(new) q(cur | new)
    denominator = pi[:, None] * proposal  # π(cur) q(new | cur)
    proposed = proposal > 0

    ratio = np.zeros_like(proposal)
    regular = proposed & (denominator > 0)
    ratio[regular] = numerator[regular] / denominator[regular]
    # 현재 상태의 목표확률이 0이면 항상 수락
    ratio[proposed & (denominator <= 0)] = 1.0

    moves = proposal * np.minimum(1.0, ratio)
    np.fill_diagonal(moves, 0.0)
    stay = np.maximum(1.0 - moves.sum(axis=1), 0.0)  # 거절 질량
    moves[np.diag_indices_from(moves)] = stay
    return moves


# === 곱공간 전이핵 조립 ===
def _deterministic_scan(y_update: np.ndarray, x_update: np.ndarray) -> np.ndarray:
    """P[(x,y),(x',y')] = y_update[x,y,y'] · x_update[x,y',x']"""
    nx, ny, _ = y_update.shape
    return np.einsum("abk,akc->abck", y_update, x_update).reshape(nx * ny, nx * ny)


def _random_scan(x_update: np.ndarray, y_update: np.ndarray, r: float) -> np.ndarray:
    """P = r · (X 갱신, y 고정) + (1−r) · (Y 갱신, x 고정)"""
    nx, ny, _ = y_update.shape
    P = np.zeros((nx, ny, nx, ny))
    for y in range(ny):
        P[:, y, :, y] += r * x_update[:, y, :]
    for x in range(nx):
        P[x, :, x, :] += (1.0 - r) * y_update[x, :, :]
    return P.reshape(nx * ny, nx * ny)


class KernelBuilder:
    """
    성분별 샘플러 전이핵 생성 서비스
    """

    @staticmethod
    def product_labels(nx: int, ny: int) -> List[Tuple[int, int]]:
        """s = x·ny + y 순서의 (x, y) 라벨"""
        return [(x, y) for x in range(nx) for y in range(ny)]

    def conditionals(self, joint: FiniteJointDistribution, restrict_support: bool = False) -> ConditionalFamily:
        """
        완전 조건부분포를 계산한다.

        @param restrict_support: True이면 주변질량 0인 상태의 조건부분포를 균등분포로 채운다.
                                 해당 행은 양의 질량 상태에서 도달할 수 없으므로 제거 후 영향이 없다.
        @throws ZeroMarginal - 주변질량 0인 상태가 있고 restrict_support=False인 경우
        """
        p = joint.p
        p_x, p_y = joint.marginal_x, joint.marginal_y
        if not restrict_support and (np.any(p_x <= 0) or np.any(p_y <= 0)):
            raise ZeroMarginal("a marginal has a zero-mass state; pass restrict_support=True to drop it")

        y_given_x = np.full((joint.nx, joint.ny), 1.0 / joint.ny)
        x_given_y = np.full((joint.ny, joint.nx), 1.0 / joint.nx)
        rows = p_x > 0  # 양의 질량 x
        cols = p_y > 0  # 양의 질량 y
        y_given_x[rows] = p[rows] / p_x[rows, None]
        x_given_y[cols] = (p[:, cols] / p_y[None, cols]).T
        return ConditionalFamily(x_given_y=x_given_y, y_given_x=y_given_x)

    def mh_step(self, family: ConditionalFamily, proposal: ProposalFamily, axis: Optional[Axis] = None) -> MhStepFamily:
        """
        조건부 목표에 대한 Metropolis-Hastings 한 단계 테이블을 만든다.

        @param family: 완전 조건부분포 (proposal.axis 쪽 조건부가 목표)
        @param proposal: 제안분포
        @param axis: 기대하는 갱신 성분 (지정 시 proposal.axis와 일치해야 함)
        @throws AxisMismatch, DimensionMismatch
        """
        if axis is not None and Axis(axis) != proposal.axis:
            raise AxisMismatch(f"expected a proposal over {Axis(axis).value}, got {proposal.axis.value}")

        target = family.target(proposal.axis)
        if proposal.q.shape != target.shape:
            raise DimensionMismatch(f"proposal shape {proposal.q.shape} does not match target {target.shape}")

        nx, ny, _ = target.shape
        Q = np.empty_like(target)
        if proposal.axis == Axis.X:
            for y in range(ny):
                Q[:, y, :] = _mh_matrix(target[0, y, :], proposal.q[:, y, :])
        else:
            for x in range(nx):
                Q[x, :, :] = _mh_matrix(target[x, 0, :], proposal.q[x, :, :])
        return MhStepFamily(axis=proposal.axis, Q=Q)

    def _product_kernel(self, name: str, joint: FiniteJointDistribution, P: np.ndarray, reversible: bool) -> TransitionKernel:
        logger.debug("%s 생성: %d개 상태", name, joint.n_states)
        return TransitionKernel(
            name=name,
            space="XY",
            labels=self.product_labels(joint.nx, joint.ny),
            P=P,
            stationary=joint.p.ravel(),
            reversible=reversible,
        )

    def _x_step(self, family: ConditionalFamily, q2: Optional[ProposalFamily]) -> np.ndarray:
        if q2 is None:
            return family.target(Axis.X)  # Gibbs 갱신
        return self.mh_step(family, q2, axis=Axis.X).Q

    def _y_step(self, family: ConditionalFamily, q1: Optional[ProposalFamily]) -> np.ndarray:
        if q1 is None:
            return family.target(Axis.Y)  # Gibbs 갱신
        return self.mh_step(family, q1, axis=Axis.Y).Q

    def dg_kernel(self, joint: FiniteJointDistribution, restrict_support: bool = False) -> TransitionKernel:
        """PD((x,y),(x',y')) = Π_{Y|X}(y'|x) Π_{X|Y}(x'|y')  (비가역)"""
        family = self.conditionals(joint, restrict_support)
        P = _deterministic_scan(self._y_step(family, None), self._x_step(family, None))
        return self._product_kernel("PD", joint, P, False)

    def rg_kernel(self, joint: FiniteJointDistribution, r: float, restrict_support: bool = False) -> TransitionKernel:
        """PR = r Π_{X|Y}(dx'|y) δ_y + (1−r) Π_{Y|X}(dy'|x) δ_x  (가역)"""
        r = _check_r(r)
        family = self.conditionals(joint, restrict_support)
        P = _random_scan(self._x_step(family, None), self._y_step(family, None), r)
        return self._product_kernel("PR", joint, P, True)

    def dc_kernel(self, joint: FiniteJointDistribution, q2: ProposalFamily, restrict_support: bool = False) -> TransitionKernel:
        """PDM((x,y),(x',y')) = Q(x'|x,y') Π_{Y|X}(y'|x)  (비가역)"""
        family = self.conditionals(joint, restrict_support)
        P = _deterministic_scan(self._y_step(family, None), self._x_step(family, q2))
        return self._product_kernel("PDM", joint, P, False)

    def rc_kernel(self, joint: FiniteJointDistribution, q2: ProposalFamily, r: float,
                  restrict_support: bool = False) -> TransitionKernel:
        """PRM = r Q(dx'|x,y) δ_y + (1−r) Π_{Y|X}(dy'|x) δ_x  (가역)"""
        r = _check_r(r)
        family = self.conditionals(joint, restrict_support)
        P = _random_scan(self._x_step(family, q2), self._y_step(family, None), r)
        return self._product_kernel("PRM", joint, P, True)

    def dcmm_kernel(self, joint: FiniteJointDistribution, q1: ProposalFamily, q2: ProposalFamily,
                    restrict_support: bool = False) -> TransitionKernel:
        """두 MH 갱신의 합성 P[(x,y),(x',y')] = P1(y'|x,y) P2(x'|x,y')  (비가역)"""
        family = self.conditionals(joint, restrict_support)
        P = _deterministic_scan(self._y_step(family, q1), self._x_step(family, q2))
        return self._product_kernel("PDMM", joint, P, False)

    def rcmm_kernel(self, joint: FiniteJointDistribution, q1: ProposalFamily, q2: ProposalFamily, r: float,
                    restrict_support: bool = False) -> TransitionKernel:
        """두 MH 갱신의 혼합 r P2 δ_y + (1−r) P1 δ_x  (가역)"""
        r = _check_r(r)
        family = self.conditionals(joint, restrict_support)
        P = _random_scan(self._x_step(family, q2), self._y_step(family, q1), r)
        return self._product_kernel("PRMM", joint, P, True)

    # === 주변 체인 ===
    def marginal_x(self, joint: FiniteJointDistribution, restrict_support: bool = False) -> TransitionKernel:
        """PX(x,x') = Σ_y Π_{Y|X}(y|x) Π_{X|Y}(x'|y), ΠX에 대해 가역"""
        family = self.conditionals(joint, restrict_support)
        return TransitionKernel(
            name="PX",
            space="X",
            labels=[(x,) for x in range(joint.nx)],
            P=family.y_given_x @ family.x_given_y,
            stationary=joint.marginal_x,
            reversible=True,
        )

    def marginal_y(self, joint: FiniteJointDistribution, restrict_support: bool = False) -> TransitionKernel:
        """PY(y,y') = Σ_x Π_{X|Y}(x|y) Π_{Y|X}(y'|x), ΠY에 대해 가역"""
        family = self.conditionals(joint, restrict_support)
        return TransitionKernel(
            name="PY",
            space="Y",
            labels=[(y,) for y in range(joint.ny)],
            P=family.x_given_y @ family.y_given_x,
            stationary=joint.marginal_y,
            reversible=True,
        )

    def marginal_xm(self, joint: FiniteJointDistribution, q2: ProposalFamily,
                    restrict_support: bool = False) -> TransitionKernel:
        """PXM(x,x') = Σ_y Q(x'|x,y) Π_{Y|X}(y|x), ΠX에 대해 가역"""
        family = self.conditionals(joint, restrict_support)
        Q = self._x_step(family, q2)
        return TransitionKernel(
            name="PXM",
            space="X",
            labels=[(x,) for x in range(joint.nx)],
            P=np.einsum("ab,abc->ac", family.y_given_x, Q),
            stationary=joint.marginal_x,
            reversible=True,
        )
