"""
* @className : DistributionService
* @description : 결합분포 검증 및 재현 가능한 랜덤 인스턴스 생성 모듈
*                원시 확률표를 검증(Assumption 1 포함)하고 정규화하며,
*                Dirichlet 결합 pmf와 제안분포(독립, 정확 조건부, 교환)를 생성합니다.
*                결합분포/제안분포 JSON 입출력도 담당합니다.
*
*                 JSON 스키마:
*                - 결합분포: {"nx": int, "ny": int, "p": [row-major]}
*                - 제안분포: {"axis": "X"|"Y", "nx": int, "ny": int, "q": [[..] per (x,y)]}
*
"""
import json
import logging
from pathlib import Path
from typing import Any, List, Optional, Sequence, Union

import numpy as np

from app.config.settings import settings
from app.core.exceptions import (
    AssumptionOneViolated,
    BadConcentration,
    BadInputFile,
    DimensionMismatch,
    DomainError,
    IoError,
    NegativeEntry,
    SumNotOne,
    ZeroMarginalState,
)
from app.models.distribution import Axis, FiniteJointDistribution, ProposalFamily
from app.services.kernels import KernelBuilder

logger = logging.getLogger(__name__)

Concentration = Union[float, Sequence[float], np.ndarray, None]


def _concentration_vector(size: int, concentration: Concentration, rng: np.random.Generator) -> np.ndarray:
    if concentration is None:
        # 농도 모수 자체를 같은 시드 스트림에서 U[low, high]로 뽑는다
        return rng.uniform(settings.concentration_low, settings.concentration_high, size=size)
    alpha = np.array(concentration, dtype=float)
    if alpha.ndim == 0:
        alpha = np.full(size, float(alpha))
    if alpha.shape != (size,):
        raise BadConcentration(f"concentration must be a scalar or a vector of length {size}")
    if not np.all(np.isfinite(alpha)) or np.any(alpha <= 0):
        raise BadConcentration("concentration entries must be positive")
    return alpha


# === JSON 입출력 ===
def _read_json(path: Union[str, Path]) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except OSError as e:
        raise IoError(f"cannot read {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise BadInputFile(f"{path} is not valid JSON: {e}") from e


def _write_json(payload: Any, path: Union[str, Path]) -> Path:
    target = Path(path)
    try:
        target.parent.mkdir(parents=True, exist_ok=True)
        with open(target, "w", encoding="utf-8") as f:
            json.dump(payload, f, indent=2)
            f.write("\n")
    except OSError as e:
        raise IoError(f"cannot write {path}: {e}") from e
    return target


class DistributionService:
    """
    결합분포 / 제안분포 생성 및 입출력 서비스
    """

    def __init__(self, kernels: KernelBuilder):
        self.kernels = kernels  # 정확 조건부 제안분포용

    def validate_joint(self, p: Any, sum_tolerance: Optional[float] = None) -> FiniteJointDistribution:
        """
        원시 nx×ny 확률표를 검증하고 합계 1로 재정규화한다.

        @param p: 2차원 실수 테이블
        @param sum_tolerance: 허용 합계 드리프트 (기본 settings.sum_tolerance)
        @return FiniteJointDistribution
        @throws NegativeEntry, SumNotOne, AssumptionOneViolated, DimensionMismatch, DomainError
        """
        tolerance = settings.sum_tolerance if sum_tolerance is None else sum_tolerance
        try:
            table = np.array(p, dtype=float)
        except (TypeError, ValueError) as e:
            raise DimensionMismatch(f"joint table is not rectangular: {e}") from e

        if table.ndim != 2 or 0 in table.shape:
            raise DimensionMismatch(f"joint table must be a non-empty 2-d table, got shape {table.shape}")
        if not np.all(np.isfinite(table)):
            raise DomainError("joint table has a non-finite entry")
        if np.any(table < 0):
            raise NegativeEntry("joint table has a negative entry")

        total = table.sum()
        if abs(total - 1.0) > tolerance:
            raise SumNotOne(f"joint table sums to {total!r} (tolerance {tolerance})")

        nx, ny = table.shape
        return FiniteJointDistribution(nx=nx, ny=ny, p=table / total)

    def gen_dirichlet_joint(self, nx: int, ny: int, concentration: Concentration = None,
                            seed: int = 0) -> FiniteJointDistribution:
        """
        nx·ny개 원소를 하나의 Dirichlet 표본으로 갖는 결합 pmf를 생성한다.

        @param concentration: 스칼라, 길이 nx·ny 벡터, 또는 None (U[0.5, 2.0] i.i.d.)
        @param seed: numpy Generator 시드 (같은 시드 → 동일한 테이블)
        """
        if nx < 2 or ny < 2:
            raise AssumptionOneViolated(f"Dirichlet instances need nx, ny >= 2 (got {nx}×{ny})")
        rng = np.random.default_rng(seed)
        alpha = _concentration_vector(nx * ny, concentration, rng)
        draw = rng.dirichlet(alpha)
        if np.any(draw <= 0):
            # 거의 확실히 발생하지 않지만 이후의 모든 수렴률 계산이 양의 원소를 가정한다
            raise BadConcentration("Dirichlet draw underflowed to zero; increase the concentration")
        logger.debug("Dirichlet 결합분포 생성: %d×%d, seed=%d", nx, ny, seed)
        return FiniteJointDistribution(nx=nx, ny=ny, p=draw.reshape(nx, ny))

    def gen_dirichlet_corpus(self, count: int, nx: int, ny: int, seed: int,
                             concentration: Concentration = None) -> List[FiniteJointDistribution]:
        """seed, seed+1, ... 로 생성한 count개의 결합분포 목록"""
        return [self.gen_dirichlet_joint(nx, ny, concentration, seed + i) for i in range(count)]

    def product_joint(self, p_x: Sequence[float], p_y: Sequence[float]) -> FiniteJointDistribution:
        """독립 결합분포 pX ⊗ pY"""
        return self.validate_joint(np.outer(np.asarray(p_x, dtype=float), np.asarray(p_y, dtype=float)))

    def gen_independence_proposal(self, joint: FiniteJointDistribution, axis: Axis) -> ProposalFamily:
        """
        모든 (x,y)에서 해당 성분의 주변분포를 제안하는 독립 제안분포.

        @throws ZeroMarginalState - 주변확률 0인 상태가 있는 경우
        """
        axis = Axis(axis)
        marginal = joint.marginal_x if axis == Axis.X else joint.marginal_y
        if np.any(marginal <= 0):
            zero_states = np.flatnonzero(marginal <= 0).tolist()
            raise ZeroMarginalState(f"{axis.value}-marginal has a zero-mass state at {zero_states}")
        q = np.broadcast_to(marginal, (joint.nx, joint.ny, len(marginal)))
        return ProposalFamily(axis=axis, q=q)

    def gen_exact_proposal(self, joint: FiniteJointDistribution, axis: Axis) -> ProposalFamily:
        """완전 조건부분포 자체를 제안하는 제안분포 (수락확률 ≡ 1)"""
        axis = Axis(axis)
        return ProposalFamily(axis=axis, q=self.kernels.conditionals(joint).target(axis))

    def gen_swap_proposal(self, nx: int, ny: int, axis: Axis = Axis.X) -> ProposalFamily:
        """
        현재 값과 다른 점을 항상 제안하는 순환 이동 제안분포.
        두 상태에서는 교환(swap)이 된다.
        """
        axis = Axis(axis)
        n_axis = nx if axis == Axis.X else ny
        if n_axis < 2:
            raise DomainError("swap proposal needs at least two states on the proposed axis")
        q = np.zeros((nx, ny, n_axis))
        for x in range(nx):
            for y in range(ny):
                current = x if axis == Axis.X else y
                q[x, y, (current + 1) % n_axis] = 1.0  # 다음 상태로 순환
        return ProposalFamily(axis=axis, q=q)

    def joint_from_json(self, payload: Any) -> FiniteJointDistribution:
        try:
            nx, ny, flat = int(payload["nx"]), int(payload["ny"]), payload["p"]
        except (KeyError, TypeError, ValueError) as e:
            raise BadInputFile(f"joint JSON must contain nx, ny, p: {e}") from e
        if not isinstance(flat, list) or len(flat) != nx * ny:
            raise BadInputFile(f"joint JSON p must hold nx·ny = {nx * ny} entries")
        try:
            table = np.array(flat, dtype=float).reshape(nx, ny)
        except (TypeError, ValueError) as e:
            raise BadInputFile(f"joint JSON p has non-numeric entries: {e}") from e
        return self.validate_joint(table)

    def proposal_from_json(self, payload: Any) -> ProposalFamily:
        try:
            axis, nx, ny, rows = Axis(payload["axis"]), int(payload["nx"]), int(payload["ny"]), payload["q"]
            q = np.array(rows, dtype=float)
        except (KeyError, TypeError, ValueError) as e:
            raise BadInputFile(f"proposal JSON must contain axis, nx, ny, q: {e}") from e
        if q.ndim != 2 or q.shape[0] != nx * ny:
            raise BadInputFile(f"proposal JSON q must hold one vector per (x,y), {nx * ny} in total")
        return ProposalFamily(axis=axis, q=q.reshape(nx, ny, q.shape[1]))

    def load_joint(self, path: Union[str, Path]) -> FiniteJointDistribution:
        return self.joint_from_json(_read_json(path))

    def save_joint(self, joint: FiniteJointDistribution, path: Union[str, Path]) -> Path:
        return _write_json(joint.to_json_dict(), path)

    def load_proposal(self, path: Union[str, Path]) -> ProposalFamily:
        return self.proposal_from_json(_read_json(path))

    def save_proposal(self, proposal: ProposalFamily, path: Union[str, Path]) -> Path:
        return _write_json(proposal.to_json_dict(), path)

    def write_json(self, payload: Any, path: Union[str, Path]) -> Path:
        """임의의 JSON 결과 파일 저장 (CLI용)"""
        return _write_json(payload, path)
