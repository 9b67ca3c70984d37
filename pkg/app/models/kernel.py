# app/models/kernel.py
"""
* @className : KernelModels
* @description : 전이핵 관련 데이터 모델 모듈
*                완전 조건부분포, Metropolis-Hastings 단계 테이블, 정상분포를 갖는
*                유한 상태 전이핵을 정의하고 생성 시 불변식을 검증합니다.
*
*                 검증 항목:
*                - 각 행의 합 = 1
*                - 정상성: πP = π
*                - 가역성을 주장하는 경우 detailed balance
*
"""
from typing import Any, Dict, List, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from app.config.settings import settings
from app.core.exceptions import DimensionMismatch, InvariantViolation
from app.models.distribution import Axis, _frozen


class ConditionalFamily(BaseModel):
    """완전 조건부분포 Π_{X|Y}, Π_{Y|X}"""
    x_given_y: np.ndarray = Field(..., description="(ny, nx), 행 y = Π_{X|Y}(·|y)")
    y_given_x: np.ndarray = Field(..., description="(nx, ny), 행 x = Π_{Y|X}(·|x)")

    class Config:
        arbitrary_types_allowed = True
        frozen = True

    @field_validator("x_given_y", "y_given_x", mode="before")
    @classmethod
    def _as_array(cls, value: Any) -> np.ndarray:
        return _frozen(value)

    def target(self, axis: Axis) -> np.ndarray:
        """
        갱신 성분 기준으로 정렬된 조건부 목표 테이블 target[x, y, ·]을 반환한다.
        axis=X이면 target[x, y, x'] = π(x'|y), axis=Y이면 target[x, y, y'] = π(y'|x).
        """
        nx, ny = self.y_given_x.shape
        if axis == Axis.X:
            return np.broadcast_to(self.x_given_y[None, :, :], (nx, ny, nx))
        return np.broadcast_to(self.y_given_x[:, None, :], (nx, ny, ny))


class MhStepFamily(BaseModel):
    """Metropolis-Hastings 한 단계 Q(·|x,y), 기각 자기질량 포함"""
    axis: Axis
    Q: np.ndarray = Field(..., description="(nx, ny, n_axis) 확률벡터 테이블")

    class Config:
        arbitrary_types_allowed = True
        frozen = True

    @field_validator("Q", mode="before")
    @classmethod
    def _as_array(cls, value: Any) -> np.ndarray:
        return _frozen(value)

    @model_validator(mode="after")
    def _check_rows(self) -> "MhStepFamily":
        drift = np.abs(self.Q.sum(axis=2) - 1.0)
        if np.any(drift > settings.stochastic_tolerance) or np.any(self.Q < -settings.stochastic_tolerance):
            raise InvariantViolation(f"MH step rows are not stochastic (drift {drift.max()!r})")
        return self


class TransitionKernel(BaseModel):
    """인덱스화된 상태공간 위의 정방 확률행렬과 정상분포"""
    name: str = Field(..., description="PD, PR, PDM, PRM, PDMM, PRMM, PX, PY, PXM 등")
    space: str = Field(..., description="상태공간 종류: XY, X, Y")
    labels: List[Tuple[int, ...]] = Field(..., description="상태 인덱스 s의 (x,y) 또는 (x,) 라벨")
    P: np.ndarray = Field(..., description="P[s][s'] = s → s' 전이확률")
    stationary: np.ndarray = Field(..., description="정상분포 π")
    reversible: bool = Field(..., description="가역성 주장 여부 (생성 시 검증)")

    class Config:
        arbitrary_types_allowed = True
        frozen = True

    @field_validator("P", "stationary", mode="before")
    @classmethod
    def _as_array(cls, value: Any) -> np.ndarray:
        return _frozen(value)

    @model_validator(mode="after")
    def _check_invariants(self) -> "TransitionKernel":
        n = len(self.labels)
        if self.P.shape != (n, n) or self.stationary.shape != (n,):
            raise DimensionMismatch(f"{self.name}: {self.P.shape} vs {n} labels")
        tol = settings.stochastic_tolerance

        row_drift = np.abs(self.P.sum(axis=1) - 1.0).max()
        if row_drift > tol:
            raise InvariantViolation(f"{self.name}: row sums drift {row_drift!r}")

        stationary_drift = np.abs(self.stationary @ self.P - self.stationary).max()
        if stationary_drift > tol:
            raise InvariantViolation(f"{self.name}: πP ≠ π (drift {stationary_drift!r})")

        if self.reversible:
            flow = self.stationary[:, None] * self.P
            balance_drift = np.abs(flow - flow.T).max()
            if balance_drift > tol:
                raise InvariantViolation(f"{self.name}: detailed balance drift {balance_drift!r}")
        return self

    @property
    def n_states(self) -> int:
        return len(self.labels)

    def decode(self, s: int) -> Tuple[int, ...]:
        return self.labels[s]

    def encode(self, label: Tuple[int, ...]) -> int:
        return self.labels.index(tuple(label))

    def restrict(self) -> "TransitionKernel":
        """
        정상질량이 0인 상태를 제거하고 인덱스를 재배열한 전이핵을 반환한다.
        양의 질량 상태에서 출발한 전이는 양의 질량 상태로만 가므로 행 합이 유지된다.
        """
        kept = np.flatnonzero(self.stationary > 0)
        if len(kept) == self.n_states:
            return self
        return TransitionKernel(
            name=self.name,
            space=self.space,
            labels=[self.labels[s] for s in kept],
            P=self.P[np.ix_(kept, kept)],
            stationary=self.stationary[kept],
            reversible=self.reversible,
        )

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            "states": [list(label) for label in self.labels],
            "P": self.P.ravel().tolist(),
            "stationary": self.stationary.tolist(),
            "reversible": self.reversible,
        }
