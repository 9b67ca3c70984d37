# app/models/distribution.py
"""
* @className : DistributionModels
* @description : 목표 분포와 제안 분포 모델 모듈
*                유한 결합분포 Π, 한 성분에 대한 제안분포 q(·|x,y), 선택확률 r을
*                Pydantic 모델로 정의합니다. 생성 이후에는 불변입니다.
*
"""
from enum import Enum
from typing import Any, Dict, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from app.config.settings import settings
from app.core.exceptions import AssumptionOneViolated, DimensionMismatch, NegativeEntry, SumNotOne


def _frozen(values: Any) -> np.ndarray:
    array = np.array(values, dtype=float)
    array.flags.writeable = False
    return array


class Axis(str, Enum):
    """갱신 대상 성분"""
    X = "X"
    Y = "Y"


class FiniteJointDistribution(BaseModel):
    """유한 결합 확률표 p[x][y] (행 = x, 열 = y)"""
    nx: int = Field(..., gt=0, description="X 상태 개수")
    ny: int = Field(..., gt=0, description="Y 상태 개수")
    p: np.ndarray = Field(..., description="nx×ny 확률표, 합계 1")

    class Config:
        arbitrary_types_allowed = True
        frozen = True

    @field_validator("p", mode="before")
    @classmethod
    def _as_array(cls, value: Any) -> np.ndarray:
        return _frozen(value)

    @model_validator(mode="after")
    def _check_invariants(self) -> "FiniteJointDistribution":
        if self.p.shape != (self.nx, self.ny):
            raise DimensionMismatch(f"p shape {self.p.shape} != ({self.nx}, {self.ny})")
        if np.any(self.p < 0):
            raise NegativeEntry("joint table has a negative entry")
        if abs(self.p.sum() - 1.0) > settings.stochastic_tolerance:
            raise SumNotOne(f"joint table sums to {self.p.sum()!r}")
        if np.count_nonzero(self.marginal_x > 0) < 2 or np.count_nonzero(self.marginal_y > 0) < 2:
            raise AssumptionOneViolated("need at least two positive-mass rows and two positive-mass columns")
        return self

    @property
    def marginal_x(self) -> np.ndarray:
        return self.p.sum(axis=1)

    @property
    def marginal_y(self) -> np.ndarray:
        return self.p.sum(axis=0)

    @property
    def n_states(self) -> int:
        return self.nx * self.ny

    @property
    def is_strictly_positive(self) -> bool:
        return bool(np.all(self.p > 0))

    @property
    def has_positive_marginals(self) -> bool:
        return bool(np.all(self.marginal_x > 0) and np.all(self.marginal_y > 0))

    def restricted(self) -> Tuple["FiniteJointDistribution", np.ndarray, np.ndarray]:
        """
        질량이 0인 행/열을 제거한 분포를 반환한다.

        @return (분포, 남은 x 인덱스, 남은 y 인덱스)
        """
        kept_x = np.flatnonzero(self.marginal_x > 0)
        kept_y = np.flatnonzero(self.marginal_y > 0)
        sub = self.p[np.ix_(kept_x, kept_y)]
        return (
            FiniteJointDistribution(nx=len(kept_x), ny=len(kept_y), p=sub / sub.sum()),
            kept_x,
            kept_y,
        )

    def to_json_dict(self) -> Dict[str, Any]:
        return {"nx": self.nx, "ny": self.ny, "p": self.p.ravel().tolist()}


class ProposalFamily(BaseModel):
    """한 성분에 대한 제안분포표 q[x][y] = 제안 성분 위의 확률벡터"""
    axis: Axis = Field(..., description="제안하는 성분 (X 또는 Y)")
    q: np.ndarray = Field(..., description="(nx, ny, n_axis) 형태의 확률벡터 테이블")

    class Config:
        arbitrary_types_allowed = True
        frozen = True

    @field_validator("q", mode="before")
    @classmethod
    def _as_array(cls, value: Any) -> np.ndarray:
        return _frozen(value)

    @model_validator(mode="after")
    def _check_rows(self) -> "ProposalFamily":
        if self.q.ndim != 3:
            raise DimensionMismatch(f"proposal table must be 3-dimensional, got {self.q.ndim}")
        if np.any(self.q < 0):
            raise NegativeEntry("proposal vector has a negative entry")
        drift = np.abs(self.q.sum(axis=2) - 1.0)
        if np.any(drift > settings.stochastic_tolerance):
            raise SumNotOne(f"proposal vector sums deviate by {drift.max()!r}")
        return self

    @property
    def nx(self) -> int:
        return self.q.shape[0]

    @property
    def ny(self) -> int:
        return self.q.shape[1]

    @property
    def n_axis(self) -> int:
        return self.q.shape[2]

    def to_json_dict(self) -> Dict[str, Any]:
        return {
            "axis": self.axis.value,
            "nx": self.nx,
            "ny": self.ny,
            "q": self.q.reshape(self.nx * self.ny, self.n_axis).tolist(),
        }


class SelectionProbability(BaseModel):
    """랜덤 스캔 선택확률 r ∈ (0,1)"""
    r: float = Field(..., gt=0.0, lt=1.0, description="X 성분을 갱신할 확률")

    class Config:
        frozen = True
