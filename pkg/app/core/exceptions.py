"""
* @className : Exceptions
* @description : 구조화된 예외 계층 모듈
*                입력 거부와 수치 실패를 코드 문자열과 종료 코드로 구분합니다.
*                CLI는 이 정보로 메시지와 프로세스 종료 코드를 결정합니다.
*
"""
from typing import Any, Dict


class GibbsSpectraError(Exception):
    """모든 도메인 예외의 기반 클래스"""

    code = "GibbsSpectraError"
    exit_code = 2

    def __init__(self, detail: str = "", **context: Any):
        self.detail = detail
        self.context: Dict[str, Any] = context
        super().__init__(f"{self.code}: {detail}" if detail else self.code)


# === 입력 오류 (exit 2) ===
class InputError(GibbsSpectraError):
    code = "InputError"


class NegativeEntry(InputError):
    code = "NegativeEntry"


class SumNotOne(InputError):
    code = "SumNotOne"


class AssumptionOneViolated(InputError):
    code = "AssumptionOneViolated"


class BadConcentration(InputError):
    code = "BadConcentration"


class ZeroMarginalState(InputError):
    code = "ZeroMarginalState"


class ZeroMarginal(InputError):
    code = "ZeroMarginal"


class NonPositiveJoint(InputError):
    code = "NonPositiveJoint"


class AxisMismatch(InputError):
    code = "AxisMismatch"


class DimensionMismatch(InputError):
    code = "DimensionMismatch"


class DomainError(InputError):
    code = "DomainError"


class BadInputFile(InputError):
    code = "BadInputFile"


class IoError(InputError):
    code = "IoError"


# === 수치 오류 ===
class NumericalError(GibbsSpectraError):
    code = "NumericalError"
    exit_code = 1


class ZeroStationaryMass(NumericalError):
    code = "ZeroStationaryMass"


class EigenSolverFailure(NumericalError):
    code = "EigenSolverFailure"


class TopSingularValueNotOne(NumericalError):
    code = "TopSingularValueNotOne"


class InfiniteConditionConstant(NumericalError):
    code = "InfiniteConditionConstant"


class DegenerateRate(NumericalError):
    code = "DegenerateRate"


class ZeroDistanceInWindow(NumericalError):
    code = "ZeroDistanceInWindow"


class InvariantViolation(NumericalError):
    code = "InvariantViolation"
