# app/config/settings.py
"""
* @className : Settings
* @description : 설정 관리 모듈
*                라이브러리와 CLI 전체에서 사용하는 허용오차, 기본값, 병렬도 설정을
*                환경변수(GIBBS_SPECTRA_*)와 .env 파일로부터 중앙 관리합니다.
*
"""
from typing import Tuple

from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # 실행 설정
    threads: int = 0  # 0 = 직렬 실행
    log_level: str = "WARNING"

    # 입력 검증 허용오차
    sum_tolerance: float = 1e-9  # 입력 테이블 합계 드리프트 허용치 (초과 시 거부)
    stochastic_tolerance: float = 1e-12  # 행 합계 / 정상성 / detailed balance

    # 스펙트럼 계산 허용오차
    equality_tolerance: float = 1e-10
    inequality_slack: float = 1e-12
    relative_tolerance: float = 1e-7
    theorem_tolerance: float = 1e-8
    geo_threshold: float = 1.0 - 1e-8
    dense_state_limit: int = 200
    norm_power_terms: int = 5

    # 감쇠율 적합
    decay_window: Tuple[int, int] = (10, 30)
    dominant_weight_floor: float = 1e-6

    # 랜덤 인스턴스 생성 (Dirichlet 농도 모수 범위)
    concentration_low: float = 0.5
    concentration_high: float = 2.0

    # 출력 설정
    output_precision: int = 17
    default_r: float = 0.5

    class Config:
        env_prefix = "GIBBS_SPECTRA_"
        env_file = ".env"
        env_file_encoding = "utf-8"
        extra = "ignore"


settings = Settings()
