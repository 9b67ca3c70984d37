# app/main.py
"""
* @className : Gibbs Spectra Application
* @description : gibbs-spectra 메인 엔트리 포인트 모듈
*                유한 상태 2성분 Gibbs / CMH 샘플러의 L² 수렴률 계산과
*                이론 검증을 명령줄로 제공합니다.
*
*                 주요 명령:
*                - gen      : Dirichlet 결합분포 생성
*                - analyze  : 수렴률, 최대상관, 조건 상수
*                - verify   : 이론 검증 묶음 (종료 코드 0 / 1 / 2)
*                - figure2  : ρD 대 ρR CSV
*                - gauss    : 이변량 정규 실험
*
"""
from dotenv import load_dotenv

# 환경변수 로드 (최상단에 위치)
load_dotenv()

from app.cli.cli import cli_app  # noqa: E402


def run() -> None:
    cli_app()


if __name__ == "__main__":  # 메인 모듈에서 직접 실행하는 경우
    run()
