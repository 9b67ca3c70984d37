"""
* @className : Parallel
* @description : 인스턴스 단위 병렬 실행 모듈
*                GIBBS_SPECTRA_THREADS 설정으로 병렬도를 제한하며,
*                실행 순서와 무관하게 입력 순서대로 결과를 돌려줍니다.
*
"""
import logging
from typing import Callable, List, Optional, Sequence, TypeVar

from joblib import Parallel, delayed

from app.config.settings import settings

T = TypeVar("T")
R = TypeVar("R")

logger = logging.getLogger(__name__)


def run_ordered(func: Callable[[T], R], items: Sequence[T], threads: Optional[int] = None) -> List[R]:
    """
    items 각각에 func를 적용한다.

    @param func: 순수 함수 (공유 가변 상태 없음)
    @param items: 입력 목록
    @param threads: 최대 스레드 수, None이면 settings.threads, 0이면 직렬
    @return List - 입력 순서대로 정렬된 결과
    """
    n_jobs = settings.threads if threads is None else threads
    if n_jobs <= 0 or len(items) <= 1:
        return [func(item) for item in items]

    logger.debug("병렬 실행: %d개 작업, 스레드 %d", len(items), n_jobs)
    # joblib은 입력 순서를 보존한다
    return Parallel(n_jobs=n_jobs, prefer="threads")(delayed(func)(item) for item in items)
