"""
* @className : Core Dependencies
* @description : 핵심 의존성 모듈
*                서비스 인스턴스를 한 곳에서 생성하고 의존 관계를 연결합니다.
*                CLI 명령과 테스트는 이 컨테이너에서 서비스를 꺼내 씁니다.
*
*                 의존 관계:
*                - DistributionService → KernelBuilder
*                - SpectralAnalyzer    → KernelBuilder
*                - TheoryVerifier      → KernelBuilder, SpectralAnalyzer, DistributionService
*                - SimulationService   → SpectralAnalyzer, TheoryVerifier
*
"""
import logging
from functools import lru_cache

from app.services.distributions import DistributionService
from app.services.kernels import KernelBuilder
from app.services.simulate import SimulationService
from app.services.spectral import SpectralAnalyzer
from app.services.theory import TheoryVerifier

logger = logging.getLogger(__name__)


class ServiceContainer:
    """
    서비스 컨테이너 - 싱글톤 관리
    모듈 전역 함수 대신 생성자 주입으로 서비스를 연결한다
    """

    def __init__(self):
        self._kernels = None
        self._distributions = None
        self._spectral = None
        self._theory = None
        self._simulate = None
        logger.debug("ServiceContainer 초기화")

    @property
    def kernels(self) -> KernelBuilder:
        """KernelBuilder 싱글톤"""
        if self._kernels is None:
            logger.debug("KernelBuilder 싱글톤 생성")
            self._kernels = KernelBuilder()
        return self._kernels

    @property
    def distributions(self) -> DistributionService:
        """DistributionService 싱글톤"""
        if self._distributions is None:
            logger.debug("DistributionService 싱글톤 생성")
            self._distributions = DistributionService(self.kernels)
        return self._distributions

    @property
    def spectral(self) -> SpectralAnalyzer:
        """SpectralAnalyzer 싱글톤"""
        if self._spectral is None:
            logger.debug("SpectralAnalyzer 싱글톤 생성")
            self._spectral = SpectralAnalyzer(self.kernels)
        return self._spectral

    @property
    def theory(self) -> TheoryVerifier:
        """TheoryVerifier 싱글톤"""
        if self._theory is None:
            logger.debug("TheoryVerifier 싱글톤 생성")
            self._theory = TheoryVerifier(self.kernels, self.spectral, self.distributions)
        return self._theory

    @property
    def simulate(self) -> SimulationService:
        """SimulationService 싱글톤"""
        if self._simulate is None:
            logger.debug("SimulationService 싱글톤 생성")
            self._simulate = SimulationService(self.spectral, self.theory)
        return self._simulate


@lru_cache()
def get_service_container() -> ServiceContainer:
    """서비스 컨테이너 싱글톤 - 프로세스 전체에서 하나만 생성"""
    return ServiceContainer()


def get_distribution_service() -> DistributionService:
    """DistributionService 의존성"""
    return get_service_container().distributions


def get_spectral_analyzer() -> SpectralAnalyzer:
    """SpectralAnalyzer 의존성"""
    return get_service_container().spectral


def get_theory_verifier() -> TheoryVerifier:
    """TheoryVerifier 의존성"""
    return get_service_container().theory


def get_simulation_service() -> SimulationService:
    """SimulationService 의존성"""
    return get_service_container().simulate
