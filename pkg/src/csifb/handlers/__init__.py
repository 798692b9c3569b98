from .analyze import router as analyze_router
from .gen_covariance import router as gen_covariance_router
from .simulate import router as simulate_router
from .sweep import router as sweep_router

__all__ = [
    "analyze_router",
    "gen_covariance_router",
    "simulate_router",
    "sweep_router",
]
