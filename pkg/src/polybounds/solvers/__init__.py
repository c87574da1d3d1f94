"""Self-contained optimization engines: dense simplex LP and interior-point SDP."""

from .lp import LpProblem, LpResult, lp_solve
from .sdp import SdpProblem, SdpResult, realify, sdp_solve

__all__ = [
    "LpProblem",
    "LpResult",
    "lp_solve",
    "SdpProblem",
    "SdpResult",
    "realify",
    "sdp_solve",
]
