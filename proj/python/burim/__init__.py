"""Multi-frequency backscatter imaging of buried dielectric targets.

Thin python surface over the C++ core: wavenumber helpers, the volume
integral forward solver, angular-spectrum propagation, and the plane
preprocessing primitives.
"""

from ._burim import (  # noqa: F401
    gaussian_smooth_plane,
    ghz_to_k,
    green_function,
    partition_nodes,
    propagate_plane,
    solve_forward,
    truncate_plane,
)

__all__ = [
    "gaussian_smooth_plane",
    "ghz_to_k",
    "green_function",
    "partition_nodes",
    "propagate_plane",
    "solve_forward",
    "truncate_plane",
]
