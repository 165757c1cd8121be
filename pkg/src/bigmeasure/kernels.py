"""Riesz kernels and their spherical averages.

Conventions used throughout the package:

* the free-space process with stability index ``alpha`` in (0, 2] has
  characteristic function exp(-t |xi|^alpha); alpha = 2 is Brownian motion
  generated by the full Laplacian (increment covariance 2*t*I),
* for dim > alpha its Green function is
  G(x, y) = C(dim, alpha) |x - y|^(alpha - dim) with
  C(dim, alpha) = Gamma((dim - alpha)/2) / (2^alpha pi^(dim/2) Gamma(alpha/2)),
* ``riesz_kernel`` and everything built on it works with the *idealized*
  kernel |x - y|^(alpha - dim); the constant is applied by callers that need
  physical expectations (see :func:`green_constant`).

``radial_shell_average`` is the workhorse for rotation-invariant measures:
the average of the kernel over a centered sphere of radius ``s`` seen from
distance ``rho``, i.e. the kernel of the one-dimensional radial reduction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, special

from .errors import (
    AlphaOutOfRange,
    CoincidentPoints,
    NonConvergedQuadrature,
    NotTransient,
)

__all__ = [
    "FreeSpace",
    "BoundedBall",
    "KernelModel",
    "green_constant",
    "riesz_kernel",
    "radial_shell_average",
    "shell_average_batch",
    "boundary_green_profile",
    "sphere_surface_area",
]


@dataclass(frozen=True)
class FreeSpace:
    """Kernel comparable to the free-space Riesz kernel, c_lower <= ratio <= c_upper."""

    c_lower: float = 1.0
    c_upper: float = 1.0

    def __post_init__(self):
        if not (0 < self.c_lower <= self.c_upper):
            raise ValueError("need 0 < c_lower <= c_upper")


@dataclass(frozen=True)
class BoundedBall:
    """Absorbing ball of given radius; Green function vanishes at the boundary."""

    radius: float = 1.0

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("ball radius must be positive")


@dataclass(frozen=True)
class KernelModel:
    """Stability index, dimension and domain variant for one Green function.

    ``boundary_exponent`` is the rate at which the bounded-domain Green
    function vanishes at the boundary: 1 for alpha = 2, alpha - 1 for
    alpha in (1, 2). It is derived from alpha; passing it explicitly only
    validates the value.
    """

    alpha: float
    dim: int
    variant: FreeSpace | BoundedBall = field(default_factory=FreeSpace)
    boundary_exponent: float | None = None

    def __post_init__(self):
        if not (0 < self.alpha <= 2):
            raise AlphaOutOfRange(f"alpha must be in (0, 2], got {self.alpha}")
        if self.dim < 1:
            raise ValueError(f"dim must be a positive integer, got {self.dim}")
        if isinstance(self.variant, BoundedBall):
            if self.alpha <= 1:
                raise AlphaOutOfRange(
                    "bounded-ball model requires alpha in (1, 2] "
                    "(boundary exponent undefined otherwise)"
                )
            beta = 1.0 if self.alpha == 2 else self.alpha - 1.0
            if self.boundary_exponent is None:
                object.__setattr__(self, "boundary_exponent", beta)
            elif self.boundary_exponent != beta:
                raise ValueError(
                    f"boundary_exponent must be {beta} for alpha={self.alpha}"
                )
        elif self.boundary_exponent is not None:
            raise ValueError("boundary_exponent only applies to BoundedBall")

    def require_transient(self):
        if self.dim <= self.alpha:
            raise NotTransient(
                f"free-space process with alpha={self.alpha} in dim={self.dim} "
                "is recurrent; no Green function"
            )


def sphere_surface_area(dim: int) -> float:
    """Surface area of the unit sphere in R^dim: 2 pi^(d/2) / Gamma(d/2)."""
    return 2.0 * math.pi ** (dim / 2.0) / special.gamma(dim / 2.0)


def green_constant(alpha: float, dim: int) -> float:
    """C(dim, alpha) such that G(x,y) = C |x-y|^(alpha-dim); requires dim > alpha."""
    if not (0 < alpha <= 2):
        raise AlphaOutOfRange(f"alpha must be in (0, 2], got {alpha}")
    if dim <= alpha:
        raise NotTransient(f"need dim > alpha, got dim={dim}, alpha={alpha}")
    return special.gamma((dim - alpha) / 2.0) / (
        2.0**alpha * math.pi ** (dim / 2.0) * special.gamma(alpha / 2.0)
    )


def riesz_kernel(x, y, model: KernelModel) -> float:
    """Idealized kernel |x - y|^(alpha - dim) for the free-space model."""
    if isinstance(model.variant, BoundedBall):
        raise ValueError("riesz_kernel is the free-space kernel; got BoundedBall")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    dist = float(np.linalg.norm(x - y))
    if dist == 0.0:
        raise CoincidentPoints("riesz_kernel at x == y")
    return dist ** (model.alpha - model.dim)


def boundary_green_profile(delta_y: float, model: KernelModel) -> float:
    """Boundary decay factor delta^beta of the bounded-ball Green function."""
    if not isinstance(model.variant, BoundedBall):
        raise ValueError("boundary_green_profile requires a BoundedBall model")
    if delta_y < 0:
        raise ValueError("distance to the boundary must be nonnegative")
    return delta_y**model.boundary_exponent


def _shell_average_d1(rho: float, s: float, alpha: float) -> float:
    # two-point average over {-s, s}
    lo = abs(rho - s) ** (alpha - 1.0) if rho != s else (0.0 if alpha > 1 else math.inf)
    if rho == s and alpha == 1.0:
        lo = 1.0
    return 0.5 * (lo + (rho + s) ** (alpha - 1.0))


def _shell_average_d3(rho, s, alpha):
    """Closed form in dim 3; exact antiderivative of the polar integral.

    Written in terms of u = min(rho, s) / max(rho, s). The direct difference
    of powers cancels catastrophically for u below about 1e-8, so small u
    switches to the binomial series in u^2, which is far past machine
    precision by the u^8 term at the crossover.
    """
    rho = np.asarray(rho, dtype=float)
    s = np.asarray(s, dtype=float)
    big = np.maximum(rho, s)
    small = np.minimum(rho, s)
    u = small / big
    if alpha == 1.0:
        out = np.arctanh(u) / (big * big * u)
        return np.where(u == 0.0, big**-2.0, out)
    a1 = alpha - 1.0
    closed = ((big * (1.0 + u)) ** a1 - (big * (1.0 - u)) ** a1) / (
        2.0 * rho * s * a1
    )
    c2 = (a1 - 1.0) * (a1 - 2.0) / 6.0
    c4 = c2 * (a1 - 3.0) * (a1 - 4.0) / 20.0
    c6 = c4 * (a1 - 5.0) * (a1 - 6.0) / 42.0
    c8 = c6 * (a1 - 7.0) * (a1 - 8.0) / 72.0
    u2 = u * u
    series = big ** (alpha - 3.0) * (
        1.0 + u2 * (c2 + u2 * (c4 + u2 * (c6 + u2 * c8)))
    )
    return np.where(u < 0.02, series, closed)


_SIN_NORM_CACHE: dict[int, float] = {}


def _sin_power_norm(dim: int) -> float:
    # int_0^pi sin(theta)^(dim-2) dtheta
    val = _SIN_NORM_CACHE.get(dim)
    if val is None:
        val = math.sqrt(math.pi) * special.gamma((dim - 1) / 2.0) / special.gamma(dim / 2.0)
        _SIN_NORM_CACHE[dim] = val
    return val


def radial_shell_average(
    rho: float,
    s: float,
    alpha: float,
    dim: int,
    abs_tol: float = 1e-10,
    rel_tol: float = 1e-8,
) -> float:
    """Average of |x - y|^(alpha-dim) over the sphere |y| = s, with |x| = rho.

    Returns math.inf when the average diverges (rho == s with alpha <= 1).
    Computed by adaptive quadrature in the polar angle for dim >= 2; the
    coincident-radius singularity at theta = 0 is integrable for alpha > 1
    and the interval is split there. Raises NonConvergedQuadrature if the
    quadrature cannot certify the requested tolerance.
    """
    if rho < 0 or s < 0:
        raise ValueError("radii must be nonnegative")
    if not (0 < alpha <= 2):
        raise AlphaOutOfRange(f"alpha must be in (0, 2], got {alpha}")
    if rho == s == 0.0:
        raise CoincidentPoints("shell average at rho = s = 0")
    if dim == 1:
        return _shell_average_d1(rho, s, alpha)
    if rho == 0.0 or s == 0.0:
        # integrand is constant on the sphere
        return max(rho, s) ** (alpha - dim)
    if rho == s and alpha <= 1.0:
        return math.inf

    expo = (alpha - dim) / 2.0
    r2 = rho * rho + s * s
    c2 = 2.0 * rho * s
    norm = _sin_power_norm(dim)

    def integrand(theta):
        return (r2 - c2 * math.cos(theta)) ** expo * math.sin(theta) ** (dim - 2)

    # split at the near-singular end; QUADPACK extrapolation handles the
    # integrable endpoint singularity on [0, cut]
    cut = min(0.5, abs(rho - s) / max(rho, s) + 0.25) if rho != s else 0.5
    total = 0.0
    err = 0.0
    for a, b in ((0.0, cut), (cut, math.pi)):
        res = integrate.quad(
            integrand, a, b, epsabs=abs_tol, epsrel=rel_tol, limit=200, full_output=1
        )
        total += res[0]
        err += res[1]
    result = total / norm
    if not math.isfinite(result):
        raise NonConvergedQuadrature(
            f"shell average quadrature produced {result} at rho={rho}, s={s}"
        )
    if err / norm > max(abs_tol * 10.0, rel_tol * 10.0 * abs(result)):
        raise NonConvergedQuadrature(
            f"shell average error estimate {err / norm:g} exceeds tolerance "
            f"at rho={rho}, s={s}, alpha={alpha}, dim={dim}"
        )
    return result


def shell_average_batch(rho: float, s, alpha: float, dim: int) -> np.ndarray:
    """Vectorized shell average over an array of sphere radii.

    Uses the exact closed forms in dim 1 and 3 (measure-zero coincidences
    rho == s come back as inf for alpha <= 1, consistent with the scalar
    path) and falls back to per-point quadrature otherwise.
    """
    s = np.asarray(s, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        if dim == 1:
            lo = np.abs(rho - s) ** (alpha - 1.0)
            return 0.5 * (lo + (rho + s) ** (alpha - 1.0))
        if rho == 0.0:
            return s ** (alpha - dim)
        if dim == 3:
            safe_s = np.where(s == 0.0, 1.0, s)
            return np.where(
                s == 0.0,
                rho ** (alpha - dim),
                _shell_average_d3(rho, safe_s, alpha),
            )
    return np.array(
        [radial_shell_average(rho, float(si), alpha, dim) for si in np.atleast_1d(s)]
    )
