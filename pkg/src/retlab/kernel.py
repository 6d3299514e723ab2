"""Retarded-time geometry, the 1/|r - r'| kernel, and the wave operator.

Also hosts two diagnostics: the contribution of the small ball around the
observation point (which must scale as 2 pi eps^2 f) and the surface term
discarded during integration by parts (which vanishes for compact fields
and plateaus for fields that only decay like 1/distance).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fields import FieldSpec, SpaceTimePoint, field_partials, field_partials_many

RETARDED = "retarded"
ADVANCED = "advanced"


class SingularKernelError(ValueError):
    """Raised when the interaction kernel is evaluated at zero separation
    with zero regularization."""


@dataclass(frozen=True)
class KernelConfig:
    """Propagation constant, regularization length and time direction."""

    c: float = 1.0
    epsilon: float = 0.0
    propagator: str = RETARDED

    def __post_init__(self):
        if not (math.isfinite(self.c) and self.c > 0.0):
            raise ValueError("wave speed c must be positive")
        if not (math.isfinite(self.epsilon) and self.epsilon >= 0.0):
            raise ValueError("regularization length must be >= 0")
        if self.propagator not in (RETARDED, ADVANCED):
            raise ValueError(f"unknown propagator {self.propagator!r}")

    @property
    def time_sign(self) -> float:
        """-1 for the retarded direction, +1 for the advanced one."""
        return -1.0 if self.propagator == RETARDED else 1.0


def retarded_time(r, r_src, t: float, cfg: KernelConfig) -> float:
    """Emission time whose signal reaches ``r`` at ``t`` (or the advanced
    mirror image when the config selects the advanced propagator)."""
    d = float(np.linalg.norm(np.asarray(r, dtype=float)
                             - np.asarray(r_src, dtype=float)))
    return t + cfg.time_sign * d / cfg.c


def regularized_kernel(d, epsilon):
    """1 / sqrt(d^2 + eps^2); reduces to the bare 1/d kernel at eps = 0."""
    d_arr = np.asarray(d, dtype=float)
    if np.any(d_arr < 0.0) or epsilon < 0.0:
        raise ValueError("distance and regularization length must be >= 0")
    if epsilon == 0.0 and np.any(d_arr == 0.0):
        raise SingularKernelError(
            "kernel is singular at zero separation with zero regularization")
    out = 1.0 / np.sqrt(d_arr * d_arr + epsilon * epsilon)
    return float(out) if out.ndim == 0 else out


def dalembertian(spec: FieldSpec, p: SpaceTimePoint, cfg: KernelConfig) -> float:
    """Wave operator f_xx + f_yy + f_zz - f_tt / c^2 from exact partials."""
    b = field_partials(spec, p)
    return b.f_xx + b.f_yy + b.f_zz - b.f_tt / cfg.c ** 2


def dalembertian_many(spec: FieldSpec, points, times, cfg: KernelConfig) -> np.ndarray:
    b = field_partials_many(spec, points, times)
    return np.asarray(b.f_xx + b.f_yy + b.f_zz - b.f_tt / cfg.c ** 2)


def dalembertian_integrand(spec: FieldSpec, cfg: KernelConfig):
    """Callable (points, times) -> wave-operator samples for the quadrature
    engine."""
    def integrand(points, times):
        return dalembertian_many(spec, points, times, cfg)
    return integrand


def epsilon_ball_estimate(spec: FieldSpec, p: SpaceTimePoint, epsilon: float,
                          cfg: KernelConfig) -> float:
    """Kernel-weighted field integral over the ball of radius ``epsilon``
    around the observation point, at the corresponding retarded times.

    For eps small relative to the field scale the result approaches
    2 pi eps^2 f(p): quadratic suppression of the immediate neighborhood.
    """
    if epsilon <= 0.0:
        raise ValueError("ball radius must be positive")
    from .quadrature import QuadratureConfig, integrate_retarded
    from .fields import field_values

    qcfg = QuadratureConfig(n_radial=16, n_theta=16, n_phi=16, rho_max=epsilon)

    def integrand(points, times):
        return field_values(spec, points, times)

    return integrate_retarded(integrand, p, qcfg, cfg)


def boundary_term_estimate(spec: FieldSpec, p: SpaceTimePoint,
                           face_radius: float, cfg: KernelConfig,
                           n_theta: int = 64, n_phi: int = 64) -> float:
    """Kernel-weighted surface integral of the retarded field over the
    sphere of radius ``face_radius`` centered on the observation point.

    Used as a decay diagnostic: exactly zero once the sphere clears a
    compact retarded support, but approaching a nonzero plateau for fields
    that fall off only like 1/|r' - r|.
    """
    if face_radius <= 0.0:
        raise ValueError("face radius must be positive")
    from .quadrature import angular_product_rule
    from .fields import field_values

    omega, weights = angular_product_rule(n_theta, n_phi)
    points = p.position[None, :] + face_radius * omega
    t_src = p.t + cfg.time_sign * face_radius / cfg.c
    values = field_values(spec, points, np.full(len(points), t_src))
    # 1/|r'-r| kernel times the R^2 area element leaves one factor of R.
    return float(face_radius * np.sum(weights * values))
