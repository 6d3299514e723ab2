"""Singularity-free integration of retarded integrands over 3D space.

The volume integral of integrand(r', t') / |r - r'| is rewritten in
spherical coordinates centered on the observation point, r' = r + rho w,
so the rho^2 Jacobian cancels the 1/rho kernel and the measure becomes
rho drho dOmega.  Nodes are Gauss-Legendre in rho over [0, rho_max],
Gauss-Legendre in cos(theta), and a uniform periodic trapezoid in phi.
Node evaluations are vectorized and reduced in a fixed order so repeated
runs are bit-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from numpy.polynomial.legendre import leggauss

from .fields import (BUMP_RADIUS, SHELL_WAVE, STATIC_BUMP, TRANSLATED_BUMP,
                     FieldSpec, SpaceTimePoint)
from .kernel import ADVANCED, KernelConfig


class UnboundedSupportError(ValueError):
    """Raised when a field has no finite retarded support radius."""


class IntegrandEvaluationError(RuntimeError):
    """Raised when an integrand sample is not finite."""


@dataclass(frozen=True)
class QuadratureConfig:
    """Node counts, truncation radius and refinement policy.

    ``rho_max`` may be left ``None`` when the caller derives the truncation
    radius from the field's support.  The default node counts are radial-
    heavy because the retarded support edge is only a C1 feature of the
    integrand and the radial direction crosses it most steeply; they are
    sized so the headline moving-bump sweep meets its tolerance with
    margin at default resolution.
    """

    n_radial: int = 320
    n_theta: int = 64
    n_phi: int = 16
    rho_max: float | None = None
    refinement_levels: int = 2

    def __post_init__(self):
        for name in ("n_radial", "n_theta", "n_phi"):
            if getattr(self, name) < 2:
                raise ValueError(f"{name} must be >= 2")
        if self.rho_max is not None and not self.rho_max > 0.0:
            raise ValueError("rho_max must be positive")
        if self.refinement_levels < 1:
            raise ValueError("refinement_levels must be >= 1")

    def scaled(self, factor: int) -> "QuadratureConfig":
        """Same truncation radius with all node counts multiplied."""
        return replace(self, n_radial=self.n_radial * factor,
                       n_theta=self.n_theta * factor,
                       n_phi=self.n_phi * factor)

    @property
    def resolution(self) -> tuple:
        return (self.n_radial, self.n_theta, self.n_phi)


@dataclass(frozen=True)
class ConvergenceRecord:
    """Integral estimates at geometrically refined resolutions.

    ``observed_order`` is ``None`` when it cannot be measured (fewer than
    three levels) or is meaningless (``status`` of ``"exact"`` for runs
    where every level agrees to rounding, ``"not_converged"`` for
    oscillating sequences).
    """

    resolutions: tuple
    values: tuple
    richardson_estimate: float | None
    observed_order: float | None
    status: str

    def __post_init__(self):
        if len(self.resolutions) != len(self.values):
            raise ValueError("resolutions and values must have equal length")
        if self.observed_order is not None and not math.isfinite(self.observed_order):
            raise ValueError("observed_order must be finite when present")

    @property
    def error_estimate(self) -> float:
        """Conservative error of the finest value: last successive change."""
        if len(self.values) < 2:
            return math.nan
        return abs(self.values[-1] - self.values[-2])

    def scaled(self, factor: float) -> "ConvergenceRecord":
        rich = None if self.richardson_estimate is None \
            else factor * self.richardson_estimate
        return ConvergenceRecord(
            resolutions=self.resolutions,
            values=tuple(factor * v for v in self.values),
            richardson_estimate=rich,
            observed_order=self.observed_order,
            status=self.status)


def radial_rule(n_radial: int, rho_max: float):
    """Gauss-Legendre nodes/weights mapped from [-1, 1] to [0, rho_max]."""
    x, w = leggauss(n_radial)
    return 0.5 * rho_max * (x + 1.0), 0.5 * rho_max * w


def angular_product_rule(n_theta: int, n_phi: int):
    """Product rule over the unit sphere: Gauss-Legendre in cos(theta)
    crossed with a uniform periodic trapezoid in phi.

    Returns unit direction vectors of shape (n_theta * n_phi, 3) and the
    matching solid-angle weights (summing to 4 pi), in a fixed order.
    """
    mu, w_mu = leggauss(n_theta)
    phi = 2.0 * math.pi * np.arange(n_phi) / n_phi
    w_phi = 2.0 * math.pi / n_phi
    sin_theta = np.sqrt(1.0 - mu * mu)
    omega = np.empty((n_theta, n_phi, 3))
    omega[:, :, 0] = sin_theta[:, None] * np.cos(phi)[None, :]
    omega[:, :, 1] = sin_theta[:, None] * np.sin(phi)[None, :]
    omega[:, :, 2] = np.broadcast_to(mu[:, None], (n_theta, n_phi))
    weights = np.broadcast_to((w_mu * w_phi)[:, None], (n_theta, n_phi))
    return omega.reshape(-1, 3), np.ascontiguousarray(weights).reshape(-1)


def integrate_retarded(integrand, center: SpaceTimePoint,
                       cfg: QuadratureConfig, kcfg: KernelConfig) -> float:
    """Evaluate integral of integrand(r', t') / |r - r'| d^3 r' with t'
    the retarded (or advanced) time of each source point.

    ``integrand`` must accept an (N, 3) array of source positions and an
    (N,) array of source times and return (N,) samples.
    """
    if cfg.rho_max is None:
        raise ValueError("rho_max must be set (or derived from support_radius)")
    rho, w_rho = radial_rule(cfg.n_radial, cfg.rho_max)
    omega, w_omega = angular_product_rule(cfg.n_theta, cfg.n_phi)

    points = center.position[None, None, :] + rho[:, None, None] * omega[None, :, :]
    times = center.t + kcfg.time_sign * rho / kcfg.c
    n_ang = omega.shape[0]
    flat_points = points.reshape(-1, 3)
    flat_times = np.repeat(times, n_ang)

    values = np.asarray(integrand(flat_points, flat_times), dtype=float)
    if values.shape != (len(flat_times),):
        raise ValueError("integrand returned wrong shape "
                         f"{values.shape} for {len(flat_times)} samples")
    bad = ~np.isfinite(values)
    if np.any(bad):
        i = int(np.argmax(bad))
        raise IntegrandEvaluationError(
            "non-finite integrand sample at r'="
            f"{tuple(flat_points[i])}, t'={flat_times[i]}")

    # The kernel 1/rho is already cancelled against the rho^2 Jacobian.
    weights = ((w_rho * rho)[:, None] * w_omega[None, :]).reshape(-1)
    return float(np.sum(weights * values))


def support_radius(spec: FieldSpec, center: SpaceTimePoint,
                   kcfg: KernelConfig) -> float:
    """Rigorous truncation radius beyond which the retarded integrand of
    ``spec`` observed from ``center`` vanishes identically.

    Raises :class:`UnboundedSupportError` when no such radius exists
    (always-on shell waves, or switched shells under the advanced
    propagator, whose support reaches arbitrarily far along the cone).
    """
    if spec.family == TRANSLATED_BUMP:
        if abs(spec.v) >= kcfg.c:
            raise UnboundedSupportError(
                "translation speed reaches the propagation speed; "
                "the retarded support never closes")
        bump_center = np.array([0.0, 0.0, spec.v * center.t])
        r_rel = float(np.linalg.norm(center.position - bump_center))
        return (BUMP_RADIUS + r_rel) / (1.0 - abs(spec.v) / kcfg.c)
    if spec.family == STATIC_BUMP:
        r_rel = float(np.linalg.norm(center.position - np.asarray(spec.center)))
        return BUMP_RADIUS + r_rel
    if spec.family == SHELL_WAVE:
        if spec.switch_window is None:
            raise UnboundedSupportError(
                "always-on shell wave: support reaches arbitrarily far "
                "into the past light cone")
        if kcfg.propagator == ADVANCED:
            raise UnboundedSupportError(
                "switched shell wave stays on at late times; no finite "
                "advanced support radius")
        t_on = spec.switch_window[0]
        return max(kcfg.c * (center.t - t_on), 0.0)
    raise ValueError(f"unknown field family {spec.family!r}")


def convergence_study(integrand, center: SpaceTimePoint,
                      base_cfg: QuadratureConfig, kcfg: KernelConfig,
                      levels: int) -> ConvergenceRecord:
    """Run :func:`integrate_retarded` at geometrically refined resolutions
    (node counts doubled per level), measure the convergence order, and
    Richardson-extrapolate when the successive differences shrink."""
    if levels < 2:
        raise ValueError("a convergence study needs at least 2 levels")
    configs = [base_cfg.scaled(2 ** i) for i in range(levels)]
    values = [integrate_retarded(integrand, center, c, kcfg) for c in configs]
    resolutions = tuple(c.resolution for c in configs)

    diffs = [values[i + 1] - values[i] for i in range(levels - 1)]
    scale = max(abs(v) for v in values)
    if all(abs(d) <= 1e-15 * max(scale, 1e-300) for d in diffs):
        return ConvergenceRecord(resolutions=resolutions, values=tuple(values),
                                 richardson_estimate=values[-1],
                                 observed_order=None, status="exact")
    if len(diffs) < 2:
        return ConvergenceRecord(resolutions=resolutions, values=tuple(values),
                                 richardson_estimate=None,
                                 observed_order=None, status="estimated")
    shrinking = all(abs(diffs[i + 1]) < abs(diffs[i]) for i in range(len(diffs) - 1))
    if not shrinking:
        return ConvergenceRecord(resolutions=resolutions, values=tuple(values),
                                 richardson_estimate=None,
                                 observed_order=None, status="not_converged")
    if diffs[-1] == 0.0:
        # Refinement stopped changing the result: already at rounding level.
        return ConvergenceRecord(resolutions=resolutions, values=tuple(values),
                                 richardson_estimate=values[-1],
                                 observed_order=None, status="exact")
    order = math.log2(abs(diffs[-2]) / abs(diffs[-1]))
    richardson = values[-1] + diffs[-1] / (2.0 ** order - 1.0)
    return ConvergenceRecord(resolutions=resolutions, values=tuple(values),
                             richardson_estimate=richardson,
                             observed_order=order, status="converged")
