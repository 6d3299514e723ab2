"""Analytic test fields with exact closed-form partial derivatives.

Three field families are provided:

* ``translated_bump`` -- a compactly supported radial cos^4 bump rigidly
  translated along the z axis at constant velocity,
* ``static_bump`` -- the same bump held fixed at an arbitrary center,
* ``shell_wave`` -- a regular spherical wave (incoming profile plus its
  reflection through the origin) that solves the homogeneous wave equation
  exactly, optionally multiplied by a smooth temporal switch so the field
  can be turned on over a finite window.

Every family exposes exact first and diagonal second partials in closed
form; a central-difference oracle (:func:`fd_partials`) is included so the
closed forms can be validated independently.  All evaluation routines are
pure functions and accept numpy arrays, so they are safe to call from any
number of workers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Support radius of the cos^4 bump profile.
BUMP_RADIUS = math.pi / 2.0

TRANSLATED_BUMP = "translated_bump"
STATIC_BUMP = "static_bump"
SHELL_WAVE = "shell_wave"

_FAMILIES = (TRANSLATED_BUMP, STATIC_BUMP, SHELL_WAVE)

# Fraction of the shell profile width below which the regular rho -> 0
# limit replaces the 1/rho form (avoids 0/0 without measurable error).
_SHELL_RHO_CUTOFF = 1e-6


@dataclass(frozen=True)
class SpaceTimePoint:
    """Evaluation coordinate: spatial position plus time."""

    x: float = 0.0
    y: float = 0.0
    z: float = 0.0
    t: float = 0.0

    def __post_init__(self):
        for name in ("x", "y", "z", "t"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"non-finite coordinate {name!r}")

    @property
    def position(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def shifted(self, dx=0.0, dy=0.0, dz=0.0, dt=0.0) -> "SpaceTimePoint":
        return SpaceTimePoint(self.x + dx, self.y + dy, self.z + dz, self.t + dt)


@dataclass(frozen=True)
class FieldSpec:
    """Declarative description of one analytic test field.

    ``v`` and ``center`` only apply to the bump families; the ``shell_*``
    parameters and ``switch_window`` only apply to the shell wave.  A
    ``switch_window`` of ``None`` means the shell is on at all times.
    """

    family: str
    c: float = 1.0
    v: float = 0.0
    center: tuple = (0.0, 0.0, 0.0)
    shell_radius: float = 6.0
    shell_width: float = 1.0
    switch_window: tuple | None = None

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown field family {self.family!r}")
        if not (math.isfinite(self.c) and self.c != 0.0):
            raise ValueError("wave-speed constant c must be finite and nonzero")
        if self.family == TRANSLATED_BUMP and abs(self.v) >= abs(self.c):
            # |v| < c is required for the finite retarded-support bound.
            raise ValueError("translation speed must satisfy |v| < c")
        if self.family == SHELL_WAVE:
            if self.shell_width <= 0.0:
                raise ValueError("shell profile width must be positive")
            if self.switch_window is not None:
                t_on, t_off = self.switch_window
                if not t_on < t_off:
                    raise ValueError("switch window must satisfy t_on < t_off")

    @property
    def compact_support(self) -> bool:
        """True when the field vanishes outside a bounded spatial region."""
        if self.family == SHELL_WAVE:
            return False
        return True


def translated_bump(v: float = 0.5, c: float = 1.0) -> FieldSpec:
    return FieldSpec(family=TRANSLATED_BUMP, v=v, c=c)


def static_bump(center=(0.0, 0.0, 0.0), c: float = 1.0) -> FieldSpec:
    return FieldSpec(family=STATIC_BUMP, center=tuple(center), c=c)


def shell_wave(radius: float = 6.0, width: float = 1.0, c: float = 1.0,
               switch_window: tuple | None = None) -> FieldSpec:
    return FieldSpec(family=SHELL_WAVE, c=c, shell_radius=radius,
                     shell_width=width, switch_window=switch_window)


@dataclass(frozen=True)
class PartialBundle:
    """Field value with first and diagonal second partials at one point.

    Entries are floats for single-point evaluation and numpy arrays for
    batched evaluation.  For compact-support fields every entry is exactly
    zero outside the support.
    """

    f: object
    f_x: object
    f_y: object
    f_z: object
    f_t: object
    f_xx: object
    f_yy: object
    f_zz: object
    f_tt: object

    _ORDER = ("f", "f_x", "f_y", "f_z", "f_t", "f_xx", "f_yy", "f_zz", "f_tt")

    def as_array(self) -> np.ndarray:
        return np.stack([np.asarray(getattr(self, k), dtype=float)
                         for k in self._ORDER])

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.as_array())))

    def laplacian(self):
        return self.f_xx + self.f_yy + self.f_zz


def bump_profile(radius):
    """cos^4 radial profile: cos(r)^4 on r <= pi/2, identically 0 beyond."""
    r = np.asarray(radius, dtype=float)
    out = np.where(r <= BUMP_RADIUS, np.cos(r) ** 4, 0.0)
    return float(out) if out.ndim == 0 else out


def _radial_bump_terms(r):
    """Return (F'(r)/r, F''(r)) for F = cos^4 via double-angle forms.

    F = (3 + 4 cos 2r + cos 4r)/8, so F' = -sin 2r - sin(4r)/2 and
    F'' = -2 cos 2r - 2 cos 4r.  The sinc forms keep F'/r finite at r = 0
    (both expressions tend to -4 there).
    """
    g = -2.0 * np.sinc(2.0 * r / np.pi) - 2.0 * np.sinc(4.0 * r / np.pi)
    f2 = -2.0 * np.cos(2.0 * r) - 2.0 * np.cos(4.0 * r)
    return g, f2


def _static_bump_bundle(x, y, z):
    """Bundle of the static cos^4 bump in its own frame (center at 0)."""
    r2 = x * x + y * y + z * z
    r = np.sqrt(r2)
    inside = r <= BUMP_RADIUS
    g, f2 = _radial_bump_terms(r)

    f = np.where(inside, np.cos(r) ** 4, 0.0)
    f_x = np.where(inside, g * x, 0.0)
    f_y = np.where(inside, g * y, 0.0)
    f_z = np.where(inside, g * z, 0.0)

    # Direction cosines squared; the angular part drops out at the origin
    # where F'' - F'/r vanishes as well.
    zero = np.zeros_like(r2)
    nx2 = np.divide(x * x, r2, out=zero.copy(), where=r2 > 0.0)
    ny2 = np.divide(y * y, r2, out=zero.copy(), where=r2 > 0.0)
    nz2 = np.divide(z * z, r2, out=zero.copy(), where=r2 > 0.0)
    aniso = f2 - g
    f_xx = np.where(inside, g + aniso * nx2, 0.0)
    f_yy = np.where(inside, g + aniso * ny2, 0.0)
    f_zz = np.where(inside, g + aniso * nz2, 0.0)

    zeros = np.zeros_like(f)
    return PartialBundle(f=f, f_x=f_x, f_y=f_y, f_z=f_z, f_t=zeros,
                         f_xx=f_xx, f_yy=f_yy, f_zz=f_zz, f_tt=zeros)


def _shell_profile(u, center, width, order=0):
    """C3 compact radial profile g(u) = (1 - q^2)^4 with q=(u-center)/width.

    ``order`` selects g, g', g'' or g'''; all vanish at |q| = 1 so the
    composite shell field is C2 in space-time.
    """
    q = (np.asarray(u, dtype=float) - center) / width
    inside = np.abs(q) <= 1.0
    p = 1.0 - q * q
    if order == 0:
        val = p ** 4
    elif order == 1:
        val = -8.0 * q * p ** 3 / width
    elif order == 2:
        val = 8.0 * p * p * (7.0 * q * q - 1.0) / width ** 2
    elif order == 3:
        val = 48.0 * q * p * (3.0 - 7.0 * q * q) / width ** 3
    else:
        raise ValueError("profile derivatives available up to order 3")
    return np.where(inside, val, 0.0)


def _switch_terms(t, window):
    """Quintic smoothstep switch s(t) with s' and s'' (C2 overall)."""
    t = np.asarray(t, dtype=float)
    if window is None:
        one = np.ones_like(t)
        zero = np.zeros_like(t)
        return one, zero, zero
    t_on, t_off = window
    d = t_off - t_on
    tau = np.clip((t - t_on) / d, 0.0, 1.0)
    s = tau ** 3 * (10.0 - 15.0 * tau + 6.0 * tau * tau)
    s1 = 30.0 * tau ** 2 * (tau - 1.0) ** 2 / d
    s2 = 60.0 * tau * (2.0 * tau - 1.0) * (tau - 1.0) / d ** 2
    return s, s1, s2


def _shell_bundle(spec, x, y, z, t):
    c = spec.c
    u0, w = spec.shell_radius, spec.shell_width
    rho2 = x * x + y * y + z * z
    rho = np.sqrt(rho2)
    ct = c * np.asarray(t, dtype=float)

    plus = rho + ct    # incoming characteristic
    minus = ct - rho   # reflected outgoing characteristic
    p0 = _shell_profile(plus, u0, w)
    p1 = _shell_profile(plus, u0, w, 1)
    p2 = _shell_profile(plus, u0, w, 2)
    m0 = _shell_profile(minus, u0, w)
    m1 = _shell_profile(minus, u0, w, 1)
    m2 = _shell_profile(minus, u0, w, 2)

    small = rho < _SHELL_RHO_CUTOFF * w
    safe = np.where(small, 1.0, rho)

    core = (p0 - m0) / safe
    core_r = (p1 + m1) / safe - (p0 - m0) / safe ** 2
    core_rr = (p2 - m2) / safe - 2.0 * (p1 + m1) / safe ** 2 \
        + 2.0 * (p0 - m0) / safe ** 3
    core_t = c * (p1 - m1) / safe
    core_tt = c * c * (p2 - m2) / safe

    # rho -> 0 limits from odd symmetry of the numerators.
    g1c = _shell_profile(ct, u0, w, 1)
    g2c = _shell_profile(ct, u0, w, 2)
    g3c = _shell_profile(ct, u0, w, 3)
    core = np.where(small, 2.0 * g1c, core)
    core_rr = np.where(small, (2.0 / 3.0) * g3c, core_rr)
    core_t = np.where(small, 2.0 * c * g2c, core_t)
    core_tt = np.where(small, 2.0 * c * c * g3c, core_tt)
    # H = core_r / rho stays finite; equals core_rr in the limit.
    h = np.where(small, (2.0 / 3.0) * g3c, core_r / safe)

    zero = np.zeros_like(rho2)
    nx2 = np.divide(x * x, rho2, out=zero.copy(), where=~small)
    ny2 = np.divide(y * y, rho2, out=zero.copy(), where=~small)
    nz2 = np.divide(z * z, rho2, out=zero.copy(), where=~small)

    s, s1, s2 = _switch_terms(t, spec.switch_window)

    f = s * core
    f_x = s * h * x
    f_y = s * h * y
    f_z = s * h * z
    f_xx = s * (core_rr * nx2 + h * (1.0 - nx2))
    f_yy = s * (core_rr * ny2 + h * (1.0 - ny2))
    f_zz = s * (core_rr * nz2 + h * (1.0 - nz2))
    f_t = s1 * core + s * core_t
    f_tt = s2 * core + 2.0 * s1 * core_t + s * core_tt
    return PartialBundle(f=f, f_x=f_x, f_y=f_y, f_z=f_z, f_t=f_t,
                         f_xx=f_xx, f_yy=f_yy, f_zz=f_zz, f_tt=f_tt)


def _bundle_arrays(spec, x, y, z, t) -> PartialBundle:
    x, y, z, t = np.broadcast_arrays(
        np.asarray(x, dtype=float), np.asarray(y, dtype=float),
        np.asarray(z, dtype=float), np.asarray(t, dtype=float))
    if spec.family == TRANSLATED_BUMP:
        b = _static_bump_bundle(x, y, z - spec.v * t)
        return PartialBundle(
            f=b.f, f_x=b.f_x, f_y=b.f_y, f_z=b.f_z,
            f_t=-spec.v * b.f_z,
            f_xx=b.f_xx, f_yy=b.f_yy, f_zz=b.f_zz,
            f_tt=spec.v ** 2 * b.f_zz)
    if spec.family == STATIC_BUMP:
        cx, cy, cz = spec.center
        return _static_bump_bundle(x - cx, y - cy, z - cz)
    return _shell_bundle(spec, x, y, z, t)


def _values_arrays(spec, x, y, z, t):
    """Field value only (cheap path used by the integration engines)."""
    x, y, z, t = np.broadcast_arrays(
        np.asarray(x, dtype=float), np.asarray(y, dtype=float),
        np.asarray(z, dtype=float), np.asarray(t, dtype=float))
    if spec.family == TRANSLATED_BUMP:
        r = np.sqrt(x * x + y * y + (z - spec.v * t) ** 2)
        return bump_profile(r)
    if spec.family == STATIC_BUMP:
        cx, cy, cz = spec.center
        r = np.sqrt((x - cx) ** 2 + (y - cy) ** 2 + (z - cz) ** 2)
        return bump_profile(r)
    c, u0, w = spec.c, spec.shell_radius, spec.shell_width
    rho = np.sqrt(x * x + y * y + z * z)
    ct = c * t
    small = rho < _SHELL_RHO_CUTOFF * w
    safe = np.where(small, 1.0, rho)
    core = (_shell_profile(rho + ct, u0, w)
            - _shell_profile(ct - rho, u0, w)) / safe
    core = np.where(small, 2.0 * _shell_profile(ct, u0, w, 1), core)
    s, _, _ = _switch_terms(t, spec.switch_window)
    return s * core


def field_value(spec: FieldSpec, p: SpaceTimePoint) -> float:
    """Evaluate the field at one space-time point."""
    return float(_values_arrays(spec, p.x, p.y, p.z, p.t))


def field_values(spec: FieldSpec, points, times) -> np.ndarray:
    """Vectorized field evaluation; ``points`` is (..., 3), ``times`` (...)."""
    pts = np.asarray(points, dtype=float)
    return np.asarray(_values_arrays(spec, pts[..., 0], pts[..., 1],
                                     pts[..., 2], times))


def field_partials(spec: FieldSpec, p: SpaceTimePoint) -> PartialBundle:
    """Exact value, first partials and diagonal second partials at a point."""
    b = _bundle_arrays(spec, p.x, p.y, p.z, p.t)
    return PartialBundle(*(float(getattr(b, k)) for k in PartialBundle._ORDER))


def field_partials_many(spec: FieldSpec, points, times) -> PartialBundle:
    """Vectorized :func:`field_partials` over arrays of points and times."""
    pts = np.asarray(points, dtype=float)
    return _bundle_arrays(spec, pts[..., 0], pts[..., 1], pts[..., 2], times)


def fd_partials(spec: FieldSpec, p: SpaceTimePoint, h: float = 1e-4) -> PartialBundle:
    """Central-difference estimate of :func:`field_partials`.

    Second-order accurate in ``h``: (f(p+h) - f(p-h)) / 2h for first
    partials, (f(p+h) - 2 f(p) + f(p-h)) / h^2 for the diagonal second
    partials, per spatial axis and time.  Serves as the independent oracle
    for the closed-form partials.
    """
    if h <= 0.0:
        raise ValueError("finite-difference step must be positive")
    f0 = field_value(spec, p)
    firsts = {}
    seconds = {}
    for axis in ("x", "y", "z", "t"):
        shift = {f"d{axis}": h}
        fp = field_value(spec, p.shifted(**shift))
        shift = {f"d{axis}": -h}
        fm = field_value(spec, p.shifted(**shift))
        firsts[axis] = (fp - fm) / (2.0 * h)
        seconds[axis] = (fp - 2.0 * f0 + fm) / (h * h)
    return PartialBundle(
        f=f0,
        f_x=firsts["x"], f_y=firsts["y"], f_z=firsts["z"], f_t=firsts["t"],
        f_xx=seconds["x"], f_yy=seconds["y"], f_zz=seconds["z"],
        f_tt=seconds["t"])
