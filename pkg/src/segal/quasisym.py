"""Quasisymmetry bounds, the corner-introducing radial map, and the smooth
annulus twist.

Circle maps are handled through lifts: a map of the unit circle is the
function theta -> psi(theta) on [0, 2pi] with psi(2pi) = psi(0) + 2pi and
positive derivative.
"""

from __future__ import annotations

import bisect
import cmath
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DomainError, InvalidPhi, JacobianDegenerate, NonMonotone

TWO_PI = 2.0 * math.pi


# ---------------------------------------------------------------------------
# sampled increasing functions and the symmetric-ratio bound


@dataclass(frozen=True)
class SampledIncreasingFunction:
    """Strictly increasing samples (xs[i], ys[i]), at least three of them."""

    xs: tuple[float, ...]
    ys: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "xs", tuple(float(x) for x in self.xs))
        object.__setattr__(self, "ys", tuple(float(y) for y in self.ys))
        if len(self.xs) != len(self.ys):
            raise NonMonotone("sample lists differ in length")
        if len(self.xs) < 3:
            raise NonMonotone("need at least three samples")
        for name, vals in (("xs", self.xs), ("ys", self.ys)):
            if any(not a < b for a, b in zip(vals, vals[1:])):
                raise NonMonotone(f"{name} not strictly increasing")

    @classmethod
    def from_callable(
        cls, f: Callable[[float], float], lo: float, hi: float, n: int
    ) -> "SampledIncreasingFunction":
        xs = [lo + (hi - lo) * j / n for j in range(n + 1)]
        return cls(tuple(xs), tuple(f(x) for x in xs))

    def inverted(self) -> "SampledIncreasingFunction":
        return SampledIncreasingFunction(self.ys, self.xs)


def qs_bound(h: SampledIncreasingFunction) -> float:
    """Largest symmetric difference-ratio distortion over sampled triples.

    Scans every triple (x - t, x, x + t) whose three points all lie in the
    sample grid and returns max(rho, 1/rho) over the ratios
    rho = (h(x+t) - h(x)) / (h(x) - h(x-t)).  A certified lower bound for
    the true distortion, which is a supremum over a continuum.
    """
    xs, ys = h.xs, h.ys
    n = len(xs)
    span = xs[-1] - xs[0]
    tol = 1e-9 * span
    k = 1.0
    for i in range(1, n - 1):
        for j in range(i + 1, n):
            t = xs[j] - xs[i]
            target = xs[i] - t
            if target < xs[0] - tol:
                break
            m = bisect.bisect_left(xs, target - tol)
            if m >= n or abs(xs[m] - target) > tol:
                continue
            rho = (ys[j] - ys[i]) / (ys[i] - ys[m])
            k = max(k, rho, 1.0 / rho)
    return k


def sampled_identity(n: int = 256, lo: float = 0.0, hi: float = 1.0) -> SampledIncreasingFunction:
    return SampledIncreasingFunction.from_callable(lambda x: x, lo, hi, n)


def sampled_slope_break(k: float, n: int = 256) -> SampledIncreasingFunction:
    """h(x) = x for x <= 0 and k*x for x > 0, sampled on a symmetric grid."""
    if k <= 0:
        raise NonMonotone("slope must be positive")
    xs = [j / n for j in range(-n, n + 1)]
    ys = [x if x <= 0 else k * x for x in xs]
    return SampledIncreasingFunction(tuple(xs), tuple(ys))


def sampled_exp(t_max: float = 1.0, n: int = 256) -> SampledIncreasingFunction:
    xs = [-t_max + 2.0 * t_max * j / (2 * n) for j in range(2 * n + 1)]
    return SampledIncreasingFunction(tuple(xs), tuple(math.exp(x) for x in xs))


# ---------------------------------------------------------------------------
# circle diffeomorphisms


@dataclass(frozen=True)
class CircleDiffeo:
    """Orientation-preserving circle map given by a lift and its derivative.

    deriv_min/deriv_max are exact bounds when the builder knows them;
    otherwise they are estimated from a dense sample.
    """

    psi: Callable[[float], float]
    dpsi: Callable[[float], float]
    deriv_min: Optional[float] = None
    deriv_max: Optional[float] = None
    _validation_nodes: int = 4096

    def __post_init__(self):
        winding = self.psi(TWO_PI) - self.psi(0.0)
        if abs(winding - TWO_PI) > 1e-9:
            raise InvalidPhi(f"lift advances by {winding:.12g}, expected 2*pi")
        lo, hi = self.derivative_range()
        if lo <= 0.0:
            raise InvalidPhi(f"derivative reaches {lo:.6g} <= 0")

    def derivative_range(self) -> tuple[float, float]:
        if self.deriv_min is not None and self.deriv_max is not None:
            return self.deriv_min, self.deriv_max
        thetas = np.linspace(0.0, TWO_PI, self._validation_nodes, endpoint=False)
        vals = [self.dpsi(float(t)) for t in thetas]
        return min(vals), max(vals)

    def angle(self, theta: float) -> float:
        """Lift evaluated with 2*pi-periodic extension."""
        k = math.floor(theta / TWO_PI)
        return self.psi(theta - k * TWO_PI) + k * TWO_PI

    def __call__(self, w: complex) -> complex:
        r = abs(w)
        if r == 0.0:
            raise DomainError("circle map undefined at 0")
        theta = cmath.phase(w) % TWO_PI
        return cmath.exp(1j * self.angle(theta))


def circle_identity() -> CircleDiffeo:
    return CircleDiffeo(lambda t: t, lambda t: 1.0, 1.0, 1.0)


def circle_rotation(delta: float) -> CircleDiffeo:
    return CircleDiffeo(lambda t: t + delta, lambda t: 1.0, 1.0, 1.0)


def half_angle_piecewise() -> CircleDiffeo:
    """Half-speed on the upper semicircle, catching up below.

    Slopes: 1/2 on [0, pi], 1 on [pi, 3pi/2], 2 on [3pi/2, 2pi].  The total
    advance is 2*pi and the map restricted above equals the half-angle map.
    """

    def psi(t: float) -> float:
        if t <= math.pi:
            return 0.5 * t
        if t <= 1.5 * math.pi:
            return 0.5 * math.pi + (t - math.pi)
        return math.pi + 2.0 * (t - 1.5 * math.pi)

    def dpsi(t: float) -> float:
        if t <= math.pi:
            return 0.5
        if t <= 1.5 * math.pi:
            return 1.0
        return 2.0

    return CircleDiffeo(psi, dpsi, 0.5, 2.0)


def half_angle_smooth() -> CircleDiffeo:
    """Half-angle above, completed below by slope 3/2 - cos(2 theta).

    The completion joins the half-angle arc twice continuously
    differentiably and advances by 3*pi/2 over the lower semicircle.
    """

    def psi(t: float) -> float:
        if t <= math.pi:
            return 0.5 * t
        return 0.5 * math.pi + 1.5 * (t - math.pi) - 0.5 * math.sin(2.0 * t)

    def dpsi(t: float) -> float:
        if t <= math.pi:
            return 0.5
        return 1.5 - math.cos(2.0 * t)

    return CircleDiffeo(psi, dpsi, 0.5, 2.5)


# ---------------------------------------------------------------------------
# corner map


def _check_half_angle_above(phi: CircleDiffeo, tol: float = 1e-9) -> None:
    for theta in np.linspace(0.0, math.pi, 257):
        if abs(phi.psi(float(theta)) - 0.5 * float(theta)) > tol:
            raise InvalidPhi(
                f"upper-semicircle restriction differs from the half-angle map "
                f"at theta={float(theta):.6g}"
            )


def corner_transform(phi: CircleDiffeo) -> Callable[[complex], complex]:
    """The radial map z = r e^{i theta} -> sqrt(r) e^{i psi(theta)}."""
    _check_half_angle_above(phi)

    def sigma(z: complex) -> complex:
        r = abs(z)
        if r == 0.0:
            return 0.0
        theta = cmath.phase(z) % TWO_PI
        return math.sqrt(r) * cmath.exp(1j * phi.angle(theta))

    return sigma


def corner_dilatation(phi: CircleDiffeo) -> float:
    """Maximal distortion of the corner transform.

    In the orthonormal polar frames the radial stretch is 1/(2 sqrt(r)) and
    the tangential stretch psi'(theta)/sqrt(r), so the pointwise distortion
    is max(2 psi', 1/(2 psi')), independent of r.
    """
    lo, hi = phi.derivative_range()
    return max(2.0 * hi, 1.0 / (2.0 * lo))


def corner_map(
    phi: CircleDiffeo, points: Sequence[complex]
) -> tuple[list[complex], float]:
    sigma = corner_transform(phi)
    return [sigma(complex(z)) for z in points], corner_dilatation(phi)


# ---------------------------------------------------------------------------
# smooth twist


def bump(t: float) -> float:
    """Smooth monotone [0,1] -> [0,1] with all derivatives zero at the ends."""
    if not 0.0 <= t <= 1.0:
        raise DomainError(f"bump argument {t} outside [0, 1]")

    def f(s: float) -> float:
        return math.exp(-1.0 / s) if s > 0.0 else 0.0

    a = f(t)
    return a / (a + f(1.0 - t))


@dataclass(frozen=True)
class TwistMap:
    """Annulus self-map (r, theta) -> (r, angle(r, theta)).

    Interpolates the circle map at r = r1 to the identity at r = r2 along a
    path that is flat in r at both ends.  When the map does not fix the
    basepoint the path first unwinds the basepoint phase, then interpolates
    the recentred lifts.
    """

    phi: CircleDiffeo
    r1: float
    r2: float
    phase: float

    def _stage(self, r: float) -> float:
        if not self.r1 <= r <= self.r2:
            raise DomainError(f"radius {r} outside [{self.r1}, {self.r2}]")
        return (r - self.r1) / (self.r2 - self.r1)

    def angle(self, r: float, theta: float) -> float:
        t = self._stage(r)
        if t <= 0.5:
            return self.phi.angle(theta) - self.phase * bump(2.0 * t)
        s = bump(2.0 * t - 1.0)
        recentred = self.phi.angle(theta) - self.phase
        return (1.0 - s) * recentred + s * theta

    def angle_derivative(self, r: float, theta: float, h: float = 1e-6) -> float:
        return (self.angle(r, theta + h) - self.angle(r, theta - h)) / (2.0 * h)

    def __call__(self, z: complex) -> complex:
        r = abs(z)
        theta = cmath.phase(z) % TWO_PI
        return r * cmath.exp(1j * self.angle(r, theta))


@dataclass(frozen=True)
class TwistReport:
    inner_max_dev: float
    outer_max_dev: float
    min_jacobian: float
    endpoint_flatness: float
    rigid_rotation: bool
    phase: float


def smooth_twist(
    phi: CircleDiffeo,
    r1: float,
    r2: float,
    n_r: int = 33,
    n_theta: int = 64,
) -> tuple[TwistMap, TwistReport]:
    if not 0.0 < r1 < r2:
        raise DomainError("need 0 < r1 < r2")
    phase = phi.psi(0.0)
    twist = TwistMap(phi, r1, r2, phase)

    thetas = [TWO_PI * j / n_theta for j in range(n_theta)]
    radii = [r1 + (r2 - r1) * i / (n_r - 1) for i in range(n_r)]

    # Compared at the angle level: the complex round trip through phase
    # recovery costs an ulp and the rim agreement is meant to be exact.
    inner = max(abs(twist.angle(r1, t) - phi.angle(t)) for t in thetas)
    outer = max(abs(twist.angle(r2, t) - t) for t in thetas)

    min_jac = math.inf
    for r in radii:
        for t in thetas:
            d = twist.angle_derivative(r, t)
            min_jac = min(min_jac, d)
    if min_jac <= 0.0:
        raise JacobianDegenerate(f"sampled angular derivative reaches {min_jac:.6g}")

    # Rate of change in r near both rims; flat interpolation makes it tiny.
    dr = 1e-3 * (r2 - r1)
    flat = 0.0
    for t in thetas:
        flat = max(flat, abs(twist.angle(r1 + dr, t) - twist.angle(r1, t)) / dr)
        flat = max(flat, abs(twist.angle(r2, t) - twist.angle(r2 - dr, t)) / dr)

    recentred_dev = max(abs(phi.psi(float(t)) - phase - float(t)) for t in thetas)
    rigid = recentred_dev <= 1e-12

    report = TwistReport(
        inner_max_dev=inner,
        outer_max_dev=outer,
        min_jacobian=min_jac,
        endpoint_flatness=flat,
        rigid_rotation=rigid,
        phase=phase,
    )
    return twist, report
