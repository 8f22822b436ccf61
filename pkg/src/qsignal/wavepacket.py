"""Gaussian wavepackets on a line, in position or momentum representation.

hbar = 1 throughout.  A position-representation packet of width w, centre c
and carried momentum k is

    psi(x) = (pi w^2)**-0.25 * exp(-(x - c)^2 / (2 w^2)) * exp(+1j k (x - c))

so its probability density exp(-(x-c)^2/w^2)/sqrt(pi w^2) does not depend
on k at all.  Widths are the 1/e half-widths of the amplitude envelope, not
standard deviations: the position variance of a width-w packet is w^2/2.

The Fourier convention is the unitary transform with kernel
exp(-1j p x)/sqrt(2 pi).  Under it a position packet (w, c, k) maps to the
momentum packet of width 1/w centred at k with conjugate phase
exp(-1j c p); applying the transform twice returns the parity-reflected
packet, which is the original for the centred packets used here.

GridWavefunction holds a uniformly sampled wavefunction and provides the
numerical cross-check path (discrete Fourier transform, window quadrature)
for the closed forms above.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

POSITION = "position"
MOMENTUM = "momentum"


class NonPositiveWidth(ValueError):
    """Packet widths must be strictly positive."""


class WrongRepresentation(ValueError):
    """Operation requires the other representation."""


class WidthNotIncreased(ValueError):
    """Collapse width must exceed the packet width (precision-measurement regime)."""


class ExtentTooSmall(ValueError):
    """Grid extent must cover at least 8 widths on each side of the centre."""


class BadGrid(ValueError):
    """Grid parameters are inconsistent or unusable."""


class WindowOutsideGrid(ValueError):
    """Detection window does not intersect the grid."""


@dataclass(frozen=True, slots=True)
class GaussianPacket:
    """Analytic Gaussian wavefunction; normalization is implied, never stored.

    ``width`` and ``center`` are in the representation's own variable.
    ``momentum_center`` is the centre in the conjugate variable: the carried
    momentum k of a position packet, or the conjugate position phase centre
    of a momentum packet (zero for every state this package constructs).
    """

    width: float
    center: float
    momentum_center: float
    representation: str = POSITION

    def __post_init__(self):
        if self.width <= 0.0:
            raise NonPositiveWidth(f"width must be positive, got {self.width}")
        if self.representation not in (POSITION, MOMENTUM):
            raise ValueError(f"unknown representation {self.representation!r}")

    def amplitude(self, xs):
        """Complex wavefunction values at the given points."""
        xs = np.asarray(xs, dtype=float)
        envelope = (math.pi * self.width**2) ** -0.25 * np.exp(
            -((xs - self.center) ** 2) / (2.0 * self.width**2)
        )
        if self.representation == POSITION:
            return envelope * np.exp(1j * self.momentum_center * (xs - self.center))
        return envelope * np.exp(-1j * self.momentum_center * xs)

    def density(self, xs):
        """Probability density |psi|^2; independent of momentum_center."""
        xs = np.asarray(xs, dtype=float)
        return np.exp(-((xs - self.center) ** 2) / self.width**2) / math.sqrt(
            math.pi * self.width**2
        )


@dataclass(frozen=True, slots=True)
class DetectionWindow:
    """Receiver detects the particle inside [d - k, d + k]."""

    d: float
    k: float

    def __post_init__(self):
        if self.k <= 0.0:
            raise ValueError(f"detector half-width k must be positive, got {self.k}")

    @property
    def lo(self) -> float:
        return self.d - self.k

    @property
    def hi(self) -> float:
        return self.d + self.k


def _trapezoid_weights(n: int, spacing: float) -> np.ndarray:
    w = np.full(n, spacing)
    w[0] = w[-1] = spacing / 2.0
    return w


@dataclass(frozen=True, slots=True)
class GridWavefunction:
    """Complex wavefunction sampled on a uniform grid, unit trapezoid norm."""

    samples: np.ndarray
    x_min: float
    x_max: float
    spacing: float

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.complex128)
        object.__setattr__(self, "samples", samples)
        n = samples.size
        if samples.ndim != 1 or n < 2:
            raise BadGrid("grid needs at least 2 samples")
        if not self.x_max > self.x_min:
            raise BadGrid(f"x_max {self.x_max} must exceed x_min {self.x_min}")
        implied = (self.x_max - self.x_min) / (n - 1)
        if abs(self.spacing - implied) > 1e-9 * implied:
            raise BadGrid(f"spacing {self.spacing} inconsistent with extent/{n - 1}")
        norm = math.sqrt(
            float(np.sum(_trapezoid_weights(n, self.spacing) * np.abs(samples) ** 2))
        )
        if abs(norm - 1.0) > 1e-10:
            raise BadGrid(f"discrete norm {norm} is not 1 within 1e-10")

    @property
    def size(self) -> int:
        return self.samples.size

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.samples.size)

    def norm(self) -> float:
        w = _trapezoid_weights(self.samples.size, self.spacing)
        return math.sqrt(float(np.sum(w * np.abs(self.samples) ** 2)))


def position_gaussian(sigma: float, lam: float = 0.0) -> GaussianPacket:
    """Centred position packet of width sigma carrying momentum lam."""
    if sigma <= 0.0:
        raise NonPositiveWidth(f"sigma must be positive, got {sigma}")
    return GaussianPacket(sigma, 0.0, lam, POSITION)


def analytic_fourier(p: GaussianPacket) -> GaussianPacket:
    """Closed-form unitary Fourier transform of a Gaussian packet.

    Width inverts and the two centres swap; a second application yields the
    parity-reflected packet (both centres negated).
    """
    if p.representation == POSITION:
        return GaussianPacket(1.0 / p.width, p.momentum_center, p.center, MOMENTUM)
    return GaussianPacket(1.0 / p.width, -p.momentum_center, -p.center, POSITION)


def detection_probability(p: GaussianPacket, w: DetectionWindow) -> float:
    """Probability the packet's density lands inside the window.

    0.5*(erf((hi-c)/width) - erf((lo-c)/width)); manifestly independent of
    the carried momentum.
    """
    if p.representation != POSITION:
        raise WrongRepresentation("detection window applies to position packets")
    return 0.5 * (
        math.erf((w.hi - p.center) / p.width) - math.erf((w.lo - p.center) / p.width)
    )


def sample_momentum(p: GaussianPacket, rng) -> float:
    """Draw one momentum from the packet's Born momentum density.

    For a width-sigma position packet that density is a normal law of
    standard deviation 1/(sigma*sqrt(2)) around the carried momentum.
    """
    if p.representation != POSITION:
        raise WrongRepresentation("sample_momentum expects a position packet")
    return float(rng.normal(p.momentum_center, 1.0 / (p.width * math.sqrt(2.0))))


def momentum_collapse(
    p: GaussianPacket, lam: float, sigma_bar: float
) -> GaussianPacket:
    """Collapse after a precision momentum measurement with outcome lam.

    The post-measurement state is a width-sigma_bar position packet carrying
    momentum lam (momentum-space width 1/sigma_bar around lam); its density
    does not depend on lam.
    """
    if p.representation != POSITION:
        raise WrongRepresentation("momentum_collapse expects a position packet")
    if sigma_bar <= p.width:
        raise WidthNotIncreased(
            f"sigma_bar {sigma_bar} must exceed the packet width {p.width}"
        )
    return GaussianPacket(sigma_bar, p.center, lam, POSITION)


def variance_position(p: GaussianPacket) -> float:
    if p.representation == POSITION:
        return p.width**2 / 2.0
    return 1.0 / (2.0 * p.width**2)


def variance_momentum(p: GaussianPacket) -> float:
    if p.representation == POSITION:
        return 1.0 / (2.0 * p.width**2)
    return p.width**2 / 2.0


def to_grid(p: GaussianPacket, x_min: float, x_max: float, n: int) -> GridWavefunction:
    """Sample the packet (phase included) on n uniform points, renormalized.

    The extent must cover at least 8 widths on each side of the centre so
    the truncated tails stay below ~1e-13 of the peak.
    """
    if n < 16:
        raise BadGrid(f"need at least 16 samples, got {n}")
    if not x_max > x_min:
        raise BadGrid(f"x_max {x_max} must exceed x_min {x_min}")
    if x_min > p.center - 8.0 * p.width or x_max < p.center + 8.0 * p.width:
        raise ExtentTooSmall(
            f"[{x_min}, {x_max}] must cover 8 widths around centre {p.center}"
        )
    xs = np.linspace(x_min, x_max, n)
    spacing = (x_max - x_min) / (n - 1)
    samples = p.amplitude(xs)
    norm = math.sqrt(
        float(np.sum(_trapezoid_weights(n, spacing) * np.abs(samples) ** 2))
    )
    return GridWavefunction(samples / norm, x_min, x_max, spacing)


def grid_fourier(g: GridWavefunction) -> GridWavefunction:
    """Unitary discrete Fourier transform mapped to physical momentum samples.

    Approximates psi_hat(p) = (2 pi)**-0.5 * integral psi(x) exp(-1j p x) dx
    on the reciprocal grid p_m = (m - n/2) * 2 pi/(n dx).  The pre/post
    phase factors account for the grid origins, so the result matches the
    continuous transform rather than the bare FFT; the map preserves the
    discrete norm (Parseval).
    """
    n = g.size
    if n & (n - 1) != 0:
        raise BadGrid(f"grid length {n} is not a power of two")
    dx = g.spacing
    dp = 2.0 * math.pi / (n * dx)
    p0 = -(n // 2) * dp
    ps = p0 + dp * np.arange(n)
    modulated = g.samples * np.exp(-1j * p0 * dx * np.arange(n))
    transformed = (
        dx / math.sqrt(2.0 * math.pi) * np.exp(-1j * g.x_min * ps) * np.fft.fft(modulated)
    )
    return GridWavefunction(transformed, p0, p0 + (n - 1) * dp, dp)


def grid_window_probability(g: GridWavefunction, w: DetectionWindow) -> float:
    """Integrate |psi|^2 over the window by composite trapezoid.

    The window is clipped to the grid; the fractional end cells use the
    linear interpolant of the density, so sub-cell window edges are handled
    exactly at trapezoid order.
    """
    lo = max(w.lo, g.x_min)
    hi = min(w.hi, g.x_max)
    if lo > hi:
        raise WindowOutsideGrid(
            f"window [{w.lo}, {w.hi}] misses grid [{g.x_min}, {g.x_max}]"
        )
    xs = g.points
    density = np.abs(g.samples) ** 2
    inside = xs[(xs > lo) & (xs < hi)]
    nodes = np.concatenate(([lo], inside, [hi]))
    values = np.interp(nodes, xs, density)
    return float(np.trapz(values, nodes))
