"""Finite-dimensional state vectors, projectors, and Born-rule measurement.

Kets are dense complex amplitude vectors over an ordered tuple of basis
labels; operators are dense complex square matrices in the same basis.
Measurement is projective with instantaneous collapse: a projector P fires
on |s> with probability <s|P|s> and leaves P|s>/||P|s||, otherwise the
state collapses onto the complement (1-P)|s>/||(1-P)|s||.

All values are immutable after construction.  ``measure`` is the only
stochastic operation and draws from an explicitly passed stream, so
parallel callers stay reproducible by handing each call its own derived
stream.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

# Frobenius-norm gate for accepting a matrix as Hermitian / idempotent.
PROJECTOR_TOL = 1e-12

# Born values in [-CLAMP_TOL, 0) snap to 0 and (1, 1+CLAMP_TOL] to 1;
# anything further out is rejected before collapse can divide by ~0.
CLAMP_TOL = 1e-12

# A branch thinner than this is never sampled, so collapse never divides by
# a vanishing norm and repeating a measurement reproduces its outcome.
DEAD_BRANCH = 1e-15


class ZeroVector(ValueError):
    """Amplitudes with (near-)zero norm cannot define a state."""


class DimensionMismatch(ValueError):
    """Operands live in spaces of different dimension."""


class NotHermitian(ValueError):
    """Operator fails the Hermiticity gate."""


class NotProjector(ValueError):
    """Operator fails the projector gate (P^2 = P = P^dagger)."""


@dataclass(frozen=True, slots=True)
class StateVector:
    """Unit-norm ket over an ordered label basis.

    Direct construction demands already-normalized amplitudes; use
    :func:`make_state` to normalize arbitrary input.
    """

    amplitudes: np.ndarray
    basis_labels: tuple[str, ...]

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        labels = tuple(self.basis_labels)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "basis_labels", labels)
        if amps.ndim != 1 or amps.size < 1:
            raise DimensionMismatch("amplitudes must form a non-empty vector")
        if len(labels) != amps.size:
            raise DimensionMismatch(
                f"{amps.size} amplitudes but {len(labels)} basis labels"
            )
        if abs(math.sqrt(np.vdot(amps, amps).real) - 1.0) > 1e-12:
            raise ZeroVector("amplitudes are not unit norm; use make_state")

    @property
    def dimension(self) -> int:
        return self.amplitudes.size


@dataclass(eq=False)
class Operator:
    """Dense complex square matrix acting on :class:`StateVector` kets."""

    entries: np.ndarray
    dimension: int = field(init=False)
    # lazily cached gate results; None = not yet checked
    _hermitian: bool | None = field(default=None, init=False, repr=False)
    _projector: bool | None = field(default=None, init=False, repr=False)

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=np.complex128)
        if self.entries.ndim != 2 or self.entries.shape[0] != self.entries.shape[1]:
            raise DimensionMismatch(f"operator must be square, got {self.entries.shape}")
        self.dimension = self.entries.shape[0]

    def is_hermitian(self, tol: float = PROJECTOR_TOL) -> bool:
        if self._hermitian is None:
            e = self.entries
            self._hermitian = bool(np.linalg.norm(e - e.conj().T) < tol)
        return self._hermitian

    def is_projector(self, tol: float = PROJECTOR_TOL) -> bool:
        if self._projector is None:
            e = self.entries
            self._projector = bool(
                self.is_hermitian(tol) and np.linalg.norm(e @ e - e) < tol
            )
        return self._projector


@dataclass(frozen=True, slots=True)
class MeasurementResult:
    """Outcome of one projective measurement.

    ``probability`` is the Born probability of the branch that was actually
    realized (p for a firing, 1-p otherwise); ``post_state`` is the
    normalized collapsed ket.
    """

    outcome: bool
    probability: float
    post_state: StateVector


def identity(dimension: int) -> Operator:
    return Operator(np.eye(dimension, dtype=np.complex128))


def make_state(amplitudes: Sequence[complex], labels: Sequence[str]) -> StateVector:
    """Normalize amplitudes into a StateVector, preserving relative phases."""
    amps = np.asarray(amplitudes, dtype=np.complex128)
    labels = tuple(labels)
    if amps.ndim != 1 or amps.size != len(labels):
        raise DimensionMismatch(
            f"{amps.size} amplitudes but {len(labels)} basis labels"
        )
    norm = math.sqrt(np.vdot(amps, amps).real)
    if norm <= 1e-12:
        raise ZeroVector(f"amplitude norm {norm} is too small to normalize")
    return StateVector(amps / norm, labels)


def inner(a: StateVector, b: StateVector) -> complex:
    """<a|b>, conjugate-linear in the first argument."""
    if a.dimension != b.dimension:
        raise DimensionMismatch(f"dimensions {a.dimension} and {b.dimension} differ")
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def projector_onto(s: StateVector) -> Operator:
    """Rank-one projector |s><s|."""
    return Operator(np.outer(s.amplitudes, s.amplitudes.conj()))


def _clamp_probability(p: float) -> float:
    if p < 0.0:
        if p < -CLAMP_TOL:
            raise ValueError(f"Born value {p} is below -{CLAMP_TOL}")
        return 0.0
    if p > 1.0:
        if p > 1.0 + CLAMP_TOL:
            raise ValueError(f"Born value {p} is above 1+{CLAMP_TOL}")
        return 1.0
    return p


def expectation(P: Operator, s: StateVector) -> float:
    """<s|P|s> as a real number; clamped to [0, 1] when P is a projector."""
    if P.dimension != s.dimension:
        raise DimensionMismatch(f"dimensions {P.dimension} and {s.dimension} differ")
    if not P.is_hermitian():
        raise NotHermitian("expectation requires a Hermitian operator")
    val = float(np.vdot(s.amplitudes, P.entries @ s.amplitudes).real)
    if P.is_projector():
        val = _clamp_probability(val)
    return val


def _collapse(raw: np.ndarray, labels: tuple[str, ...]) -> StateVector:
    return StateVector(raw / math.sqrt(np.vdot(raw, raw).real), labels)


def measure(s: StateVector, P: Operator, rng) -> MeasurementResult:
    """Projectively measure P on |s>, collapsing onto the realized branch.

    The firing branch is drawn with Born probability p = <s|P|s>.  When p
    is exactly 0 or 1 after clamping the deterministic branch is returned
    without consuming randomness; a branch thinner than ``DEAD_BRANCH`` is
    never sampled even though the stream is consumed.
    """
    if P.dimension != s.dimension:
        raise DimensionMismatch(f"dimensions {P.dimension} and {s.dimension} differ")
    if not P.is_projector():
        raise NotProjector("measure requires a projector (P^2 = P = P^dagger)")
    amps = s.amplitudes
    fired_amps = P.entries @ amps
    p = _clamp_probability(float(np.vdot(amps, fired_amps).real))
    if p == 0.0:
        return MeasurementResult(False, 1.0, _collapse(amps - fired_amps, s.basis_labels))
    if p == 1.0:
        return MeasurementResult(True, 1.0, _collapse(fired_amps, s.basis_labels))
    fired = rng.random() < p
    if p < DEAD_BRANCH:
        fired = False
    elif 1.0 - p < DEAD_BRANCH:
        fired = True
    if fired:
        return MeasurementResult(True, p, _collapse(fired_amps, s.basis_labels))
    return MeasurementResult(False, 1.0 - p, _collapse(amps - fired_amps, s.basis_labels))


def commutator(X: Operator, Y: Operator) -> Operator:
    """[X, Y] = XY - YX."""
    if X.dimension != Y.dimension:
        raise DimensionMismatch(f"dimensions {X.dimension} and {Y.dimension} differ")
    return Operator(X.entries @ Y.entries - Y.entries @ X.entries)


def frobenius_distance(X: Operator, Y: Operator) -> float:
    if X.dimension != Y.dimension:
        raise DimensionMismatch(f"dimensions {X.dimension} and {Y.dimension} differ")
    return float(np.linalg.norm(X.entries - Y.entries))
