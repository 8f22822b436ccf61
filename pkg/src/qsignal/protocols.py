"""The two collapse-driven signalling protocols and their audits.

Protocol 1: a particle prepared at site A (two-site basis A/B) is measured
by the sender with the nonlocal projector onto (|A>+|B>)/sqrt(2); whichever
branch the collapse picks, a subsequent check at site B fires with
probability 1/2, against exactly 0 when the sender stays idle.

Protocol 2: the sender performs a precision momentum measurement on a
narrow packet (width sigma), collapsing it onto a broad packet (width
sigma_bar > sigma); the receiver's window probability jumps from ~0 to the
spread value, independent of the measured momentum.

Trials are driven by seeded Monte Carlo with one independently derived
stream per trial, so any distribution of trials across workers reproduces
the serial run bit for bit.  Every probability the protocols claim is also
computed exactly over the measurement outcome tree, so acceptance never
rides on sampling noise.  The commutation audit checks the premise that
no-signalling rests on: commuting sender/receiver projectors leave the
receiver's exact marginal unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from qsignal.hilbert import (
    DimensionMismatch,
    NotProjector,
    Operator,
    StateVector,
    commutator,
    expectation,
    make_state,
    measure,
    projector_onto,
)
from qsignal.wavepacket import (
    DetectionWindow,
    NonPositiveWidth,
    WidthNotIncreased,
    detection_probability,
    momentum_collapse,
    position_gaussian,
    sample_momentum,
)

BASIS = ("A", "B")
STATE_A = make_state((1, 0), BASIS)
STATE_B = make_state((0, 1), BASIS)
SYMMETRIC_STATE = make_state((1, 1), BASIS)
ANTISYMMETRIC_STATE = make_state((1, -1), BASIS)
#: Sender's nonlocal projector onto (|A>+|B>)/sqrt(2).
NONLOCAL_PROJECTOR = projector_onto(SYMMETRIC_STATE)
#: Receiver's local projector onto |B>.
SITE_B_PROJECTOR = projector_onto(STATE_B)

_U64 = (1 << 64) - 1

# Confidence half-widths are quoted at 4 binomial sigmas throughout.
CONFIDENCE_SIGMAS = 4.0


class MismatchedReports(ValueError):
    """Reports compare different protocols or different parameters."""


def trial_stream(seed: int, index: int) -> np.random.Generator:
    """Independent random stream for one trial.

    Derived from (seed, index) alone, so a trial's draws do not depend on
    how trials are batched across workers.
    """
    return np.random.default_rng(np.random.SeedSequence((seed & _U64, index)))


def binomial_halfwidth(p: float, n: int) -> float:
    """4-sigma half-width of an n-trial binomial frequency around p."""
    return CONFIDENCE_SIGMAS * math.sqrt(p * (1.0 - p) / n)


@dataclass(frozen=True, slots=True)
class Protocol1Params:
    n_trials: int
    sender_acts: bool
    n_particles: int = 1
    seed: int = 0

    def __post_init__(self):
        if self.n_trials < 1:
            raise ValueError(f"n_trials must be >= 1, got {self.n_trials}")
        if self.n_particles < 1:
            raise ValueError(f"n_particles must be >= 1, got {self.n_particles}")


@dataclass(frozen=True, slots=True)
class Protocol2Params:
    sigma: float
    sigma_bar: float
    d: float
    k: float
    n_trials: int
    seed: int = 0

    def __post_init__(self):
        if self.sigma <= 0.0:
            raise NonPositiveWidth(f"sigma must be positive, got {self.sigma}")
        if self.k <= 0.0:
            raise ValueError(f"detector half-width k must be positive, got {self.k}")
        if self.sigma_bar <= self.sigma:
            raise WidthNotIncreased(
                f"sigma_bar {self.sigma_bar} must exceed sigma {self.sigma}"
            )
        if self.n_trials < 1:
            raise ValueError(f"n_trials must be >= 1, got {self.n_trials}")


@dataclass(frozen=True, slots=True)
class TrialRecord:
    trial_index: int
    intermediate_outcome: Optional[bool]  # protocol 1: sender branch (+ fired?)
    lam: Optional[float]                  # protocol 2: sampled momentum
    receiver_detected: bool
    receiver_probability: float           # Born value for this trial's state


@dataclass(frozen=True, slots=True)
class Protocol1Report:
    params: Protocol1Params
    analytic_probability: float    # exact outcome-tree P(receiver fires)
    empirical_probability: float
    n_detected: int
    ensemble_success: float        # P(at least one of n_particles fires)
    trials: tuple[TrialRecord, ...]


@dataclass(frozen=True, slots=True)
class Protocol2Report:
    params: Protocol2Params
    p_before: float       # receiver probability for the untouched packet
    p_after: float        # receiver probability after the momentum collapse
    empirical_rate: float
    n_detected: int
    lambda_spread: float  # max |P_after(lambda) - P_after(0)| over the run
    trials: tuple[TrialRecord, ...]


@dataclass(frozen=True, slots=True)
class SignallingReport:
    p_receiver_sender_acts: float
    p_receiver_sender_idle: float
    gap: float
    gap_confidence_halfwidth: float
    commutator_frobenius_norm: Optional[float]  # None: continuum operators


@dataclass(frozen=True, slots=True)
class CommutationAudit:
    commutator_norm: float
    premise_holds: bool
    p_receiver_sender_acts: float
    p_receiver_sender_idle: float
    marginal_difference: float


def receiver_marginals(A: Operator, B: Operator, state: StateVector):
    """Exact P(B fires) with and without a prior A measurement.

    Evaluated over the two-branch outcome tree without sampling:
    P(B | A first) = <s|A B A|s> + <s|(1-A) B (1-A)|s>, which needs no
    renormalization and handles zero-probability branches exactly.
    """
    v = state.amplitudes
    fired = A.entries @ v
    idle = v - fired
    with_sender = (
        float(np.vdot(fired, B.entries @ fired).real)
        + float(np.vdot(idle, B.entries @ idle).real)
    )
    without_sender = float(np.vdot(v, B.entries @ v).real)
    return with_sender, without_sender


def run_protocol1(params: Protocol1Params) -> Protocol1Report:
    """Monte Carlo the nonlocal-projector protocol.

    Each trial starts at |A>; if the sender acts it measures the nonlocal
    projector (branch recorded), then the receiver measures |B><B|.  The
    analytic probability comes from the exact outcome tree, not sampling.
    """
    if params.sender_acts:
        analytic, _ = receiver_marginals(NONLOCAL_PROJECTOR, SITE_B_PROJECTOR, STATE_A)
    else:
        analytic = expectation(SITE_B_PROJECTOR, STATE_A)
    records = []
    detected = 0
    for i in range(params.n_trials):
        rng = trial_stream(params.seed, i)
        state = STATE_A
        branch = None
        if params.sender_acts:
            intermediate = measure(state, NONLOCAL_PROJECTOR, rng)
            branch = intermediate.outcome
            state = intermediate.post_state
        final = measure(state, SITE_B_PROJECTOR, rng)
        receiver_probability = (
            final.probability if final.outcome else 1.0 - final.probability
        )
        detected += final.outcome
        records.append(
            TrialRecord(i, branch, None, final.outcome, receiver_probability)
        )
    return Protocol1Report(
        params=params,
        analytic_probability=analytic,
        empirical_probability=detected / params.n_trials,
        n_detected=detected,
        ensemble_success=ensemble_success(params.n_particles),
        trials=tuple(records),
    )


def ensemble_success(n_particles: int) -> float:
    """P(at least one of n independent protocol-1 particles reaches B)."""
    if n_particles < 1:
        raise ValueError(f"n_particles must be >= 1, got {n_particles}")
    return 1.0 - 0.5**n_particles


def run_protocol2(params: Protocol2Params) -> Protocol2Report:
    """Monte Carlo the momentum-spreading protocol.

    Per trial: sample the momentum outcome lambda from the narrow packet,
    collapse onto the broad packet, evaluate the receiver's window
    probability for that lambda, and sample the detection.  The spread of
    the per-lambda probabilities is reported; it is zero because the
    collapsed density does not involve lambda.
    """
    window = DetectionWindow(params.d, params.k)
    packet = position_gaussian(params.sigma)
    p_before = detection_probability(packet, window)
    p_after = detection_probability(
        momentum_collapse(packet, 0.0, params.sigma_bar), window
    )
    records = []
    detected = 0
    spread = 0.0
    for i in range(params.n_trials):
        rng = trial_stream(params.seed, i)
        lam = sample_momentum(packet, rng)
        collapsed = momentum_collapse(packet, lam, params.sigma_bar)
        p_lam = detection_probability(collapsed, window)
        deviation = abs(p_lam - p_after)
        if deviation > spread:
            spread = deviation
        fired = rng.random() < p_lam
        detected += fired
        records.append(TrialRecord(i, None, lam, fired, p_lam))
    return Protocol2Report(
        params=params,
        p_before=p_before,
        p_after=p_after,
        empirical_rate=detected / params.n_trials,
        n_detected=detected,
        lambda_spread=spread,
        trials=tuple(records),
    )


def protocol1_commutator_norm() -> float:
    """Frobenius norm of the sender/receiver projector commutator."""
    comm = commutator(NONLOCAL_PROJECTOR, SITE_B_PROJECTOR)
    return float(np.linalg.norm(comm.entries))


def signalling_gap(report_acts, report_idle) -> SignallingReport:
    """Analytic sender-acts minus sender-idle receiver probability.

    Both reports must come from the same protocol with identical parameters
    apart from the sender action.  The attached half-width is the 4-sigma
    binomial uncertainty of the empirical gap estimate; the commutator norm
    is the sender/receiver projector commutator for protocol 1 and None for
    protocol 2, whose operators are continuum-valued.
    """
    if isinstance(report_acts, Protocol1Report) and isinstance(
        report_idle, Protocol1Report
    ):
        if replace(
            report_acts.params, sender_acts=report_idle.params.sender_acts
        ) != report_idle.params:
            raise MismatchedReports("protocol-1 parameters differ beyond sender action")
        p_acts = report_acts.analytic_probability
        p_idle = report_idle.analytic_probability
        halfwidth = math.sqrt(
            binomial_halfwidth(p_acts, report_acts.params.n_trials) ** 2
            + binomial_halfwidth(p_idle, report_idle.params.n_trials) ** 2
        )
        norm = protocol1_commutator_norm()
    elif isinstance(report_acts, Protocol2Report) and isinstance(
        report_idle, Protocol2Report
    ):
        if report_acts.params != report_idle.params:
            raise MismatchedReports("protocol-2 parameters differ")
        p_acts = report_acts.p_after
        p_idle = report_idle.p_before
        halfwidth = binomial_halfwidth(p_acts, report_acts.params.n_trials)
        norm = None
    else:
        raise MismatchedReports("reports come from different protocols")
    return SignallingReport(
        p_receiver_sender_acts=p_acts,
        p_receiver_sender_idle=p_idle,
        gap=p_acts - p_idle,
        gap_confidence_halfwidth=halfwidth,
        commutator_frobenius_norm=norm,
    )


def commutation_audit(
    A: Operator, B: Operator, state: StateVector, tol: float = 1e-12
) -> CommutationAudit:
    """Check the no-signalling premise [A, B] = 0 against exact marginals.

    ``premise_holds`` reflects the commutator norm alone; the marginal
    difference is computed exactly over the outcome tree, so commuting
    pairs show a difference of zero up to rounding.
    """
    if not A.is_projector() or not B.is_projector():
        raise NotProjector("commutation audit requires two projectors")
    if A.dimension != B.dimension:
        raise DimensionMismatch(f"dimensions {A.dimension} and {B.dimension} differ")
    if state.dimension != A.dimension:
        raise DimensionMismatch(
            f"state dimension {state.dimension} does not match {A.dimension}"
        )
    norm = float(np.linalg.norm(commutator(A, B).entries))
    with_sender, without_sender = receiver_marginals(A, B, state)
    return CommutationAudit(
        commutator_norm=norm,
        premise_holds=norm < tol,
        p_receiver_sender_acts=with_sender,
        p_receiver_sender_idle=without_sender,
        marginal_difference=with_sender - without_sender,
    )


def random_state(dimension: int, rng: np.random.Generator) -> StateVector:
    """Haar-ish random ket: normalized complex Gaussian amplitudes."""
    amps = rng.normal(size=dimension) + 1j * rng.normal(size=dimension)
    return make_state(amps, tuple(f"e{i}" for i in range(dimension)))


def _random_unitary(dimension: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.normal(size=(dimension, dimension)) + 1j * rng.normal(
        size=(dimension, dimension)
    )
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def _random_mask(dimension: int, rng: np.random.Generator) -> np.ndarray:
    # avoid the trivial all-0 / all-1 projectors
    while True:
        mask = rng.integers(0, 2, size=dimension)
        if 0 < mask.sum() < dimension:
            return mask


def random_commuting_projectors(
    dimension: int, rng: np.random.Generator
) -> tuple[Operator, Operator]:
    """Two projectors diagonal in one shared random orthonormal basis."""
    u = _random_unitary(dimension, rng)
    ops = []
    for _ in range(2):
        mask = _random_mask(dimension, rng)
        ops.append(Operator((u * mask) @ u.conj().T))
    return ops[0], ops[1]


def random_projector(dimension: int, rng: np.random.Generator) -> Operator:
    """Projector onto a random subspace of dimension 1..dimension-1."""
    rank = int(rng.integers(1, dimension))
    z = rng.normal(size=(dimension, rank)) + 1j * rng.normal(size=(dimension, rank))
    q, _ = np.linalg.qr(z)
    return Operator(q @ q.conj().T)
