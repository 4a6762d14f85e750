"""Idealized spin-1 NMR dynamics.

Pulses are instantaneous rotations, selective on one transition (``"1-2"`` or
``"2-3"``) or non-selective (``"all"``). A gradient crusher zeroes every
coherence. Relaxation returns populations to thermal equilibrium with time
constant ``t1`` and damps coherences with ``t2``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal, Union

import numpy as np

from .core import (
    IDENTITY,
    SQRT2,
    DomainError,
    QutritState,
    ValidationError,
    gell_mann,
    hermitize,
    unitary_exp,
)

Transition = Literal["1-2", "2-3", "all"]
Axis = Literal["x", "y"]

IZ = np.diag([1.0, 0.0, -1.0]).astype(complex)
IX = np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex) / SQRT2
IY = np.array([[0, -1j, 0], [1j, 0, -1j], [0, 1j, 0]], dtype=complex) / SQRT2

# sigma_x / sigma_y of each two-level subspace, embedded in 3x3 (a Gell-Mann matrix).
_SUBSPACE_PAULI = {
    ("1-2", "x"): 1,
    ("1-2", "y"): 2,
    ("2-3", "x"): 6,
    ("2-3", "y"): 7,
}
_SPIN_OPERATOR = {"x": IX, "y": IY}

# 936 Hz splitting between the two lines = 6 * lambda / (2 pi).
DEFAULT_LAMBDA_Q = 2 * math.pi * 936.0 / 6.0


@dataclass(frozen=True)
class SpinSystem:
    omega0: float = 0.0
    lambda_q: float = DEFAULT_LAMBDA_Q
    polarization: float = 1.0

    def __post_init__(self):
        if self.lambda_q == 0 or not math.isfinite(self.lambda_q):
            raise ValidationError("quadrupolar coupling must be finite and non-zero")
        if not math.isfinite(self.omega0):
            raise ValidationError("omega0 must be finite")
        if not 0 < self.polarization <= 1:
            raise ValidationError(f"polarization must lie in (0, 1], got {self.polarization!r}")


@dataclass(frozen=True)
class PulseEvent:
    transition: Transition
    axis: Axis
    flip_angle: float

    def __post_init__(self):
        if self.transition not in ("1-2", "2-3", "all"):
            raise DomainError(f"unknown transition {self.transition!r}")
        if self.axis not in ("x", "y"):
            raise DomainError(f"unknown axis {self.axis!r}")
        if not math.isfinite(self.flip_angle):
            raise ValidationError("flip angle must be finite")

    def unitary(self) -> np.ndarray:
        if self.transition == "all":
            return unitary_exp(_SPIN_OPERATOR[self.axis], -self.flip_angle)
        sigma = gell_mann(_SUBSPACE_PAULI[(self.transition, self.axis)])
        return unitary_exp(sigma, -self.flip_angle / 2)

    def inverse(self) -> "PulseEvent":
        return PulseEvent(self.transition, self.axis, -self.flip_angle)


@dataclass(frozen=True)
class GradientEvent:
    pass


@dataclass(frozen=True)
class RelaxationEvent:
    duration: float
    t1: float = 1.0
    t2: float = 1.0

    def __post_init__(self):
        if math.isnan(self.duration) or self.duration < 0:
            raise ValidationError(f"relaxation duration must be >= 0, got {self.duration!r}")
        if not (self.t1 > 0 and self.t2 > 0):
            raise ValidationError(f"t1 and t2 must be positive, got {self.t1!r}, {self.t2!r}")


@dataclass(frozen=True)
class FreePrecessionEvent:
    """Evolution under the spin Hamiltonian; never inserted implicitly."""

    duration: float


Event = Union[PulseEvent, GradientEvent, RelaxationEvent, FreePrecessionEvent]


@dataclass(frozen=True)
class PulseSequence:
    events: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "events", tuple(self.events))

    def __add__(self, other: "PulseSequence") -> "PulseSequence":
        return PulseSequence(self.events + other.events)

    def __len__(self):
        return len(self.events)

    def apply(self, state: QutritState, sys: SpinSystem | None = None) -> QutritState:
        return apply_sequence(state, self, sys)


def pulse(transition: Transition, axis: Axis, flip_angle: float) -> PulseEvent:
    return PulseEvent(transition, axis, flip_angle)


GRAD = GradientEvent()


def hamiltonian(sys: SpinSystem) -> np.ndarray:
    """``-omega0 I_z + lambda (3 I_z^2 - I^2)`` with ``I^2 = 2`` for spin 1."""
    return -sys.omega0 * IZ + sys.lambda_q * (3 * IZ @ IZ - 2 * IDENTITY)


def line_frequencies(sys: SpinSystem) -> tuple[float, float]:
    """Angular frequencies ``E2 - E1`` and ``E3 - E2`` of the two lines."""
    e = np.diag(hamiltonian(sys)).real
    return float(e[1] - e[0]), float(e[2] - e[1])


def thermal_state(sys: SpinSystem) -> QutritState:
    """High-temperature equilibrium, deviation proportional to ``I_z``."""
    return QutritState.from_deviation(IZ / 3, scale=sys.polarization)


def apply_pulse(state: QutritState, p: PulseEvent) -> QutritState:
    return state.evolve(p.unitary())


def apply_gradient(state: QutritState) -> QutritState:
    return QutritState(np.diag(np.diag(state.rho)))


def apply_relaxation(state: QutritState, r: RelaxationEvent, sys: SpinSystem) -> QutritState:
    pop_keep = math.exp(-r.duration / r.t1)
    coh_keep = math.exp(-r.duration / r.t2)
    rho = state.rho
    pops = np.diag(rho)
    target = np.diag(thermal_state(sys).rho)
    out = coh_keep * (rho - np.diag(pops)) + np.diag(pop_keep * pops + (1 - pop_keep) * target)
    return QutritState(hermitize(out))


def apply_free_precession(state: QutritState, duration: float, sys: SpinSystem) -> QutritState:
    return state.evolve(unitary_exp(hamiltonian(sys), -duration))


def apply_event(state: QutritState, event: Event, sys: SpinSystem | None = None) -> QutritState:
    if isinstance(event, PulseEvent):
        return apply_pulse(state, event)
    if isinstance(event, GradientEvent):
        return apply_gradient(state)
    if sys is None:
        raise ValidationError(f"{type(event).__name__} needs a SpinSystem")
    if isinstance(event, RelaxationEvent):
        return apply_relaxation(state, event, sys)
    if isinstance(event, FreePrecessionEvent):
        return apply_free_precession(state, event.duration, sys)
    raise DomainError(f"unknown event {event!r}")


def apply_sequence(state: QutritState, seq: PulseSequence, sys: SpinSystem | None = None) -> QutritState:
    for event in seq.events:
        state = apply_event(state, event, sys)
    return state


STATE_NAMES = ("PPS1", "PPS2", "PPS3", "SIGMA_X")

PREPARATION_SEQUENCES = {
    "PPS1": PulseSequence((pulse("2-3", "y", math.pi / 2), GRAD)),
    # Swapping the two transitions, (pi/2)^{2-3} Grad (pi)^{1-2}, gives the negated
    # deviation; see SWAPPED_PPS2.
    "PPS2": PulseSequence((pulse("1-2", "y", math.pi / 2), GRAD, pulse("2-3", "y", math.pi))),
    "PPS3": PulseSequence((pulse("1-2", "y", math.pi / 2), GRAD)),
    "SIGMA_X": PulseSequence((pulse("all", "y", math.pi / 2),)),
}

SWAPPED_PPS2 = PulseSequence((pulse("2-3", "y", math.pi / 2), GRAD, pulse("1-2", "y", math.pi)))

PRINTED_DEVIATIONS = {
    "PPS1": np.diag([2.0, -1.0, -1.0]).astype(complex) / 6,
    "PPS2": np.diag([1.0, -2.0, 1.0]).astype(complex) / 6,
    "PPS3": np.diag([1.0, 1.0, -2.0]).astype(complex) / 6,
    "SIGMA_X": np.array([[0, 1, 0], [1, 0, 1], [0, 1, 0]], dtype=complex) / (3 * SQRT2),
}
for _m in PRINTED_DEVIATIONS.values():
    _m.setflags(write=False)


def prepare(state_name: str, sys: SpinSystem | None = None) -> QutritState:
    """Run the named preparation sequence on the thermal state."""
    sys = SpinSystem() if sys is None else sys
    try:
        seq = PREPARATION_SEQUENCES[state_name]
    except KeyError:
        raise DomainError(f"unknown state {state_name!r}; expected one of {STATE_NAMES}") from None
    return apply_sequence(thermal_state(sys), seq, sys)


def diagonal_sequence(theta_p: float, theta_q: float) -> PulseSequence:
    return PulseSequence((pulse("1-2", "y", theta_p), GRAD, pulse("2-3", "y", theta_q), GRAD))


def _check_angle(name: str, angle: float) -> None:
    if not (0.0 <= angle <= math.pi):
        raise ValidationError(f"{name} must lie in [0, pi], got {angle!r}")


def prepare_diagonal(theta_p: float, theta_q: float, sys: SpinSystem | None = None) -> QutritState:
    sys = SpinSystem() if sys is None else sys
    _check_angle("theta_p", theta_p)
    _check_angle("theta_q", theta_q)
    return apply_sequence(thermal_state(sys), diagonal_sequence(theta_p, theta_q), sys)


def diagonal_populations(theta_p: float, theta_q: float, scaled: bool = True) -> tuple[float, float, float]:
    """Closed-form deviation ``(p, q, r)`` produced by :func:`diagonal_sequence`.

    ``scaled=True`` includes the 1/3 of the thermal deviation (what the pulse
    sequence actually yields at unit polarization); ``scaled=False`` drops it.
    """
    cp = math.cos(theta_p / 2) ** 2
    sp = math.sin(theta_p / 2) ** 2
    cq = math.cos(theta_q / 2) ** 2
    sq = math.sin(theta_q / 2) ** 2
    p = cp
    q = cq * sp - sq
    k = 1 / 3 if scaled else 1.0
    return k * p, k * q, -k * (p + q)
