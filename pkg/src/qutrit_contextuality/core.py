"""Dense 3x3 linear algebra for a single qutrit.

All matrices are written in the basis ``{|+1>, |0>, |-1>}`` (levels 1, 2, 3).
Operators are plain ``numpy`` arrays of shape ``(3, 3)``; states carry
validation and are immutable once built.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ATOL = 1e-12
PSD_ATOL = 1e-10
IMAG_ATOL = 1e-10

SQRT2 = np.sqrt(2.0)
SQRT3 = np.sqrt(3.0)
IDENTITY = np.eye(3, dtype=complex)
BASIS_LABELS = ("+1", "0", "-1")


class ValidationError(ValueError):
    """Input violates a physical or structural invariant."""


class DomainError(ValueError):
    """Argument outside the accepted domain (bad index, unknown name)."""


class ConsistencyError(RuntimeError):
    """A quantity that must be real or exact came out otherwise."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


def as_matrix3(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.shape != (3, 3):
        raise ValidationError(f"expected a 3x3 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError("matrix has non-finite entries")
    return m


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def is_hermitian(m, atol: float = ATOL) -> bool:
    m = as_matrix3(m)
    return bool(np.allclose(m, dagger(m), rtol=0.0, atol=atol))


def is_unitary(u, atol: float = PSD_ATOL) -> bool:
    u = as_matrix3(u)
    return bool(np.allclose(u @ dagger(u), IDENTITY, rtol=0.0, atol=atol))


def matrices_close(a, b, atol: float = ATOL) -> bool:
    return bool(np.allclose(as_matrix3(a), as_matrix3(b), rtol=0.0, atol=atol))


def _require_hermitian(m, what: str, atol: float = ATOL) -> np.ndarray:
    m = as_matrix3(m)
    if not is_hermitian(m, atol):
        raise ValidationError(f"{what} is not Hermitian")
    return m


def _build_gell_mann() -> tuple[np.ndarray, ...]:
    g = np.zeros((8, 3, 3), dtype=complex)
    g[0][0, 1] = g[0][1, 0] = 1
    g[1][0, 1], g[1][1, 0] = -1j, 1j
    g[2] = np.diag([1, -1, 0])
    g[3][0, 2] = g[3][2, 0] = 1
    g[4][0, 2], g[4][2, 0] = -1j, 1j
    g[5][1, 2] = g[5][2, 1] = 1
    g[6][1, 2], g[6][2, 1] = -1j, 1j
    g[7] = np.diag([1, 1, -2]) / SQRT3
    return tuple(_frozen(m) for m in g)


_GELL_MANN = _build_gell_mann()


def gell_mann(index: int) -> np.ndarray:
    """Return the Gell-Mann matrix ``Lambda_index`` for ``index`` in 1..8."""
    if isinstance(index, bool) or not isinstance(index, (int, np.integer)) or not 1 <= index <= 8:
        raise DomainError(f"Gell-Mann index must be an integer in 1..8, got {index!r}")
    return _GELL_MANN[int(index) - 1]


def gell_mann_basis() -> np.ndarray:
    """All eight matrices stacked, shape ``(8, 3, 3)``."""
    return np.array(_GELL_MANN)


def decompose(m, atol: float = ATOL) -> tuple[float, np.ndarray]:
    """Split a Hermitian matrix into ``identity_coeff * I + sum_i c_i Lambda_i``.

    Returns ``(identity_coeff, c)`` with ``c`` a real array of length 8.
    """
    m = _require_hermitian(m, "matrix", atol)
    identity_coeff = float(np.trace(m).real) / 3.0
    coeffs = np.array([np.trace(m @ g).real / 2.0 for g in _GELL_MANN])
    return identity_coeff, coeffs


def reconstruct(coeffs, identity_coeff: float = 0.0) -> np.ndarray:
    c = np.asarray(coeffs, dtype=float)
    if c.shape != (8,):
        raise ValidationError(f"expected 8 Gell-Mann coefficients, got shape {c.shape}")
    return identity_coeff * IDENTITY + np.tensordot(c, gell_mann_basis(), axes=1)


def unitary_exp(generator, angle: float) -> np.ndarray:
    """``exp(i * angle * generator)`` for a Hermitian generator.

    Computed from the eigendecomposition, which is exact up to round-off for
    Hermitian input.
    """
    g = _require_hermitian(generator, "generator")
    g = 0.5 * (g + dagger(g))
    vals, vecs = np.linalg.eigh(g)
    return (vecs * np.exp(1j * angle * vals)) @ dagger(vecs)


def conjugate(u, m) -> np.ndarray:
    """``u m u^dagger``."""
    return u @ m @ dagger(u)


def ket(amplitudes, atol: float = ATOL) -> np.ndarray:
    v = np.asarray(amplitudes, dtype=complex)
    if v.shape != (3,):
        raise ValidationError(f"a qutrit ket has 3 amplitudes, got shape {v.shape}")
    if abs(np.linalg.norm(v) - 1.0) > atol:
        raise ValidationError(f"ket is not normalized (norm {np.linalg.norm(v)!r})")
    v = v.copy()
    v.setflags(write=False)
    return v


@dataclass(frozen=True, eq=False)
class DeviationMatrix:
    """Traceless Hermitian part of a state, ``rho - I/3`` up to scale.

    Not required to correspond to a positive state.
    """

    m: np.ndarray

    def __post_init__(self):
        m = _require_hermitian(self.m, "deviation matrix")
        if abs(np.trace(m)) > ATOL:
            raise ValidationError(f"deviation matrix must be traceless, trace = {np.trace(m)!r}")
        object.__setattr__(self, "m", _frozen(m))

    @classmethod
    def diagonal(cls, p: float, q: float, r: float | None = None) -> "DeviationMatrix":
        if r is None:
            r = -(p + q)
        return cls(np.diag([p, q, r]).astype(complex))

    def to_state(self) -> "QutritState":
        return QutritState(IDENTITY / 3 + self.m)


@dataclass(frozen=True, eq=False)
class QutritState:
    """Density matrix of a qutrit: Hermitian, unit trace, positive semidefinite."""

    rho: np.ndarray

    def __post_init__(self):
        rho = as_matrix3(self.rho)
        if not is_hermitian(rho):
            raise ValidationError("density matrix is not Hermitian")
        tr = np.trace(rho)
        if abs(tr - 1.0) > ATOL:
            raise ValidationError(f"density matrix trace is {tr.real!r}, expected 1")
        lo = np.linalg.eigvalsh(0.5 * (rho + dagger(rho))).min()
        if lo < -PSD_ATOL:
            raise ValidationError(f"density matrix is not positive semidefinite (min eigenvalue {lo:.3e})")
        object.__setattr__(self, "rho", _frozen(rho))

    @classmethod
    def from_deviation(cls, deviation, scale: float = 1.0) -> "QutritState":
        if isinstance(deviation, DeviationMatrix):
            deviation = deviation.m
        return cls(IDENTITY / 3 + scale * as_matrix3(deviation))

    @classmethod
    def from_ket(cls, amplitudes) -> "QutritState":
        v = ket(amplitudes)
        return cls(np.outer(v, np.conj(v)))

    @classmethod
    def maximally_mixed(cls) -> "QutritState":
        return cls(IDENTITY / 3)

    @property
    def deviation(self) -> DeviationMatrix:
        return DeviationMatrix(self.rho - IDENTITY / 3)

    def is_diagonal(self, atol: float = PSD_ATOL) -> bool:
        off = self.rho - np.diag(np.diag(self.rho))
        return bool(np.abs(off).max() <= atol)

    def close_to(self, other: "QutritState", atol: float = ATOL) -> bool:
        return matrices_close(self.rho, other.rho, atol)

    def evolve(self, u) -> "QutritState":
        return QutritState(hermitize(conjugate(u, self.rho)))


def hermitize(m) -> np.ndarray:
    """Strip round-off anti-Hermitian residue."""
    return 0.5 * (m + dagger(m))


def expectation(state: QutritState, obs) -> float:
    """``tr(rho obs)`` for a Hermitian observable."""
    obs = _require_hermitian(obs, "observable")
    value = np.trace(state.rho @ obs)
    if abs(value.imag) >= IMAG_ATOL:
        raise ConsistencyError(f"expectation has imaginary part {value.imag:.3e}")
    return float(value.real)


def random_state(seed: int) -> QutritState:
    """Seeded random full-rank state from a Ginibre matrix ``G G^dagger / tr``."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    rho = g @ dagger(g)
    rho = hermitize(rho / np.trace(rho).real)
    return QutritState(rho)


def random_hermitian(seed: int, scale: float = 1.0) -> np.ndarray:
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    return scale * hermitize(a)


def random_unitary(seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))
