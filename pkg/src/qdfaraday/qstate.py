"""Small pure-state toolkit for one photon and a register of electron spins.

Joint states live on {R, L} x (spin qubit)^n. The photon bit is the most
significant index bit (0 = R, 1 = L), followed by the spin bits in node
order (0 = up, 1 = down). Spin registers use the same ordering with the
photon bit removed, so spin 0 is the most significant bit.

Everything here is an immutable value and every function is pure.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    BadPartition,
    DimensionMismatch,
    NegligibleProbability,
    TooManySpins,
    WrongArity,
    ZeroNormState,
)

MAX_SPINS = 12
NORM_TOL = 1e-10
PROBABILITY_FLOOR = 1e-12
_ZERO_NORM = 1e-15


def _frozen(vec) -> np.ndarray:
    arr = np.array(vec, dtype=np.complex128)
    arr.setflags(write=False)
    return arr


def _check_finite(vec: np.ndarray) -> None:
    if not np.all(np.isfinite(vec)):
        raise ValueError("amplitudes must be finite")


@dataclass(frozen=True)
class SpinState:
    """Electron spin qubit ``alpha|up> + beta|down>``, always normalized."""

    alpha: complex
    beta: complex

    def __post_init__(self):
        a, b = complex(self.alpha), complex(self.beta)
        _check_finite(np.array([a, b]))
        norm = abs(a) ** 2 + abs(b) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"SpinState is not normalized (norm^2 = {norm!r}); use make_spin_state")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)

    @property
    def vector(self) -> np.ndarray:
        return _frozen([self.alpha, self.beta])

    @property
    def p_up(self) -> float:
        return abs(self.alpha) ** 2

    @property
    def p_down(self) -> float:
        return abs(self.beta) ** 2


def make_spin_state(alpha: complex, beta: complex) -> SpinState:
    """Build a spin state from unnormalized amplitudes.

    >>> make_spin_state(3, 4j)
    SpinState(alpha=(0.6+0j), beta=0.8j)
    """
    a, b = complex(alpha), complex(beta)
    _check_finite(np.array([a, b]))
    norm2 = abs(a) ** 2 + abs(b) ** 2
    if not norm2 > _ZERO_NORM:
        raise ZeroNormState("spin amplitudes have (near) zero norm")
    scale = np.sqrt(norm2)
    return SpinState(a / scale, b / scale)


SPIN_UP = SpinState(1.0, 0.0)
SPIN_DOWN = SpinState(0.0, 1.0)


@dataclass(frozen=True)
class JointState:
    """Normalized photon + spin register amplitudes.

    ``survival`` carries the accumulated probability that the photon was not
    lost by the scattering steps applied so far (1 for lossless evolution).
    """

    n_spins: int
    amplitudes: np.ndarray = field(repr=False)
    survival: float = 1.0

    def __post_init__(self):
        amps = _frozen(self.amplitudes)
        if amps.ndim != 1 or amps.size != 2 ** (self.n_spins + 1):
            raise DimensionMismatch(
                f"expected {2 ** (self.n_spins + 1)} amplitudes for {self.n_spins} spins, got {amps.shape}"
            )
        _check_finite(amps)
        norm2 = float(np.vdot(amps, amps).real)
        if abs(norm2 - 1.0) > NORM_TOL:
            raise ValueError(f"JointState is not normalized (norm^2 = {norm2!r})")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def tensor(self) -> np.ndarray:
        """Amplitudes reshaped to one axis per qubit, photon axis first."""
        return self.amplitudes.reshape((2,) * (self.n_spins + 1))

    def with_amplitudes(self, amplitudes, survival=None) -> "JointState":
        return JointState(self.n_spins, amplitudes, self.survival if survival is None else survival)


@dataclass(frozen=True)
class PhotonBasis:
    label: str
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", _frozen(self.amplitudes))


_S = 1 / np.sqrt(2)
DEG0 = PhotonBasis("deg0", [_S, -_S])
DEG90 = PhotonBasis("deg90", [_S, _S])
PLUS45 = PhotonBasis("plus45", [_S, -1j * _S])
MINUS45 = PhotonBasis("minus45", [_S, 1j * _S])

BASES = {b.label: b for b in (DEG0, DEG90, PLUS45, MINUS45)}
BASIS_PAIRS = {
    "linear": (DEG0, DEG90),
    "diag": (PLUS45, MINUS45),
}

# Linearly polarized input photon, (|R> + |L>)/sqrt(2).
LINEAR_PHOTON = DEG90.amplitudes


def tensor_photon_spins(photon, spins: Sequence[SpinState]) -> JointState:
    """Product state ``photon (x) spin_1 (x) ... (x) spin_n``."""
    n = len(spins)
    if n < 1:
        raise ValueError("need at least one spin")
    if n > MAX_SPINS:
        raise TooManySpins(f"{n} spins requested, the cap is {MAX_SPINS}")
    vec = np.asarray(photon, dtype=np.complex128)
    if vec.shape != (2,):
        raise WrongArity("photon must be a 2-vector over (R, L)")
    if abs(np.vdot(vec, vec).real - 1.0) > NORM_TOL:
        raise ValueError("photon vector must have unit norm")
    for s in spins:
        vec = np.kron(vec, s.vector)
    return JointState(n, vec)


def project_photon(state: JointState, basis: PhotonBasis) -> tuple[float, np.ndarray]:
    """Project the photon onto ``basis``.

    Returns the outcome probability and the renormalized spin register.
    Raises NegligibleProbability when the outcome is below the floor, since
    the post-measurement register is then undefined.
    """
    half = state.amplitudes.size // 2
    b = basis.amplitudes
    post = np.conj(b[0]) * state.amplitudes[:half] + np.conj(b[1]) * state.amplitudes[half:]
    prob = float(np.vdot(post, post).real)
    if prob <= PROBABILITY_FLOOR:
        raise NegligibleProbability(prob)
    return prob, _frozen(post / np.sqrt(prob))


def _register(vec, n_spins=None) -> tuple[np.ndarray, int]:
    arr = np.asarray(vec, dtype=np.complex128)
    if arr.ndim != 1 or arr.size < 2 or arr.size & (arr.size - 1):
        raise DimensionMismatch(f"register length {arr.size} is not a power of two")
    n = arr.size.bit_length() - 1
    if n_spins is not None and n != n_spins:
        raise WrongArity(f"expected a {n_spins}-spin register, got {n}")
    if abs(np.vdot(arr, arr).real - 1.0) > 1e-8:
        raise ValueError("register must have unit norm")
    return arr, n


def concurrence(two_spin_state) -> float:
    """Pure-state concurrence ``2|ad - bc|`` of a two-spin register."""
    arr = np.asarray(two_spin_state, dtype=np.complex128)
    if arr.shape != (4,):
        raise WrongArity(f"concurrence needs exactly 4 amplitudes, got {arr.shape}")
    arr, _ = _register(arr, 2)
    a, b, c, d = arr
    return float(min(1.0, 2 * abs(a * d - b * c)))


def reduced_density_matrix(state, keep: Sequence[int]) -> np.ndarray:
    arr, n = _register(state)
    keep = sorted(set(int(k) for k in keep))
    rest = [k for k in range(n) if k not in keep]
    psi = arr.reshape((2,) * n).transpose(keep + rest).reshape(2 ** len(keep), -1)
    return psi @ psi.conj().T


def entanglement_entropy(state, partition: Sequence[int]) -> float:
    """Von Neumann entropy (bits) of the spins in ``partition``.

    Spin indices are zero based and follow node order.
    """
    arr, n = _register(state)
    part = set(int(k) for k in partition)
    if not part or len(part) >= n or any(k < 0 or k >= n for k in part):
        raise BadPartition(f"partition {sorted(part)} is not a non-empty proper subset of {n} spins")
    keep = sorted(part)
    rest = [k for k in range(n) if k not in part]
    psi = arr.reshape((2,) * n).transpose(keep + rest).reshape(2 ** len(keep), -1)
    # Schmidt coefficients; squares are the reduced-state eigenvalues.
    p = np.linalg.svd(psi, compute_uv=False) ** 2
    p = p[p > 1e-300]
    s = float(-np.sum(p * np.log2(p)))
    return max(0.0, min(s, float(min(len(keep), len(rest)))))


def fidelity(a, b) -> float:
    """Overlap ``|<a|b>|^2`` of two pure registers."""
    va = np.asarray(a, dtype=np.complex128)
    vb = np.asarray(b, dtype=np.complex128)
    if va.shape != vb.shape:
        raise DimensionMismatch(f"cannot compare registers of shape {va.shape} and {vb.shape}")
    _register(va)
    _register(vb)
    return float(min(1.0, abs(np.vdot(va, vb)) ** 2))
