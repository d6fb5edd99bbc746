"""Spin-photon phase gate, single-photon bus across nodes, and spin readout.

A linearly polarized photon is reflected by each node in turn. At every node
the (L, up) and (R, down) components meet the coupled ("hot") cavity and the
other two meet the empty ("cold") one. After the last node the photon is
measured in a pair of orthogonal polarizations, which leaves the spins in an
entangled state that depends on the outcome.

Two gate models are available. ``IdealMode`` is the lossless conditional
phase exp(i phi) on the hot components, with the common cold phase dropped.
``PhysicalMode`` multiplies by the exact hot and cold reflection
coefficients at a probe frequency; the norm lost to |r| < 1 is tracked as a
survival probability.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence, Union

import numpy as np

from . import cavity
from .cavity import CavityParams
from .errors import BadNodeIndex, BadWeights, NegligibleProbability, WrongArity
from .qstate import (
    BASIS_PAIRS,
    LINEAR_PHOTON,
    MAX_SPINS,
    JointState,
    PhotonBasis,
    SpinState,
    concurrence,
    entanglement_entropy,
    fidelity,
    project_photon,
    tensor_photon_spins,
)


@dataclass(frozen=True)
class IdealMode:
    phi: float = math.pi / 2

    def __post_init__(self):
        if not math.isfinite(self.phi):
            raise ValueError("phi must be finite")


@dataclass(frozen=True)
class PhysicalMode:
    omega: float

    def __post_init__(self):
        if not math.isfinite(self.omega):
            raise ValueError("omega must be finite")


ScatterMode = Union[IdealMode, PhysicalMode]


@dataclass(frozen=True)
class NodeConfig:
    params: CavityParams
    spin: SpinState


def gate_factors(mode: ScatterMode, params: CavityParams | None = None) -> tuple[complex, complex]:
    """``(hot, cold)`` multipliers one node applies to the photon components."""
    if isinstance(mode, IdealMode):
        return complex(np.exp(1j * mode.phi)), 1.0 + 0j
    if isinstance(mode, PhysicalMode):
        if params is None:
            raise ValueError("physical mode needs cavity params")
        hot = complex(cavity.hot_coefficient(params, mode.omega))
        cold = complex(cavity.cold_coefficient(params, mode.omega))
        return hot, cold
    raise TypeError(f"unknown scatter mode {mode!r}")


def scatter(state: JointState, node_index: int, mode: ScatterMode, params: CavityParams | None = None) -> JointState:
    """Reflect the photon off node ``node_index``.

    In physical mode the result is renormalized and its ``survival`` is the
    incoming survival times the squared norm that remained.
    """
    n = state.n_spins
    if not 0 <= node_index < n:
        raise BadNodeIndex(f"node index {node_index} out of range for {n} spins")
    hot, cold = gate_factors(mode, params)
    amps = np.array(state.amplitudes).reshape(2, 2**node_index, 2, 2 ** (n - 1 - node_index))
    # photon R=0/L=1 against spin up=0/down=1; the hot sectors are off-diagonal
    factors = np.array([[cold, hot], [hot, cold]])
    amps = amps * factors[:, None, :, None]
    out = amps.reshape(-1)
    if isinstance(mode, IdealMode):
        return state.with_amplitudes(out)
    kept = float(np.vdot(out, out).real)
    if kept <= 0:
        raise NegligibleProbability(kept, "photon fully lost on reflection")
    return state.with_amplitudes(out / math.sqrt(kept), survival=state.survival * kept)


@dataclass
class OutcomeResult:
    label: str
    probability: float
    post_spins: np.ndarray | None = None
    concurrence: float | None = None
    entropies: dict[str, float] = field(default_factory=dict)
    fidelity_vs_ideal: float | None = None


@dataclass
class ProtocolResult:
    n_spins: int
    basis_pair: str
    outcomes: dict[str, OutcomeResult]
    survival_probability: float
    output_state: JointState

    def __getitem__(self, label: str) -> OutcomeResult:
        return self.outcomes[label]

    @property
    def total_probability(self) -> float:
        return sum(o.probability for o in self.outcomes.values())


def _cut_label(cut) -> str:
    return ",".join(str(i) for i in cut)


def entropy_table(register: np.ndarray, n_spins: int) -> dict[str, float]:
    """Entropies for every single-spin cut and every contiguous prefix cut."""
    cuts = [(i,) for i in range(n_spins)]
    cuts += [tuple(range(k)) for k in range(2, n_spins)]
    return {_cut_label(c): entanglement_entropy(register, c) for c in cuts}


def _resolve_pair(basis_pair) -> tuple[str, tuple[PhotonBasis, PhotonBasis]]:
    if isinstance(basis_pair, str):
        if basis_pair in BASIS_PAIRS:
            return basis_pair, BASIS_PAIRS[basis_pair]
        for name, pair in BASIS_PAIRS.items():
            if basis_pair in (b.label for b in pair):
                return name, pair
        raise ValueError(f"unknown basis pair {basis_pair!r}")
    pair = tuple(basis_pair)
    if len(pair) != 2:
        raise WrongArity("a basis pair has exactly two outcomes")
    for name, known in BASIS_PAIRS.items():
        if {b.label for b in pair} == {b.label for b in known}:
            return name, pair
    raise ValueError("basis pair must be {deg0, deg90} or {plus45, minus45}")


def _per_node(mode, n):
    if isinstance(mode, (IdealMode, PhysicalMode)):
        return [mode] * n
    modes = list(mode)
    if len(modes) != n:
        raise WrongArity(f"got {len(modes)} scatter modes for {n} nodes")
    return modes


def propagate(nodes: Sequence[NodeConfig], mode, input_photon=LINEAR_PHOTON) -> JointState:
    """Prepare the product state and scatter the photon through every node in order."""
    if not 1 <= len(nodes) <= MAX_SPINS:
        raise WrongArity(f"need between 1 and {MAX_SPINS} nodes, got {len(nodes)}")
    state = tensor_photon_spins(input_photon, [n.spin for n in nodes])
    for i, (node, m) in enumerate(zip(nodes, _per_node(mode, len(nodes)))):
        state = scatter(state, i, m, node.params)
    return state


def _measure(state: JointState, basis: PhotonBasis) -> OutcomeResult:
    try:
        prob, post = project_photon(state, basis)
    except NegligibleProbability as exc:
        return OutcomeResult(basis.label, exc.probability)
    res = OutcomeResult(basis.label, prob, post)
    if state.n_spins == 2:
        res.concurrence = concurrence(post)
    if state.n_spins >= 2:
        res.entropies = entropy_table(post, state.n_spins)
    return res


def run_chain(
    nodes: Sequence[NodeConfig],
    mode,
    input_photon=LINEAR_PHOTON,
    basis_pair="linear",
    reference=None,
) -> ProtocolResult:
    """Send one photon through ``nodes`` and measure it in ``basis_pair``.

    ``mode`` is one ScatterMode for all nodes or a list with one per node.
    Each outcome's post-measurement register is compared with the same
    outcome of a ``reference`` chain (ideal gates); by default the reference
    is the ideal gate itself in ideal mode and ``IdealMode(pi/2)`` in
    physical mode.
    """
    pair_name, pair = _resolve_pair(basis_pair)
    modes = _per_node(mode, len(nodes))
    state = propagate(nodes, modes, input_photon)

    if reference is None:
        reference = [m if isinstance(m, IdealMode) else IdealMode() for m in modes]
    ref_state = propagate(nodes, reference, input_photon)

    outcomes = {}
    for basis in pair:
        res = _measure(state, basis)
        if res.post_spins is not None:
            try:
                _, ref_post = project_photon(ref_state, basis)
                res.fidelity_vs_ideal = fidelity(res.post_spins, ref_post)
            except NegligibleProbability:
                res.fidelity_vs_ideal = None
        outcomes[basis.label] = res
    return ProtocolResult(len(nodes), pair_name, outcomes, state.survival, state)


class Readout(NamedTuple):
    p_f: float
    i_plus: float
    i_minus: float


def spin_readout(spin_ensemble) -> Readout:
    """Polarization degree of the Faraday signal for a spin or a spin ensemble.

    ``spin_ensemble`` is a SpinState or a list of ``(weight, SpinState)``;
    weights are classical mixing probabilities and must sum to one. The
    intensities are those of the +theta_F and -theta_F analyzer ports.
    """
    if isinstance(spin_ensemble, SpinState):
        spin_ensemble = [(1.0, spin_ensemble)]
    entries = list(spin_ensemble)
    if not entries:
        raise BadWeights("empty ensemble")
    weights = np.array([float(w) for w, _ in entries])
    if not np.all(np.isfinite(weights)) or np.any(weights < 0):
        raise BadWeights("weights must be finite and non-negative")
    if abs(weights.sum() - 1.0) > 1e-9:
        raise BadWeights(f"weights sum to {weights.sum()!r}, expected 1")
    i_plus = float(sum(w * s.p_up for w, (_, s) in zip(weights, entries)))
    i_minus = float(sum(w * s.p_down for w, (_, s) in zip(weights, entries)))
    return Readout((i_plus - i_minus) / (i_plus + i_minus), i_plus, i_minus)


@dataclass(frozen=True)
class FaradayOutcome:
    """Two-point distribution of the measured rotation: +theta w.p. p_plus, -theta w.p. p_minus."""

    theta: float
    p_plus: float
    p_minus: float

    @property
    def distribution(self) -> list[tuple[float, float]]:
        return [(self.theta, self.p_plus), (-self.theta, self.p_minus)]


def detect_faraday_outcome(spin: SpinState, params: CavityParams, omega: float) -> FaradayOutcome:
    theta = cavity.faraday_angle(params, omega, "up")
    return FaradayOutcome(theta, spin.p_up, spin.p_down)
