"""Giant Faraday rotation from a single quantum-dot spin, and remote spin
entanglement over a single-photon bus."""
from .cavity import (
    CavityParams,
    ReflectionSample,
    SpectrumPoint,
    faraday_angle,
    phase_shifts,
    reflect_cold,
    reflect_hot,
    solve_detuning,
    sweep_spectrum,
)
from .protocol import (
    IdealMode,
    NodeConfig,
    PhysicalMode,
    ProtocolResult,
    detect_faraday_outcome,
    run_chain,
    scatter,
    spin_readout,
)
from .qstate import (
    DEG0,
    DEG90,
    MINUS45,
    PLUS45,
    JointState,
    PhotonBasis,
    SpinState,
    concurrence,
    entanglement_entropy,
    fidelity,
    make_spin_state,
    project_photon,
    tensor_photon_spins,
)

__version__ = "0.1.0"
