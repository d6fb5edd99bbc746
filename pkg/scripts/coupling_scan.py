"""How close the physical gate gets to the ideal pi/2 phase gate as g grows.

    python scripts/coupling_scan.py

Two nodes, equal superpositions, probe at +kappa/2. Prints survival
probability and fidelities of the measured spin pairs against the ideal
outputs for a range of coupling strengths.
"""
import math

import numpy as np

from qdfaraday.cavity import CavityParams, phase_shifts
from qdfaraday.protocol import IdealMode, NodeConfig, PhysicalMode, run_chain
from qdfaraday.qstate import fidelity, make_spin_state

GS = (1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0)


def main(gamma=0.3, detuning=0.5):
    spin = make_spin_state(1, 1)
    print(f"{'g/kappa':>8} {'phi_h-phi_0':>12} {'survival':>10} {'F(deg0)':>10} {'F(deg90)':>10} {'F(joint)':>12}")
    for g in GS:
        params = CavityParams(g=g, gamma=gamma)
        nodes = [NodeConfig(params, spin)] * 2
        phys = run_chain(nodes, PhysicalMode(params.omega_at(detuning)))
        ideal = run_chain(nodes, IdealMode(math.pi / 2))
        phi_h, phi_0 = phase_shifts(params, params.omega_at(detuning))
        f_joint = fidelity(phys.output_state.amplitudes, ideal.output_state.amplitudes)
        print(
            f"{g:8.1f} {phi_h - phi_0:12.6f} {phys.survival_probability:10.6f} "
            f"{phys['deg0'].fidelity_vs_ideal:10.6f} {phys['deg90'].fidelity_vs_ideal:10.6f} {f_joint:12.9f}"
        )


if __name__ == "__main__":
    np.set_printoptions(precision=6)
    main()
