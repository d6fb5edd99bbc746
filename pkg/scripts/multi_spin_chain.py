"""Entanglement left on n remote spins by one photon and a diagonal-basis measurement.

    python scripts/multi_spin_chain.py [--max-nodes 8]
"""
import argparse
import math

from qdfaraday.protocol import IdealMode, NodeConfig, run_chain
from qdfaraday.cavity import CavityParams
from qdfaraday.qstate import make_spin_state


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-nodes", type=int, default=8)
    ap.add_argument("--basis", choices=["linear", "diag"], default="diag")
    args = ap.parse_args()

    spin = make_spin_state(1, 1)
    for n in range(2, args.max_nodes + 1):
        res = run_chain([NodeConfig(CavityParams(), spin)] * n, IdealMode(math.pi / 2), basis_pair=args.basis)
        for label, o in res.outcomes.items():
            if o.post_spins is None:
                print(f"n={n:2d} {label:8s} p={o.probability:.3e} (no post state)")
                continue
            singles = [o.entropies[str(i)] for i in range(n)]
            half = o.entropies.get(",".join(str(i) for i in range(n // 2)), singles[0])
            print(f"n={n:2d} {label:8s} p={o.probability:.4f} "
                  f"single-spin S in [{min(singles):.4f}, {max(singles):.4f}]  half-chain S={half:.4f}")


if __name__ == "__main__":
    main()
