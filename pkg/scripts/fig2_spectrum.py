"""Reflectance, phase and Faraday angle of the cold and hot cavity vs detuning.

    python scripts/fig2_spectrum.py [--plot fig2.png]

Prints a short table of landmark values; with --plot (needs matplotlib)
draws the four panels.
"""
import argparse
import math

import numpy as np

from qdfaraday.cavity import CavityParams, faraday_angle, solve_detuning, sweep_spectrum, unwrapped_phases


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--g", type=float, default=5.0)
    ap.add_argument("--gamma", type=float, default=0.3)
    ap.add_argument("--plot", metavar="PNG")
    args = ap.parse_args()

    params = CavityParams.in_kappa_units(g=args.g, gamma=args.gamma)
    pts = sweep_spectrum(params, -10, 10, 2001)
    d = np.array([p.detuning for p in pts])
    hot = np.array([p.hot.modulus for p in pts])

    dips = d[1:-1][(hot[1:-1] < hot[:-2]) & (hot[1:-1] < hot[2:])]
    print(f"g/kappa={args.g}  gamma/kappa={args.gamma}")
    print(f"hot-cavity reflectance dips at {dips}")
    for target in (math.pi / 2, -math.pi / 2):
        w = solve_detuning(params, target)
        theta = faraday_angle(params, w, "up")
        print(f"phi_0 - phi_h = {target:+.4f} at detuning {w:+.6f}  (theta_up = {theta:+.6f})")

    if args.plot:
        import matplotlib.pyplot as plt

        cold_ph, hot_ph = unwrapped_phases(pts)
        fig, ax = plt.subplots(2, 2, figsize=(8, 6), sharex=True)
        ax[0, 0].plot(d, [p.cold.modulus for p in pts], label="cold")
        ax[0, 0].plot(d, hot, ":", label="hot")
        ax[0, 0].set_ylabel("|r|")
        ax[0, 0].legend()
        ax[0, 1].plot(d, cold_ph)
        ax[0, 1].plot(d, hot_ph, ":")
        ax[0, 1].set_ylabel("phase (rad)")
        ax[1, 0].plot(d, [p.theta_up for p in pts])
        ax[1, 0].set_ylabel("theta_F, spin up")
        ax[1, 1].plot(d, [p.theta_down for p in pts])
        ax[1, 1].set_ylabel("theta_F, spin down")
        for a in ax[1]:
            a.set_xlabel("(omega - omega_c) / kappa")
        fig.tight_layout()
        fig.savefig(args.plot, dpi=150)
        print(f"wrote {args.plot}")


if __name__ == "__main__":
    main()
