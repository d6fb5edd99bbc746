"""Command line front end.

    qdfaraday spectrum [--min -10 --max 10 --points 1001]
    qdfaraday faraday  [--detuning -0.5 --spin 0.7071,0,0.7071,0]
    qdfaraday readout  [--spin ... | --ensemble w:re_a,im_a,re_b,im_b ...]
    qdfaraday entangle [--nodes 2 --spin 0:re_a,im_a,re_b,im_b --basis linear]

All rates and detunings are in units of kappa. ``--config FILE`` loads a
YAML/JSON mapping whose keys mirror the long flag names (dashes or
underscores), plus an optional ``nodes`` list of per-node mappings with
``g``, ``gamma``, ``x_offset``, ``cavity_offset``, ``spin`` and ``phi``.
Flags given on the command line override the file.

Exit codes: 0 success, 1 computation error, 2 usage or config error.
"""
from __future__ import annotations

import argparse
import io
import json
import math
import sys
from dataclasses import dataclass, field
from typing import Any

import numpy as np
import yaml

from . import cavity, protocol
from .cavity import CavityParams
from .errors import SimulationError
from .qstate import MAX_SPINS, SpinState, make_spin_state

SPECTRUM_COLUMNS = ("detuning", "cold_modulus", "cold_phase", "hot_modulus", "hot_phase", "theta_up", "theta_down")
EQUAL_SUPERPOSITION = (1 / math.sqrt(2), 0.0, 1 / math.sqrt(2), 0.0)


class ConfigError(Exception):
    """Invalid configuration; reported with exit code 2."""


@dataclass
class NodeSpec:
    g: float
    gamma: float
    x_offset: float = 0.0
    cavity_offset: float = 0.0
    spin: tuple[float, float, float, float] = EQUAL_SUPERPOSITION
    phi: float = math.pi / 2


@dataclass
class RunConfig:
    command: str
    g: float = 5.0
    gamma: float = 0.3
    kappa: float = 1.0
    x_offset: float = 0.0
    detuning: float | None = None
    mode: str = "ideal"
    out: str | None = None
    output: str | None = None
    min: float = -10.0
    max: float = 10.0
    points: int = 1001
    unwrap_phase: bool = False
    nodes: list[NodeSpec] = field(default_factory=list)
    basis: str = "linear"
    spin: tuple[float, float, float, float] | None = None
    ensemble: list[tuple[float, tuple[float, float, float, float]]] = field(default_factory=list)

    def params(self, g=None, gamma=None, x_offset=None, cavity_offset=0.0) -> CavityParams:
        return CavityParams.in_kappa_units(
            g=self.g if g is None else g,
            gamma=self.gamma if gamma is None else gamma,
            kappa=self.kappa,
            x_offset=self.x_offset if x_offset is None else x_offset,
            omega_c=cavity_offset * self.kappa,
        )


# ---------------------------------------------------------------- formatting


def fmt9(x: float) -> str:
    """9 significant digits, with negative zero printed as 0."""
    s = f"{x:.9g}"
    return "0" if s in ("-0", "0") else s


def _amp_pairs(vec) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.asarray(vec, dtype=complex)]


def dump_json(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False, allow_nan=False) + "\n"


def dump_csv(header, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(v if isinstance(v, str) else fmt9(v) for v in row) + "\n")
    return buf.getvalue()


# ------------------------------------------------------------------- parsing


def _finite(name, value) -> float:
    try:
        x = float(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be a number, got {value!r}") from None
    if not math.isfinite(x):
        raise ConfigError(f"{name} must be finite, got {value!r}")
    return x


def _spin_numbers(text_or_seq, what="spin") -> tuple[float, float, float, float]:
    if isinstance(text_or_seq, str):
        parts = [p for p in text_or_seq.split(",")]
    else:
        parts = list(text_or_seq)
    if len(parts) != 4:
        raise ConfigError(f"{what} needs 4 numbers re_a,im_a,re_b,im_b, got {text_or_seq!r}")
    vals = tuple(_finite(what, p) for p in parts)
    if vals[0] ** 2 + vals[1] ** 2 + vals[2] ** 2 + vals[3] ** 2 <= 1e-15:
        raise ConfigError(f"{what} has zero norm")
    return vals  # type: ignore[return-value]


def parse_indexed_spin(text: str) -> tuple[int, tuple[float, float, float, float]]:
    """Parse ``i:re_a,im_a,re_b,im_b`` (node index is zero based)."""
    if ":" not in text:
        raise ConfigError(f"--spin for entangle must look like i:re_a,im_a,re_b,im_b, got {text!r}")
    idx, _, rest = text.partition(":")
    try:
        i = int(idx)
    except ValueError:
        raise ConfigError(f"bad node index in spin spec {text!r}") from None
    return i, _spin_numbers(rest)


def parse_weighted_spin(text: str) -> tuple[float, tuple[float, float, float, float]]:
    if ":" not in text:
        raise ConfigError(f"--ensemble must look like w:re_a,im_a,re_b,im_b, got {text!r}")
    w, _, rest = text.partition(":")
    return _finite("ensemble weight", w), _spin_numbers(rest, "ensemble spin")


def to_spin(vals) -> SpinState:
    re_a, im_a, re_b, im_b = vals
    return make_spin_state(complex(re_a, im_a), complex(re_b, im_b))


def _common_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--g", type=float, help="coupling rate g/kappa (default 5.0)")
    p.add_argument("--gamma", type=float, help="dipole decay rate gamma/kappa (default 0.3)")
    p.add_argument("--kappa", type=float, help="cavity decay rate, the unit of all rates (default 1.0)")
    p.add_argument("--x-offset", type=float, help="exciton minus cavity frequency, units of kappa (default 0)")
    p.add_argument("--detuning", type=float, help="probe detuning omega - omega_c, units of kappa")
    p.add_argument("--mode", choices=["ideal", "physical"])
    p.add_argument("--out", choices=["csv", "json"])
    p.add_argument("--output", metavar="PATH", help="write here instead of stdout")
    p.add_argument("--config", metavar="PATH", help="YAML/JSON config file; flags override it")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(prog="qdfaraday", description="Giant Faraday rotation and single-photon spin entanglement")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", parents=[common], help="cold/hot reflection and Faraday angle sweep")
    sp.add_argument("--min", type=float, help="lowest detuning (default -10)")
    sp.add_argument("--max", type=float, help="highest detuning (default 10)")
    sp.add_argument("--points", type=int, help="number of samples (default 1001)")
    sp.add_argument("--unwrap-phase", action="store_true", default=None, help="report continuous phase columns")

    fp = sub.add_parser("faraday", parents=[common], help="rotation angles and outcome probabilities at one detuning")
    fp.add_argument("--spin", metavar="re_a,im_a,re_b,im_b")

    rp = sub.add_parser("readout", parents=[common], help="spin polarization degree from the Faraday signal")
    rp.add_argument("--spin", metavar="re_a,im_a,re_b,im_b")
    rp.add_argument("--ensemble", action="append", metavar="w:re_a,im_a,re_b,im_b",
                    help="mixture component; repeat for each")

    ep = sub.add_parser("entangle", parents=[common], help="entangle remote spins with one photon")
    ep.add_argument("--nodes", type=int, help="number of nodes (default 2)")
    ep.add_argument("--spin", action="append", metavar="i:re_a,im_a,re_b,im_b",
                    help="spin of node i (zero based); repeatable")
    ep.add_argument("--basis", choices=["linear", "diag"])
    ep.add_argument("--phi", metavar="PHI[,PHI...]", help="ideal-mode phase per node (default pi/2)")
    return parser


def _load_file(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = yaml.safe_load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from None
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a mapping")
    return {str(k).replace("-", "_"): v for k, v in data.items()}


_SCALARS = ("g", "gamma", "kappa", "x_offset", "detuning", "min", "max")


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Merge defaults, config file and flags, then validate."""
    file_cfg = _load_file(args.config) if getattr(args, "config", None) else {}
    flags = {k: v for k, v in vars(args).items() if v is not None and k not in ("config", "command")}
    merged = {**file_cfg, **flags}
    cfg = RunConfig(command=args.command)

    for key in _SCALARS:
        if key in merged:
            setattr(cfg, key, _finite(key, merged[key]))
    if cfg.kappa <= 0:
        raise ConfigError("kappa must be positive")
    if cfg.g < 0 or cfg.gamma < 0:
        raise ConfigError("g and gamma must be non-negative")

    if "mode" in merged:
        if merged["mode"] not in ("ideal", "physical"):
            raise ConfigError(f"mode must be ideal or physical, got {merged['mode']!r}")
        cfg.mode = merged["mode"]
    if "out" in merged:
        if merged["out"] not in ("csv", "json"):
            raise ConfigError(f"out must be csv or json, got {merged['out']!r}")
        cfg.out = merged["out"]
    if "output" in merged:
        cfg.output = str(merged["output"])
    if "unwrap_phase" in merged:
        cfg.unwrap_phase = bool(merged["unwrap_phase"])

    cmd = cfg.command
    if cmd == "spectrum":
        if "points" in merged:
            pts = merged["points"]
            if isinstance(pts, bool) or not isinstance(pts, (int, float)) or int(pts) != pts:
                raise ConfigError("points must be an integer")
            cfg.points = int(pts)
        if cfg.points < 2:
            raise ConfigError("points must be ≥ 2")
        if not cfg.min < cfg.max:
            raise ConfigError("min must be below max")
        cfg.out = cfg.out or "csv"
    elif cmd == "faraday":
        cfg.detuning = -0.5 if cfg.detuning is None else cfg.detuning
        cfg.spin = _spin_numbers(merged.get("spin", EQUAL_SUPERPOSITION))
        cfg.out = cfg.out or "json"
    elif cmd == "readout":
        ens = merged.get("ensemble")
        if ens:
            if isinstance(ens, list) and all(isinstance(e, str) for e in ens):
                cfg.ensemble = [parse_weighted_spin(e) for e in ens]
            elif isinstance(ens, list):
                cfg.ensemble = [(_finite("ensemble weight", e[0]), _spin_numbers(e[1:], "ensemble spin")) for e in ens]
            else:
                raise ConfigError("ensemble must be a list")
            weights = [w for w, _ in cfg.ensemble]
            if any(w < 0 for w in weights) or abs(sum(weights) - 1.0) > 1e-9:
                raise ConfigError(f"ensemble weights must be non-negative and sum to 1, got {sum(weights)!r}")
        else:
            cfg.spin = _spin_numbers(merged.get("spin", EQUAL_SUPERPOSITION))
        cfg.out = cfg.out or "json"
    elif cmd == "entangle":
        _resolve_nodes(cfg, merged, file_cfg, flags)
        if "basis" in merged:
            if merged["basis"] not in ("linear", "diag"):
                raise ConfigError(f"basis must be linear or diag, got {merged['basis']!r}")
            cfg.basis = merged["basis"]
        if cfg.mode == "physical" and cfg.detuning is None:
            cfg.detuning = 0.5
        cfg.out = cfg.out or "json"
        if cfg.out != "json":
            raise ConfigError("entangle only writes json")
    return cfg


def _resolve_nodes(cfg: RunConfig, merged: dict, file_cfg: dict, flags: dict) -> None:
    file_nodes = file_cfg.get("nodes")
    if file_nodes is not None and not isinstance(file_nodes, list):
        raise ConfigError("nodes in the config file must be a list")
    if "nodes" in merged and not isinstance(merged["nodes"], list):
        n = merged["nodes"]
    else:
        n = len(file_nodes) if file_nodes else 2
    if isinstance(n, bool) or not isinstance(n, int):
        raise ConfigError("--nodes must be an integer")
    if not 2 <= n <= MAX_SPINS:
        raise ConfigError(f"entangle needs between 2 and {MAX_SPINS} nodes, got {n}")

    specs = []
    for i in range(n):
        raw = file_nodes[i] if file_nodes and i < len(file_nodes) else {}
        if not isinstance(raw, dict):
            raise ConfigError(f"node {i} must be a mapping")
        # a flag beats the per-node value, which beats the top-level value
        pick = {k: cfg.__dict__[k] if k in flags else raw.get(k, cfg.__dict__[k]) for k in ("g", "gamma", "x_offset")}
        spec = NodeSpec(
            g=_finite("g", pick["g"]),
            gamma=_finite("gamma", pick["gamma"]),
            x_offset=_finite("x_offset", pick["x_offset"]),
            cavity_offset=_finite("cavity_offset", raw.get("cavity_offset", 0.0)),
        )
        if spec.g < 0 or spec.gamma < 0:
            raise ConfigError(f"node {i}: g and gamma must be non-negative")
        if "spin" in raw:
            spec.spin = _spin_numbers(raw["spin"], f"node {i} spin")
        if "phi" in raw:
            spec.phi = _finite("phi", raw["phi"])
        specs.append(spec)

    spins = merged.get("spin")
    if spins is not None:
        if isinstance(spins, str) or not isinstance(spins, list):
            spins = [spins]
        for text in spins:
            if not isinstance(text, str):
                raise ConfigError(f"bad spin spec {text!r}")
            i, vals = parse_indexed_spin(text)
            if not 0 <= i < n:
                raise ConfigError(f"spin index {i} out of range for {n} nodes")
            specs[i].spin = vals
    for source, override_nodes in ((file_cfg, False), (flags, True)):
        if "phi" not in source:
            continue
        phis = source["phi"]
        if isinstance(phis, str):
            phis = phis.split(",")
        elif not isinstance(phis, list):
            phis = [phis]
        phis = [_finite("phi", p) for p in phis]
        if len(phis) == 1:
            phis = phis * n
        if len(phis) != n:
            raise ConfigError(f"--phi needs 1 or {n} values, got {len(phis)}")
        for i, (spec, p) in enumerate(zip(specs, phis)):
            node_has_phi = bool(file_nodes) and i < len(file_nodes) and "phi" in file_nodes[i]
            if override_nodes or not node_has_phi:
                spec.phi = p
    cfg.nodes = specs


# ------------------------------------------------------------------ commands


def cmd_spectrum(cfg: RunConfig) -> str:
    params = cfg.params()
    points = cavity.sweep_spectrum(params, cfg.min, cfg.max, cfg.points)
    cold_ph = [p.cold.phase for p in points]
    hot_ph = [p.hot.phase for p in points]
    if cfg.unwrap_phase:
        cold_ph, hot_ph = (list(a) for a in cavity.unwrapped_phases(points))
    rows = [
        (p.detuning, p.cold.modulus, c, p.hot.modulus, h, p.theta_up, p.theta_down)
        for p, c, h in zip(points, cold_ph, hot_ph)
    ]
    if cfg.out == "json":
        return dump_json({"columns": list(SPECTRUM_COLUMNS), "rows": [[float(v) for v in r] for r in rows]})
    return dump_csv(SPECTRUM_COLUMNS, rows)


def faraday_report(cfg: RunConfig) -> dict:
    params = cfg.params()
    omega = params.omega_at(cfg.detuning)
    phi_h, phi_0 = cavity.phase_shifts(params, omega)
    spin = to_spin(cfg.spin)
    outcome = protocol.detect_faraday_outcome(spin, params, omega)
    report = {
        "detuning": cfg.detuning,
        "phi_0": phi_0,
        "phi_h": phi_h,
        "theta_up": outcome.theta,
        "theta_down": -outcome.theta,
        "p_plus": outcome.p_plus,
        "p_minus": outcome.p_minus,
        "hot_modulus": cavity.reflect_hot(params, omega).modulus,
    }
    if params.g == 0:
        msg = "g = 0: hot and cold cavities coincide, no Faraday rotation occurs"
        print(f"qdfaraday faraday: warning: {msg}", file=sys.stderr)
        report["warning"] = msg
    return report


def readout_report(cfg: RunConfig) -> dict:
    if cfg.ensemble:
        ens = [(w, to_spin(v)) for w, v in cfg.ensemble]
    else:
        ens = [(1.0, to_spin(cfg.spin))]
    r = protocol.spin_readout(ens)
    return {"p_f": r.p_f, "i_plus": r.i_plus, "i_minus": r.i_minus}


def entangle_report(cfg: RunConfig) -> dict:
    nodes = [
        protocol.NodeConfig(cfg.params(s.g, s.gamma, s.x_offset, s.cavity_offset), to_spin(s.spin))
        for s in cfg.nodes
    ]
    if cfg.mode == "ideal":
        modes = [protocol.IdealMode(s.phi) for s in cfg.nodes]
    else:
        # one probe frequency for the whole bus, measured from the reference cavity
        omega = cfg.detuning * cfg.kappa
        modes = [protocol.PhysicalMode(omega) for _ in nodes]
    result = protocol.run_chain(nodes, modes, basis_pair=cfg.basis)
    return result_to_dict(result, cfg)


def result_to_dict(result: protocol.ProtocolResult, cfg: RunConfig | None = None) -> dict:
    outcomes = {}
    for label, o in result.outcomes.items():
        entry: dict[str, Any] = {
            "probability": o.probability,
            "post_state": None if o.post_spins is None else _amp_pairs(o.post_spins),
            "fidelity_vs_ideal": o.fidelity_vs_ideal,
            "entropy": dict(o.entropies),
        }
        if o.concurrence is not None:
            entry["concurrence"] = o.concurrence
        outcomes[label] = entry
    out: dict[str, Any] = {
        "basis_pair": result.basis_pair,
        "n_spins": result.n_spins,
        "outcomes": outcomes,
        "survival_probability": result.survival_probability,
    }
    if cfg is not None:
        out["mode"] = cfg.mode
        if cfg.mode == "physical":
            out["detuning"] = cfg.detuning
        out["nodes"] = [
            {"g": s.g, "gamma": s.gamma, "x_offset": s.x_offset, "cavity_offset": s.cavity_offset,
             "spin": _amp_pairs(to_spin(s.spin).vector),
             **({"phi": s.phi} if cfg.mode == "ideal" else {})}
            for s in cfg.nodes
        ]
    return out


def _single_record(report: dict, fmt: str) -> str:
    if fmt == "json":
        return dump_json(report)
    keys = [k for k in sorted(report) if k != "warning"]
    return dump_csv(keys, [[report[k] for k in keys]])


def render(cfg: RunConfig) -> str:
    if cfg.command == "spectrum":
        return cmd_spectrum(cfg)
    if cfg.command == "faraday":
        return _single_record(faraday_report(cfg), cfg.out)
    if cfg.command == "readout":
        return _single_record(readout_report(cfg), cfg.out)
    if cfg.command == "entangle":
        return dump_json(entangle_report(cfg))
    raise ConfigError(f"unknown command {cfg.command!r}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
    except ConfigError as exc:
        print(f"qdfaraday {args.command}: error: {exc}", file=sys.stderr)
        return 2
    try:
        text = render(cfg)
    except ConfigError as exc:
        print(f"qdfaraday {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (SimulationError, ArithmeticError) as exc:
        print(f"qdfaraday {args.command}: computation failed: {exc}", file=sys.stderr)
        return 1
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0
