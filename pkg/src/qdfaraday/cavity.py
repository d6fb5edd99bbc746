"""Reflection response of a single-sided micropillar cavity with a charged dot.

The "hot" cavity has the charged-exciton transition coupled to the mode with
strength ``g``; the "cold" cavity is the empty resonator. Both reflection
coefficients are steady-state solutions in the weak-excitation regime
(dot ground-state population taken as 1, no saturation), with no side
leakage. Rates and frequencies share one unit, conventionally kappa = 1.

Which circular component sees which cavity depends on the electron spin:
spin up couples L-light (hot) and leaves R-light cold, spin down does the
reverse. The resulting polarization rotation is the Faraday angle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import BadRange, InvalidParams, NoSolutionInBracket

Spin = Literal["up", "down"]


@dataclass(frozen=True)
class CavityParams:
    """Physical constants of one dot-cavity node.

    ``kappa`` is the cavity field decay rate and the natural unit; ``gamma``
    the dipole decay rate; ``omega_c`` and ``omega_x`` the cavity and
    charged-exciton frequencies.
    """

    g: float = 5.0
    kappa: float = 1.0
    gamma: float = 0.3
    omega_c: float = 0.0
    omega_x: float = 0.0

    def __post_init__(self):
        for name in ("g", "kappa", "gamma", "omega_c", "omega_x"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise InvalidParams(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.kappa <= 0:
            raise InvalidParams(f"kappa must be positive, got {self.kappa}")
        if self.g < 0:
            raise InvalidParams(f"g must be non-negative, got {self.g}")
        if self.gamma < 0:
            raise InvalidParams(f"gamma must be non-negative, got {self.gamma}")

    @classmethod
    def in_kappa_units(cls, g=5.0, gamma=0.3, kappa=1.0, x_offset=0.0, omega_c=0.0):
        """Params from rates expressed as multiples of ``kappa``.

        ``x_offset`` is omega_x - omega_c, also in units of kappa.
        """
        return cls(
            g=g * kappa,
            kappa=kappa,
            gamma=gamma * kappa,
            omega_c=omega_c,
            omega_x=omega_c + x_offset * kappa,
        )

    def omega_at(self, detuning: float) -> float:
        """Probe frequency for a detuning from the cavity in units of kappa."""
        return self.omega_c + detuning * self.kappa


@dataclass(frozen=True)
class ReflectionSample:
    omega: float
    r: complex
    modulus: float
    phase: float

    @classmethod
    def of(cls, omega, r) -> "ReflectionSample":
        r = complex(r)
        return cls(float(omega), r, abs(r), principal_phase(r))


@dataclass(frozen=True)
class SpectrumPoint:
    detuning: float
    cold: ReflectionSample
    hot: ReflectionSample
    theta_up: float
    theta_down: float


def principal_phase(z: complex) -> float:
    """``arg z`` in (-pi, pi]; a negative real axis (either zero sign) gives +pi."""
    phi = math.atan2(z.imag, z.real)
    return math.pi if phi == -math.pi else phi


def _cold(params: CavityParams, omega: float) -> complex:
    d = 1j * (params.omega_c - omega)
    return (d - params.kappa / 2) / (d + params.kappa / 2)


def _hot(params: CavityParams, omega: float) -> complex:
    if params.g == 0:
        # the dipole factor cancels exactly; the coupled form would also be
        # 0/0 at omega == omega_x when gamma == 0
        return _cold(params, omega)
    # twice the dipole factor, so a subnormal gamma is not halved to zero
    dipole2 = 2j * (params.omega_x - omega) + params.gamma
    if dipole2 == 0:
        # lossless dipole driven on its own line: r = 1 for any g > 0
        return 1 + 0j
    # r = 1 - kappa / (field + g^2/dipole). Forming g * (g/dipole) avoids
    # underflow of g**2 against a subnormal dipole factor, and the
    # denominator has real part >= kappa/2 so it never vanishes.
    load = 2 * params.g * (params.g / dipole2)
    if not (math.isfinite(load.real) and math.isfinite(load.imag)):
        return 1 + 0j
    field = 1j * (params.omega_c - omega) + params.kappa / 2
    return 1 - params.kappa / (field + load)


def _elementwise(fn, params, omega):
    # Plain Python complex arithmetic, so scalar and array calls agree bit for bit.
    if np.ndim(omega) == 0:
        return fn(params, float(omega))
    w = np.asarray(omega, dtype=float)
    return np.array([fn(params, x) for x in w.ravel()], dtype=np.complex128).reshape(w.shape)


def cold_coefficient(params: CavityParams, omega):
    """Empty-cavity reflection coefficient at ``omega`` (scalar or array)."""
    return _elementwise(_cold, params, omega)


def hot_coefficient(params: CavityParams, omega):
    """Coupled dot-cavity reflection coefficient at ``omega`` (scalar or array)."""
    return _elementwise(_hot, params, omega)


def reflect_hot(params: CavityParams, omega: float) -> ReflectionSample:
    return ReflectionSample.of(omega, hot_coefficient(params, omega))


def reflect_cold(params: CavityParams, omega: float) -> ReflectionSample:
    return ReflectionSample.of(omega, cold_coefficient(params, omega))


def phase_shifts(params: CavityParams, omega: float) -> tuple[float, float]:
    """Return ``(phi_h, phi_0)``, the hot and cold reflection phases."""
    return reflect_hot(params, omega).phase, reflect_cold(params, omega).phase


def wrap_half_turn(angle: float) -> float:
    """Reduce an angle modulo pi into (-pi/2, pi/2]."""
    wrapped = angle - math.pi * math.floor(angle / math.pi + 0.5)
    if wrapped <= -math.pi / 2:
        wrapped += math.pi
    return wrapped


def wrap_turn(angle: float) -> float:
    """Reduce an angle modulo 2 pi into (-pi, pi]."""
    wrapped = math.remainder(angle, 2 * math.pi)
    return math.pi if wrapped == -math.pi else wrapped


def _faraday_up(phi_h: float, phi_0: float) -> float:
    return wrap_half_turn((phi_0 - phi_h) / 2)


def faraday_angle(params: CavityParams, omega: float, spin: Spin = "up") -> float:
    """Polarization rotation of reflected linear light for a given spin.

    Spin up rotates by ``(phi_0 - phi_h)/2`` (reduced into (-pi/2, pi/2]),
    spin down by the negative of that.
    """
    phi_h, phi_0 = phase_shifts(params, omega)
    theta = _faraday_up(phi_h, phi_0)
    if spin == "up":
        return theta
    if spin == "down":
        return -theta
    raise ValueError(f"spin must be 'up' or 'down', got {spin!r}")


def detuning_grid(detuning_min: float, detuning_max: float, n_points: int) -> np.ndarray:
    """Inclusive uniform grid. Symmetric ranges hit 0.0 exactly at the midpoint."""
    if not (math.isfinite(detuning_min) and math.isfinite(detuning_max)):
        raise BadRange("detuning range must be finite")
    if not detuning_min < detuning_max:
        raise BadRange(f"need detuning_min < detuning_max, got [{detuning_min}, {detuning_max}]")
    if int(n_points) != n_points or n_points < 2:
        raise BadRange("points must be >= 2")
    n = int(n_points)
    i = np.arange(n, dtype=float)
    return (detuning_min * (n - 1 - i) + detuning_max * i) / (n - 1)


def sweep_spectrum(params: CavityParams, detuning_min: float, detuning_max: float, n_points: int) -> list[SpectrumPoint]:
    """Cold/hot reflection and Faraday angles on a detuning grid (units of kappa)."""
    grid = detuning_grid(detuning_min, detuning_max, n_points)
    omegas = params.omega_c + grid * params.kappa
    cold = np.atleast_1d(cold_coefficient(params, omegas))
    hot = np.atleast_1d(hot_coefficient(params, omegas))
    points = []
    for d, w, rc, rh in zip(grid, omegas, cold, hot):
        cs = ReflectionSample.of(w, rc)
        hs = ReflectionSample.of(w, rh)
        up = _faraday_up(hs.phase, cs.phase)
        points.append(SpectrumPoint(float(d), cs, hs, up, -up))
    return points


def unwrapped_phases(points: list[SpectrumPoint]) -> tuple[np.ndarray, np.ndarray]:
    """Continuous (cold, hot) phase columns for plotting."""
    cold = np.unwrap([p.cold.phase for p in points])
    hot = np.unwrap([p.hot.phase for p in points])
    return cold, hot


def _raw_difference(params: CavityParams, omega):
    phi_h = np.angle(hot_coefficient(params, omega))
    phi_0 = np.angle(cold_coefficient(params, omega))
    return np.mod(phi_0 - phi_h + np.pi, 2 * np.pi) - np.pi


def solve_detuning(params: CavityParams, target_phase_difference: float, *, grid_points: int = 4097) -> float:
    """Probe frequency where ``phi_0 - phi_h`` equals the target (mod 2 pi).

    The phase difference is followed continuously across
    [omega_c - kappa, omega_c + kappa] on a dense grid, every crossing of the
    target (or of target + 2 pi k) is located, and the one closest to
    omega_c is refined by bisection. For g >= kappa the difference is
    monotone there, and a target of pi/2 lands near -kappa/2 below
    resonance while -pi/2 lands near +kappa/2.

    With g == 0 the difference vanishes identically; a target of 0 then
    returns omega_c, anything else has no solution.
    """
    target = float(target_phase_difference)
    if not math.isfinite(target) or abs(target) > math.pi + 1e-12:
        raise ValueError(f"target must lie in [-pi, pi], got {target}")
    if params.g == 0:
        if abs(wrap_turn(target)) < 1e-12:
            return params.omega_c
        raise NoSolutionInBracket("g = 0: hot and cold phases coincide, only a zero target is reachable")

    grid = np.linspace(params.omega_c - params.kappa, params.omega_c + params.kappa, grid_points)
    raw = _raw_difference(params, grid)
    branch = np.unwrap(raw)

    cells = []
    lo_k = math.floor((branch.min() - target) / (2 * math.pi))
    hi_k = math.ceil((branch.max() - target) / (2 * math.pi))
    for k in range(lo_k, hi_k + 1):
        s = branch - (target + 2 * math.pi * k)
        for i in np.nonzero(s[:-1] * s[1:] <= 0)[0]:
            cells.append((abs(0.5 * (grid[i] + grid[i + 1]) - params.omega_c), int(i), k))

    # A zero of the hot coefficient makes its phase jump by pi, which also
    # shows up as a sign change; such cells fail the residual check.
    for _, i, k in sorted(cells):
        w = _bisect_cell(params, grid[i], grid[i + 1], raw[i], branch[i], target + 2 * math.pi * k)
        if abs(wrap_turn(float(_raw_difference(params, w)) - target)) < 1e-9:
            return w
    raise NoSolutionInBracket(
        f"phase difference spans [{branch.min():.6f}, {branch.max():.6f}] within one kappa "
        f"of resonance; target {target:.6f} is never reached"
    )


def _bisect_cell(params, lo, hi, anchor_raw, anchor, lifted) -> float:
    def excess(w):
        # continuous inside one grid cell away from zeros of the hot coefficient
        return anchor + wrap_turn(float(_raw_difference(params, w)) - anchor_raw) - lifted

    lo, hi = float(lo), float(hi)
    s_lo, s_hi = excess(lo), excess(hi)
    if s_lo == 0:
        return lo
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        s_mid = excess(mid)
        if s_mid == 0:
            return mid
        if (s_mid < 0) == (s_lo < 0):
            lo, s_lo = mid, s_mid
        else:
            hi, s_hi = mid, s_mid
    return lo if abs(s_lo) <= abs(s_hi) else hi


def phase_difference(params: CavityParams, omega: float) -> float:
    """``phi_0 - phi_h`` reduced into (-pi, pi]."""
    phi_h, phi_0 = phase_shifts(params, omega)
    return wrap_turn(phi_0 - phi_h)
