"""Phase-only Fourier holography simulation: synth a potential as an
intensity profile, retrieve the modulator phase, and read the profile back.

The modulator plane (m x m) is embedded in a zero-padded 2m x 2m plane so
the output plane is fully resolved; light propagates by a centered unitary
Fourier transform. The cost is the steepened squared deficit of the
amplitude overlap accumulated over the signal region (SR), a single pixel
row holding the 1D intensity profile; everywhere else the field is
unconstrained. The overlap takes the modulus per pixel before summing, so
a zero cost means the SR intensity profile matches exactly while the output
phase stays free.

Minimization is Polak-Ribiere conjugate gradient with an Armijo backtracking
line search; the steepness prefactor makes fixed step sizes diverge, so the
line search is not optional.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.interpolate import CubicSpline

from .grid import Grid, PotentialGrid

__all__ = [
    "TargetMap",
    "HologramState",
    "OutputField",
    "OptimizeResult",
    "potential_to_target",
    "make_state",
    "uniform_illumination",
    "gaussian_illumination",
    "propagate",
    "cost_and_gradient",
    "optimize_phase",
    "extract_profile",
    "sr_intensity_error",
]

DEFAULT_STEEPNESS = 9


@dataclass(frozen=True)
class TargetMap:
    """Affine map linking a potential to its SR intensity profile."""

    ceiling: float
    span: float
    norm: float
    asymptote: float
    sr_length: int
    grid_half_width: float
    grid_points: int


@dataclass
class HologramState:
    """Phase plane plus the padded-output-plane target description."""

    phase: np.ndarray
    m: int
    signal_mask: np.ndarray
    target_amplitude: np.ndarray
    target_phase: float = 0.0
    steepness_d: int = DEFAULT_STEEPNESS
    target_map: TargetMap | None = None

    def __post_init__(self):
        self.phase = np.asarray(self.phase, dtype=np.float64)
        if self.phase.shape != (self.m, self.m):
            raise ValueError("phase plane must be m x m")
        if self.signal_mask.shape != (2 * self.m, 2 * self.m):
            raise ValueError("signal mask must live on the padded 2m x 2m plane")
        if self.target_amplitude.shape != self.signal_mask.shape:
            raise ValueError("target amplitude must live on the padded plane")
        power = float(np.sum(self.target_amplitude[self.signal_mask] ** 2))
        if abs(power - 1.0) > 1e-9:
            raise ValueError("target amplitude must carry unit power over the SR")

    @property
    def padded_size(self) -> int:
        return 2 * self.m


@dataclass(frozen=True)
class OutputField:
    """Complex field on the padded output plane."""

    values: np.ndarray
    power: float


@dataclass
class OptimizeResult:
    state: HologramState
    history: np.ndarray
    line_search_failed: bool = False

    @property
    def final_cost(self) -> float:
        return float(self.history[-1])


def potential_to_target(
    potential: PotentialGrid,
    sr_length: int,
    ceiling: float | None = None,
    span: float | None = None,
):
    """Resample ceiling - V to `sr_length` pixels; return (amplitude row, map).

    Higher intensity encodes lower potential (red-detuned trapping), so the
    amplitude is the square root of the affinely inverted potential,
    normalized to unit power over the row.
    """
    if sr_length < 4:
        raise ValueError("sr_length must be at least 4")
    v = potential.values
    if ceiling is None:
        depth = max(potential.max() - potential.min(), 1.0)
        ceiling = potential.max() + 0.02 * depth
    if ceiling < potential.max():
        raise ValueError("ceiling must not be below the potential maximum")
    if span is None:
        tol = 0.005 * max(potential.asymptote - potential.min(), 1e-12)
        away = np.nonzero(np.abs(v - potential.asymptote) > tol)[0]
        if away.size == 0:
            span = potential.grid.half_width
        else:
            x_edge = max(abs(potential.x[away[0]]), abs(potential.x[away[-1]]))
            span = min(1.15 * x_edge, potential.grid.half_width)
    x_sr = np.linspace(-span, span, sr_length)
    v_sr = np.interp(x_sr, potential.x, v)
    intensity = ceiling - v_sr
    norm = float(intensity.sum())
    amplitude = np.sqrt(intensity / norm)
    target_map = TargetMap(
        ceiling=float(ceiling),
        span=float(span),
        norm=norm,
        asymptote=potential.asymptote,
        sr_length=sr_length,
        grid_half_width=potential.grid.half_width,
        grid_points=potential.grid.points,
    )
    return amplitude, target_map


def make_state(
    m: int,
    amplitude_row: np.ndarray,
    seed: int = 1,
    steepness_d: int = DEFAULT_STEEPNESS,
    target_map: TargetMap | None = None,
) -> HologramState:
    """Seeded random-phase state with the 1D target centred on the output plane."""
    amplitude_row = np.asarray(amplitude_row, dtype=np.float64)
    sr_length = amplitude_row.size
    size = 2 * m
    if sr_length >= size:
        raise ValueError("signal region must sit strictly inside the output plane")
    mask = np.zeros((size, size), dtype=bool)
    row = m
    col0 = m - sr_length // 2
    mask[row, col0 : col0 + sr_length] = True
    target = np.zeros((size, size))
    target[row, col0 : col0 + sr_length] = amplitude_row
    rng = np.random.default_rng(seed)
    phase = rng.uniform(0.0, 2.0 * np.pi, size=(m, m))
    return HologramState(
        phase=phase,
        m=m,
        signal_mask=mask,
        target_amplitude=target,
        steepness_d=steepness_d,
        target_map=target_map,
    )


def uniform_illumination(m: int) -> np.ndarray:
    """Unit-power uniform beam."""
    return np.full((m, m), 1.0 / m)


def gaussian_illumination(m: int, waist_fraction: float = 0.5) -> np.ndarray:
    """Unit-power Gaussian beam, waist as a fraction of the plane half-size."""
    half = (m - 1) / 2.0
    r = np.hypot(*np.meshgrid(np.arange(m) - half, np.arange(m) - half))
    beam = np.exp(-((r / (waist_fraction * half)) ** 2))
    return beam / np.sqrt(np.sum(beam**2))


def _fft_centered(plane: np.ndarray) -> np.ndarray:
    return np.fft.fftshift(np.fft.fft2(np.fft.ifftshift(plane), norm="ortho"))


def _ifft_centered(plane: np.ndarray) -> np.ndarray:
    return np.fft.fftshift(np.fft.ifft2(np.fft.ifftshift(plane), norm="ortho"))


def _embed(state_m: int, plane: np.ndarray) -> np.ndarray:
    size = 2 * state_m
    padded = np.zeros((size, size), dtype=np.complex128)
    lo = state_m // 2
    padded[lo : lo + state_m, lo : lo + state_m] = plane
    return padded


def propagate(state: HologramState, illumination: np.ndarray) -> OutputField:
    """Embed the modulated beam in the padded plane and transform to the output."""
    illumination = np.asarray(illumination, dtype=np.float64)
    if illumination.shape != (state.m, state.m):
        raise ValueError("illumination must be m x m")
    if np.any(illumination < 0.0):
        raise ValueError("illumination must be non-negative")
    modulated = illumination * np.exp(1j * state.phase)
    out = _fft_centered(_embed(state.m, modulated))
    return OutputField(values=out, power=float(np.sum(np.abs(out) ** 2)))


def cost_and_gradient(state: HologramState, illumination: np.ndarray):
    """Steepened squared overlap deficit and its phase gradient via the adjoint
    transform."""
    illumination = np.asarray(illumination, dtype=np.float64)
    modulated = illumination * np.exp(1j * state.phase)
    out = _fft_centered(_embed(state.m, modulated))
    mask = state.signal_mask
    f_sr = out[mask]
    power_sr = float(np.sum(np.abs(f_sr) ** 2))
    if power_sr <= 0.0:
        raise ValueError("no power in the signal region; normalization undefined")
    w_sr = state.target_amplitude[mask]
    amp = np.abs(f_sr)
    sqrt_p = np.sqrt(power_sr)
    overlap = float(np.sum(w_sr * amp) / sqrt_p)
    steep = 10.0 ** state.steepness_d
    cost = steep * (1.0 - overlap) ** 2

    amp_safe = np.where(amp > 0.0, amp, 1.0)
    bracket = w_sr / (amp_safe * sqrt_p) - overlap / power_sr
    adj = np.zeros_like(out)
    adj[mask] = f_sr * bracket
    back = _ifft_centered(adj)
    lo = state.m // 2
    back_center = back[lo : lo + state.m, lo : lo + state.m]
    d_overlap = np.imag(np.conj(modulated) * back_center)
    grad = -2.0 * steep * (1.0 - overlap) * d_overlap
    return cost, grad


def optimize_phase(
    state: HologramState,
    illumination: np.ndarray | None = None,
    max_iters: int = 500,
    seed: int | None = None,
    grad_tol: float = 0.0,
) -> OptimizeResult:
    """Polak-Ribiere conjugate gradient with Armijo backtracking.

    The history holds the cost of every accepted iterate (non-increasing by
    construction). A failed line search stops early and flags the result.
    """
    if max_iters < 1:
        raise ValueError("max_iters must be >= 1")
    if illumination is None:
        illumination = uniform_illumination(state.m)
    if seed is not None:
        rng = np.random.default_rng(seed)
        state = replace(state, phase=rng.uniform(0.0, 2.0 * np.pi, size=(state.m, state.m)))
    else:
        state = replace(state, phase=state.phase.copy())

    phase = state.phase
    cost, grad = cost_and_gradient(replace(state, phase=phase), illumination)
    history = [cost]
    # an overlap deficit at roundoff level is a perfect match
    floor = 10.0 ** state.steepness_d * 1e-24
    if cost <= floor:
        return OptimizeResult(state=replace(state, phase=phase), history=np.asarray(history))

    direction = -grad
    step = 0.1 / max(float(np.max(np.abs(grad))), 1e-300)
    failed = False
    armijo = 1e-4
    for _ in range(max_iters):
        slope = float(np.sum(grad * direction))
        if slope >= 0.0:
            direction = -grad
            slope = -float(np.sum(grad * grad))
            if slope == 0.0:
                break
        alpha = step
        accepted = False
        for _ in range(50):
            trial_phase = phase + alpha * direction
            trial_cost, trial_grad = cost_and_gradient(
                replace(state, phase=trial_phase), illumination
            )
            if trial_cost <= cost + armijo * alpha * slope:
                accepted = True
                break
            alpha *= 0.5
        if not accepted:
            failed = True
            break
        phase = np.mod(trial_phase, 2.0 * np.pi)
        beta = float(
            max(0.0, np.sum(trial_grad * (trial_grad - grad)) / max(np.sum(grad * grad), 1e-300))
        )
        direction = -trial_grad + beta * direction
        cost, grad = trial_cost, trial_grad
        history.append(cost)
        step = 2.0 * alpha
        if cost <= floor or float(np.max(np.abs(grad))) <= grad_tol:
            break
    return OptimizeResult(
        state=replace(state, phase=phase),
        history=np.asarray(history),
        line_search_failed=failed,
    )


def extract_profile(field: OutputField, state: HologramState) -> PotentialGrid:
    """Invert the SR intensity row back to a potential on the design grid."""
    if state.target_map is None:
        raise ValueError("state carries no target map; build it with potential_to_target")
    mask = state.signal_mask
    rows = np.nonzero(mask.any(axis=1))[0]
    if rows.size != 1:
        raise ValueError("signal region must be a single pixel row")
    tmap = state.target_map
    intensity = np.abs(field.values[mask]) ** 2
    total = float(intensity.sum())
    if total <= 0.0:
        raise ValueError("no power in the signal region")
    v_sr = tmap.ceiling - intensity / total * tmap.norm
    x_sr = np.linspace(-tmap.span, tmap.span, tmap.sr_length)
    grid = Grid(half_width=tmap.grid_half_width, points=tmap.grid_points)
    spline = CubicSpline(x_sr, v_sr, bc_type="natural")
    values = np.where(np.abs(grid.x) <= tmap.span, spline(grid.x), tmap.asymptote)
    return PotentialGrid(
        grid=grid,
        values=values,
        asymptote=tmap.asymptote,
        even_symmetric=bool(np.array_equal(values, values[::-1])),
    )


def sr_intensity_error(field: OutputField, state: HologramState) -> float:
    """RMS fractional mismatch between normalized SR intensity and target."""
    mask = state.signal_mask
    intensity = np.abs(field.values[mask]) ** 2
    intensity = intensity / intensity.sum()
    target = state.target_amplitude[mask] ** 2
    target = target / target.sum()
    return float(np.sqrt(np.mean((intensity - target) ** 2)) / np.mean(target))
