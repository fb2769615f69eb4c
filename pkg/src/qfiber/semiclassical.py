"""Mean-field cross-validation solvers.

Three independent pieces:

* ``mean_field_rhs`` / ``integrate_mean_field`` -- the classical limit of the
  quantum mean-value evolution on a discrete frequency grid, with the
  self-steepening factor (1 + w/omega0) and the spontaneous-scattering pump
  loss as separately toggleable terms.  Triple moments are factorized
  classically (<A^dag A A> -> A* A A); all integrals are Riemann sums with
  spacing delta_w so the quantum and classical modules share identical
  discrete sums.
* ``pump_depletion`` -- closed-form exponential decay of a strong carrier
  from spontaneous scattering into the Stokes band.
* ``reduced_mean_field`` -- the closed linear first-moment equations of the
  two-mode reduced models, integrated with RK4.  Because those generators are
  quadratic, the first moments close exactly; this is the oracle used to
  cross-check the density-matrix engine.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .models import HBAR, BSParams, MultimodeParams, SpFWMParams


@dataclass(frozen=True)
class MeanFieldConfig:
    step_km: float = 1e-3
    include_self_steepening: bool = True
    include_sprs_loss: bool = True

    def __post_init__(self):
        if self.step_km <= 0:
            raise ValueError("step_km must be positive")


@dataclass(frozen=True)
class SpectralField:
    """Complex amplitude per grid mode, units sqrt(W) s/rad."""

    grid: MultimodeParams
    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex)
        if a.shape != (len(self.grid.mode_freqs),):
            raise ValueError("one amplitude per grid mode required")
        if not np.all(np.isfinite(a)):
            raise ValueError("amplitudes must be finite")
        object.__setattr__(self, "amplitudes", a)

    def powers(self) -> np.ndarray:
        """Per-mode optical power |A|^2 delta_w^2 / (2 pi), W.

        Matches the carrier normalization A = sqrt(2 pi P) / delta_w, under
        which the single-mode nonlinear term reduces to the usual gamma P
        self-phase-modulation rate.
        """
        return np.abs(self.amplitudes) ** 2 * self.grid.delta_w**2 / (2.0 * np.pi)


def _sprs_rate(grid: MultimodeParams) -> float:
    """2 gamma_tilde sum_{mu>0} R^I_mu hbar (omega0 - mu) delta_w, km^-1.

    The quadrature underlying both the pump-depletion law and the per-mode
    linear loss term (which additionally rescales omega0 -> omega_m).
    """
    total = 0.0
    for j, v in grid.raman_imag.items():
        if j > 0 and v != 0.0:
            total += v * HBAR * (grid.omega0 - j * grid.delta_w) * grid.delta_w
    return 2.0 * grid.gamma_tilde * total


def mean_field_rhs(field: SpectralField, config: MeanFieldConfig = MeanFieldConfig()) -> np.ndarray:
    """dA/dz per mode, open-boundary convention for off-grid indices."""
    grid = field.grid
    a = field.amplitudes
    indices = grid._grid_indices()
    pos_of = {idx: p for p, idx in enumerate(indices)}
    npos = len(indices)
    gt = grid.gamma_tilde
    dw2 = grid.delta_w**2

    out = np.empty(npos, dtype=complex)
    for m in range(npos):
        w_m = grid.mode_freqs[m]
        steep = 1.0 + w_m / grid.omega0 if config.include_self_steepening else 1.0
        val = (-0.5 * grid.alpha[m] + 1j * grid.beta[m]) * a[m]

        nl = 0.0 + 0.0j
        for k in range(npos):  # k realizes the m - mu slot
            j = indices[m] - indices[k]
            r = grid.rr(j) + 1j * grid.ri(j)
            if r == 0.0:
                continue
            for p in range(npos):
                tgt = indices[p] + j
                if tgt in pos_of:
                    nl += r * np.conj(a[p]) * a[k] * a[pos_of[tgt]]
        val += 1j * gt * steep * nl * dw2

        if config.include_sprs_loss:
            loss = 0.0
            for j, v in grid.raman_imag.items():
                if j > 0 and v != 0.0:
                    loss += v * HBAR * (grid.omega0 + w_m - j * grid.delta_w) * grid.delta_w
            val -= gt * steep * loss * a[m]

        out[m] = val
    return out


def integrate_mean_field(
    field: SpectralField,
    length_km: float,
    config: MeanFieldConfig = MeanFieldConfig(),
    sample_points=None,
):
    """RK4 integration of the mean field; returns (z array, amplitude rows)."""
    if length_km < 0:
        raise ValueError("length_km must be non-negative")
    if sample_points is None:
        sample_points = [0.0] if length_km == 0 else np.linspace(0.0, length_km, 51)
    sample_points = [float(z) for z in sample_points]

    def rhs(a):
        return mean_field_rhs(SpectralField(field.grid, a), config)

    a = field.amplitudes.copy()
    h = config.step_km
    z = 0.0
    rows = [a.copy()]
    for z_target in sample_points[1:]:
        while z < z_target - 1e-12:
            step = min(h, z_target - z)
            k1 = rhs(a)
            k2 = rhs(a + 0.5 * step * k1)
            k3 = rhs(a + 0.5 * step * k2)
            k4 = rhs(a + step * k3)
            a = a + (step / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
            z += step
        z = z_target
        rows.append(a.copy())
    return np.array(sample_points), np.array(rows)


def pump_depletion(power_w: float, z_km: float, grid: MultimodeParams) -> float:
    """Carrier power after spontaneous-scattering depletion over z_km."""
    if power_w < 0:
        raise ValueError("power must be non-negative")
    return power_w * np.exp(-_sprs_rate(grid) * z_km)


def spfwm_moment_matrix(params: SpFWMParams) -> np.ndarray:
    """Generator of the closed (⟨b_s⟩, ⟨b_i^dag⟩) linear system, km^-1.

    Derived by tracing the annihilation operators against the master
    equation with canonical commutators.
    """
    kappa = params.coupling
    r = params.gamma * params.pump_power * params.raman_imag
    return np.array(
        [
            [1j * params.k_s - 0.5 * params.alpha_s - r, 1j * kappa - r],
            [-1j * kappa + r, -1j * params.k_i - 0.5 * params.alpha_i + r],
        ]
    )


def bs_moment_matrix(params: BSParams) -> np.ndarray:
    """Generator of the closed (⟨b_s⟩, ⟨b_i⟩) linear system, km^-1."""
    g = params.coupling
    gp = params.gamma * params.pump_power
    cross = gp * params.ri_span
    return np.array(
        [
            [
                1j * params.k_s - 0.5 * params.alpha_s - gp * params.ri_span_minus_gap - cross,
                1j * g - cross,
            ],
            [
                1j * g - cross,
                1j * params.k_i - 0.5 * params.alpha_i - gp * params.ri_span_plus_gap - cross,
            ],
        ]
    )


def reduced_mean_field(
    params,
    initial_means,
    length_km: float,
    step_km: float = 1e-3,
    sample_points=None,
):
    """First-moment trajectory of a reduced model.

    For pair generation the state vector is (⟨b_s⟩, ⟨b_i^dag⟩); for frequency
    translation it is (⟨b_s⟩, ⟨b_i⟩).  Returns (z array, 2-column complex
    array of the state vector at each sample).
    """
    if isinstance(params, SpFWMParams):
        m = spfwm_moment_matrix(params)
    elif isinstance(params, BSParams):
        m = bs_moment_matrix(params)
    else:
        raise TypeError(f"unsupported parameter type {type(params).__name__}")
    if sample_points is None:
        sample_points = [0.0] if length_km == 0 else np.linspace(0.0, length_km, 51)
    sample_points = [float(z) for z in sample_points]

    x = np.asarray(initial_means, dtype=complex)
    if x.shape != (2,):
        raise ValueError("two initial means required")
    z = 0.0
    rows = [x.copy()]
    for z_target in sample_points[1:]:
        while z < z_target - 1e-12:
            step = min(step_km, z_target - z)
            k1 = m @ x
            k2 = m @ (x + 0.5 * step * k1)
            k3 = m @ (x + 0.5 * step * k2)
            k4 = m @ (x + step * k3)
            x = x + (step / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
            z += step
        z = z_target
        rows.append(x.copy())
    return np.array(sample_points), np.array(rows)
