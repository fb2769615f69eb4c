"""Builders for the fiber master-equation systems.

Three constructions share one LindbladSystem contract:

* ``build_spfwm``  -- degenerate spontaneous four-wave mixing with one strong
  classical pump: signal/idler pair generation plus loss and Raman jumps.
* ``build_bragg``  -- frequency translation by Bragg scattering with two
  strong classical pumps: signal<->idler photon exchange plus loss and Raman.
* ``build_multimode`` -- the general discretized master equation on a uniform
  frequency grid, optionally with classical pump substitutions that reduce it
  to a small-signal system on the remaining quantum modes.

The reduced builders take the published operator forms verbatim.  Naming used
throughout for the Bragg-scattering Raman response samples: ``gap`` is the
pump-pump spacing (equal to the signal-idler spacing) and ``span`` is the
distance from the pump pair to the signal pair, so the three dissipative
detunings are span-gap (pump2 -> signal), span (cross) and span+gap
(pump1 -> idler).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    CompositeSpace,
    ModeSpace,
    Operator,
    annihilation_op,
    dagger,
    embed,
    number_op,
)
from .lindblad import LindbladSystem

HBAR = 1.0545718e-34  # J s
OMEGA0_DEFAULT = 2.0 * np.pi * 193.1e12  # rad/s, C-band carrier


def _require_nonneg(**kwargs):
    for name, value in kwargs.items():
        if value < 0:
            raise ValueError(f"{name} must be non-negative, got {value}")


@dataclass(frozen=True)
class SpFWMParams:
    """Degenerate-pump pair-generation model parameters.

    ``raman_real``/``raman_imag`` are the nonlinear-response samples at the
    pump-to-signal detuning.  Pump loss is not modelled (classical undepleted
    pump).
    """

    gamma: float  # W^-1 km^-1
    pump_power: float  # W
    alpha_s: float = 0.0  # km^-1
    alpha_i: float = 0.0  # km^-1
    raman_real: float = 1.0
    raman_imag: float = 0.0
    beta_p: float = 0.0  # km^-1
    beta_s: float = 0.0
    beta_i: float = 0.0
    length_km: float = 5.0
    n_max: int = 10

    def __post_init__(self):
        _require_nonneg(
            gamma=self.gamma,
            pump_power=self.pump_power,
            alpha_s=self.alpha_s,
            alpha_i=self.alpha_i,
            raman_imag=self.raman_imag,
            length_km=self.length_km,
        )
        if self.n_max < 0:
            raise ValueError("n_max must be non-negative")

    @property
    def coupling(self) -> float:
        """Pair-generation rate gamma P R^R, km^-1."""
        return self.gamma * self.pump_power * self.raman_real

    @property
    def k_s(self) -> float:
        return self.beta_s + self.gamma * self.pump_power * (1.0 + self.raman_real)

    @property
    def k_i(self) -> float:
        return self.beta_i + self.gamma * self.pump_power * (1.0 + self.raman_real)

    @property
    def k_p(self) -> float:
        return self.beta_p + self.gamma * self.pump_power


@dataclass(frozen=True)
class BSParams:
    """Two-pump frequency-translation model parameters.

    The ``rr_span_minus_gap``/``rr_span_plus_gap`` samples enter only the
    published wavenumber formulas; they default to 1.0, consistent with the
    flat response used in the reference parameter set.
    """

    gamma: float
    pump_power: float  # per pump, W
    alpha_s: float = 0.0
    alpha_i: float = 0.0
    rr_gap: float = 1.0  # R^R at the pump spacing
    rr_span: float = 1.0  # R^R at the pump-to-signal span
    rr_span_minus_gap: float = 1.0
    rr_span_plus_gap: float = 1.0
    ri_span: float = 0.0  # R^I at the span detuning (cross jump)
    ri_span_minus_gap: float = 0.0
    ri_span_plus_gap: float = 0.0
    beta_s: float = 0.0
    beta_i: float = 0.0
    beta_p1: float = 0.0
    beta_p2: float = 0.0
    length_km: float = 5.0
    n_max: int = 1

    def __post_init__(self):
        _require_nonneg(
            gamma=self.gamma,
            pump_power=self.pump_power,
            alpha_s=self.alpha_s,
            alpha_i=self.alpha_i,
            ri_span=self.ri_span,
            ri_span_minus_gap=self.ri_span_minus_gap,
            ri_span_plus_gap=self.ri_span_plus_gap,
            length_km=self.length_km,
        )
        if self.n_max < 0:
            raise ValueError("n_max must be non-negative")

    @property
    def coupling(self) -> float:
        """Signal-idler exchange rate gamma P (R^R_gap + R^R_span), km^-1."""
        return self.gamma * self.pump_power * (self.rr_gap + self.rr_span)

    @property
    def k_s(self) -> float:
        gp = self.gamma * self.pump_power
        return self.beta_s + 2.0 * gp * (self.rr_span + self.rr_span_minus_gap)

    @property
    def k_i(self) -> float:
        gp = self.gamma * self.pump_power
        return self.beta_i + 2.0 * gp * (self.rr_span + self.rr_span_plus_gap)

    @property
    def k_p1(self) -> float:
        return self.beta_p1 + self.gamma * self.pump_power * (2.0 + self.rr_gap)

    @property
    def k_p2(self) -> float:
        return self.beta_p2 + self.gamma * self.pump_power * (2.0 + self.rr_gap)


@dataclass(frozen=True)
class PumpWave:
    """Classical pump substitution: amplitude sqrt(2 pi P)/dw and wavenumber."""

    amplitude: complex
    wavenumber: float  # km^-1

    @classmethod
    def from_power(cls, power_w: float, delta_w: float, wavenumber: float = 0.0) -> "PumpWave":
        _require_nonneg(power_w=power_w)
        return cls(amplitude=np.sqrt(2.0 * np.pi * power_w) / delta_w, wavenumber=wavenumber)


@dataclass(frozen=True)
class MultimodeParams:
    """Uniform frequency grid for the discretized master equation.

    ``mode_freqs`` are detunings from the carrier in rad/s and must sit on the
    grid (integer multiples of ``delta_w``).  Raman tables map integer
    detuning indices to response samples; lookups outside the tabulated
    support return 0.  The real table must be even and the imaginary table
    odd (with non-negative values at positive detunings, since they scale
    jump rates).
    """

    mode_freqs: tuple[float, ...]
    delta_w: float  # rad/s
    beta: tuple[float, ...]  # km^-1 per mode
    alpha: tuple[float, ...]  # km^-1 per mode
    raman_real: dict[int, float] = field(default_factory=dict)
    raman_imag: dict[int, float] = field(default_factory=dict)
    gamma: float = 1.0
    omega0: float = OMEGA0_DEFAULT
    pump_substitutions: dict[int, PumpWave] = field(default_factory=dict)
    n_max: int = 1
    central_freq_approx: bool = False
    dim_cap: int = 4096

    def __post_init__(self):
        object.__setattr__(self, "mode_freqs", tuple(float(w) for w in self.mode_freqs))
        object.__setattr__(self, "beta", tuple(float(b) for b in self.beta))
        object.__setattr__(self, "alpha", tuple(float(a) for a in self.alpha))
        if self.delta_w <= 0:
            raise ValueError("delta_w must be positive")
        if len(self.beta) != len(self.mode_freqs) or len(self.alpha) != len(self.mode_freqs):
            raise ValueError("beta and alpha need one entry per mode")
        _require_nonneg(gamma=self.gamma, **{f"alpha[{k}]": a for k, a in enumerate(self.alpha)})
        if self.n_max < 0:
            raise ValueError("n_max must be non-negative")
        if len(set(self._grid_indices())) != len(self.mode_freqs):
            raise ValueError("duplicate mode frequencies")
        for pos in self.pump_substitutions:
            if not 0 <= pos < len(self.mode_freqs):
                raise ValueError(f"pump substitution index {pos} out of range")
        self._validate_raman_tables()

    def _grid_indices(self) -> tuple[int, ...]:
        out = []
        for w in self.mode_freqs:
            ratio = w / self.delta_w
            idx = round(ratio)
            if abs(ratio - idx) > 1e-9:
                raise ValueError(f"mode detuning {w} is not on the delta_w grid")
            out.append(int(idx))
        return tuple(out)

    def _validate_raman_tables(self):
        for j, v in self.raman_real.items():
            if -j in self.raman_real and abs(self.raman_real[-j] - v) > 1e-12:
                raise ValueError(f"real response table not even at detuning index {j}")
        for j, v in self.raman_imag.items():
            if -j in self.raman_imag and abs(self.raman_imag[-j] + v) > 1e-12:
                raise ValueError(f"imaginary response table not odd at detuning index {j}")
            if j == 0 and abs(v) > 1e-12:
                raise ValueError("imaginary response must vanish at zero detuning")
            if j > 0 and v < 0:
                raise ValueError(f"imaginary response at positive detuning {j} must be >= 0")
            # the spontaneous-scattering quadrature ħ(ω0 - μ) changes sign at
            # μ = ω0; require table support well inside that, at μ < ω0/2
            if j > 0 and v != 0.0 and j * self.delta_w >= 0.5 * self.omega0:
                raise ValueError(
                    f"imaginary response support at index {j} reaches beyond half the carrier"
                )

    def rr(self, j: int) -> float:
        """Even-symmetrized real response at detuning index j (0 off-table)."""
        if j in self.raman_real:
            return self.raman_real[j]
        if -j in self.raman_real:
            return self.raman_real[-j]
        return 0.0

    def ri(self, j: int) -> float:
        """Odd-symmetrized imaginary response at detuning index j (0 off-table)."""
        if j in self.raman_imag:
            return self.raman_imag[j]
        if -j in self.raman_imag:
            return -self.raman_imag[-j]
        return 0.0

    def omega(self, grid_index: int) -> float:
        """Absolute photon frequency of a grid index, rad/s."""
        return self.omega0 + grid_index * self.delta_w

    @property
    def gamma_tilde(self) -> float:
        return self.gamma / (2.0 * np.pi)

    def quantum_positions(self) -> list[int]:
        return [p for p in range(len(self.mode_freqs)) if p not in self.pump_substitutions]


@dataclass(frozen=True)
class PhaseMatchReport:
    wavenumbers: dict[str, float]  # km^-1 per wave
    mismatch: float  # km^-1

    @property
    def matched(self) -> bool:
        return abs(self.mismatch) <= 1e-9


def _two_mode_ops(n_max: int):
    space = CompositeSpace.of(n_max, n_max)
    mode = ModeSpace(n_max)
    b_s = embed(annihilation_op(mode), 0, space)
    b_i = embed(annihilation_op(mode), 1, space)
    n_s = embed(number_op(mode), 0, space)
    n_i = embed(number_op(mode), 1, space)
    return space, b_s, b_i, n_s, n_i


def build_spfwm(params: SpFWMParams) -> LindbladSystem:
    """Two-mode (signal, idler) pair-generation system."""
    space, b_s, b_i, n_s, n_i = _two_mode_ops(params.n_max)
    kappa = params.coupling
    h = params.k_s * n_s + params.k_i * n_i + kappa * (
        dagger(b_s) @ dagger(b_i) + b_s @ b_i
    )
    jumps = [np.sqrt(params.alpha_s) * b_s, np.sqrt(params.alpha_i) * b_i]
    r = params.gamma * params.pump_power * params.raman_imag
    if r > 0:
        jumps.append(np.sqrt(2.0 * r) * (b_s + dagger(b_i)))
    return LindbladSystem(space, h, tuple(jumps))


def build_bragg(params: BSParams) -> LindbladSystem:
    """Two-mode (signal, idler) frequency-translation system."""
    space, b_s, b_i, n_s, n_i = _two_mode_ops(params.n_max)
    g = params.coupling
    h = params.k_s * n_s + params.k_i * n_i + g * (
        dagger(b_s) @ b_i + dagger(b_i) @ b_s
    )
    gp = params.gamma * params.pump_power
    jumps = [np.sqrt(params.alpha_s) * b_s, np.sqrt(params.alpha_i) * b_i]
    if params.ri_span_minus_gap > 0:
        jumps.append(np.sqrt(2.0 * gp * params.ri_span_minus_gap) * b_s)
    if params.ri_span_plus_gap > 0:
        jumps.append(np.sqrt(2.0 * gp * params.ri_span_plus_gap) * b_i)
    if params.ri_span > 0:
        jumps.append(np.sqrt(2.0 * gp * params.ri_span) * (b_s + b_i))
    return LindbladSystem(space, h, tuple(jumps))


class _Slot:
    """One factor of a normal-ordered product: classical pump or quantum mode."""

    def __init__(self, scalar: complex, matrix: np.ndarray | None):
        self.scalar = scalar
        self.matrix = matrix  # None for pump slots


def _term(slots: list[_Slot], base: complex) -> tuple[int, complex, np.ndarray | None]:
    """Collapse slots into (quantum count, scalar coefficient, operator product)."""
    coeff = base
    product = None
    count = 0
    for s in slots:
        coeff *= s.scalar
        if s.matrix is not None:
            count += 1
            product = s.matrix if product is None else product @ s.matrix
    return count, coeff, product


def build_multimode(params: MultimodeParams) -> LindbladSystem:
    """Discretized multimode master equation on the grid.

    With pump substitutions present the construction is the small-signal
    reduction: terms beyond quadratic in the quantum operators are dropped,
    as are additive constants (including pure pump-pump scattering components
    of the jump operators, which only renormalize the undepleted classical
    pumps).  Pump phases are evaluated at z = 0; under the phase-matched
    rotating frame the resulting generator is z-independent.
    """
    indices = params._grid_indices()
    pos_of = {idx: p for p, idx in enumerate(indices)}
    quantum = params.quantum_positions()
    if not quantum:
        raise ValueError("at least one non-substituted mode is required")
    dim = (params.n_max + 1) ** len(quantum)
    if dim > params.dim_cap:
        raise ValueError(
            f"total dimension {dim} exceeds cap {params.dim_cap}; "
            f"raise dim_cap to at least {dim} or reduce n_max/mode count"
        )
    if params.n_max == 0:
        warnings.warn("n_max = 0: all quantum modes are frozen vacuum spectators")

    space = CompositeSpace.of(*([params.n_max] * len(quantum)))
    qslot = {p: k for k, p in enumerate(quantum)}
    mode = ModeSpace(params.n_max)
    ann = {p: embed(annihilation_op(mode), qslot[p], space).matrix for p in quantum}
    num = {p: embed(number_op(mode), qslot[p], space).matrix for p in quantum}
    substituted = bool(params.pump_substitutions)

    def slot(pos: int, creator: bool) -> _Slot:
        if pos in params.pump_substitutions:
            amp = complex(params.pump_substitutions[pos].amplitude)
            return _Slot(np.conj(amp) if creator else amp, None)
        omega = params.omega0 if params.central_freq_approx else params.omega(indices[pos])
        scale = np.sqrt(HBAR * omega / params.delta_w)
        m = ann[pos].conj().T if creator else ann[pos]
        return _Slot(scale, m)

    h = np.zeros((dim, dim), dtype=complex)
    for p in quantum:
        h += params.beta[p] * num[p]

    # four-wave-mixing sum: creators at m, n; annihilators at m-j, n+j
    gt = params.gamma_tilde
    npos = len(indices)
    for m in range(npos):
        for k in range(npos):  # k realizes the m-j slot
            j = indices[m] - indices[k]
            rr = params.rr(j)
            if rr == 0.0:
                continue
            base = gt * rr * params.delta_w**3 / (2.0 * HBAR * params.omega0)
            for n in range(npos):
                target = indices[n] + j
                if target not in pos_of:
                    continue
                l = pos_of[target]
                count, coeff, product = _term(
                    [slot(m, True), slot(n, True), slot(k, False), slot(l, False)], base
                )
                if count == 0:
                    continue  # constant offset, dropped
                if substituted and count != 2:
                    continue  # small-signal reduction
                h += coeff * product

    jumps = []
    for p in quantum:
        jumps.append(Operator(space, np.sqrt(params.alpha[p]) * ann[p]))

    # Raman jumps, one per positive detuning index with nonzero response:
    # creator at m - n, annihilator at m, folded sqrt(delta_w) weight
    max_span = max(indices) - min(indices)
    for n in range(1, max_span + 1):
        ri = params.ri(n)
        if ri <= 0.0:
            continue
        base = np.sqrt(2.0 * gt * ri / (HBAR * params.omega0)) * params.delta_w**1.5
        acc = np.zeros((dim, dim), dtype=complex)
        found = False
        for m in range(npos):
            src = indices[m] - n
            if src not in pos_of:
                continue
            count, coeff, product = _term([slot(pos_of[src], True), slot(m, False)], base)
            if count == 0:
                continue
            if substituted and count != 1:
                continue
            acc += coeff * product
            found = True
        if found and np.any(acc != 0):
            jumps.append(Operator(space, acc))

    return LindbladSystem(space, Operator(space, h), tuple(jumps))


def rotating_frame(system: LindbladSystem, k_shifts) -> LindbladSystem:
    """Remove per-mode wavenumbers from the Hamiltonian diagonal.

    Jump operators pick up only global phases under the frame change; they
    are rephased so the leading (first nonzero) coefficient is real-positive.
    """
    k_shifts = tuple(float(k) for k in k_shifts)
    if len(k_shifts) != system.space.n_modes:
        raise ValueError("one shift per mode required")
    h = system.hamiltonian
    for idx, (shift, mode) in enumerate(zip(k_shifts, system.space.modes)):
        h = h - shift * embed(number_op(mode), idx, system.space)
    jumps = []
    for j in system.jumps:
        flat = j.matrix.ravel()
        nz = np.nonzero(np.abs(flat) > 1e-14)[0]
        if nz.size:
            lead = flat[nz[0]]
            j = (abs(lead) / lead) * j
        jumps.append(j)
    return LindbladSystem(system.space, h, tuple(jumps))


def phase_match(params) -> PhaseMatchReport:
    """Wavenumber bookkeeping for either reduced model."""
    if isinstance(params, SpFWMParams):
        ks = {"pump": params.k_p, "signal": params.k_s, "idler": params.k_i}
        mismatch = 2.0 * ks["pump"] - ks["signal"] - ks["idler"]
        return PhaseMatchReport(ks, mismatch)
    if isinstance(params, BSParams):
        ks = {
            "pump1": params.k_p1,
            "pump2": params.k_p2,
            "signal": params.k_s,
            "idler": params.k_i,
        }
        mismatch = ks["pump1"] - ks["pump2"] + ks["idler"] - ks["signal"]
        return PhaseMatchReport(ks, mismatch)
    raise TypeError(f"unsupported parameter type {type(params).__name__}")
