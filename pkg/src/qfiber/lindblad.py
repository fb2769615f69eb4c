"""Master-equation right-hand side and fixed-step RK4 propagation in z.

Sign convention: d(rho)/dz = +i[H, rho] + sum_nu D[L_nu](rho), with the
dissipator D[L](rho) = L rho L^dag - (1/2){rho, L^dag L}.  The evolution
variable is fiber position (km), so H carries 1/km and each jump operator
carries 1/sqrt(km).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .algebra import (
    CompositeSpace,
    DimensionMismatchError,
    ModeSpace,
    Operator,
    _hermitian_eigenvalues_matrix,
    annihilation_op,
    coherent_state,
    embed,
    fock_state,
    number_op,
)

TRACE_TOL = 1e-9
HERM_TOL = 1e-10
POSITIVITY_TOL = -1e-8

ABORT_TRACE_DRIFT = 1e-6
ABORT_MIN_EIG = -1e-6


class PropagationAborted(RuntimeError):
    """An invariant drifted past its abort threshold during propagation."""

    def __init__(self, z_km: float, message: str):
        super().__init__(f"aborted at z = {z_km:.6g} km: {message}")
        self.z_km = z_km


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, positive-semidefinite state."""

    space: CompositeSpace
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        d = self.space.total_dim
        if m.shape != (d, d):
            raise DimensionMismatchError(f"matrix shape {m.shape} vs space dim {d}")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_vector(cls, space: CompositeSpace, psi: np.ndarray) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=complex)
        return cls(space, np.outer(psi, psi.conj()))

    @classmethod
    def vacuum(cls, space: CompositeSpace) -> "DensityMatrix":
        return cls.from_vector(space, fock_state(space, (0,) * space.n_modes))

    @classmethod
    def fock(cls, space: CompositeSpace, occupations) -> "DensityMatrix":
        return cls.from_vector(space, fock_state(space, occupations))

    @classmethod
    def coherent_product(cls, space: CompositeSpace, amplitudes) -> "DensityMatrix":
        """Product of truncated coherent states, one amplitude per mode."""
        if len(amplitudes) != space.n_modes:
            raise DimensionMismatchError("one amplitude per mode required")
        psi = np.array([1.0 + 0j])
        for mode, amp in zip(space.modes, amplitudes):
            psi = np.kron(psi, coherent_state(mode, amp))
        return cls.from_vector(space, psi)


@dataclass(frozen=True)
class LindbladSystem:
    """One Hermitian generator plus a list of jump operators."""

    space: CompositeSpace
    hamiltonian: Operator
    jumps: tuple[Operator, ...]

    def __post_init__(self):
        object.__setattr__(self, "jumps", tuple(self.jumps))
        if self.hamiltonian.space != self.space:
            raise DimensionMismatchError("Hamiltonian acts on a different space")
        for j in self.jumps:
            if j.space != self.space:
                raise DimensionMismatchError("jump operator acts on a different space")
        if not self.hamiltonian.is_hermitian():
            raise ValueError(
                f"Hamiltonian not Hermitian within {HERM_TOL} "
                f"(defect {self.hamiltonian.herm_defect():.3e})"
            )


@dataclass(frozen=True)
class IntegratorConfig:
    step_km: float = 1e-3
    rehermitize: bool = False
    monitor_every: int = 100

    def __post_init__(self):
        if self.step_km <= 0:
            raise ValueError("step_km must be positive")
        if self.monitor_every < 1:
            raise ValueError("monitor_every must be a positive integer")


@dataclass(frozen=True)
class InvariantRecord:
    trace_err: float
    herm_err: float
    min_eig: float


@dataclass(frozen=True)
class TrajectoryRecord:
    z_km: float
    number_means: tuple[float, ...]
    amp_means: tuple[complex, ...]
    joint_probs: np.ndarray | None  # (n0+1, n1+1) table, two-mode systems only
    invariants: InvariantRecord


@dataclass
class Trajectory:
    z_samples: list[float] = field(default_factory=list)
    records: list[TrajectoryRecord] = field(default_factory=list)
    final_state: DensityMatrix | None = None


class _Generator:
    """Precomputed arrays for fast repeated RHS evaluation."""

    def __init__(self, system: LindbladSystem):
        self.h = system.hamiltonian.matrix
        # identically-zero jumps contribute nothing; skip their matmuls
        self.ls = [j.matrix for j in system.jumps if np.any(j.matrix)]
        self.lds = [l.conj().T for l in self.ls]
        if self.ls:
            self.k = sum(ld @ l for l, ld in zip(self.ls, self.lds))
        else:
            self.k = None

    def apply(self, rho: np.ndarray) -> np.ndarray:
        h = self.h
        out = 1j * (h @ rho - rho @ h)
        if self.k is not None:
            for l, ld in zip(self.ls, self.lds):
                out += l @ rho @ ld
            out -= 0.5 * (self.k @ rho + rho @ self.k)
        return out

    def rk4(self, rho: np.ndarray, h: float) -> np.ndarray:
        k1 = self.apply(rho)
        k2 = self.apply(rho + 0.5 * h * k1)
        k3 = self.apply(rho + 0.5 * h * k2)
        k4 = self.apply(rho + h * k3)
        return rho + (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)


def lindblad_rhs(system: LindbladSystem, rho: DensityMatrix) -> np.ndarray:
    """d(rho)/dz as a dense matrix, units 1/km."""
    if system.space != rho.space:
        raise DimensionMismatchError("system and state act on different spaces")
    return _Generator(system).apply(rho.matrix)


def monitor_invariants(rho: DensityMatrix) -> InvariantRecord:
    m = rho.matrix
    trace_err = abs(np.trace(m).real - 1.0) + abs(np.trace(m).imag)
    herm_err = float(np.max(np.abs(m - m.conj().T)))
    sym = 0.5 * (m + m.conj().T)
    min_eig = float(_hermitian_eigenvalues_matrix(sym)[0])
    return InvariantRecord(trace_err=trace_err, herm_err=herm_err, min_eig=min_eig)


def step_rk4(
    system: LindbladSystem,
    rho: DensityMatrix,
    h: float,
    rehermitize: bool = False,
) -> DensityMatrix:
    """One classical RK4 step of the master equation."""
    if h <= 0:
        raise ValueError("step size must be positive")
    if system.space != rho.space:
        raise DimensionMismatchError("system and state act on different spaces")
    out = _Generator(system).rk4(rho.matrix, h)
    if rehermitize:
        out = 0.5 * (out + out.conj().T)
    return DensityMatrix(system.space, out)


def _mode_operators(space: CompositeSpace):
    """Embedded (a, n) matrices per mode."""
    ops = []
    for k, mode in enumerate(space.modes):
        a = embed(annihilation_op(mode), k, space).matrix
        n = embed(number_op(mode), k, space).matrix
        ops.append((a, n))
    return ops


def _record(space, mode_ops, rho_m: np.ndarray, z: float) -> TrajectoryRecord:
    number_means = tuple(float(np.trace(n @ rho_m).real) for _, n in mode_ops)
    amp_means = tuple(complex(np.trace(a @ rho_m)) for a, _ in mode_ops)
    joint = None
    if space.n_modes == 2:
        d0, d1 = space.modes[0].dim, space.modes[1].dim
        joint = np.diag(rho_m).real.reshape(d0, d1).copy()
    tr = np.trace(rho_m)
    trace_err = abs(tr.real - 1.0) + abs(tr.imag)
    herm_err = float(np.max(np.abs(rho_m - rho_m.conj().T)))
    sym = 0.5 * (rho_m + rho_m.conj().T)
    min_eig = float(_hermitian_eigenvalues_matrix(sym)[0])
    return TrajectoryRecord(
        z_km=z,
        number_means=number_means,
        amp_means=amp_means,
        joint_probs=joint,
        invariants=InvariantRecord(trace_err, herm_err, min_eig),
    )


def _check_abort(rho_m: np.ndarray, z: float):
    tr = np.trace(rho_m)
    drift = abs(tr.real - 1.0) + abs(tr.imag)
    if drift > ABORT_TRACE_DRIFT:
        raise PropagationAborted(z, f"trace drift {drift:.3e} exceeds {ABORT_TRACE_DRIFT}")
    sym = 0.5 * (rho_m + rho_m.conj().T)
    min_eig = float(_hermitian_eigenvalues_matrix(sym)[0])
    if min_eig < ABORT_MIN_EIG:
        raise PropagationAborted(z, f"min eigenvalue {min_eig:.3e} below {ABORT_MIN_EIG}")


def propagate(
    system: LindbladSystem,
    rho0: DensityMatrix,
    length_km: float,
    config: IntegratorConfig = IntegratorConfig(),
    sample_points=None,
) -> Trajectory:
    """Integrate from z = 0 to ``length_km``, recording observables.

    ``sample_points`` is an increasing sequence starting at 0; it defaults to
    51 equispaced points.  Integration lands exactly on every sample point
    (the last step into a sample may be shorter than the configured step).
    A zero-length run yields the single initial record.
    """
    if length_km < 0:
        raise ValueError("length_km must be non-negative")
    if system.space != rho0.space:
        raise DimensionMismatchError("system and state act on different spaces")

    if sample_points is None:
        if length_km == 0.0:
            sample_points = [0.0]
        else:
            sample_points = np.linspace(0.0, length_km, 51)
    sample_points = [float(z) for z in sample_points]
    if not sample_points or abs(sample_points[0]) > 1e-15:
        raise ValueError("sample points must start at z = 0")
    if any(b <= a for a, b in zip(sample_points, sample_points[1:])):
        raise ValueError("sample points must be strictly increasing")
    if sample_points[-1] > length_km * (1 + 1e-12) + 1e-15:
        raise ValueError("sample points must not exceed the fiber length")

    gen = _Generator(system)
    mode_ops = _mode_operators(system.space)
    rho_m = rho0.matrix.copy()

    traj = Trajectory()
    traj.z_samples.append(0.0)
    traj.records.append(_record(system.space, mode_ops, rho_m, 0.0))

    h = config.step_km
    z = 0.0
    steps_since_monitor = 0
    for z_target in sample_points[1:]:
        while z < z_target - 1e-12:
            step = min(h, z_target - z)
            rho_m = gen.rk4(rho_m, step)
            if config.rehermitize:
                rho_m = 0.5 * (rho_m + rho_m.conj().T)
            z += step
            steps_since_monitor += 1
            if steps_since_monitor >= config.monitor_every:
                _check_abort(rho_m, z)
                steps_since_monitor = 0
        z = z_target
        traj.z_samples.append(z)
        rec = _record(system.space, mode_ops, rho_m, z)
        traj.records.append(rec)
        if rec.invariants.trace_err > ABORT_TRACE_DRIFT or rec.invariants.min_eig < ABORT_MIN_EIG:
            raise PropagationAborted(z, "invariant breach at sample point")

    traj.final_state = DensityMatrix(system.space, rho_m)
    return traj


def superoperator(system: LindbladSystem) -> np.ndarray:
    """Full generator as a dense matrix acting on vec(rho), column-major vec.

    Useful to compare two systems for equality independent of the ordering
    or global phases of their jump lists.
    """
    d = system.space.total_dim
    eye = np.eye(d)
    h = system.hamiltonian.matrix
    s = 1j * (np.kron(eye, h) - np.kron(h.T, eye))
    for j in system.jumps:
        l = j.matrix
        ld = l.conj().T
        k = ld @ l
        s += np.kron(l.conj(), l)
        s -= 0.5 * (np.kron(eye, k) + np.kron(k.T, eye))
    return s
