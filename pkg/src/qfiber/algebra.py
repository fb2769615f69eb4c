"""Dense complex operator algebra on truncated Fock spaces.

Conventions:
    * A single mode truncated at ``n_max`` photons has dimension ``n_max + 1``
      with basis |0>, |1>, ..., |n_max>.
    * In a composite space, mode 0 is the slowest-varying index: the basis is
      enumerated as |n_0, n_1, ...> with n_0 outermost.
    * Truncation artifacts are kept visible: [a, a^dag] equals
      I - (n_max+1)|n_max><n_max| exactly, not the canonical identity.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

HERMITICITY_TOL = 1e-10
JACOBI_RELATIVE_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100


class DimensionMismatchError(ValueError):
    """Operands live on incompatible spaces."""


class NotHermitianError(ValueError):
    """A Hermitian matrix was required."""


@dataclass(frozen=True)
class ModeSpace:
    """Single optical mode truncated at ``n_max`` photons."""

    n_max: int

    def __post_init__(self):
        if self.n_max < 0:
            raise ValueError(f"n_max must be non-negative, got {self.n_max}")

    @property
    def dim(self) -> int:
        return self.n_max + 1


@dataclass(frozen=True)
class CompositeSpace:
    """Ordered tensor product of modes; mode 0 is the slowest index."""

    modes: tuple[ModeSpace, ...]

    def __post_init__(self):
        if not self.modes:
            raise ValueError("a composite space needs at least one mode")

    @classmethod
    def of(cls, *n_maxes: int) -> "CompositeSpace":
        return cls(tuple(ModeSpace(n) for n in n_maxes))

    @property
    def n_modes(self) -> int:
        return len(self.modes)

    @property
    def total_dim(self) -> int:
        d = 1
        for m in self.modes:
            d *= m.dim
        return d

    def index_of(self, occupations) -> int:
        """Flat basis index of |n_0, n_1, ...>."""
        if len(occupations) != self.n_modes:
            raise DimensionMismatchError(
                f"expected {self.n_modes} occupation numbers, got {len(occupations)}"
            )
        idx = 0
        for n, mode in zip(occupations, self.modes):
            if not 0 <= n <= mode.n_max:
                raise ValueError(f"occupation {n} outside [0, {mode.n_max}]")
            idx = idx * mode.dim + n
        return idx

    def occupations(self, index: int) -> tuple[int, ...]:
        """Inverse of index_of."""
        occ = []
        for mode in reversed(self.modes):
            occ.append(index % mode.dim)
            index //= mode.dim
        return tuple(reversed(occ))


@dataclass(frozen=True)
class Operator:
    """Dense complex matrix tagged with the composite space it acts on."""

    space: CompositeSpace
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (self.space.total_dim, self.space.total_dim):
            raise DimensionMismatchError(
                f"matrix shape {m.shape} does not match space dim {self.space.total_dim}"
            )
        if not np.all(np.isfinite(m)):
            raise ValueError("operator entries must be finite")
        object.__setattr__(self, "matrix", m)

    def _check_space(self, other: "Operator"):
        if self.space != other.space:
            raise DimensionMismatchError("operators act on different spaces")

    def __add__(self, other: "Operator") -> "Operator":
        self._check_space(other)
        return Operator(self.space, self.matrix + other.matrix)

    def __sub__(self, other: "Operator") -> "Operator":
        self._check_space(other)
        return Operator(self.space, self.matrix - other.matrix)

    def __mul__(self, scalar) -> "Operator":
        return Operator(self.space, self.matrix * complex(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "Operator":
        return Operator(self.space, -self.matrix)

    def __matmul__(self, other: "Operator") -> "Operator":
        self._check_space(other)
        return Operator(self.space, self.matrix @ other.matrix)

    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def herm_defect(self) -> float:
        """Max entry of |M - M^dag|."""
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def is_hermitian(self, tol: float = HERMITICITY_TOL) -> bool:
        return self.herm_defect() <= tol


def identity_op(space: CompositeSpace) -> Operator:
    return Operator(space, np.eye(space.total_dim, dtype=complex))


def annihilation_op(mode: ModeSpace) -> Operator:
    """Truncated annihilation matrix: a[n-1, n] = sqrt(n)."""
    d = mode.dim
    m = np.zeros((d, d), dtype=complex)
    for n in range(1, d):
        m[n - 1, n] = np.sqrt(n)
    return Operator(CompositeSpace((mode,)), m)


def creation_op(mode: ModeSpace) -> Operator:
    return dagger(annihilation_op(mode))


def number_op(mode: ModeSpace) -> Operator:
    return Operator(CompositeSpace((mode,)), np.diag(np.arange(mode.dim, dtype=float)).astype(complex))


def dagger(op: Operator) -> Operator:
    return Operator(op.space, op.matrix.conj().T)


def commutator(a: Operator, b: Operator) -> Operator:
    a._check_space(b)
    return Operator(a.space, a.matrix @ b.matrix - b.matrix @ a.matrix)


def anticommutator(a: Operator, b: Operator) -> Operator:
    a._check_space(b)
    return Operator(a.space, a.matrix @ b.matrix + b.matrix @ a.matrix)


def embed(op: Operator, mode_index: int, composite: CompositeSpace) -> Operator:
    """Kronecker-embed a single-mode operator at ``mode_index``.

    Mode 0 is the slowest index, so the product is
    I_0 x ... x op x ... x I_{last}.
    """
    if not 0 <= mode_index < composite.n_modes:
        raise DimensionMismatchError(f"mode_index {mode_index} out of range")
    if op.space.n_modes != 1 or op.space.modes[0] != composite.modes[mode_index]:
        raise DimensionMismatchError("operator space does not match the target mode")
    factors = [
        op.matrix if k == mode_index else np.eye(m.dim, dtype=complex)
        for k, m in enumerate(composite.modes)
    ]
    return Operator(composite, reduce(np.kron, factors))


def expectation(op: Operator, rho) -> complex:
    """Tr(op rho); ``rho`` is anything carrying .space and .matrix."""
    if op.space != rho.space:
        raise DimensionMismatchError("operator and state act on different spaces")
    return complex(np.trace(op.matrix @ rho.matrix))


def fock_state(space: CompositeSpace, occupations) -> np.ndarray:
    """Unit vector |n_0, n_1, ...>."""
    v = np.zeros(space.total_dim, dtype=complex)
    v[space.index_of(occupations)] = 1.0
    return v


def coherent_state(mode: ModeSpace, amplitude: complex) -> np.ndarray:
    """Truncated coherent state vector, renormalized after truncation."""
    v = np.zeros(mode.dim, dtype=complex)
    v[0] = 1.0
    for n in range(1, mode.dim):
        v[n] = v[n - 1] * amplitude / np.sqrt(n)
    return v / np.linalg.norm(v)


def _hermitian_eigenvalues_matrix(m: np.ndarray) -> np.ndarray:
    """Cyclic Jacobi eigenvalues of a Hermitian matrix, ascending.

    Rotations below the per-element threshold are skipped; convergence is
    declared when the off-diagonal Frobenius norm drops under
    JACOBI_RELATIVE_TOL times the matrix norm.
    """
    a = np.array(m, dtype=complex)
    n = a.shape[0]
    if n == 1:
        return np.array([a[0, 0].real])
    norm = np.linalg.norm(a)
    if norm == 0.0:
        return np.zeros(n)
    tol = JACOBI_RELATIVE_TOL * norm
    for _sweep in range(JACOBI_MAX_SWEEPS):
        off = np.linalg.norm(a - np.diag(np.diag(a)))
        if off <= tol:
            break
        skip = tol / n  # elements below this cannot matter this sweep
        for p in range(n - 1):
            row_p = np.abs(a[p, p + 1:])
            for q in (np.nonzero(row_p > skip)[0] + p + 1):
                apq = a[p, q]
                g = abs(apq)
                if g <= skip:
                    continue
                phase = apq / g
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * g)
                t = np.sign(tau) / (abs(tau) + np.sqrt(1.0 + tau * tau)) if tau != 0 else 1.0
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # U = [[c, s*phase], [-s*conj(phase)... ]] built from the
                # phase that makes the 2x2 block real, then a real rotation.
                u = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
                a[[p, q], :] = u.conj().T @ a[[p, q], :]
                a[:, [p, q]] = a[:, [p, q]] @ u
                a[p, q] = 0.0
                a[q, p] = 0.0
    else:
        raise RuntimeError("Jacobi eigenvalue iteration did not converge in 100 sweeps")
    return np.sort(np.diag(a).real)


def hermitian_eigenvalues(op: Operator) -> np.ndarray:
    """Real eigenvalues of a Hermitian operator, ascending (cyclic Jacobi)."""
    if not op.is_hermitian():
        raise NotHermitianError(
            f"matrix is not Hermitian within {HERMITICITY_TOL} (defect {op.herm_defect():.3e})"
        )
    return _hermitian_eigenvalues_matrix(op.matrix)
