"""Operator algebra on truncated Fock spaces."""
import numpy as np
import pytest

from qfiber.algebra import (
    CompositeSpace,
    DimensionMismatchError,
    ModeSpace,
    NotHermitianError,
    Operator,
    _hermitian_eigenvalues_matrix,
    annihilation_op,
    anticommutator,
    coherent_state,
    commutator,
    creation_op,
    dagger,
    embed,
    expectation,
    fock_state,
    hermitian_eigenvalues,
    identity_op,
    number_op,
)


def test_annihilation_matrix_entries():
    a = annihilation_op(ModeSpace(3)).matrix
    expected = np.zeros((4, 4))
    for n in range(1, 4):
        expected[n - 1, n] = np.sqrt(n)
    assert np.array_equal(a, expected)


def test_creation_is_dagger_of_annihilation():
    mode = ModeSpace(4)
    assert np.array_equal(creation_op(mode).matrix, annihilation_op(mode).matrix.conj().T)


def test_truncated_commutator_identity():
    # [a, a^dag] = 1 - (n_max+1)|n_max><n_max| on the truncated space, exactly
    n_max = 5
    a = annihilation_op(ModeSpace(n_max))
    c = commutator(a, dagger(a)).matrix
    expected = np.eye(n_max + 1, dtype=complex)
    expected[n_max, n_max] = -(n_max + 1) + 1
    # sqrt(n)*sqrt(n) rounds at the last bit for non-square n
    assert np.max(np.abs(c - expected)) < 1e-15 * (n_max + 1)


def test_number_operator_diagonal():
    n = number_op(ModeSpace(6)).matrix
    assert np.array_equal(np.diag(n).real, np.arange(7))


def test_composite_index_round_trip():
    space = CompositeSpace.of(2, 3, 1)
    assert space.total_dim == 3 * 4 * 2
    for idx in range(space.total_dim):
        occ = space.occupations(idx)
        assert space.index_of(occ) == idx
    # mode 0 is the slowest index
    assert space.index_of((1, 0, 0)) == 8


def test_embed_matches_kron():
    space = CompositeSpace.of(1, 2)
    a0 = embed(annihilation_op(space.modes[0]), 0, space).matrix
    expected = np.kron(annihilation_op(ModeSpace(1)).matrix, np.eye(3))
    assert np.array_equal(a0, expected)
    a1 = embed(annihilation_op(space.modes[1]), 1, space).matrix
    expected = np.kron(np.eye(2), annihilation_op(ModeSpace(2)).matrix)
    assert np.array_equal(a1, expected)


def test_embedded_operators_on_different_modes_commute():
    space = CompositeSpace.of(2, 2)
    a0 = embed(annihilation_op(space.modes[0]), 0, space)
    n1 = embed(number_op(space.modes[1]), 1, space)
    assert np.max(np.abs(commutator(a0, n1).matrix)) == 0.0


def test_fock_state_normalized_unit_vector():
    space = CompositeSpace.of(2, 2)
    psi = fock_state(space, (1, 2))
    assert np.linalg.norm(psi) == 1.0
    assert psi[space.index_of((1, 2))] == 1.0


def test_fock_state_rejects_out_of_range():
    space = CompositeSpace.of(2, 2)
    with pytest.raises(ValueError):
        fock_state(space, (3, 0))


def test_coherent_state_normalized_and_mean():
    mode = ModeSpace(25)
    alpha = 0.4 + 0.3j
    psi = coherent_state(mode, alpha)
    assert abs(np.linalg.norm(psi) - 1.0) < 1e-14
    n = number_op(mode).matrix
    mean = (psi.conj() @ n @ psi).real
    # truncation error is negligible at this amplitude
    assert abs(mean - abs(alpha) ** 2) < 1e-12


def test_coherent_vacuum_limit():
    psi = coherent_state(ModeSpace(4), 0.0)
    assert np.array_equal(psi, np.array([1, 0, 0, 0, 0], dtype=complex))


def test_operator_arithmetic_and_space_checks():
    space = CompositeSpace.of(2)
    a = annihilation_op(space.modes[0])
    n = number_op(space.modes[0])
    assert np.allclose((dagger(a) @ a).matrix, n.matrix)
    assert np.allclose((2.0 * a - a).matrix, a.matrix)
    assert np.allclose(anticommutator(a, dagger(a)).matrix, (a @ dagger(a) + dagger(a) @ a).matrix)
    other = CompositeSpace.of(3)
    with pytest.raises(DimensionMismatchError):
        a + annihilation_op(other.modes[0])


def test_operator_shape_validation():
    space = CompositeSpace.of(2)
    with pytest.raises(DimensionMismatchError):
        Operator(space, np.eye(2))


def test_identity_and_trace():
    space = CompositeSpace.of(1, 1)
    eye = identity_op(space)
    assert eye.trace() == 4.0
    assert eye.is_hermitian()


def test_expectation_on_fock_state():
    from qfiber.lindblad import DensityMatrix

    space = CompositeSpace.of(3, 3)
    rho = DensityMatrix.fock(space, (2, 1))
    n0 = embed(number_op(space.modes[0]), 0, space)
    assert abs(expectation(n0, rho) - 2.0) < 1e-15


def test_jacobi_matches_analytic_two_level():
    space = CompositeSpace.of(1)
    m = np.array([[1.0, 2.0 - 1.0j], [2.0 + 1.0j, -1.0]])
    vals = hermitian_eigenvalues(Operator(space, m))
    # eigenvalues of [[1, c],[c*, -1]] are +-sqrt(1+|c|^2)
    expected = np.array([-np.sqrt(6.0), np.sqrt(6.0)])
    assert np.max(np.abs(vals - expected)) < 1e-12


@pytest.mark.parametrize("dim,seed", [(4, 0), (9, 1), (16, 2), (36, 3)])
def test_jacobi_matches_reference_solver(dim, seed):
    rng = np.random.default_rng(seed)
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    m = m + m.conj().T
    vals = _hermitian_eigenvalues_matrix(m)
    ref = np.linalg.eigvalsh(m)
    assert np.all(np.diff(vals) >= 0)
    assert np.max(np.abs(vals - ref)) < 1e-10 * max(1.0, np.linalg.norm(m))


def test_jacobi_diagonal_shortcut():
    space = CompositeSpace.of(3)
    vals = hermitian_eigenvalues(number_op(space.modes[0]))
    assert np.array_equal(vals, np.arange(4.0))


def test_hermitian_eigenvalues_rejects_non_hermitian():
    space = CompositeSpace.of(2)
    with pytest.raises(NotHermitianError):
        hermitian_eigenvalues(annihilation_op(space.modes[0]))
