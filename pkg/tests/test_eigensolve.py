"""Eigensolver tests: trivial spectra, cross-solver oracle agreement,
structural invariants of the prolate spectra, and the Gram-based
singular-value path.
"""
import math

import numpy as np
import pytest

import prolate as pr
from prolate.eigensolve import sqrt_clamped


def _random_symmetric(rng, n, scale=1.0):
    a = rng.standard_normal((n, n)) * scale
    return 0.5 * (a + a.T)


@pytest.mark.parametrize("solver", [pr.eigh_householder_ql, pr.eigh_jacobi])
def test_trivial_spectra(solver):
    spec = solver(np.eye(5))
    assert np.abs(spec.values - 1.0).max() <= 1e-14

    spec = solver(np.diag([3.0, 1.0, 2.0]))
    assert np.abs(spec.values - [3.0, 2.0, 1.0]).max() <= 1e-14

    spec = solver(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.abs(spec.values - [1.0, -1.0]).max() <= 1e-14


@pytest.mark.parametrize("solver", [pr.eigh_householder_ql, pr.eigh_jacobi])
def test_trivial_vectors(solver):
    spec = solver(np.diag([3.0, 1.0, 2.0]), want_vectors=True)
    expected = np.eye(3)[:, [0, 2, 1]]
    assert np.abs(spec.vectors - expected).max() <= 1e-14

    spec = solver(np.array([[0.0, 1.0], [1.0, 0.0]]), want_vectors=True)
    root = 1.0 / math.sqrt(2.0)
    assert np.abs(spec.vectors[:, 0] - [root, root]).max() <= 1e-14
    assert np.abs(spec.vectors[:, 1] - [root, -root]).max() <= 1e-14


def test_cross_solver_agreement_random():
    rng = np.random.default_rng(42)
    for _ in range(5):
        a = _random_symmetric(rng, 64)
        ql = pr.eigh_householder_ql(a)
        ja = pr.eigh_jacobi(a)
        scale = 1.0 + np.abs(ql.values).max()
        assert np.abs(ql.values - ja.values).max() <= 1e-10 * scale


def test_jacobi_trace_preservation():
    rng = np.random.default_rng(3)
    a = _random_symmetric(rng, 48)
    spec = pr.eigh_jacobi(a)
    assert spec.values.sum() == pytest.approx(np.trace(a), abs=1e-10 * 48)


@pytest.mark.parametrize("solver", [pr.eigh_householder_ql, pr.eigh_jacobi])
def test_vectors_orthonormal_and_residual(solver):
    rng = np.random.default_rng(11)
    a = _random_symmetric(rng, 40)
    spec = solver(a, want_vectors=True)
    gram = spec.vectors.T @ spec.vectors
    assert np.abs(gram - np.eye(40)).max() <= 1e-10
    assert spec.residual <= 1e-9 * (1.0 + np.abs(spec.values).max())
    recon = np.abs(a @ spec.vectors - spec.vectors * spec.values[None, :]).max()
    assert recon == spec.residual


def test_sign_convention_first_component_positive():
    rng = np.random.default_rng(5)
    a = _random_symmetric(rng, 12)
    for solver in (pr.eigh_householder_ql, pr.eigh_jacobi):
        spec = solver(a, want_vectors=True)
        for j in range(12):
            col = spec.vectors[:, j]
            lead = np.flatnonzero(np.abs(col) > 1e-12 * np.abs(col).max())[0]
            assert col[lead] > 0.0


def test_exhausted_iteration_budget_raises(monkeypatch):
    import prolate.eigensolve as es

    flip = np.array([[0.0, 1.0], [1.0, 0.0]])
    monkeypatch.setattr(es, "QL_BUDGET_PER_ROW", 0)
    with pytest.raises(pr.EigensolveError):
        es.eigh_householder_ql(flip)
    monkeypatch.setattr(es, "JACOBI_MAX_SWEEPS", 0)
    with pytest.raises(pr.EigensolveError):
        es.eigh_jacobi(flip)
    # a diagonal matrix needs no sweeps at all: still fine with zero budget
    assert es.eigh_jacobi(np.diag([2.0, 1.0])).values[0] == 2.0


def test_singular_values_reject_non_matrix():
    with pytest.raises(pr.ParameterError):
        pr.singular_values_via_gram(np.ones(4))


def test_rejects_bad_input():
    with pytest.raises(pr.ParameterError):
        pr.eigh_householder_ql(np.arange(6.0).reshape(2, 3))
    with pytest.raises(pr.ParameterError):
        pr.eigh_householder_ql(np.array([[0.0, 1.0], [0.5, 0.0]]))
    with pytest.raises(pr.EigensolveError):
        pr.eigh_householder_ql(np.array([[np.nan, 0.0], [0.0, 1.0]]))


def test_nearly_symmetric_is_averaged():
    a = np.array([[1.0, 0.5], [0.5 + 5e-13, 2.0]])
    spec = pr.eigh_householder_ql(a)
    sym = np.array([[1.0, 0.5 + 2.5e-13], [0.5 + 2.5e-13, 2.0]])
    expect = pr.eigh_jacobi(sym)
    assert np.abs(spec.values - expect.values).max() <= 1e-12


def test_symbol_matrix_input_accepted():
    p = pr.ProlateParams(M=32, N=12, K=5)
    from_symbol = pr.eigh_householder_ql(pr.periodic_prolate(p))
    from_dense = pr.eigh_householder_ql(pr.periodic_prolate(p).dense())
    assert np.array_equal(from_symbol.values, from_dense.values)


PARAM_GRID = [
    (16, 8, 3),
    (64, 16, 7),
    (64, 32, 31),
    (128, 96, 40),
    (256, 200, 100),
]


@pytest.mark.parametrize("m,n,k", PARAM_GRID)
def test_prolate_eigenvalue_range_and_trace(m, n, k):
    p = pr.ProlateParams(M=m, N=n, K=k)
    spec = pr.eigh_householder_ql(pr.periodic_prolate(p).dense())
    assert spec.values.min() >= -1e-12
    assert spec.values.max() <= 1.0 + 1e-12
    expected = n * (2 * k + 1) / m
    assert spec.values.sum() == pytest.approx(expected, rel=1e-9)


@pytest.mark.parametrize("m,n,k", [(64, 16, 7), (128, 48, 20)])
def test_leading_block_interlacing(m, n, k):
    p_full = pr.ProlateParams(M=m, N=n, K=k)
    p_small = pr.ProlateParams(M=m, N=n - 1, K=k)
    lam = pr.eigh_householder_ql(pr.periodic_prolate(p_full).dense()).values
    mu = pr.eigh_householder_ql(pr.periodic_prolate(p_small).dense()).values
    for i in range(n - 1):
        assert lam[i + 1] <= mu[i] + 1e-10
        assert mu[i] <= lam[i] + 1e-10


def test_sqrt_clamped_paths():
    values = np.array([1.0, 1e-30, -5e-13])
    out = sqrt_clamped(values, noise_floor=0.0)
    assert out[0] == 1.0 and out[2] == 0.0
    out = sqrt_clamped(values, noise_floor=1e-9)
    assert out[1] == 0.0  # snapped: far below the top of the spectrum
    with pytest.raises(pr.EigensolveError):
        sqrt_clamped(np.array([1.0, -1e-11]))


def test_hermitian_embedding_doubles_spectrum():
    rng = np.random.default_rng(9)
    g = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    g = g @ g.conj().T
    emb = pr.hermitian_embedding(g)
    values = pr.eigh_householder_ql(emb).values
    assert np.abs(values[0::2] - values[1::2]).max() <= 1e-10 * (1 + values[0])


def test_singular_values_unitary_and_single_column():
    sigma = pr.singular_values_via_gram(pr.dft_matrix(16))
    assert np.abs(sigma - 1.0).max() <= 1e-12
    col = pr.sampled_exponential(9, 0.2)[:, None] / 3.0
    sigma = pr.singular_values_via_gram(col)
    assert sigma.shape == (1,)
    assert sigma[0] == pytest.approx(1.0, abs=1e-13)


def test_singular_values_dual_solver_route():
    # same Gram embedding through both in-house solvers
    rng = np.random.default_rng(17)
    f = rng.standard_normal((10, 6)) + 1j * rng.standard_normal((10, 6))
    emb = pr.hermitian_embedding(f.conj().T @ f)
    ql = pr.eigh_householder_ql(emb).values
    ja = pr.eigh_jacobi(emb).values
    assert np.abs(ql - ja).max() <= 1e-10 * (1.0 + np.abs(ql).max())


def _dirichlet_block(m, p, length):
    # periodic prolate symbol at bandwidth ratio 1/(2p), which has no
    # integer half-bandwidth when m/p is even
    sym = np.empty(length)
    sym[0] = 1.0 / p
    k = np.arange(1, length)
    sym[1:] = np.sin(np.pi * k / p) / (m * np.sin(np.pi * k / m))
    i = np.arange(length)
    return sym[np.abs(i[:, None] - i[None, :])]


@pytest.mark.parametrize("m,p", [(64, 4), (1024, 4)])
def test_dft_submatrix_singular_values_match_prolate_block(m, p):
    length = m // p
    sigma = pr.singular_values_via_gram(pr.dft_submatrix(m, p))
    lam = pr.eigh_householder_ql(_dirichlet_block(m, p, length)).values
    expected = sqrt_clamped(lam)
    assert np.abs(sigma - expected).max() <= 1e-10


def test_dft_submatrix_singular_values_offset_invariant():
    m, p = 64, 4
    base = pr.singular_values_via_gram(pr.dft_submatrix(m, p, 0, 0))
    for ro, co in ((3, 7), (63, 16), (40, 40)):
        sigma = pr.singular_values_via_gram(pr.dft_submatrix(m, p, ro, co))
        assert np.abs(sigma - base).max() <= 1e-10


def test_cross_solver_agreement_assorted_sizes():
    rng = np.random.default_rng(23)
    for n in (2, 3, 5, 17, 33):
        a = _random_symmetric(rng, n, scale=rng.uniform(0.1, 10.0))
        ql = pr.eigh_householder_ql(a, want_vectors=True)
        ja = pr.eigh_jacobi(a, want_vectors=True)
        scale = 1.0 + np.abs(ql.values).max()
        assert np.abs(ql.values - ja.values).max() <= 1e-10 * scale
        assert np.abs(ql.vectors.T @ ql.vectors - np.eye(n)).max() <= 1e-10
        assert len(ql) == n


def test_ql_on_tridiagonal_input():
    # already-tridiagonal matrices skip the reduction but share the path
    n = 30
    t = np.diag(np.linspace(-2.0, 2.0, n)) + np.diag(0.3 * np.ones(n - 1), 1) + np.diag(
        0.3 * np.ones(n - 1), -1
    )
    spec = pr.eigh_householder_ql(t, want_vectors=True)
    assert spec.residual <= 1e-9 * (1.0 + np.abs(spec.values).max())
    assert np.abs(spec.values - pr.eigh_jacobi(t).values).max() <= 1e-12


def test_singular_values_of_one_by_one_block():
    sigma = pr.singular_values_via_gram(pr.dft_submatrix(8, 8))
    assert sigma.shape == (1,)
    assert sigma[0] == pytest.approx(1.0 / math.sqrt(8), abs=1e-14)
