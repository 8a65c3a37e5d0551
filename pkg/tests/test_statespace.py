import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qunits.errors import DegenerateStateError, InvalidArgumentError, ResourceLimitError
from qunits.statespace import (
    StateVector,
    SystemShape,
    apply_level_permutation,
    apply_particle_permutation,
    basis_state,
    hermitian_eigenvalues,
    hermitian_eigh,
    index_of,
    inner_product,
    label_of,
    normalize,
    partial_trace,
)

from oracles import brute_partial_trace, ket

S2 = 1 / np.sqrt(2)


def sv(n, *terms):
    v = ket(n, *terms)
    return StateVector(SystemShape(len(terms[0][1]), n), v)


def random_state(rng, N, n):
    amps = rng.normal(size=n**N) + 1j * rng.normal(size=n**N)
    return StateVector(SystemShape(N, n), amps / np.linalg.norm(amps))


def test_shape_cap():
    with pytest.raises(ResourceLimitError):
        SystemShape(25, 2)
    with pytest.raises(InvalidArgumentError):
        SystemShape(0, 2)


def test_index_of_examples():
    assert index_of([1, 1], SystemShape(2, 2)) == 0
    assert index_of([2, 2], SystemShape(2, 2)) == 3
    assert index_of([1, 2, 1], SystemShape(3, 2)) == 2
    with pytest.raises(InvalidArgumentError):
        index_of([1, 3], SystemShape(2, 2))
    with pytest.raises(InvalidArgumentError):
        index_of([1], SystemShape(2, 2))


@pytest.mark.parametrize("N,n", [(1, 2), (3, 2), (4, 3), (6, 4), (12, 2)])
def test_index_label_bijection(N, n):
    shape = SystemShape(N, n)
    for i in range(shape.dim):
        assert index_of(label_of(i, shape), shape) == i


def test_index_label_randomized_large():
    rng = np.random.default_rng(3)
    shape = SystemShape(10, 5)
    for i in rng.integers(0, shape.dim, size=500):
        assert index_of(label_of(int(i), shape), shape) == i


def test_basis_state():
    v = basis_state([1, 1], SystemShape(2, 2))
    assert v.amplitudes[0] == 1 and v.norm() == 1
    w = basis_state([2, 1, 1], SystemShape(3, 2))
    assert np.flatnonzero(w.amplitudes).tolist() == [4]


def test_inner_product():
    shape = SystemShape(2, 2)
    assert inner_product(basis_state([1, 1], shape), basis_state([2, 2], shape)) == 0
    psi_p = sv(2, (S2, "12"), (S2, "21"))
    psi_m = sv(2, (S2, "12"), (-S2, "21"))
    assert abs(inner_product(psi_p, psi_p) - 1) < 1e-12
    assert abs(inner_product(psi_p, psi_m)) < 1e-12
    a = StateVector(shape, [1j, 0, 0, 0])
    b = StateVector(shape, [1, 0, 0, 0])
    assert inner_product(a, b) == -1j
    with pytest.raises(InvalidArgumentError):
        inner_product(a, basis_state([1, 1, 1], SystemShape(3, 2)))


def test_normalize():
    v = normalize(sv(2, (1, "11"), (1, "22")))
    assert np.allclose(v.amplitudes, ket(2, (S2, "11"), (S2, "22")), atol=1e-15)
    assert np.allclose(normalize(v).amplitudes, v.amplitudes, atol=1e-12)
    with pytest.raises(DegenerateStateError):
        normalize(StateVector(SystemShape(2, 2), np.zeros(4)))


def test_particle_permutation_examples():
    psi = sv(2, (1, "12"))
    assert np.allclose(apply_particle_permutation(psi, [1, 2]).amplitudes, psi.amplitudes)
    assert np.allclose(apply_particle_permutation(psi, [2, 1]).amplitudes, ket(2, (1, "21")))
    sym = sv(2, (S2, "12"), (S2, "21"))
    assert np.allclose(apply_particle_permutation(sym, [2, 1]).amplitudes, sym.amplitudes)
    with pytest.raises(InvalidArgumentError):
        apply_particle_permutation(psi, [1, 1])


def test_particle_permutation_convention():
    # σ = (1→2, 2→3, 3→1): the digit of particle k lands in position σ(k)
    v = sv(3, (1, "123"))
    out = apply_particle_permutation(v, [2, 3, 1])
    assert np.allclose(out.amplitudes, ket(3, (1, "312")))


def test_level_permutation_examples():
    flip = [2, 1]
    assert np.allclose(apply_level_permutation(sv(2, (1, "111")), flip).amplitudes, ket(2, (1, "222")))
    sym = sv(2, (S2, "12"), (S2, "21"))
    assert np.allclose(apply_level_permutation(sym, flip).amplitudes, sym.amplitudes)
    rng = np.random.default_rng(0)
    v = random_state(rng, 3, 2)
    assert np.allclose(apply_level_permutation(apply_level_permutation(v, flip), flip).amplitudes, v.amplitudes)
    with pytest.raises(InvalidArgumentError):
        apply_level_permutation(v, [1, 3])


def test_level_permutation_three_levels():
    v = sv(3, (1, "13"), (2, "21"))
    out = apply_level_permutation(v, [2, 3, 1])  # 1→2, 2→3, 3→1
    assert np.allclose(out.amplitudes, ket(3, (1, "21"), (2, "32")))
    back = apply_level_permutation(out, [3, 1, 2])
    assert np.allclose(back.amplitudes, v.amplitudes)


@settings(max_examples=40, deadline=None)
@given(
    seed=st.integers(0, 2**32 - 1),
    N=st.integers(2, 4),
    n=st.integers(2, 3),
    data=st.data(),
)
def test_group_actions_unitary_and_commuting(seed, N, n, data):
    rng = np.random.default_rng(seed)
    a, b = random_state(rng, N, n), random_state(rng, N, n)
    sigma = [x + 1 for x in data.draw(st.permutations(range(N)))]
    pi = [x + 1 for x in data.draw(st.permutations(range(n)))]
    pa, pb = apply_particle_permutation(a, sigma), apply_particle_permutation(b, sigma)
    la, lb = apply_level_permutation(a, pi), apply_level_permutation(b, pi)
    assert abs(inner_product(pa, pb) - inner_product(a, b)) < 1e-12
    assert abs(inner_product(la, lb) - inner_product(a, b)) < 1e-12
    both1 = apply_level_permutation(apply_particle_permutation(a, sigma), pi)
    both2 = apply_particle_permutation(apply_level_permutation(a, pi), sigma)
    assert np.allclose(both1.amplitudes, both2.amplitudes, atol=1e-12)


def test_particle_permutation_composes_as_a_left_action():
    rng = np.random.default_rng(11)
    v = random_state(rng, 4, 2)
    s, t = [2, 3, 1, 4], [4, 1, 3, 2]
    st_ = [s[t[k] - 1] for k in range(4)]  # (s∘t)(k) = s(t(k))
    lhs = apply_particle_permutation(apply_particle_permutation(v, t), s)
    assert np.allclose(lhs.amplitudes, apply_particle_permutation(v, st_).amplitudes)


def test_partial_trace_examples():
    prod = sv(2, (1, "11"))
    assert np.allclose(partial_trace(prod, [1]), [[1, 0], [0, 0]])
    ghz = sv(2, (S2, "111"), (S2, "222"))
    assert np.allclose(partial_trace(ghz, [1]), np.diag([0.5, 0.5]), atol=1e-15)
    w = sv(2, *[(1 / np.sqrt(3), s) for s in ("112", "121", "211")])
    for k in (1, 2, 3):
        assert np.allclose(partial_trace(w, [k]), np.diag([2 / 3, 1 / 3]), atol=1e-15)
    with pytest.raises(InvalidArgumentError):
        partial_trace(w, [])
    with pytest.raises(InvalidArgumentError):
        partial_trace(w, [1, 2, 3])


@pytest.mark.parametrize("N,n", [(2, 2), (3, 2), (3, 3), (4, 2)])
def test_partial_trace_matches_brute_force(N, n):
    rng = np.random.default_rng(N * 10 + n)
    v = random_state(rng, N, n)
    for r in range(1, N):
        for keep in itertools.combinations(range(1, N + 1), r):
            rho = partial_trace(v, keep)
            assert np.allclose(rho, brute_partial_trace(v.amplitudes, N, n, keep), atol=1e-13)
            assert abs(np.trace(rho) - 1) < 1e-12
            ev = hermitian_eigenvalues(rho)
            assert min(ev) >= -1e-10 and max(ev) <= 1 + 1e-10


@pytest.mark.parametrize("N,n", [(3, 2), (4, 2), (3, 3), (5, 2)])
def test_schmidt_symmetry(N, n):
    rng = np.random.default_rng(100 + N)
    v = random_state(rng, N, n)
    for r in range(1, N):
        for keep in itertools.combinations(range(1, N + 1), r):
            comp = [k for k in range(1, N + 1) if k not in keep]
            ea = sorted(hermitian_eigenvalues(partial_trace(v, keep)), reverse=True)
            eb = sorted(hermitian_eigenvalues(partial_trace(v, comp)), reverse=True)
            m = min(len(ea), len(eb))
            assert np.allclose(ea[:m], eb[:m], atol=1e-9)
            assert np.allclose(ea[m:] + eb[m:], 0, atol=1e-9)


def test_hermitian_eigenvalue_examples():
    assert hermitian_eigenvalues(np.diag([1.0, 0.0])) == [1.0, 0.0]
    assert np.allclose(hermitian_eigenvalues([[0.5, 1 / 6], [1 / 6, 0.5]]), [2 / 3, 1 / 3], atol=1e-14)
    assert np.allclose(hermitian_eigenvalues([[0, 1], [1, 0]]), [1, -1], atol=1e-14)
    with pytest.raises(InvalidArgumentError):
        hermitian_eigenvalues([[0, 1], [0, 0]])


@pytest.mark.parametrize("size", [1, 2, 3, 5, 8, 16, 32, 64])
def test_jacobi_matches_lapack(size):
    rng = np.random.default_rng(size)
    x = rng.normal(size=(size, size)) + 1j * rng.normal(size=(size, size))
    h = x + x.conj().T
    vals, vecs = hermitian_eigh(h)
    assert np.allclose(vals, np.sort(np.linalg.eigvalsh(h))[::-1], atol=1e-10)
    assert np.allclose(vecs @ np.diag(vals) @ vecs.conj().T, h, atol=1e-9)
    assert np.allclose(vecs.conj().T @ vecs, np.eye(size), atol=1e-10)


def test_jacobi_degenerate_spectrum():
    rng = np.random.default_rng(7)
    q, _ = np.linalg.qr(rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6)))
    h = q @ np.diag([1, 1, 1, 0, 0, -2]) @ q.conj().T
    assert np.allclose(hermitian_eigenvalues(h), [1, 1, 1, 0, 0, -2], atol=1e-10)
