import itertools
from fractions import Fraction

import numpy as np
import pytest
from sympy import Rational
from sympy.physics.quantum.cg import CG

import qunits.schur_weyl as sw
from qunits.errors import InvalidArgumentError, ResourceLimitError
from qunits.partitions import dim_symmetric, dim_unitary, enumerate_partitions
from qunits.schur_weyl import (
    build_decomposition,
    couple_spins,
    find_coupled,
    isotypic_projector,
    sector_projections,
    standard_tableaux,
    young_symmetrizer_apply,
)
from qunits.statespace import StateVector, SystemShape, apply_particle_permutation, basis_state

from oracles import count_standard_fillings, ket, subgroup_sum_naive

S2, S3, S6 = np.sqrt(2), np.sqrt(3), np.sqrt(6)


def aligned_residual(v, target):
    """Distance after removing the best global phase."""
    ov = np.vdot(v, target)
    phase = ov / abs(ov) if abs(ov) > 1e-14 else 1.0
    return float(np.linalg.norm(v * phase - target))


def gram(sectors):
    q = np.column_stack([s.matrix() for s in sectors])
    return q.conj().T @ q


# --- tableaux -------------------------------------------------------------


def test_standard_tableaux_examples():
    assert len(standard_tableaux([2, 1])) == 2
    assert len(standard_tableaux([3, 2])) == 5
    assert [t.rows for t in standard_tableaux([4])] == [((1, 2, 3, 4),)]
    assert [t.rows for t in standard_tableaux([2, 1])] == [((1, 2), (3,)), ((1, 3), (2,))]


@pytest.mark.parametrize("N", range(1, 7))
def test_standard_tableaux_valid_and_counted(N):
    for lam in enumerate_partitions(N):
        tabs = standard_tableaux(lam)
        assert len(tabs) == dim_symmetric(lam) == count_standard_fillings(lam)
        words = [t.reading_word() for t in tabs]
        assert words == sorted(words) and len(set(words)) == len(words)
        for t in tabs:
            for row in t.rows:
                assert list(row) == sorted(row)
            for col in t.columns:
                assert list(col) == sorted(col)


# --- symmetrizer ----------------------------------------------------------


def test_symmetrizer_examples():
    shape = SystemShape(2, 2)
    row = standard_tableaux([2])[0]
    col = standard_tableaux([1, 1])[0]
    v12 = basis_state([1, 2], shape)
    assert np.allclose(young_symmetrizer_apply(row, v12).amplitudes, ket(2, (1, "12"), (1, "21")))
    assert np.allclose(young_symmetrizer_apply(col, v12).amplitudes, ket(2, (1, "12"), (-1, "21")))
    assert np.allclose(young_symmetrizer_apply(col, basis_state([1, 1], shape)).amplitudes, 0)


def test_symmetrizer_rejects_bad_inputs():
    with pytest.raises(InvalidArgumentError):
        young_symmetrizer_apply(standard_tableaux([2, 1])[0], basis_state([1, 1], SystemShape(2, 2)))
    with pytest.raises(ResourceLimitError):
        young_symmetrizer_apply(standard_tableaux([8])[0], basis_state([1] * 8, SystemShape(8, 2)))


@pytest.mark.parametrize("k", [2, 3, 4, 5])
@pytest.mark.parametrize("signed", [False, True])
def test_coset_factorized_sum_matches_naive(k, signed):
    rng = np.random.default_rng(k)
    t = rng.normal(size=(2,) * 6 + (3,))
    positions = [5, 0, 3, 2, 1][:k]
    assert np.allclose(sw._subgroup_sum(t, positions, signed), subgroup_sum_naive(t, positions, signed))


def test_symmetrizer_is_quasi_idempotent():
    # e_T^2 = (N!/f^λ) e_T
    shape = SystemShape(4, 3)
    rng = np.random.default_rng(5)
    v = StateVector(shape, rng.normal(size=shape.dim))
    for lam in enumerate_partitions(4):
        for tab in standard_tableaux(lam):
            once = young_symmetrizer_apply(tab, v)
            twice = young_symmetrizer_apply(tab, once)
            assert np.allclose(twice.amplitudes, 24 / dim_symmetric(lam) * once.amplitudes)


# --- build_decomposition --------------------------------------------------


def test_decomposition_examples():
    two = build_decomposition(SystemShape(2, 2))
    assert [(s.lam, len(s.members)) for s in two] == [((2,), 3), ((1, 1), 1)]
    three = build_decomposition(SystemShape(3, 2))
    assert [(s.lam, s.d, len(s.members)) for s in three] == [((3,), 1, 4), ((2, 1), 1, 2), ((2, 1), 2, 2)]
    sizes = [len(s.members) for s in build_decomposition(SystemShape(3, 3))]
    assert sizes == [10, 8, 8, 1] and sum(sizes) == 27


SHAPES = [(N, n) for N in range(1, 6) for n in (2, 3)]


@pytest.mark.parametrize("N,n", SHAPES)
def test_completeness_and_counts(N, n):
    shape = SystemShape(N, n)
    sectors = build_decomposition(shape)
    g = gram(sectors)
    assert g.shape == (shape.dim, shape.dim)
    assert np.max(np.abs(g - np.eye(shape.dim))) < 1e-10
    for lam in enumerate_partitions(N):
        mine = [s for s in sectors if s.lam == lam]
        if dim_unitary(lam, n) == 0:
            assert not mine
            continue
        assert len(mine) == dim_symmetric(lam)
        assert all(len(s.members) == dim_unitary(lam, n) for s in mine)
        assert [s.d for s in mine] == list(range(1, len(mine) + 1))


@pytest.mark.parametrize("N,n", SHAPES)
def test_isotypic_blocks_are_permutation_invariant(N, n):
    shape = SystemShape(N, n)
    sectors = build_decomposition(shape)
    perms = list(itertools.permutations(range(1, N + 1)))
    for lam in {s.lam for s in sectors}:
        proj = isotypic_projector(sectors, lam)
        for s in (s for s in sectors if s.lam == lam):
            for mem in s.members:
                for sigma in perms:
                    w = apply_particle_permutation(mem.state, sigma).amplitudes
                    assert np.linalg.norm(w - proj @ w) < 1e-10


def test_members_are_phase_fixed_weight_vectors():
    shape = SystemShape(4, 3)
    for sec in build_decomposition(shape):
        for mem in sec.members:
            amps = mem.state.amplitudes
            first = amps[np.flatnonzero(np.abs(amps) > 1e-10)[0]]
            assert abs(first.imag) < 1e-12 and first.real > 0
            for lab, _ in mem.state.terms(1e-10):
                assert tuple(lab.count(l) for l in (1, 2, 3)) == mem.weight


def test_fallback_path_when_seeds_fall_short(monkeypatch):
    monkeypatch.setattr(sw, "_seed_images", lambda tab, shape: np.zeros((shape.dim, 0)))
    sectors = build_decomposition(SystemShape(3, 3))
    assert [len(s.members) for s in sectors] == [10, 8, 8, 1]
    assert np.max(np.abs(gram(sectors) - np.eye(27))) < 1e-10


def test_decomposition_caps():
    with pytest.raises(ResourceLimitError):
        build_decomposition(SystemShape(8, 2))
    with pytest.raises(InvalidArgumentError):
        build_decomposition(SystemShape(3, 1))


# --- couple_spins ---------------------------------------------------------


def test_couple_spins_two_qubits():
    secs = couple_spins(2)
    assert np.allclose(find_coupled(secs, 1, 1).amplitudes, ket(2, (1, "11")))
    assert np.allclose(find_coupled(secs, 1, 0).amplitudes, ket(2, (1 / S2, "12"), (1 / S2, "21")))
    assert np.allclose(find_coupled(secs, 1, -1).amplitudes, ket(2, (1, "22")))
    assert np.allclose(find_coupled(secs, 0, 0).amplitudes, ket(2, (1 / S2, "12"), (-1 / S2, "21")))


PRINTED_N3 = [
    ((Fraction(3, 2), Fraction(3, 2), 1), [(1, "111")]),
    ((Fraction(3, 2), Fraction(1, 2), 1), [(1 / S3, "112"), (1 / S3, "121"), (1 / S3, "211")]),
    ((Fraction(3, 2), Fraction(-1, 2), 1), [(1 / S3, "221"), (1 / S3, "212"), (1 / S3, "122")]),
    ((Fraction(3, 2), Fraction(-3, 2), 1), [(1, "222")]),
    ((Fraction(1, 2), Fraction(1, 2), 1), [(2 / S6, "211"), (-1 / S6, "112"), (-1 / S6, "121")]),
    ((Fraction(1, 2), Fraction(-1, 2), 1), [(1 / S6, "212"), (1 / S6, "221"), (-2 / S6, "122")]),
    ((Fraction(1, 2), Fraction(1, 2), 2), [(1 / S2, "112"), (-1 / S2, "121")]),
    ((Fraction(1, 2), Fraction(-1, 2), 2), [(1 / S2, "221"), (-1 / S2, "212")]),
]


@pytest.mark.parametrize("label,terms", PRINTED_N3, ids=lambda x: str(x))
def test_couple_spins_three_qubits_matches_printed_states(label, terms):
    j, m, d = label
    v = find_coupled(couple_spins(3), j, m, d).amplitudes
    assert aligned_residual(v, ket(2, *terms)) < 1e-10


def test_couple_spins_labels():
    secs = couple_spins(3)
    assert [(s.j, s.d, s.lam) for s in secs] == [
        (Fraction(3, 2), 1, (3,)),
        (Fraction(1, 2), 1, (2, 1)),
        (Fraction(1, 2), 2, (2, 1)),
    ]
    for s in secs:
        ms = [mem.m for mem in s.members]
        assert ms == sorted(ms, reverse=True) and ms[0] == s.j and ms[-1] == -s.j


def _sympy_coupled(N):
    """Right-to-left coupling assembled independently from sympy's CG values."""
    half = Rational(1, 2)
    blocks = {(half,): {half: np.array([1.0, 0.0]), -half: np.array([0.0, 1.0])}}
    for _ in range(N - 1):
        new = {}
        for path, states in blocks.items():
            j2 = path[-1]
            for J in (j2 + half, j2 - half):
                if J < 0:
                    continue
                ladder = {}
                for k in range(int(2 * J) + 1):
                    M = J - k
                    vec = np.zeros(2 * len(next(iter(states.values()))))
                    for m1, single in ((half, [1.0, 0.0]), (-half, [0.0, 1.0])):
                        m2 = M - m1
                        if m2 in states:
                            c = float(CG(half, m1, j2, m2, J, M).doit())
                            vec += c * np.kron(single, states[m2])
                    ladder[M] = vec
                new[path + (J,)] = ladder
        blocks = new
    return blocks


@pytest.mark.parametrize("N", [2, 3, 4, 5])
def test_couple_spins_matches_sympy_clebsch_gordan(N):
    ref = _sympy_coupled(N)
    secs = couple_spins(N)
    assert len(secs) == len(ref)
    for sec in secs:
        key = tuple(Rational(p.numerator, p.denominator) for p in sec.path)
        for mem in sec.members:
            want = ref[key][Rational(mem.m.numerator, mem.m.denominator)]
            assert np.allclose(mem.state.amplitudes, want, atol=1e-12)


@pytest.mark.parametrize("N", range(1, 11))
def test_couple_spins_complete_and_orthonormal(N):
    secs = couple_spins(N)
    g = gram(secs)
    assert g.shape == (2**N, 2**N)
    assert np.max(np.abs(g - np.eye(2**N))) < 1e-10
    for lam in enumerate_partitions(N):
        mine = [s for s in secs if s.lam == lam]
        if len(lam) > 2:
            assert not mine
        else:
            assert len(mine) == dim_symmetric(lam)
            assert all(len(s.members) == dim_unitary(lam, 2) for s in mine)


def _lowering(amps, N):
    """Σ_k of the single-particle map |1> -> |2> (|2> -> 0)."""
    t = amps.reshape((2,) * N)
    out = np.zeros_like(t)
    for k in range(N):
        src = np.take(t, 0, axis=k)
        idx = [slice(None)] * N
        idx[k] = 1
        out[tuple(idx)] += src
    return out.reshape(-1)


@pytest.mark.parametrize("N", range(1, 9))
def test_dicke_ladder_structure(N):
    for sec in couple_spins(N):
        for upper, lower in zip(sec.members, sec.members[1:]):
            low = _lowering(upper.state.amplitudes, N)
            low /= np.linalg.norm(low)
            # Condon-Shortley: positive multiple
            assert np.linalg.norm(low - lower.state.amplitudes) < 1e-9


@pytest.mark.parametrize("N", range(2, 6))
def test_qubit_paths_agree_on_spans(N):
    coupled = couple_spins(N)
    sym = build_decomposition(SystemShape(N, 2))
    for lam in {s.lam for s in coupled}:
        p_sym = isotypic_projector(sym, lam)
        p_cpl = isotypic_projector(coupled, lam)
        for s in coupled:
            if s.lam == lam:
                for mem in s.members:
                    w = mem.state.amplitudes
                    assert np.linalg.norm(w - p_sym @ w) < 1e-10
        for s in sym:
            if s.lam == lam:
                for mem in s.members:
                    w = mem.state.amplitudes
                    assert np.linalg.norm(w - p_cpl @ w) < 1e-10


def test_couple_spins_caps():
    with pytest.raises(ResourceLimitError):
        couple_spins(13)
    with pytest.raises(InvalidArgumentError):
        couple_spins(0)
    assert len(couple_spins(12)) == sum(dim_symmetric(lam) for lam in enumerate_partitions(12) if len(lam) <= 2)


# --- projections ----------------------------------------------------------


def test_sector_projections_examples():
    shape3 = SystemShape(3, 2)
    w = sector_projections(basis_state([1, 1, 1], shape3), build_decomposition(shape3))
    assert abs(w[((3,), 1)] - 1) < 1e-12
    singlet = StateVector(SystemShape(2, 2), ket(2, (1 / S2, "12"), (-1 / S2, "21")))
    w2 = sector_projections(singlet, couple_spins(2))
    assert abs(w2[((1, 1), 1)] - 1) < 1e-12 and abs(w2[((2,), 1)]) < 1e-12
    with pytest.raises(InvalidArgumentError):
        sector_projections(singlet, build_decomposition(shape3))


@pytest.mark.parametrize("N,n", [(3, 2), (4, 2), (3, 3), (4, 3)])
def test_sector_projections_complete(N, n):
    rng = np.random.default_rng(N + n)
    shape = SystemShape(N, n)
    amps = rng.normal(size=shape.dim) + 1j * rng.normal(size=shape.dim)
    v = StateVector(shape, amps / np.linalg.norm(amps))
    assert abs(sum(sector_projections(v, build_decomposition(shape)).values()) - 1) < 1e-10
    if n == 2:
        assert abs(sum(sector_projections(v, couple_spins(N)).values()) - 1) < 1e-10
