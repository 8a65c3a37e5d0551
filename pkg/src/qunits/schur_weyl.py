"""Symmetry-adapted bases of ``(C^n)^{⊗N}``.

Two independent constructions are provided:

* :func:`build_decomposition` works for any ``n``. Each standard Young tableau
  contributes one copy of the unitary-group irrep, obtained as the image of its
  Young symmetrizer and orthonormalized against everything built before it.
* :func:`couple_spins` is the qubit special case. It couples spin-1/2
  particles one at a time, starting from the last particle and prepending, and
  labels states by total spin ``j``, magnetic number ``m`` and the coupling
  path ``d``.

For qubits both constructions span the same isotypic blocks; individual
vectors differ by a unitary mixing among the ``d`` copies.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import sqrt
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidArgumentError, ResourceLimitError
from .partitions import Partition, as_partition, dim_unitary, enumerate_partitions
from .statespace import StateVector, SystemShape, inner_product, label_of

#: Largest N accepted by the symmetrizer path (its cost grows like row/column group orders).
MAX_SYMMETRIZER_N = 7
#: Largest N accepted by the spin-coupling path.
MAX_COUPLING_N = 12

RANK_TOL = 1e-9

Tableau = tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class StandardTableau:
    lam: Partition
    rows: Tableau

    @property
    def columns(self) -> Tableau:
        return tuple(tuple(row[j] for row in self.rows if len(row) > j) for j in range(len(self.rows[0])))

    def reading_word(self) -> tuple[int, ...]:
        return tuple(x for row in self.rows for x in row)

    def __str__(self) -> str:
        return "/".join(",".join(map(str, row)) for row in self.rows)


@dataclass(frozen=True)
class SectorMember:
    """A basis vector together with its weight labels.

    ``weight`` counts how many particles sit in each level. For qubits ``j``
    and ``m`` are also filled in, with level 1 carrying ``m = +1/2``.
    """

    state: StateVector
    weight: tuple[int, ...]
    j: Fraction | None = None
    m: Fraction | None = None


@dataclass(frozen=True)
class SymmetrySector:
    """One copy ``d`` (1-based) of the unitary irrep labelled by ``lam``."""

    lam: Partition
    d: int
    members: tuple[SectorMember, ...]
    tableau: StandardTableau | None = None
    path: tuple[Fraction, ...] | None = None

    @property
    def states(self) -> list[StateVector]:
        return [mem.state for mem in self.members]

    @property
    def j(self) -> Fraction:
        return Fraction(self.lam[0] - (self.lam[1] if len(self.lam) > 1 else 0), 2)

    def matrix(self) -> np.ndarray:
        """Members as the columns of a ``dim × size`` array."""
        return np.column_stack([mem.state.amplitudes for mem in self.members])


def standard_tableaux(lam: Iterable[int]) -> list[StandardTableau]:
    """All standard fillings of λ, sorted by row-reading word."""
    lam = as_partition(lam)
    found: list[Tableau] = []

    def rec(rows: list[list[int]], k: int) -> None:
        if k > lam.N:
            found.append(tuple(tuple(r) for r in rows))
            return
        for i, length in enumerate(lam):
            cur = len(rows[i])
            # k goes at the end of row i if there is room and the cell above is filled
            if cur < length and (i == 0 or len(rows[i - 1]) > cur):
                rows[i].append(k)
                rec(rows, k + 1)
                rows[i].pop()

    rec([[] for _ in lam], 1)
    found.sort(key=lambda t: tuple(x for row in t for x in row))
    return [StandardTableau(lam, t) for t in found]


def _semistandard_fillings(lam: Partition, n: int) -> list[tuple[tuple[int, ...], ...]]:
    cells = list(lam.cells())
    out = []

    def rec(pos: int, grid: dict) -> None:
        if pos == len(cells):
            out.append(tuple(tuple(grid[(i, j)] for j in range(lam[i])) for i in range(len(lam))))
            return
        i, j = cells[pos]
        lo = 1
        if j > 0:
            lo = max(lo, grid[(i, j - 1)])
        if i > 0:
            lo = max(lo, grid[(i - 1, j)] + 1)
        for val in range(lo, n + 1):
            grid[(i, j)] = val
            rec(pos + 1, grid)
        grid.pop((i, j), None)

    rec(0, {})
    return out


def _subgroup_sum(t: np.ndarray, positions: Sequence[int], signed: bool) -> np.ndarray:
    """(Signed) sum of ``t`` over all permutations of the given tensor axes.

    Uses the coset factorization ``Σ_{S_k} g = Σ_{S_{k-1}} g · (1 + Σ_{i<k} (i k))``
    so only O(k²) transposes are needed instead of k!.
    """
    sign = -1.0 if signed else 1.0
    for k in range(len(positions) - 1, 0, -1):
        acc = t.copy()
        for i in range(k):
            acc += sign * np.swapaxes(t, positions[i], positions[k])
        t = acc
    return t


def _symmetrize_batch(tableau: StandardTableau, batch: np.ndarray, n: int) -> np.ndarray:
    """Apply the Young symmetrizer to each column of a ``(n**N, k)`` batch."""
    N = tableau.lam.N
    t = batch.reshape((n,) * N + (batch.shape[1],))
    for col in tableau.columns:
        t = _subgroup_sum(t, [x - 1 for x in col], signed=True)
    for row in tableau.rows:
        t = _subgroup_sum(t, [x - 1 for x in row], signed=False)
    return t.reshape(n**N, -1)


def _check_symmetrizer_n(N: int) -> None:
    if N > MAX_SYMMETRIZER_N:
        raise ResourceLimitError(f"symmetrizer path is capped at N={MAX_SYMMETRIZER_N}, got {N}")


def young_symmetrizer_apply(tableau: StandardTableau, v: StateVector) -> StateVector:
    """Column antisymmetrization followed by row symmetrization, unnormalized."""
    if v.N != tableau.lam.N:
        raise InvalidArgumentError(f"tableau has {tableau.lam.N} boxes but the state has {v.N} particles")
    _check_symmetrizer_n(v.N)
    out = _symmetrize_batch(tableau, v.amplitudes.reshape(-1, 1), v.n)
    return StateVector(v.shape, out[:, 0])


def fix_phase(vec: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Rotate so the first non-negligible amplitude is real and positive."""
    nz = np.flatnonzero(np.abs(vec) > tol)
    if nz.size == 0:
        return vec
    a = vec[nz[0]]
    return vec * (abs(a) / a)


def _project_out(work: np.ndarray, basis: np.ndarray) -> np.ndarray:
    if basis.shape[1] == 0:
        return work
    # <b|w> computed as conj(b^T conj(w)) to avoid materialising basis^H
    return work - basis @ (basis.T @ work.conj()).conj()


def _pivoted_gram_schmidt(candidates: np.ndarray, basis: np.ndarray, tol: float) -> list[np.ndarray]:
    """Orthonormal vectors spanning ``candidates`` modulo the columns of ``basis``.

    At each step the candidate with the largest remaining residual is accepted;
    the loop stops once every residual is below ``tol``.
    """
    work = _project_out(candidates.astype(complex), basis)
    accepted = np.zeros((work.shape[0], 0), dtype=complex)
    while work.shape[1]:
        norms = np.linalg.norm(work, axis=0)
        k = int(np.argmax(norms))
        if norms[k] < tol:
            break
        q = work[:, k : k + 1] / norms[k]
        # second orthogonalization pass keeps the new vector clean to ~1e-15
        q = _project_out(_project_out(q, basis), accepted)
        q /= np.linalg.norm(q)
        accepted = np.hstack([accepted, q])
        work = _project_out(np.delete(work, k, axis=1), q)
    return [accepted[:, i] for i in range(accepted.shape[1])]


def _weight(index: int, shape: SystemShape) -> tuple[int, ...]:
    label = label_of(index, shape)
    return tuple(label.count(level) for level in range(1, shape.n + 1))


def _member(vec: np.ndarray, shape: SystemShape) -> SectorMember:
    idx = int(np.flatnonzero(np.abs(vec) > 1e-10)[0])
    weight = _weight(idx, shape)
    j = m = None
    if shape.n == 2:
        m = Fraction(weight[0] - weight[1], 2)
    return SectorMember(StateVector(shape, vec), weight, j, m)


def build_decomposition(shape: SystemShape) -> list[SymmetrySector]:
    """Orthonormal basis of the whole space grouped into ``(λ, d)`` sectors.

    For each partition λ with a non-zero unitary dimension and each standard
    tableau ``T_d`` of λ, the Young symmetrizer of ``T_d`` is applied to seed
    basis vectors and the images are orthonormalized (pivoted Gram-Schmidt)
    against the earlier copies of the same λ. Distinct λ blocks are
    orthogonal already (isotypic components of a unitary representation), so
    they are not projected against each other. Sectors come out sorted by λ in
    reverse-lexicographic order, then by ``d``.
    """
    if shape.n < 2:
        raise InvalidArgumentError("build_decomposition needs n >= 2")
    _check_symmetrizer_n(shape.N)
    N, n = shape.N, shape.n
    sectors: list[SymmetrySector] = []
    for lam in enumerate_partitions(N):
        size = dim_unitary(lam, n)
        if size == 0:
            continue
        basis = np.zeros((shape.dim, 0), dtype=complex)
        for d, tab in enumerate(standard_tableaux(lam), start=1):
            vecs = _pivoted_gram_schmidt(_seed_images(tab, shape), basis, RANK_TOL)
            if len(vecs) < size:
                # seeds were not enough; fall back to every computational basis vector
                vecs += _pivoted_gram_schmidt(
                    _symmetrize_batch(tab, np.eye(shape.dim, dtype=complex), n),
                    np.column_stack([basis] + [v[:, None] for v in vecs]),
                    RANK_TOL,
                )
            if len(vecs) != size:
                raise ArithmeticError(f"sector {lam} d={d}: got {len(vecs)} vectors, expected {size}")
            basis = np.column_stack([basis] + [v[:, None] for v in vecs])
            members = sorted((_member(fix_phase(v), shape) for v in vecs), key=_member_order)
            sectors.append(SymmetrySector(lam, d, tuple(members), tableau=tab))
    return sectors


def _member_order(mem: SectorMember):
    first = int(np.flatnonzero(np.abs(mem.state.amplitudes) > 1e-10)[0])
    return tuple(-w for w in mem.weight), first


def _seed_images(tab: StandardTableau, shape: SystemShape) -> np.ndarray:
    """Symmetrizer images of the basis vectors read off semistandard fillings."""
    seeds = []
    for filling in _semistandard_fillings(tab.lam, shape.n):
        digits = [0] * shape.N
        for trow, frow in zip(tab.rows, filling):
            for particle, level in zip(trow, frow):
                digits[particle - 1] = level - 1
        idx = 0
        for dgt in digits:
            idx = idx * shape.n + dgt
        seeds.append(idx)
    batch = np.zeros((shape.dim, len(seeds)), dtype=complex)
    batch[seeds, range(len(seeds))] = 1.0
    return _symmetrize_batch(tab, batch, shape.n)


def partition_for_spin(N: int, j: Fraction) -> Partition:
    top = Fraction(N, 2) + j
    bottom = Fraction(N, 2) - j
    return Partition([int(top)] + ([int(bottom)] if bottom else []))


def _cg_prepend(j2: Fraction, J: Fraction, M: Fraction) -> tuple[float, float]:
    """Clebsch-Gordan pair ``<1/2 ±1/2; j2 M∓1/2 | J M>`` (Condon-Shortley).

    The new spin-1/2 particle is the first factor of the coupling.
    """
    den = 2 * j2 + 1
    if J == j2 + Fraction(1, 2):
        up = sqrt((j2 + M + Fraction(1, 2)) / den)
        down = sqrt((j2 - M + Fraction(1, 2)) / den)
    else:
        up = sqrt((j2 - M + Fraction(1, 2)) / den)
        down = -sqrt((j2 + M + Fraction(1, 2)) / den)
    return up, down


def couple_spins(N: int) -> list[SymmetrySector]:
    """Coupled ``|j, m; d>`` basis of N qubits.

    Particles ``N-1`` and ``N`` are coupled first, then ``N-2`` is prepended,
    and so on down to particle 1. ``d`` enumerates coupling paths for a given
    ``j`` (paths with larger intermediate spins first). Level 1 carries
    ``m = +1/2``; members of each sector run from ``m = j`` down to ``-j``.
    Phases are the Condon-Shortley ones, so lowering maps each member onto a
    positive multiple of the next.
    """
    if int(N) != N or N < 1:
        raise InvalidArgumentError(f"N must be a positive integer, got {N!r}")
    if N > MAX_COUPLING_N:
        raise ResourceLimitError(f"coupling path is capped at N={MAX_COUPLING_N}, got {N}")
    half = Fraction(1, 2)
    up, down = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    # blocks: (path of intermediate spins, j) -> {m: vector over the particles coupled so far}
    blocks: dict[tuple[Fraction, ...], dict[Fraction, np.ndarray]] = {(half,): {half: up, -half: down}}
    for _ in range(N - 1):
        new: dict[tuple[Fraction, ...], dict[Fraction, np.ndarray]] = {}
        for path, states in blocks.items():
            j2 = path[-1]
            for J in (j2 + half, j2 - half):
                if J < 0:
                    continue
                ladder = {}
                M = J
                while M >= -J:
                    vec = 0
                    cu, cd = _cg_prepend(j2, J, M)
                    if M - half in states:
                        vec = vec + cu * np.kron(up, states[M - half])
                    if M + half in states:
                        vec = vec + cd * np.kron(down, states[M + half])
                    ladder[M] = vec
                    M -= 1
                new[path + (J,)] = ladder
        blocks = new

    shape = SystemShape(N, 2)
    by_j: dict[Fraction, list[tuple[Fraction, ...]]] = {}
    for path in blocks:
        by_j.setdefault(path[-1], []).append(path)
    sectors = []
    for j in sorted(by_j, reverse=True):
        lam = partition_for_spin(N, j)
        for d, path in enumerate(sorted(by_j[j], reverse=True), start=1):
            ladder = blocks[path]
            members = tuple(
                SectorMember(
                    StateVector(shape, ladder[m].astype(complex)),
                    (int(Fraction(N, 2) + m), int(Fraction(N, 2) - m)),
                    j,
                    m,
                )
                for m in sorted(ladder, reverse=True)
            )
            sectors.append(SymmetrySector(lam, d, members, path=path))
    return sectors


def find_coupled(sectors: Sequence[SymmetrySector], j, m, d: int = 1) -> StateVector:
    """Look up ``|j, m; d>`` in a :func:`couple_spins` result."""
    j, m = Fraction(j), Fraction(m)
    for sec in sectors:
        if sec.j == j and sec.d == d:
            for mem in sec.members:
                if mem.m == m:
                    return mem.state
    raise KeyError(f"no coupled state |{j}, {m}; {d}>")


def sector_projections(v: StateVector, sectors: Sequence[SymmetrySector]) -> dict[tuple[Partition, int], float]:
    """Squared norm of the projection of ``v`` onto each ``(λ, d)`` sector."""
    weights = {}
    for sec in sectors:
        if sec.members and sec.members[0].state.shape != v.shape:
            raise InvalidArgumentError(f"sector shape {sec.members[0].state.shape} does not match {v.shape}")
        weights[(sec.lam, sec.d)] = float(sum(abs(inner_product(mem.state, v)) ** 2 for mem in sec.members))
    return weights


def isotypic_projector(sectors: Sequence[SymmetrySector], lam: Iterable[int]) -> np.ndarray:
    """Orthogonal projector onto the span of every sector labelled ``lam``."""
    lam = as_partition(lam)
    cols = [mem.state.amplitudes for sec in sectors if sec.lam == lam for mem in sec.members]
    if not cols:
        raise KeyError(f"no sectors for {lam}")
    q = np.column_stack(cols)
    return q @ q.conj().T

