"""Entanglement measures and the conjugate-state construction of entangled bases.

Entropies are in bits. Two different concurrences are provided because they
answer different questions: :func:`wootters_concurrence` is the mixed-state
measure of a two-qubit density matrix, and :func:`spin_flip_concurrence` is
the overlap of a pure N-qubit state with its spin-flipped conjugate (which
vanishes identically for odd N).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidArgumentError, ResourceLimitError
from .schur_weyl import couple_spins, find_coupled, fix_phase
from .statespace import (
    StateVector,
    SystemShape,
    apply_level_permutation,
    check_density_matrix,
    hermitian_eigh,
    hermitian_eigenvalues,
    inner_product,
    normalize,
    partial_trace,
)

EIGEN_CLAMP = 1e-10
SEPARABLE_TOL = 1e-9
SELF_CONJUGATE_TOL = 1e-9
MAX_MES_N = 10
MAX_PROFILE_N = 12

_SIGMA_Y = np.array([[0, -1j], [1j, 0]])


@dataclass(frozen=True)
class EntropyReport:
    per_particle: list[float]
    bipartitions: dict[tuple[int, ...], float] = field(default_factory=dict)


@dataclass(frozen=True)
class MESState:
    """A basis state plus where it came from.

    ``sources`` are the ``(j, m, d)`` labels that were combined and ``sign`` is
    ``+1``/``-1`` for ``v ± conj(v)`` or ``0`` for a self-conjugate state kept
    unchanged.
    """

    state: StateVector
    sources: tuple[tuple[Fraction, Fraction, int], ...]
    sign: int

    @property
    def label(self) -> str:
        def fmt(src):
            j, m, d = src
            return f"|{j},{m};{d}>"

        if self.sign == 0:
            return fmt(self.sources[0])
        op = "+" if self.sign > 0 else "-"
        return f"{fmt(self.sources[0])} {op} conj"


@dataclass(frozen=True)
class MESBasis:
    shape: SystemShape
    states: list[MESState]

    def matrix(self) -> np.ndarray:
        return np.column_stack([s.state.amplitudes for s in self.states])


@dataclass(frozen=True)
class ProductStructure:
    """Finest factorization of a pure state into unentangled particle blocks."""

    blocks: list[tuple[int, ...]]
    factors: list[StateVector]


def _require_normalized(v: StateVector) -> None:
    if not v.is_normalized():
        raise InvalidArgumentError(f"state must be normalized (norm² = {v.norm() ** 2:.6g})")


def _clamped_spectrum(values: Iterable[float]) -> np.ndarray:
    vals = np.asarray(list(values), dtype=float)
    if np.any(vals < -EIGEN_CLAMP):
        raise InvalidArgumentError(f"density matrix has a negative eigenvalue {vals.min():.3g}")
    return np.clip(vals, 0.0, None)


def von_neumann_entropy(rho: np.ndarray) -> float:
    """``-Σ λ log2 λ`` over the spectrum, with ``0·log 0 = 0``."""
    rho = check_density_matrix(rho)
    vals = _clamped_spectrum(hermitian_eigenvalues(rho))
    vals = vals[vals > 0]
    return float(max(0.0, -np.sum(vals * np.log2(vals))))


def subset_entropy(v: StateVector, subset: Iterable[int]) -> float:
    return von_neumann_entropy(partial_trace(v, subset))


def canonical_bipartitions(N: int) -> list[tuple[int, ...]]:
    """One representative per bipartition: the smaller side, or the side holding particle 1 on ties."""
    out = []
    for r in range(1, N // 2 + 1):
        for side in itertools.combinations(range(1, N + 1), r):
            if 2 * r == N and 1 not in side:
                continue
            out.append(side)
    return out


def single_particle_entropies(
    v: StateVector, bipartitions: str | Sequence[Iterable[int]] | None = None
) -> EntropyReport:
    """Entropy of every one-particle reduction, plus optional bipartitions.

    ``bipartitions`` may be ``"all"``, ``"singles"`` or an explicit list of
    particle subsets (1-based).
    """
    _require_normalized(v)
    if v.N == 1:
        return EntropyReport([0.0], {})
    per = [subset_entropy(v, [k]) for k in range(1, v.N + 1)]
    if bipartitions is None or bipartitions == "singles":
        subsets = [(k,) for k in range(1, v.N + 1)] if bipartitions == "singles" else []
    elif bipartitions == "all":
        subsets = canonical_bipartitions(v.N)
    else:
        subsets = [tuple(sorted(s)) for s in bipartitions]
    return EntropyReport(per, {s: subset_entropy(v, s) for s in subsets})


def wootters_concurrence(rho: np.ndarray) -> float:
    """Concurrence of a two-qubit density matrix.

    The ``λ_i`` of ``max(0, λ1 - λ2 - λ3 - λ4)`` are the square roots of the
    eigenvalues of ``ρ ρ̃`` with ``ρ̃ = (σy⊗σy) ρ* (σy⊗σy)``. Writing
    ``ρ = W W^H`` over its non-negligible eigenvectors, they equal the singular
    values of ``W^T (σy⊗σy) W``; this avoids square roots of round-off
    eigenvalues, which would otherwise leak ~1e-9 into pure-state results.
    """
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise InvalidArgumentError(f"Wootters concurrence needs a 4x4 matrix, got {rho.shape}")
    rho = check_density_matrix(rho)
    vals, vecs = hermitian_eigh(rho)
    vals = _clamped_spectrum(vals)
    keep = vals > 1e-14
    w = vecs[:, keep] * np.sqrt(vals[keep])
    yy = np.kron(_SIGMA_Y, _SIGMA_Y).real
    m = w.T @ yy @ w
    sq = np.clip(hermitian_eigenvalues(m.conj().T @ m), 0.0, None)
    lam = np.zeros(4)
    lam[: sq.size] = np.sqrt(sq)
    return float(min(1.0, max(0.0, lam[0] - lam[1:].sum())))


def spin_flip(v: StateVector) -> StateVector:
    """``σy^{⊗N} |v*>``, the fully spin-flipped conjugate of a qubit state."""
    if v.n != 2:
        raise InvalidArgumentError("spin flip is defined for qubits (n = 2) only")
    t = v.tensor().conj()
    for axis in range(v.N):
        t = np.moveaxis(np.tensordot(_SIGMA_Y, t, axes=([1], [axis])), 0, axis)
    return StateVector(v.shape, t.reshape(-1))


def spin_flip_concurrence(v: StateVector) -> float:
    """``|<v| σy^{⊗N} |v*>|`` for a normalized N-qubit pure state."""
    if v.n != 2:
        raise InvalidArgumentError("spin-flip concurrence is defined for qubits (n = 2) only")
    _require_normalized(v)
    return float(min(1.0, abs(inner_product(v, spin_flip(v)))))


def pairwise_concurrences(v: StateVector) -> dict[tuple[int, int], float]:
    """Wootters concurrence of every two-qubit reduction."""
    if v.n != 2:
        raise InvalidArgumentError("pairwise concurrence is defined for qubits (n = 2) only")
    _require_normalized(v)
    if v.N == 2:
        amps = v.amplitudes
        return {(1, 2): wootters_concurrence(np.outer(amps, amps.conj()))}
    return {pair: wootters_concurrence(partial_trace(v, pair)) for pair in itertools.combinations(range(1, v.N + 1), 2)}


def _fix_largest_phase(amps: np.ndarray) -> np.ndarray:
    mags = np.abs(amps)
    k = int(np.flatnonzero(mags >= mags.max() - 1e-12)[0])
    a = amps[k]
    return amps * (abs(a) / a) if abs(a) > 0 else amps


def conjugate_state(v: StateVector, pi: Sequence[int] | None = None) -> StateVector:
    """Interchange levels (1↔2 for qubits) and fix the global phase.

    ``pi`` defaults to reversing the level order. After relabelling, the
    largest-magnitude amplitude (first in index order on ties) is made real
    and positive.
    """
    if pi is None:
        pi = list(range(v.n, 0, -1))
    flipped = apply_level_permutation(v, pi)
    return StateVector(v.shape, _fix_largest_phase(flipped.amplitudes))


def mes_pair(v: StateVector, pi: Sequence[int] | None = None) -> list[StateVector]:
    """``[(v + c)/‖·‖, (v - c)/‖·‖]`` with ``c`` the conjugate, or ``[v]`` if self-conjugate."""
    c = conjugate_state(v, pi)
    if abs(inner_product(c, v)) > 1 - SELF_CONJUGATE_TOL:
        return [v]
    return [normalize(v + c), normalize(v - c)]


def generate_mes_basis(N: int) -> MESBasis:
    """``2**N`` orthonormal states from conjugate pairs of the coupled basis.

    Each ``|j, m; d>`` with ``m > 0`` is combined with its conjugate (which is
    ``|j, -m; d>`` up to phase); ``m = 0`` members are self-conjugate and kept
    as they are.
    """
    if int(N) != N or N < 1:
        raise InvalidArgumentError(f"N must be a positive integer, got {N!r}")
    if N > MAX_MES_N:
        raise ResourceLimitError(f"MES basis is capped at N={MAX_MES_N}, got {N}")
    sectors = couple_spins(N)
    states: list[MESState] = []
    for sec in sectors:
        for mem in sec.members:
            if mem.m < 0:
                continue
            src = (mem.j, mem.m, sec.d)
            pair = mes_pair(mem.state)
            if len(pair) == 1:
                states.append(MESState(pair[0], (src,), 0))
                continue
            partner = find_coupled(sectors, mem.j, -mem.m, sec.d)
            if abs(abs(inner_product(partner, conjugate_state(mem.state))) - 1) > 1e-9:
                raise ArithmeticError(f"conjugate of |{mem.j},{mem.m};{sec.d}> is not its -m partner")
            both = (src, (mem.j, -mem.m, sec.d))
            states.append(MESState(pair[0], both, +1))
            states.append(MESState(pair[1], both, -1))
    return MESBasis(SystemShape(N, 2), states)


def dicke_entropy_profile(N: int) -> dict[Fraction, float]:
    """Single-particle entropy of each symmetric state ``|N/2, m>``, keyed by ``m``."""
    if int(N) != N or N < 1:
        raise InvalidArgumentError(f"N must be a positive integer, got {N!r}")
    if N > MAX_PROFILE_N:
        raise ResourceLimitError(f"Dicke profile is capped at N={MAX_PROFILE_N}, got {N}")
    top = couple_spins(N)[0]
    if N == 1:
        return {mem.m: 0.0 for mem in top.members}
    return {mem.m: subset_entropy(mem.state, [1]) for mem in top.members}


def restrict_to_block(v: StateVector, block: Sequence[int]) -> StateVector:
    """Pure state carried by ``block`` when ``v`` factorizes across it."""
    block = sorted(block)
    if len(block) == v.N:
        return v
    vals, vecs = hermitian_eigh(partial_trace(v, block))
    return StateVector(SystemShape(len(block), v.n), fix_phase(vecs[:, 0]))


def product_structure(v: StateVector, tol: float = SEPARABLE_TOL) -> ProductStructure:
    """Split the particles into the finest set of mutually unentangled blocks.

    A block is split whenever some subset of it (smallest subsets tried first)
    has bipartite entropy below ``tol``; both halves are then examined in turn.
    """
    _require_normalized(v)
    pending = [tuple(range(1, v.N + 1))]
    final: list[tuple[int, ...]] = []
    while pending:
        block = pending.pop()
        split = None
        for r in range(1, len(block) // 2 + 1):
            for sub in itertools.combinations(block, r):
                if subset_entropy(v, sub) < tol:
                    split = sub
                    break
            if split:
                break
        if split is None:
            final.append(block)
        else:
            pending.append(split)
            pending.append(tuple(k for k in block if k not in split))
    final.sort()
    return ProductStructure(final, [restrict_to_block(v, b) for b in final])
