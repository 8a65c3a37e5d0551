"""Dense state vectors over ``(C^n)^{⊗N}`` and the linear algebra around them.

Basis labels use 1-based digits ``|i_1 i_2 ... i_N>`` at every
public boundary; internally digit ``d`` is stored as ``d - 1`` and particle 1 is
the most significant position of the row-major index.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    DegenerateStateError,
    InvalidArgumentError,
    NumericalFailureError,
    ResourceLimitError,
)

#: Largest Hilbert-space dimension ``n**N`` a state may have.
MAX_DIM = 2**24

NORM_TOL = 1e-10
HERMITIAN_TOL = 1e-8
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100


@dataclass(frozen=True)
class SystemShape:
    N: int
    n: int

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise InvalidArgumentError(f"N must be a positive integer, got {self.N!r}")
        if int(self.n) != self.n or self.n < 1:
            raise InvalidArgumentError(f"n must be a positive integer, got {self.n!r}")
        if self.n**self.N > MAX_DIM:
            raise ResourceLimitError(f"n**N = {self.n}**{self.N} exceeds the cap {MAX_DIM}")

    @property
    def dim(self) -> int:
        return self.n**self.N

    @property
    def tensor_shape(self) -> tuple[int, ...]:
        return (self.n,) * self.N


def _digits_ok(label: Sequence[int], shape: SystemShape) -> tuple[int, ...]:
    label = tuple(int(d) for d in label)
    if len(label) != shape.N:
        raise InvalidArgumentError(f"label {label} has {len(label)} digits, expected {shape.N}")
    for d in label:
        if not 1 <= d <= shape.n:
            raise InvalidArgumentError(f"digit {d} outside 1..{shape.n} in label {label}")
    return label


def index_of(label: Sequence[int], shape: SystemShape) -> int:
    """Row-major index of a 1-based digit label.

    >>> index_of([1, 2, 1], SystemShape(3, 2))
    2
    """
    idx = 0
    for d in _digits_ok(label, shape):
        idx = idx * shape.n + (d - 1)
    return idx


def label_of(index: int, shape: SystemShape) -> tuple[int, ...]:
    if not 0 <= index < shape.dim:
        raise InvalidArgumentError(f"index {index} outside 0..{shape.dim - 1}")
    digits = []
    for _ in range(shape.N):
        index, r = divmod(index, shape.n)
        digits.append(r + 1)
    return tuple(reversed(digits))


def format_label(label: Iterable[int]) -> str:
    return "".join(str(d) for d in label) if all(d < 10 for d in label) else ",".join(map(str, label))


@dataclass(frozen=True, eq=False)
class StateVector:
    """Immutable complex amplitude vector over the ``n**N`` computational basis."""

    shape: SystemShape
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != self.shape.dim:
            raise InvalidArgumentError(f"expected {self.shape.dim} amplitudes, got {amps.size}")
        amps.flags.writeable = False
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_terms(cls, shape: SystemShape, terms: Iterable[tuple[complex, Sequence[int]]]) -> "StateVector":
        """Sum ``coeff * |digits>`` over the terms; repeated labels accumulate."""
        amps = np.zeros(shape.dim, dtype=complex)
        for coeff, digits in terms:
            amps[index_of(digits, shape)] += coeff
        return cls(shape, amps)

    @property
    def N(self) -> int:
        return self.shape.N

    @property
    def n(self) -> int:
        return self.shape.n

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm() ** 2 - 1.0) <= tol

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.shape.tensor_shape)

    def terms(self, tol: float = 1e-12) -> list[tuple[tuple[int, ...], complex]]:
        """Non-negligible ``(label, amplitude)`` pairs in index order."""
        nz = np.flatnonzero(np.abs(self.amplitudes) > tol)
        return [(label_of(int(i), self.shape), complex(self.amplitudes[i])) for i in nz]

    def __add__(self, other: "StateVector") -> "StateVector":
        _same_shape(self, other)
        return StateVector(self.shape, self.amplitudes + other.amplitudes)

    def __sub__(self, other: "StateVector") -> "StateVector":
        _same_shape(self, other)
        return StateVector(self.shape, self.amplitudes - other.amplitudes)

    def __mul__(self, scalar: complex) -> "StateVector":
        return StateVector(self.shape, self.amplitudes * scalar)

    __rmul__ = __mul__

    def __neg__(self) -> "StateVector":
        return StateVector(self.shape, -self.amplitudes)

    def __repr__(self) -> str:
        body = " + ".join(f"({a:.6g})|{format_label(lab)}>" for lab, a in self.terms()[:8])
        more = " + ..." if len(self.terms()) > 8 else ""
        return f"StateVector(N={self.N}, n={self.n}: {body or '0'}{more})"


def _same_shape(a: StateVector, b: StateVector) -> None:
    if a.shape != b.shape:
        raise InvalidArgumentError(f"shape mismatch: {a.shape} vs {b.shape}")


def basis_state(label: Sequence[int], shape: SystemShape) -> StateVector:
    amps = np.zeros(shape.dim, dtype=complex)
    amps[index_of(label, shape)] = 1.0
    return StateVector(shape, amps)


def inner_product(a: StateVector, b: StateVector) -> complex:
    """``<a|b>``, conjugate-linear in ``a``."""
    _same_shape(a, b)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def normalize(v: StateVector) -> StateVector:
    nrm = v.norm()
    if nrm <= 1e-12:
        raise DegenerateStateError("cannot normalize a zero vector")
    return StateVector(v.shape, v.amplitudes / nrm)


def _check_permutation(perm: Sequence[int], size: int, what: str) -> list[int]:
    perm = [int(p) for p in perm]
    if sorted(perm) != list(range(1, size + 1)):
        raise InvalidArgumentError(f"{what} {perm} is not a permutation of 1..{size}")
    return [p - 1 for p in perm]


def apply_particle_permutation(v: StateVector, sigma: Sequence[int]) -> StateVector:
    """Move the digit of particle ``k`` to position ``sigma[k-1]`` (1-based).

    The basis map is ``|i_1..i_N> -> |i_{σ⁻¹(1)}..i_{σ⁻¹(N)}>``.
    """
    s = _check_permutation(sigma, v.N, "particle permutation")
    inv = [0] * v.N
    for k, target in enumerate(s):
        inv[target] = k
    return StateVector(v.shape, np.transpose(v.tensor(), inv).reshape(-1))


def apply_level_permutation(v: StateVector, pi: Sequence[int]) -> StateVector:
    """Relabel every digit ``d`` as ``pi[d-1]`` on all particles."""
    p = _check_permutation(pi, v.n, "level permutation")
    inv = np.empty(v.n, dtype=int)
    inv[p] = np.arange(v.n)
    t = v.tensor()
    for axis in range(v.N):
        t = np.take(t, inv, axis=axis)
    return StateVector(v.shape, t.reshape(-1))


def partial_trace(v: StateVector, keep: Iterable[int]) -> np.ndarray:
    """Reduced density matrix on the 1-based particles in ``keep``.

    Kept particles retain their relative order, so the result is indexed by the
    row-major label of the kept digits.
    """
    keep = sorted({int(k) for k in keep})
    if not keep or len(keep) >= v.N:
        raise InvalidArgumentError(f"keep must be a non-empty proper subset of 1..{v.N}, got {keep}")
    if keep[0] < 1 or keep[-1] > v.N:
        raise InvalidArgumentError(f"particle indices must lie in 1..{v.N}, got {keep}")
    axes = [k - 1 for k in keep]
    rest = [a for a in range(v.N) if a not in axes]
    m = np.transpose(v.tensor(), axes + rest).reshape(v.n ** len(axes), -1)
    rho = m @ m.conj().T
    rho.flags.writeable = False
    return rho


def check_density_matrix(rho: np.ndarray, tol: float = NORM_TOL) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidArgumentError(f"density matrix must be square, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T), initial=0.0) > tol:
        raise InvalidArgumentError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise InvalidArgumentError(f"density matrix trace {np.trace(rho).real:.3g} != 1")
    return rho


def hermitian_eigh(m: np.ndarray, *, tol: float = JACOBI_TOL, max_sweeps: int = JACOBI_MAX_SWEEPS):
    """Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Returns ``(values, vectors)`` with values descending and eigenvectors in
    the matching columns, so ``m ≈ vectors @ diag(values) @ vectors^H``.
    """
    a = np.array(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidArgumentError(f"expected a square matrix, got shape {a.shape}")
    if np.max(np.abs(a - a.conj().T), initial=0.0) > HERMITIAN_TOL:
        raise InvalidArgumentError("matrix is not Hermitian within tolerance")
    a = 0.5 * (a + a.conj().T)
    size = a.shape[0]
    vecs = np.eye(size, dtype=complex)
    threshold = tol * max(1.0, float(np.linalg.norm(a)))

    def off_max() -> float:
        if size < 2:
            return 0.0
        return float(np.max(np.abs(a[~np.eye(size, dtype=bool)])))

    sweeps = 0
    while off_max() >= threshold:
        if sweeps >= max_sweeps:
            raise NumericalFailureError(f"Jacobi did not converge in {max_sweeps} sweeps")
        sweeps += 1
        for p, q in itertools.combinations(range(size), 2):
            b = a[p, q]
            r = abs(b)
            if r < 1e-300:
                continue
            phase = b / r
            app, aqq = a[p, p].real, a[q, q].real
            tau = (aqq - app) / (2.0 * r)
            t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            # U = diag(1, conj(phase)) @ [[c, s], [-s, c]] zeroes a[p, q]
            u = np.array([[c, s], [-s * np.conj(phase), c * np.conj(phase)]])
            idx = [p, q]
            a[:, idx] = a[:, idx] @ u
            a[idx, :] = u.conj().T @ a[idx, :]
            a[p, q] = a[q, p] = 0.0
            a[p, p], a[q, q] = a[p, p].real, a[q, q].real
            vecs[:, idx] = vecs[:, idx] @ u

    values = np.real(np.diag(a))
    order = np.argsort(-values, kind="stable")
    return values[order], vecs[:, order]


def hermitian_eigenvalues(m: np.ndarray, **kwargs) -> list[float]:
    values, _ = hermitian_eigh(m, **kwargs)
    return [float(x) for x in values]
