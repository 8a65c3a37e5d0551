"""Integer partitions, conjugacy classes of S_N and Schur-Weyl dimension counts.

Everything here is exact integer arithmetic. A partition of ``N`` labels three
things at once: a conjugacy class of the symmetric group (as a cycle type), an
irreducible representation of S_N, and the dual irreducible representation of
the unitary group U(n) that pairs with it on ``(C^n)^{⊗N}``.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from math import factorial, prod
from typing import Iterable, Iterator

from .errors import InvalidArgumentError, ResourceLimitError

#: Largest particle count accepted by the combinatorial routines.
MAX_N = 20


class Partition(tuple):
    """A non-increasing tuple of positive integers.

    >>> Partition([2, 1]).N
    3
    >>> Partition([4, 2, 1]).conjugate()
    Partition([3, 2, 1, 1])
    """

    def __new__(cls, parts: Iterable[int]) -> "Partition":
        parts = tuple(int(p) for p in parts)
        if not parts:
            raise InvalidArgumentError("a partition needs at least one part")
        if any(p < 1 for p in parts):
            raise InvalidArgumentError(f"parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise InvalidArgumentError(f"parts must be non-increasing: {parts}")
        return super().__new__(cls, parts)

    @property
    def N(self) -> int:
        return sum(self)

    @property
    def rows(self) -> int:
        return len(self)

    def conjugate(self) -> "Partition":
        return conjugate_partition(self)

    def cells(self) -> Iterator[tuple[int, int]]:
        """Yield ``(row, col)`` of every diagram cell, 0-based, row by row."""
        for i, length in enumerate(self):
            for j in range(length):
                yield i, j

    def __repr__(self) -> str:
        return f"Partition({list(self)})"

    def __str__(self) -> str:
        return "[" + ",".join(str(p) for p in self) + "]"


@dataclass(frozen=True)
class ClassInfo:
    cycle_type: Partition
    size: int


@dataclass(frozen=True)
class DecompositionRecord:
    """One summand ``S^λ ⊗ T^λ`` of the tensor power.

    ``f`` is the dimension of the S_N irrep (and multiplicity of the unitary
    irrep); ``d`` is the dimension of the unitary irrep (and multiplicity of
    the S_N irrep).
    """

    lam: Partition
    f: int
    d: int

    @property
    def product(self) -> int:
        return self.f * self.d


def _check_n(N: int) -> None:
    if int(N) != N or N < 1:
        raise InvalidArgumentError(f"particle count must be a positive integer, got {N!r}")
    if N > MAX_N:
        raise ResourceLimitError(f"N={N} exceeds the combinatorics cap {MAX_N}")


def as_partition(lam: Iterable[int]) -> Partition:
    return lam if isinstance(lam, Partition) else Partition(lam)


def enumerate_partitions(N: int) -> list[Partition]:
    """All partitions of ``N`` in reverse-lexicographic order, ``[N]`` first."""
    _check_n(N)
    out: list[Partition] = []

    def rec(remaining: int, largest: int, prefix: list[int]) -> None:
        if remaining == 0:
            out.append(Partition(prefix))
            return
        for part in range(min(remaining, largest), 0, -1):
            prefix.append(part)
            rec(remaining - part, part, prefix)
            prefix.pop()

    rec(N, N, [])
    return out


def conjugate_partition(lam: Iterable[int]) -> Partition:
    lam = as_partition(lam)
    return Partition(sum(1 for p in lam if p > j) for j in range(lam[0]))


def hook_lengths(lam: Iterable[int]) -> list[list[int]]:
    """Hook length of each cell, laid out like the Young diagram."""
    lam = as_partition(lam)
    conj = conjugate_partition(lam)
    return [[(lam[i] - j - 1) + (conj[j] - i - 1) + 1 for j in range(lam[i])] for i in range(len(lam))]


def dim_symmetric(lam: Iterable[int]) -> int:
    """Dimension ``f^λ`` of the S_N irrep, by the hook length formula."""
    lam = as_partition(lam)
    _check_n(lam.N)
    hooks = prod(h for row in hook_lengths(lam) for h in row)
    f, rem = divmod(factorial(lam.N), hooks)
    assert rem == 0
    return f


def dim_unitary(lam: Iterable[int], n: int) -> int:
    """Dimension ``d_λ(n)`` of the U(n) irrep; zero when λ has more than n rows.

    Uses the hook-content formula, kept in integers by multiplying all
    contents before dividing by the hook product.
    """
    lam = as_partition(lam)
    if int(n) != n or n < 1:
        raise InvalidArgumentError(f"level count must be a positive integer, got {n!r}")
    if len(lam) > n:
        return 0
    hooks = hook_lengths(lam)
    num = prod(n - i + j for i, j in lam.cells())
    den = prod(h for row in hooks for h in row)
    d, rem = divmod(num, den)
    assert rem == 0
    return d


def class_size(lam: Iterable[int]) -> int:
    """Number of permutations of cycle type λ: ``N! / Π_k k^{m_k} m_k!``."""
    lam = as_partition(lam)
    _check_n(lam.N)
    mult = Counter(lam)
    return factorial(lam.N) // prod(k**m * factorial(m) for k, m in mult.items())


def conjugacy_classes(N: int) -> list[ClassInfo]:
    return [ClassInfo(lam, class_size(lam)) for lam in enumerate_partitions(N)]


def decomposition_table(N: int, n: int) -> list[DecompositionRecord]:
    """Schur-Weyl bookkeeping for ``(C^n)^{⊗N}``; ``Σ f·d`` equals ``n**N``."""
    _check_n(N)
    if int(n) != n or n < 1:
        raise InvalidArgumentError(f"level count must be a positive integer, got {n!r}")
    records = [DecompositionRecord(lam, dim_symmetric(lam), dim_unitary(lam, n)) for lam in enumerate_partitions(N)]
    total = sum(r.product for r in records)
    if total != n**N:
        raise ArithmeticError(f"dimension identity broken: {total} != {n}**{N}")
    return records
