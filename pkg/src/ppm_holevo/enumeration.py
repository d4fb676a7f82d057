"""Multimode Fock bases of the N-photon sectors.

An occupation pattern is a tuple of per-bin photon counts. A symbol
assignment is a tuple giving, in ascending bin order, the symbol (1..M)
carried by each occupied bin. A sector basis for the average state is the
list of all (pattern, assignment) pairs.
"""

import itertools
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError, ResourceLimitError

DEFAULT_DIM_CAP = 5000
_INT64_MAX = 2**63 - 1


def resolve_dim_cap(cap=None):
    """Return ``cap`` or, if None, ``$HOLEVO_DIM_CAP`` or the default 5000."""
    if cap is None:
        env = os.environ.get("HOLEVO_DIM_CAP")
        if env is None or env.strip() == "":
            return DEFAULT_DIM_CAP
        try:
            cap = int(env)
        except ValueError:
            raise InvalidArgumentError(f"HOLEVO_DIM_CAP must be an integer, got {env!r}") from None
    if cap < 1:
        raise InvalidArgumentError(f"dimension cap must be positive, got {cap}")
    return cap


def _checked(value):
    if value > _INT64_MAX:
        raise OverflowError(f"count {value} overflows a 64-bit integer")
    return value


def _binom(n, k):
    return _checked(math.comb(n, k))


def _check_sizes(N, L):
    if L < 1:
        raise InvalidArgumentError(f"number of bins L must be >= 1, got {L}")
    if N < 0:
        raise InvalidArgumentError(f"photon number N must be >= 0, got {N}")


def compositions(N, L):
    """All compositions of ``N`` into ``L`` nonnegative parts.

    Patterns come out in colexicographic order, generated by the classic
    composition-successor step (the first part is drained one photon at a
    time into the next nonzero position).

    >>> compositions(2, 2)
    [(2, 0), (1, 1), (0, 2)]
    """
    _check_sizes(N, L)
    r = [N] + [0] * (L - 1)
    out = [tuple(r)]
    t, h = N, 0
    while r[-1] != N:
        if t > 1:
            h = 0
        h += 1
        t = r[h - 1]
        r[h - 1] = 0
        r[0] = t - 1
        r[h] += 1
        out.append(tuple(r))
    return out


def occupied_count(pattern):
    """Number of bins holding at least one photon."""
    return sum(1 for n in pattern if n > 0)


def individual_dim(N, L):
    """Dimension of the sector spanned by one word's Fock states."""
    if N < 1 or L < 1:
        raise InvalidArgumentError(f"individual_dim needs N >= 1 and L >= 1, got N={N}, L={L}")
    total = 0
    for k in range(1, min(L, N) + 1):
        total = _checked(total + _binom(N - 1, k - 1) * _binom(L, k))
    return total


def average_dim(N, L, M):
    """Dimension of the sector spanned by all words' Fock states."""
    if N < 1 or L < 1:
        raise InvalidArgumentError(f"average_dim needs N >= 1 and L >= 1, got N={N}, L={L}")
    if M < 1:
        raise InvalidArgumentError(f"number of symbols M must be >= 1, got {M}")
    total = 0
    for k in range(1, min(L, N) + 1):
        total = _checked(total + _binom(N - 1, k - 1) * _binom(L, k) * _checked(M**k))
    return total


@dataclass(frozen=True)
class SectorBasis:
    """Ordered basis of (pattern, assignment) labels for one photon sector.

    ``counts`` and ``symbols`` are dense ``(dim, L)`` integer arrays; unoccupied
    bins carry symbol 0 so that vectorized compatibility checks are simple.
    """

    N: int
    L: int
    M: int
    entries: tuple
    index: dict = field(repr=False, compare=False)
    counts: np.ndarray = field(repr=False, compare=False)
    symbols: np.ndarray = field(repr=False, compare=False)

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def position(self, pattern, assignment):
        return self.index[(tuple(pattern), tuple(assignment))]


def _assignments(pattern, M):
    return itertools.product(range(1, M + 1), repeat=occupied_count(pattern))


def full_symbols(pattern, assignment):
    """Expand an assignment to a length-L symbol row with 0 on empty bins."""
    row = [0] * len(pattern)
    it = iter(assignment)
    for i, n in enumerate(pattern):
        if n > 0:
            row[i] = next(it)
    return row


def build_average_basis(N, L, M, dim_cap=None):
    """Enumerate every distinguishable ``|n; mu>`` state of the N-photon sector.

    Patterns are in :func:`compositions` order; for each pattern the
    ``M**k(n)`` assignments follow in lexicographic order.

    Raises
    ------
    ResourceLimitError
        If the basis would exceed the dimension cap.
    """
    _check_sizes(N, L)
    if M < 1:
        raise InvalidArgumentError(f"number of symbols M must be >= 1, got {M}")
    cap = resolve_dim_cap(dim_cap)
    dim = average_dim(N, L, M) if N > 0 else 1
    if dim > cap:
        raise ResourceLimitError(
            f"sector N={N}, L={L}, M={M} has dimension {dim}, above the cap of {cap} "
            "(raise HOLEVO_DIM_CAP or the dim_cap argument)"
        )
    entries = []
    for pattern in compositions(N, L):
        for mu in _assignments(pattern, M):
            entries.append((pattern, mu))
    counts = np.array([p for p, _ in entries], dtype=np.int64).reshape(len(entries), L)
    symbols = np.array([full_symbols(p, mu) for p, mu in entries], dtype=np.int64).reshape(len(entries), L)
    index = {e: i for i, e in enumerate(entries)}
    return SectorBasis(N, L, M, tuple(entries), index, counts, symbols)
