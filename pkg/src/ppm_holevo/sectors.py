"""Dephased density matrices of the N-photon sectors and their Holevo terms.

For one word the N-photon component is ``sum_n c_n |n; m>`` with
``c_n^2 = N! / (L^N n_1! ... n_L!)``, so after dephasing the individual
matrix is ``(c c^T) * exp(-kappa lambda)`` over the compositions of N. The
average over words lives on the ``|n; mu>`` basis; an entry survives only if
the two assignments agree on every bin occupied in both patterns, and it is
weighted by ``M^-k(n + n')``.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .channel import FULL_DEPHASING, check_kappa, dephasing_exponents, dephasing_factor
from .enumeration import (
    build_average_basis,
    compositions,
    individual_dim,
    resolve_dim_cap,
)
from .errors import InvalidArgumentError, ResourceLimitError
from .spectral import (
    eigenvalues_symmetric,
    entropy_bits,
    h,
    szego_closed_form,
    toeplitz,
)


def _check(N, L, M=None):
    if N < 1:
        raise InvalidArgumentError(f"sector matrices need N >= 1, got {N}")
    if L < 1:
        raise InvalidArgumentError(f"L must be >= 1, got {L}")
    if M is not None and M < 1:
        raise InvalidArgumentError(f"M must be >= 1, got {M}")


def amplitudes(patterns, N, L):
    """Fock amplitudes ``c_n`` of a word's N-photon component over ``patterns``."""
    fact = np.array([float(math.factorial(k)) for k in range(N + 1)])
    counts = np.asarray(patterns, dtype=np.int64)
    weights = fact[N] / float(L) ** N / np.prod(fact[counts], axis=1)
    return np.sqrt(weights)


def _pattern_matrix(patterns, N, L, kappa):
    c = amplitudes(patterns, N, L)
    lam = dephasing_exponents(np.asarray(patterns, dtype=np.int64))
    return np.outer(c, c) * dephasing_factor(lam, kappa)


def individual_matrix(N, L, kappa, dim_cap=None):
    """Dephased state of one word's N-photon component over ``compositions(N, L)``.

    The result does not depend on the word: the symbols only label which mode
    of each bin is populated.
    """
    _check(N, L)
    kappa = check_kappa(kappa)
    cap = resolve_dim_cap(dim_cap)
    dim = individual_dim(N, L)
    if dim > cap:
        raise ResourceLimitError(f"individual sector N={N}, L={L} has dimension {dim}, above the cap of {cap}")
    return _pattern_matrix(compositions(N, L), N, L, kappa)


def _pattern_positions(basis):
    patterns = []
    where = {}
    rows = np.empty(len(basis), dtype=np.intp)
    for i, (pattern, _) in enumerate(basis):
        if pattern not in where:
            where[pattern] = len(patterns)
            patterns.append(pattern)
        rows[i] = where[pattern]
    return patterns, rows


def average_matrix(N, L, M, kappa, dim_cap=None, basis=None):
    """Dephased average state of the N-photon sector on ``build_average_basis(N, L, M)``."""
    _check(N, L, M)
    kappa = check_kappa(kappa)
    if basis is None:
        basis = build_average_basis(N, L, M, dim_cap=dim_cap)
    patterns, rows = _pattern_positions(basis)
    q = _pattern_matrix(patterns, N, L, kappa)[np.ix_(rows, rows)]
    sym = basis.symbols
    occupied = sym > 0
    both = occupied[:, None, :] & occupied[None, :, :]
    clash = np.any(both & (sym[:, None, :] != sym[None, :, :]), axis=2)
    k_union = np.sum(occupied[:, None, :] | occupied[None, :, :], axis=2)
    out = q * np.power(float(M), -k_union)
    out[clash] = 0.0
    return out


def word_state_in_average_basis(N, L, M, kappa, word, basis=None):
    """A single word's dephased state written on the average-state basis.

    Averaging this over all ``M**L`` words reproduces :func:`average_matrix`;
    tests use that as an independent check of the counting rules.
    """
    _check(N, L, M)
    if len(word) != L or any(not 1 <= s <= M for s in word):
        raise InvalidArgumentError(f"word must have {L} symbols in 1..{M}, got {word}")
    if basis is None:
        basis = build_average_basis(N, L, M)
    patterns = compositions(N, L)
    c = amplitudes(patterns, N, L)
    psi = np.zeros(len(basis))
    for pattern, amp in zip(patterns, c):
        mu = tuple(s for s, n in zip(word, pattern) if n > 0)
        psi[basis.position(pattern, mu)] = amp
    lam = dephasing_exponents(basis.counts)
    return np.outer(psi, psi) * dephasing_factor(lam, kappa)


@dataclass(frozen=True)
class SectorMatrices:
    N: int
    L: int
    M: int
    kappa: float
    individual: np.ndarray
    average: np.ndarray


@dataclass(frozen=True)
class SectorContribution:
    N: int
    L: int
    M: int
    kappa: float
    chi: float
    entropy_individual: float
    entropy_average: float
    dim_individual: int
    dim_average: int


def sector_matrices(N, L, M, kappa, dim_cap=None):
    return SectorMatrices(
        N, L, M, check_kappa(kappa),
        individual_matrix(N, L, kappa, dim_cap=dim_cap),
        average_matrix(N, L, M, kappa, dim_cap=dim_cap),
    )


def sector_chi(N, L, M, kappa, dim_cap=None, method="auto"):
    """Holevo contribution of the N-photon sector, in bits.

    ``chi = S(average) - S(individual)``; the vacuum sector contributes
    exactly zero.
    """
    kappa = check_kappa(kappa)
    if N == 0:
        return SectorContribution(0, L, M, kappa, 0.0, 0.0, 0.0, 1, 1)
    mats = sector_matrices(N, L, M, kappa, dim_cap=dim_cap)
    s_ind = entropy_bits(eigenvalues_symmetric(mats.individual, method=method))
    s_avg = entropy_bits(eigenvalues_symmetric(mats.average, method=method))
    return SectorContribution(
        N, L, M, kappa, s_avg - s_ind, s_ind, s_avg,
        mats.individual.shape[0], mats.average.shape[0],
    )


def chi1_exact(L, M, kappa):
    """One-photon Holevo term from the Toeplitz spectrum.

    ``log2 M + (M - 1)/(L M) * sum_i t_i log2 t_i`` over the eigenvalues of
    ``toeplitz(L, kappa)``; at ``kappa = 0`` the matrix has rank one with
    eigenvalue ``L`` and the closed form is used.
    """
    if L < 1 or M < 1:
        raise InvalidArgumentError(f"need L >= 1 and M >= 1, got L={L}, M={M}")
    kappa = check_kappa(kappa)
    if kappa == 0:
        return math.log2(M) + (M - 1) / M * math.log2(L)
    if kappa == FULL_DEPHASING:
        return math.log2(M)
    t = eigenvalues_symmetric(toeplitz(L, kappa))
    return math.log2(M) + (M - 1) / (L * M) * float(np.sum(h(t)))


def chi1_asymptotic(M, kappa):
    """Long-block limit of the one-photon term: ``log2 M - (M-1)/M log2(1 - e^{-2 kappa})``."""
    kappa = check_kappa(kappa)
    if kappa == 0:
        raise InvalidArgumentError("the one-photon asymptote diverges as kappa -> 0")
    return math.log2(M) + (M - 1) / M * szego_closed_form(kappa)


def all_words(L, M):
    return itertools.product(range(1, M + 1), repeat=L)
