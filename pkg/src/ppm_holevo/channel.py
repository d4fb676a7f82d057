"""Phase diffusion between consecutive time bins.

Diffusion strength is a plain float ``kappa``. ``math.inf`` (exported as
``FULL_DEPHASING``) is the fully dephased limit and ``0.0`` is perfect
coherence; both are routed to exact branches and never multiplied through.
"""

import math

import numpy as np

from .errors import InvalidArgumentError

FULL_DEPHASING = math.inf
KERNEL_TOLERANCE = 1e-16


def check_kappa(kappa):
    kappa = float(kappa)
    if math.isnan(kappa) or kappa < 0:
        raise InvalidArgumentError(f"kappa must be >= 0 or inf, got {kappa}")
    return kappa


def coherence_time(kappa):
    """Coherence time in units of time bins, ``1/kappa``."""
    kappa = check_kappa(kappa)
    if kappa == 0:
        return math.inf
    return 1.0 / kappa


def kernel_density(phi, kappa, tolerance=KERNEL_TOLERANCE):
    """Wrapped-Gaussian phase-step density on the circle.

    Evaluates ``(1 + 2 sum_n cos(n phi) exp(-kappa n^2)) / 2pi``, stopping
    once ``exp(-kappa n^2)`` drops below ``tolerance``. ``phi`` may be an
    array. Only used to validate the Fourier identity; the channel itself is
    applied through :func:`dephasing_factor`.
    """
    kappa = check_kappa(kappa)
    if kappa == 0:
        raise InvalidArgumentError("kernel is a Dirac delta at kappa = 0; branch on kappa first")
    phi = np.asarray(phi, dtype=float)
    total = np.ones_like(phi)
    if kappa != FULL_DEPHASING:
        n = 1
        while True:
            weight = math.exp(-kappa * n * n)
            if weight < tolerance:
                break
            total = total + 2.0 * weight * np.cos(n * phi)
            n += 1
    out = total / (2.0 * math.pi)
    return float(out) if out.ndim == 0 else out


def _pattern_array(n):
    return np.asarray(n, dtype=np.int64)


def dephasing_exponent(n, n_prime):
    """Integer exponent ``lambda`` with ``Lambda(|n><n'|) = exp(-kappa lambda) |n><n'|``.

    Computed as the sum over ``l = 2..L`` of the squared suffix sums of
    ``n - n'``, which is manifestly a nonnegative integer.
    """
    a, b = _pattern_array(n), _pattern_array(n_prime)
    if a.shape != b.shape or a.ndim != 1:
        raise InvalidArgumentError(f"patterns must have equal length, got {len(a)} and {len(b)}")
    if a.sum() != b.sum():
        raise InvalidArgumentError(
            f"patterns carry {a.sum()} and {b.sum()} photons; coherences between "
            "different totals are removed by the global phase average"
        )
    suffix = np.cumsum((a - b)[::-1])[::-1]
    return int(np.dot(suffix[1:], suffix[1:]))


def dephasing_exponent_double_sum(n, n_prime):
    """Pairwise form ``-sum_{i<j} (j-i)(n_i-n'_i)(n_j-n'_j)``; test oracle."""
    d = [x - y for x, y in zip(n, n_prime)]
    total = 0
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            total -= (j - i) * d[i] * d[j]
    return total


def suffix_sums(counts):
    """Row-wise suffix sums over bins ``2..L`` of a ``(dim, L)`` count array.

    ``dephasing_exponents`` uses these to vectorize the exponent: for equal
    totals, ``lambda`` is the squared distance between suffix-sum rows.
    """
    counts = np.asarray(counts, dtype=np.int64)
    return np.cumsum(counts[:, ::-1], axis=1)[:, ::-1][:, 1:]


def dephasing_exponents(counts):
    """Matrix of exponents between every pair of rows of ``counts``."""
    s = suffix_sums(counts)
    diff = s[:, None, :] - s[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def dephasing_factor(lam, kappa):
    """``exp(-kappa * lam)`` with exact values at ``lam = 0``, ``kappa = 0`` and ``kappa = inf``.

    ``lam`` may be an integer array, in which case an array is returned.
    """
    kappa = check_kappa(kappa)
    lam_arr = np.asarray(lam)
    if np.any(lam_arr < 0):
        raise InvalidArgumentError("dephasing exponent must be nonnegative")
    if kappa == 0:
        out = np.ones(lam_arr.shape)
    elif kappa == FULL_DEPHASING:
        out = (lam_arr == 0).astype(float)
    else:
        out = np.exp(-kappa * lam_arr.astype(float))
    return float(out) if out.ndim == 0 else out
