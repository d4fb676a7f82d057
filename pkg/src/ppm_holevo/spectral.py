"""Eigenvalues, entropies, Toeplitz spectra and the Szego limit integral.

All matrices here are real symmetric: with a real pulse amplitude every
state coefficient and dephasing factor is real.
"""

import math
from dataclasses import dataclass

import numpy as np

from .channel import FULL_DEPHASING, check_kappa
from .errors import (
    InvalidArgumentError,
    InvalidDistributionError,
    NumericalFailureError,
    PSDViolationError,
)

JACOBI_TOLERANCE = 1e-12
JACOBI_MAX_SWEEPS = 100
# Above this size the O(n^3)-per-sweep Jacobi iteration is handed to LAPACK.
JACOBI_MAX_DIM = 128
CLAMP = 1e-10
QUAD_TOLERANCE = 1e-10
QUAD_ORDER = 20
QUAD_MAX_PANELS = 2**14


def symmetric(upper):
    """Symmetrize a square array from its upper triangle."""
    a = np.array(upper, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidArgumentError(f"expected a square matrix, got shape {a.shape}")
    return np.triu(a) + np.triu(a, 1).T


def _off_norm(a):
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def _round_robin(n):
    """Pairings for one parallel Jacobi sweep; each step covers disjoint pairs.

    For odd ``n`` a phantom index ``n`` sits out one pair per step.
    """
    m = n + (n % 2)
    players = list(range(m))
    steps = []
    for _ in range(m - 1):
        p, q = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                p.append(min(a, b))
                q.append(max(a, b))
        steps.append((np.array(p, dtype=np.intp), np.array(q, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return steps


def jacobi_eigenvalues(a, tol=JACOBI_TOLERANCE, max_sweeps=JACOBI_MAX_SWEEPS):
    """Eigenvalues of a real symmetric matrix by cyclic Jacobi rotations.

    Each sweep visits every off-diagonal pair once in round-robin order, so
    the ``n // 2`` rotations of a step touch disjoint rows and are applied
    together. Iteration stops when the off-diagonal Frobenius norm is at most
    ``tol * ||A||_F``.

    Returns eigenvalues in descending order.

    Raises
    ------
    NumericalFailureError
        If the tolerance is not met within ``max_sweeps``; ``residual`` holds
        the final relative off-diagonal norm.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if n == 1:
        return a[0].copy()
    scale = float(np.linalg.norm(a))
    if scale == 0.0:
        return np.zeros(n)
    steps = _round_robin(n)
    residual = _off_norm(a) / scale
    for _ in range(max_sweeps):
        if residual <= tol:
            break
        for p, q in steps:
            apq = a[p, q]
            active = apq != 0.0
            if not np.any(active):
                continue
            p, q, apq = p[active], q[active], apq[active]
            diff = a[q, q] - a[p, p]
            # Tiny couplings relative to the diagonal gap: t ~ apq / diff avoids overflow.
            small = np.abs(apq) < 1e-150 * np.abs(diff)
            theta = diff / (2.0 * np.where(small, 1.0, apq))
            t = np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            t[theta == 0.0] = 1.0
            t[small] = apq[small] / diff[small]
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            ap, aq = a[:, p].copy(), a[:, q].copy()
            a[:, p] = c * ap - s * aq
            a[:, q] = s * ap + c * aq
            ap, aq = a[p, :].copy(), a[q, :].copy()
            a[p, :] = c[:, None] * ap - s[:, None] * aq
            a[q, :] = s[:, None] * ap + c[:, None] * aq
            a[p, q] = 0.0
            a[q, p] = 0.0
        residual = _off_norm(a) / scale
    if residual > tol:
        raise NumericalFailureError(
            f"Jacobi iteration did not converge in {max_sweeps} sweeps "
            f"(relative off-diagonal norm {residual:.3e})",
            residual=residual,
        )
    return np.sort(np.diag(a))[::-1]


def eigenvalues_symmetric(a, method="auto"):
    """Descending eigenvalues of a real symmetric matrix.

    ``method`` is ``"jacobi"``, ``"lapack"`` or ``"auto"`` (Jacobi up to
    ``JACOBI_MAX_DIM``, LAPACK ``syevd`` above).
    """
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise InvalidArgumentError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidArgumentError("matrix has non-finite entries")
    if method == "auto":
        method = "jacobi" if a.shape[0] <= JACOBI_MAX_DIM else "lapack"
    if method == "jacobi":
        return jacobi_eigenvalues(a)
    if method == "lapack":
        try:
            w = np.linalg.eigvalsh(a)
        except np.linalg.LinAlgError as exc:
            raise NumericalFailureError(f"LAPACK eigensolver failed: {exc}") from exc
        return w[::-1].copy()
    raise InvalidArgumentError(f"unknown eigensolver method {method!r}")


def entropy_bits(p):
    """Shannon entropy in bits of a probability vector (or spectrum).

    Entries in ``[-1e-10, 0)`` are roundoff and count as zero; anything more
    negative means the source matrix was not PSD.
    """
    p = np.asarray(p, dtype=float).ravel()
    if p.size and p.min() < -CLAMP:
        raise PSDViolationError(f"eigenvalue {p.min():.3e} below the roundoff clamp -{CLAMP:g}")
    total = float(p.sum())
    if abs(total - 1.0) > 1e-8:
        raise InvalidDistributionError(f"probabilities sum to {total!r}, not 1")
    p = p[p > 0]
    return float(max(-np.sum(p * np.log2(p)), 0.0))


def von_neumann_entropy(rho, method="auto"):
    return entropy_bits(eigenvalues_symmetric(rho, method=method))


def h(x):
    """``x log2 x`` with ``h(0) = 0``; accepts arrays."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = x[pos] * np.log2(x[pos])
    return float(out) if out.ndim == 0 else out


def toeplitz(L, kappa):
    """The ``L x L`` matrix with entries ``exp(-kappa |l - l'|)``."""
    if L < 1:
        raise InvalidArgumentError(f"L must be >= 1, got {L}")
    kappa = check_kappa(kappa)
    if kappa == 0:
        return np.ones((L, L))
    if kappa == FULL_DEPHASING:
        return np.eye(L)
    idx = np.arange(L)
    return np.exp(-kappa * np.abs(idx[:, None] - idx[None, :]))


def szego_symbol(theta, kappa):
    """Symbol ``f(theta) = sum_n exp(-kappa|n|) e^{i n theta}`` in closed form."""
    kappa = check_kappa(kappa)
    if kappa == 0:
        raise InvalidArgumentError("the symbol is singular at kappa = 0")
    theta = np.asarray(theta, dtype=float)
    if kappa == FULL_DEPHASING:
        out = np.ones_like(theta)
    else:
        r = math.exp(-kappa)
        out = (1.0 - r * r) / (1.0 + r * r - 2.0 * r * np.cos(theta))
    return float(out) if out.ndim == 0 else out


def gauss_legendre_periodic(func, a=-math.pi, b=math.pi, tol=QUAD_TOLERANCE, order=QUAD_ORDER, max_panels=QUAD_MAX_PANELS):
    """Composite Gauss-Legendre quadrature with panel doubling.

    ``func`` must accept an array of abscissae. Panels are doubled until two
    successive estimates differ by less than ``tol``.
    """
    x, w = np.polynomial.legendre.leggauss(order)
    previous = None
    panels = 1
    while panels <= max_panels:
        edges = np.linspace(a, b, panels + 1)
        half = 0.5 * (edges[1:] - edges[:-1])
        mid = 0.5 * (edges[1:] + edges[:-1])
        nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
        weights = (half[:, None] * w[None, :]).ravel()
        estimate = float(np.dot(weights, func(nodes)))
        if previous is not None and abs(estimate - previous) < tol:
            return estimate
        previous = estimate
        panels *= 2
    raise NumericalFailureError(
        f"quadrature did not reach {tol:g} with {max_panels} panels", residual=abs(estimate - previous)
    )


@dataclass(frozen=True)
class SzegoIntegral:
    kappa: float
    quadrature: float
    closed_form: float

    @property
    def difference(self):
        return self.quadrature - self.closed_form


def szego_closed_form(kappa):
    """``-log2(1 - exp(-2 kappa))``, the exact value of the entropy integral."""
    kappa = check_kappa(kappa)
    if kappa == 0:
        raise InvalidArgumentError("the entropy integral diverges at kappa = 0")
    if kappa == FULL_DEPHASING:
        return 0.0
    return -math.log2(-math.expm1(-2.0 * kappa))


def szego_entropy_integral(kappa, tolerance=QUAD_TOLERANCE):
    """Evaluate ``(1/2pi) int_{-pi}^{pi} f log2 f dtheta`` numerically.

    The returned record carries both the quadrature value and the closed form
    so callers can compare the two.
    """
    kappa = check_kappa(kappa)
    if kappa == 0:
        raise InvalidArgumentError("the entropy integral diverges at kappa = 0")
    if kappa == FULL_DEPHASING:
        return SzegoIntegral(kappa, 0.0, 0.0)
    value = gauss_legendre_periodic(lambda t: h(szego_symbol(t, kappa)), tol=tolerance) / (2.0 * math.pi)
    return SzegoIntegral(kappa, value, szego_closed_form(kappa))
