"""Poisson-weighted totals, the conjectured linear bound, baselines and
the two-photon splitting comparison."""

import math
from dataclasses import asdict, dataclass

import numpy as np

from .channel import FULL_DEPHASING, check_kappa
from .enumeration import compositions, resolve_dim_cap
from .errors import InvalidArgumentError, ResourceLimitError
from .sectors import (
    all_words,
    chi1_asymptotic,
    chi1_exact,
    individual_matrix,
    sector_chi,
)
from .spectral import entropy_bits, eigenvalues_symmetric

TRUNCATION_FRACTION = 0.95
CONJECTURE_MARGIN = 1e-9
DEFAULT_MAX_PHOTONS = 60
MAX_WORDS = 2**16


def default_kappa_grid(points=25):
    """Log-spaced kappa over [1e-2, 10] bracketed by the exact limits 0 and inf."""
    return [0.0] + [float(k) for k in np.logspace(-2, 1, points)] + [FULL_DEPHASING]


@dataclass(frozen=True)
class ChannelParams:
    L: int
    M: int
    kappa: float
    n_bar: float

    def __post_init__(self):
        if self.L < 1:
            raise InvalidArgumentError(f"L must be >= 1, got {self.L}")
        if self.M < 2:
            raise InvalidArgumentError(f"M must be >= 2, got {self.M}")
        check_kappa(self.kappa)
        if not self.n_bar >= 0 or math.isinf(self.n_bar):
            raise InvalidArgumentError(f"n_bar must be finite and >= 0, got {self.n_bar}")


def poisson_weights(mu, N_max):
    """``P_N(mu)`` for ``N = 0..N_max`` by the recurrence ``P_{N+1} = P_N mu / (N+1)``."""
    if mu < 0 or N_max < 0:
        raise InvalidArgumentError(f"need mu >= 0 and N_max >= 0, got mu={mu}, N_max={N_max}")
    out = np.empty(N_max + 1)
    out[0] = math.exp(-mu)
    for n in range(N_max):
        out[n + 1] = out[n] * mu / (n + 1)
    return out


def retained_mean_fraction(mu, N_max):
    """Fraction of the mean photon number kept by truncating at ``N_max``."""
    if mu == 0:
        return 1.0
    w = poisson_weights(mu, N_max)
    return float(np.dot(np.arange(N_max + 1), w)) / mu


def choose_truncation(L, n_bar, max_photons=DEFAULT_MAX_PHOTONS):
    """Smallest ``N_max`` whose truncated Poisson keeps 95% of the mean ``L * n_bar``."""
    if n_bar < 0:
        raise InvalidArgumentError(f"n_bar must be >= 0, got {n_bar}")
    mu = L * n_bar
    if mu == 0:
        return 0
    target = TRUNCATION_FRACTION * mu
    p = math.exp(-mu)
    acc = 0.0
    n = 0
    while acc < target:
        n += 1
        if n > max_photons:
            raise ResourceLimitError(
                f"L*n_bar = {mu:g} needs more than {max_photons} photons to keep "
                f"{TRUNCATION_FRACTION:.0%} of the mean; use a smaller n_bar"
            )
        p = p * mu / n
        acc += n * p
    return n


@dataclass
class HolevoReport:
    params: ChannelParams
    N_max: int
    weights: list
    per_sector: list
    total_chi: float
    per_use: float
    linear_bound: float | None
    truncated_mass_fraction: float

    def to_dict(self):
        d = {
            "L": self.params.L,
            "M": self.params.M,
            "kappa": self.params.kappa,
            "n_bar": self.params.n_bar,
            "N_max": self.N_max,
            "weights": list(self.weights),
            "per_sector": [
                {"N": s.N, "chi": s.chi, "S_individual": s.entropy_individual, "S_average": s.entropy_average}
                for s in self.per_sector
            ],
            "total_chi": self.total_chi,
            "per_use": self.per_use,
            "linear_bound": self.linear_bound,
            "truncated_mass_fraction": self.truncated_mass_fraction,
        }
        return d


def linear_bound(n_bar, M, kappa):
    """Conjectured bound ``n_bar * chi1_asymptotic``; None where it diverges (kappa = 0)."""
    if check_kappa(kappa) == 0:
        return None
    return n_bar * chi1_asymptotic(M, kappa)


def _sector_table(L, M, kappa, N_max, dim_cap=None):
    return [sector_chi(N, L, M, kappa, dim_cap=dim_cap) for N in range(N_max + 1)]


def total_holevo(params, n_max=None, dim_cap=None, sectors=None):
    """Holevo quantity of a block, summed over photon sectors with Poisson weights.

    The sum is truncated at the smallest ``N_max`` that keeps 95% of the mean
    photon number. ``n_max`` acts as a ceiling: if the rule needs more photons
    a :class:`ResourceLimitError` is raised rather than under-truncating.
    ``sectors`` may supply precomputed contributions indexed by N.
    """
    L, M, kappa, n_bar = params.L, params.M, params.kappa, params.n_bar
    needed = choose_truncation(L, n_bar, max_photons=n_max if n_max is not None else DEFAULT_MAX_PHOTONS)
    N_max = needed if n_max is None else n_max
    mu = L * n_bar
    weights = poisson_weights(mu, N_max)
    if sectors is None:
        sectors = _sector_table(L, M, kappa, N_max, dim_cap=dim_cap)
    per_sector = list(sectors[: N_max + 1])
    if len(per_sector) < N_max + 1:
        raise InvalidArgumentError(f"need sector contributions up to N={N_max}, got {len(per_sector) - 1}")
    total = float(np.dot(weights, [s.chi for s in per_sector]))
    return HolevoReport(
        params=params,
        N_max=N_max,
        weights=[float(w) for w in weights],
        per_sector=per_sector,
        total_chi=total,
        per_use=total / L,
        linear_bound=linear_bound(n_bar, M, kappa),
        truncated_mass_fraction=retained_mean_fraction(mu, N_max),
    )


def holevo_curve(L, M, kappa, n_bars, n_max=None, dim_cap=None):
    """Reports for several ``n_bar`` values, diagonalizing each sector once."""
    ceiling = n_max if n_max is not None else DEFAULT_MAX_PHOTONS
    needed = [choose_truncation(L, nb, max_photons=ceiling) for nb in n_bars]
    top = max(needed, default=0) if n_max is None else n_max
    table = _sector_table(L, M, kappa, top, dim_cap=dim_cap)
    return [
        total_holevo(ChannelParams(L, M, kappa, nb), n_max=n_max if n_max is not None else need, sectors=table)
        for nb, need in zip(n_bars, needed)
    ]


@dataclass(frozen=True)
class ConjectureRecord:
    N: int
    kappa: float
    chi_N: float
    N_chi_1: float

    @property
    def margin(self):
        return self.chi_N - self.N_chi_1

    @property
    def violated(self):
        return self.margin > CONJECTURE_MARGIN


def conjecture_records(L, M, kappa_grid, N_max, dim_cap=None):
    """``chi_N`` and ``N * chi_1`` for every kappa in the grid and ``2 <= N <= N_max``."""
    out = []
    for kappa in kappa_grid:
        chi1 = sector_chi(1, L, M, kappa, dim_cap=dim_cap).chi
        for N in range(2, N_max + 1):
            chi_n = sector_chi(N, L, M, kappa, dim_cap=dim_cap).chi
            out.append(ConjectureRecord(N, check_kappa(kappa), chi_n, N * chi1))
    return out


def conjecture_check(L, M, kappa_grid, N_max, dim_cap=None):
    """Records where ``chi_N`` exceeds ``N * chi_1`` by more than 1e-9 bits."""
    return [r for r in conjecture_records(L, M, kappa_grid, N_max, dim_cap=dim_cap) if r.violated]


def binary_entropy(p):
    if p <= 0 or p >= 1:
        return 0.0
    return -(p * math.log2(p) + (1 - p) * math.log2(1 - p))


@dataclass(frozen=True)
class Baselines:
    n_bar: float
    erasure: float
    holevo_binary: float
    leading_order: float


def baselines(n_bar):
    """Single-bin binary polarization encoding: direct detection vs the Holevo limit.

    ``erasure = 1 - e^{-n}``, ``holevo_binary = H((1 - e^{-n})/2)`` and the
    small-signal asymptote ``(n/2) log2(1/n)``.
    """
    if not n_bar >= 0:
        raise InvalidArgumentError(f"n_bar must be >= 0, got {n_bar}")
    if n_bar == 0:
        return Baselines(0.0, 0.0, 0.0, 0.0)
    click = -math.expm1(-n_bar)
    return Baselines(n_bar, click, binary_entropy(click / 2), n_bar / 2 * math.log2(1 / n_bar))


def baseline_slopes(n_bar, rel_step=1e-3):
    """Central finite-difference slopes ``(d erasure/dn, d holevo_binary/dn)``.

    At ``n_bar = 0`` the exact limits ``(1, inf)`` are returned.
    """
    if n_bar == 0:
        return 1.0, math.inf
    step = rel_step * n_bar
    hi, lo = baselines(n_bar + step), baselines(n_bar - step)
    return (hi.erasure - lo.erasure) / (2 * step), (hi.holevo_binary - lo.holevo_binary) / (2 * step)


# Two-photon splitting.
#
# Single-photon states live on the L*M modes (l, m), indexed l*M + (m-1);
# a split photon pair lives on the product of two such spaces.


def single_photon_state(L, M, kappa, word):
    """Dephased one-photon state of ``word`` on the ``L*M`` single-photon modes."""
    idx = [l * M + (m - 1) for l, m in enumerate(word)]
    rho = np.zeros((L * M, L * M))
    rho[np.ix_(idx, idx)] = individual_matrix(1, L, kappa)
    return rho


def _split_isometry(L, M, word, patterns):
    d = L * M
    v = np.zeros((d * d, len(patterns)))
    for col, pattern in enumerate(patterns):
        occ = [l for l, n in enumerate(pattern) for _ in range(n)]
        a, b = (occ[0] * M + word[occ[0]] - 1, occ[1] * M + word[occ[1]] - 1)
        if a == b:
            v[a * d + a, col] = 1.0
        else:
            v[a * d + b, col] = v[b * d + a, col] = 1.0 / math.sqrt(2.0)
    return v


def independent_pair_state(L, M, kappa, word):
    """Two independently dephased photons: the tensor square of the one-photon state."""
    rho = single_photon_state(L, M, kappa, word)
    return np.kron(rho, rho)


def collective_pair_state(L, M, kappa, word):
    """The dephased two-photon state with its photons routed into two paths.

    ``|..2..>`` maps to ``|l>|l>`` and ``|..1..1..>`` to the symmetrized
    product, so the map is an isometry onto the symmetric subspace.
    """
    patterns = compositions(2, L)
    v = _split_isometry(L, M, word, patterns)
    return v @ individual_matrix(2, L, kappa) @ v.T


def partial_trace_second(rho, d):
    return np.trace(rho.reshape(d, d, d, d), axis1=1, axis2=3)


@dataclass(frozen=True)
class EntropyTriple:
    S_individual: float
    S_average: float
    chi2: float


@dataclass(frozen=True)
class SplittingComparison:
    L: int
    M: int
    kappa: float
    chi1: float
    independent: EntropyTriple
    collective: EntropyTriple

    @property
    def collective_below_independent(self):
        return self.collective.chi2 <= self.independent.chi2

    def to_dict(self):
        d = asdict(self)
        d["collective_below_independent"] = self.collective_below_independent
        return d


def _triple(builder, L, M, kappa):
    words = list(all_words(L, M))
    s_ind = entropy_bits(eigenvalues_symmetric(builder(L, M, kappa, words[0])))
    avg = sum(builder(L, M, kappa, w) for w in words) / len(words)
    s_avg = entropy_bits(eigenvalues_symmetric(avg))
    return EntropyTriple(s_ind, s_avg, s_avg - s_ind)


def splitting_comparison(L, M, kappa, dim_cap=None):
    """Entropies and ``chi2`` for collective versus independent dephasing of a photon pair."""
    if L < 2:
        raise InvalidArgumentError(f"photon splitting needs L >= 2, got {L}")
    if M < 1:
        raise InvalidArgumentError(f"M must be >= 1, got {M}")
    kappa = check_kappa(kappa)
    cap = resolve_dim_cap(dim_cap)
    if (L * M) ** 2 > cap:
        raise ResourceLimitError(f"pair space of dimension {(L * M) ** 2} exceeds the cap of {cap}")
    if M**L > MAX_WORDS:
        raise ResourceLimitError(f"averaging over {M ** L} words exceeds the limit of {MAX_WORDS}")
    return SplittingComparison(
        L, M, kappa,
        chi1_exact(L, M, kappa),
        _triple(independent_pair_state, L, M, kappa),
        _triple(collective_pair_state, L, M, kappa),
    )
