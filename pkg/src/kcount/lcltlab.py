"""Numerical checks of the local and global central limit behaviour of |I|
under the hard-core model, with CSV output for family sweeps."""
from __future__ import annotations

import cmath
import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import exact
from .errors import PreconditionError
from .graphcore import Graph

CSV_HEADER = ("family", "n", "lambda", "sigma2", "sup_error", "normalized", "clt_kolmogorov", "fitted_c")


@dataclass(frozen=True)
class Source:
    """Coefficient vector of Z plus the graph parameters the bounds need."""

    family: str
    n: int
    max_degree: int
    coeffs: tuple[int, ...]


def family_source(family: str, n: int) -> Source:
    """Exact coefficients for the path and cycle families via the transfer recurrence."""
    if family == "path":
        return Source("path", n, min(2, max(n - 1, 0)), tuple(exact.path_polynomial(n)))
    if family == "cycle":
        return Source("cycle", n, 2, tuple(exact.cycle_polynomial(n)))
    raise PreconditionError(f"no exact oracle for family {family!r}; pass a Graph instead")


def as_source(obj, guard: int = exact.DEFAULT_GUARD) -> Source:
    if isinstance(obj, Source):
        return obj
    if isinstance(obj, Graph):
        return Source("graph", obj.n, obj.max_degree, exact.independence_polynomial(obj, guard).coeffs)
    if isinstance(obj, tuple) and len(obj) == 2:
        return family_source(*obj)
    raise PreconditionError("expected a Graph, a Source or a (family, n) pair")


def normal_density(x: float) -> float:
    return math.exp(-x * x / 2) / math.sqrt(2 * math.pi)


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2))


def _log_n(n: int) -> float:
    # log n vanishes at n = 1; floor at 1 so the normalisations stay finite
    return max(math.log(n), 1.0) if n > 0 else 1.0


@dataclass(frozen=True)
class LcltReport:
    family: str
    n: int
    lam: float
    mean: float
    sigma2: float
    sup_error: float
    normalized: float
    clt_kolmogorov: float
    regime_bound: float
    method: str = "exact_oracle"

    def csv_row(self, fitted_c: float | None = None) -> list[str]:
        fc = "" if fitted_c is None else f"{fitted_c:.10g}"
        return [self.family, str(self.n), f"{self.lam:.10g}", f"{self.sigma2:.10g}", f"{self.sup_error:.10g}",
                f"{self.normalized:.10g}", f"{self.clt_kolmogorov:.10g}", fc]


def _distribution(src: Source, lam: float) -> exact.SizeDistribution:
    if lam <= 0:
        raise PreconditionError("λ must be positive")
    dist = exact.size_distribution(src.coeffs, lam)
    if abs(math.fsum(dist.probs) - 1) > 1e-9:
        raise AssertionError("probabilities do not sum to 1")
    return dist


def lclt_error(obj, lam: float) -> LcltReport:
    """sup over integer t of |σ^{-1}N((t-μ)/σ) - P[Y=t]| from the exact distribution."""
    src = as_source(obj)
    dist = _distribution(src, lam)
    mu, sigma = dist.mean, math.sqrt(dist.variance)
    probs = dist.probs
    worst = 0.0
    # beyond the support the Gaussian term decays monotonically, so one extra point per side suffices
    for t in range(-1, len(probs) + 1):
        p = probs[t] if 0 <= t < len(probs) else 0.0
        worst = max(worst, abs(normal_density((t - mu) / sigma) / sigma - p))
    ln = _log_n(src.n)
    s2 = dist.variance
    regime = min(ln**2.5 / s2, 1 / s2 + s2**3 * ln**2 / src.n)
    return LcltReport(src.family, src.n, lam, mu, s2, worst, worst * s2 / ln**2.5,
                      clt_distance(src, lam, dist=dist).statistic, regime)


@dataclass(frozen=True)
class KolmogorovResult:
    statistic: float
    jumps: tuple[tuple[float, float, float], ...]  # (standardized point, left gap, right gap)


def clt_distance(obj, lam: float, dist: exact.SizeDistribution | None = None) -> KolmogorovResult:
    """sup_x |P[(Y-μ)/σ ≤ x] - Φ(x)|, attained at a one-sided limit of a lattice jump."""
    src = as_source(obj)
    dist = dist or _distribution(src, lam)
    mu, sigma = dist.mean, math.sqrt(dist.variance)
    cdf = 0.0
    jumps = []
    worst = 0.0
    for t, p in enumerate(dist.probs):
        if p == 0:
            continue
        x = (t - mu) / sigma
        phi = normal_cdf(x)
        left = abs(cdf - phi)
        cdf += p
        right = abs(min(cdf, 1.0) - phi)
        jumps.append((x, left, right))
        worst = max(worst, left, right)
    return KolmogorovResult(min(worst, 1.0), tuple(jumps))


@dataclass(frozen=True)
class FourierProfile:
    rows: tuple[tuple[float, float, float], ...]  # (t, |E e^{itY}|, exp(-c λ n t²))
    fitted_c: float


def _char(dist: exact.SizeDistribution, t: float) -> complex:
    return sum(q * cmath.exp(1j * t * k) for k, q in enumerate(dist.probs) if q)


def default_t_grid(points: int = 64) -> list[float]:
    return [math.pi * i / points for i in range(-points, points + 1)]


def fourier_profile(obj, lam: float, t_grid: Sequence[float] | None = None) -> FourierProfile:
    """|E e^{itY}| on the grid with the largest c such that |φ(t)| ≤ exp(-c λ n t²) there."""
    src = as_source(obj)
    dist = _distribution(src, lam)
    grid = list(t_grid) if t_grid is not None else default_t_grid()
    mods = [(t, abs(_char(dist, t))) for t in grid]
    cands = [-math.log(m) / (lam * src.n * t * t) for t, m in mods if t != 0 and abs(t) <= math.pi and m > 0]
    fitted = min(cands) if cands else math.inf
    c = fitted if math.isfinite(fitted) else 0.0
    rows = tuple((t, m, math.exp(-c * lam * src.n * t * t)) for t, m in mods)
    return FourierProfile(rows, fitted)


def low_phase_profile(obj, lam: float, t_grid: Sequence[float]) -> list[tuple[float, float]]:
    """(t, σ·|φ_X(t) - e^{-t²/2}|) for the standardized X = (Y-μ)/σ."""
    src = as_source(obj)
    dist = _distribution(src, lam)
    mu, sigma = dist.mean, math.sqrt(dist.variance)
    out = []
    for t in t_grid:
        phi_x = _char(dist, t / sigma) * cmath.exp(-1j * t * mu / sigma)
        out.append((t, sigma * abs(phi_x - math.exp(-t * t / 2))))
    return out


@dataclass(frozen=True)
class VarianceCheck:
    variance: float
    lower_bound: Fraction
    passed: bool
    margin: float
    ratio: float  # Var/(λn)


def variance_bound_check(obj, lam, max_degree: int | None = None) -> VarianceCheck:
    """Var_λ Y ≥ λn/((Δ+1)(1+λ)^{Δ+2}), compared exactly for rational λ."""
    src = as_source(obj)
    d = src.max_degree if max_degree is None else max_degree
    lam_q = Fraction(lam)
    var = exact.exact_cumulants(src.coeffs, lam_q)[1]
    lower = lam_q * src.n / ((d + 1) * (1 + lam_q) ** (d + 2))
    return VarianceCheck(float(var), lower, var >= lower, float(var - lower), float(var / (lam_q * src.n)))


def sweep(family: str, ns: Iterable[int], lam: float) -> list[tuple[LcltReport, float]]:
    out = []
    for n in ns:
        src = family_source(family, n)
        out.append((lclt_error(src, lam), fourier_profile(src, lam).fitted_c))
    return out


def to_csv(rows: Iterable[tuple[LcltReport, float | None]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for rep, fc in rows:
        w.writerow(rep.csv_row(fc))
    return buf.getvalue()
