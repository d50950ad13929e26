"""Evaluation of Z_G at complex fugacities inside zero-free regions, and cumulants.

log Z is expanded around 0 in its exact Taylor coefficients and re-expanded
through a conformal map y -> f(y) with f(0) = 0, f(1) = λ that sends the unit
disk into a region free of roots.  Three maps are used; each is f(y) = F(s·y)
for a fixed F and a scalar s chosen so that f(1) = λ:

* disk        F(x) = R·x                 region |z| < R
* half-plane  F(x) = 2R·x/(1 - x)        region Re z > -R
* slit-plane  F(x) = 4R·x/(1 - x)^2      region C minus (-inf, -R]

with R the Shearer radius.  Writing Z = Π(1 - r_i z) over inverse roots, the
composed series is log Z(f(y)) = -Σ_m h_m (s·y)^m / m where h_m depends only
on the graph and the map kind, never on λ.  h_m is an exact rational
combination of the integer power sums Σ r_i^j, so it is computed once per graph
and reused for every fugacity.  The truncation error is controlled by |s| < 1
together with an a-priori bound |h_m| ≤ c·N (N = number of roots).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import numpy as np

from . import cluster, exact
from .errors import CertificationError, PreconditionError
from .graphcore import Graph, critical_fugacity, is_claw_free, shearer_radius

DEFAULT_DELTA = 0.1
MAX_ORDER = 6000
CIRCLE_SAMPLES = 10_000
MAX_CUMULANT = 4

KINDS = ("disk", "half-plane", "slit-plane")
# a-priori bound |h_m| ≤ _H_BOUND[kind]·N when every inverse root lands in the unit disk
_H_BOUND = {"disk": 1.0, "half-plane": 2.0, "slit-plane": 4.0}


class RegionError(CertificationError):
    """Fugacity or map image outside the certified zero-free region."""


# --- value types -------------------------------------------------------------

@dataclass(frozen=True)
class ApproxValue:
    """value = r·e^{iθ}·truth + z₃ with e^{-ε} ≤ r ≤ e^{ε}, |θ| ≤ ε, |z₃| ≤ add_err."""

    value: complex | float
    rel_err: float
    add_err: float = 0.0
    log_value: complex | None = None
    certified: bool = True
    method: str = ""
    order: int = 0
    assumption: str | None = None

    def contains(self, truth: complex) -> bool:
        if truth == 0:
            return abs(self.value) <= self.add_err
        ratio = complex(self.value) / complex(truth)
        if ratio == 0:
            return abs(truth) * math.exp(-self.rel_err) <= self.add_err
        rho = min(max(abs(ratio), math.exp(-self.rel_err)), math.exp(self.rel_err))
        phi = min(max(cmath.phase(ratio), -self.rel_err), self.rel_err)
        nearest = rho * cmath.exp(1j * phi) * truth
        return abs(complex(self.value) - nearest) <= self.add_err + 1e-12 * abs(truth)

    def to_json(self) -> dict:
        def num(x):
            x = complex(x)
            return x.real if x.imag == 0 else [x.real, x.imag]
        return {
            "value": num(self.value) if math.isfinite(abs(self.value)) else None,
            "log_value": num(self.log_value) if self.log_value is not None else None,
            "rel_err": self.rel_err,
            "add_err": self.add_err,
            "certified": self.certified,
            "method": self.method,
            "order": self.order,
            "assumption": self.assumption,
        }


@dataclass(frozen=True)
class LogZTaylor:
    coeffs: tuple[Fraction, ...]  # coeffs[j-1] is the order-j coefficient

    @property
    def order(self) -> int:
        return len(self.coeffs)

    def floats(self) -> list[float]:
        return [float(c) for c in self.coeffs]

    def __call__(self, z: complex) -> complex:
        acc = 0j
        for c in reversed(self.coeffs):
            acc = (acc + float(c)) * z
        return acc


def log_z_taylor(g: Graph, t: int, guard: int = cluster.DEFAULT_GUARD) -> LogZTaylor:
    """Taylor coefficients of log Z_G at 0 through order t from the cluster aggregates."""
    if t > guard:
        raise cluster.ClusterGuardError(f"order {t} exceeds the cluster guard {guard}")
    if t < 1:
        raise PreconditionError("order must be at least 1")
    return LogZTaylor(tuple(cluster.order_coefficients(g, t, "supports")))


# --- region maps ---------------------------------------------------------------

@dataclass(frozen=True)
class RegionMap:
    target_lambda: complex
    kind: str
    s: complex
    radius: Fraction
    certified: bool
    sampled_image_check: bool = False
    worst_margin: float = math.nan

    @property
    def eta(self) -> float:
        """Contraction |s|: inverse roots of the composed polynomial satisfy |r| ≤ η."""
        return abs(self.s)

    def __call__(self, y):
        return _outer(self.kind, float(self.radius), self.s * np.asarray(y, dtype=complex))

    def region_margin(self, z) -> np.ndarray:
        return _margin(self.kind, float(self.radius), np.asarray(z, dtype=complex))


def _outer(kind: str, r: float, x):
    if kind == "disk":
        return r * x
    if kind == "half-plane":
        return 2 * r * x / (1 - x)
    return 4 * r * x / (1 - x) ** 2


def _margin(kind: str, r: float, z: np.ndarray) -> np.ndarray:
    """Positive inside the region; roughly the distance to its boundary."""
    if kind == "disk":
        return r - np.abs(z)
    if kind == "half-plane":
        return z.real + r
    # distance to the slit (-inf, -r]
    return np.where(z.real >= -r, np.abs(z + r), np.abs(z.imag))


def _map_parameter(kind: str, r: float, z: complex) -> complex | None:
    """s with F(s) = z and |s| < 1, or None when z lies outside the region."""
    if z == 0:
        return 0j
    if kind == "disk":
        s = z / r
    elif kind == "half-plane":
        if z.real <= -r:
            return None
        s = z / (2 * r + z)
    else:
        if z.imag == 0 and z.real <= -r:
            return None
        w = z / (4 * r)
        root = cmath.sqrt(1 + 4 * w)
        s = ((1 + 2 * w) - root) / (2 * w)
        if abs(s) >= 1:
            s = ((1 + 2 * w) + root) / (2 * w)
    return s if abs(s) < 1 else None


def lambda_cap(max_degree: int, claw_free: bool = False) -> float:
    """Largest supported fugacity modulus; claw-free graphs have only real negative roots."""
    return math.inf if claw_free or max_degree < 3 else float(critical_fugacity(max_degree))


def build_region_map(max_degree: int, delta: float, lam: complex, *, kind: str | None = None,
                     claw_free: bool = False, samples: int = CIRCLE_SAMPLES) -> RegionMap:
    """Map of the unit disk into a zero-free region with f(0)=0, f(1)=λ.

    kind=None picks the certified map with the smallest |s|; the half-plane is
    certified only for claw-free graphs (real roots) and is otherwise used as an
    assumption with certified=False.  The image of `samples` circle points is
    checked against the region and the smallest margin recorded.
    """
    lam = complex(lam)
    if not 0 < delta < 1:
        raise PreconditionError("δ must lie in (0, 1)")
    if lam == 0:
        raise PreconditionError("target fugacity must be nonzero")
    if abs(lam) > (1 - delta) * lambda_cap(max_degree, claw_free) + 1e-12:
        raise PreconditionError(f"|λ| = {abs(lam):.6g} exceeds (1-δ)·λ_c({max_degree})")
    radius = shearer_radius(max_degree)
    r = float(radius)
    candidates: list[tuple[bool, float, str, complex]] = []
    for k in KINDS:
        if kind is not None and k != kind:
            continue
        if k == "disk" and abs(lam) > (1 - delta) * r:
            continue
        if k == "slit-plane" and not claw_free:
            continue
        s = _map_parameter(k, r, lam)
        if s is None:
            continue
        certified = k == "disk" or claw_free
        candidates.append((certified, abs(s), k, s))
    if not candidates:
        where = kind or "any"
        raise RegionError(f"λ = {lam} lies outside the {where} zero-free region (R = {r:.6g})")
    certified_only = [c for c in candidates if c[0]]
    pool = certified_only or candidates
    certified, _, chosen, s = min(pool, key=lambda c: c[1])
    ok, margin = True, math.nan
    if samples:
        y = np.exp(2j * np.pi * np.arange(samples) / samples)
        image = _outer(chosen, r, s * y)
        margins = _margin(chosen, r, image)
        worst = int(np.argmin(margins))
        margin = float(margins[worst])
        if not margin > 0:
            raise RegionError(f"map image leaves the {chosen} region at y = {y[worst]:.6g}, f(y) = {image[worst]:.6g}")
    return RegionMap(lam, chosen, s, radius, certified, ok, margin)


# --- per-graph evaluation engine -------------------------------------------------

@dataclass
class LogEvaluation:
    log_value: complex
    error: float
    order: int
    region: RegionMap


class Evaluator:
    """Caches power sums and the map coefficients h_m for one graph."""

    def __init__(self, g: Graph, max_degree: int | None = None, max_order: int = MAX_ORDER):
        d = g.max_degree if max_degree is None else int(max_degree)
        if d < g.max_degree:
            raise PreconditionError(f"declared Δ = {d} below the actual maximum degree {g.max_degree}")
        self.graph = g
        self.max_degree = d
        self.max_order = max_order
        self.radius = shearer_radius(d)
        self.claw_free = is_claw_free(g)
        counts = exact.independent_set_counts(g, max_order)
        complete = len(counts) - 1 < max_order
        self.complete = complete
        self.counts = counts
        self.n_roots = len(counts) - 1 if complete else g.n
        self.power_sums = exact.power_sums(counts, max_order)
        self._h: dict[str, list[float]] = {k: [0.0] for k in KINDS}  # index 0 unused
        self._pa = [1]
        self._pb = [1]
        self._newton: dict[str, list[float]] = {}

    # exact coefficient tables

    def _powers(self, m: int):
        a, b = self.radius.numerator, self.radius.denominator
        while len(self._pa) <= m:
            self._pa.append(self._pa[-1] * 2 * a)
            self._pb.append(self._pb[-1] * b)

    def h(self, kind: str, order: int) -> list[float]:
        """h_1..h_order (list index m holds h_m), extended lazily and range-checked."""
        if order > self.max_order:
            raise CertificationError(f"series order {order} above the cap {self.max_order}")
        table = self._h[kind]
        if len(table) > order:
            return table
        if kind == "disk":
            a, b = self.radius.numerator, self.radius.denominator
            fresh = [self.power_sums[m] * a**m / b**m for m in range(len(table), order + 1)]
        elif self.complete:
            fresh = self._h_newton(kind, order)[len(table):]
        else:
            fresh = [self.reference_h(kind, m) for m in range(len(table), order + 1)]
        n_roots = self.n_roots
        bound = _H_BOUND[kind] * n_roots
        for m, value in enumerate(fresh, start=len(table)):
            if kind == "disk":
                ok = abs(value) <= n_roots * (1 + 1e-9) + 1e-9
            elif kind == "half-plane":
                # Σ u_i^m with every |u_i| ≤ 1 has modulus at most N
                ok = abs(value + n_roots) <= n_roots * (1 + 1e-9) + 1e-9
            else:
                # Chebyshev values of points in [-1, 1] stay in [-1, 1]
                ok = -bound * (1 + 1e-9) - 1e-9 <= value <= 1e-9 * (1 + bound)
            if not ok:
                raise CertificationError(
                    f"zero-free assumption for the {kind} region refuted at series order {m} (h = {value:.6g})")
            table.append(value)
        return table

    def reference_h(self, kind: str, m: int) -> float:
        """h_m straight from the power sums; O(m) big-integer terms, used as a cross-check."""
        self._powers(m)
        p, pa, pb = self.power_sums, self._pa, self._pb
        a, b = self.radius.numerator, self.radius.denominator
        if kind == "disk":
            return p[m] * a**m / b**m
        if kind == "half-plane":
            num = sum(comb(m, j) * pa[j] * pb[m - j] * p[j] for j in range(1, m + 1))
            return num / pb[m]
        # T_m(1+x) = Σ_j m/(m+j)·C(m+j,2j)·2^j·x^j
        num = sum(m * comb(m + j, 2 * j) * 2**j // (m + j) * pa[j] * pb[m - j] * p[j] for j in range(1, m + 1))
        return 2 * num / pb[m]

    def _h_newton(self, kind: str, order: int) -> list[float]:
        """h_0..h_order via Newton's identities on a degree-N (or 2N) integer polynomial.

        With u_i = 1 + 2R·r_i, Π(1 - u_i x) = Σ_k i_k (2Rx)^k (1-x)^{N-k}; scaled by
        b^N (R = a/b) its x^t coefficient is E_t·b^{N-t} with E_t an integer.  For
        the slit map the 2N numbers v with v + 1/v = 2u_i are the inverse roots of
        Σ_t e_t (2x)^t (1+x²)^{N-t}.  Power sums of those inverse roots, scaled by
        b^m, satisfy an integer recurrence of length N (resp. 2N).
        """
        cache = self._newton.get(kind)
        if cache is not None and len(cache) > order:
            return cache
        a, b = self.radius.numerator, self.radius.denominator
        n_roots = self.n_roots
        counts = self.counts
        e = []
        for t in range(n_roots + 1):
            q = sum(counts[k] * (2 * a) ** k * b ** (n_roots - k) * comb(n_roots - k, t - k) * (-1) ** (t - k)
                    for k in range(t + 1))
            e.append(q // b ** (n_roots - t))
        if kind == "half-plane":
            coeffs, shift = e, n_roots
        else:
            coeffs = [sum(e[t] * 2**t * comb(n_roots - t, (s - t) // 2) * b ** (s - t)
                          for t in range(s % 2, min(s, n_roots) + 1, 2) if (s - t) // 2 <= n_roots - t)
                      for s in range(2 * n_roots + 1)]
            shift = 2 * n_roots
        deg = len(coeffs) - 1
        sums = [0] * (order + 1)
        out = [0.0] * (order + 1)
        scale = 1
        for m in range(1, order + 1):
            acc = -m * coeffs[m] if m <= deg else 0
            for t in range(1, min(m - 1, deg) + 1):
                if coeffs[t]:
                    acc -= coeffs[t] * sums[m - t]
            sums[m] = acc
            scale *= b
            out[m] = acc / scale - shift
        self._newton[kind] = out
        return out

    # truncation bounds

    def _tail(self, kind: str, rho: float, order: int, j: int = 0) -> float:
        """Σ_{m>order} (cN/m)·C(m,j)·ρ^{m-j}: bound on the dropped part of Φ^{(j)}/j!."""
        c = _H_BOUND[kind] * self.n_roots
        if rho == 0:
            return 0.0
        if j == 0:
            return c * rho ** (order + 1) / ((order + 1) * (1 - rho))
        return c * _binomial_tail(rho, order + 1, j)

    def choose_order(self, kind: str, rho: float, tol: float) -> int:
        for m in range(1, self.max_order + 1):
            if self._tail(kind, rho, m) <= tol:
                return m
        raise CertificationError(f"|s| = {rho:.6g} needs more than {self.max_order} terms for tolerance {tol:.3g}")

    # evaluation

    def region(self, z: complex, delta: float = DEFAULT_DELTA, kind: str | None = None,
               samples: int = CIRCLE_SAMPLES) -> RegionMap:
        return build_region_map(self.max_degree, delta, z, kind=kind, claw_free=self.claw_free, samples=samples)

    def log_Z(self, z: complex, tol: float, *, delta: float = DEFAULT_DELTA, kind: str | None = None,
              samples: int = CIRCLE_SAMPLES) -> LogEvaluation:
        """log Z(z) (principal branch continued from 0) with |error| ≤ tol plus rounding."""
        z = complex(z)
        if z == 0:
            return LogEvaluation(0j, 0.0, 0, RegionMap(z, "disk", 0j, self.radius, True))
        region = self.region(z, delta, kind, samples)
        rho = region.eta
        order = self.choose_order(region.kind, rho, tol)
        h = self.h(region.kind, order)
        m = np.arange(1, order + 1)
        terms = np.asarray(h[1:order + 1]) / m * np.power(complex(region.s), m)
        total = -complex(terms.sum())
        mag = float(np.abs(terms).sum())
        error = self._tail(region.kind, rho, order) + 4 * order * 2.2e-16 * (mag + 1)
        if z.imag == 0 and z.real > 0:
            total = complex(total.real, 0.0)
        return LogEvaluation(total, error, order, region)

    def cumulants(self, lam: float, kmax: int, tol: float, *, delta: float = DEFAULT_DELTA,
                  kind: str | None = None) -> tuple[list[float], list[float], int, RegionMap]:
        """κ_1..κ_kmax at real λ > 0 with per-cumulant error bounds.

        κ_k = (d/dt)^k log Z(λe^t) at t = 0.  With s(t) the map parameter of
        λe^t, log Z = Φ(s) for a fixed series Φ, so the κ_k follow from the
        t-Taylor jet of s(t) and the Taylor coefficients of Φ at s(0).
        """
        if kmax > MAX_CUMULANT:
            raise PreconditionError(f"cumulants above order {MAX_CUMULANT} are not supported")
        if lam <= 0:
            raise PreconditionError("λ must be positive")
        region = self.region(lam, delta, kind)
        r = float(self.radius)
        s_jet = _s_jet(region.kind, r, lam, kmax)
        s0 = s_jet[0].real
        delta_jet = [0.0] + [c.real for c in s_jet[1:]]
        abs_delta = [abs(c) for c in delta_jet]
        # [t^k] of δ^j and |δ|^j for j ≤ kmax
        dpow, apow = [[1.0] + [0.0] * kmax], [[1.0] + [0.0] * kmax]
        for _ in range(kmax):
            dpow.append(_jet_mul(dpow[-1], delta_jet))
            apow.append(_jet_mul(apow[-1], abs_delta))

        def error_at(order: int) -> list[float]:
            tails = [self._tail(region.kind, s0, order, j) for j in range(kmax + 1)]
            return [factorial(k) * sum(tails[j] * apow[j][k] for j in range(1, k + 1)) for k in range(1, kmax + 1)]

        lo, hi = 1, self.max_order
        if max(error_at(hi)) > tol:
            raise CertificationError(f"cumulants at λ = {lam} need more than {self.max_order} series terms")
        while lo < hi:
            mid = (lo + hi) // 2
            if max(error_at(mid)) <= tol:
                hi = mid
            else:
                lo = mid + 1
        order = lo
        h = self.h(region.kind, order)
        phi = [0.0] * (kmax + 1)
        mags = [0.0] * (kmax + 1)
        for j in range(kmax + 1):
            for m in range(max(j, 1), order + 1):
                term = h[m] / m * comb(m, j) * s0 ** (m - j)
                phi[j] -= term
                mags[j] += abs(term)
        values, errors = [], []
        tails = error_at(order)
        for k in range(1, kmax + 1):
            val = factorial(k) * sum(phi[j] * dpow[j][k] for j in range(1, k + 1))
            rounding = factorial(k) * sum(mags[j] * apow[j][k] for j in range(1, k + 1)) * 8 * order * 2.2e-16
            values.append(val)
            errors.append(tails[k - 1] + rounding)
        return values, errors, order, region


def _binomial_tail(rho: float, start: int, j: int) -> float:
    """Σ_{m≥start} C(m,j)/m · ρ^{m-j}, summed until a geometric remainder bound is tiny."""
    total = 0.0
    m = max(start, j)
    term = comb(m, j) / m * rho ** (m - j)
    while True:
        total += term
        ratio = (m / (m + 1 - j)) * rho  # term(m+1)/term(m), decreasing in m
        if ratio < 1 and term * ratio / (1 - ratio) <= 1e-17 * total + 1e-300:
            return total + term * ratio / (1 - ratio)
        term *= ratio
        m += 1
        if m > start + 1_000_000:
            return math.inf


@lru_cache(maxsize=32)
def evaluator(g: Graph, max_degree: int | None = None) -> Evaluator:
    return Evaluator(g, max_degree)


# --- jets (truncated Taylor series in t) ---------------------------------------------

def _jet_mul(a: list, b: list) -> list:
    n = len(a)
    return [sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(n)]


def _jet_div(a: list, b: list) -> list:
    out = []
    for k in range(len(a)):
        out.append((a[k] - sum(out[i] * b[k - i] for i in range(k))) / b[0])
    return out


def _jet_sqrt(a: list, root0: complex) -> list:
    out = [root0]
    for k in range(1, len(a)):
        out.append((a[k] - sum(out[i] * out[k - i] for i in range(1, k))) / (2 * root0))
    return out


def _s_jet(kind: str, r: float, lam: float, order: int) -> list[complex]:
    """Taylor jet in t of the map parameter s(λe^t)."""
    z = [complex(lam / factorial(k)) for k in range(order + 1)]
    if kind == "disk":
        return [c / r for c in z]
    if kind == "half-plane":
        den = [2 * r + z[0]] + z[1:]
        return _jet_div(z, den)
    w = [c / (4 * r) for c in z]
    inner = [1 + 4 * w[0]] + [4 * c for c in w[1:]]
    root = _jet_sqrt(inner, cmath.sqrt(inner[0]))
    num = [1 + 2 * w[0] - root[0]] + [2 * w[k] - root[k] for k in range(1, order + 1)]
    den = [2 * c for c in w]
    return _jet_div(num, den)


# --- public operations --------------------------------------------------------------

def _approx_from_log(ev: LogEvaluation, eps: float, method: str) -> ApproxValue:
    try:
        value = cmath.exp(ev.log_value)
    except OverflowError:
        value = complex(math.inf, 0)
    if ev.log_value.imag == 0:
        value = value.real
    assumption = None if ev.region.certified else f"no roots in Re z > -{float(ev.region.radius):.6g}"
    return ApproxValue(value, eps if ev.error <= eps else ev.error, 0.0, ev.log_value, ev.region.certified,
                       method, ev.order, assumption)


def disk_evaluate_Z(g: Graph, lam: complex, eps: float, *, delta: float = DEFAULT_DELTA,
                    max_degree: int | None = None) -> ApproxValue:
    """ε-relative approximation of Z_G(λ) for |λ| ≤ (1-δ)·R_Shearer(Δ)."""
    lam = complex(lam)
    if lam == 0:
        return ApproxValue(1.0, 0.0, 0.0, 0j, True, "disk", 0)
    ev = evaluator(g, max_degree)
    r = float(ev.radius)
    if abs(lam) > (1 - delta) * r:
        raise RegionError(f"|λ| = {abs(lam):.6g} outside the certified disk of radius (1-δ)·{r:.6g}")
    out = ev.log_Z(lam, eps / 2, delta=delta, kind="disk")
    if out.error > eps:
        raise CertificationError(f"error bound {out.error:.3g} exceeds ε = {eps}")
    return _approx_from_log(out, eps, "disk")


def region_evaluate_Z(g: Graph, lam: complex, eps: float, *, delta: float = DEFAULT_DELTA,
                      max_degree: int | None = None, kind: str | None = None) -> ApproxValue:
    """ε-relative approximation of Z_G(λ) for λ up to (1-δ)·λ_c(Δ) via the region maps."""
    lam = complex(lam)
    if lam == 0:
        return ApproxValue(1.0, 0.0, 0.0, 0j, True, "disk", 0)
    ev = evaluator(g, max_degree)
    out = ev.log_Z(lam, eps / 2, delta=delta, kind=kind)
    if out.error > eps:
        raise CertificationError(f"error bound {out.error:.3g} exceeds ε = {eps}")
    return _approx_from_log(out, eps, out.region.kind)


@dataclass(frozen=True)
class CumulantEstimate:
    k: int
    value: float
    error_bound: float
    method: str
    order: int
    certified: bool

    def __float__(self) -> float:
        return self.value


def _cluster_route(lam: float, d: int, delta: float) -> bool:
    return cluster.kp_ratio(lam, d) <= 1 - delta


def cumulant_estimate(g: Graph, lam: float, k: int, eps: float, *, delta: float = DEFAULT_DELTA,
                      max_degree: int | None = None) -> CumulantEstimate:
    """κ_k(Y) under the hard-core measure within ε·λ·n, with its certificate."""
    if not 1 <= k <= MAX_CUMULANT:
        raise PreconditionError(f"cumulant order must be in 1..{MAX_CUMULANT}")
    if lam <= 0:
        raise PreconditionError("λ must be positive")
    d = g.max_degree if max_degree is None else int(max_degree)
    if lam > (1 - delta) * lambda_cap(d, is_claw_free(g)) + 1e-12:
        raise PreconditionError(f"λ = {lam} exceeds (1-δ)·λ_c({d})")
    target = eps * lam * g.n
    if g.n == 0:
        return CumulantEstimate(k, 0.0, 0.0, "empty", 0, True)
    if _cluster_route(lam, d, delta):
        t = cluster.select_truncation_order(lam, d, eps / 2, g.n, k)
        res = cluster.truncated_cumulant(g, lam, k, t, max_degree=d, delta=delta)
        return CumulantEstimate(k, res.value, res.kp_tail_bound, "cluster", t, res.certified)
    ev = evaluator(g, max_degree)
    values, errors, order, region = ev.cumulants(lam, k, target / 2, delta=delta)
    if errors[k - 1] > target:
        raise CertificationError(f"κ_{k} error bound {errors[k - 1]:.3g} exceeds ε·λ·n = {target:.3g}")
    return CumulantEstimate(k, values[k - 1], errors[k - 1], region.kind, order, region.certified)


def cumulant_via_interpolation(g: Graph, lam: float, k: int, eps: float, *, delta: float = DEFAULT_DELTA,
                               max_degree: int | None = None) -> float:
    return cumulant_estimate(g, lam, k, eps, delta=delta, max_degree=max_degree).value


@dataclass(frozen=True)
class MomentEstimate:
    mean: float
    variance: float
    mean_err: float
    variance_err: float
    certified: bool
    method: str


def mean_variance(g: Graph, lam: float, eps: float, *, delta: float = DEFAULT_DELTA,
                  max_degree: int | None = None) -> MomentEstimate:
    m = cumulant_estimate(g, lam, 1, eps, delta=delta, max_degree=max_degree)
    v = cumulant_estimate(g, lam, 2, eps, delta=delta, max_degree=max_degree)
    return MomentEstimate(m.value, v.value, m.error_bound, v.error_bound, m.certified and v.certified, v.method)


def variance_bracket(n: int, lam: float, max_degree: int) -> tuple[float, float]:
    """Lower bound λn/((Δ+1)(1+λ)^{Δ+2}) and the trivial range bound n²/4."""
    return lam * n / ((max_degree + 1) * (1 + lam) ** (max_degree + 2)), n * n / 4
