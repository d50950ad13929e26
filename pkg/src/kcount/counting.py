"""Deterministic approximate counting of size-k independent sets and k-matchings.

i_k(G) = λ^{-k}·Z(λ)·P_λ[Y = k] for any λ > 0.  A fugacity is picked so that
E_λ Y is close to k; P_λ[Y = k] is then of order 1/σ and is recovered by
discrete Fourier inversion over P ≥ n+1 equally spaced phases, which is exact
for a random variable on {0..n}.  Only phases inside the window |θ| ≤ γ/σ̂
are evaluated; the rest are charged to the error budget with the high-phase
bound |E e^{iθY}| ≤ exp(-c·λ·n·θ²).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction

from . import exact
from .errors import CertificationError, PreconditionError
from .graphcore import (Graph, critical_density, independence_number_low_degree, is_claw_free, line_graph,
                        maximum_matching_size, shearer_radius)
from .interpolation import (DEFAULT_DELTA, cumulant_estimate, evaluator, lambda_cap, mean_variance,
                            ApproxValue)

GRID_CONSTANT = 4
GAMMA_CONSTANT = 4.0
SMALL_K = 2
MEAN_ERROR = 0.125
LAMBDA_SEARCH_LIMIT = 1e6


def calibrated_phase_constant(lam: float) -> float:
    """Half of the smallest c fitted on the fixture families (see lcltlab.fourier_profile)."""
    return 0.5 * min(0.05, 0.012 / (lam * lam))


# --- ranges --------------------------------------------------------------------

def _frac(x: float) -> Fraction:
    return Fraction(x).limit_denominator(10**9)


def max_valid_k(g: Graph, delta: float = DEFAULT_DELTA) -> int:
    """Largest k accepted for independent sets: ⌈(1-δ)·α_c(Δ)·n⌉, or ⌈(1-δ)·α(G)⌉ when Δ ≤ 2."""
    if g.max_degree >= 3:
        return math.ceil((1 - _frac(delta)) * critical_density(g.max_degree) * g.n)
    return math.ceil((1 - _frac(delta)) * independence_number_low_degree(g))


def max_valid_matching_k(g: Graph, delta: float = DEFAULT_DELTA) -> tuple[int, int]:
    m_star = maximum_matching_size(g)
    return math.ceil((1 - _frac(delta)) * m_star), m_star


def _check_k(k: int, bound: int, what: str):
    if k < 1:
        raise PreconditionError(f"k must be at least 1, got {k}")
    if k > bound:
        raise PreconditionError(f"k = {k} exceeds the supported range k ≤ {bound} for {what}")


# --- fugacity search -----------------------------------------------------------------

@dataclass(frozen=True)
class FugacityBracket:
    lam: float
    grid_constant: int
    grid_index: int
    target_k: int
    mean_estimate: float
    mean_error: float
    satisfied: bool  # |μ̂ - k| ≤ 1/4, hence |E_λ Y - k| ≤ 1/2
    certified: bool


def find_fugacity_deterministic(g: Graph, k: int, eps_mean: float = MEAN_ERROR, *, grid_constant: int = GRID_CONSTANT,
                                delta: float = DEFAULT_DELTA, max_degree: int | None = None,
                                refinements: int = 3) -> FugacityBracket:
    """Grid fugacity t/(C·n) whose certified mean is within 1/4 of k.

    E_λ Y increases with λ, so the smallest grid index whose estimate reaches k
    is found by bisection; it and its left neighbour are compared and the closer
    one kept (ties go to the smaller λ).  When no grid point qualifies the grid
    is refined by doubling C; the best point found is returned with
    satisfied=False if refinement does not help.
    """
    if g.n == 0:
        raise PreconditionError("empty vertex set")
    if not 1 <= k <= g.n:
        raise PreconditionError(f"k = {k} outside 1..n")
    d = g.max_degree if max_degree is None else int(max_degree)
    cap = (1 - delta) * lambda_cap(d, is_claw_free(g))
    n = g.n
    cache: dict[float, tuple[float, float, bool]] = {}

    def mean(lam: float):
        if lam not in cache:
            est = cumulant_estimate(g, lam, 1, eps_mean / (lam * n), delta=delta, max_degree=max_degree)
            cache[lam] = (est.value, est.error_bound, est.certified)
        return cache[lam]

    best = None
    c = grid_constant
    for _ in range(refinements + 1):
        if math.isfinite(cap):
            top = math.floor(cap * c * n + 1e-9)
        else:
            top = 1
            try:
                while mean(top / (c * n))[0] < k and top / (c * n) < LAMBDA_SEARCH_LIMIT:
                    top *= 2
            except CertificationError:
                # the mean stops being certifiable before reaching k; keep the last good point
                top = max(top // 2, 1)
        lo, hi = 1, top
        if mean(hi / (c * n))[0] < k:
            lo = hi
        while lo < hi:
            mid = (lo + hi) // 2
            if mean(mid / (c * n))[0] >= k:
                hi = mid
            else:
                lo = mid + 1
        for t in (lo - 1, lo):
            if t < 1:
                continue
            lam = t / (c * n)
            mu, err, cert = mean(lam)
            gap = abs(mu - k)
            if best is None or gap < best[0] - 1e-12 or (abs(gap - best[0]) <= 1e-12 and lam < best[1].lam):
                best = (gap, FugacityBracket(lam, c, t, k, mu, err, gap <= 0.25, cert))
        if best[1].satisfied:
            break
        c *= 2
    return best[1]


# --- value types ------------------------------------------------------------------

@dataclass(frozen=True)
class FourierPlan:
    lam: float
    mu_hat: float
    sigma_hat: float
    gamma: float
    mesh: float  # spacing of the nodes in standardized units, 2πσ̂/P
    node_count: int  # P
    evaluated_nodes: int
    x_hat: float
    node_tol: float
    tail_err: float
    discretization_err: float
    node_err: float
    uncertified_nodes: int
    stage: str

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


@dataclass(frozen=True)
class CountEstimate:
    k: int
    log_estimate: float
    certified_rel_err: float
    method: str
    certified: bool
    lam: float | None = None
    sigma_hat: float | None = None
    mu_hat: float | None = None
    exact_value: int | None = None
    plan: FourierPlan | None = None
    notes: tuple[str, ...] = ()
    extra: dict = field(default_factory=dict)

    @property
    def estimate(self) -> float:
        if self.exact_value is not None:
            return float(self.exact_value)
        try:
            return math.exp(self.log_estimate)
        except OverflowError:
            return math.inf

    def decimal_string(self, digits: int = 12) -> str:
        if self.exact_value is not None:
            return str(self.exact_value)
        with localcontext() as ctx:
            ctx.prec = digits
            return str(Decimal(repr(self.log_estimate)).exp())

    def to_json(self) -> dict:
        out = {
            "k": self.k,
            "estimate": self.decimal_string(),
            "log_estimate": self.log_estimate,
            "certified_rel_err": self.certified_rel_err,
            "method": self.method,
            "certified": self.certified,
            "lambda": self.lam,
            "sigma_hat": self.sigma_hat,
            "mu_hat": self.mu_hat,
            "plan": self.plan.to_json() if self.plan else None,
            "notes": list(self.notes),
        }
        out.update(self.extra)
        return out


def _exact_estimate(k: int, value: int, method: str, note: str) -> CountEstimate:
    log = math.log(value) if value > 0 else -math.inf
    return CountEstimate(k, log, 0.0, method, True, exact_value=value, notes=(note,))


# --- characteristic function ------------------------------------------------------------

def characteristic_approx(g: Graph, lam: float, t: float, eps: float, *, mu: float | None = None,
                          sigma: float | None = None, delta: float = DEFAULT_DELTA,
                          max_degree: int | None = None) -> ApproxValue:
    """E_λ[e^{itX}] for X = (Y - μ)/σ as e^{-itμ/σ}·Z(λe^{it/σ})/Z(λ).

    μ and σ default to certified estimates; the returned error is relative to
    the standardization actually used.
    """
    if mu is None or sigma is None:
        mv = mean_variance(g, lam, min(eps, 0.01), delta=delta, max_degree=max_degree)
        mu = mv.mean if mu is None else mu
        sigma = math.sqrt(max(mv.variance, 0.0)) if sigma is None else sigma
    if sigma <= 0:
        raise PreconditionError("σ must be positive")
    if abs(t) > GAMMA_CONSTANT * math.sqrt(max(math.log(1 / eps), 1.0)) + 1e-12:
        raise PreconditionError(f"|t| = {abs(t)} beyond the cutoff C·√log(1/ε)")
    ev = evaluator(g, max_degree)
    base = ev.log_Z(lam, eps / 4, delta=delta)
    theta = t / sigma
    shifted = ev.log_Z(lam * cmath.exp(1j * theta), eps / 4, delta=delta)  # RegionError propagates
    log_value = shifted.log_value - base.log_value - 1j * t * mu / sigma
    err = shifted.error + base.error
    certified = shifted.region.certified and base.region.certified
    return ApproxValue(cmath.exp(log_value), max(err, 0.0), 0.0, log_value, certified, shifted.region.kind,
                       shifted.order)


# --- Fourier inversion ------------------------------------------------------------------

def _node_count(n: int) -> int:
    # odd, so no node sits at θ = π
    return n + 1 if (n + 1) % 2 else n + 2


def _fourier_sum(ev, lam: float, k: int, theta_max: float, tol: float, delta: float, phase_c: float):
    g = ev.graph
    P = _node_count(g.n)
    base = ev.log_Z(lam, tol, delta=delta)
    total = 0.0
    node_err = 0.0
    charge = 0.0
    evaluated = 0
    uncertified = 0
    certified = base.region.certified
    for ell in range((P - 1) // 2 + 1):
        theta = 2 * math.pi * ell / P
        weight = 1 if ell == 0 else 2
        if theta > theta_max + 1e-15:
            charge += weight * math.exp(-phase_c * lam * g.n * theta * theta + base.error)
            continue
        try:
            node = base if ell == 0 else ev.log_Z(lam * cmath.exp(1j * theta), tol, delta=delta, samples=2_000)
        except CertificationError:
            uncertified += 1
            charge += weight * math.exp(-phase_c * lam * g.n * theta * theta + base.error)
            continue
        evaluated += 1
        certified = certified and node.region.certified
        phi = cmath.exp(node.log_value - base.log_value)
        total += weight * (phi * cmath.exp(-1j * theta * k)).real
        node_err += weight * abs(phi) * math.exp(node.error) * math.expm1(node.error)
    return {
        "P": P, "log_base": base.log_value.real, "p_hat": total / P, "node_err": node_err / P,
        "charge": charge / P, "evaluated": evaluated, "uncertified": uncertified, "certified": certified,
    }


def _log_rel(res) -> float:
    p = res["p_hat"]
    err = res["node_err"] + res["charge"]
    if p <= 0 or err >= p:
        return math.inf
    return -math.log1p(-err / p)


def fptas_count(g: Graph, k: int, eps: float, *, delta: float = DEFAULT_DELTA, small_k: int = SMALL_K,
                gamma_constant: float = GAMMA_CONSTANT, max_degree: int | None = None,
                phase_constant: float | None = None, check_range: bool = True,
                grid_constant: int = GRID_CONSTANT) -> CountEstimate:
    """i_k(G) within a factor e^{±ε}.

    Stages, each tried only if the previous one cannot certify ε:
      window  nodes with |θ| ≤ γ/σ̂ at the bracket fugacity
      full    every node at the bracket fugacity
      disk    every node at λ' = (1-δ)·R inside the Shearer disk, where all
              nodes are certified for any graph
    """
    if not 0 < eps < 1:
        raise PreconditionError("ε must lie in (0, 1)")
    if check_range:
        _check_k(k, max_valid_k(g, delta), "independent sets")
    elif k < 1:
        raise PreconditionError("k must be at least 1")
    if k <= small_k:
        return _exact_estimate(k, exact.count_size_k(g, k), "exact-small-k", f"k ≤ {small_k}: bounded enumeration")
    bracket = find_fugacity_deterministic(g, k, delta=delta, max_degree=max_degree, grid_constant=grid_constant)
    lam = bracket.lam
    ev = evaluator(g, max_degree)
    mv = mean_variance(g, lam, 0.01, delta=delta, max_degree=max_degree)
    sigma = math.sqrt(max(mv.variance, 1e-12))
    gamma = min(math.pi * sigma, gamma_constant * math.sqrt(math.log(1 / eps)))
    notes = []
    if not bracket.satisfied:
        notes.append(f"fugacity grid reached only |μ̂ - k| = {abs(bracket.mean_estimate - k):.3g}")

    stages = [("window", lam, gamma / sigma), ("full", lam, math.pi)]
    r_disk = (1 - delta) * float(shearer_radius(ev.max_degree))
    stages.append(("disk", r_disk, math.pi))
    for stage, lam_s, theta_max in stages:
        c = calibrated_phase_constant(lam_s) if phase_constant is None else phase_constant
        tol = eps / 10
        res = None
        for _ in range(5):
            try:
                res = _fourier_sum(ev, lam_s, k, theta_max, tol, delta, c)
            except CertificationError as exc:
                notes.append(f"{stage}: {exc}")
                res = None
                break
            if _log_rel(res) <= eps or res["node_err"] <= res["charge"]:
                break
            tol /= 100
        if res is None or _log_rel(res) > eps:
            if res is not None:
                notes.append(f"{stage}: certified error {_log_rel(res):.3g} above ε")
            continue
        log_est = res["log_base"] - k * math.log(lam_s) + math.log(res["p_hat"])
        # the disk stage does not rely on the bracket fugacity at all
        certified = res["certified"] and res["charge"] == 0 and (stage == "disk" or bracket.certified)
        if res["charge"] > 0:
            notes.append("high-phase nodes charged with the calibrated constant")
        plan = FourierPlan(lam_s, mv.mean if lam_s == lam else math.nan, sigma if lam_s == lam else math.nan,
                           gamma, 2 * math.pi * sigma / res["P"], res["P"], res["evaluated"],
                           (k - mv.mean) / sigma, tol, res["charge"], 0.0, res["node_err"], res["uncertified"],
                           stage)
        return CountEstimate(k, log_est, _log_rel(res), f"fourier-{stage}", certified, lam_s, sigma, mv.mean,
                             plan=plan, notes=tuple(notes))
    raise CertificationError(f"could not certify i_{k} to ε = {eps}: " + "; ".join(notes))


def eptas_count(g: Graph, k: int, eps: float, *, delta: float = DEFAULT_DELTA,
                max_degree: int | None = None) -> CountEstimate:
    """Gaussian-density estimate λ^{-k}·Ẑ(λ)·N((k-μ̂)/σ̂)/σ̂ at the bracket fugacity.

    The relative LCLT slack √(2π)·(log n)^{5/2}/σ (unit constant) is reported
    alongside ε and is not a certified bound.
    """
    _check_k(k, max_valid_k(g, delta), "independent sets")
    bracket = find_fugacity_deterministic(g, k, delta=delta, max_degree=max_degree)
    lam = bracket.lam
    ev = evaluator(g, max_degree)
    base = ev.log_Z(lam, eps / 2, delta=delta)
    mv = mean_variance(g, lam, min(eps, 0.01), delta=delta, max_degree=max_degree)
    var = max(mv.variance, 1e-12)
    sigma = math.sqrt(var)
    x = (k - mv.mean) / sigma
    log_est = base.log_value.real - k * math.log(lam) - 0.5 * math.log(2 * math.pi * var) - x * x / 2
    slack = math.sqrt(2 * math.pi) * math.log(max(g.n, 2)) ** 2.5 / sigma
    return CountEstimate(k, log_est, eps + slack, "eptas", False, lam, sigma, mv.mean,
                         notes=("LCLT slack uses an unfitted unit constant",), extra={"lclt_slack": slack})


def count_matchings(g: Graph, k: int, eps: float, *, delta: float = DEFAULT_DELTA,
                    small_k: int = SMALL_K, **kwargs) -> CountEstimate:
    """m_k(G) within e^{±ε} through the line graph, whose polynomial is real-rooted."""
    bound, m_star = max_valid_matching_k(g, delta)
    if g.edge_count == 0:
        raise PreconditionError("graph has no edges")
    _check_k(k, bound, f"matchings (m* = {m_star})")
    lg = line_graph(g)
    res = fptas_count(lg, k, eps, delta=delta, small_k=small_k, check_range=False, **kwargs)
    extra = dict(res.extra, m_star=m_star, matchings=True)
    return CountEstimate(res.k, res.log_estimate, res.certified_rel_err, res.method, res.certified, res.lam,
                         res.sigma_hat, res.mu_hat, res.exact_value, res.plan, res.notes, extra)
