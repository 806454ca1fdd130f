"""Quantities attached to a limiting degree distribution.

Everything here is a pure function of a :class:`DegreeDistribution` (or of a
few scalars): moments, the criticality parameter ``nu``, the extinction and
giant-component constants ``xi``/``eta``, Poisson means for odd cycles and
for the distance from bipartiteness, percolation thresholds on random
regular graphs, and the high-density Max-Cut constant ``c*``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Mapping, NamedTuple

import numpy as np

SUM_TOL = 1e-12
CRITICAL_BAND = 1e-9  # |nu - 1| below this is treated as critical (eta = 0)


class DegenerateDistributionError(ValueError):
    """All mass sits at degree 0, so every mean-normalised quantity is undefined."""


class DomainError(ValueError):
    pass


class ConvergenceError(ArithmeticError):
    def __init__(self, message, *, iterations, last, previous):
        super().__init__(f"{message} (iterations={iterations}, last={last!r}, previous={previous!r})")
        self.iterations = iterations
        self.last = last
        self.previous = previous


@dataclass(frozen=True)
class DegreeDistribution:
    """Finite-support probability mass function on nonnegative integer degrees.

    Zero-probability entries are dropped; keys are stored in increasing order.
    """

    pmf: Mapping[int, float]

    def __post_init__(self):
        cleaned = {}
        for d, p in self.pmf.items():
            if isinstance(d, bool) or int(d) != d or d < 0:
                raise ValueError(f"degree must be a nonnegative integer, got {d!r}")
            p = float(p)
            if not math.isfinite(p) or p < 0.0:
                raise ValueError(f"probability for degree {d} must be finite and >= 0, got {p!r}")
            if p > 0.0:
                cleaned[int(d)] = cleaned.get(int(d), 0.0) + p
        if not cleaned:
            raise ValueError("distribution has no mass")
        total = math.fsum(cleaned.values())
        if abs(total - 1.0) > SUM_TOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1 (tolerance {SUM_TOL})")
        object.__setattr__(self, "pmf", dict(sorted(cleaned.items())))

    def __hash__(self):
        return hash(tuple(self.pmf.items()))

    @classmethod
    def from_weights(cls, weights: Mapping[int, float]) -> "DegreeDistribution":
        total = math.fsum(float(w) for w in weights.values())
        if total <= 0:
            raise ValueError("weights must have positive total")
        return cls({d: float(w) / total for d, w in weights.items()})

    @classmethod
    def regular(cls, d: int) -> "DegreeDistribution":
        return cls({d: 1.0})

    @classmethod
    def poisson(cls, lam: float, tail: float = SUM_TOL) -> "DegreeDistribution":
        """Poisson(lam) truncated once the cumulative mass reaches ``1 - tail``, then renormalised."""
        if lam <= 0:
            raise DomainError("Poisson mean must be positive")
        weights = {}
        p = math.exp(-lam)
        acc = 0.0
        k = 0
        while True:
            weights[k] = p
            acc += p
            if acc >= 1.0 - tail or (k > lam and p == 0.0):
                break
            k += 1
            p *= lam / k
        return cls.from_weights(weights)

    @classmethod
    def from_text(cls, text: str) -> "DegreeDistribution":
        """Parse ``degree probability`` lines; ``#`` starts a comment.

        Probabilities may be decimals or fractions such as ``1/3``.
        """
        pmf: dict[int, float] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: expected 'degree probability', got {raw!r}")
            try:
                d = int(parts[0])
                p = float(Fraction(parts[1]))
            except (ValueError, ZeroDivisionError) as exc:
                raise ValueError(f"line {lineno}: {exc}") from None
            if d in pmf:
                raise ValueError(f"line {lineno}: degree {d} listed twice")
            pmf[d] = p
        return cls(pmf)

    @classmethod
    def read(cls, path) -> "DegreeDistribution":
        return cls.from_text(Path(path).read_text())

    def to_text(self) -> str:
        return "".join(f"{d} {p!r}\n" for d, p in self.pmf.items())

    @property
    def support(self) -> np.ndarray:
        return np.fromiter(self.pmf.keys(), dtype=np.int64)

    @property
    def probs(self) -> np.ndarray:
        return np.fromiter(self.pmf.values(), dtype=float)

    @property
    def max_degree(self) -> int:
        return max(self.pmf)

    def p(self, d: int) -> float:
        return self.pmf.get(d, 0.0)

    @property
    def mean(self) -> float:
        return math.fsum(d * p for d, p in self.pmf.items())

    def pgf(self, x: float) -> float:
        return math.fsum(p * x**d for d, p in self.pmf.items())

    def pgf_prime(self, x: float) -> float:
        return math.fsum(d * p * x ** (d - 1) for d, p in self.pmf.items() if d > 0)

    def size_biased(self) -> "DegreeDistribution":
        """Law of D* with P(D* = j) = j P(D = j) / E[D]."""
        mu = self.mean
        if mu <= 0:
            raise DegenerateDistributionError("size-biasing needs a positive mean")
        return DegreeDistribution.from_weights({d: d * p for d, p in self.pmf.items() if d > 0})

    def is_regular(self) -> bool:
        return len(self.pmf) == 1


class Moments(NamedTuple):
    mu: float
    ed2: float
    nu: float


class XiEta(NamedTuple):
    xi: float
    eta: float


class Thresholds(NamedTuple):
    p_min: float
    p_max: float


def moments(dist: DegreeDistribution) -> Moments:
    """Mean ``mu = E[D]``, factorial moment ``E[D(D-1)]`` and ``nu = E[D(D-1)]/E[D]``."""
    mu = dist.mean
    if mu <= 0:
        raise DegenerateDistributionError("all mass at degree 0")
    ed2 = math.fsum(d * (d - 1) * p for d, p in dist.pmf.items())
    return Moments(mu, ed2, ed2 / mu)


def solve_xi_eta(dist: DegreeDistribution, tol: float = 1e-12, max_iter: int = 10**6) -> XiEta:
    """Smallest fixed point of ``x -> g'(x)/E[D]`` on [0, 1] and ``eta = 1 - g(xi)``.

    Monotone iteration from 0 converges upward to the smallest fixed point. For
    ``nu <= 1`` that point is 1 and the giant fraction is 0. Convergence is
    sublinear at ``nu = 1``, so ``nu`` within ``CRITICAL_BAND`` of 1 counts as
    critical.
    """
    if tol <= 0:
        raise DomainError("tol must be positive")
    mu, _, nu = moments(dist)
    if nu <= 1.0 + CRITICAL_BAND:
        return XiEta(1.0, 0.0)
    degs = dist.support
    probs = dist.probs
    pos = degs > 0
    coef = degs[pos] * probs[pos] / mu
    powers = degs[pos] - 1

    x = 0.0
    for it in range(1, max_iter + 1):
        nxt = float(np.dot(coef, x**powers))
        if abs(nxt - x) < tol:
            x = nxt
            break
        x = nxt
    else:
        raise ConvergenceError("fixed-point iteration did not converge", iterations=max_iter, last=nxt, previous=x)
    x = min(max(x, 0.0), 1.0)
    return XiEta(x, 1.0 - dist.pgf(x))


def distbip_poisson_mean(nu: float) -> float:
    """Limit mean of the distance from bipartiteness below criticality: ln((1+nu)/(1-nu))/4."""
    if not 0.0 <= nu < 1.0:
        raise DomainError(f"defined for 0 <= nu < 1, got nu={nu}")
    return 0.5 * math.atanh(nu)


def cycle_poisson_mean(nu: float, k: int) -> float:
    """Limit mean number of k-cycles, nu**k / (2k)."""
    if k < 1:
        raise DomainError("cycle length k must be >= 1")
    if nu < 0:
        raise DomainError("nu must be >= 0")
    return nu**k / (2 * k)


def percolation_thresholds(k: int, d: int) -> Thresholds:
    """Bond-percolation thresholds on the random d-regular graph.

    ``p_min`` is where the giant reaches a 1/k fraction of the vertices (the
    k-section transition); ``p_max = 1/(d-1)`` is where the giant appears.
    """
    if k < 2 or d < 3:
        raise DomainError(f"need k >= 2 and d >= 3, got k={k}, d={d}")
    base = 1.0 - 1.0 / k
    p_min = (1.0 - base ** (1.0 / d)) / (1.0 - base ** ((d - 1.0) / d))
    return Thresholds(p_min, 1.0 / (d - 1))


def _xlogx(x: float) -> float:
    return 0.0 if x <= 0.0 else x * math.log(x)


def cstar_objective(c: float, mu: float) -> float:
    """f(c, mu) whose root in c is the Max-Cut constant c*(mu); strictly decreasing in c."""
    s = c / math.sqrt(mu)
    a, b = 0.25 - s, 0.25 + s
    return math.exp(-_xlogx(a) - _xlogx(b)) - 2.0 ** (1.0 - 1.0 / mu)


def cstar(mu: float, tol: float = 1e-10) -> float:
    """Root of ``cstar_objective(., mu)`` on (0, sqrt(mu)/4) by bisection."""
    if mu <= 2:
        raise DomainError(f"c* is defined for mu > 2, got mu={mu}")
    if tol <= 0:
        raise DomainError("tol must be positive")
    lo, hi = 1e-9, math.sqrt(mu) / 4 - 1e-9
    f_lo, f_hi = cstar_objective(lo, mu), cstar_objective(hi, mu)
    if not (f_lo > 0 > f_hi):
        raise ConvergenceError("bracket does not straddle the root", iterations=0, last=f_hi, previous=f_lo)
    mid = 0.5 * (lo + hi)
    while True:
        mid = 0.5 * (lo + hi)
        fm = cstar_objective(mid, mu)
        if fm == 0.0 or (hi - lo < tol and abs(fm) < tol):
            return mid
        if mid in (lo, hi):
            return mid
        if fm > 0:
            lo = mid
        else:
            hi = mid


def maxcut_upper_bound(n: int, mu: float, c: float) -> float:
    """n (mu/4 + c sqrt(mu))."""
    if n < 1 or mu <= 0 or c < 0:
        raise DomainError("need n >= 1, mu > 0, c >= 0")
    return n * (mu / 4.0 + c * math.sqrt(mu))


@dataclass(frozen=True)
class TheoryParams:
    mu: float
    ed2: float
    nu: float
    xi: float
    eta: float

    @classmethod
    def of(cls, dist: DegreeDistribution, tol: float = 1e-12) -> "TheoryParams":
        mu, ed2, nu = moments(dist)
        xi, eta = solve_xi_eta(dist, tol)
        return cls(mu, ed2, nu, xi, eta)


def summary(dist: DegreeDistribution, k: int = 2) -> dict:
    """Every scalar this module can attach to ``dist``; inapplicable entries are None."""
    tp = TheoryParams.of(dist)
    out = {"mu": tp.mu, "ed2": tp.ed2, "nu": tp.nu, "xi": tp.xi, "eta": tp.eta}
    out["distbip_mean"] = distbip_poisson_mean(tp.nu) if tp.nu < 1 else None
    d = dist.max_degree
    if dist.is_regular() and d >= 3:
        p_min, p_max = percolation_thresholds(k, d)
    else:
        p_min = p_max = None
    out["pmin"], out["pmax"] = p_min, p_max
    out["cstar"] = cstar(tp.mu) if tp.mu > 2 else None
    return out
