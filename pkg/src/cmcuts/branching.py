"""Monte Carlo for the local-limit branching process.

The root has D children; every later individual has D* - 1 children, where
D* is the size-biased degree. Survival to infinity is approximated by
reaching a fixed depth L. Trials run in vectorised batches with seeds derived
per batch, so results depend only on the seed and the trial count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from cmcuts.rng import derive_seed, draw_seed, make_rng
from cmcuts.theory import DegenerateDistributionError, DegreeDistribution

POPULATION_CAP = 10**7
BATCH = 1 << 16
DEFAULT_L = 30


class Estimate(NamedTuple):
    estimate: float
    stderr: float
    trials: int


class HorizonCheck(NamedTuple):
    at_L: Estimate
    at_2L: Estimate
    converged: bool


@dataclass(frozen=True)
class BranchingOutcome:
    """``generation_sizes[g]`` is Z_g (Z_0 = 1). ``capped`` marks a run stopped
    at the population cap; it counts as surviving the horizon."""

    generation_sizes: list[int]
    extinct_at: int | None
    survived_horizon: bool
    capped: bool = False


class _Laws:
    def __init__(self, dist: DegreeDistribution):
        if dist.mean <= 0:
            raise DegenerateDistributionError("branching process needs E[D] > 0")
        self.root_vals = dist.support
        self.root_cdf = np.cumsum(dist.probs)
        self.root_cdf[-1] = 1.0
        star = dist.size_biased()
        self.off_vals = star.support - 1
        self.off_probs = star.probs
        self.off_cdf = np.cumsum(star.probs)
        self.off_cdf[-1] = 1.0

    def root(self, rng, size):
        return self.root_vals[np.searchsorted(self.root_cdf, rng.random(size), side="right")]

    def single(self, rng, size):
        return self.off_vals[np.searchsorted(self.off_cdf, rng.random(size), side="right")]

    def summed(self, rng, z):
        """Total offspring of ``z[i]`` independent individuals, for each i."""
        if len(self.off_vals) == 1:
            return z * self.off_vals[0]
        return rng.multinomial(z, self.off_probs) @ self.off_vals


def _check_trials(trials: int) -> None:
    if trials < 1:
        raise ValueError("trials must be >= 1")


def _batches(seed, trials: int):
    # seeds depend only on (seed, batch index); batch sizes only on trials
    if isinstance(seed, np.random.Generator):
        seed = draw_seed(seed)
    make_rng(seed)  # rejects None and non-integers
    for b, start in enumerate(range(0, trials, BATCH)):
        yield make_rng(derive_seed(int(seed), b)), min(BATCH, trials - start)


def _estimate(hits: int, trials: int) -> Estimate:
    p = hits / trials
    return Estimate(p, math.sqrt(p * (1 - p) / trials), trials)


def simulate_bp(dist: DegreeDistribution, max_gen: int, seed) -> BranchingOutcome:
    if max_gen < 1:
        raise ValueError("max_gen must be >= 1")
    laws = _Laws(dist)
    rng = make_rng(seed)
    sizes = [1, int(laws.root(rng, 1)[0])]
    capped = False
    while len(sizes) <= max_gen and 0 < sizes[-1]:
        if sizes[-1] > POPULATION_CAP:
            capped = True
            break
        sizes.append(int(laws.summed(rng, np.array([sizes[-1]]))[0]))
    extinct = next((g for g, z in enumerate(sizes) if z == 0), None)
    return BranchingOutcome(sizes, extinct, capped or extinct is None, capped)


def _lineage_heights(laws: _Laws, rng, count: int, L: int) -> np.ndarray:
    """Depth (capped at L) of the deepest descendant of ``count`` fresh individuals."""
    height = np.zeros(count, dtype=np.int64)
    z = np.ones(count, dtype=np.int64)
    active = np.arange(count)
    for step in range(1, L + 1):
        if len(active) == 0:
            break
        z = laws.summed(rng, z)
        keep = z > 0
        active, z = active[keep], z[keep]
        height[active] = step
        big = z > POPULATION_CAP
        if big.any():
            height[active[big]] = L
            active, z = active[~big], z[~big]
    return height


def _survival_batch(laws: _Laws, rng, size: int, max_gen: int) -> int:
    z = laws.root(rng, size)
    alive = z > 0
    z = z[alive]
    done = 0
    for _ in range(max_gen - 1):
        if len(z) == 0:
            break
        big = z > POPULATION_CAP
        done += int(big.sum())
        z = laws.summed(rng, z[~big])
        z = z[z > 0]
    return done + len(z)


def estimate_survival(dist: DegreeDistribution, max_gen: int, trials: int, seed) -> Estimate:
    """Fraction of runs with Z_{max_gen} > 0."""
    if max_gen < 1:
        raise ValueError("max_gen must be >= 1")
    _check_trials(trials)
    laws = _Laws(dist)
    hits = sum(_survival_batch(laws, rng, size, max_gen) for rng, size in _batches(seed, trials))
    return _estimate(hits, trials)


def _tree_counts(laws: _Laws, rng, size: int, r: int, L: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Explicit tree through generation r+1; returns per generation 0..r the
    trial id of each individual and its number of children reaching depth L."""
    trial = [np.arange(size)]
    parent = [None]
    kids = laws.root(rng, size)
    for g in range(r + 1):
        p = np.repeat(np.arange(len(trial[g])), kids)
        parent.append(p)
        trial.append(trial[g][p])
        if g < r:
            kids = laws.single(rng, len(p))
    h = _lineage_heights(laws, rng, len(trial[r + 1]), L)
    out = []
    for g in range(r, -1, -1):
        p = parent[g + 1]
        nsurv = np.bincount(p, weights=h >= L, minlength=len(trial[g])).astype(np.int64)
        best = np.full(len(trial[g]), -1, dtype=np.int64)
        np.maximum.at(best, p, h)
        h = np.where(best >= 0, np.minimum(L, best + 1), 0)
        out.append((trial[g], nsurv))
    return out[::-1]


def estimate_ds_r(dist: DegreeDistribution, r: int, L: int, trials: int, seed) -> Estimate:
    """Probability that an individual in generations 0..r has at least two
    children whose lines of descent reach L generations below them."""
    if r < 0:
        raise ValueError("r must be >= 0")
    if L < 1:
        raise ValueError("L must be >= 1")
    _check_trials(trials)
    laws = _Laws(dist)
    hits = 0
    for rng, size in _batches(seed, trials):
        event = np.zeros(size, dtype=bool)
        for trial, nsurv in _tree_counts(laws, rng, size, r, L):
            event[trial[nsurv >= 2]] = True
        hits += int(event.sum())
    return _estimate(hits, trials)


def estimate_rho_j(dist: DegreeDistribution, j: int, L: int, trials: int, seed) -> Estimate:
    """Probability that exactly j children of the root reach depth L below themselves."""
    if j < 0:
        raise ValueError("j must be >= 0")
    if L < 1:
        raise ValueError("L must be >= 1")
    _check_trials(trials)
    laws = _Laws(dist)
    hits = 0
    for rng, size in _batches(seed, trials):
        (_, nsurv), = _tree_counts(laws, rng, size, 0, L)
        hits += int((nsurv == j).sum())
    return _estimate(hits, trials)


def rho_distribution(dist: DegreeDistribution, L: int, trials: int, seed) -> tuple[np.ndarray, int]:
    """Counts of trials by number of root children reaching depth L (all j at once)."""
    if L < 1:
        raise ValueError("L must be >= 1")
    _check_trials(trials)
    laws = _Laws(dist)
    counts = np.zeros(dist.max_degree + 1, dtype=np.int64)
    for rng, size in _batches(seed, trials):
        (_, nsurv), = _tree_counts(laws, rng, size, 0, L)
        counts += np.bincount(nsurv, minlength=len(counts))
    return counts, trials


def horizon_check(dist: DegreeDistribution, r: int, L: int, trials: int, seed) -> HorizonCheck:
    """DS_r estimates at depths L and 2L from the same seed (common random
    numbers); converged when they differ by at most two combined standard errors."""
    a = estimate_ds_r(dist, r, L, trials, seed)
    b = estimate_ds_r(dist, r, 2 * L, trials, seed)
    se = math.hypot(a.stderr, b.stderr)
    return HorizonCheck(a, b, abs(a.estimate - b.estimate) <= 2 * se)
