"""Configuration-model sampling.

Two constructions of the same law are provided: uniform pairing of half-edges
(:func:`generate`) and the sequential coalescing construction
(:func:`generate_sequential`), which starts from a uniform matching of
degree-one stub vertices and merges them into the real vertices one at a time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from cmcuts.graph import MultiGraph
from cmcuts.rng import draw_seed, make_rng
from cmcuts.theory import DegreeDistribution, DomainError


class ParityError(ValueError):
    """Degree sum is odd, so no perfect matching of half-edges exists."""


class RejectionError(RuntimeError):
    def __init__(self, attempts: int):
        super().__init__(f"no simple graph after {attempts} attempts")
        self.attempts = attempts


@dataclass(frozen=True, eq=False)
class DegreeSequence:
    """Degrees of vertices ``0..n-1``.

    ``parity_fix`` is the vertex whose degree was bumped by one to make the sum
    even, or None when the sampled sum was already even.
    """

    degrees: np.ndarray
    parity_fix: int | None = None

    def __post_init__(self):
        d = np.array(self.degrees, dtype=np.int64).ravel()
        if (d < 0).any():
            raise ValueError("degrees must be nonnegative")
        d.setflags(write=False)
        object.__setattr__(self, "degrees", d)

    @property
    def n(self) -> int:
        return len(self.degrees)

    @property
    def total(self) -> int:
        """Number of half-edges."""
        return int(self.degrees.sum())

    def __len__(self):
        return len(self.degrees)

    def __eq__(self, other):
        if not isinstance(other, DegreeSequence):
            return NotImplemented
        return np.array_equal(self.degrees, other.degrees) and self.parity_fix == other.parity_fix


@dataclass(frozen=True)
class GenReport:
    seed: int
    attempts: int
    simple: bool
    parity_fix: int | None = None


def as_sequence(seq) -> DegreeSequence:
    return seq if isinstance(seq, DegreeSequence) else DegreeSequence(np.asarray(seq))


def _require_even(seq: DegreeSequence) -> None:
    if seq.total % 2:
        raise ParityError(f"degree sum {seq.total} is odd")


def sample_degree_sequence(dist: DegreeDistribution, n: int, seed) -> DegreeSequence:
    """n i.i.d. degrees from ``dist``; an odd sum bumps one uniform vertex by 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = make_rng(seed)
    cdf = np.cumsum(dist.probs)
    cdf[-1] = 1.0
    idx = np.searchsorted(cdf, rng.random(n), side="right")
    degrees = dist.support[np.minimum(idx, len(cdf) - 1)]
    fix = None
    if degrees.sum() % 2:
        fix = int(rng.integers(n))
        degrees[fix] += 1
    return DegreeSequence(degrees, fix)


def regular_sequence(d: int, n: int) -> DegreeSequence:
    degrees = np.full(n, d, dtype=np.int64)
    fix = None
    if (d * n) % 2:
        fix = n - 1
        degrees[fix] += 1
    return DegreeSequence(degrees, fix)


def generate(seq, seed) -> MultiGraph:
    """Uniform random perfect matching of the half-edges (shuffle, pair neighbours)."""
    seq = as_sequence(seq)
    _require_even(seq)
    rng = make_rng(seed)
    stubs = np.repeat(np.arange(seq.n, dtype=np.int64), seq.degrees)
    rng.shuffle(stubs)
    return MultiGraph(seq.n, stubs.reshape(-1, 2))


def generate_sequential(seq, seed, order=None) -> MultiGraph:
    """Configuration model through sequential coalescing of degree-one vertices.

    1. ``sum(d)`` degree-one stub vertices are matched uniformly at random.
    2. For each vertex ``v`` with ``d_v > 1`` (in ``order``), ``d_v`` still
       unlabelled stub vertices are chosen uniformly and merged into ``v``.
    3. The leftover stub vertices receive the labels of the degree-one
       vertices in uniformly random order.

    The output has the same law as :func:`generate` for every ``order``.
    """
    seq = as_sequence(seq)
    _require_even(seq)
    rng = make_rng(seed)
    deg = seq.degrees
    big = np.flatnonzero(deg > 1)
    if order is None:
        order = big
    else:
        order = np.asarray(order, dtype=np.int64)
        if len(order) != len(big) or not np.array_equal(np.sort(order), big):
            raise ValueError("order must be a permutation of the vertices with degree > 1")

    ell = seq.total
    matching = rng.permutation(ell).reshape(-1, 2)
    label = np.full(ell, -1, dtype=np.int64)
    pool = np.arange(ell, dtype=np.int64)
    size = ell
    for v in order:
        for _ in range(int(deg[v])):
            j = int(rng.integers(size))
            label[pool[j]] = v
            size -= 1
            pool[j], pool[size] = pool[size], pool[j]
    ones = np.flatnonzero(deg == 1)
    label[pool[:size]] = rng.permutation(ones)
    return MultiGraph(seq.n, label[matching])


def percolate(g: MultiGraph, p: float, seed) -> MultiGraph:
    """Keep each edge (loops included) independently with probability p."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p must lie in [0, 1], got {p}")
    rng = make_rng(seed)
    keep = rng.random(g.m) < p
    return MultiGraph(g.n, g.edges[keep])


def condition_simple(seq, seed, max_attempts: int = 1000) -> tuple[MultiGraph, GenReport]:
    """Resample :func:`generate` until the result is simple.

    Raises :class:`RejectionError` once ``max_attempts`` draws were all non-simple.
    """
    seq = as_sequence(seq)
    _require_even(seq)
    rng = make_rng(seed)
    for attempt in range(1, max_attempts + 1):
        s = draw_seed(rng)
        g = generate(seq, s)
        if g.is_simple():
            return g, GenReport(seed=s, attempts=attempt, simple=True, parity_fix=seq.parity_fix)
    raise RejectionError(max_attempts)


def odd_double_factorial(j: int) -> int:
    """j (j-2) (j-4) ... 1 for odd j, with (-1)!! = 1.

    Pairing 2m half-edges has (2m-1)!! outcomes. Some texts write that count as
    "(2m)!!"; here the argument is always the odd top factor.
    """
    if j < -1 or j % 2 == 0:
        raise DomainError(f"odd double factorial needs odd j >= -1, got {j}")
    return math.prod(range(j, 0, -2))


def matching_probability(s: int, m: int) -> float:
    """Probability that a fixed set of ``s`` out of ``2m`` half-edges pairs only among itself.

    (s-1)!! (2m-s-1)!! / (2m-1)!!
    """
    if s % 2:
        raise DomainError("s must be even")
    if m < 1 or not 0 <= s <= 2 * m:
        raise DomainError(f"need m >= 1 and 0 <= s <= 2m, got s={s}, m={m}")
    num = odd_double_factorial(s - 1) * odd_double_factorial(2 * m - s - 1)
    return float(Fraction(num, odd_double_factorial(2 * m - 1)))
