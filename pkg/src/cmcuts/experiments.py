"""Seeded ensembles over configuration-model graphs.

Each replicate gets a seed derived from ``(master_seed, replicate, grid
index)``, samples a degree sequence, pairs half-edges, optionally percolates,
and records one long-format row per scalar metric. Output order is canonical
(grid point, replicate, metric), so worker count never changes the result.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, NamedTuple

import jsonschema
import numpy as np
from scipy import stats

from cmcuts import __version__, kernels
from cmcuts.cuts import bisection_local_search, distbip, ksection_greedy, maxcut_local_search
from cmcuts.generator import generate, percolate, regular_sequence, sample_degree_sequence
from cmcuts.graph import MultiGraph
from cmcuts.rng import derive_seed
from cmcuts.structure import (
    NoCoreError,
    components,
    count_cycles,
    count_pairs,
    giant_fraction,
    intermediate_mass,
    largest_core,
    measure_tc_r,
)
from cmcuts.theory import DegreeDistribution

CSV_COLUMNS = ("replicate", "seed", "grid_param", "grid_value", "metric", "value")
SCAN_PARAMS = ("percolation_p", "n")
DEFAULTS = {"k": 2, "r": 2, "L": 10, "K_cycles": 3, "exact_limit": 22, "restarts": 8}


class SpecError(ValueError):
    pass


# metric name -> (params it reads, function(g, params, seed) -> list of (name, value))
def _m_giant(g, P, seed):
    return [("giant_fraction", giant_fraction(g))]


def _m_distbip(g, P, seed):
    return [("distbip", distbip(g, P["exact_limit"], seed, P["restarts"]).value)]


def _m_cycles(g, P, seed):
    census = count_cycles(g, P["K_cycles"])
    return [(f"cycle_census.{k}", census[k]) for k in range(1, census.K + 1)]


def _m_pairs(g, P, seed):
    return [("pair_count", count_pairs(g))]


def _m_ksection(g, P, seed):
    return [("ksection_width", ksection_greedy(g, P["k"])[1].width)]


def _m_bisection(g, P, seed):
    return [("bisection_width", bisection_local_search(g, P["k"], seed, P["restarts"])[1].width)]


def _m_maxcut(g, P, seed):
    return [("maxcut_lower", maxcut_local_search(g, seed, P["restarts"])[1])]


def _m_tc_r(g, P, seed):
    try:
        return [("tc_r", measure_tc_r(g, P["r"]))]
    except NoCoreError:
        return [("tc_r", 0.0)]


def _m_core(g, P, seed):
    return [("core_fraction", len(largest_core(g)) / g.n)]


def _m_intermediate(g, P, seed):
    return [("intermediate_mass", intermediate_mass(components(g), P["L"]))]


METRICS = {
    "giant_fraction": ((), _m_giant),
    "distbip": (("exact_limit", "restarts"), _m_distbip),
    "cycle_census": (("K_cycles",), _m_cycles),
    "pair_count": ((), _m_pairs),
    "ksection_width": (("k",), _m_ksection),
    "bisection_width": (("k", "restarts"), _m_bisection),
    "maxcut_lower": (("restarts",), _m_maxcut),
    "tc_r": (("r",), _m_tc_r),
    "core_fraction": ((), _m_core),
    "intermediate_mass": (("L",), _m_intermediate),
}

_prob = {"type": "number", "minimum": 0, "maximum": 1}
SPEC_SCHEMA = {
    "type": "object",
    "properties": {
        "dist": {
            "type": "object",
            "patternProperties": {"^[0-9]+$": {"type": "number", "minimum": 0}},
            "additionalProperties": False,
            "minProperties": 1,
        },
        "regular_d": {"type": "integer", "minimum": 0},
        "n": {"type": "integer", "minimum": 1},
        "replicates": {"type": "integer", "minimum": 1},
        "master_seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
        "metrics": {"type": "array", "items": {"enum": sorted(METRICS)}, "minItems": 1, "uniqueItems": True},
        "params": {
            "type": "object",
            "properties": {
                "k": {"type": "integer", "minimum": 2},
                "r": {"type": "integer", "minimum": 0},
                "L": {"type": "integer", "minimum": 1},
                "K_cycles": {"type": "integer", "minimum": 1, "maximum": 12},
                "percolation_p": {"oneOf": [_prob, {"type": "array", "items": _prob, "minItems": 1}]},
                "exact_limit": {"type": "integer", "minimum": 1},
                "restarts": {"type": "integer", "minimum": 1},
            },
            "additionalProperties": False,
        },
    },
    "required": ["n", "replicates", "master_seed", "metrics"],
    "oneOf": [{"required": ["dist"]}, {"required": ["regular_d"]}],
    "additionalProperties": False,
}


@dataclass(frozen=True)
class ExperimentSpec:
    """Exactly one of ``dist`` and ``regular_d`` is set. A list-valued
    ``params["percolation_p"]`` describes a grid for :func:`run_spec`."""

    n: int
    replicates: int
    master_seed: int
    metrics: tuple[str, ...]
    dist: DegreeDistribution | None = None
    regular_d: int | None = None
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "metrics", tuple(self.metrics))
        object.__setattr__(self, "params", dict(self.params))
        try:
            jsonschema.validate(self.to_dict(), SPEC_SCHEMA)
        except jsonschema.ValidationError as exc:
            raise SpecError(_describe(exc)) from None
        used = {p for m in self.metrics for p in METRICS[m][0]} | {"percolation_p"}
        extra = sorted(set(self.params) - used)
        if extra:
            raise SpecError(f"params.{extra[0]}: not read by any of the metrics {list(self.metrics)}")

    def __hash__(self):
        return hash((self.n, self.replicates, self.master_seed, self.metrics, self.dist, self.regular_d))

    def distribution(self) -> DegreeDistribution:
        return self.dist if self.dist is not None else DegreeDistribution.regular(self.regular_d)

    def param(self, name: str):
        return self.params.get(name, DEFAULTS.get(name))

    def to_dict(self) -> dict:
        out: dict[str, Any] = {}
        if self.dist is not None:
            out["dist"] = {str(d): p for d, p in self.dist.pmf.items()}
        if self.regular_d is not None:
            out["regular_d"] = self.regular_d
        out.update(n=self.n, replicates=self.replicates, master_seed=self.master_seed,
                   metrics=list(self.metrics), params=dict(self.params))
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentSpec":
        try:
            jsonschema.validate(d, SPEC_SCHEMA)
        except jsonschema.ValidationError as exc:
            raise SpecError(_describe(exc)) from None
        dist = None
        if "dist" in d:
            try:
                dist = DegreeDistribution({int(k): v for k, v in d["dist"].items()})
            except ValueError as exc:
                raise SpecError(f"dist: {exc}") from None
        return cls(n=d["n"], replicates=d["replicates"], master_seed=d["master_seed"],
                   metrics=tuple(d["metrics"]), dist=dist, regular_d=d.get("regular_d"),
                   params=d.get("params", {}))


def _describe(exc: jsonschema.ValidationError) -> str:
    exc = jsonschema.exceptions.best_match([exc]) or exc
    where = ".".join(str(p) for p in exc.absolute_path) or "<root>"
    return f"{where}: {exc.message}"


def read_spec(path) -> ExperimentSpec:
    text = Path(path).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return ExperimentSpec.from_dict(data)


def write_spec(spec: ExperimentSpec, path) -> None:
    Path(path).write_text(json.dumps(spec.to_dict(), indent=2) + "\n")


class Row(NamedTuple):
    replicate: int
    seed: int
    grid_param: str | None
    grid_value: float | int | None
    metric: str
    value: float | int


@dataclass
class EnsembleResult:
    rows: list[Row]
    provenance: dict

    def values(self, metric: str, grid_value=None) -> np.ndarray:
        return np.array([r.value for r in self.rows
                         if r.metric == metric and (grid_value is None or r.grid_value == grid_value)], dtype=float)

    def grid_values(self) -> list:
        return list(dict.fromkeys(r.grid_value for r in self.rows))

    def summary(self) -> list[dict]:
        """Mean and standard error per (grid value, metric), in first-seen order."""
        groups: dict[tuple, list] = {}
        for r in self.rows:
            groups.setdefault((r.grid_param, r.grid_value, r.metric), []).append(r.value)
        out = []
        for (gp, gv, metric), vals in groups.items():
            a = np.asarray(vals, dtype=float)
            se = float(a.std(ddof=1) / math.sqrt(len(a))) if len(a) > 1 else float("nan")
            out.append({"grid_param": gp, "grid_value": gv, "metric": metric,
                        "count": len(a), "mean": float(a.mean()), "stderr": se})
        return out


def _replicate_rows(args) -> list[Row]:
    spec, replicate, stream, grid_param, grid_value = args
    seed = derive_seed(spec.master_seed, replicate, stream)
    s_seq, s_graph, s_perc, s_metric = (derive_seed(seed, i) for i in range(4))
    if spec.regular_d is not None:
        seq = regular_sequence(spec.regular_d, spec.n)
    else:
        seq = sample_degree_sequence(spec.dist, spec.n, s_seq)
    g: MultiGraph = generate(seq, s_graph)
    p = spec.params.get("percolation_p")
    if p is not None:
        g = percolate(g, float(p), s_perc)
    P = {k: spec.param(k) for k in DEFAULTS}
    rows = []
    for m in spec.metrics:
        for name, value in METRICS[m][1](g, P, s_metric):
            rows.append(Row(replicate, seed, grid_param, grid_value, name, value))
    return rows


def _run(tasks: list, workers: int) -> list[Row]:
    if workers is None or workers <= 1:
        chunks = map(_replicate_rows, tasks)
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            chunks = list(ex.map(_replicate_rows, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    return [row for chunk in chunks for row in chunk]


def _provenance(spec: ExperimentSpec, **extra) -> dict:
    return {"spec": spec.to_dict(), "version": __version__, "backend": kernels.BACKEND, **extra}


def run_ensemble(spec: ExperimentSpec, workers: int = 1, *, _stream: int = 0,
                 _grid: tuple[str | None, Any] = (None, None)) -> EnsembleResult:
    if isinstance(spec.params.get("percolation_p"), list):
        raise SpecError("params.percolation_p: a grid needs threshold_scan (or run_spec)")
    tasks = [(spec, i, _stream, *_grid) for i in range(spec.replicates)]
    return EnsembleResult(_run(tasks, workers), _provenance(spec))


def threshold_scan(base: ExperimentSpec, vary: str, grid, workers: int = 1) -> EnsembleResult:
    """One ensemble per grid value; grid index i uses seed stream i."""
    if vary not in SCAN_PARAMS:
        raise SpecError(f"vary must be one of {SCAN_PARAMS}, got {vary!r}")
    grid = list(grid)
    if not grid:
        raise SpecError("grid must be nonempty")
    tasks = []
    for gi, value in enumerate(grid):
        if vary == "n":
            if int(value) != value or value < 1:
                raise SpecError(f"grid value {value!r} is not a valid n")
            spec = replace(base, n=int(value))
            value = int(value)
        else:
            spec = replace(base, params={**base.params, "percolation_p": float(value)})
        tasks.extend((spec, i, gi, vary, value) for i in range(spec.replicates))
    return EnsembleResult(_run(tasks, workers), _provenance(base, vary=vary, grid=grid))


def run_spec(spec: ExperimentSpec, workers: int = 1) -> EnsembleResult:
    """``run_ensemble``, or a percolation scan when ``percolation_p`` is a list."""
    p = spec.params.get("percolation_p")
    if isinstance(p, list):
        base = replace(spec, params={k: v for k, v in spec.params.items() if k != "percolation_p"})
        return threshold_scan(base, "percolation_p", p, workers)
    return run_ensemble(spec, workers)


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def csv_text(result: EnsembleResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in result.rows:
        w.writerow([r.replicate, r.seed, r.grid_param or "", _fmt(r.grid_value), r.metric, _fmt(r.value)])
    return buf.getvalue()


def write_csv(result: EnsembleResult, path) -> None:
    Path(path).write_text(csv_text(result))


class GofReport(NamedTuple):
    tv_distance: float
    chi2: float
    dof: int
    p_value: float


def poisson_gof(samples, lam: float, min_expected: float = 5.0) -> GofReport:
    """Total variation and pooled chi-square of integer samples against Poisson(lam).

    Cells 0, 1, ... are merged left to right until each expects at least
    ``min_expected`` counts; the upper tail joins the last cell. At least two
    cells are always kept, so dof >= 1.
    """
    x = np.asarray(samples)
    if x.size == 0:
        raise ValueError("samples must be nonempty")
    if lam <= 0:
        raise ValueError("lambda must be positive")
    if (x < 0).any() or not np.array_equal(x, np.round(x)):
        raise ValueError("samples must be nonnegative integers")
    x = x.astype(np.int64)
    N = len(x)
    top = max(int(x.max()), 1)
    obs = np.bincount(x, minlength=top + 1).astype(float)
    pmf = stats.poisson.pmf(np.arange(top + 1), lam)
    tail = float(stats.poisson.sf(top, lam))
    tv = 0.5 * (float(np.abs(obs / N - pmf).sum()) + tail)

    exp = N * pmf
    exp[-1] += N * tail
    cells_o, cells_e = [], []
    acc_o = acc_e = 0.0
    for o, e in zip(obs, exp):
        acc_o += o
        acc_e += e
        if acc_e >= min_expected:
            cells_o.append(acc_o)
            cells_e.append(acc_e)
            acc_o = acc_e = 0.0
    if acc_e > 0 or acc_o > 0:
        if cells_e:
            cells_o[-1] += acc_o
            cells_e[-1] += acc_e
        else:
            cells_o.append(acc_o)
            cells_e.append(acc_e)
    if len(cells_e) < 2:
        cells_o = [obs[0], N - obs[0]]
        cells_e = [exp[0], N - exp[0]]
    o = np.array(cells_o)
    e = np.array(cells_e)
    chi2 = float(((o - e) ** 2 / e).sum())
    dof = len(e) - 1
    return GofReport(min(max(tv, 0.0), 1.0), chi2, dof, float(stats.chi2.sf(chi2, dof)))
