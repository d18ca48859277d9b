"""Run configurations and the sweeps behind each CLI subcommand."""

from __future__ import annotations

import math
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from ..coloring import COLOR_NAMES, ColorAnswer, ColoringContext, ColoringParams
from ..entropy import Entropy
from ..errors import ParameterError
from ..graph import Graph, load_graph, verify_mis
from ..hypergraph import Hypergraph, load_hypergraph, verify_coloring
from ..mis import MisAnswer, MisContext, MisStatus
from ..query_tree import (
    QueryTreeParams,
    RootMode,
    expected_size,
    fit_decay_rate,
    gw_model,
    sample_query_trees,
    simulate_gw_totals,
)

COLOR_PARAM_KEYS = {"k1", "k2", "k3", "c_color", "c_order", "c2", "c3", "trials2", "safety_cap", "phase3_cap"}
MIS_PARAM_KEYS = {"c1_mult", "k_bits", "safety_cap", "rounds"}


@dataclass
class RunConfig:
    instance: Hypergraph | Graph
    seed: str = "00"
    params: dict[str, Any] = field(default_factory=dict)
    queries: Sequence[int] | None = None  # None means every vertex
    permutations: int = 0
    parallel: int = 1
    timing: bool = False

    @property
    def is_coloring(self) -> bool:
        return isinstance(self.instance, Hypergraph)

    @property
    def size(self) -> int:
        return self.instance.m if self.is_coloring else self.instance.n

    def query_list(self) -> list[int]:
        return list(range(self.size)) if self.queries is None else list(self.queries)


def load_instance(path: str | Path) -> Hypergraph | Graph:
    text = Path(path).read_text(encoding="utf-8")
    head = text.lstrip()[:1]
    if head == "H":
        return load_hypergraph(text)
    if head == "G":
        return load_graph(text)
    raise ParameterError(f"{path}: unknown instance header (expected 'H' or 'G')")


def build_context(config: RunConfig) -> ColoringContext | MisContext:
    master = Entropy(config.seed)
    if config.is_coloring:
        unknown = set(config.params) - COLOR_PARAM_KEYS
        if unknown:
            raise ParameterError(f"unknown coloring parameters: {sorted(unknown)}")
        h = config.instance
        base = ColoringParams.default_for(h.k, h.d) if h.k else None
        if base is None:
            raise ParameterError("empty hypergraph")
        return ColoringContext(h, base.with_overrides(**config.params), master.child("color"))
    unknown = set(config.params) - MIS_PARAM_KEYS
    if unknown:
        raise ParameterError(f"unknown MIS parameters: {sorted(unknown)}")
    return MisContext(config.instance, master.child("mis"), **config.params)


def _query(ctx, v: int):
    return ctx.color_query(v) if isinstance(ctx, ColoringContext) else ctx.mis_query(v)


def sweep(ctx, queries: Sequence[int], parallel: int = 1) -> dict[int, ColorAnswer | MisAnswer]:
    """Answer every query; with ``parallel > 1`` the queries share one context across a thread pool."""
    if parallel <= 1:
        return {v: _query(ctx, v) for v in queries}
    with ThreadPoolExecutor(max_workers=parallel) as pool:
        answers = list(pool.map(lambda v: _query(ctx, v), queries, chunksize=max(1, len(queries) // (4 * parallel))))
    return dict(zip(queries, answers))


def answer_value(a: ColorAnswer | MisAnswer):
    return a.color if isinstance(a, ColorAnswer) else a.in_mis


def answers_csv(answers: dict[int, ColorAnswer | MisAnswer]) -> str:
    rows = []
    first = next(iter(answers.values()), None)
    if first is None or isinstance(first, ColorAnswer):
        rows.append("vertex,color,phase")
        for v in sorted(answers):
            a = answers[v]
            rows.append(f"{v},{COLOR_NAMES[a.color] if a.ok else 'FAIL'},{a.phase}")
    else:
        rows.append("vertex,in_mis,phase")
        for v in sorted(answers):
            a = answers[v]
            rows.append(f"{v},{'FAIL' if not a.ok else int(a.in_mis)},{a.phase}")
    return "\n".join(rows) + "\n"


def parse_answers_csv(text: str) -> tuple[str, dict[int, Any]]:
    """Inverse of :func:`answers_csv`: ('color' | 'mis', vertex -> value or None on FAIL)."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParameterError("empty answers file")
    header = lines[0]
    kind = {"vertex,color,phase": "color", "vertex,in_mis,phase": "mis"}.get(header)
    if kind is None:
        raise ParameterError(f"unknown answers header {header!r}")
    names = {v: k for k, v in COLOR_NAMES.items()}
    out: dict[int, Any] = {}
    for ln in lines[1:]:
        v, value, _phase = ln.split(",")
        if value == "FAIL":
            out[int(v)] = None
        elif kind == "color":
            out[int(v)] = names[value]
        else:
            out[int(v)] = bool(int(value))
    return kind, out


def _percentiles(values, qs=(50, 99, 100)) -> dict[str, float]:
    if not len(values):
        return {}
    arr = np.asarray(values, dtype=float)
    return {f"p{q}": float(np.percentile(arr, q)) for q in qs}


def _log2_histogram(values) -> dict[str, int]:
    """Counts per power-of-two bucket, keyed by the bucket's lower edge."""
    hist = Counter(1 << (int(v).bit_length() - 1) if v > 0 else 0 for v in values)
    return {str(b): hist[b] for b in sorted(hist)}


def _time_block(t0: float, per_query: list[float] | None) -> dict[str, Any]:
    out: dict[str, Any] = {"total_s": round(time.perf_counter() - t0, 4)}
    if per_query:
        out["per_query_ms"] = {k: round(v * 1e3, 4) for k, v in _percentiles(per_query).items()}
    return out


def summarize(config: RunConfig, ctx, answers: dict[int, ColorAnswer | MisAnswer]) -> dict[str, Any]:
    """Deterministic report body (no timing) for a finished sweep."""
    vals = [answers[v] for v in sorted(answers)]
    report: dict[str, Any] = {
        "kind": "color" if config.is_coloring else "mis",
        "seed": config.seed,
        "queries": len(vals),
        "phase_counts": {str(p): c for p, c in sorted(Counter(a.phase for a in vals if a.ok).items())},
        "failures": {k: c for k, c in sorted(Counter(a.fail for a in vals if not a.ok).items())},
    }
    if config.is_coloring:
        report["params"] = dict(sorted(ctx.params.__dict__.items()))
        report["trials2"] = ctx.trials2
        report["tree_size"] = _percentiles([a.tree_size for a in vals])
        report["examined"] = _percentiles([a.examined for a in vals])
        report["tree_size_hist"] = _log2_histogram([a.tree_size for a in vals])
        report["collisions"] = ctx.collisions
        # rank ties seen inside examined sets are charged to the failure budget alongside Fail answers
        report["budget_events"] = sum(not a.ok for a in vals) + ctx.collisions
        report["dominance_violations"] = sum(a.examined > ctx.D * a.tree_size for a in vals if a.ok)
    else:
        report["rounds"] = ctx.rounds
        report["d_tilde"] = ctx.d_tilde
        report["k_bits"] = ctx.k_bits
        survivors = [a.vertex for a in vals if a.phase == 2]
        report["surviving_vertices"] = len(survivors)
        seen, largest = set(), 0
        for v in survivors:
            if v not in seen and answers[v].ok:
                comp = ctx.surviving_component(v)
                seen.update(comp)
                largest = max(largest, len(comp))
        report["max_surviving_component"] = largest
    report["answers"] = {str(v): answer_value(answers[v]) for v in sorted(answers)}
    return report


def run_queries(config: RunConfig) -> tuple[dict[str, Any], dict[int, Any]]:
    t0 = time.perf_counter()
    ctx = build_context(config)
    answers = sweep(ctx, config.query_list(), config.parallel)
    report = summarize(config, ctx, answers)
    if config.timing:
        report["timing"] = _time_block(t0, None)
    return report, answers


def run_full_verify(config: RunConfig) -> dict[str, Any]:
    """Sweep every vertex and check the combined answer against the problem definition."""
    t0 = time.perf_counter()
    ctx = build_context(config)
    queries = config.query_list()
    per_query = []
    answers = {}
    for v in queries:
        t = time.perf_counter()
        answers[v] = _query(ctx, v)
        per_query.append(time.perf_counter() - t)
    report = summarize(config, ctx, answers)
    report.pop("answers")
    report.update(verify_answers(config.instance, answers))
    if config.timing:
        report["timing"] = _time_block(t0, per_query)
    return report


def verify_answers(instance, answers: dict[int, Any]) -> dict[str, Any]:
    """Verdict and witness for answers that cover (or fail to cover) every vertex."""
    if not answers:
        return {"verdict": True, "witness": None, "complete": False}
    values = {v: (answer_value(a) if isinstance(a, (ColorAnswer, MisAnswer)) else a) for v, a in answers.items()}
    size = instance.m if isinstance(instance, Hypergraph) else instance.n
    missing = [v for v in range(size) if values.get(v) is None]
    if missing:
        return {"verdict": False, "witness": {"vertex": missing[0], "reason": "unanswered or failed"}, "complete": False}
    full = [values[v] for v in range(size)]
    if isinstance(instance, Hypergraph):
        ok, edge = verify_coloring(instance, full)
        return {"verdict": ok, "witness": None if ok else {"edge": edge, "reason": "monochromatic"}, "complete": True}
    ok, vertex = verify_mis(instance, full)
    return {"verdict": ok, "witness": None if ok else {"vertex": vertex, "reason": "not an MIS"}, "complete": True}


def run_consistency_check(config: RunConfig) -> dict[str, Any]:
    """Same answers under ascending order, P random orders and a parallel batch.

    Every pass starts from empty caches so no pass can reuse another's work.
    """
    t0 = time.perf_counter()
    base_ctx = build_context(config)
    queries = config.query_list()
    baseline = sweep(base_ctx.fresh(), queries)
    rng = Entropy(config.seed).child("permutations").rng()
    mismatches = []
    passes = []
    for p in range(config.permutations):
        order = [queries[i] for i in rng.permutation(len(queries))]
        got = sweep(base_ctx.fresh(), order)
        bad = [v for v in queries if answer_value(got[v]) != answer_value(baseline[v])]
        passes.append({"pass": f"permutation-{p}", "mismatches": len(bad)})
        mismatches += [{"vertex": v, "pass": f"permutation-{p}"} for v in bad[:5]]
    if config.parallel > 1:
        got = sweep(base_ctx.fresh(), queries, config.parallel)
        bad = [v for v in queries if answer_value(got[v]) != answer_value(baseline[v])]
        passes.append({"pass": f"parallel-{config.parallel}", "mismatches": len(bad)})
        mismatches += [{"vertex": v, "pass": f"parallel-{config.parallel}"} for v in bad[:5]]
    report = {
        "kind": "color" if config.is_coloring else "mis",
        "seed": config.seed,
        "queries": len(queries),
        "passes": passes,
        "consistent": not mismatches,
        "witness": mismatches[0] if mismatches else None,
    }
    if config.timing:
        report["timing"] = _time_block(t0, None)
    return report


def run_tree_stats(D: int, samples: int, seed: str = "00", N: int = 1000, modes=("uniform", "worst"), safety_cap: int = 10**6) -> list[dict[str, Any]]:
    """One row per root mode: mean, q99, the 1-1/N^2 quantile, truncations, and analytic comparisons."""
    if samples < 1:
        raise ParameterError("empty sample")
    rows = []
    alpha = gw_model(D).alpha
    for mode in modes:
        rng = Entropy(seed).child(f"tree-stats/{D}/{mode}").rng()
        batch = sample_query_trees(QueryTreeParams(D, RootMode(mode), safety_cap), rng, samples)
        kept = batch.kept
        tail_q = 1 - 1 / N**2
        rows.append(
            {
                "D": D,
                "mode": mode,
                "samples": samples,
                "mean": float(kept.mean()) if kept.size else math.nan,
                "q99": float(np.quantile(kept, 0.99)) if kept.size else math.nan,
                "q_tail": float(np.quantile(kept, tail_q)) if kept.size else math.nan,
                "truncated_count": int(batch.truncated.sum()),
                "expected_mean": expected_size(D),
                "alpha": alpha,
                "log_alpha": math.log(alpha),
            }
        )
    return rows


TREE_CSV_COLUMNS = ["D", "mode", "samples", "mean", "q99", "q_tail", "truncated_count", "expected_mean", "alpha", "log_alpha"]


def tree_stats_csv(rows: list[dict[str, Any]]) -> str:
    lines = [",".join(TREE_CSV_COLUMNS)]
    for r in rows:
        lines.append(",".join(f"{r[c]:.6g}" if isinstance(r[c], float) else str(r[c]) for c in TREE_CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def run_gw_stats(D: int, samples: int, seed: str = "00", n_lo: int = 20, n_hi: int = 60) -> dict[str, Any]:
    if samples < 1:
        raise ParameterError("empty sample")
    model = gw_model(D)
    rng = Entropy(seed).child(f"gw/{D}").rng()
    totals, truncated = simulate_gw_totals(model, rng, samples)
    fit = fit_decay_rate(totals[~truncated], n_lo, n_hi)
    target = math.log(model.alpha)
    return {
        "D": D,
        "samples": samples,
        "truncated": int(truncated.sum()),
        "mean_total": float(totals[~truncated].mean()),
        "expected_mean_total": D + 1.0,
        "a": model.a,
        "alpha": model.alpha,
        "log_alpha": target,
        "fitted_rate": fit.rate,
        "relative_error": abs(fit.rate - target) / target,
        "raw_log_slope": fit.raw_slope,
        "window": [n_lo, n_hi],
    }


def mis_oracle_check(g: Graph, seed: str, **params) -> dict[str, Any]:
    """Compare every phase-1 status with the global synchronous simulation."""
    from .oracles import global_luby

    ctx = MisContext(g, Entropy(seed).child("mis"), **params)
    ref = global_luby(ctx)
    bad = [v for v in range(g.n) if int(ctx.phase1(v)) != int(ref[v])]
    return {"n": g.n, "mismatches": len(bad), "witness": bad[0] if bad else None,
            "survivors": int(sum(ref == int(MisStatus.BOTTOM)))}
