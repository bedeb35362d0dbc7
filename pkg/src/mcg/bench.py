"""Benchmark harness: random placements, per-sample records, CSV output.

Sampling is deterministic per seed and independent of the worker count;
each sample draws from its own seed-and-index keyed RNG stream.
"""
from __future__ import annotations

import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import costmodel
from .core import CostVector, DepthVector, McGateSpec, McKind, cost_of, depth_of
from .synth import SynthConfig, synthesize
from .verify import check_lnn, compare, reference_unitary, simulate, verify_cap

CSV_COLUMNS = [
    "row", "k", "n", "sample", "placement",
    "cx", "t", "h", "rz",
    "pred_cx", "pred_t", "pred_h", "pred_rz",
    "upper_cx", "upper_t", "upper_h", "upper_rz",
    "depth_cx", "depth_t", "depth_h", "depth_rz",
    "verify",
]

SUMMARY_COLUMNS = [
    "row", "k", "n", "samples", "mean_cx",
    "upper_cx", "longrange_kn_cx", "ata_cx",
]


@dataclass(frozen=True)
class BenchConfig:
    mode: str                 # "fixed_k" | "fixed_n"
    fixed: int                # the fixed k or n
    values: tuple[int, ...]   # swept n (fixed_k) or k (fixed_n) values
    samples: int = 100
    seed: int = 0
    opt: str = "none"
    verify_limit: Optional[int] = None   # verify samples with k <= this
    workers: int = 1


@dataclass
class BenchRecord:
    k: int
    n: int
    sample: int
    placement: str
    achieved: CostVector
    predicted: Optional[CostVector]
    upper: CostVector
    depth: DepthVector
    verify: str               # "pass" | "fail" | "skipped"


def sample_placement(k: int, n: int, rng) -> tuple[frozenset[int], int, int]:
    """Random (controls, target, ancilla) under the window convention.

    n+2 distinct indices with the window ends forced into the set, the other
    members uniform.  Target and ancilla are drawn uniformly with the ancilla
    kept off the window ends, so the gate itself spans the full window and
    the instance exercises the k under test rather than a shrunken one.
    """
    if n + 2 > k:
        raise ValueError("need k >= n+2")
    members = {0, k - 1}
    interior = rng.permutation(np.arange(1, k - 1))
    for q in interior:
        if len(members) == n + 2:
            break
        members.add(int(q))
    members = sorted(members)
    inner = members[1:-1]
    ancilla = inner[int(rng.integers(len(inner)))]
    rest = [q for q in members if q != ancilla]
    target = rest[int(rng.integers(len(rest)))]
    controls = frozenset(q for q in members if q not in (target, ancilla))
    return controls, target, ancilla


def _run_sample(args) -> BenchRecord:
    k, n, idx, seed, opt, verify_limit = args
    rng = np.random.default_rng([seed, k, n, idx])
    controls, target, ancilla = sample_placement(k, n, rng)
    spec = McGateSpec(McKind.MCX, k, controls, target, ancilla)
    res = synthesize(spec, SynthConfig(opt=opt))
    achieved = cost_of(res.circuit)
    depth = depth_of(res.circuit)
    placement = "c" + "-".join(map(str, sorted(controls))) + f"_t{target}_a{ancilla}"
    upper = costmodel.upper_mcx(k, n)
    verify = "skipped"
    cap = min(verify_cap(), verify_limit) if verify_limit is not None else 0
    if k <= cap:
        lnn, _ = check_lnn(res.circuit)
        rep = compare(reference_unitary(spec), simulate(res.circuit), "global_phase")
        verify = "pass" if (lnn and rep.passed) else "fail"
    return BenchRecord(k, n, idx, placement, achieved, res.predicted,
                       upper, depth, verify)


def run_bench(cfg: BenchConfig) -> list[BenchRecord]:
    tasks = []
    for v in cfg.values:
        k, n = (cfg.fixed, v) if cfg.mode == "fixed_k" else (v, cfg.fixed)
        for idx in range(cfg.samples):
            tasks.append((k, n, idx, cfg.seed, cfg.opt, cfg.verify_limit))
    if cfg.workers > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            records = list(pool.map(_run_sample, tasks, chunksize=16))
    else:
        records = [_run_sample(t) for t in tasks]
    records.sort(key=lambda r: (r.k, r.n, r.sample))
    return records


def _cost_fields(c: Optional[CostVector]) -> list[str]:
    if c is None:
        return ["", "", "", ""]
    return [str(x) for x in c.tuple()]


def to_csv(records: list[BenchRecord]) -> str:
    out = io.StringIO()
    out.write(",".join(CSV_COLUMNS) + "\n")
    for r in records:
        row = (
            ["sample", str(r.k), str(r.n), str(r.sample), r.placement]
            + _cost_fields(r.achieved)
            + _cost_fields(r.predicted)
            + _cost_fields(r.upper)
            + [str(x) for x in r.depth.tuple()]
            + [r.verify]
        )
        out.write(",".join(row) + "\n")
    out.write(",".join(SUMMARY_COLUMNS) + "\n")
    groups: dict[tuple[int, int], list[BenchRecord]] = {}
    for r in records:
        groups.setdefault((r.k, r.n), []).append(r)
    for (k, n), rs in sorted(groups.items()):
        mean_cx = sum(r.achieved.cx for r in rs) / len(rs)
        out.write(",".join([
            "summary", str(k), str(n), str(len(rs)), f"{mean_cx:.6f}",
            str(costmodel.upper_mcx(k, n).cx),
            str(costmodel.longrange_cnot_cx(k + n)),
            str(costmodel.ata_mcx_cx(n)),
        ]) + "\n")
    return out.getvalue()


def summaries(records: list[BenchRecord]) -> dict[tuple[int, int], float]:
    groups: dict[tuple[int, int], list[int]] = {}
    for r in records:
        groups.setdefault((r.k, r.n), []).append(r.achieved.cx)
    return {kn: sum(v) / len(v) for kn, v in groups.items()}
