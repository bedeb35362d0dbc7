"""Rewrite passes: constant reductions, useful-dirty-ancilla cancellations,
and the depth-reduction planner for V-chain Toffoli orientations.

Pass order under opt=all: pre-synthesis neighbor swaps, synthesis (with the
CCiZ center enabled), useful-ancilla cancellations, then the depth plan.
Every pass preserves the verifier's equivalence class; cost passes never
increase any cost component.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Optional

from . import costmodel
from .core import (
    Circuit,
    CostVector,
    DepthVector,
    McGateSpec,
    McKind,
    SpecError,
    cost_of,
    depth_of,
)
from .synth import (
    ChainMeta,
    ChainOptions,
    SynthConfig,
    SynthResult,
    _dispatch,
    partition_around,
    select_ancilla,
)


# ---------------------------------------------------------------------------
# Appendix B: depth plan
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChainPlan:
    """Toffoli orientations and SWAP substitutions for one first chain."""

    runs: tuple[int, ...]                 # n_i in time order; the first is run d
    alphas: tuple[int, ...]               # leading-Toffoli orientation per run
    orientations: dict                    # chain position -> "up" | "down"
    swap_steps: frozenset                 # CNOT positions emitted as fused SWAPs
    predicted: tuple[int, int, int]       # total (cx, t, h) depth reduction

    @property
    def d(self) -> int:
        return len(self.runs)

    @property
    def n_prime(self) -> int:
        return sum(self.runs)


def _reduction_terms(n_i: int, beta: int, is_d: bool) -> tuple[Fraction, ...]:
    """Eq. of the per-run depth reduction D_i, as exact rationals."""
    a = (Fraction(1, 2) * n_i, Fraction(2) * n_i, Fraction(1, 2) * n_i)
    if is_d:
        b = (Fraction(-1, 2) * beta, Fraction(0), Fraction(1, 2) * beta)
        c = (Fraction(0), Fraction(-1), Fraction(-1))
    else:
        b = (Fraction(1, 2) * beta, Fraction(1) * beta, Fraction(-1, 2) * beta)
        c = (Fraction(0), Fraction(0), Fraction(1))
    return tuple(a[j] + b[j] + c[j] for j in range(3))


def plan_depth_reduction(meta: ChainMeta) -> ChainPlan:
    """Choose orientations and SWAP substitutions maximizing depth reduction.

    The first run in time is run d (alpha_d = beta_d); every other run leads
    upwards; within a run orientations alternate; each CNOT directly after an
    upwards Toffoli becomes a (fused) SWAP.
    """
    runs = meta.runs
    if not runs:
        return ChainPlan((), (), {}, frozenset(), (0, 0, 0))

    alphas = []
    orientations: dict[int, str] = {}
    swap_steps: set[int] = set()
    run_idx = -1
    pos_in_run = 0
    lead_alpha = 1
    prev_orient: Optional[str] = None
    for i, (p, kind) in enumerate(meta.steps):
        if kind == "toffoli":
            starts_run = prev_orient is None
            if starts_run:
                run_idx += 1
                n_i = runs[run_idx]
                lead_alpha = (n_i % 2) if run_idx == 0 else 1
                alphas.append(lead_alpha)
                orient = "up" if lead_alpha else "down"
            else:
                orient = "down" if prev_orient == "up" else "up"
            orientations[p] = orient
            prev_orient = orient
            if orient == "up" and i + 1 < len(meta.steps) and meta.steps[i + 1][1] == "cnot":
                swap_steps.add(meta.steps[i + 1][0])
        else:
            prev_orient = None

    total = [Fraction(0)] * 3
    for idx, n_i in enumerate(runs):
        beta = n_i % 2
        terms = _reduction_terms(n_i, beta, is_d=(idx == 0))
        total = [total[j] + terms[j] for j in range(3)]
    predicted = tuple(int(2 * total[j]) for j in range(3))
    return ChainPlan(runs, tuple(alphas), orientations,
                     frozenset(swap_steps), predicted)


def apply_depth_plan(result: SynthResult, plan: ChainPlan,
                     cfg: SynthConfig = SynthConfig()) -> SynthResult:
    """Re-synthesize with the plan's orientations and SWAP substitutions.

    The output is unitary-equivalent to the input in the same residue class,
    with identical cost and the plan's per-type depth reduction.
    """
    meta = result.meta.get("chain")
    if meta is None:
        raise SpecError("no chain metadata; depth plans apply to V-chain outputs")
    opts = ChainOptions(orientations=plan.orientations,
                        swap_steps=plan.swap_steps, junction_rewrite=True)
    out = _dispatch(result.spec, cfg, z_options=opts, x_options=opts)
    out.meta["plan"] = plan
    return out


def depth_reduction_of(result: SynthResult) -> tuple[int, int, int]:
    """Per-type (cx, t, h) depth reduction relative to fully sequential cost."""
    c = cost_of(result.circuit)
    d = depth_of(result.circuit)
    return (c.cx - d.cx, c.t - d.t, c.h - d.h)


# ---------------------------------------------------------------------------
# Appendix C: useful dirty quasi-ancillas
# ---------------------------------------------------------------------------

def useful_ancillas(meta: ChainMeta) -> frozenset[int]:
    """Toffoli chain positions whose m1 box commutes out of the structure.

    A useful dirty quasi-ancilla is a non-control window qubit directly below
    a control, excluding the center's controls and the control nearest the
    target; returns the corresponding Toffoli positions p (the free qubit is
    the Toffoli's target at window position p-1).
    """
    m = len(meta.window)
    out = set()
    for p, kind in meta.steps:
        if kind != "toffoli":
            continue
        u = p - 1                       # the Toffoli's target slot
        if u > m - 3:                   # quasi-ancilla slot: excluded
            continue
        if u in meta.control_pos:       # not a free qubit
            continue
        if p - 2 < meta.j0 - 2:         # consumed by the center
            continue
        out.add(p)
    return frozenset(out)


def _wrong_side_swaps(spec: McGateSpec, cfg: SynthConfig):
    """Adjacent (free, control) swaps that create new useful quasi-ancillas.

    Appendix-C move: a dirty ancilla neighboring a control on the wrong side
    is swapped into place for 4 CNOTs (one per side commutes through the
    gate), which the (4,8,4,0) cancellation then repays.
    """
    from .synth import _useful_ancilla_count

    k = spec.k
    try:
        pivot = (spec.target if spec.kind is McKind.MCSU2
                 else (spec.ancilla if spec.ancilla is not None
                       else select_ancilla(spec, cfg)))
    except SpecError:
        return spec, []
    swaps = []
    current = spec
    improved = True
    while improved:
        improved = False
        members = set(current.controls) | {current.target}
        if current.ancilla is not None:
            members.add(current.ancilla)
        cset = frozenset(members if current.kind is not McKind.MCSU2
                         else set(current.controls) | {current.target})
        before = _useful_ancilla_count(k, cset, pivot)
        for c in sorted(current.controls):
            for f in (c - 1, c + 1):
                if not (1 <= f <= k - 2 and 1 <= c <= k - 2):
                    continue
                if f in members or f == pivot:
                    continue
                cand = _swap_member(current, c, f)
                cand_set = frozenset(
                    set(cand.controls) | {cand.target}
                    | ({cand.ancilla} if cand.ancilla is not None
                       and cand.kind is not McKind.MCSU2 else set())
                )
                after = _useful_ancilla_count(k, cand_set, pivot)
                if after > before:
                    swaps.append((c, f))
                    current = cand
                    improved = True
                    break
            if improved:
                break
    return current, swaps


def apply_ancilla_reductions(spec: McGateSpec,
                             cfg: SynthConfig = SynthConfig()) -> SynthResult:
    """Re-synthesize dropping the commuting m1 boxes, (4,8,4,0) per ancilla.

    Valid only for the paired constructions (MCX / MCZ / MCPi / MCSU2) where
    the four copies of each box cancel or commute off the ideal gate.  When a
    wrong-side neighbor swap buys a new useful ancilla it is applied first.
    """
    if spec.kind not in (McKind.MCX, McKind.MCZ, McKind.MCPI, McKind.MCSU2):
        raise SpecError("ancilla reductions apply to the paired constructions")
    current, swaps = (spec, [])
    if cfg.opt in ("cost", "all"):
        current, swaps = _wrong_side_swaps(spec, cfg)
    base = _dispatch(current, cfg)
    drops_z = _chain_drops(base.meta.get("z_chain"))
    drops_x = _chain_drops(base.meta.get("x_chain"))
    if not drops_z and not drops_x:
        out = base
    else:
        out = _dispatch(
            current, cfg,
            z_options=ChainOptions(drop_m1=drops_z),
            x_options=ChainOptions(drop_m1=drops_x),
        )
        out.meta["dropped_m1"] = (drops_z, drops_x)
        out.meta["reduction"] = CostVector(4, 8, 4, 0) * (len(drops_z) + len(drops_x))
    if swaps:
        k = spec.k
        pre = Circuit(k)
        post = Circuit(k)
        for c, f in swaps:
            pre.cx(f, c).cx(c, f)
            post = Circuit(k).cx(c, f).cx(f, c) + post
        circ = pre + out.circuit + post
        if cfg.wrong_side_swap_extra:
            from .synth import cancel_inverse_pairs

            circ = cancel_inverse_pairs(circ, single_qubit_only=False)
        out = SynthResult(circ, spec, out.partition, None, out.upper,
                          dict(out.meta, wrong_side_swaps=swaps))
    return out


def _chain_drops(meta: Optional[ChainMeta]) -> frozenset[int]:
    if meta is None:
        return frozenset()
    return useful_ancillas(meta)


# ---------------------------------------------------------------------------
# Appendix A: constant reductions (pre-synthesis swaps, CCiZ center)
# ---------------------------------------------------------------------------

def _neighbor_swap_candidates(spec: McGateSpec):
    """Window-end members whose inward swap shrinks the window by one.

    Yields (end, neighbor) pairs where the end qubit belongs to the gate and
    the qubit beside it is free, so swapping them lets the synthesis run on a
    window smaller by one (4 fewer CNOTs against 4 SWAP CNOTs).
    """
    qs = set(spec.controls) | {spec.target}
    if spec.ancilla is not None:
        qs.add(spec.ancilla)
    k = spec.k
    if 0 in qs and 1 not in qs and k > 2:
        yield 0, 1
    if k - 1 in qs and k - 2 not in qs and k > 2:
        yield k - 1, k - 2


def _swap_member(spec: McGateSpec, a: int, b: int) -> McGateSpec:
    def move(q: int) -> int:
        return b if q == a else (a if q == b else q)

    return McGateSpec(
        spec.kind,
        spec.k,
        frozenset(move(c) for c in spec.controls),
        move(spec.target),
        None if spec.ancilla is None else move(spec.ancilla),
        spec.axis,
        spec.angle,
    )


def _shrink_window(spec: McGateSpec) -> Optional[McGateSpec]:
    """Tighten the register to the smallest window still holding everything."""
    qs = set(spec.controls) | {spec.target}
    if spec.ancilla is not None:
        qs.add(spec.ancilla)
    lo, hi = min(qs), max(qs)
    if lo == 0 and hi == spec.k - 1:
        return None
    return McGateSpec(
        spec.kind,
        hi - lo + 1,
        frozenset(c - lo for c in spec.controls),
        spec.target - lo,
        None if spec.ancilla is None else spec.ancilla - lo,
        spec.axis,
        spec.angle,
    )


def _model_cost(spec: McGateSpec, cfg: SynthConfig) -> Optional[CostVector]:
    """Closed-form cost of the partition the synthesizer would select."""
    try:
        if spec.kind is McKind.MCSU2:
            part = partition_around(spec.k, frozenset(spec.controls), spec.target)
            if part.n1 == 0 and part.n2 > 0:
                return _model_cost(spec.reversed(), cfg)
            return costmodel.predict_mcsu2(
                spec.k, spec.n, part.k1, part.k2, part.n1, part.n2,
                part.n_plus, part.n_minus)
        anc = spec.ancilla
        if anc is None:
            anc = select_ancilla(spec, cfg)
        cprime = frozenset(spec.controls | {spec.target})
        part = partition_around(spec.k, cprime, anc)
        if part.n1 == 0 and part.n2 > 0:
            return _model_cost(spec.reversed(), cfg)
        extra = CostVector()
        if part.n2 == 0 and part.n_plus == 0 and spec.n >= 2 and anc == spec.k - 1:
            part = partition_around(
                spec.k, frozenset((cprime - {anc - 1}) | {anc}), anc - 1)
            extra = CostVector(4, 0, 0, 0)
        return costmodel.predict_mcx(
            spec.k, spec.n, part.k1, part.k2, part.n1, part.n2,
            part.n_plus, part.n_minus) + extra
    except (ValueError, SpecError):
        return None


def apply_constant_reductions(spec: McGateSpec,
                              cfg: SynthConfig = SynthConfig()) -> SynthResult:
    """Pre-synthesis neighbor swaps plus the CCiZ center substitution.

    Swaps are applied only while the closed-form model says their CNOT price
    is covered by the shrunken window; the cost never increases.  A swapped
    control (or ancilla, or an MCZ member) costs 4 CNOTs because one CNOT per
    side commutes through the gate; a swapped target needs the full 6.
    """
    paired = spec.kind in (McKind.MCX, McKind.MCZ, McKind.MCPI, McKind.MCSU2)
    pre = Circuit(spec.k)
    post = Circuit(spec.k)
    current = spec          # tight sub-window spec
    offset = 0              # embedding offset of `current` into the register
    if paired:
        improved = True
        while improved and current.n >= 2:
            improved = False
            base_cost = _model_cost(current, cfg)
            for end, inner in _neighbor_swap_candidates(current):
                cheap = (
                    end != current.target
                    or current.kind is McKind.MCZ
                )
                price = CostVector(4 if cheap else 6, 0, 0, 0)
                swapped = _swap_member(current, end, inner)
                shrunk = _shrink_window(swapped)
                if shrunk is None:
                    continue
                new_cost = _model_cost(shrunk, cfg)
                if base_cost is None or new_cost is None:
                    continue
                if not (new_cost + price <= base_cost):
                    continue
                e, i = end + offset, inner + offset
                if cheap:
                    pre.cx(i, e).cx(e, i)
                    post = Circuit(spec.k).cx(e, i).cx(i, e) + post
                else:
                    pre.cx(i, e).cx(e, i).cx(i, e)
                    post = Circuit(spec.k).cx(i, e).cx(e, i).cx(i, e) + post
                current = shrunk
                if end == 0:
                    offset += 1
                improved = True
                break

    ccfg = replace(cfg, cciz_center=True)
    if cfg.opt in ("cost", "all") and paired:
        inner_res = apply_ancilla_reductions(current, ccfg)
    else:
        inner_res = _dispatch(current, ccfg)
    body = inner_res.circuit.reindexed(
        {i: i + offset for i in range(current.k)}, k=spec.k)
    circ = pre + body + post
    meta = dict(inner_res.meta)
    if len(pre):
        meta["neighbor_swaps"] = True
    predicted = inner_res.predicted
    if predicted is not None and len(pre):
        predicted = predicted + CostVector(len(pre) + len(post), 0, 0, 0)
    return SynthResult(circ, spec, inner_res.partition, predicted,
                       inner_res.upper, meta)


def synthesize_with_cost_passes(spec: McGateSpec, cfg: SynthConfig) -> SynthResult:
    """The opt=cost / opt=all pipeline entry used by synthesize()."""
    res = apply_constant_reductions(spec, cfg)
    base = _dispatch(spec, replace(cfg, opt="none"))
    # cost passes must never lose to the plain synthesis
    if not (cost_of(res.circuit) <= cost_of(base.circuit)):
        res = base
    if cfg.opt == "all":
        meta = res.meta.get("chain")
        if meta is not None and spec.kind is McKind.MCZ_DELTA:
            plan = plan_depth_reduction(meta)
            res = apply_depth_plan(res, plan, replace(cfg, opt="none"))
    return res
