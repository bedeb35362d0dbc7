"""Command-line front end: synth, verify, bench, certify.

Exit codes: 0 pass, 1 verification failure, 2 usage or invalid request.
"""
from __future__ import annotations

import argparse
import json
import re
import sys

from . import costmodel
from .core import (
    Angle,
    McGateSpec,
    McKind,
    SpecError,
    UnitVector,
    V_H,
    V_S,
    V_T,
    V_TX,
    V_V,
    X_AXIS,
    Y_AXIS,
    Z_AXIS,
    cost_of,
    depth_of,
)
from .bench import BenchConfig, run_bench, to_csv
from .qasm import dump_circuit, load_circuit
from .rotations import certify_fixed_identities
from .synth import SynthConfig, synthesize
from .verify import compare, reference_unitary, simulate, verify_cap

_NAMED_AXES = {
    "x": X_AXIS, "y": Y_AXIS, "z": Z_AXIS,
    "h": V_H, "s": V_S, "v": V_V, "t": V_T, "tx": V_TX,
}

_ANGLE_RE = re.compile(r"^(-?\d+)pi(?:/(\d+))?$")


def parse_angle(text: str) -> Angle:
    """Angles as plain floats or rational-pi strings like 1pi/2 or -3pi/4."""
    text = text.strip()
    m = _ANGLE_RE.match(text)
    if m:
        return Angle.pi_frac(int(m.group(1)), int(m.group(2) or 1))
    if text == "pi":
        return Angle.pi_frac(1)
    return Angle.flt(float(text))


def parse_axis(text: str) -> UnitVector:
    name = text.strip().lower()
    if name in _NAMED_AXES:
        return _NAMED_AXES[name]
    parts = [float(x) for x in text.split(",")]
    if len(parts) != 3:
        raise ValueError("axis needs a name or three comma-separated components")
    return UnitVector.normalized(*parts)


def spec_from_args(args) -> McGateSpec:
    kind = McKind(args.gate)
    controls = frozenset(int(c) for c in args.controls.split(",") if c != "")
    ancilla = None
    if args.ancilla is not None and args.ancilla != "auto":
        ancilla = int(args.ancilla)
    axis = parse_axis(args.axis) if args.axis else None
    angle = parse_angle(args.angle) if args.angle else None
    spec = McGateSpec(kind, args.k, controls, args.target, ancilla, axis, angle)
    if kind in (McKind.MCX, McKind.MCZ, McKind.MCP, McKind.MCPI):
        if args.ancilla is None and spec.k > 2:
            raise SpecError("ancilla required (pass --ancilla auto to select one)")
    return spec


def spec_to_json(spec: McGateSpec) -> str:
    data = {
        "kind": spec.kind.value,
        "k": spec.k,
        "controls": sorted(spec.controls),
        "target": spec.target,
    }
    if spec.ancilla is not None:
        data["ancilla"] = spec.ancilla
    if spec.axis is not None:
        data["axis"] = [spec.axis.x, spec.axis.y, spec.axis.z]
    if spec.angle is not None:
        a = spec.angle
        data["angle"] = (
            {"pi_num": a.frac.numerator, "pi_den": a.frac.denominator}
            if a.frac is not None else {"value": a.value}
        )
    return json.dumps(data)


def spec_from_json(text: str) -> McGateSpec:
    data = json.loads(text)
    axis = None
    if "axis" in data:
        axis = UnitVector.normalized(*data["axis"])
    angle = None
    if "angle" in data:
        a = data["angle"]
        angle = (Angle.pi_frac(a["pi_num"], a["pi_den"])
                 if "pi_num" in a else Angle.flt(a["value"]))
    return McGateSpec(
        McKind(data["kind"]), data["k"], frozenset(data["controls"]),
        data["target"], data.get("ancilla"), axis, angle,
    )


def _print_tables(res) -> None:
    rows = [("achieved", cost_of(res.circuit))]
    if res.predicted is not None:
        rows.append(("predicted", res.predicted))
    if res.upper is not None:
        rows.append(("upper", res.upper))
    print(f"{'':12s} {'CNOT':>6s} {'T':>6s} {'H':>6s} {'Rz':>6s}")
    for name, c in rows:
        print(f"{name:12s} {c.cx:6d} {c.t:6d} {c.h:6d} {c.rz:6d}")
    d = depth_of(res.circuit)
    print(f"{'depth':12s} {d.cx:6d} {d.t:6d} {d.h:6d} {d.rz:6d}")


def cmd_synth(args) -> int:
    spec = spec_from_args(args)
    cfg = SynthConfig(rz_tradeoff=args.rz_tradeoff, opt=args.opt,
                      barenco=args.barenco)
    res = synthesize(spec, cfg)
    text = dump_circuit(res.circuit, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
        if args.spec_out:
            with open(args.spec_out, "w") as fh:
                fh.write(spec_to_json(spec) + "\n")
    else:
        sys.stdout.write(text)
    _print_tables(res)
    return 0


def cmd_verify(args) -> int:
    with open(args.infile) as fh:
        circuit = load_circuit(fh.read())
    with open(args.spec) as fh:
        spec = spec_from_json(fh.read())
    if circuit.k > verify_cap():
        print(f"refused: k={circuit.k} exceeds the simulation cap "
              f"{verify_cap()} (set MCG_VERIFY_CAP to raise it)")
        return 2
    mode = {"exact": "exact", "phase": "global_phase",
            "relphase": "diag_residue"}[args.mode]
    rep = compare(reference_unitary(spec), simulate(circuit), mode)
    print(rep)
    return 0 if rep.passed else 1


def cmd_bench(args) -> int:
    values = tuple(range(args.lo, args.hi + 1))
    cfg = BenchConfig(
        mode=args.mode, fixed=args.fixed, values=values,
        samples=args.samples, seed=args.seed, opt=args.opt,
        verify_limit=args.verify_limit, workers=args.workers,
    )
    records = run_bench(cfg)
    csv_text = to_csv(records)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(csv_text)
        print(f"wrote {len(records)} records to {args.out}")
    else:
        sys.stdout.write(csv_text)
    if any(r.verify == "fail" for r in records):
        return 1
    return 0


def cmd_certify(_args) -> int:
    worst = 0.0
    for name, dev in certify_fixed_identities().items():
        print(f"{name:28s} {dev:.3e}")
        worst = max(worst, dev)
    print(f"max deviation: {worst:.3e}")
    return 0 if worst < 1e-10 else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="mcg",
        description="LNN synthesis of multi-controlled gates in Clifford+T+Rz",
    )
    sub = p.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("synth", help="synthesize a gate to QASM or JSON")
    ps.add_argument("--gate", required=True,
                    choices=[k.value for k in McKind])
    ps.add_argument("--k", type=int, required=True)
    ps.add_argument("--controls", required=True,
                    help="comma-separated control indices")
    ps.add_argument("--target", type=int, required=True)
    ps.add_argument("--ancilla", default=None,
                    help="ancilla index or 'auto'")
    ps.add_argument("--axis", default=None,
                    help="x|y|z|h|s|v|t|tx or three components x,y,z")
    ps.add_argument("--angle", default=None,
                    help="float radians or a rational like 1pi/2")
    ps.add_argument("--rz-tradeoff", default="min_rz",
                    choices=["min_rz", "min_cx"])
    ps.add_argument("--opt", default="none",
                    choices=["none", "cost", "depth", "all"])
    ps.add_argument("--barenco", action="store_true",
                    help="allow the 5-Rz path when the layout fits")
    ps.add_argument("--out", default=None)
    ps.add_argument("--spec-out", default=None,
                    help="also write the request as spec JSON (for verify)")
    ps.add_argument("--format", default="qasm", choices=["qasm", "json"])
    ps.set_defaults(func=cmd_synth)

    pv = sub.add_parser("verify", help="check a circuit file against a spec")
    pv.add_argument("--in", dest="infile", required=True)
    pv.add_argument("--spec", required=True)
    pv.add_argument("--mode", default="phase",
                    choices=["exact", "phase", "relphase"])
    pv.set_defaults(func=cmd_verify)

    pb = sub.add_parser("bench", help="random-placement benchmark to CSV")
    pb.add_argument("--mode", default="fixed_k",
                    choices=["fixed_k", "fixed_n"])
    pb.add_argument("--fixed", type=int, required=True,
                    help="the fixed k (fixed_k) or n (fixed_n)")
    pb.add_argument("--lo", type=int, required=True)
    pb.add_argument("--hi", type=int, required=True)
    pb.add_argument("--samples", type=int, default=100)
    pb.add_argument("--seed", type=int, default=0)
    pb.add_argument("--opt", default="none",
                    choices=["none", "cost", "depth", "all"])
    pb.add_argument("--verify-limit", type=int, default=None)
    pb.add_argument("--workers", type=int, default=1)
    pb.add_argument("--out", default=None)
    pb.set_defaults(func=cmd_bench)

    pc = sub.add_parser("certify", help="numerically certify the fixed identities")
    pc.set_defaults(func=cmd_certify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SpecError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
