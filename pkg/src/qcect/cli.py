"""Command-line runner for traced, exhaustive and sampled protocol executions.

Exit codes: 0 success, 1 acceptance predicate failed, 2 usage error,
3 internal error.
"""

from __future__ import annotations

import argparse
import ast
import json
import math
import operator
import sys
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .bitflip_code import BlochCoords, NoiseSpec, make_input_state
from .protocol import (
    AXES,
    ControlCommand,
    LegRecord,
    ProtocolTrace,
    enumerate_leg,
    run_forward,
    run_round_trip,
)
from .statevector import StateVector

FIDELITY_FLOOR = 1 - 1e-9
STATS_SIGMA_BOUND = 4.0
MODES = ("single", "enumerate", "stats", "roundtrip")

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv}
_UNARY = {ast.UAdd: operator.pos, ast.USub: operator.neg}


def parse_angle(text: str) -> float:
    """Radians as a number or a small pi-expression such as ``pi/2`` or ``-3*pi/4``."""

    def ev(node):
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)):
            return float(node.value)
        if isinstance(node, ast.Name) and node.id == "pi":
            return math.pi
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            return _UNARY[type(node.op)](ev(node.operand))
        raise ValueError

    try:
        value = ev(ast.parse(text.strip(), mode="eval").body)
    except (SyntaxError, ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an angle: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"angle must be finite: {text!r}")
    return value


def parse_rotation(text: str) -> tuple[str, float]:
    axis, sep, angle = text.partition(":")
    if not sep or axis not in AXES:
        raise argparse.ArgumentTypeError(f"expected axis:angle with axis in {AXES}, got {text!r}")
    return axis, parse_angle(angle)


def parse_noise(text: str) -> tuple[str, float]:
    if text in ("none", "q0", "q1", "q2"):
        return ("none" if text == "none" else f"flip_{text}"), 0.0
    if text.startswith("random:"):
        try:
            p = float(text.split(":", 1)[1])
        except ValueError:
            p = math.nan
        if not 0.0 <= p <= 1.0:
            raise argparse.ArgumentTypeError(f"random flip probability must lie in [0, 1]: {text!r}")
        return "random_single", p
    raise argparse.ArgumentTypeError(f"expected none, q0, q1, q2 or random:p, got {text!r}")


def positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        n = 0
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return n


def seed_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        n = -1
    if n < 0:
        raise argparse.ArgumentTypeError(f"expected an unsigned integer, got {text!r}")
    return n


@dataclass
class RunConfig:
    theta: float = 0.0
    phi: float = 0.0
    noise: NoiseSpec = field(default_factory=NoiseSpec)
    control: ControlCommand = field(default_factory=ControlCommand)
    phase: Optional[float] = None
    seed: int = 0
    mode: str = "enumerate"
    trials: int = 16000
    output: str = "text"
    processing: bool = False

    @property
    def coords(self) -> BlochCoords:
        return BlochCoords(self.theta, self.phi)

    @property
    def command(self) -> ControlCommand:
        steps = self.control.steps
        if self.phase is not None:
            steps = steps + (("global_phase", self.phase),)
        return ControlCommand(steps)

    def to_json(self) -> dict:
        return {
            "theta": self.theta,
            "phi": self.phi,
            "noise": {"kind": self.noise.kind, "placement": self.noise.placement, "p": self.noise.p},
            "control": [[a, t] for a, t in self.control.steps],
            "phase": self.phase,
            "seed": self.seed,
            "mode": self.mode,
            "trials": self.trials,
            "processing": self.processing,
        }


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qcect",
        description="Simulate error-corrected controlled teleportation of a satellite orientation qubit.",
    )
    p.add_argument("--theta", type=parse_angle, default=0.0, help="polar angle in [0, pi] (radians)")
    p.add_argument("--phi", type=parse_angle, default=0.0, help="azimuth (radians, reduced mod 2pi)")
    p.add_argument("--mode", choices=MODES, default="enumerate")
    p.add_argument("--trials", type=positive_int, default=16000, help="samples for --mode stats")
    p.add_argument("--seed", type=seed_int, default=0)
    p.add_argument("--inject-error", type=parse_noise, default=("none", 0.0), metavar="{none,q0,q1,q2,random:p}")
    p.add_argument("--placement", choices=("after_encode", "after_c3not"), default="after_encode")
    p.add_argument("--rotate", type=parse_rotation, action="append", default=[], metavar="AXIS:ANGLE",
                   help="operator-side rotation, repeatable and applied in order (roundtrip mode)")
    p.add_argument("--phase", type=parse_angle, default=None, help="global phase applied after the rotations")
    p.add_argument("--processing", action="store_true", help="also run the Toffoli processing stage")
    p.add_argument("--output", choices=("text", "json"), default="text")
    return p


def parse_args(argv: Sequence[str] | None = None) -> RunConfig:
    parser = build_parser()
    ns = parser.parse_args(argv)
    if not 0.0 <= ns.theta <= math.pi:
        parser.error(f"argument --theta: {ns.theta!r} outside [0, pi]")
    kind, prob = ns.inject_error
    return RunConfig(
        theta=ns.theta,
        phi=ns.phi % (2 * math.pi),
        noise=NoiseSpec(kind=kind, placement=ns.placement, p=prob),
        control=ControlCommand(tuple(ns.rotate)),
        phase=ns.phase,
        seed=ns.seed,
        mode=ns.mode,
        trials=ns.trials,
        output=ns.output,
        processing=ns.processing,
    )


def _amps(state: StateVector) -> list[list[float]]:
    return [[float(a.real), float(a.imag)] for a in state.amplitudes]


def _stage(name: str, state: StateVector) -> dict:
    return {
        "name": name,
        "num_qubits": state.num_qubits,
        "amplitudes": _amps(state),
        "kets": state.labels(),
    }


def _leg_stages(leg, prefix: str = "", measured: bool = True) -> list[dict]:
    get = (lambda k: getattr(leg, k)) if isinstance(leg, LegRecord) else leg.__getitem__
    names = [("psi_in", "psi0"), ("encoded", "psi1"), ("noisy", "noisy"), ("recovered", "recovered"),
             ("assembled", "psi2"), ("entangled", "psi3"), ("transformed", "psi4")]
    if measured:
        names += [("residual", "residual"), ("output", "psi5")]
    return [_stage(prefix + label, get(attr)) for attr, label in names]


def _noise_json(report) -> dict:
    return {"kind": report.kind, "placement": report.placement, "flipped": list(report.flipped)}


def _syndrome_json(s) -> dict:
    return {"index": s.s, "label": s.label, "affected_qubit": s.affected_qubit, "prob": s.prob}


def _correction_json(op) -> dict:
    return {"x_exp": op.x_exp, "z_exp": op.z_exp, "label": str(op)}


def _leg_summary(leg: LegRecord) -> dict:
    return {
        "noise_report": _noise_json(leg.noise_report),
        "syndrome": _syndrome_json(leg.syndrome),
        "message": str(leg.message),
        "message_prob": leg.message_prob,
        "correction": _correction_json(leg.correction),
    }


def _trace_report(trace: ProtocolTrace, cfg: RunConfig) -> dict:
    stages = _leg_stages(trace.forward)
    if trace.processing_state is not None:
        stages.append(_stage("processing", trace.processing_state))
    report = {"config": cfg.to_json(), "stages": stages, **_leg_summary(trace.forward),
              "fidelity_operator": trace.fidelity_operator}
    if trace.return_leg is not None:
        stages.append(_stage("psi6", trace.psi6))
        stages.extend(_leg_stages(trace.return_leg, prefix="return."))
        report["return_leg"] = _leg_summary(trace.return_leg)
        report["fidelity_satellite"] = trace.fidelity_satellite
    fids = [trace.fidelity_operator] + ([trace.fidelity_satellite] if trace.return_leg else [])
    report["passed"] = all(f >= FIDELITY_FLOOR for f in fids)
    return report


def run_single(cfg: RunConfig) -> dict:
    rng = np.random.default_rng(cfg.seed)
    return _trace_report(run_forward(cfg.coords, cfg.noise, rng, processing=cfg.processing), cfg)


def run_roundtrip(cfg: RunConfig) -> dict:
    rng = np.random.default_rng(cfg.seed)
    trace = run_round_trip(cfg.coords, cfg.command, cfg.noise, cfg.noise, rng, processing=cfg.processing)
    return _trace_report(trace, cfg)


def run_enumerate(cfg: RunConfig) -> dict:
    rng = np.random.default_rng(cfg.seed)
    stages, branches = enumerate_leg(make_input_state(cfg.coords), cfg.noise, rng)
    fid = min(b.fidelity for b in branches)
    return {
        "config": cfg.to_json(),
        "stages": _leg_stages(stages, measured=False),
        "noise_report": _noise_json(stages["noise_report"]),
        "syndrome": _syndrome_json(stages["syndrome"]),
        "branches": [
            {
                "message": str(b.message),
                "prob": b.prob,
                "correction": _correction_json(b.correction),
                "residual": _amps(b.residual),
                "corrected": _amps(b.corrected),
                "fidelity": b.fidelity,
            }
            for b in branches
        ],
        "fidelity_operator": fid,
        "passed": fid >= FIDELITY_FLOOR and abs(sum(b.prob for b in branches) - 1) < 1e-10,
    }


def run_stats(cfg: RunConfig) -> dict:
    # one child seed per trial, so results never depend on execution order
    children = np.random.SeedSequence(cfg.seed).spawn(cfg.trials)
    counts = {format(k, "04b"): 0 for k in range(16)}
    syndromes = [0, 0, 0, 0]
    failures = 0
    worst = 1.0
    for child in children:
        trace = run_forward(cfg.coords, cfg.noise, np.random.default_rng(child))
        counts[str(trace.message)] += 1
        syndromes[trace.syndrome.s] += 1
        worst = min(worst, trace.fidelity_operator)
        failures += trace.fidelity_operator < FIDELITY_FLOOR
    n = cfg.trials
    expected = n / 16
    sigma = math.sqrt(n * (1 / 16) * (15 / 16))
    max_dev = max(abs(c - expected) for c in counts.values()) / sigma
    return {
        "config": cfg.to_json(),
        "stages": [],
        "noise_report": None,
        "syndrome": {"counts": {f"P{s}": c for s, c in enumerate(syndromes)}},
        "fidelity_operator": worst,
        "histogram": {
            "trials": n,
            "counts": counts,
            "expected_count": expected,
            "exact_prob": 1 / 16,
            "sigma": sigma,
            "max_deviation_sigma": max_dev,
            "bound_sigma": STATS_SIGMA_BOUND,
            "fidelity_failures": failures,
        },
        "passed": max_dev <= STATS_SIGMA_BOUND and failures == 0,
    }


RUNNERS = {"single": run_single, "enumerate": run_enumerate, "stats": run_stats, "roundtrip": run_roundtrip}


def run(cfg: RunConfig) -> dict:
    return RUNNERS[cfg.mode](cfg)


def _ket(amps: list[list[float]]) -> str:
    return StateVector([complex(re, im) for re, im in amps]).ket_string()


def format_text(report: dict) -> str:
    cfg = report["config"]
    lines = [f"mode: {cfg['mode']}  theta={cfg['theta']:.9g} phi={cfg['phi']:.9g}  seed={cfg['seed']}"]
    noise = report.get("noise_report")
    if noise is not None:
        flipped = ",".join(f"q{q}" for q in noise["flipped"]) or "-"
        lines.append(f"noise: {noise['kind']} @ {noise['placement']}  flipped: {flipped}")
    for st in report["stages"]:
        lines.append(f"  {st['name']:<18} [{st['num_qubits']}q] {_ket(st['amplitudes'])}")
    if "branches" in report:
        lines.append(f"syndrome: {report['syndrome']['label']}")
        for b in report["branches"]:
            lines.append(
                f"{b['message']} {b['correction']['label']} prob={b['prob']:.4f} fidelity={b['fidelity']:.9f}"
            )
    elif "histogram" in report:
        h = report["histogram"]
        for bits, c in h["counts"].items():
            lines.append(f"{bits} count={c} freq={c / h['trials']:.4f} exact={h['exact_prob']:.4f}")
        lines.append(f"syndromes: {report['syndrome']['counts']}")
        lines.append(
            f"max deviation: {h['max_deviation_sigma']:.3f} sigma (bound {h['bound_sigma']:g}); "
            f"fidelity failures: {h['fidelity_failures']}"
        )
    else:
        lines.append(f"syndrome: {report['syndrome']['label']}")
        lines.append(f"message: {report['message']}  correction: {report['correction']['label']}")
        if "return_leg" in report:
            ret = report["return_leg"]
            lines.append(f"return syndrome: {ret['syndrome']['label']}")
            lines.append(f"return message: {ret['message']}  correction: {ret['correction']['label']}")
    lines.append(f"fidelity_operator: {report['fidelity_operator']:.12f}")
    if "fidelity_satellite" in report:
        lines.append(f"fidelity_satellite: {report['fidelity_satellite']:.12f}")
    lines.append("PASS" if report["passed"] else "FAIL")
    return "\n".join(lines)


def main(argv: Sequence[str] | None = None) -> int:
    cfg = parse_args(argv)  # argparse exits with status 2 on usage errors
    try:
        report = run(cfg)
    except Exception as exc:  # noqa: BLE001
        print(f"qcect: internal error: {exc}", file=sys.stderr)
        return 3
    if cfg.output == "json":
        print(json.dumps(report, indent=2))
    else:
        print(format_text(report))
    return 0 if report["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
