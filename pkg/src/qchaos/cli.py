"""Command-line surface: analyze, construct, scan, census, simulate, noise, optimize.

Every command emits a JSON document with an embedded run manifest (command,
resolved parameters, seed, version, timestamp).  Re-running a command with
the same arguments reproduces the document bit-identically apart from the
timestamp, for any --threads setting.  Exit codes: 0 success, 2 validation
error, 3 precision-self-check failure.
"""

from __future__ import annotations

import argparse
import datetime
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .chaoticity import (
    IdempotencyResult,
    chaoticity_scan,
    idempotency_order,
    projective_idempotency_order,
)
from .constructions import (
    IRRATIONAL_CERTIFIED,
    PrecisionPolicy,
    PrecisionSelfCheckError,
    QuadraticRecipe,
    RATIONAL,
    UNKNOWN,
    build_chaotic_order,
    build_quadratic_unitary,
    build_rational_unitary,
    quadratic_trace_sequence,
    source_from_json,
    source_to_json,
)
from .entropy import (
    OptimizerOptions,
    PvmBasis,
    markov_entropy_rate,
    pvm_entropy_optimize,
    qubit_entropy_closed,
    transition_matrix,
)
from .phases import (
    EigenphasePair,
    ExactUnitarySpec,
    RationalPhase,
    Unitary2,
    eigenphases_of,
    make_su2_from_psi,
    mod_2pi,
    require_unitary,
)
from .simulate import (
    NoiseConfig,
    TrajectoryConfig,
    empirical_entropy_rate,
    monte_carlo_chaotic_fraction,
    noisy_phase_walk,
    sample_trajectory,
    write_trajectory_outputs,
)


def parse_phase(text: str):
    """Parse a CLI phase: 'm/p' or an integer are exact multiples of pi,
    a decimal is a float multiple of pi, and 'rad:x' is raw radians."""
    text = text.strip()
    if text.startswith("rad:"):
        return mod_2pi(float(text[4:]))
    if "/" in text:
        num, den = text.split("/", 1)
        return RationalPhase(int(num), int(den))
    try:
        return RationalPhase(int(text), 1)
    except ValueError:
        return mod_2pi(float(text) * math.pi)


def _su2_completion(ph: RationalPhase) -> RationalPhase:
    """The phase that makes (phi, psi) unimodular: phi = (2 - psi/pi) * pi."""
    return RationalPhase.from_fraction((2 - ph.fraction) % 2)


def _to_radians(v) -> float:
    return v.radians() if isinstance(v, RationalPhase) else v


def resolve_source(args):
    """Turn CLI phase arguments into an ExactUnitarySpec, QuadraticRecipe or pair."""
    if getattr(args, "spec_json", None):
        return source_from_json(Path(args.spec_json).read_text())
    g = parse_phase(args.global_phase) if getattr(args, "global_phase", None) else RationalPhase(0)
    phi = parse_phase(args.phi) if getattr(args, "phi", None) is not None else None
    psi = parse_phase(args.psi) if getattr(args, "psi", None) is not None else None
    if psi is None:
        raise ValueError("a unitary source is required: --psi, --phi/--psi or --spec-json")
    if phi is None:  # SU(2) completion from the single phase
        if isinstance(psi, RationalPhase):
            return ExactUnitarySpec(_su2_completion(psi), psi,
                                    g if isinstance(g, RationalPhase) else RationalPhase(0))
        return make_su2_from_psi(psi)
    if (isinstance(phi, RationalPhase) and isinstance(psi, RationalPhase)
            and isinstance(g, RationalPhase)):
        return ExactUnitarySpec(phi, psi, g)
    return EigenphasePair(_to_radians(phi), _to_radians(psi))


def _round_floats(obj, digits: int = 12):
    """Round every float to 12 significant digits for stable printed output."""
    if isinstance(obj, float):
        return float(f"{obj:.{digits}g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v, digits) for v in obj]
    return obj


def _manifest(command: str, parameters: dict, seed: int | None) -> dict:
    return {
        "command": command,
        "parameters": parameters,
        "seed": seed,
        "version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }


def _emit(doc: dict, args) -> None:
    doc = _round_floats(doc)
    _validate_output(doc)
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    dest = getattr(args, "json", None) or "-"
    if dest == "-":
        sys.stdout.write(text)
    else:
        Path(dest).write_text(text)


_SCHEMA = None


def _validate_output(doc: dict) -> None:
    global _SCHEMA
    if _SCHEMA is None:
        import jsonschema

        schema_path = Path(__file__).parent / "schemas" / "output.schema.json"
        _SCHEMA = (json.loads(schema_path.read_text()), jsonschema)
    schema, jsonschema = _SCHEMA
    jsonschema.validate(doc, schema)


def _write_csv(report, args) -> None:
    if getattr(args, "csv", None):
        Path(args.csv).write_text(report.to_csv())


def _source_doc(source) -> dict:
    if isinstance(source, ExactUnitarySpec):
        pair = source.pair()
        return {"kind": "rational", "phi": pair.phi, "psi": pair.psi,
                "spec": source_to_json(source)}
    if isinstance(source, QuadraticRecipe):
        return {"kind": "quadratic", "phi": None, "psi": None,
                "spec": source_to_json(source)}
    return {"kind": "float_pair", "phi": source.phi, "psi": source.psi, "spec": None}


def _analysis_body(source, k_max: int, n_cap: int) -> dict:
    """Scan + per-order closed-form entropy + idempotency/rationality block."""
    built = None
    if isinstance(source, QuadraticRecipe):
        built = source.build()
        pair_or_spec = built.pair
        rationality = IRRATIONAL_CERTIFIED
        idem = IdempotencyResult(order=None, reason="irrational_phase")
        projective = None
    elif isinstance(source, ExactUnitarySpec):
        pair_or_spec = source
        rationality = RATIONAL
        idem = idempotency_order(source, n_cap)
        projective = projective_idempotency_order(source, n_cap)
    else:
        pair_or_spec = source
        rationality = UNKNOWN
        idem = IdempotencyResult(order=None, reason="unknown_phase_rationality")
        projective = None
    report = chaoticity_scan(pair_or_spec, k_max)
    pair = pair_or_spec.pair() if isinstance(pair_or_spec, ExactUnitarySpec) else pair_or_spec
    body = {
        "input": _source_doc(source),
        "phases": {"phi": pair.phi, "psi": pair.psi},
        "rationality": rationality,
        "idempotency": {"order": idem.order, "reason": idem.reason,
                        "inner_denominator_lcm": idem.inner_denominator_lcm},
        "projective_order": projective,
        "entropy_bits": qubit_entropy_closed(pair).value,
        "scan": report.to_json_rows(),
    }
    if built is not None:
        body["quadratic_build"] = {"classification": built.classification,
                                   "s_t": built.s_t, "residual": built.residual,
                                   "precision_bits": built.policy_bits}
    return body, report


def cmd_analyze(args) -> int:
    source = resolve_source(args)
    body, report = _analysis_body(source, args.k_max, args.n_cap)
    doc = {"manifest": _manifest("analyze", {
        "source": body["input"], "k_max": args.k_max, "n_cap": args.n_cap,
    }, getattr(args, "seed", None))}
    doc.update(body)
    _emit(doc, args)
    _write_csv(report, args)
    return 0


def cmd_scan(args) -> int:
    source = resolve_source(args)
    if isinstance(source, QuadraticRecipe):
        source = source.build().pair
    report = chaoticity_scan(source, args.k_max)
    doc = {
        "manifest": _manifest("scan", {"source": _source_doc(source),
                                       "k_max": args.k_max}, None),
        "scan": report.to_json_rows(),
    }
    _emit(doc, args)
    _write_csv(report, args)
    return 0


def cmd_construct(args) -> int:
    params: dict = {"kind": args.kind}
    if args.kind == "rational":
        spec = build_rational_unitary(parse_phase(args.phase1), parse_phase(args.phase2),
                                      parse_phase(args.global_phase) if args.global_phase
                                      else RationalPhase(0))
        construction = {"kind": "rational", "source": source_to_json(spec)}
        params.update(construction["source"])
        result_source = spec
    elif args.kind == "chaotic-order-k":
        spec, prime = build_chaotic_order(args.order)
        construction = {"kind": "chaotic-order-k", "order": args.order, "prime": prime,
                        "source": source_to_json(spec)}
        params.update({"order": args.order})
        result_source = spec
    elif args.kind == "quadratic":
        recipe = QuadraticRecipe(args.a, args.b, args.t, args.precision_bits)
        policy = recipe.policy or PrecisionPolicy.recommended(recipe.seed, recipe.t)
        built = build_quadratic_unitary(recipe.seed, recipe.t, policy)
        construction = {"kind": "quadratic", "source": source_to_json(recipe),
                        "classification": built.classification, "s_t": built.s_t,
                        "residual": built.residual, "precision_bits": built.policy_bits,
                        "trace_values": list(quadratic_trace_sequence(recipe.seed,
                                                                      recipe.t).values)}
        params.update({"a": args.a, "b": args.b, "t": args.t,
                       "precision_bits": args.precision_bits})
        result_source = recipe
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown construction kind {args.kind!r}")

    body, _ = _analysis_body(result_source, args.k_max, args.n_cap)
    doc = {"manifest": _manifest("construct", params, None),
           "construction": construction, "analysis": body}
    _emit(doc, args)
    return 0


def cmd_census(args) -> int:
    result = monte_carlo_chaotic_fraction(args.n, args.seed, threads=args.threads)
    # thread count is a scheduling knob, not a result parameter: outputs are
    # contractually identical across --threads, so it stays out of the manifest
    doc = {
        "manifest": _manifest("census", {"n": args.n}, args.seed),
        "census": result.to_json(),
    }
    _emit(doc, args)
    return 0


_BASIS_CHOICES = {
    "computational": PvmBasis.computational,
    "x": PvmBasis.x_basis,
}


def cmd_simulate(args) -> int:
    source = resolve_source(args)
    if isinstance(source, QuadraticRecipe):
        source = source.build().pair
    pair = source.pair() if isinstance(source, ExactUnitarySpec) else source
    u = Unitary2.from_pair(pair).matrix
    if args.basis == "optimized":
        basis = pvm_entropy_optimize(u, OptimizerOptions(seed=args.seed,
                                                         threads=args.threads)).optimal_basis
    else:
        basis = _BASIS_CHOICES[args.basis]()
    cfg = TrajectoryConfig(pair, basis, steps=args.steps, seed=args.seed,
                           period=args.period)
    outcomes = sample_trajectory(cfg)
    predicted = markov_entropy_rate(
        transition_matrix(np.linalg.matrix_power(u, args.period), basis))
    if args.steps >= 100 * 2 ** args.block_len:
        empirical = empirical_entropy_rate(outcomes, args.block_len, alphabet_size=2)
    else:
        empirical = None  # short runs cannot support the block estimate
    config_doc = {"phi": pair.phi, "psi": pair.psi, "basis": args.basis,
                  "steps": args.steps, "period": args.period,
                  "block_len": args.block_len, "initial": "maximally_mixed"}
    doc = {
        "manifest": _manifest("simulate", config_doc, args.seed),
        "config": config_doc,
        "seed": args.seed,
        "empirical_rate": empirical,
        "predicted_rate": predicted,
        "abs_diff": abs(empirical - predicted) if empirical is not None else None,
    }
    if args.out:
        sidecar = _round_floats({k: v for k, v in doc.items()})
        write_trajectory_outputs(args.out, outcomes, sidecar)
    _emit(doc, args)
    return 0


def cmd_noise(args) -> int:
    source = resolve_source(args)
    if isinstance(source, QuadraticRecipe):
        source = source.build().pair
    pair = source.pair() if isinstance(source, ExactUnitarySpec) else source
    cfg = NoiseConfig(epsilon=args.epsilon, steps=args.steps, seed=args.seed)
    walk = noisy_phase_walk(pair, cfg)
    counts: dict[str, int] = {"chaotic": 0, "non_chaotic": 0, "boundary": 0}
    for _, verdict in walk:
        counts[verdict.label.value] += 1
    doc = {
        "manifest": _manifest("noise", {"phi": pair.phi, "psi": pair.psi,
                                        "epsilon": args.epsilon, "steps": args.steps},
                              args.seed),
        "noise": {
            "base": {"phi": pair.phi, "psi": pair.psi},
            "epsilon": args.epsilon,
            "steps": args.steps,
            "verdict_counts": counts,
        },
    }
    if args.full:
        doc["noise"]["walk"] = [{"phi": p.phi, "psi": p.psi, "trace_mag": v.trace_mag,
                                 "verdict": v.label.value} for p, v in walk]
    _emit(doc, args)
    return 0


def _load_unitary_json(path: str) -> np.ndarray:
    rows = json.loads(Path(path).read_text())
    m = np.array([[complex(re, im) for re, im in row] for row in rows])
    return require_unitary(m)


def cmd_optimize(args) -> int:
    if args.unitary_json:
        u = _load_unitary_json(args.unitary_json)
    else:
        source = resolve_source(args)
        if isinstance(source, QuadraticRecipe):
            source = source.build().pair
        pair = source.pair() if isinstance(source, ExactUnitarySpec) else source
        u = Unitary2.from_pair(pair).matrix
    opts = OptimizerOptions(restarts=args.restarts, max_iters=args.max_iters,
                            match_tol=args.match_tol, seed=args.seed,
                            threads=args.threads)
    result = pvm_entropy_optimize(u, opts)
    body = {
        "d": u.shape[0],
        "value_bits": result.value,
        "restarts": args.restarts,
        "basis": [[[v.real, v.imag] for v in col]
                  for col in result.optimal_basis.vectors.T],
    }
    if u.shape[0] == 2:
        closed = qubit_entropy_closed(eigenphases_of(u)[0]).value
        body["closed_form_bits"] = closed
        body["abs_diff"] = abs(result.value - closed)
        body["matches_closed_form"] = abs(result.value - closed) <= args.match_tol
    doc = {
        "manifest": _manifest("optimize", {"restarts": args.restarts,
                                           "max_iters": args.max_iters,
                                           "match_tol": args.match_tol}, args.seed),
        "optimize": body,
    }
    _emit(doc, args)
    return 0


def _add_common(p: argparse.ArgumentParser, seed_default=None) -> None:
    p.add_argument("--seed", type=int, default=seed_default,
                   help="64-bit seed; every stochastic command requires one")
    p.add_argument("--json", metavar="PATH", default="-",
                   help="write the JSON document here ('-' = stdout)")
    p.add_argument("--csv", metavar="PATH", help="also write the tabular report as CSV")
    p.add_argument("--out", metavar="PREFIX",
                   help="output prefix for stream/sidecar files (simulate)")
    p.add_argument("--precision-bits", type=int, default=None,
                   help="working precision for quadratic-seed phase reduction")
    p.add_argument("--threads", type=int, default=1,
                   help="worker cap; results are independent of this value")


def _add_source_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--phi", help="first eigenphase (units of pi; 'm/p' exact, 'rad:' radians)")
    p.add_argument("--psi", help="second eigenphase; alone it implies the SU(2) completion")
    p.add_argument("--global-phase", help="scalar prefactor phase (units of pi)")
    p.add_argument("--spec-json", metavar="PATH", help="JSON build source (rational or quadratic)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qchaos",
        description="Chaoticity orders and PVM dynamical entropy of two-level unitaries.")
    parser.add_argument("--version", action="version", version=f"qchaos {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="scan chaoticity orders, entropy and idempotency")
    _add_source_args(p)
    p.add_argument("--k-max", type=int, default=8)
    p.add_argument("--n-cap", type=int, default=1_000_000)
    _add_common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("scan", help="chaoticity scan rows only")
    _add_source_args(p)
    p.add_argument("--k-max", type=int, default=8)
    _add_common(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("construct", help="build a unitary family member and analyze it")
    kinds = p.add_subparsers(dest="kind", required=True)

    pr = kinds.add_parser("rational", help="exact rational-phase unitary")
    pr.add_argument("phase1", help="first inner phase, units of pi (e.g. 1/4)")
    pr.add_argument("phase2", help="second inner phase, units of pi")
    pr.add_argument("--global-phase", help="prefactor phase, units of pi")
    pr.add_argument("--k-max", type=int, default=8)
    pr.add_argument("--n-cap", type=int, default=1_000_000)
    _add_common(pr)
    pr.set_defaults(func=cmd_construct)

    pk = kinds.add_parser("chaotic-order-k", help="unitary chaotic at a prescribed order")
    pk.add_argument("--order", "-K", type=int, required=True)
    pk.add_argument("--k-max", type=int, default=8)
    pk.add_argument("--n-cap", type=int, default=1_000_000)
    _add_common(pk)
    pk.set_defaults(func=cmd_construct)

    pq = kinds.add_parser("quadratic", help="non-idempotent pair from a quadratic seed")
    pq.add_argument("--a", type=int, required=True)
    pq.add_argument("--b", type=int, required=True)
    pq.add_argument("--t", type=int, required=True)
    pq.add_argument("--k-max", type=int, default=8)
    pq.add_argument("--n-cap", type=int, default=1_000_000)
    _add_common(pq)
    pq.set_defaults(func=cmd_construct)

    p = sub.add_parser("census", help="uniform-psi chaotic-fraction census")
    p.add_argument("--n", type=int, required=True)
    _add_common(p, seed_default=0)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("simulate", help="sample a measured trajectory and estimate its rate")
    _add_source_args(p)
    p.add_argument("--basis", choices=["computational", "x", "optimized"], default="x")
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--period", type=int, default=1,
                   help="measure after every period-th application")
    p.add_argument("--block-len", type=int, default=8)
    _add_common(p, seed_default=0)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("noise", help="uniform phase-noise walk with per-step verdicts")
    _add_source_args(p)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--full", action="store_true", help="include every walk step")
    _add_common(p, seed_default=0)
    p.set_defaults(func=cmd_noise)

    p = sub.add_parser("optimize", help="variational PVM entropy over measurement bases")
    _add_source_args(p)
    p.add_argument("--unitary-json", metavar="PATH",
                   help="d x d matrix as nested [re, im] pairs (d in {2, 3})")
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--max-iters", type=int, default=2000)
    p.add_argument("--match-tol", type=float, default=1e-3)
    _add_common(p, seed_default=0)
    p.set_defaults(func=cmd_optimize)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except PrecisionSelfCheckError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
