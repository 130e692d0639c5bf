"""Command line surface: ingest family documents, emit canonical reports.

Exit codes: 0 when the checked property holds, 1 when it fails (the
report carries a witness), 2 on input or usage errors. Reports are
canonical JSON (sorted keys, compact separators, shortest round-trip
floats), so reruns with identical input and seed are byte-identical.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys

import numpy as np

from .errors import TooManyPartitions, ToolkitError
from .frames import (
    DiscreteFrame,
    bessel_bound,
    is_riesz_basis,
    optimal_bounds,
)
from .fusion import (
    FusionFrame,
    Subspace,
    fusion_bounds,
    is_orthonormal_fusion_basis,
    is_riesz_decomposition,
    synthesis_is_onto,
)
from .instances import INSTANCE_IDS, build_instance, verify_instance
from .perturbation import (
    PerturbationCertificate,
    op_perturbation_check,
    proj_perturbation_check,
    pw_check,
)
from .weaving import (
    DISCRETE,
    FUSION,
    WovenFamily,
    WovenReport,
    find_nonwoven_witness,
    partition_cap,
    woven_bounds_exhaustive,
    woven_bounds_sampled,
)

NOTE_UPPER_IS_MAX = (
    "universal upper bound is the maximum weaving upper bound over the "
    "examined partitions"
)


class DocumentInvalid(ToolkitError):
    pass


def canonical_json(obj) -> str:
    """Deterministic JSON: sorted keys, compact, shortest float repr."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def _round_trip_floats(value):
    if isinstance(value, dict):
        return {str(k): _round_trip_floats(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round_trip_floats(v) for v in value]
    if isinstance(value, np.ndarray):
        return _round_trip_floats(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    return value


def family_to_document(family: WovenFamily) -> dict:
    """Serialize a woven family into the document schema."""
    systems = []
    if family.kind == DISCRETE:
        for s in family.systems:
            systems.append({"vectors": s.vectors.tolist()})
    else:
        for s in family.systems:
            systems.append(
                {
                    "weights": s.weights.tolist(),
                    "subspaces": [
                        {"spanning": sub.basis.T.tolist()} for sub in s.subspaces
                    ],
                }
            )
    return {"dim": family.dim, "kind": family.kind, "systems": systems}


def _require(cond: bool, path: str, message: str) -> None:
    if not cond:
        raise DocumentInvalid(f"{path}: {message}")


def parse_family_document(doc) -> WovenFamily:
    """Validate a parsed JSON document and build the woven family."""
    _require(isinstance(doc, dict), "$", "document must be a JSON object")
    dim = doc.get("dim")
    _require(isinstance(dim, int) and dim >= 1, "dim", "positive integer required")
    kind = doc.get("kind")
    _require(kind in (DISCRETE, FUSION), "kind", "must be 'discrete' or 'fusion'")
    systems = doc.get("systems")
    _require(
        isinstance(systems, list) and len(systems) >= 2,
        "systems",
        "need at least two systems",
    )

    built = []
    counts = set()
    for si, sys_doc in enumerate(systems):
        path = f"systems[{si}]"
        _require(isinstance(sys_doc, dict), path, "system must be an object")
        if kind == DISCRETE:
            vectors = sys_doc.get("vectors")
            _require(
                isinstance(vectors, list) and len(vectors) >= 1,
                f"{path}.vectors",
                "nonempty vector list required",
            )
            arr = _float_matrix(vectors, f"{path}.vectors", dim)
            counts.add(arr.shape[0])
            built.append(DiscreteFrame(dim, arr))
        else:
            weights = sys_doc.get("weights")
            subspaces = sys_doc.get("subspaces")
            _require(
                isinstance(weights, list) and len(weights) >= 1,
                f"{path}.weights",
                "nonempty weight list required",
            )
            _require(
                isinstance(subspaces, list) and len(subspaces) == len(weights),
                f"{path}.subspaces",
                "one subspace per weight required",
            )
            w = []
            for wi, value in enumerate(weights):
                _require(
                    isinstance(value, (int, float))
                    and np.isfinite(value)
                    and value > 0,
                    f"{path}.weights[{wi}]",
                    "weights must be finite and positive",
                )
                w.append(float(value))
            subs = []
            for ki, sub_doc in enumerate(subspaces):
                sub_path = f"{path}.subspaces[{ki}]"
                _require(
                    isinstance(sub_doc, dict) and "spanning" in sub_doc,
                    sub_path,
                    "object with a 'spanning' list required",
                )
                spanning = sub_doc["spanning"]
                _require(
                    isinstance(spanning, list),
                    f"{sub_path}.spanning",
                    "list of vectors required",
                )
                if spanning:
                    arr = _float_matrix(spanning, f"{sub_path}.spanning", dim)
                    subs.append(Subspace.from_spanning(dim, list(arr)))
                else:
                    subs.append(Subspace(dim, np.zeros((dim, 0))))
            counts.add(len(subs))
            built.append(FusionFrame(dim, tuple(subs), np.array(w)))
    _require(len(counts) == 1, "systems", "systems must share the member count")
    return WovenFamily(kind, tuple(built))


def _float_matrix(rows, path: str, dim: int) -> np.ndarray:
    out = []
    for ri, row in enumerate(rows):
        _require(
            isinstance(row, list) and len(row) == dim,
            f"{path}[{ri}]",
            f"vector of length {dim} required",
        )
        vals = []
        for ci, value in enumerate(row):
            _require(
                isinstance(value, (int, float)) and np.isfinite(value),
                f"{path}[{ri}][{ci}]",
                "finite number required",
            )
            vals.append(float(value))
        out.append(vals)
    return np.array(out)


def load_family(path: str) -> tuple[WovenFamily, str]:
    """Read, validate, and digest a family document file."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise DocumentInvalid(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(raw.decode("utf-8"))
    except UnicodeDecodeError as exc:
        raise DocumentInvalid(f"{path} is not valid UTF-8: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DocumentInvalid(
            f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    family = parse_family_document(doc)
    digest = hashlib.sha256(
        canonical_json(_round_trip_floats(doc)).encode("utf-8")
    ).hexdigest()
    return family, digest


def _emit(document: dict) -> None:
    sys.stdout.write(canonical_json(_round_trip_floats(document)) + "\n")


def _woven_report_payload(report: WovenReport) -> dict:
    return {
        "universal_lower": report.universal_lower,
        "universal_upper": report.universal_upper,
        "is_woven": report.is_woven,
        "worst_partition": list(report.worst_partition.assignment),
        "best_upper_partition": list(report.best_upper_partition.assignment),
        "method": report.method,
        "partitions_examined": report.partitions_examined,
        "seed": report.seed,
    }


def _certificate_payload(cert: PerturbationCertificate) -> dict:
    return {
        "method": cert.method,
        "hypothesis_holds": cert.hypothesis_holds,
        "constants": list(cert.constants),
        "predicted_lower": cert.predicted_lower,
        "predicted_upper": cert.predicted_upper,
        "sample_count": cert.sample_count,
        "seed": cert.seed,
        "max_violation": cert.max_violation,
        "gate_margin": cert.gate_margin,
        "inequality_violation": cert.inequality_violation,
    }


def cmd_analyze(args) -> int:
    family, digest = load_family(args.input)
    systems = []
    for s in family.systems:
        if family.kind == DISCRETE:
            rep = optimal_bounds(s)
            systems.append(
                {
                    "lower": rep.lower,
                    "upper": rep.upper,
                    "is_frame": rep.is_frame,
                    "bessel_bound": bessel_bound(s),
                    "is_riesz_basis": is_riesz_basis(s),
                }
            )
        else:
            rep = fusion_bounds(s)
            systems.append(
                {
                    "lower": rep.lower,
                    "upper": rep.upper,
                    "is_fusion_frame": rep.is_fusion_frame,
                    "synthesis_is_onto": synthesis_is_onto(s),
                    "is_riesz_decomposition": is_riesz_decomposition(s),
                    "is_orthonormal_fusion_basis": is_orthonormal_fusion_basis(s),
                }
            )
    _emit(
        {
            "command": "analyze",
            "input_digest": digest,
            "kind": family.kind,
            "systems": systems,
            "notes": [],
            "seed": None,
        }
    )
    return 0


def cmd_woven(args) -> int:
    family, digest = load_family(args.input)
    if args.samples is not None:
        report = woven_bounds_sampled(family, args.samples, args.seed)
    else:
        if family.m**family.n > partition_cap():
            raise TooManyPartitions(
                f"{family.m}^{family.n} partitions exceeds the cap "
                f"{partition_cap()}; pass --samples N --seed S"
            )
        report = woven_bounds_exhaustive(family)
    payload = _woven_report_payload(report)
    witness = None
    if not report.is_woven and report.method == "exhaustive":
        found = find_nonwoven_witness(family, eps=max(args.eps, 1e-300))
        if found is not None:
            partition, vector, value = found
            witness = {
                "partition": list(partition.assignment),
                "vector": vector.tolist(),
                "value": value,
            }
    payload["witness"] = witness
    _emit(
        {
            "command": "woven",
            "input_digest": digest,
            "report": payload,
            "notes": [NOTE_UPPER_IS_MAX],
            "seed": report.seed,
        }
    )
    return 0 if report.is_woven else 1


def cmd_perturb(args) -> int:
    family, digest = load_family(args.input)
    if family.kind != FUSION:
        raise DocumentInvalid("perturb requires a fusion-kind document")
    if family.m != 2:
        raise DocumentInvalid("perturb requires exactly two systems")
    w, v = family.systems
    if args.method == "pw":
        cert = pw_check(
            w, v, args.lambda1, args.lambda2, args.mu, args.samples, args.seed
        )
    elif args.method == "op":
        cert = op_perturbation_check(
            w, v, args.op_lambda, args.mu, args.gamma, args.samples, args.seed
        )
    else:
        cert = proj_perturbation_check(w, v, args.K, args.samples, args.seed)

    containment = None
    exhaustive_interval = None
    if family.m**family.n <= partition_cap():
        report = woven_bounds_exhaustive(family)
        exhaustive_interval = [report.universal_lower, report.universal_upper]
        if cert.hypothesis_holds:
            containment = (
                report.universal_lower >= cert.predicted_lower - 1e-9
                and report.universal_upper <= cert.predicted_upper + 1e-9
            )
    _emit(
        {
            "command": "perturb",
            "input_digest": digest,
            "certificate": _certificate_payload(cert),
            "exhaustive_interval": exhaustive_interval,
            "prediction_contains_exhaustive": containment,
            "notes": [],
            "seed": cert.seed,
        }
    )
    return 0 if cert.hypothesis_holds else 1


def cmd_reproduce(args) -> int:
    if args.id not in INSTANCE_IDS:
        raise DocumentInvalid(
            f"unknown id {args.id!r}; choose one of {', '.join(INSTANCE_IDS)}"
        )
    inst = build_instance(args.id, dim=args.dim)
    outcomes = verify_instance(inst)
    digest = hashlib.sha256(
        canonical_json(_round_trip_floats(family_to_document(inst.payload))).encode(
            "utf-8"
        )
    ).hexdigest()
    checks = [
        {
            "name": o.name,
            "source": o.source,
            "ok": o.ok,
            "expected": _round_trip_floats(o.expected),
            "actual": _round_trip_floats(o.actual),
        }
        for o in outcomes
    ]
    reference_ok = all(o.ok for o in outcomes if o.source == "reference")
    _emit(
        {
            "command": "reproduce",
            "id": inst.id,
            "dim": inst.truncation_dim,
            "input_digest": digest,
            "checks": checks,
            "all_reference_ok": reference_ok,
            "notes": list(inst.notes),
            "seed": None,
        }
    )
    return 0 if reference_ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wovenframes",
        description="Frame, fusion frame, and woven family analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument(
            "--format", choices=("json",), default="json",
            help="report format on standard output",
        )

    p_analyze = sub.add_parser("analyze", help="per-system bounds and flags")
    p_analyze.add_argument("input", help="family document (JSON)")
    add_format(p_analyze)
    p_analyze.set_defaults(func=cmd_analyze)

    p_woven = sub.add_parser("woven", help="universal bounds over partitions")
    p_woven.add_argument("input", help="family document (JSON)")
    mode = p_woven.add_mutually_exclusive_group()
    mode.add_argument(
        "--exhaustive",
        action="store_true",
        help="scan every partition (default when under the cap)",
    )
    mode.add_argument("--samples", type=int, default=None)
    p_woven.add_argument("--seed", type=int, default=0)
    p_woven.add_argument("--eps", type=float, default=1e-8)
    add_format(p_woven)
    p_woven.set_defaults(func=cmd_woven)

    p_perturb = sub.add_parser("perturb", help="closeness certificates")
    p_perturb.add_argument("input", help="fusion family document with two systems")
    p_perturb.add_argument("--method", choices=("pw", "op", "proj"), required=True)
    p_perturb.add_argument("--lambda1", type=float, default=0.0)
    p_perturb.add_argument("--lambda2", type=float, default=0.0)
    p_perturb.add_argument(
        "--lambda", dest="op_lambda", type=float, default=0.0
    )
    p_perturb.add_argument("--mu", type=float, default=0.0)
    p_perturb.add_argument("--gamma", type=float, default=0.0)
    p_perturb.add_argument("--K", type=float, default=0.5)
    p_perturb.add_argument("--samples", type=int, default=1000)
    p_perturb.add_argument("--seed", type=int, default=0)
    add_format(p_perturb)
    p_perturb.set_defaults(func=cmd_perturb)

    p_repro = sub.add_parser("reproduce", help="rebuild and verify an instance")
    p_repro.add_argument("--id", required=True)
    p_repro.add_argument("--dim", type=int, default=6)
    add_format(p_repro)
    p_repro.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ToolkitError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except Exception as exc:  # malformed input must not produce a traceback
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
