"""Command-line driver.

Exit codes: 0 all checks passed, 1 at least one violation or witness found,
2 usage or input error.  JSON and CSV output carry numbers at 12 significant
digits and identical invocations (same seed) produce byte-identical reports.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Any

from .dimensions import growth_inequality_check, symmetry_check, symmetry_sweep
from .errors import (
    CGUnavailableError,
    CQGError,
    ModelConsistencyError,
    ModelSchemaError,
    PreconditionError,
    TruncationError,
)
from .fusion import decompose, frobenius_check
from .intertwiners import (
    cg_set,
    cg_supplement_document,
    verify_cg_unitarity,
    verify_coassociativity,
    verify_modular,
)
from .kac_degree import (
    bounded_degree_identity_check,
    corollary_6_5_probe,
    is_kac,
    lemma_6_3_check,
    main_inequality_eval,
    main_theorem_sequence,
    n_G,
    subsequence_refine,
)
from .models import BUILTIN_NAMES, resolve_builtin
from .rep_data import DEFAULT_TOLERANCE, QGModel, Tolerance, load_model, model_to_document
from .spectral import spectral_grid, verify_theorem_5_3


def _tolerance(args: argparse.Namespace) -> Tolerance:
    t = float(args.tol)
    if t <= 0:
        raise PreconditionError("--tol must be positive")
    return Tolerance(abs=t, rel=t, eigen_group=t)


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(v) for v in str(text).split(",") if v.strip() != ""]
    except ValueError as exc:
        raise PreconditionError(f"expected a comma-separated number list, got {text!r}") from exc


def _parse_ints(text: str) -> list[int]:
    values = _parse_floats(text)
    out = []
    for v in values:
        if v != int(v):
            raise PreconditionError(f"expected integers, got {text!r}")
        out.append(int(v))
    return out


def _resolve_model(args: argparse.Namespace) -> QGModel:
    spec = args.model or "su_q_2"
    name = spec[len("builtin:") :] if spec.startswith("builtin:") else spec
    f_diag = _parse_floats(args.f_diag) if args.f_diag else None
    if not spec.startswith("builtin:") and (spec.endswith(".json") or "/" in spec):
        return load_model(spec, tol=_tolerance(args))
    try:
        return resolve_builtin(name, q=args.q, max_level=args.max_level, f_diag=f_diag)
    except PreconditionError:
        import os

        if os.path.exists(spec):
            return load_model(spec, tol=_tolerance(args))
        raise


def _round12(value: Any) -> Any:
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        if math.isfinite(value):
            return float(f"{value:.12g}")
        return str(value)
    if isinstance(value, complex):
        return {"re": _round12(value.real), "im": _round12(value.imag)}
    if isinstance(value, dict):
        return {str(k): _round12(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_round12(v) for v in value]
    return str(value)


def _fmt_cell(value: Any) -> str:
    if isinstance(value, float):
        return f"{value:.12g}" if math.isfinite(value) else str(value)
    if isinstance(value, (dict, list, tuple)):
        return json.dumps(_round12(value), separators=(",", ":"))
    return str(value)


def _emit(report: dict, args: argparse.Namespace) -> None:
    report = _round12(report)
    fmt = args.format
    if fmt == "json":
        text = json.dumps(report, indent=2) + "\n"
    elif fmt == "csv":
        lines: list[str] = []
        for section in ("results", "violations", "truncations"):
            rows = report.get(section, [])
            lines.append(f"## {section}")
            if rows:
                columns: list[str] = []
                for row in rows:
                    for key in row:
                        if key not in columns:
                            columns.append(key)
                lines.append(",".join(columns))
                for row in rows:
                    lines.append(
                        ",".join(
                            _fmt_cell(row[c]).replace(",", ";") if c in row else ""
                            for c in columns
                        )
                    )
        text = "\n".join(lines) + "\n"
    else:
        lines = [f"command: {report['command']}", f"model: {report['model']}"]
        params = report.get("parameters", {})
        if params:
            lines.append(
                "parameters: "
                + ", ".join(f"{k}={_fmt_cell(v)}" for k, v in params.items())
            )
        for section in ("results", "violations", "truncations"):
            rows = report.get(section, [])
            lines.append(f"{section} ({len(rows)}):")
            for row in rows:
                lines.append("  " + "  ".join(f"{k}={_fmt_cell(v)}" for k, v in row.items()))
        text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _report(command: str, model_name: str, parameters: dict) -> dict:
    return {
        "command": command,
        "model": model_name,
        "parameters": parameters,
        "results": [],
        "violations": [],
        "truncations": [],
    }


def _labels_arg(m: QGModel, text: str | None) -> list[str]:
    if text is None:
        return list(m.labels)
    labels = [v.strip() for v in text.split(",") if v.strip() != ""]
    for label in labels:
        m.irrep(label)
    return labels


# ---------------------------------------------------------------------------
# subcommand bodies; each fills the report and returns nothing


def _cmd_models(args, report, m: QGModel | None) -> None:
    for name, hint in (
        ("su_q_2", "q-deformed SU(2) series; uses --q and --max-level"),
        ("s3", "dual of the symmetric group on three letters (Kac)"),
        ("cyclic<n>", "dual of the cyclic group of order n (Kac), e.g. cyclic5"),
        ("free_orthogonal", "free orthogonal fundamental fragment; uses --f-diag"),
    ):
        report["results"].append({"builtin": name, "notes": hint})
    if m is not None:
        report["results"].append(
            {
                "selected": m.name,
                "labels": list(m.labels),
                "dims": [m.dim(label) for label in m.labels],
                "truncated": m.is_truncated,
            }
        )


def _cmd_dims(args, report, m: QGModel) -> None:
    ts = _parse_floats(args.t)
    from .dimensions import dim_t

    for label in _labels_arg(m, args.labels):
        row = {"label": label, "dim": m.dim(label)}
        for t in ts:
            row[f"d_{t:g}"] = dim_t(m.rho(label), t)
        report["results"].append(row)


def _cmd_spectra(args, report, m: QGModel) -> None:
    tol = _tolerance(args)
    for label in _labels_arg(m, args.labels):
        spectrum = m.rho(label)
        report["results"].append(
            {
                "label": label,
                "dim": m.dim(label),
                "conjugate": m.conjugate(label),
                "spectrum": list(spectrum),
                "Gamma": float(spectrum[0]),
                "d_1": float(spectrum.trace()),
                "symmetric": symmetry_check(spectrum, tol),
            }
        )


def _cmd_fusion(args, report, m: QGModel) -> None:
    if (args.left is None) != (args.right is None):
        raise PreconditionError("--left and --right must be given together")
    pairs = (
        [(args.left, args.right)] if args.left is not None else sorted(m.fusion.pairs())
    )
    for left, right in pairs:
        m.irrep(left)
        m.irrep(right)
        try:
            dec = decompose(m, left, right)
        except TruncationError as exc:
            report["truncations"].append({"pair": [left, right], "message": str(exc)})
            continue
        report["results"].append(
            {
                "left": left,
                "right": right,
                "components": {label: mult for label, mult in dec.components},
                "total_dim": dec.total_dim(m),
                "total_quantum_dim": dec.total_quantum_dim(m),
            }
        )


def _cmd_cg(args, report, m: QGModel) -> None:
    if args.beta is None or args.gamma is None:
        raise PreconditionError("cg needs --beta and --gamma")
    tol = _tolerance(args)
    tensors = cg_set(m, args.beta, args.gamma, tol)
    unitarity = verify_cg_unitarity(tensors, tol)
    for entry in unitarity["tensors"]:
        report["results"].append(
            {
                "alpha": entry["alpha"],
                "copy_index": entry["copy_index"],
                "isometry_residual": entry["isometry_residual"],
            }
        )
    report["results"].append(
        {
            "cross_orthogonality_residual": unitarity["cross_orthogonality_residual"],
            "completeness_residual": unitarity["completeness_residual"],
            "max_residual": unitarity["max_residual"],
        }
    )
    if not unitarity["pass"]:
        report["violations"].append(
            {"check": "cg-unitarity", "max_residual": unitarity["max_residual"]}
        )


def _cmd_verify_theorem_5_3(args, report, m: QGModel) -> None:
    tol = _tolerance(args)
    alphas = _labels_arg(m, args.alpha)
    betas = _labels_arg(m, args.beta)
    bound = max(tol.abs, tol.rel)
    for alpha in alphas:
        for beta in betas:
            for s, t in spectral_grid(m, alpha, beta, probes=args.probes, tol=tol):
                result = verify_theorem_5_3(m, alpha, beta, s, t, tol)
                row = {
                    "alpha": alpha,
                    "beta": beta,
                    "s": s,
                    "t": t,
                    "on_grid": result["on_grid"],
                    "residual_eq1": result["residual_eq1"],
                    "residual_eq2": result["residual_eq2"],
                    "truncated": result["truncated"],
                }
                report["results"].append(row)
                if result["truncated"]:
                    report["truncations"].append(
                        {"alpha": alpha, "beta": beta, "s": s, "t": t}
                    )
                elif max(result["residual_eq1"], result["residual_eq2"]) > bound:
                    report["violations"].append(dict(row, check="theorem-5.3"))


def _cmd_verify_haar_modular(args, report, m: QGModel) -> None:
    tol = _tolerance(args)
    support = sorted(m.fusion.pairs())
    bound = max(tol.abs, tol.rel)
    for alpha in _labels_arg(m, args.alpha):
        try:
            result = verify_modular(m, alpha, support, tol)
        except CGUnavailableError as exc:
            report["truncations"].append({"alpha": alpha, "message": str(exc)})
            continue
        for side in ("id_tensor_h", "h_tensor_id"):
            for block in result[side]:
                row = {
                    "alpha": alpha,
                    "side": side,
                    "block": block["label"],
                    "residual": block["residual"],
                    "complete": block["complete"],
                }
                report["results"].append(row)
                if block["complete"] and block["residual"] > bound:
                    report["violations"].append(dict(row, check="haar-modular"))
                if not block["complete"]:
                    report["truncations"].append(
                        {
                            "alpha": alpha,
                            "side": side,
                            "block": block["label"],
                            "missing": block["missing"],
                        }
                    )
        coassoc = verify_coassociativity(m, alpha, support, tol)
        for triple in coassoc["triples"]:
            if triple["residual"] > bound:
                report["violations"].append(
                    {
                        "check": "coassociativity",
                        "alpha": alpha,
                        "triple": triple["triple"],
                        "residual": triple["residual"],
                    }
                )
        report["results"].append(
            {
                "alpha": alpha,
                "side": "coassociativity",
                "triples_checked": len(coassoc["triples"]),
                "triples_skipped": len(coassoc["skipped"]),
                "max_residual": coassoc["max_residual"],
            }
        )


def _cmd_verify_symmetry(args, report, m: QGModel) -> None:
    tol = _tolerance(args)
    results, violations = symmetry_sweep(m, tol)
    report["results"].extend(results)
    report["violations"].extend(violations)


def _cmd_verify_frobenius(args, report, m: QGModel) -> None:
    violations = frobenius_check(m)
    pairs = len(m.fusion)
    report["results"].append({"pairs_checked": pairs, "violations_found": len(violations)})
    report["violations"].extend(violations)


def _cmd_verify_growth(args, report, m: QGModel) -> None:
    tol = _tolerance(args)
    ns = _parse_ints(args.n)
    ts = _parse_floats(args.t)
    for alpha in _labels_arg(m, args.alpha):
        for n in ns:
            for t in ts:
                try:
                    result = growth_inequality_check(m, alpha, n, t, tol)
                except TruncationError as exc:
                    report["truncations"].append(
                        {"alpha": alpha, "n": n, "t": t, "message": str(exc)}
                    )
                    continue
                report["results"].append(result)
                if not result["pass"]:
                    report["violations"].append(dict(result, check="growth"))


def _cmd_kac(args, report, m: QGModel) -> None:
    tol = _tolerance(args)
    verdict = is_kac(m, tol)
    report["results"].append(
        {
            "kac": verdict,
            "n_g": n_G(m),
            "n_g_is_lower_bound": m.is_truncated,
        }
    )
    for label in m.labels:
        spectrum = m.rho(label)
        report["results"].append(
            {
                "label": label,
                "Gamma": float(spectrum[0]),
                "d_1": float(spectrum.trace()),
                "dim": m.dim(label),
            }
        )


def _cmd_bounded_degree(args, report, m: QGModel) -> None:
    r = args.r if args.r is not None else 2 * n_G(m)
    strategy = args.strategy
    if strategy == "auto":
        units = sum(m.dim(label) ** 2 for label in m.labels)
        strategy = "exhaustive" if units**r <= 10**6 else "random"
    result = bounded_degree_identity_check(
        m, r, strategy=strategy, trials=args.trials, seed=args.seed
    )
    report["results"].append({k: v for k, v in result.items() if k != "witness"})
    if result["verdict"] == "violated":
        report["violations"].append(
            {"check": "bounded-degree", "r": r, "witness": result["witness"]}
        )


def _cmd_explore_main_theorem(args, report, m: QGModel) -> None:
    tol = _tolerance(args)
    alpha0 = args.alpha0
    m.irrep(alpha0)
    seq = main_theorem_sequence(m, alpha0, args.steps, tol)
    gamma_alpha = float(m.rho(alpha0)[0])
    for step in seq:
        report["results"].append(
            {
                "k": step.k,
                "label": step.label,
                "Gamma": step.Gamma,
                "log_gamma": step.log_gamma,
                "d_1": step.d1,
                "dim": step.dim,
                "dim_top": step.dim_top,
            }
        )
    for entry in lemma_6_3_check(seq, [s.k for s in seq], gamma_alpha, tol):
        report["results"].append(
            {
                "check": "growth-chain",
                "k_pair": entry["k_pair"],
                "value": entry["value"],
                "pass": entry["pass"],
            }
        )
        if not entry["pass"]:
            report["violations"].append(dict(entry, check="growth-chain"))
    outcome = subsequence_refine(seq, gamma_alpha, budget=args.budget, tol=tol)
    report["results"].append({"check": "subsequence", **outcome})
    if outcome["outcome"] == "refined":
        by_k = {s.k: s for s in seq}
        ka, kb = outcome["k_indices"][0], outcome["k_indices"][1]
        evaluation = main_inequality_eval(
            by_k[ka], by_k[kb], gamma_alpha, outcome["dimension"], tol=tol
        )
        report["results"].append({"check": "final-bound", **evaluation})
        if (
            evaluation["log_lower_bound"] >= math.log1p(-tol.rel)
            and evaluation["log_final_bound"] < 0
        ):
            report["violations"].append(
                {
                    "check": "consistency-trap",
                    "message": "refined pair satisfies both the >=1 chain and the <1 bound",
                    **evaluation,
                }
            )


def _cmd_explore_corollary_6_5(args, report, m: QGModel) -> None:
    word = []
    for token in str(args.word).split(","):
        token = token.strip()
        if not token:
            continue
        if ":" in token:
            label, _, power = token.partition(":")
            word.append((label.strip(), int(power)))
        else:
            word.append((token, 1))
    result = corollary_6_5_probe(m, word, bound=args.bound, budget=args.budget)
    report["results"].append(result)
    if result.get("witness") is not None:
        report["violations"].append(
            {
                "check": "dimension-witness",
                "bound": args.bound,
                "witness": result["witness"],
                "dim": result["dim"],
                "factors_used": result["factors_used"],
            }
        )


def _cmd_export(args, report, m: QGModel) -> None:
    document = model_to_document(m)
    if args.include_cg:
        pairs = sorted(m.fusion.pairs())
        document["cg"] = cg_supplement_document(m, pairs)
    text = json.dumps(_round12(document), indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", help="builtin name, builtin:<name>, or a model JSON path")
    common.add_argument("--q", type=float, default=0.5, help="deformation parameter for su_q_2")
    common.add_argument("--max-level", type=int, default=8, help="truncation level for su_q_2")
    common.add_argument("--f-diag", help="comma list for free_orthogonal, e.g. 1,1,2")
    common.add_argument("--tol", type=float, default=1e-9, help="numeric tolerance")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument("--trials", type=int, default=1000, help="random trial count")
    common.add_argument(
        "--format", choices=("table", "json", "csv"), default="table", help="report format"
    )
    common.add_argument("--out", help="write the report to this file instead of stdout")

    parser = argparse.ArgumentParser(
        prog="cqg",
        description="Representation calculus for compact quantum groups at desk scale.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("models", parents=[common], help="list built-in models")

    p = sub.add_parser("dims", parents=[common], help="d_t table")
    p.add_argument("--t", default="0,1,2", help="comma list of exponents")
    p.add_argument("--labels", help="comma list of labels (default: all)")

    p = sub.add_parser("spectra", parents=[common], help="spectra, Gamma, quantum dims")
    p.add_argument("--labels", help="comma list of labels (default: all)")

    p = sub.add_parser("fusion", parents=[common], help="fusion decompositions")
    p.add_argument("--left", help="left factor label")
    p.add_argument("--right", help="right factor label")

    p = sub.add_parser("cg", parents=[common], help="Clebsch-Gordan unitarity report")
    p.add_argument("--beta", help="first factor label")
    p.add_argument("--gamma", help="second factor label")

    p = sub.add_parser("verify", parents=[common], help="verification sweeps")
    p.add_argument(
        "what",
        choices=("theorem-5.3", "haar-modular", "symmetry", "frobenius", "growth"),
    )
    p.add_argument("--alpha", help="comma list of labels (default: all)")
    p.add_argument("--beta", help="comma list of labels (default: all)")
    p.add_argument("--probes", type=int, default=2, help="off-grid probe count per pair")
    p.add_argument("--n", default="1,2", help="tensor power list for growth")
    p.add_argument("--t", default="2,3", help="exponent list for growth")

    sub.add_parser("kac", parents=[common], help="Kac detection and degree bound")

    p = sub.add_parser("bounded-degree", parents=[common], help="standard-polynomial test")
    p.add_argument("--r", type=int, help="polynomial degree (default 2 N_G)")
    p.add_argument(
        "--strategy", choices=("auto", "exhaustive", "random"), default="auto"
    )

    p = sub.add_parser("explore", parents=[common], help="theorem machinery walks")
    p.add_argument("what", choices=("main-theorem", "corollary-6.5"))
    p.add_argument("--alpha0", default="1", help="sequence start label")
    p.add_argument("--steps", type=int, default=3, help="number of squarings")
    p.add_argument("--budget", type=int, default=20, help="search budget")
    p.add_argument("--word", default="1:1", help="word letters label:power, comma separated")
    p.add_argument("--bound", type=int, default=20, help="dimension bound to beat")

    p = sub.add_parser("export", parents=[common], help="emit the model document")
    p.add_argument("--include-cg", action="store_true", help="embed CG coefficients")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        needs_model = args.command != "models"
        model = None
        if needs_model or args.model:
            model = _resolve_model(args)
        parameters = {
            "tol": float(args.tol),
            "format": args.format,
        }
        if model is not None and "q" in model.parameters:
            parameters["q"] = model.parameters["q"]
        if model is not None and "max_level" in model.parameters:
            parameters["max_level"] = model.parameters["max_level"]
        command_name = args.command
        if args.command in {"verify", "explore"}:
            command_name = f"{args.command} {args.what}"
        report = _report(command_name, model.name if model else "-", parameters)

        if args.command == "models":
            _cmd_models(args, report, model)
        elif args.command == "dims":
            _cmd_dims(args, report, model)
        elif args.command == "spectra":
            _cmd_spectra(args, report, model)
        elif args.command == "fusion":
            _cmd_fusion(args, report, model)
        elif args.command == "cg":
            _cmd_cg(args, report, model)
        elif args.command == "verify":
            if args.what == "theorem-5.3":
                _cmd_verify_theorem_5_3(args, report, model)
            elif args.what == "haar-modular":
                _cmd_verify_haar_modular(args, report, model)
            elif args.what == "symmetry":
                _cmd_verify_symmetry(args, report, model)
            elif args.what == "frobenius":
                _cmd_verify_frobenius(args, report, model)
            else:
                _cmd_verify_growth(args, report, model)
        elif args.command == "kac":
            _cmd_kac(args, report, model)
        elif args.command == "bounded-degree":
            _cmd_bounded_degree(args, report, model)
        elif args.command == "explore":
            if args.what == "main-theorem":
                _cmd_explore_main_theorem(args, report, model)
            else:
                _cmd_explore_corollary_6_5(args, report, model)
        elif args.command == "export":
            parameters["include_cg"] = bool(args.include_cg)
            _cmd_export(args, report, model)
            return 0
        else:  # pragma: no cover
            raise PreconditionError(f"unknown command {args.command!r}")
    except ModelConsistencyError as exc:
        sys.stderr.write(f"consistency violation: {exc}\n")
        return 1
    except (ModelSchemaError, PreconditionError, TruncationError, CGUnavailableError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2
    _emit(report, args)
    return 1 if report["violations"] else 0


if __name__ == "__main__":
    sys.exit(main())
