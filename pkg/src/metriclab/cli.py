"""metriclab command line.

Exit codes: 0 success, 1 domain violations or failed expectations, 2 input errors.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict
from typing import Sequence

from . import boundedness, chains, convexity, covers
from . import examples as gallery
from .io import InputError, cover_to_dict, dumps, load_cover, load_space
from .space import MetricError

EXIT_OK, EXIT_VIOLATIONS, EXIT_INPUT = 0, 1, 2


class UsageError(Exception):
    pass


def _indices(text: str | None) -> list[int] | None:
    if text is None:
        return None
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated indices, got {text!r}") from exc


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated numbers, got {text!r}") from exc


def _pairs(items: Sequence[str] | None, what: str) -> dict[str, str]:
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"{what} must look like KEY=VALUE, got {item!r}")
        out[key] = value
    return out


def _coerce(value: str):
    for cast in (int, float):
        try:
            return cast(value)
        except ValueError:
            pass
    return value


def _one_of(args, names: Sequence[str]) -> str:
    chosen = [n for n in names if getattr(args, n) not in (None, False)]
    if len(chosen) != 1:
        flags = ", ".join("--" + n.replace("_", "-") for n in names)
        raise UsageError(f"choose exactly one of {flags}")
    return chosen[0]


def _chain_json(c: chains.ChainCertificate | None):
    return None if c is None else {"eps": c.eps, "points": list(c.points), "length": c.length}


def _report_json(rep: covers.LebesgueReport) -> dict:
    out = asdict(rep)
    out["witness"] = None if rep.witness is None else list(rep.witness)
    return out


# --- subcommands -------------------------------------------------------------
# each returns (inputs, results, status)

def cmd_validate(args):
    inputs = {"space": args.space}
    try:
        space = load_space(args.space)
    except MetricError as exc:
        return inputs, {"violations": [asdict(v) for v in exc.violations]}, "violations"
    return inputs, {"n": space.n, "axiom_tol": space.axiom_tol, "violations": []}, "ok"


def cmd_chains(args):
    space = load_space(args.space)
    mode = _one_of(args, ["pair", "components", "threshold", "finite"])
    inputs = {"space": args.space, "eps": args.eps, "mode": mode}
    if mode == "threshold":
        return inputs, {"threshold": chains.chainability_threshold(space)}, "ok"
    if args.eps is None:
        raise UsageError(f"--{mode} needs --eps")
    if mode == "pair":
        x, y = args.pair
        return inputs, {"chain": _chain_json(chains.eps_chain(space, x, y, args.eps))}, "ok"
    if mode == "components":
        return inputs, {"components": [list(p) for p in chains.eps_components(space, args.eps)]}, "ok"
    centers = _indices(args.centers)
    if not centers:
        raise UsageError("--finite needs --centers")
    target = _indices(args.target) or list(range(space.n))
    inputs.update(m=args.finite, centers=centers, target=target, through=args.through)
    cert = chains.finite_chainability_check(space, target, args.eps, args.finite, centers, args.through)
    results = {
        "ok": cert.ok,
        "unreachable": list(cert.unreachable),
        "assignment": {str(p): {"center": c, "chain": _chain_json(ch)} for p, (c, ch) in cert.assignment.items()},
    }
    return inputs, results, "ok" if cert.ok else "violations"


def cmd_nets(args):
    space = load_space(args.space)
    if args.eps is None:
        raise UsageError("nets needs --eps E1,E2,...")
    eps_list = _floats(args.eps)
    target = _indices(args.target)
    inputs = {"space": args.space, "eps": eps_list, "target": target}
    scales = []
    for eps in eps_list:
        net = boundedness.greedy_eps_net(space, eps, target)
        pack = boundedness.max_separated_subset(space, eps, target)
        scales.append({"eps": eps, "net_size": len(net.centers), "net_centers": list(net.centers),
                       "packing_size": len(pack.indices), "packing": list(pack.indices)})
    return inputs, {"scales": scales}, "ok"


def cmd_cover(args):
    space = load_space(args.space)
    mode = _one_of(args, ["lebesgue", "local_finite", "subcover", "adversarial", "witness"])
    inputs = {"space": args.space, "cover": args.cover, "mode": mode}
    if mode == "adversarial":
        sep = boundedness.max_separated_subset(space, args.adversarial)
        if len(sep.indices) < 2:
            return inputs, {"error": f"no pair of points more than {args.adversarial} apart"}, "violations"
        cover = covers.adversarial_cover(space, sep)
        prof = covers.local_finiteness_profile(space, cover, args.adversarial / 8)
        results = {"separated": list(sep.indices), "cover": cover_to_dict(cover),
                   "covers": covers.covers_check(space, cover) is None,
                   "max_incidence": prof.max_incidence, "delta": prof.delta}
        if args.alpha is not None:
            w = covers.lebesgue_witness(space, cover, args.alpha, args.search_limit)
            results["witness"] = None if w is None else list(w)
        return inputs, results, "ok"
    if args.cover is None:
        raise UsageError(f"--{mode.replace('_', '-')} needs --cover")
    cover = load_cover(args.cover)
    miss = covers.covers_check(space, cover)
    if mode == "lebesgue":
        if miss is not None:
            return inputs, {"uncovered": miss}, "violations"
        return inputs, _report_json(covers.lebesgue_exact(space, cover, args.search_limit)), "ok"
    if mode == "witness":
        inputs["alpha"] = args.witness
        w = covers.lebesgue_witness(space, cover, args.witness, args.search_limit)
        return inputs, {"alpha": args.witness, "witness": None if w is None else list(w)}, "ok"
    if mode == "local_finite":
        prof = covers.local_finiteness_profile(space, cover, args.local_finite)
        return inputs, {"delta": prof.delta, "counts": {str(k): v for k, v in prof.counts.items()},
                        "max_incidence": prof.max_incidence}, "ok"
    B = _indices(args.subcover)
    res = covers.finite_subcover(space, cover, B)
    return inputs, {"subcover": res.labels, "uncovered": res.uncovered}, "ok" if res.ok else "violations"


def cmd_convexity(args):
    space = load_space(args.space)
    if args.check is None or args.tol is None:
        raise UsageError("convexity needs --check and --tol")
    inputs = {"space": args.space, "check": args.check, "tol": args.tol}
    if args.check == "p":
        rep = convexity.property_p_check(space, args.tol)
    elif args.check == "menger":
        rep = convexity.menger_check(space, args.tol, threads=args.threads)
    else:
        rep = convexity.metric_convexity_check(space, args.tol)
    results = {"kind": rep.kind, "tol": rep.tol, "holds": rep.holds, "violations": rep.violations}
    return inputs, results, "ok" if rep.holds else "violations"


def _bundle_json(bundle: gallery.ExampleBundle, results: list[gallery.ExpectationResult]) -> dict:
    return {
        "name": bundle.name,
        "params": bundle.params,
        "points": bundle.space.n,
        "provenance": bundle.provenance,
        "notes": bundle.notes,
        "claims": [asdict(r) for r in results],
    }


def _run_bundle(name: str, params: dict, overrides: dict[str, float]):
    bundle = gallery.build(name, **params)
    return _bundle_json(bundle, bundle.run(overrides))


def cmd_examples(args):
    if args.list:
        listing = [{"name": n, "presets": {s: gallery.PRESETS[s][n] for s in gallery.PRESETS}}
                   for n in gallery.GENERATORS]
        return {"list": True}, {"examples": listing}, "ok"
    if not args.run:
        raise UsageError("examples needs --list or --run NAME")
    if args.run not in gallery.GENERATORS:
        raise UsageError(f"unknown example {args.run!r}")
    params = dict(gallery.PRESETS["small"][args.run])
    params.update({k: _coerce(v) for k, v in _pairs(args.param, "--param").items()})
    overrides = {k: float(v) for k, v in _pairs(args.override_tol, "--override-tol").items()}
    try:
        res = _run_bundle(args.run, params, overrides)
    except TypeError as exc:
        raise UsageError(f"bad parameters for {args.run}: {exc}") from exc
    failed = [c["claim_id"] for c in res["claims"] if not c["passed"]]
    return {"run": args.run, "params": params}, {"bundle": res, "failed": failed}, "violations" if failed else "ok"


def cmd_verify_paper(args):
    scale = args.scale
    overrides = {k: float(v) for k, v in _pairs(args.override_tol, "--override-tol").items()}
    jobs = list(gallery.PRESETS[scale].items())
    workers = max(1, min(args.threads, len(jobs)))
    if workers == 1:
        bundles = [_run_bundle(n, p, overrides) for n, p in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            bundles = list(pool.map(lambda job: _run_bundle(job[0], job[1], overrides), jobs))
    table = [(c["claim_id"], c["passed"]) for b in bundles for c in b["claims"]]
    failed = [cid for cid, ok in table if not ok]
    width = max(len(cid) for cid, _ in table)
    for cid, ok in table:
        print(f"{cid:<{width}}  {'PASS' if ok else 'FAIL'}", file=sys.stderr)
    inputs = {"scale": scale, "overrides": overrides}
    return inputs, {"bundles": bundles, "failed": failed}, "violations" if failed else "ok"


COMMANDS = {
    "validate": cmd_validate,
    "chains": cmd_chains,
    "nets": cmd_nets,
    "cover": cmd_cover,
    "convexity": cmd_convexity,
    "examples": cmd_examples,
    "verify-paper": cmd_verify_paper,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="format", action="store_const", const="json", help="JSON output (default)")
    fmt.add_argument("--text", dest="format", action="store_const", const="text", help="plain text output")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1)
    common.add_argument("--timing", action="store_true", help="include duration_ms in the report")
    common.set_defaults(format="json")

    parser = argparse.ArgumentParser(prog="metriclab", description="Lebesgue numbers, chains and convexity "
                                     "on finite metric spaces.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check the metric axioms of a space file")
    p.add_argument("--space", required=True)

    p = sub.add_parser("chains", parents=[common], help="eps-chains, components, threshold")
    p.add_argument("--space", required=True)
    p.add_argument("--eps", type=float)
    p.add_argument("--pair", type=int, nargs=2, metavar=("I", "J"))
    p.add_argument("--components", action="store_true")
    p.add_argument("--threshold", action="store_true")
    p.add_argument("--finite", type=int, metavar="M", help="finite chainability with chain length M")
    p.add_argument("--centers")
    p.add_argument("--target")
    p.add_argument("--through", choices=["whole-space", "target-only"], default="whole-space")

    p = sub.add_parser("nets", parents=[common], help="greedy nets and packings at several scales")
    p.add_argument("--space", required=True)
    p.add_argument("--eps")
    p.add_argument("--target")

    p = sub.add_parser("cover", parents=[common], help="Lebesgue numbers, local finiteness, subcovers")
    p.add_argument("--space", required=True)
    p.add_argument("--cover")
    p.add_argument("--lebesgue", action="store_true")
    p.add_argument("--witness", type=float, metavar="ALPHA")
    p.add_argument("--local-finite", type=float, metavar="DELTA")
    p.add_argument("--subcover", metavar="I,J,...")
    p.add_argument("--adversarial", type=float, metavar="EPS")
    p.add_argument("--alpha", type=float)
    p.add_argument("--delta", type=float, help="alias for --local-finite")
    p.add_argument("--search-limit", type=int, default=covers.DEFAULT_SEARCH_LIMIT)

    p = sub.add_parser("convexity", parents=[common], help="property P, Menger and metric convexity")
    p.add_argument("--space", required=True)
    p.add_argument("--check", choices=["p", "menger", "metric"])
    p.add_argument("--tol", type=float)

    p = sub.add_parser("examples", parents=[common], help="list or run example bundles")
    p.add_argument("--list", action="store_true")
    p.add_argument("--run", metavar="NAME")
    p.add_argument("--param", action="append", metavar="K=V")
    p.add_argument("--override-tol", action="append", metavar="CLAIM=TOL")

    p = sub.add_parser("verify-paper", parents=[common], help="run every example bundle at a preset scale")
    size = p.add_mutually_exclusive_group()
    for s in ("small", "medium", "large"):
        size.add_argument(f"--{s}", dest="scale", action="store_const", const=s)
    size.add_argument("--scale", choices=["small", "medium", "large"])
    p.add_argument("--override-tol", action="append", metavar="CLAIM=TOL",
                   help="replace a claim's tolerance (fault injection)")
    p.set_defaults(scale="small")
    return parser


def _scalar(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    return str(v)


def _text(obj, indent: int = 0) -> list[str]:
    """Indented key: value rendering; lists of scalars stay on one line."""
    pad = "  " * indent
    lines = []
    if isinstance(obj, dict):
        for k in sorted(obj, key=str):
            v = obj[k]
            if isinstance(v, dict) and v or isinstance(v, list) and any(isinstance(x, (dict, list)) for x in v):
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}-")
                lines.extend(_text(v, indent + 1))
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(f"{pad}{_scalar(obj)}")
    return lines


def _echo_inputs(args) -> dict:
    skip = {"command", "format", "threads", "timing"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v not in (None, False)}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    if getattr(args, "delta", None) is not None and getattr(args, "local_finite", None) is None:
        args.local_finite = args.delta
    if getattr(args, "alpha", None) is not None and args.command == "cover" and args.witness is None \
            and args.adversarial is None and not args.lebesgue and args.local_finite is None and not args.subcover:
        args.witness = args.alpha

    start = time.perf_counter()
    try:
        inputs, results, status = COMMANDS[args.command](args)
        code = EXIT_OK if status == "ok" else EXIT_VIOLATIONS
    except MetricError as exc:
        inputs, results, status, code = _echo_inputs(args), {"violations": [asdict(v) for v in exc.violations]}, "violations", \
            EXIT_VIOLATIONS
    except covers.CoverError as exc:
        inputs, results, status, code = _echo_inputs(args), {"error": str(exc)}, "violations", EXIT_VIOLATIONS
    except (InputError, UsageError, ValueError, IndexError, covers.SearchLimitExceeded) as exc:
        inputs, results, status, code = _echo_inputs(args), {"error": str(exc)}, "error", EXIT_INPUT

    report = {"command": args.command, "inputs": inputs, "results": results, "status": status}
    if args.timing:
        report["duration_ms"] = int(round((time.perf_counter() - start) * 1000))
    if args.format == "text":
        print("\n".join(_text(report)))
    else:
        print(dumps(report))
    return code


if __name__ == "__main__":
    sys.exit(main())
