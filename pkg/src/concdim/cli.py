"""Command-line interface: dataset generation, invariants, experiments.

Exit codes: 0 success, 2 input error, 3 resource limit, 4 internal
invariant violation, 5 unwritable output location.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .concentration import (
    ORACLE_LIMIT,
    alpha_exact,
    alpha_exact_profile,
    alpha_lower,
    default_kappa_grid,
    observable_diameter,
    sep_exact,
    sep_exact_profile,
    sep_hamming_analytic,
    sep_lower,
)
from .covering import covering_profile, greedy_net, sample_size_bound, CoveringProfile
from .dimension import dimension_report
from .errors import InputError, InvariantViolation, ResourceLimitError
from .experiments import RNG_ALGORITHM, EXPERIMENT_NAMES, ExperimentSpec, run as run_experiment
from .features import dictionary as make_dictionary
from .mmspace import (
    GeneratorSpec,
    MMSpace,
    generate,
    load_distance_csv,
    load_points_csv,
)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_LIMIT = 3
EXIT_INVARIANT = 4
EXIT_OUTPUT = 5


def _parse_value(text: str):
    if "," in text:
        return [_parse_value(part) for part in text.split(",") if part != ""]
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            continue
    return text


def _parse_params(pairs: list[str]) -> dict:
    out = {}
    for item in pairs or []:
        if "=" not in item:
            raise InputError(f"--param expects key=value, got {item!r}")
        key, val = item.split("=", 1)
        out[key.strip()] = _parse_value(val.strip())
    return out


def _load_space(args) -> MMSpace:
    given = [x is not None for x in (args.points, args.dist, args.family)]
    if sum(given) != 1:
        raise InputError("provide exactly one of --points, --dist, --family")
    if args.points is not None:
        return load_points_csv(args.points, metric=args.metric)
    if args.dist is not None:
        return load_distance_csv(args.dist)
    spec = GeneratorSpec(args.family, args.seed, _parse_params(args.param))
    return generate(spec)


def _out_dir(args) -> Path:
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write_probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise _Unwritable(f"output directory {out} is not writable: {exc}") from exc
    return out


class _Unwritable(Exception):
    pass


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True, indent=2)
        fh.write("\n")


def _base_manifest(args, **extra) -> dict:
    info = {
        "package_version": __version__,
        "rng_algorithm": RNG_ALGORITHM,
        "command": args.command,
        "seed": getattr(args, "seed", None),
    }
    info.update(extra)
    return info


def _space_provenance(args, space: MMSpace) -> dict:
    if args.family is not None:
        return {"generator": GeneratorSpec(args.family, args.seed,
                                           _parse_params(args.param)).to_json_dict()}
    return {"input_file": args.points or args.dist, "n": space.n}


def _make_features(space: MMSpace, spec: str, seed: int):
    if ":" in spec:
        kind, k = spec.split(":", 1)
        return make_dictionary(space, kind, k=int(k), seed=seed)
    return make_dictionary(space, spec, seed=seed)


def _cmd_gen(args) -> int:
    out = _out_dir(args)
    spec = GeneratorSpec(args.family, args.seed, _parse_params(args.param))
    space = generate(spec)
    path = out / "points.csv"
    import csv

    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow([f"x{i}" for i in range(space.coords.shape[1])])
        for row in space.coords:
            w.writerow([repr(float(v)) for v in row])
    _write_json(out / "manifest.json", _base_manifest(
        args, generator=spec.to_json_dict(), n=space.n,
        metric=space.metric, outputs=["points.csv"], weights="uniform"))
    print(f"wrote {path} (n={space.n}, metric={space.metric})")
    return EXIT_OK


def _cmd_alpha(args) -> int:
    out = _out_dir(args)
    space = _load_space(args)
    mode = args.mode
    if mode == "auto":
        mode = "exact" if space.n <= ORACLE_LIMIT else "heuristic"
    grid = np.asarray(args.grid, dtype=float) if args.grid else None
    if mode == "exact":
        profile = alpha_exact_profile(space, grid)
    else:
        feats = _make_features(space, args.dictionary, args.seed)
        profile = alpha_lower(space, grid, dictionary=feats)
    profile.to_csv(out / "alpha.csv")
    payload = _base_manifest(args, **_space_provenance(args, space),
                             profile=profile.metadata(), outputs=["alpha.csv"])
    if args.eps is not None:
        if mode == "exact":
            payload["alpha_at_eps"] = {"eps": args.eps,
                                       "alpha": alpha_exact(space, args.eps)}
        else:
            # certified direction: report the bound at the next grid point,
            # which alpha at the requested eps dominates
            idx = int(np.searchsorted(profile.eps_grid, args.eps, side="left"))
            idx = min(idx, profile.alpha.size - 1)
            payload["alpha_at_eps"] = {"eps": args.eps,
                                       "alpha": float(profile.alpha[idx])}
    _write_json(out / "alpha.json", payload)
    print(f"mode: {profile.mode}")
    print(f"wrote {out / 'alpha.csv'}")
    return EXIT_OK


def _cmd_sep(args) -> int:
    out = _out_dir(args)
    if args.analytic_d is not None:
        if args.kappa is None:
            raise InputError("--analytic-d requires --kappa")
        val = sep_hamming_analytic(args.analytic_d, args.kappa)
        _write_json(out / "sep.json", _base_manifest(
            args, mode="analytic", d=args.analytic_d,
            kappa=args.kappa, sep=val))
        print(f"mode: analytic\nsep_{args.kappa}(hamming_cube({args.analytic_d})) = {val}")
        return EXIT_OK
    space = _load_space(args)
    mode = args.mode
    if mode == "auto":
        mode = "exact" if space.n <= ORACLE_LIMIT else "heuristic"
    grid = np.asarray(args.grid, dtype=float) if args.grid else default_kappa_grid()
    if mode == "exact":
        profile = sep_exact_profile(space, grid)
    else:
        profile = sep_lower(space, grid, restarts=args.restarts, seed=args.seed)
    profile.to_csv(out / "sep.csv")
    payload = _base_manifest(args, **_space_provenance(args, space),
                             profile=profile.metadata(), outputs=["sep.csv"])
    if args.kappa is not None:
        if mode == "exact":
            payload["sep_at_kappa"] = {"kappa": args.kappa,
                                       "sep": sep_exact(space, args.kappa)}
        else:
            idx = int(np.searchsorted(profile.kappa_grid, args.kappa - 1e-12))
            payload["sep_at_kappa"] = {"kappa": args.kappa,
                                       "sep": float(profile.sep[min(idx, profile.sep.size - 1)])}
        print(f"sep at kappa={args.kappa}: {payload['sep_at_kappa']['sep']}")
    _write_json(out / "sep.json", payload)
    print(f"mode: {profile.mode}")
    print(f"wrote {out / 'sep.csv'}")
    return EXIT_OK


def _cmd_obsdiam(args) -> int:
    out = _out_dir(args)
    space = _load_space(args)
    feats = _make_features(space, args.dictionary, args.seed)
    val = observable_diameter(space, args.kappa, feats)
    _write_json(out / "obsdiam.json", _base_manifest(
        args, **_space_provenance(args, space), kappa=args.kappa,
        dictionary=args.dictionary, observable_diameter=val,
        mode="lower_bound"))
    print(f"mode: lower_bound\nobservable diameter at kappa={args.kappa}: {val}")
    return EXIT_OK


def _cmd_dims(args) -> int:
    out = _out_dir(args)
    space = _load_space(args)
    if space.n <= ORACLE_LIMIT:
        alpha_profile = alpha_exact_profile(space)
        sep_profile = sep_exact_profile(space)
    else:
        feats = _make_features(space, args.dictionary, args.seed)
        alpha_profile = alpha_lower(space, dictionary=feats)
        sep_profile = sep_lower(space, restarts=args.restarts, seed=args.seed)
    report = dimension_report(space, alpha_profile, sep_profile)
    _write_json(out / "dimensions.json", _base_manifest(
        args, **_space_provenance(args, space), report=report.to_json_dict()))
    print(f"modes: alpha={alpha_profile.mode}, sep={sep_profile.mode}")
    print(json.dumps(report.to_json_dict(), sort_keys=True, indent=2))
    return EXIT_OK


def _cmd_emd(args) -> int:
    out = _out_dir(args)
    space = load_distance_csv(args.space) if args.space.endswith(".csv") else None
    if space is None:
        raise InputError("--space must be a distance-matrix CSV")
    mu = np.loadtxt(args.mu, delimiter=",", ndmin=1)
    nu = np.loadtxt(args.nu, delimiter=",", ndmin=1)
    from .transport import emd as solve_emd

    plan = solve_emd(space, mu, nu)
    plan.to_csv(out / "plan.csv")
    _write_json(out / "emd.json", _base_manifest(
        args, space=args.space, cost=plan.cost,
        dconc_upper=float(np.sqrt(plan.cost)),
        marginal_residuals=list(plan.marginal_residuals),
        outputs=["plan.csv"]))
    print(f"emd cost: {plan.cost}")
    print(f"dconc upper bound (sqrt cost): {float(np.sqrt(plan.cost))}")
    return EXIT_OK


def _cmd_net(args) -> int:
    out = _out_dir(args)
    space = _load_space(args)
    if args.grid:
        profile = covering_profile(space, np.asarray(args.grid, dtype=float))
        profile.to_csv(out / "covering.csv")
        _write_json(out / "net.json", _base_manifest(
            args, **_space_provenance(args, space), outputs=["covering.csv"]))
        print(f"wrote {out / 'covering.csv'}")
        return EXIT_OK
    if args.radius is None:
        raise InputError("net requires --radius or --grid")
    ids = greedy_net(space, args.radius)
    _write_json(out / "net.json", _base_manifest(
        args, **_space_provenance(args, space), radius=args.radius,
        net_size=int(ids.size), net_ids=[int(i) for i in ids]))
    print(f"net size at radius {args.radius}: {ids.size}")
    return EXIT_OK


def _cmd_bound(args) -> int:
    out = _out_dir(args)
    rows = np.loadtxt(args.cover, delimiter=",", skiprows=1, ndmin=2)
    profile = CoveringProfile(rows[:, 0], rows[:, 1].astype(int),
                              rows[:, 2].astype(int))
    n = sample_size_bound(args.eps, args.delta, profile, args.constant_C)
    _write_json(out / "bound.json", _base_manifest(
        args, eps=args.eps, delta=args.delta, constant_C=args.constant_C,
        cover=args.cover, sample_size=n))
    print(f"sample-size bound: {n}")
    print("caveat: the multiplicative constant C is not fixed by the theory; "
          f"this bound uses C={args.constant_C}")
    return EXIT_OK


def _cmd_experiment(args) -> int:
    out = _out_dir(args)
    spec = ExperimentSpec(args.name, args.seed, _parse_params(args.param))
    manifest = run_experiment(spec, out)
    print(f"experiment {args.name}: wrote {out / 'manifest.json'}")
    for name in manifest["summary"].get("curves", []):
        print(f"  curve: {out / name}")
    return EXIT_OK


def _add_space_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--points", help="point-cloud CSV (optional header; "
                                    "weight column allowed)")
    p.add_argument("--dist", help="distance-matrix CSV")
    p.add_argument("--family", help="generator family instead of a file")
    p.add_argument("--param", action="append", default=[],
                   help="generator parameter key=value (repeatable)")
    p.add_argument("--metric", default="euclidean",
                   choices=["euclidean", "normalized_hamming"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=".", help="output directory")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="concdim",
        description="Concentration invariants and intrinsic dimensions of "
                    "finite metric measure spaces.")
    ap.add_argument("--version", action="version", version=f"concdim {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a synthetic space as CSV")
    p.add_argument("--family", required=True)
    p.add_argument("--param", action="append", default=[])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=".")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("alpha", help="concentration profile")
    _add_space_options(p)
    p.add_argument("--mode", default="auto", choices=["auto", "exact", "heuristic"])
    p.add_argument("--eps", type=float, help="also report alpha at this eps")
    p.add_argument("--grid", type=float, nargs="*", help="explicit eps grid")
    p.add_argument("--dictionary", default="anchors_random:32")
    p.set_defaults(func=_cmd_alpha)

    p = sub.add_parser("sep", help="separation profile")
    _add_space_options(p)
    p.add_argument("--mode", default="auto", choices=["auto", "exact", "heuristic"])
    p.add_argument("--kappa", type=float, help="also report sep at this kappa")
    p.add_argument("--grid", type=float, nargs="*", help="explicit kappa grid")
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--analytic-d", type=int,
                   help="exact Hamming-cube value for this d (no input space)")
    p.set_defaults(func=_cmd_sep)

    p = sub.add_parser("obsdiam", help="observable diameter via a dictionary")
    _add_space_options(p)
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--dictionary", default="anchors_random:32")
    p.set_defaults(func=_cmd_obsdiam)

    p = sub.add_parser("dims", help="dimension report (all functionals)")
    _add_space_options(p)
    p.add_argument("--dictionary", default="anchors_random:32")
    p.add_argument("--restarts", type=int, default=8)
    p.set_defaults(func=_cmd_dims)

    p = sub.add_parser("emd", help="exact transport distance between measures")
    p.add_argument("--space", required=True, help="distance-matrix CSV")
    p.add_argument("--mu", required=True, help="first weight vector CSV")
    p.add_argument("--nu", required=True, help="second weight vector CSV")
    p.add_argument("--out", default=".")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_emd)

    p = sub.add_parser("net", help="greedy net / covering profile")
    _add_space_options(p)
    p.add_argument("--radius", type=float)
    p.add_argument("--grid", type=float, nargs="*")
    p.set_defaults(func=_cmd_net)

    p = sub.add_parser("bound", help="sampling-size bound from a covering profile")
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--constant-C", type=float, default=1.0, dest="constant_C")
    p.add_argument("--cover", required=True, help="covering-profile CSV")
    p.add_argument("--out", default=".")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser("experiment", help="run a named reproduction experiment")
    p.add_argument("--name", required=True,
                   help=f"one of {', '.join(EXPERIMENT_NAMES)}")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--param", action="append", default=[])
    p.add_argument("--out", default=".")
    p.set_defaults(func=_cmd_experiment)

    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except InvariantViolation as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except _Unwritable as exc:
        print(f"output error: {exc}", file=sys.stderr)
        return EXIT_OUTPUT
    except (OSError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
