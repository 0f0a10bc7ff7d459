"""Command-line entry point: ``projsel <subcommand> ...``."""
import argparse
import json
import sys

from . import matroid as mt
from .bounds import verify_bounds
from .curvature import DEFAULT_SAMPLES, coherence_relaxation, curvature_report
from .harness import GeneratorConfig, generate, run_sweep
from .selectors import Instance, InstanceFormatError, run


class CliError(Exception):
    pass


def _load_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: invalid JSON ({exc})") from None


def _load_instance(path) -> Instance:
    try:
        return Instance.from_json(_load_json(path))
    except InstanceFormatError as exc:
        raise CliError(f"{path}: {exc}") from None


def _emit(args, text):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, default=_json_default) + "\n"


def _json_default(o):
    if hasattr(o, "tolist"):
        return o.tolist()
    if hasattr(o, "item"):
        return o.item()
    raise TypeError(f"cannot serialize {type(o).__name__}")


def cmd_gen(args):
    fields = dict(kind=args.kind, dim=args.dim, n=args.n, K=args.k, seed=args.seed,
                  eta_mode=args.eta_mode, delta=args.delta, name=args.name,
                  epsilon=args.epsilon)
    if args.matroid:
        fields["matroid"] = json.loads(args.matroid)
    try:
        cfg = GeneratorConfig(**fields)
    except ValueError as exc:
        raise CliError(str(exc)) from None
    _emit(args, _dump(generate(cfg, args.index).to_json()))


def cmd_select(args):
    inst = _load_instance(args.instance)
    kwargs = {}
    if args.algorithm == "omp":
        kwargs["literal_residual"] = args.literal_residual
    res = run(inst, args.algorithm, **kwargs)
    _emit(args, _dump(res.to_json()))


def _k(args, inst):
    return args.k if args.k is not None else max(1, inst.matroid.rank_cap)


def cmd_curvature(args):
    inst = _load_instance(args.instance)
    K = _k(args, inst)
    rep = curvature_report(inst, K, args.mode, n_samples=args.samples, seed=args.seed)
    out = rep.to_json()
    out["coherence"] = coherence_relaxation(inst, K).to_json()
    _emit(args, _dump(out))


def cmd_bounds(args):
    inst = _load_instance(args.instance)
    _emit(args, _dump(verify_bounds(inst, args.k).to_json()))


def cmd_sweep(args):
    raw = _load_json(args.config)
    reps = args.reps
    if isinstance(raw, dict):
        reps = raw.get("reps", reps) if args.reps is None else args.reps
        raw = raw.get("configs")
    if not isinstance(raw, list):
        raise CliError(f"{args.config}: configs: expected a list of generator configs")
    configs = []
    for i, obj in enumerate(raw):
        try:
            configs.append(GeneratorConfig.from_json(obj))
        except (ValueError, TypeError) as exc:
            raise CliError(f"{args.config}: configs[{i}].{exc}") from None
    result = run_sweep(configs, reps or 1, workers=args.workers)
    if args.format == "json":
        _emit(args, _dump(result.to_json()))
    else:
        _emit(args, result.to_csv(with_times=not args.no_times))


def cmd_validate(args):
    obj = _load_json(args.matroid)
    try:
        if isinstance(obj, dict) and "matroid" in obj:
            m = mt.from_json(obj["matroid"], ground_size=len(obj.get("ground", [])) or args.n)
        else:
            m = mt.from_json(obj, ground_size=args.n)
        report = mt.validate_axioms(m)
    except mt.GuardError:
        raise
    except (ValueError, TypeError, IndexError) as exc:
        raise CliError(f"{args.matroid}: {exc}") from None
    _emit(args, _dump(report.to_json()))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="projsel", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--out", help="write output to this path instead of stdout")
        return sp

    g = common(sub.add_parser("gen", help="write an instance JSON"))
    g.add_argument("--kind", default="gaussian_dictionary",
                   choices=["orthogonal", "perturbed", "gaussian_dictionary", "paper_example"])
    g.add_argument("--name", help="worked example: fr_counterexample | nonuniform_counterexample")
    g.add_argument("--epsilon", type=float, default=0.1)
    g.add_argument("--dim", type=int, default=8)
    g.add_argument("--n", type=int, default=8)
    g.add_argument("--k", type=int, default=3)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--index", type=int, default=0, help="replicate index within the seed")
    g.add_argument("--delta", type=float, default=0.0)
    g.add_argument("--eta-mode", default="random_unit", choices=["random_unit", "in_span"])
    g.add_argument("--matroid", help="matroid JSON (default: uniform with k)")
    g.set_defaults(func=cmd_gen)

    s = common(sub.add_parser("select", help="run fr / omp / opt on an instance"))
    s.add_argument("instance")
    s.add_argument("--algorithm", choices=["fr", "omp", "opt"], default="fr")
    s.add_argument("--literal-residual", action="store_true",
                   help="OMP: update the residual as r - P(E) instead of eta - P(E)")
    s.set_defaults(func=cmd_select)

    c = common(sub.add_parser("curvature", help="elemental curvatures and principal angle"))
    c.add_argument("instance")
    c.add_argument("--k", type=int)
    c.add_argument("--mode", choices=["exact", "sampled"], default="exact")
    c.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(func=cmd_curvature)

    b = common(sub.add_parser("bounds", help="approximation bounds vs the exhaustive optimum"))
    b.add_argument("instance")
    b.add_argument("--k", type=int)
    b.set_defaults(func=cmd_bounds)

    w = common(sub.add_parser("sweep", help="run a sweep config file"))
    w.add_argument("config")
    w.add_argument("--reps", type=int)
    w.add_argument("--workers", type=int)
    w.add_argument("--format", choices=["csv", "json"], default="csv")
    w.add_argument("--no-times", action="store_true", help="omit the wall_time column")
    w.set_defaults(func=cmd_sweep)

    v = common(sub.add_parser("validate-matroid", help="check the matroid axioms"))
    v.add_argument("matroid", help="matroid JSON or instance JSON")
    v.add_argument("--n", type=int, help="ground size for a bare matroid file")
    v.set_defaults(func=cmd_validate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except (CliError, mt.GuardError) as exc:
        print(f"projsel {args.command}: error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
