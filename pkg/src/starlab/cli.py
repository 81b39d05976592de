"""Command-line front end and experiment orchestration.

Exit codes: 0 success, 1 verification VIOLATION (or a probe failure at a
met premise), 2 usage or parameter errors, 3 resource guards or budget
exhaustion.  Errors are additionally emitted as structured JSON on
stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field

from . import familyio, generators, solver
from .bounds import c_threshold, star_ratio, threshold_holds
from .core import SetFamily, largest_stars
from .errors import (
    EncodingError,
    ParameterError,
    ParseError,
    ResourceError,
    StarlabError,
)

COMMANDS = ("gen", "stars", "bounds", "solve", "classify", "verify", "probe")
FORMATS = ("json", "csv")

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3


@dataclass(frozen=True)
class ExperimentConfig:
    """One resolved CLI invocation."""

    command: str
    options: dict = field(default_factory=dict)
    limits: solver.SearchLimits = field(default_factory=solver.SearchLimits)
    fmt: str = "json"
    output: str | None = None
    seed: int = solver.DEFAULT_SEED

    def __post_init__(self) -> None:
        if self.command not in COMMANDS:
            raise ParameterError(f"unknown command {self.command!r}")
        if self.fmt not in FORMATS:
            raise ParameterError(f"unknown output format {self.fmt!r}")


def _add_limit_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--node-budget", type=int, default=None)
    sub.add_argument("--time-budget", type=float, default=None, metavar="SECONDS")
    sub.add_argument("--parallel", type=int, default=1)
    sub.add_argument("--witness-cap", type=int, default=solver.DEFAULT_WITNESS_CAP)


def _add_output_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("-o", "--out", default=None)
    sub.add_argument("--format", choices=FORMATS, default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="starlab",
        description="exact toolkit for cross-t-intersecting set families",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    gen = subs.add_parser("gen", help="generate a family and write family JSON")
    gen.add_argument("cls", choices=generators.CLASS_TAGS, metavar="class")
    gen.add_argument("--n", type=int)
    gen.add_argument("--r", type=int)
    gen.add_argument("--m", type=int)
    gen.add_argument("--t", type=int)
    gen.add_argument("--base", help="family JSON to build sequences/permutations over")
    gen.add_argument("--single", type=int, metavar="N",
                     help="use the one-member base family {[N]}")
    gen.add_argument("--cap", type=int, default=generators.DEFAULT_MEMBER_CAP)
    gen.add_argument("--max-n", type=int, default=generators.DEFAULT_PARTITION_CAP)
    gen.add_argument("--r-list", help="comma-separated sizes for example1")
    gen.add_argument("--q-list", help="comma-separated petal counts for example1")
    _add_output_flags(gen)

    stars = subs.add_parser("stars", help="largest t-star report for a family")
    stars.add_argument("--family", required=True)
    stars.add_argument("--t", type=int, required=True)
    _add_output_flags(stars)

    bounds = subs.add_parser("bounds", help="threshold record {c, l_t, l_t1, ratio, holds}")
    bounds.add_argument("--family", required=True)
    bounds.add_argument("--r", type=int, required=True)
    bounds.add_argument("--s", type=int, required=True)
    bounds.add_argument("--t", type=int, required=True)
    _add_output_flags(bounds)

    solve = subs.add_parser("solve", help="exact maximum-product cross-t search")
    solve.add_argument("--a")
    solve.add_argument("--b")
    solve.add_argument("--families", nargs="+")
    solve.add_argument("--t", type=int, required=True)
    _add_limit_flags(solve)
    _add_output_flags(solve)

    classify = subs.add_parser("classify", help="cross-t-star property verdicts")
    classify.add_argument("--families", nargs="+", required=True)
    classify.add_argument("--t", type=int, required=True)
    _add_limit_flags(classify)
    _add_output_flags(classify)

    verify = subs.add_parser("verify", help="product-bound verification")
    verify.add_argument("target", choices=("main",))
    verify.add_argument("--class", dest="cls", choices=generators.CLASS_TAGS)
    verify.add_argument("--n", type=int)
    verify.add_argument("--p", type=int, help="member size for the chosen class")
    verify.add_argument("--m", type=int)
    verify.add_argument("--a")
    verify.add_argument("--b")
    verify.add_argument("--t", type=int, required=True)
    verify.add_argument("--r", type=int)
    verify.add_argument("--s", type=int)
    _add_limit_flags(verify)
    _add_output_flags(verify)

    probe = subs.add_parser("probe", help="empirical threshold probe over a corpus")
    probe.add_argument("--r", type=int, required=True)
    probe.add_argument("--s", type=int, required=True)
    probe.add_argument("--t", type=int, required=True)
    probe.add_argument("--spec", help="corpus spec JSON file")
    probe.add_argument("--class", dest="cls", help="single corpus class")
    probe.add_argument("--param", action="append", default=[],
                       metavar="NAME=V|NAME=LO:HI", help="repeatable class parameter")
    probe.add_argument("--seed", type=int, default=solver.DEFAULT_SEED)
    _add_limit_flags(probe)
    _add_output_flags(probe)

    return parser


def parse_args(argv: list[str] | None = None) -> ExperimentConfig:
    namespace = build_parser().parse_args(argv)
    options = vars(namespace).copy()
    command = options.pop("command")
    fmt = options.pop("format", "json")
    output = options.pop("out", None)
    seed = options.pop("seed", solver.DEFAULT_SEED)
    limits = solver.SearchLimits(
        node_budget=options.pop("node_budget", None),
        time_budget_s=options.pop("time_budget", None),
        parallelism=options.pop("parallel", 1),
        witness_cap=options.pop("witness_cap", solver.DEFAULT_WITNESS_CAP),
    )
    return ExperimentConfig(
        command=command, options=options, limits=limits, fmt=fmt,
        output=output, seed=seed,
    )


def _emit(config: ExperimentConfig, report: dict) -> None:
    payload = familyio.emit_report(report, config.fmt, config.output)
    if config.output is None:
        sys.stdout.write(payload.decode("utf-8"))


def _need(options: dict, *names: str) -> list:
    missing = [name for name in names if options.get(name) is None]
    if missing:
        raise ParameterError(f"missing required option(s): {', '.join(missing)}")
    return [options[name] for name in names]


def _int_list(raw: str, flag: str) -> list[int]:
    try:
        return [int(part) for part in raw.split(",") if part != ""]
    except ValueError as exc:
        raise ParameterError(f"{flag} must be a comma-separated integer list") from exc


def _load(path: str) -> SetFamily:
    return familyio.load_family(path).family


def _run_gen(config: ExperimentConfig) -> int:
    opts = config.options
    cls = opts["cls"]
    if cls == "example1":
        _need(opts, "t", "r_list", "q_list")
        r_values = _int_list(opts["r_list"], "--r-list")
        q_values = _int_list(opts["q_list"], "--q-list")
        families = generators.gen_example1(opts["t"], r_values, q_values)
        meta_base = {"t": opts["t"], "r": r_values, "q": q_values}
        if config.output is None:
            docs = [
                familyio.family_to_dict(
                    fam, {"class": cls, "params": {**meta_base, "block": i + 1}}
                )
                for i, fam in enumerate(families)
            ]
            sys.stdout.write(familyio.canonical_json_bytes(docs).decode("utf-8"))
        else:
            for i, fam in enumerate(families):
                familyio.save_family(
                    fam,
                    f"{config.output}.{i + 1}.json",
                    {"class": cls, "params": {**meta_base, "block": i + 1}},
                )
        return EXIT_OK

    if cls in ("sequences", "permutations"):
        (m,) = _need(opts, "m")
        if opts.get("base"):
            base = _load(opts["base"])
            params = {"m": m}
        elif opts.get("single") is not None:
            base = generators.single_set_family(opts["single"])
            params = {"n": opts["single"], "m": m}
        else:
            raise ParameterError(f"class {cls!r} needs --base or --single")
        builder = generators.gen_sequences if cls == "sequences" else generators.gen_permutations
        family = builder(base, m, member_cap=opts["cap"])
    elif cls == "powerset":
        (n,) = _need(opts, "n")
        family = generators.gen_powerset(n)
        params = {"n": n}
    elif cls == "partitions":
        n, r = _need(opts, "n", "r")
        family = generators.gen_partitions(n, r, max_n=opts["max_n"])
        params = {"n": n, "r": r}
    else:
        n, r = _need(opts, "n", "r")
        family = generators.generate(
            generators.ClassParams(cls=cls, params={"n": n, "r": r})
        )
        params = {"n": n, "r": r}

    payload = familyio.family_to_json_bytes(family, {"class": cls, "params": params})
    if config.output is None:
        sys.stdout.write(payload.decode("utf-8"))
    else:
        with open(config.output, "wb") as handle:
            handle.write(payload)
    return EXIT_OK


def _run_stars(config: ExperimentConfig) -> int:
    family = _load(config.options["family"])
    report = largest_stars(family, config.options["t"])
    doc = {
        "format_version": familyio.FORMAT_VERSION,
        "kind": "stars",
        "t": str(report.t),
        "l_value": str(report.l_value),
        "witness_count": str(len(report.witnesses)),
        "witnesses": [list(w.indices()) for w in report.witnesses],
        "witness_labels": [list(w.labels()) for w in report.witnesses],
    }
    _emit(config, doc)
    return EXIT_OK


def _run_bounds(config: ExperimentConfig) -> int:
    opts = config.options
    family = _load(opts["family"])
    verdict = threshold_holds(family, opts["r"], opts["s"], opts["t"])
    ratio = star_ratio(family, opts["t"])
    doc = {
        "format_version": familyio.FORMAT_VERSION,
        "kind": "bounds",
        "r": str(opts["r"]),
        "s": str(opts["s"]),
        "t": str(opts["t"]),
        "c": str(verdict.c_value),
        "l_t": str(verdict.l_t),
        "l_t1": str(verdict.l_t1),
        "ratio": familyio.ratio_dict(ratio),
        "holds": verdict.holds,
    }
    _emit(config, doc)
    return EXIT_OK


def _solve_families(config: ExperimentConfig) -> list[SetFamily]:
    opts = config.options
    if opts.get("families"):
        if opts.get("a") or opts.get("b"):
            raise ParameterError("use either --a/--b or --families, not both")
        paths = opts["families"]
    else:
        _need(opts, "a", "b")
        paths = [opts["a"], opts["b"]]
    if len(paths) < 2:
        raise ParameterError("need at least two families to solve")
    return [_load(path) for path in paths]


def _run_solve(config: ExperimentConfig) -> int:
    families = _solve_families(config)
    t = config.options["t"]
    if len(families) == 2:
        result = solver.max_product_pair(
            solver.build_instance(families[0], families[1], t), config.limits
        )
    else:
        result = solver.max_product_tuple(families, t, config.limits)
    doc = {
        "format_version": familyio.FORMAT_VERSION,
        "kind": "solve",
        "t": str(t),
        "family_sizes": [str(len(fam.members)) for fam in families],
        **familyio.solve_result_dict(result),
    }
    _emit(config, doc)
    return EXIT_OK if result.optimal else EXIT_RESOURCE


def _run_classify(config: ExperimentConfig) -> int:
    families = [_load(path) for path in config.options["families"]]
    if len(families) < 2:
        raise ParameterError("classification needs at least two families")
    report = solver.classify_properties(families, config.options["t"], config.limits)
    doc = {
        "format_version": familyio.FORMAT_VERSION,
        "kind": "classify",
        **familyio.property_report_dict(report),
    }
    _emit(config, doc)
    return EXIT_RESOURCE if report.inconclusive else EXIT_OK


_VERIFY_DEFAULT_BOUND_PARAM = {
    "level": "p",
    "multisets": "p",
    "compositions": "p",
    "partitions": "p",
    "sequences": "n",
    "permutations": "n",
    "powerset": "n",
}


def _verify_families(config: ExperimentConfig) -> tuple[SetFamily, SetFamily, int, int]:
    opts = config.options
    if opts.get("a") or opts.get("b"):
        _need(opts, "a", "b")
        left, right = _load(opts["a"]), _load(opts["b"])
        r = opts["r"] if opts.get("r") is not None else left.max_size
        s = opts["s"] if opts.get("s") is not None else right.max_size
        return left, right, r, s
    cls = opts.get("cls")
    if not cls:
        raise ParameterError("verify needs --a/--b files or a --class")
    if cls in ("sequences", "permutations"):
        n, m = _need(opts, "n", "m")
        params = {"n": n, "m": m}
        default_bound = n
    elif cls == "powerset":
        (n,) = _need(opts, "n")
        params = {"n": n}
        default_bound = n
    else:
        n, p = _need(opts, "n", "p")
        params = {"n": n, "r": p}
        default_bound = p
    family = generators.generate(generators.ClassParams(cls=cls, params=params))
    if isinstance(family, list):
        raise ParameterError(f"class {cls!r} does not define a single family")
    r = opts["r"] if opts.get("r") is not None else default_bound
    s = opts["s"] if opts.get("s") is not None else default_bound
    return family, family, r, s


def _run_verify(config: ExperimentConfig) -> int:
    left, right, r, s = _verify_families(config)
    t = config.options["t"]
    report = solver.verify_main_theorem(left, right, r, s, t, config.limits)
    doc = {
        "format_version": familyio.FORMAT_VERSION,
        "kind": "verify",
        "target": config.options["target"],
        "r": str(r),
        "s": str(s),
        "t": str(t),
        **familyio.verification_report_dict(report),
    }
    _emit(config, doc)
    if report.status == "VIOLATION":
        return EXIT_VIOLATION
    if report.status == "inconclusive":
        return EXIT_RESOURCE
    return EXIT_OK


def _parse_param(raw: str) -> tuple[str, object]:
    if "=" not in raw:
        raise ParameterError(f"--param must look like name=value, got {raw!r}")
    name, value = raw.split("=", 1)
    if ":" in value:
        lo, hi = value.split(":", 1)
        try:
            return name, [int(lo), int(hi)]
        except ValueError as exc:
            raise ParameterError(f"bad range in --param {raw!r}") from exc
    try:
        return name, int(value)
    except ValueError as exc:
        raise ParameterError(f"bad value in --param {raw!r}") from exc


def _run_probe(config: ExperimentConfig) -> int:
    opts = config.options
    if opts.get("spec"):
        try:
            with open(opts["spec"], "rb") as handle:
                corpus = json.loads(handle.read().decode("utf-8"))
        except OSError as exc:
            raise ParseError(f"{opts['spec']}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ParseError(f"{opts['spec']}: {exc.msg}") from exc
        if not isinstance(corpus, list):
            raise ParseError("corpus spec must be a JSON array of entries")
    elif opts.get("cls"):
        params = dict(_parse_param(raw) for raw in opts["param"])
        corpus = [{"class": opts["cls"], "params": params}]
    else:
        raise ParameterError("probe needs --spec or --class with --param values")
    report = solver.chi_probe(
        opts["r"], opts["s"], opts["t"], corpus, config.limits, seed=config.seed
    )
    doc = {
        "format_version": familyio.FORMAT_VERSION,
        "kind": "probe",
        **familyio.probe_report_dict(report),
    }
    _emit(config, doc)
    return EXIT_VIOLATION if report.true_violations else EXIT_OK


_RUNNERS = {
    "gen": _run_gen,
    "stars": _run_stars,
    "bounds": _run_bounds,
    "solve": _run_solve,
    "classify": _run_classify,
    "verify": _run_verify,
    "probe": _run_probe,
}


def exit_code_for_error(error: Exception) -> int:
    if isinstance(error, ResourceError):
        return EXIT_RESOURCE
    if isinstance(error, (ParameterError, EncodingError, ParseError)):
        return EXIT_USAGE
    return EXIT_USAGE


def run(config: ExperimentConfig) -> int:
    """Execute one configured pipeline; returns the process exit status."""
    try:
        return _RUNNERS[config.command](config)
    except StarlabError as error:
        sys.stderr.write(
            json.dumps(
                {"error": {"type": type(error).__name__, "message": str(error)}},
                sort_keys=True,
            )
            + "\n"
        )
        return exit_code_for_error(error)


def main(argv: list[str] | None = None) -> int:
    try:
        config = parse_args(argv)
    except StarlabError as error:
        sys.stderr.write(
            json.dumps(
                {"error": {"type": type(error).__name__, "message": str(error)}},
                sort_keys=True,
            )
            + "\n"
        )
        return EXIT_USAGE
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
