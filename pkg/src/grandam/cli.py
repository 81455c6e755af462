"""Command line front end.

Subcommands compute norms and run the diagnostic checks, reading an
optional JSON config for the grid, space, exponents, window and
partition parameters. Reports are canonical JSON (sorted keys, fixed
float width), so a given config and seed always produce byte-identical
output. Exit status: 0 when everything passed, 1 when a checked property
was violated, 2 for input errors.
"""

import argparse
import json
import sys
from dataclasses import dataclass

import numpy as np

from .amalgam import (Window, amalgam_norm, equivalence_report,
                      make_uniform_bupu, validate_bupu)
from .convolution import (FiniteAbelianGroup, noncompact_witness,
                          submultiplicativity_check)
from .core import (COUNTING, CYCLIC, INTERVAL, PROBABILITY, GrandExponent,
                   MeasureSpace, SampledFunction, make_epsilon_grid)
from .grand import closure_criterion, epsilon_profile, grand_norm
from .iofmt import load_function, profile_csv_text, render_report

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2

SCHEMA_VERSION = 1


def _reject_unknown(section, allowed, where):
    unknown = sorted(set(section) - set(allowed))
    if unknown:
        raise ValueError(f"unknown config key {unknown[0]!r} in {where}")


@dataclass(frozen=True)
class RunConfig:
    """Validated run parameters with defaults for every section."""

    grid_points: int = 64
    min_eps_fraction: float = 1e-6
    refinement_rounds: int = 4
    tolerance: float = 1e-9
    space_kind: str = "cyclic"
    atoms: int = 16
    normalization: str = PROBABILITY
    p: float = 2.0
    q: float = 2.0
    theta: float = 1.0
    window_size: int = None
    window_members: tuple = None
    block_size: int = 4
    seed: int = 0
    trials: int = 100

    @classmethod
    def from_dict(cls, data):
        _reject_unknown(data, ("eps_grid", "space", "exponents", "window",
                               "bupu", "seed", "trials"), "config")
        kw = {}
        grid = data.get("eps_grid", {})
        _reject_unknown(grid, ("points", "min_eps_fraction", "refinement_rounds",
                               "tolerance"), "eps_grid")
        if "points" in grid:
            kw["grid_points"] = int(grid["points"])
        if "min_eps_fraction" in grid:
            kw["min_eps_fraction"] = float(grid["min_eps_fraction"])
        if "refinement_rounds" in grid:
            kw["refinement_rounds"] = int(grid["refinement_rounds"])
        if "tolerance" in grid:
            kw["tolerance"] = float(grid["tolerance"])
        space = data.get("space", {})
        _reject_unknown(space, ("kind", "atoms", "normalization"), "space")
        if "kind" in space:
            if space["kind"] not in ("cyclic", "interval", "counting"):
                raise ValueError(f"unknown space kind {space['kind']!r}")
            kw["space_kind"] = space["kind"]
        if "atoms" in space:
            kw["atoms"] = int(space["atoms"])
        if "normalization" in space:
            kw["normalization"] = space["normalization"]
        exps = data.get("exponents", {})
        _reject_unknown(exps, ("p", "q", "theta"), "exponents")
        for key in ("p", "q", "theta"):
            if key in exps:
                kw[key] = float(exps[key])
        window = data.get("window", {})
        _reject_unknown(window, ("size", "members"), "window")
        if "size" in window and "members" in window:
            raise ValueError("window takes either size or members, not both")
        if "size" in window:
            kw["window_size"] = int(window["size"])
        if "members" in window:
            kw["window_members"] = tuple(int(m) for m in window["members"])
        bupu = data.get("bupu", {})
        _reject_unknown(bupu, ("block_size",), "bupu")
        if "block_size" in bupu:
            kw["block_size"] = int(bupu["block_size"])
        if "seed" in data:
            kw["seed"] = int(data["seed"])
        if "trials" in data:
            kw["trials"] = int(data["trials"])
        return cls(**kw)

    @classmethod
    def load(cls, path):
        if path is None:
            return cls()
        with open(path, "r", encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as err:
                raise ValueError(f"{path}: invalid JSON ({err.msg})") from None
        if not isinstance(data, dict):
            raise ValueError(f"{path}: config must be a JSON object")
        return cls.from_dict(data)

    # -- builders ---------------------------------------------------

    def build_space(self):
        if self.space_kind == "cyclic":
            return MeasureSpace.cyclic(self.atoms, self.normalization)
        if self.space_kind == "interval":
            return MeasureSpace.interval(self.atoms, self.normalization)
        return MeasureSpace.counting(self.atoms)

    def build_group(self):
        if self.space_kind != "cyclic":
            raise ValueError("convolution commands need a cyclic space")
        return FiniteAbelianGroup.cyclic(self.atoms, self.normalization)

    def local_exponent(self):
        return GrandExponent(self.p, self.theta)

    def global_exponent(self):
        return GrandExponent(self.q, self.theta)

    def build_grid(self, exp):
        return make_epsilon_grid(
            exp, points=self.grid_points,
            min_eps=self.min_eps_fraction * exp.eps_max,
            refinement_rounds=self.refinement_rounds, tol=self.tolerance)

    def build_window(self, space):
        if self.window_members is not None:
            return Window(space, self.window_members)
        size = self.window_size if self.window_size is not None else self.block_size
        if not 1 <= size <= space.size:
            raise ValueError(f"window size (={size}) must lie in 1..{space.size}")
        return Window(space, tuple(range(size)))

    def geometry(self):
        return CYCLIC if self.space_kind == "cyclic" else INTERVAL


def _load_for_config(path, fmt, config, expect_space=None):
    f = load_function(path, fmt=fmt, geometry=config.geometry())
    if expect_space is not None:
        if f.space.size != expect_space.size or not np.array_equal(
                f.space.weights, expect_space.weights):
            raise ValueError(
                f"{path}: weights do not match the configured space "
                f"({expect_space.size} atoms, {config.normalization})")
        f = SampledFunction(expect_space, f.values)
    return f


def _random_function(rng, space):
    return SampledFunction(space, rng.random(space.size))


# ----------------------------------------------------------------------
# subcommands: each returns (exit_code, report_doc)


def cmd_norm(args, config):
    exp = config.local_exponent()
    grid = config.build_grid(exp)
    f = _load_for_config(args.f, args.format, config)
    value = grand_norm(f, exp, grid)
    closure = closure_criterion(f, exp, grid)
    return EXIT_OK, {
        "value": value,
        "p": exp.p,
        "theta": exp.theta,
        "atoms": f.space.size,
        "closure": closure.to_doc(),
    }


def cmd_profile(args, config):
    exp = config.local_exponent()
    grid = config.build_grid(exp)
    f = _load_for_config(args.f, args.format, config)
    profile = epsilon_profile(f, exp, grid)
    if args.csv is not None:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(profile_csv_text(profile))
    return EXIT_OK, {
        "sup_value": profile.sup_value,
        "argmax_eps": profile.argmax_eps,
        "entries": [{"eps": e, "value": v} for e, v in profile.entries],
        "p": exp.p,
        "theta": exp.theta,
    }


def cmd_amalgam(args, config):
    local = config.local_exponent()
    glob = config.global_exponent()
    space = config.build_space()
    window = config.build_window(space)
    f = _load_for_config(args.f, args.format, config, expect_space=space)
    value = amalgam_norm(f, window, local, glob,
                         config.build_grid(local), config.build_grid(glob))
    return EXIT_OK, {
        "value": value,
        "window_mass": window.mass,
        "window_size": window.size,
        "p": local.p,
        "q": glob.p,
        "theta": local.theta,
    }


def cmd_bupu_validate(args, config):
    space = config.build_space()
    bupu = make_uniform_bupu(space, config.block_size)
    report = validate_bupu(bupu)
    doc = {
        "block_size": config.block_size,
        "pieces": len(bupu),
        "ragged": bupu.ragged,
        "conditions": report.to_doc(),
        "all_passed": report.all_passed,
    }
    return (EXIT_OK if report.all_passed else EXIT_VIOLATION), doc


def _conv_check_doc(f, g, group, exp, grid):
    report = submultiplicativity_check(f, g, group, exp, grid)
    return report, report.to_doc()


def cmd_conv_check(args, config, seed):
    exp = config.local_exponent()
    grid = config.build_grid(exp)
    group = config.build_group()
    if (args.f is None) != (args.g is None):
        raise ValueError("conv-check needs both --f and --g, or neither")
    if args.f is not None:
        f = _load_for_config(args.f, args.format, config, expect_space=group.space)
        g = _load_for_config(args.g, args.format, config, expect_space=group.space)
        report, doc = _conv_check_doc(f, g, group, exp, grid)
        failed = report.hypotheses_met and not report.passed
        return (EXIT_VIOLATION if failed else EXIT_OK), doc
    rng = np.random.default_rng(seed)
    worst = None
    failures = 0
    hypotheses_met = group.is_probability
    for _ in range(config.trials):
        f = _random_function(rng, group.space)
        g = _random_function(rng, group.space)
        report = submultiplicativity_check(f, g, group, exp, grid)
        if not report.passed:
            failures += 1
        if worst is None or report.ratio > worst.ratio:
            worst = report
    doc = {
        "trials": config.trials,
        "seed": seed,
        "failures": failures,
        "worst": worst.to_doc(),
    }
    failed = hypotheses_met and failures > 0
    return (EXIT_VIOLATION if failed else EXIT_OK), doc


def cmd_witness(args, config):
    p = args.p if args.p is not None else config.p
    report = noncompact_witness(args.m, p)
    return (EXIT_OK if report.growing else EXIT_VIOLATION), report.to_doc()


def cmd_equivalence(args, config, seed):
    local = config.local_exponent()
    glob = config.global_exponent()
    space = config.build_space()
    window = config.build_window(space)
    bupu = make_uniform_bupu(space, config.block_size)
    local_grid = config.build_grid(local)
    global_grid = config.build_grid(glob)
    if args.f is not None:
        f = _load_for_config(args.f, args.format, config, expect_space=space)
        report = equivalence_report(f, window, bupu, local, glob,
                                    local_grid, global_grid)
        code = EXIT_OK if report.within_bounds else EXIT_VIOLATION
        return code, report.to_doc()
    rng = np.random.default_rng(seed)
    failures = 0
    worst_ratio = None
    last = None
    for _ in range(config.trials):
        f = _random_function(rng, space)
        last = equivalence_report(f, window, bupu, local, glob,
                                  local_grid, global_grid)
        if not last.within_bounds:
            failures += 1
        r = last.ratios["continuous_over_discrete"]
        if r is not None and (worst_ratio is None or r > worst_ratio):
            worst_ratio = r
    doc = {
        "trials": config.trials,
        "seed": seed,
        "failures": failures,
        "bounds": dict(last.bounds),
        "worst_continuous_over_discrete": worst_ratio,
    }
    return (EXIT_VIOLATION if failures else EXIT_OK), doc


# ----------------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(
        prog="grandam",
        description="Grand Lebesgue and amalgam norm computations on finite models.")
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--seed", type=int, help="override the config seed")
    parser.add_argument("--out", help="write the report here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, helptext, needs_f=False, needs_g=False):
        sp = sub.add_parser(name, help=helptext)
        if needs_f:
            sp.add_argument("--f", help="sampled function file")
        if needs_g:
            sp.add_argument("--g", help="second sampled function file")
        sp.add_argument("--format", choices=("csv", "jsonl"),
                        help="function file format (default: by extension)")
        return sp

    add("norm", "grand Lebesgue norm of a function", needs_f=True)
    prof = add("profile", "epsilon profile behind the norm", needs_f=True)
    prof.add_argument("--csv", help="also write eps,value rows to this CSV file")
    add("amalgam", "windowed amalgam norm of a function", needs_f=True)
    add("bupu-validate", "build and validate the configured uniform partition")
    add("conv-check", "convolution submultiplicativity check",
        needs_f=True, needs_g=True)
    wit = add("witness", "growth witness on the counting model")
    wit.add_argument("--m", type=int, default=2, help="half box width (default 2)")
    wit.add_argument("--p", type=float, help="exponent (default: config p)")
    add("equivalence", "continuous vs discrete amalgam comparison", needs_f=True)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = RunConfig.load(args.config)
        seed = args.seed if args.seed is not None else config.seed
        if args.command == "norm":
            code, result = cmd_norm(args, config)
        elif args.command == "profile":
            code, result = cmd_profile(args, config)
        elif args.command == "amalgam":
            code, result = cmd_amalgam(args, config)
        elif args.command == "bupu-validate":
            code, result = cmd_bupu_validate(args, config)
        elif args.command == "conv-check":
            code, result = cmd_conv_check(args, config, seed)
        elif args.command == "witness":
            code, result = cmd_witness(args, config)
        else:
            code, result = cmd_equivalence(args, config, seed)
    except (ValueError, OSError) as err:
        doc = {"schema_version": SCHEMA_VERSION, "command": args.command,
               "error": str(err)}
        sys.stderr.write(render_report(doc))
        return EXIT_INPUT

    doc = {"schema_version": SCHEMA_VERSION, "command": args.command,
           "result": result}
    text = render_report(doc)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
