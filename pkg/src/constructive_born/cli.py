"""Command-line front end.

Exit codes: 0 ok, 2 formula parse error, 3 invalid frame, 4 invalid experiment
config, 5 truth-table atom budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import gleason, kripke, logic, measurement, quantum
from .errors import ConstructiveBornError, FormulaSyntaxError, FrameError, UnknownAtom, UnknownWorld
from .weights import DEFAULT_MAX_DENOMINATOR

EXIT_PARSE = 2
EXIT_FRAME = 3
EXIT_CONFIG = 4
EXIT_BUDGET = 5
MAX_TABLE_ATOMS = 20


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def resolve_frame(spec: str) -> tuple[kripke.KripkeModel, str]:
    """Frame specifier -> (model, world at which to evaluate).

    ``measurement:N`` evaluates at the root, ``leaf:n:N`` at leaf n of the same
    frame, ``pihc`` at the root of the two-world solvability frame; anything else
    is read as a JSON model file.
    """
    kind, _, rest = spec.partition(":")
    try:
        if kind == "measurement" and rest:
            m = kripke.measurement_frame(_positive(rest))
            return m, m.root
        if kind == "leaf" and rest:
            n_str, _, size = rest.partition(":")
            size_n = _positive(size)
            m = kripke.measurement_frame(size_n)
            return m, kripke.leaf_world(size_n, _positive(n_str))
        if spec == "pihc":
            m = kripke.pihc_frame()
            return m, m.root
    except (ValueError, UnknownWorld) as exc:
        raise CliError(f"bad frame specifier {spec!r}: {exc}", EXIT_FRAME) from None
    path = Path(spec)
    if not path.is_file():
        raise CliError(f"frame {spec!r} is neither a built-in specifier nor a file", EXIT_FRAME)
    try:
        m = kripke.load_model(path)
    except FrameError as exc:
        raise CliError(f"invalid frame {spec}: {exc}", EXIT_FRAME) from None
    return m, m.root


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise ValueError(f"expected a positive integer, got {text!r}")
    return n


def _parse_formula(text: str, **kwargs) -> logic.Proposition:
    try:
        return logic.parse(text, **kwargs)
    except (FormulaSyntaxError, UnknownAtom) as exc:
        raise CliError(f"cannot parse {text!r}: {exc}", EXIT_PARSE) from None


def cmd_eval(args) -> int:
    m, world = resolve_frame(args.frame)
    p = _parse_formula(args.formula, atoms=m.atoms, undecided=m.undecided)
    if args.world is not None:
        if args.world not in m.worlds:
            raise CliError(f"frame has no world {args.world!r}", EXIT_FRAME)
        world = args.world
    print(kripke.eval3(m, p, world))
    return 0


def load_config(args) -> dict:
    config: dict = {}
    if args.config:
        try:
            config = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise CliError(f"cannot read config {args.config}: {exc}", EXIT_CONFIG) from None
        if not isinstance(config, dict):
            raise CliError("config must be a JSON object", EXIT_CONFIG)
    for key in ("amplitudes", "labels"):
        value = getattr(args, key)
        if value is not None:
            try:
                config[key] = json.loads(value)
            except json.JSONDecodeError as exc:
                raise CliError(f"--{key} is not valid JSON: {exc}", EXIT_CONFIG) from None
    for key in ("trials", "seed", "max_denominator", "output"):
        value = getattr(args, key)
        if value is not None:
            config[key] = value
    return config


def _amplitude(value) -> complex:
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, (int, float)):
        return complex(value)
    raise ValueError(f"amplitude {value!r} is not a number or an [re, im] pair")


def cmd_measure(args) -> int:
    config = load_config(args)
    try:
        if "amplitudes" not in config:
            raise ValueError("config has no amplitudes")
        amps = [_amplitude(a) for a in config["amplitudes"]]
        state = quantum.new_state(amps, config.get("labels"))
        trials = int(config.get("trials", 100_000))
        seed = int(config.get("seed", 0))
        max_den = int(config.get("max_denominator", DEFAULT_MAX_DENOMINATOR))
        result = measurement.run_experiment(state, trials, seed, max_den)
    except (ConstructiveBornError, ValueError, TypeError) as exc:
        raise CliError(f"{type(exc).__name__}: {exc}", EXIT_CONFIG) from None
    text = json.dumps(result.to_json(), indent=2) + "\n"
    out = config.get("output")
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_truthtable(args) -> int:
    p = _parse_formula(args.formula)
    labels = logic.atoms(p)
    if len(labels) > MAX_TABLE_ATOMS:
        raise CliError(
            f"{len(labels)} atoms exceed the truth-table budget of {MAX_TABLE_ATOMS}", EXIT_BUDGET
        )
    labels, grid, values = logic.truth_table(p, labels)
    print(" ".join(labels) + " | value")
    for row, v in zip(grid, values):
        print(" ".join(str(int(b)).rjust(len(l)) for b, l in zip(row, labels)) + f" | {int(v)}")
    print(f"one-hot: {'yes' if logic.is_one_hot(p, labels) else 'no'}")
    return 0


def cmd_gleason_check(args) -> int:
    if args.state is not None:
        try:
            amps = [_amplitude(a) for a in json.loads(args.state)]
            psi = quantum.new_state(amps)
            basis = None
            if args.basis is not None:
                basis = [[_amplitude(a) for a in vec] for vec in json.loads(args.basis)]
            fa = gleason.born_assignment(psi, basis)
        except (ConstructiveBornError, ValueError, TypeError) as exc:
            raise CliError(f"{type(exc).__name__}: {exc}", EXIT_CONFIG) from None
        report = {
            "values": list(fa.values),
            "additive": gleason.check_additivity(fa, args.tol),
        }
        print(json.dumps(report, indent=2))
        return 0 if report["additive"] else 1

    rng = np.random.default_rng(args.seed)
    worst = 0.0
    failures = 0
    for _ in range(args.pairs):
        dim = int(rng.integers(args.min_dim, args.max_dim + 1))
        psi = quantum.random_state(dim, rng)
        fa = gleason.born_assignment(psi, gleason.random_basis(dim, rng))
        worst = max(worst, abs(sum(fa.values) - 1.0))
        failures += not gleason.check_additivity(fa, args.tol)
    report = {
        "pairs": args.pairs,
        "dims": [args.min_dim, args.max_dim],
        "seed": args.seed,
        "tol": args.tol,
        "failures": failures,
        "max_deviation": worst,
    }
    print(json.dumps(report, indent=2))
    return 0 if failures == 0 else 1


def cmd_frames_validate(args) -> int:
    try:
        m = kripke.load_model(args.path)
    except OSError as exc:
        raise CliError(f"cannot read {args.path}: {exc}", EXIT_FRAME) from None
    except FrameError as exc:
        raise CliError(f"invalid frame {args.path}: {exc}", EXIT_FRAME) from None
    print(f"ok: {len(m.worlds)} worlds, root {m.root}, atoms {sorted(m.atoms)}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="constructive-born", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="three-valued evaluation of a formula on a frame")
    p.add_argument("formula")
    p.add_argument("--frame", default="measurement:2",
                   help="measurement:N, leaf:n:N, pihc, or a JSON model file")
    p.add_argument("--world", help="evaluate at this world instead of the default")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("measure", help="run a seeded measurement experiment")
    p.add_argument("--config", help="JSON file with the experiment fields")
    p.add_argument("--amplitudes", help='JSON list, e.g. "[[0.5, 0], [0.866, 0]]"')
    p.add_argument("--labels", help='JSON list of outcome labels')
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--max-denominator", dest="max_denominator", type=int)
    p.add_argument("--output", help="write JSON here instead of stdout")
    p.set_defaults(func=cmd_measure)

    p = sub.add_parser("truthtable", help="classical truth table and one-hot check")
    p.add_argument("formula")
    p.set_defaults(func=cmd_truthtable)

    p = sub.add_parser("gleason-check", help="check additivity of Born assignments")
    p.add_argument("--state", help="JSON amplitude list; omit for a random batch")
    p.add_argument("--basis", help="JSON list of basis vectors (default: outcome basis)")
    p.add_argument("--pairs", type=int, default=1000)
    p.add_argument("--min-dim", dest="min_dim", type=int, default=2)
    p.add_argument("--max-dim", dest="max_dim", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_gleason_check)

    p = sub.add_parser("frames", help="model file utilities")
    frames = p.add_subparsers(dest="frames_command", required=True)
    v = frames.add_parser("validate", help="validate a JSON model description")
    v.add_argument("path")
    v.set_defaults(func=cmd_frames_validate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
