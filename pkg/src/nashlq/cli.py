"""Command-line interface.

Subcommands: ``learn``, ``reproduce-paper``, ``check-rosen``, ``gen-matrix``,
``simulate``.  Runs are configured by an optional JSON file plus flags
(flags win); ``NASHLQ_SEED`` supplies a default seed.  Histories and reports
are flat CSV/JSON files meant for external plotting tools.

Exit codes: 0 success, 1 uniqueness-condition violation found,
2 invalid configuration, 3 solver failure (unstable profile).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .analysis import (
    MatrixEnsembleConfig,
    conjecture_sweep,
    generate_sdd_matrix,
    rosen_sweep,
    two_player_mu,
)
from .config import ConfigError, load_experiment, resolve_seed
from .game import GameSpec, NotPositiveDefinite, cost, stability_margin
from .learning import LearnConfig, run_gradient_play
from .output import write_history, write_json
from .presets import (
    FIVE_PLAYER_ROUND1_FINAL,
    FIVE_PLAYER_ROUND1_START,
    FIVE_PLAYER_ROUND2_FINAL,
    FIVE_PLAYER_ROUND2_START,
    FIVE_PLAYER_BATCH,
    FIVE_PLAYER_HORIZON,
    FIVE_PLAYER_STAGES,
    five_player_game,
)
from .simulate import SimConfig, monte_carlo_cost, substream

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_CONFIG = 2
EXIT_SOLVER = 3

# Gradient-play iterates stay below the published starting gains for this
# system, so quadrature at this step keeps the sampled-cost bias well under
# the Monte Carlo noise floor; 0.1 s is too coarse for the fastest closed
# loop modes here (rates up to ~8 1/s once gains approach 4).
REPRODUCE_DT = 0.01
EXACT_STAGE_CAP = 20000
EXACT_TOLERANCE = 1e-9

_K0_STREAM = 101


def _flt(values: np.ndarray) -> list[float]:
    return [float(v) for v in np.asarray(values).ravel()]


def _fmt_vec(values) -> str:
    return "[" + ", ".join(f"{float(v):.6g}" for v in np.asarray(values).ravel()) + "]"


def _game_dict(spec: GameSpec) -> dict:
    return {
        "a": [list(map(float, row)) for row in spec.a],
        "rho": _flt(spec.rho),
        "k_lower": _flt(spec.k_lower),
        "k_upper": _flt(spec.k_upper),
    }


def _overrides(args) -> dict:
    return {
        "preset": getattr(args, "preset", None),
        "seed": getattr(args, "seed", None),
        "mode": getattr(args, "mode", None),
        "stages": getattr(args, "stages", None),
        "step_size": getattr(args, "step_size", None),
        "batch_size": getattr(args, "batch", None),
        "horizon": getattr(args, "horizon", None),
        "dt": getattr(args, "dt", None),
        "integrator": getattr(args, "integrator", None),
        "grad_tolerance": getattr(args, "grad_tolerance", None),
        "k0": _parse_profile(getattr(args, "k0", None)),
        "output_dir": getattr(args, "out", None),
        "format": getattr(args, "format", None),
    }


def _parse_profile(text):
    if text is None:
        return None
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError:
        raise ConfigError(f"could not parse profile {text!r}; expected comma-separated floats") from None


def cmd_learn(args) -> int:
    exp = load_experiment(args.config, _overrides(args))
    k0 = exp.k0
    if k0 is None:
        rng = substream(exp.sim.seed, _K0_STREAM)
        k0 = exp.game.k_lower + rng.random(exp.game.n) * (exp.game.k_upper - exp.game.k_lower)
    run = run_gradient_play(exp.game, k0, exp.learn)

    exp.output_dir.mkdir(parents=True, exist_ok=True)
    suffix = "csv" if exp.format == "csv" else "jsonl"
    history_path = write_history(exp.output_dir / f"history.{suffix}", run, exp.format)

    final_grad = run.history[-1].grad if run.history else None
    print(f"mode {exp.learn.mode}: {run.stages_used} stages, converged={run.converged}")
    print(f"initial profile: {_fmt_vec(k0)}")
    print(f"final profile:   {_fmt_vec(run.final.k)}")
    if final_grad is not None:
        print(f"final max |gradient|: {np.max(np.abs(final_grad)):.3e}")
    print(f"history written to {history_path}")
    return EXIT_OK


def _reproduce_round(spec, start, mode, stages, step_size, sim) -> tuple:
    learn = LearnConfig(
        stages=stages,
        step_size=step_size,
        mode=mode,
        sim=sim,
        grad_tolerance=EXACT_TOLERANCE if mode == "exact" else 0.0,
    )
    return run_gradient_play(spec, start, learn)


def cmd_reproduce_paper(args) -> int:
    mode = args.mode or "model-free"
    if mode not in ("exact", "model-free"):
        raise ConfigError("mode must be 'exact' or 'model-free'")
    seed = resolve_seed(args.seed)
    # Both rounds share the per-stage noise substreams by default, so they
    # differ only in their starting profiles; --independent-rounds gives the
    # second round its own stream.
    round_seeds = (seed, seed + 1 if args.independent_rounds else seed)
    stages = args.stages or (FIVE_PLAYER_STAGES if mode == "model-free" else EXACT_STAGE_CAP)
    step_size = args.step_size or 1.0
    out = Path(args.out or "runs/reproduce-paper")

    spec = five_player_game()
    runs = []
    for start, rseed in zip((FIVE_PLAYER_ROUND1_START, FIVE_PLAYER_ROUND2_START), round_seeds):
        sim = SimConfig(
            batch_size=args.batch or FIVE_PLAYER_BATCH,
            horizon=args.horizon or FIVE_PLAYER_HORIZON,
            dt=args.dt or REPRODUCE_DT,
            seed=rseed,
        )
        runs.append(_reproduce_round(spec, start, mode, stages, step_size, sim))

    out.mkdir(parents=True, exist_ok=True)
    for index, run in enumerate(runs, start=1):
        write_history(out / f"round{index}.csv", run, "csv")

    finals = [run.final.k for run in runs]
    cross_gap = float(np.max(np.abs(finals[0] - finals[1])))
    published = (FIVE_PLAYER_ROUND1_FINAL, FIVE_PLAYER_ROUND2_FINAL)
    starts = (FIVE_PLAYER_ROUND1_START, FIVE_PLAYER_ROUND2_START)

    _write_comparison(out / "comparison.csv", starts, finals, published)

    checks = {}
    if mode == "exact":
        checks["cross_round"] = {"tolerance": 1e-6, "value": cross_gap, "passed": cross_gap <= 1e-6}
    else:
        checks["cross_round"] = {"tolerance": 0.1, "value": cross_gap, "passed": cross_gap <= 0.1}
        for index, (final, target) in enumerate(zip(finals, published), start=1):
            gap = float(np.max(np.abs(final - target)))
            checks[f"round{index}_vs_published"] = {
                "tolerance": 0.1,
                "value": gap,
                "passed": gap <= 0.1,
            }
    passed = all(c["passed"] for c in checks.values())

    summary = {
        "mode": mode,
        "seed": seed,
        "round_seeds": list(round_seeds),
        "stages": stages,
        "step_size": step_size,
        "batch_size": args.batch or FIVE_PLAYER_BATCH,
        "horizon": args.horizon or FIVE_PLAYER_HORIZON,
        "dt": args.dt or REPRODUCE_DT,
        "rounds": [
            {
                "start": _flt(start),
                "final": _flt(final),
                "stages_used": run.stages_used,
                "converged": run.converged,
            }
            for start, final, run in zip(starts, finals, runs)
        ],
        "published_finals": [_flt(p) for p in published],
        "cross_round_gap": cross_gap,
        "checks": checks,
        "passed": passed,
    }
    write_json(out / "summary.json", summary)

    for index, (start, final) in enumerate(zip(starts, finals), start=1):
        print(f"round {index}: start {_fmt_vec(start)} -> final {_fmt_vec(final)}")
    for name, check in checks.items():
        verdict = "PASS" if check["passed"] else "FAIL"
        print(f"{name}: {check['value']:.3e} (tolerance {check['tolerance']:g}): {verdict}")
    print(f"reports written to {out}")
    return EXIT_OK


def _write_comparison(path, starts, finals, published) -> None:
    n = len(finals[0])
    header = "row,round," + ",".join(f"player_{i}" for i in range(1, n + 1))
    lines = [header]
    for label, rows in (("initial", starts), ("final", finals), ("published_final", published)):
        for index, row in enumerate(rows, start=1):
            lines.append(f"{label},{index}," + ",".join(repr(float(v)) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def cmd_check_rosen(args) -> int:
    raw = {}
    if args.config is not None:
        import json

        path = Path(args.config)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as err:
            raise ConfigError(f"config file is not valid JSON: {err}") from None

    out = Path(args.out or "rosen.json")
    out.parent.mkdir(parents=True, exist_ok=True)

    if "ensemble" in raw:
        section = raw["ensemble"]
        try:
            ensemble = MatrixEnsembleConfig(
                n=int(section.get("n", 5)),
                count=int(section.get("count", 100)),
                offdiag_scale=float(section.get("offdiag_scale", 1.0)),
                dominance_margin=float(section.get("dominance_margin", 0.1)),
                seed=resolve_seed(args.seed, section.get("seed")),
            )
            generator = section.get("generator", "sdd")
            samples = int(args.samples or section.get("samples", 200))
            rho_range = tuple(section.get("rho_range", (0.0, 1.0)))
            result = conjecture_sweep(
                ensemble, samples, rho_range=rho_range, generator=generator
            )
        except ValueError as err:
            raise ConfigError(str(err)) from None
        payload = {
            "ensemble": {
                "n": ensemble.n,
                "count": ensemble.count,
                "offdiag_scale": ensemble.offdiag_scale,
                "dominance_margin": ensemble.dominance_margin,
                "seed": ensemble.seed,
                "generator": generator,
                "samples_per_matrix": samples,
                "rho_range": list(rho_range),
            },
            "min_eig": result.min_eig,
            "spot_checked": result.spot_checked,
            "spot_check_max_rel_err": result.spot_check_max_rel_err,
            "violations": [
                {
                    "matrix_index": rec.matrix_index,
                    "seed": rec.seed,
                    "game": _game_dict(rec.spec),
                    "min_eig": rec.report.min_eig,
                    "witness": _flt(rec.report.witness.k),
                    "samples": rec.report.samples,
                }
                for rec in result.violations
            ],
        }
        write_json(out, payload)
        print(
            f"{ensemble.count} matrices x {samples} samples ({generator}): "
            f"min eig {result.min_eig:.6g}, {len(result.violations)} violation(s)"
        )
        print(f"report written to {out}")
        return EXIT_VIOLATION if result.violations else EXIT_OK

    exp_overrides = _overrides(args)
    exp_overrides["output_dir"] = str(out.parent)
    exp = load_experiment(args.config, exp_overrides)
    samples = int(args.samples or 1000)
    report = rosen_sweep(exp.game, samples, seed=exp.sim.seed)
    payload = {
        "game": _game_dict(exp.game),
        "seed": exp.sim.seed,
        "samples": report.samples,
        "min_eig": report.min_eig,
        "witness": _flt(report.witness.k),
        "violated": report.violated,
    }
    print(f"min eig of G + G^T over {report.samples} samples: {report.min_eig:.6g}")
    print(f"witness profile: {_fmt_vec(report.witness.k)}")
    if exp.game.n == 2:
        a = exp.game.a
        witness_mu = two_player_mu(a[0, 0], a[0, 1], a[1, 1], *report.witness.k)
        corner_mu = two_player_mu(a[0, 0], a[0, 1], a[1, 1], *exp.game.k_lower)
        payload["mu"] = {"at_witness": witness_mu, "at_lower_corner": corner_mu}
        print(f"mu at witness: {witness_mu:.6g}; mu at lower corner: {corner_mu:.6g}")
    write_json(out, payload)
    print(f"report written to {out}")
    return EXIT_VIOLATION if report.violated else EXIT_OK


def cmd_gen_matrix(args) -> int:
    raw = {}
    if args.config is not None:
        import json

        path = Path(args.config)
        if not path.exists():
            raise ConfigError(f"config file not found: {path}")
        raw = json.loads(path.read_text(encoding="utf-8"))
    n = args.n or raw.get("n")
    if n is None:
        raise ConfigError("gen-matrix needs a dimension: pass --n or a config with 'n'")
    try:
        ensemble = MatrixEnsembleConfig(
            n=int(n),
            count=1,
            offdiag_scale=float(args.offdiag_scale or raw.get("offdiag_scale", 1.0)),
            dominance_margin=float(args.margin or raw.get("dominance_margin", 0.1)),
            seed=resolve_seed(args.seed, raw.get("seed")),
        )
    except ValueError as err:
        raise ConfigError(str(err)) from None

    a = generate_sdd_matrix(ensemble, substream(ensemble.seed, 0))
    offdiag = np.sum(np.abs(a), axis=1) - np.abs(np.diag(a))
    margins = np.abs(np.diag(a)) - offdiag
    min_eig = float(np.linalg.eigvalsh(a).min())

    out = Path(args.out or "matrix.json")
    out.parent.mkdir(parents=True, exist_ok=True)
    write_json(
        out,
        {
            "n": ensemble.n,
            "seed": ensemble.seed,
            "offdiag_scale": ensemble.offdiag_scale,
            "dominance_margin": ensemble.dominance_margin,
            "matrix": [list(map(float, row)) for row in a],
            "verification": {
                "symmetric": bool(np.array_equal(a, a.T)),
                "negative_diagonal": bool(np.all(np.diag(a) < 0)),
                "gershgorin_margins": _flt(margins),
                "strictly_diagonally_dominant": bool(np.all(margins > 0)),
                "min_eigenvalue": min_eig,
            },
        },
    )
    print(f"{ensemble.n}x{ensemble.n} matrix, gershgorin margins {_fmt_vec(margins)}")
    print(f"smallest eigenvalue: {min_eig:.6g}")
    print(f"matrix written to {out}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    exp = load_experiment(args.config, _overrides(args))
    k = _parse_profile(args.k)
    if k is None:
        k = 0.5 * (exp.game.k_lower + exp.game.k_upper)
    k = np.asarray(k, dtype=float)
    if k.shape != (exp.game.n,):
        raise ConfigError(f"profile needs {exp.game.n} entries, got {k.shape[0] if k.ndim else 1}")

    estimate = monte_carlo_cost(exp.game, k, exp.sim)
    closed_form = cost(exp.game, k)
    rel = np.abs(estimate - closed_form) / np.abs(closed_form)

    print(f"profile: {_fmt_vec(k)}  (stability margin {stability_margin(exp.game, k):.6g})")
    print(
        f"batch {exp.sim.batch_size}, horizon {exp.sim.horizon:g}, "
        f"dt {exp.sim.dt:g}, integrator {exp.sim.integrator}, seed {exp.sim.seed}"
    )
    print("player   estimate      closed-form   rel-error")
    for i in range(exp.game.n):
        print(f"{i + 1:>6}   {estimate[i]:<12.6g}  {closed_form[i]:<12.6g}  {rel[i]:.3e}")

    if args.out:
        path = Path(args.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        lines = ["player,k,estimate,closed_form,rel_error"]
        for i in range(exp.game.n):
            lines.append(
                f"{i + 1},{float(k[i])!r},{float(estimate[i])!r},"
                f"{float(closed_form[i])!r},{float(rel[i])!r}"
            )
        path.write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")
        print(f"table written to {path}")
    return EXIT_OK


def _add_common(parser: argparse.ArgumentParser, *, sim_flags: bool = True) -> None:
    parser.add_argument("--config", metavar="PATH", help="JSON experiment config")
    parser.add_argument("--seed", type=int, metavar="U64", help="RNG seed (default: $NASHLQ_SEED or 0)")
    parser.add_argument("--out", metavar="PATH", help="output directory or file")
    if sim_flags:
        parser.add_argument("--batch", type=int, metavar="N", help="Monte Carlo batch size")
        parser.add_argument("--horizon", type=float, metavar="F", help="sampling horizon in seconds")
        parser.add_argument("--dt", type=float, metavar="F", help="quadrature step in seconds")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nashlq",
        description="Gradient-play Nash equilibrium seeking for decentralized LQ games.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    learn = sub.add_parser("learn", help="run projected gradient play and write the staged history")
    _add_common(learn)
    learn.add_argument("--preset", choices=["scalar", "two-player", "diagonal", "five-player"])
    learn.add_argument("--mode", choices=["exact", "model-free"])
    learn.add_argument("--stages", type=int, metavar="N")
    learn.add_argument("--step-size", dest="step_size", type=float, metavar="F")
    learn.add_argument("--grad-tolerance", dest="grad_tolerance", type=float, metavar="F")
    learn.add_argument("--k0", metavar="CSV", help="starting profile, comma-separated")
    learn.add_argument("--integrator", choices=["quadrature", "exact"])
    learn.add_argument("--format", choices=["csv", "json-lines"])
    learn.set_defaults(func=cmd_learn)

    repro = sub.add_parser(
        "reproduce-paper",
        help="replay both rounds of the bundled 5-player study and check tolerances",
    )
    _add_common(repro)
    repro.add_argument("--mode", choices=["exact", "model-free"])
    repro.add_argument("--stages", type=int, metavar="N")
    repro.add_argument("--step-size", dest="step_size", type=float, metavar="F")
    repro.add_argument(
        "--independent-rounds",
        action="store_true",
        help="give round 2 its own noise stream instead of sharing round 1's",
    )
    repro.set_defaults(func=cmd_reproduce_paper)

    rosen = sub.add_parser(
        "check-rosen", help="sweep G + G^T positive definiteness over the action box"
    )
    _add_common(rosen, sim_flags=False)
    rosen.add_argument("--preset", choices=["scalar", "two-player", "diagonal", "five-player"])
    rosen.add_argument("--samples", type=int, metavar="N", help="box samples (per matrix)")
    rosen.set_defaults(func=cmd_check_rosen)

    gen = sub.add_parser("gen-matrix", help="generate a random SDD matrix with verification report")
    _add_common(gen, sim_flags=False)
    gen.add_argument("--n", type=int, metavar="N", help="matrix dimension")
    gen.add_argument("--offdiag-scale", dest="offdiag_scale", type=float, metavar="F")
    gen.add_argument("--margin", type=float, metavar="F", help="diagonal dominance margin")
    gen.set_defaults(func=cmd_gen_matrix)

    simulate = sub.add_parser(
        "simulate", help="Monte Carlo cost estimate at a profile vs the closed form"
    )
    _add_common(simulate)
    simulate.add_argument("--preset", choices=["scalar", "two-player", "diagonal", "five-player"])
    simulate.add_argument("--k", metavar="CSV", help="profile to simulate, comma-separated")
    simulate.add_argument("--integrator", choices=["quadrature", "exact"])
    simulate.set_defaults(func=cmd_simulate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except NotPositiveDefinite as err:
        print(f"solver failure: {err}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
