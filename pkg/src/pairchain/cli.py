"""Command line interface.

Five subcommands cover the pipeline: ``simulate`` draws a hidden chain,
``fit`` runs the block sampler on an outcomes file, ``estimate`` turns the
posterior archive into a density table, ``predict`` forecasts championship
points from that table, and ``diagnose`` measures the filter-forgetting,
window-truncation and concentration bounds.

Every command takes ``--config <json>`` plus optional ``--out <dir>`` and
``--seed <int>`` overrides (environment variables ``PAIRCHAIN_OUT`` and
``PAIRCHAIN_SEED`` sit between the flag and the config value).  Exit codes:
0 success, 2 configuration error, 3 data error, 4 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time

import numpy as np

from .concentration import (MinorizedChain, additive_indicator_spec,
                            empirical_tail, indicator_mean)
from .dpm import DpmHyper
from .errors import DegeneracyError, TruncationLimitError
from .gibbs import (SamplerConfig, align_translation, predict_championships,
                    run_chain)
from .gridref import GridModel, forgetting_gap, truncation_gap
from .kernels import BradleyTerry, ExpStrengths, HomeTies
from .mixtures import MixtureDensity, standard_normal_mixture

EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4


class ConfigError(Exception):
    pass


class DataError(Exception):
    pass


# ---------------------------------------------------------------- config

def _require(cfg, key, kind, where="config"):
    if key not in cfg:
        raise ConfigError(f"{where}: missing required key '{key}'")
    value = cfg[key]
    if kind is float and isinstance(value, int):
        value = float(value)
    if not isinstance(value, kind):
        raise ConfigError(f"{where}: key '{key}' must be {kind.__name__}")
    return value


def load_config(path):
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as err:
        raise ConfigError(f"cannot read config: {err}") from err
    except json.JSONDecodeError as err:
        raise ConfigError(f"config is not valid JSON: {err}") from err
    if not isinstance(cfg, dict):
        raise ConfigError("config root must be a JSON object")
    return cfg


def build_kernel(cfg):
    spec = _require(cfg, "kernel", dict)
    variant = _require(spec, "variant", str, "kernel")
    if variant == "home_ties":
        try:
            return HomeTies(alpha=spec.get("alpha", 1.0),
                            theta=spec.get("theta", 2.0))
        except ValueError as err:
            raise ConfigError(f"kernel: {err}") from err
    if variant == "bradley_terry":
        # real-valued strengths drive the win probability via exp
        return ExpStrengths(BradleyTerry())
    raise ConfigError(f"kernel: unknown variant '{variant}'")


def build_mixture(spec, where):
    try:
        return MixtureDensity(np.asarray(_require(spec, "weights", list, where)),
                              np.asarray(_require(spec, "means", list, where)),
                              np.asarray(_require(spec, "variances", list, where)))
    except ValueError as err:
        raise ConfigError(f"{where}: {err}") from err


def build_sampler_config(cfg, seed):
    spec = _require(cfg, "sampler", dict)
    hyper_keys = {"alpha_dp", "mean_loc", "mean_var", "prec_shape",
                  "prec_rate", "max_components"}
    hyper_args = {k: spec[k] for k in hyper_keys if k in spec}
    init = (build_mixture(spec["init"], "sampler.init")
            if "init" in spec else standard_normal_mixture())
    try:
        return SamplerConfig(
            n_sweeps=_require(spec, "n_sweeps", int, "sampler"),
            burn_in=_require(spec, "burn_in", int, "sampler"),
            m_particles=spec.get("m_particles", 100),
            hyper=DpmHyper(**hyper_args),
            init=init,
            seed=seed,
            max_tries=spec.get("max_tries"))
    except (TypeError, ValueError) as err:
        raise ConfigError(f"sampler: {err}") from err


def grid_nodes(cfg):
    spec = cfg.get("grid", {})
    lo = spec.get("lo", -6.0)
    hi = spec.get("hi", 6.0)
    n_nodes = spec.get("n_nodes", 512)
    if not (isinstance(n_nodes, int) and n_nodes >= 2 and lo < hi):
        raise ConfigError("grid: need lo < hi and integer n_nodes >= 2")
    return np.linspace(lo, hi, n_nodes)


# ------------------------------------------------------------------- io

def _fmt(x):
    return f"{float(x):.17g}"


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def read_outcomes(path, kernel):
    alphabet = set(kernel.outcomes)
    outcomes = []
    try:
        fh = open(path, newline="")
    except OSError as err:
        raise DataError(f"cannot read outcomes: {err}") from err
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["index", "outcome"]:
            raise DataError(f"{path}:1: expected header 'index,outcome'")
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 2:
                raise DataError(f"{path}:{lineno}: expected two fields")
            try:
                value = int(row[1])
            except ValueError as err:
                raise DataError(
                    f"{path}:{lineno}: outcome '{row[1]}' is not an integer"
                ) from err
            if value not in alphabet:
                raise DataError(
                    f"{path}:{lineno}: outcome {value} not in alphabet "
                    f"{sorted(alphabet)}")
            outcomes.append(value)
    if not outcomes:
        raise DataError(f"{path}: no outcomes")
    return np.asarray(outcomes, dtype=int)


def read_density(path):
    nodes, density = [], []
    try:
        fh = open(path, newline="")
    except OSError as err:
        raise DataError(f"cannot read density table: {err}") from err
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header[:2] != ["v", "density"]:
            raise DataError(f"{path}:1: expected header starting 'v,density'")
        for lineno, row in enumerate(reader, start=2):
            try:
                nodes.append(float(row[0]))
                density.append(float(row[1]))
            except (ValueError, IndexError) as err:
                raise DataError(f"{path}:{lineno}: malformed row") from err
    if len(nodes) < 2:
        raise DataError(f"{path}: need at least two rows")
    return np.asarray(nodes), np.asarray(density)


def read_archive(path):
    snapshots = []
    try:
        fh = open(path)
    except OSError as err:
        raise DataError(f"cannot read posterior archive: {err}") from err
    with fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
                snapshots.append(MixtureDensity(
                    np.asarray(record["weights"], dtype=float),
                    np.asarray(record["means"], dtype=float),
                    np.asarray(record["variances"], dtype=float)))
            except (json.JSONDecodeError, KeyError, ValueError) as err:
                raise DataError(f"{path}:{lineno}: bad snapshot: {err}") from err
    if not snapshots:
        raise DataError(f"{path}: empty archive")
    return snapshots


# ------------------------------------------------------------- commands

def cmd_simulate(cfg, out_dir, seed):
    from .simulate import simulate_hidden_chain

    kernel = build_kernel(cfg)
    truth = build_mixture(_require(cfg, "truth", dict), "truth")
    n = _require(cfg, "n_observations", int)
    if n < 1:
        raise ConfigError("n_observations must be >= 1")
    chain = simulate_hidden_chain(truth, kernel, n, seed)
    write_csv(os.path.join(out_dir, "outcomes.csv"), ["index", "outcome"],
              [(i, int(x)) for i, x in enumerate(chain.outcomes)])
    write_csv(os.path.join(out_dir, "strengths.csv"), ["index", "strength"],
              [(i, _fmt(v)) for i, v in enumerate(chain.strengths)])
    print(f"simulate: wrote {n} outcomes and {n + 1} strengths to {out_dir}")
    return 0


def cmd_fit(cfg, out_dir, seed):
    kernel = build_kernel(cfg)
    outcomes_path = cfg.get("outcomes_path",
                            os.path.join(out_dir, "outcomes.csv"))
    outcomes = read_outcomes(outcomes_path, kernel)
    config = build_sampler_config(cfg, seed)
    counters = {}
    start = time.perf_counter()
    samples = run_chain(outcomes, kernel, config, counters=counters)
    runtime = time.perf_counter() - start

    archive_path = os.path.join(out_dir, "posterior.jsonl")
    with open(archive_path, "w") as fh:
        for sample in samples:
            snap = sample.snapshot
            fh.write(json.dumps({
                "sweep": sample.sweep,
                "weights": snap.weights.tolist(),
                "means": snap.means.tolist(),
                "variances": snap.variances.tolist(),
                "states_summary": {
                    "mean": float(sample.states.mean()),
                    "std": float(sample.states.std()),
                    "min": float(sample.states.min()),
                    "max": float(sample.states.max()),
                },
            }) + "\n")
    proposals = counters.get("proposals", 0)
    manifest = {
        "config": cfg,
        "seed": seed,
        "outcomes_path": outcomes_path,
        "n_outcomes": int(len(outcomes)),
        "n_samples": len(samples),
        "runtime_seconds": runtime,
        "ffbsi": {
            "proposals": proposals,
            "accepted": counters.get("accepted", 0),
            "fallbacks": counters.get("fallbacks", 0),
            "acceptance_rate": (counters.get("accepted", 0) / proposals
                                if proposals else None),
        },
    }
    with open(os.path.join(out_dir, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2)
    print(f"fit: {len(samples)} snapshots in {runtime:.1f}s -> {archive_path}")
    return 0


def cmd_estimate(cfg, out_dir, seed):
    archive_path = cfg.get("archive_path",
                           os.path.join(out_dir, "posterior.jsonl"))
    snapshots = read_archive(archive_path)
    nodes = grid_nodes(cfg)
    values = np.stack([snap.pdf(nodes) for snap in snapshots])
    density = values.mean(axis=0)
    band10 = np.percentile(values, 10, axis=0)
    band90 = np.percentile(values, 90, axis=0)

    header = ["v", "density", "band10", "band90"]
    columns = [nodes, density, band10, band90]
    if "truth" in cfg:
        truth = build_mixture(cfg["truth"], "truth")
        shift = align_translation(nodes, density, truth)
        aligned = np.interp(nodes - shift, nodes, density, left=0.0, right=0.0)
        header.append("aligned")
        columns.append(aligned)
        print(f"estimate: alignment shift {shift:+.4f}")
    rows = [[_fmt(col[i]) for col in columns] for i in range(len(nodes))]
    write_csv(os.path.join(out_dir, "density.csv"), header, rows)
    print(f"estimate: density table over {len(nodes)} nodes from "
          f"{len(snapshots)} snapshots -> {out_dir}/density.csv")
    return 0


def cmd_predict(cfg, out_dir, seed):
    kernel = build_kernel(cfg)
    spec = _require(cfg, "championship", dict)
    n_teams = _require(spec, "n_teams", int, "championship")
    n_replicates = _require(spec, "n_replicates", int, "championship")
    scoring = tuple(spec.get("scoring", [3, 1, 0]))
    if len(scoring) != 3:
        raise ConfigError("championship.scoring must have three entries")
    density_path = cfg.get("density_path", os.path.join(out_dir, "density.csv"))
    nodes, density = read_density(density_path)
    try:
        table = predict_championships(nodes, density, kernel, n_teams,
                                      n_replicates, seed, scoring=scoring)
    except ValueError as err:
        raise ConfigError(f"championship: {err}") from err

    write_csv(os.path.join(out_dir, "points.csv"),
              ["replicate", "rank", "points"],
              [(r, rank + 1, int(table[r, rank]))
               for r in range(n_replicates) for rank in range(n_teams)])
    write_csv(os.path.join(out_dir, "ranks.csv"),
              ["rank", "median", "decile10", "decile90"],
              [(rank + 1, _fmt(np.median(table[:, rank])),
                _fmt(np.percentile(table[:, rank], 10)),
                _fmt(np.percentile(table[:, rank], 90)))
               for rank in range(n_teams)])
    print(f"predict: {n_replicates} championships of {n_teams} teams "
          f"-> {out_dir}/ranks.csv")
    return 0


def _diagnose_filter_cases(kernel, rng, n_cases, max_window, check):
    rows = []
    for case in range(n_cases):
        g = rng.integers(2, 7)
        nodes = np.sort(rng.uniform(-2.0, 2.0, g))
        nodes += np.arange(g) * 1e-3  # keep strictly increasing
        masses = rng.dirichlet(np.ones(g))
        grid = GridModel(nodes, masses, kernel)
        alphabet = np.asarray(kernel.outcomes)
        if check == "forgetting":
            p = int(rng.integers(1, max_window + 1))
            outcomes = alphabet[rng.integers(0, len(alphabet), p)]
            init_a = rng.dirichlet(np.ones(g))
            init_b = rng.dirichlet(np.ones(g))
            gap, bound = forgetting_gap(grid, outcomes, init_a, init_b)
            label = f"p={p}"
        else:
            i = int(rng.integers(1, max_window + 1))
            ell = int(rng.integers(0, 11))
            outcomes = alphabet[rng.integers(0, len(alphabet), ell + i)]
            gap, bound = truncation_gap(grid, outcomes, i, ell)
            label = f"i={i},ell={ell}"
        rows.append((check, f"case{case}({label})", gap, bound,
                     bound - gap, gap <= bound + 1e-12))
    return rows


def cmd_diagnose(cfg, out_dir, seed):
    kernel = build_kernel(cfg)
    spec = cfg.get("diagnostics", {})
    n_cases = spec.get("n_cases", 200)
    max_window = spec.get("max_window", 30)
    nu_grid = spec.get("nu_grid", [0.2, 0.5, 1.0])
    n_replicates = spec.get("n_replicates", 20_000)
    chain_n = spec.get("chain_length", 100)
    t_grid = np.linspace(0.02, 0.4, spec.get("t_points", 10))
    rng = np.random.default_rng(seed)

    rows = []
    rows += _diagnose_filter_cases(kernel, rng, n_cases, max_window,
                                   "forgetting")
    rows += _diagnose_filter_cases(kernel, rng, n_cases, max_window,
                                   "truncation")
    for nu in nu_grid:
        chain = MinorizedChain.build(nu, 2, rng)
        f_spec = additive_indicator_spec(chain_n, 0)
        mean_f = indicator_mean(chain, chain_n, 0)
        table = empirical_tail(chain, f_spec, t_grid, n_replicates, rng,
                               mean_f=mean_f)
        se = np.sqrt(np.maximum(table["empirical"]
                                * (1 - table["empirical"]), 0) / n_replicates)
        for j, t in enumerate(t_grid):
            for bound_name in ("theorem", "corollary"):
                bound = table[bound_name][j]
                emp = table["empirical"][j]
                rows.append((f"tail-{bound_name}(nu={nu})", f"t={t:.3f}",
                             emp, bound, bound - emp,
                             emp <= bound + 3 * se[j]))

    write_csv(os.path.join(out_dir, "diagnostics.csv"),
              ["check", "case", "statistic", "bound", "margin", "pass"],
              [(c, l, _fmt(s), _fmt(b), _fmt(m), str(bool(ok)).lower())
               for c, l, s, b, m, ok in rows])
    n_fail = sum(1 for row in rows if not row[5])
    nu_hull = GridModel(np.array([-2.0, 2.0]), np.array([0.5, 0.5]),
                        kernel).lower_bound()
    with open(os.path.join(out_dir, "report.txt"), "w") as fh:
        fh.write(f"diagnostics seed={seed}\n")
        fh.write(f"kernel={kernel!r}\n")
        fh.write(f"kernel lower bound on [-2, 2]: nu={nu_hull:.6f}\n")
        for nu in nu_grid:
            fh.write(f"concentration chain nu={nu}\n")
        fh.write(f"checks: {len(rows)}, failures: {n_fail}\n")
    print(f"diagnose: {len(rows)} checks, {n_fail} failures "
          f"-> {out_dir}/diagnostics.csv")
    return 0


# ----------------------------------------------------------------- main

_COMMANDS = {
    "simulate": cmd_simulate,
    "fit": cmd_fit,
    "estimate": cmd_estimate,
    "predict": cmd_predict,
    "diagnose": cmd_diagnose,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog="pairchain",
        description="strength-distribution inference for comparison chains")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in _COMMANDS.items():
        cmd = sub.add_parser(name, help=fn.__doc__)
        cmd.add_argument("--config", required=True, help="JSON config path")
        cmd.add_argument("--out", help="output directory (overrides config)")
        cmd.add_argument("--seed", type=int, help="seed (overrides config)")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        out_dir = args.out or os.environ.get("PAIRCHAIN_OUT") \
            or cfg.get("out_dir")
        if not out_dir:
            raise ConfigError("no output directory (config out_dir or --out)")
        seed = args.seed
        if seed is None and "PAIRCHAIN_SEED" in os.environ:
            try:
                seed = int(os.environ["PAIRCHAIN_SEED"])
            except ValueError as err:
                raise ConfigError("PAIRCHAIN_SEED must be an integer") from err
        if seed is None:
            seed = cfg.get("seed")
        if not isinstance(seed, int) or seed < 0:
            raise ConfigError("need a nonnegative integer seed "
                              "(config seed, PAIRCHAIN_SEED, or --seed)")
        os.makedirs(out_dir, exist_ok=True)
        return _COMMANDS[args.command](cfg, out_dir, seed)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as err:
        print(f"data error: {err}", file=sys.stderr)
        return EXIT_DATA
    except (DegeneracyError, TruncationLimitError, FloatingPointError) as err:
        print(f"numeric error: {err}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
