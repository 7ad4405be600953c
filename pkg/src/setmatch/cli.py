"""Experiment harness: generate | train | bounds | sweep | validate | margin-validate.

Every command is deterministic under a fixed master seed, including when
trials run on multiple workers: trial i always draws from the RNG stream
``SeedSequence(entropy=master_seed, spawn_key=(purpose, i))``, rows are
emitted in trial order, and artifacts contain no wall-clock values (timing
goes to stderr).  Each artifact embeds the fully resolved configuration and
the SHA-256 of any file inputs.
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import io
from .bounds import (
    margin_bound,
    optimal_alpha,
    rademacher_from_gram,
    rkhs_deviation_bound,
)
from .errors import SetMatchError
from .kernels import (
    BaseKernelSpec,
    PairKernel,
    RkhsScoreFunction,
    empirical_kappa,
    gram,
    kappa,
    median_heuristic_gamma,
    rkhs_norm,
)
from .learner import TrainConfig, train
from .losses import (
    SurrogateSpec,
    empirical_margin_risk,
    empirical_risk,
    lipschitz_constant,
    mc_expected_risk,
    mc_ranking_error,
)
from .sampling import (
    GeneratorSpec,
    MatchingDataset,
    PairGenerator,
    assemble,
    assemble_with_ratio,
    negative_sampling,
)

# RNG stream purposes (first component of the spawn key).
STREAM_GENERATE = 0
STREAM_TRIAL = 1
STREAM_BOUNDS = 2
STREAM_CALIBRATE = 3

DEFAULT_CONFIG = {
    "seed": 0,
    "generator": {
        "d": 2,
        "n_clusters": 4,
        "cluster_std": 3.0,
        "within_pair_std": 0.3,
        "set_size_min": 2,
        "set_size_max": 5,
    },
    "dataset": {"m": 100, "alpha": 0.5},
    "kernel": {"kind": "rbf", "gamma": None},
    "train": {"r": 1.0, "steps": 200, "step_size": 0.05, "surrogate": "logistic", "rho": 1.0},
    "bounds": {"delta": 0.05, "rho": 1.0, "n_sigma": 2000},
    "sweep": {
        "m_min": 10,
        "m_max": 10000,
        "m_points": 20,
        "alpha_min": 0.05,
        "alpha_max": 0.95,
        "alpha_step": 0.05,
        "delta": 0.05,
        "L": 1.0,
        "kappa": None,
        "r": None,
    },
    "validate": {"trials": 200, "model": "random", "mc_per_side": None, "workers": 1},
    "margin_validate": {
        "trials": 200,
        "m_pos": 50,
        "m_neg": 50,
        "model": "random",
        "mc_per_side": None,
        "workers": 1,
    },
}


def stream_rng(master_seed: int, purpose: int, index: int = 0) -> np.random.Generator:
    """RNG for one purpose/index slot of the documented seed-splitting scheme."""
    return np.random.default_rng(
        np.random.SeedSequence(entropy=master_seed, spawn_key=(purpose, index))
    )


def stream_seed(master_seed: int, purpose: int, index: int = 0) -> int:
    """64-bit state identifying the stream; recorded per trial for reproduction."""
    seq = np.random.SeedSequence(entropy=master_seed, spawn_key=(purpose, index))
    return int(seq.generate_state(1, np.uint64)[0])


def _merge(defaults: dict, override: dict, path: str = "") -> dict:
    out = copy.deepcopy(defaults)
    for key, value in override.items():
        if key not in defaults:
            raise ValueError(f"unknown config key {path + key!r}")
        if isinstance(defaults[key], dict):
            if not isinstance(value, dict):
                raise ValueError(f"config key {path + key!r} must be an object")
            out[key] = _merge(defaults[key], value, path + key + ".")
        else:
            out[key] = value
    return out


def load_config(path: str | None, seed_override: int | None) -> dict:
    cfg = copy.deepcopy(DEFAULT_CONFIG)
    if path is not None:
        user = json.loads(Path(path).read_text(encoding="utf-8"))
        cfg = _merge(cfg, user)
    if seed_override is not None:
        cfg["seed"] = seed_override
    return cfg


def generator_spec(cfg: dict) -> GeneratorSpec:
    g = cfg["generator"]
    return GeneratorSpec(
        d=g["d"],
        n_clusters=g["n_clusters"],
        cluster_std=g["cluster_std"],
        within_pair_std=g["within_pair_std"],
        set_size_range=(g["set_size_min"], g["set_size_max"]),
        seed=cfg["seed"],
    )


def surrogate_spec(cfg: dict) -> SurrogateSpec:
    t = cfg["train"]
    return SurrogateSpec(t["surrogate"], t["rho"])


def resolve_kernel(cfg: dict, items: np.ndarray | None) -> PairKernel:
    """Build the pair kernel, filling an unset rbf bandwidth from the items."""
    k = cfg["kernel"]
    if k["kind"] == "linear":
        return PairKernel(BaseKernelSpec("linear"))
    gamma = k["gamma"]
    if gamma is None:
        if items is None:
            raise ValueError("rbf bandwidth is unset and no items are available to calibrate it")
        gamma = median_heuristic_gamma(items)
    return PairKernel(BaseKernelSpec("rbf", gamma))


def _calibration_items(spec: GeneratorSpec, master_seed: int, n_pairs: int = 128) -> np.ndarray:
    gen = PairGenerator(spec)
    pairs = gen.positives(n_pairs, stream_rng(master_seed, STREAM_CALIBRATE))
    return np.concatenate([np.concatenate([z.first.items, z.second.items]) for z in pairs])


def _dataset_items(dataset: MatchingDataset) -> np.ndarray:
    return np.concatenate(
        [np.concatenate([z.first.items, z.second.items]) for z in dataset.positives]
    )


def _resolve_class_kappa(pk: PairKernel, spec: GeneratorSpec, master_seed: int) -> float:
    """kappa of the kernel: analytic for rbf, calibration-sample sup for linear."""
    if pk.base.kind == "rbf":
        return kappa(pk)
    gen = PairGenerator(spec)
    sample = gen.positives(256, stream_rng(master_seed, STREAM_CALIBRATE, 1))
    return empirical_kappa(pk, sample)


def _random_ball_function(
    anchors, pk: PairKernel, g_entries: np.ndarray, r: float, rng
) -> RkhsScoreFunction:
    """Uniform random direction scaled to RKHS norm exactly r."""
    c = rng.standard_normal(len(anchors))
    q = float(c @ g_entries @ c)
    if q <= 0.0:
        c = np.zeros(len(anchors))
    else:
        c = c * (r / math.sqrt(q))
    return RkhsScoreFunction(c, anchors, pk)


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_generate(cfg: dict, out_dir: Path) -> Path:
    spec = generator_spec(cfg)
    m, alpha = cfg["dataset"]["m"], cfg["dataset"]["alpha"]
    rng = stream_rng(cfg["seed"], STREAM_GENERATE)
    dataset = assemble_with_ratio(spec, m, alpha, rng)
    meta = {
        "generator": io.generator_spec_to_dict(spec),
        "alpha_requested": alpha,
        "rounding": "half-even",
        "master_seed": cfg["seed"],
        "config": cfg,
    }
    path = out_dir / "dataset.txt"
    io.save_dataset(path, dataset, meta)
    print(f"wrote {path}  (m+={dataset.m_pos}, m-={dataset.m_neg}, alpha={dataset.alpha})")
    return path


def cmd_train(cfg: dict, dataset_path: Path, out_dir: Path) -> Path:
    dataset, _ = io.load_dataset(dataset_path)
    dataset_hash = io.sha256_of_file(dataset_path)
    pk = resolve_kernel(cfg, _dataset_items(dataset))
    t = cfg["train"]
    train_cfg = TrainConfig(
        r=t["r"],
        steps=t["steps"],
        step_size=t["step_size"],
        surrogate=surrogate_spec(cfg),
        seed=cfg["seed"],
    )
    f, trace = train(dataset, pk, train_cfg)

    resolved = {"kernel": io.kernel_to_dict(pk), "r": t["r"]}
    model_path = out_dir / "model.txt"
    io.save_model(
        model_path,
        f,
        {
            "r": t["r"],
            "norm": trace.final_norm,
            "dataset_sha256": dataset_hash,
            "master_seed": cfg["seed"],
            "config": cfg,
            "resolved": resolved,
        },
    )
    trace_path = out_dir / "trace.csv"
    io.write_csv(
        trace_path,
        ["step", "empirical_risk"],
        [(i, v) for i, v in enumerate(trace.risks)],
        meta={"config": cfg, "resolved": resolved, "dataset_sha256": dataset_hash},
    )
    print(
        f"wrote {model_path} and {trace_path}  "
        f"(risk {trace.risks[0]:.6f} -> {trace.risks[-1]:.6f}, norm {trace.final_norm:.6f})"
    )
    return model_path


def cmd_bounds(cfg: dict, model_path: Path, dataset_path: Path, out_dir: Path) -> Path:
    dataset, _ = io.load_dataset(dataset_path)
    dataset_hash = io.sha256_of_file(dataset_path)
    f, model_meta = io.load_model(model_path, dataset, dataset_hash)
    pk = f.kernel
    b = cfg["bounds"]
    delta, rho, n_sigma = b["delta"], b["rho"], b["n_sigma"]
    r = model_meta.get("r", cfg["train"]["r"])
    surrogate = surrogate_spec(cfg)
    L = lipschitz_constant(surrogate)
    spec = generator_spec(cfg)
    kap = _resolve_class_kappa(pk, spec, cfg["seed"])

    g = gram(dataset.pairs, pk)
    m_pos, m_neg = dataset.m_pos, dataset.m_neg
    rng = stream_rng(cfg["seed"], STREAM_BOUNDS)
    rad1 = rademacher_from_gram(g.entries[:m_pos, :m_pos], r, n_sigma, rng)
    rad2 = rademacher_from_gram(g.entries[m_pos:, m_pos:], r, n_sigma, rng)
    margin_risk = empirical_margin_risk(f, dataset, rho).value
    m_eff = min(m_pos, m_neg)

    thm1_expected = margin_bound(margin_risk, rad1.value, rad2.value, rho, m_eff, delta, "expected")
    thm1_empirical = margin_bound(
        margin_risk, rad1.value, rad2.value, rho, m_eff, delta, "empirical"
    )
    remark2 = rkhs_deviation_bound(dataset.m, dataset.alpha, delta, L, kap, r)

    def report_dict(rep):
        return {
            "bound_value": rep.bound_value,
            "components": rep.components,
            "inputs": rep.inputs,
            "source": rep.source,
        }

    payload = {
        "thm1_expected": report_dict(thm1_expected),
        "thm1_empirical": report_dict(thm1_empirical),
        "remark2": report_dict(remark2),
        "remark2_vacuous": bool(remark2.bound_value >= 1.0),
        "marginal_complexities": {
            "positives": {"value": rad1.value, "std_error": rad1.std_error, "n_sigma": n_sigma},
            "negatives": {"value": rad2.value, "std_error": rad2.std_error, "n_sigma": n_sigma},
        },
        "inputs": {
            "L": L,
            "kappa": kap,
            "r": r,
            "rho": rho,
            "delta": delta,
            "m": dataset.m,
            "m_pos": m_pos,
            "m_neg": m_neg,
            "m_effective": m_eff,
            "alpha": dataset.alpha,
            "empirical_margin_risk": margin_risk,
        },
        "hashes": {"dataset_sha256": dataset_hash, "model_sha256": io.sha256_of_file(model_path)},
        "config": cfg,
        "resolved": {"kernel": io.kernel_to_dict(pk)},
    }
    path = out_dir / "bounds.json"
    io.write_json(path, payload)
    print(
        f"wrote {path}  (thm1 empirical {thm1_empirical.bound_value:.6f}, "
        f"remark2 {remark2.bound_value:.6f})"
    )
    return path


def _sweep_grids(cfg: dict):
    s = cfg["sweep"]
    ms = np.unique(np.rint(np.geomspace(s["m_min"], s["m_max"], s["m_points"])).astype(int))
    alphas = np.round(
        np.arange(s["alpha_min"], s["alpha_max"] + s["alpha_step"] / 2, s["alpha_step"]), 10
    )
    return ms, alphas


def cmd_sweep(cfg: dict, out_dir: Path) -> Path:
    s = cfg["sweep"]
    if s["kappa"] is not None:
        kap = s["kappa"]
    elif cfg["kernel"]["kind"] == "rbf":
        kap = kappa(PairKernel(BaseKernelSpec("rbf", 1.0)))
    else:
        raise ValueError("sweep.kappa must be set explicitly for a linear base kernel")
    r = s["r"] if s["r"] is not None else cfg["train"]["r"]
    L, delta = s["L"], s["delta"]
    ms, alphas = _sweep_grids(cfg)

    rows = []
    argmin_rows = []
    for m in ms:
        bounds_at_m = []
        for alpha in alphas:
            value = rkhs_deviation_bound(int(m), float(alpha), delta, L, kap, r).bound_value
            rows.append((int(m), float(alpha), value))
            bounds_at_m.append(value)
        best = int(np.argmin(bounds_at_m))
        analytic = optimal_alpha(int(m), L, kap, r, delta).analytic
        argmin_rows.append((int(m), float(alphas[best]), bounds_at_m[best], analytic))

    resolved = {"L": L, "kappa": kap, "r": r, "delta": delta}
    meta = {"config": cfg, "resolved": resolved}
    path = out_dir / "sweep.csv"
    io.write_csv(path, ["m", "alpha", "bound"], rows, meta=meta)
    argmin_path = out_dir / "sweep_argmin.csv"
    io.write_csv(
        argmin_path,
        ["m", "alpha_argmin", "bound_min", "alpha_analytic"],
        argmin_rows,
        meta=meta,
    )
    print(f"wrote {path} ({len(rows)} rows) and {argmin_path}")
    return path


def _pick_model(kind: str, dataset, pk, g_entries, cfg, rng) -> RkhsScoreFunction:
    if kind == "random":
        return _random_ball_function(dataset.pairs, pk, g_entries, cfg["train"]["r"], rng)
    if kind == "train":
        t = cfg["train"]
        train_cfg = TrainConfig(
            r=t["r"],
            steps=t["steps"],
            step_size=t["step_size"],
            surrogate=surrogate_spec(cfg),
            seed=cfg["seed"],
        )
        f, _ = train(dataset, pk, train_cfg)
        return f
    raise ValueError(f"model must be 'random' or 'train', got {kind!r}")


def _validate_trial(idx, cfg, spec, pk, kap, L, epsilon, surrogate):
    v = cfg["validate"]
    m, alpha = cfg["dataset"]["m"], cfg["dataset"]["alpha"]
    rng = stream_rng(cfg["seed"], STREAM_TRIAL, idx)
    dataset = assemble_with_ratio(spec, m, alpha, rng)
    g = gram(dataset.pairs, pk)
    f = _pick_model(v["model"], dataset, pk, g.entries, cfg, rng)
    rhat = empirical_risk(f, dataset, surrogate).value
    n_mc = v["mc_per_side"] if v["mc_per_side"] is not None else 10 * m
    rmc = mc_expected_risk(f, PairGenerator(spec), n_mc, n_mc, surrogate, rng)
    gap = abs(rhat - rmc.value)
    slack = 3.0 * rmc.std_error
    return (
        idx,
        stream_seed(cfg["seed"], STREAM_TRIAL, idx),
        dataset.m,
        dataset.m_pos,
        dataset.m_neg,
        dataset.alpha,
        rhat,
        rmc.value,
        rmc.std_error,
        gap,
        epsilon,
        slack,
        gap <= epsilon,
        gap <= epsilon + slack,
    )


def cmd_validate(cfg: dict, out_dir: Path) -> int:
    v = cfg["validate"]
    spec = generator_spec(cfg)
    pk = resolve_kernel(cfg, _calibration_items(spec, cfg["seed"]))
    kap = _resolve_class_kappa(pk, spec, cfg["seed"])
    surrogate = surrogate_spec(cfg)
    L = lipschitz_constant(surrogate)
    r = cfg["train"]["r"]
    delta = cfg["bounds"]["delta"]
    m, alpha_req = cfg["dataset"]["m"], cfg["dataset"]["alpha"]
    m_pos = int(round(alpha_req * m))
    alpha = m_pos / m
    epsilon = rkhs_deviation_bound(m, alpha, delta, L, kap, r).bound_value

    start = time.perf_counter()
    indices = range(v["trials"])
    work = lambda i: _validate_trial(i, cfg, spec, pk, kap, L, epsilon, surrogate)
    if v["workers"] > 1:
        with ThreadPoolExecutor(max_workers=v["workers"]) as pool:
            rows = list(pool.map(work, indices))
    else:
        rows = [work(i) for i in indices]
    rows.sort(key=lambda row: row[0])
    elapsed = time.perf_counter() - start

    header = [
        "trial",
        "seed",
        "m",
        "m_pos",
        "m_neg",
        "alpha",
        "empirical_risk",
        "mc_risk",
        "mc_std_error",
        "gap",
        "epsilon",
        "slack",
        "covered",
        "covered_with_slack",
    ]
    resolved = {"kernel": io.kernel_to_dict(pk), "kappa": kap, "L": L, "r": r, "epsilon": epsilon}
    meta = {"config": cfg, "resolved": resolved}
    trials_path = out_dir / "validate_trials.csv"
    io.write_csv(trials_path, header, rows, meta=meta)

    gaps = np.array([row[9] for row in rows])
    covered = np.array([row[12] for row in rows])
    covered_slack = np.array([row[13] for row in rows])
    violation = float(1.0 - covered.mean())
    violation_slack = float(1.0 - covered_slack.mean())
    summary = {
        "trials": v["trials"],
        "delta": delta,
        "epsilon": epsilon,
        "violation_fraction": violation,
        "violation_fraction_with_slack": violation_slack,
        "mean_gap": float(gaps.mean()),
        "max_gap": float(gaps.max()),
        "passed": violation_slack <= delta,
        "config": cfg,
        "resolved": resolved,
    }
    summary_path = out_dir / "validate_summary.json"
    io.write_json(summary_path, summary)
    print(
        f"wrote {trials_path} and {summary_path}  "
        f"(violations {violation_slack:.3f} vs delta {delta}, mean gap {gaps.mean():.4f})"
    )
    print(f"validate: {v['trials']} trials in {elapsed:.1f}s", file=sys.stderr)
    return 0 if summary["passed"] else 1


def _margin_trial(idx, cfg, spec, pk, surrogate):
    mv = cfg["margin_validate"]
    m_pos, m_neg = mv["m_pos"], mv["m_neg"]
    rho = cfg["bounds"]["rho"]
    delta = cfg["bounds"]["delta"]
    n_sigma = cfg["bounds"]["n_sigma"]
    r = cfg["train"]["r"]
    rng = stream_rng(cfg["seed"], STREAM_TRIAL, idx)
    gen = PairGenerator(spec)
    positives = gen.positives(m_pos, rng)
    negatives = negative_sampling(positives, m_neg, rng)
    dataset = assemble(positives, negatives)
    g = gram(dataset.pairs, pk)
    f = _pick_model(mv["model"], dataset, pk, g.entries, cfg, rng)

    margin_risk = empirical_margin_risk(f, dataset, rho).value
    rad1 = rademacher_from_gram(g.entries[:m_pos, :m_pos], r, n_sigma, rng)
    rad2 = rademacher_from_gram(g.entries[m_pos:, m_pos:], r, n_sigma, rng)
    m_eff = min(m_pos, m_neg)
    bound_exp = margin_bound(margin_risk, rad1.value, rad2.value, rho, m_eff, delta, "expected")
    bound_emp = margin_bound(margin_risk, rad1.value, rad2.value, rho, m_eff, delta, "empirical")

    n_mc = mv["mc_per_side"] if mv["mc_per_side"] is not None else 10 * (m_pos + m_neg)
    rank = mc_ranking_error(f, gen, n_mc, n_mc, rng)
    slack = 3.0 * rank.std_error
    return (
        idx,
        stream_seed(cfg["seed"], STREAM_TRIAL, idx),
        m_pos,
        m_neg,
        margin_risk,
        rad1.value,
        rad2.value,
        bound_exp.bound_value,
        bound_emp.bound_value,
        rank.value,
        rank.std_error,
        slack,
        rank.value <= bound_exp.bound_value + slack,
        rank.value <= bound_emp.bound_value + slack,
    )


def cmd_margin_validate(cfg: dict, out_dir: Path) -> int:
    mv = cfg["margin_validate"]
    spec = generator_spec(cfg)
    pk = resolve_kernel(cfg, _calibration_items(spec, cfg["seed"]))
    surrogate = surrogate_spec(cfg)
    delta = cfg["bounds"]["delta"]

    start = time.perf_counter()
    work = lambda i: _margin_trial(i, cfg, spec, pk, surrogate)
    indices = range(mv["trials"])
    if mv["workers"] > 1:
        with ThreadPoolExecutor(max_workers=mv["workers"]) as pool:
            rows = list(pool.map(work, indices))
    else:
        rows = [work(i) for i in indices]
    rows.sort(key=lambda row: row[0])
    elapsed = time.perf_counter() - start

    header = [
        "trial",
        "seed",
        "m_pos",
        "m_neg",
        "empirical_margin_risk",
        "rad_positives",
        "rad_negatives",
        "bound_expected",
        "bound_empirical",
        "mc_ranking_error",
        "mc_std_error",
        "slack",
        "covered_expected",
        "covered_empirical",
    ]
    resolved = {
        "kernel": io.kernel_to_dict(pk),
        "rho": cfg["bounds"]["rho"],
        "r": cfg["train"]["r"],
    }
    meta = {"config": cfg, "resolved": resolved}
    trials_path = out_dir / "margin_trials.csv"
    io.write_csv(trials_path, header, rows, meta=meta)

    covered_exp = np.array([row[12] for row in rows])
    covered_emp = np.array([row[13] for row in rows])
    summary = {
        "trials": mv["trials"],
        "delta": delta,
        "violation_fraction_expected": float(1.0 - covered_exp.mean()),
        "violation_fraction_empirical": float(1.0 - covered_emp.mean()),
        "mean_bound_expected": float(np.mean([row[7] for row in rows])),
        "mean_bound_empirical": float(np.mean([row[8] for row in rows])),
        "mean_ranking_error": float(np.mean([row[9] for row in rows])),
        "passed": float(1.0 - covered_emp.mean()) <= delta
        and float(1.0 - covered_exp.mean()) <= delta,
        "config": cfg,
        "resolved": resolved,
    }
    summary_path = out_dir / "margin_summary.json"
    io.write_json(summary_path, summary)
    print(
        f"wrote {trials_path} and {summary_path}  "
        f"(violations expected {summary['violation_fraction_expected']:.3f}, "
        f"empirical {summary['violation_fraction_empirical']:.3f} vs delta {delta})"
    )
    print(f"margin-validate: {mv['trials']} trials in {elapsed:.1f}s", file=sys.stderr)
    return 0 if summary["passed"] else 1


# ---------------------------------------------------------------------------
# Entry point
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="setmatch",
        description="Set-to-set matching bound laboratory",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", type=str, default=None, help="JSON config file")
        p.add_argument("--seed", type=int, default=None, help="master seed (overrides config)")
        p.add_argument("--out", type=str, default="out", help="output directory")

    add_common(sub.add_parser("generate", help="generate a dataset file"))
    p_train = sub.add_parser("train", help="train a model on a dataset file")
    add_common(p_train)
    p_train.add_argument("--dataset", type=str, required=True)
    p_bounds = sub.add_parser("bounds", help="evaluate bounds for a model on a dataset")
    add_common(p_bounds)
    p_bounds.add_argument("--dataset", type=str, required=True)
    p_bounds.add_argument("--model", type=str, required=True)
    add_common(sub.add_parser("sweep", help="deviation-bound surface over (m, alpha)"))
    p_val = sub.add_parser("validate", help="empirical coverage of the deviation bound")
    add_common(p_val)
    p_val.add_argument("--workers", type=int, default=None, help="trial thread count")
    p_mval = sub.add_parser("margin-validate", help="empirical coverage of the margin bound")
    add_common(p_mval)
    p_mval.add_argument("--workers", type=int, default=None, help="trial thread count")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args.seed)
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        if args.command == "generate":
            cmd_generate(cfg, out_dir)
            return 0
        if args.command == "train":
            cmd_train(cfg, Path(args.dataset), out_dir)
            return 0
        if args.command == "bounds":
            cmd_bounds(cfg, Path(args.model), Path(args.dataset), out_dir)
            return 0
        if args.command == "sweep":
            cmd_sweep(cfg, out_dir)
            return 0
        if args.command == "validate":
            if args.workers is not None:
                cfg["validate"]["workers"] = args.workers
            return cmd_validate(cfg, out_dir)
        if args.command == "margin-validate":
            if args.workers is not None:
                cfg["margin_validate"]["workers"] = args.workers
            return cmd_margin_validate(cfg, out_dir)
        raise ValueError(f"unknown command {args.command!r}")
    except (SetMatchError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
