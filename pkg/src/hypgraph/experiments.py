"""Seeded Monte Carlo experiments over G(n, p).

Trial ``t`` of an experiment seeded with ``seed`` samples its graph from
substream ``mix_seed(seed, t)``, so any single trial can be rerun alone.
Trials run on a thread pool and are reduced in trial order; nothing but the
``runtime_ms`` column depends on scheduling.
"""

from __future__ import annotations

import csv
import hashlib
import io
import math
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .errors import CapacityError, InputError, InternalAssertionError
from .graph import GenSpec, connected_components, gen_gnp
from .hyperbolicity import format_delta, hyperbolicity
from .metric import apsp, check_delta_diameter_bound, diameter_from_matrix
from .regime import DEFAULT_TAU, dense_probabilities, predict
from .rng import mix_seed

CSV_HEADER = (
    "trial,seed,n,m,diameter,delta_doubled,witness_u,witness_v,witness_x,witness_y,bound_ok,runtime_ms"
)
Z95 = 1.959963984540054


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    seed: int
    n: int
    p: float
    m: int
    diameter: int | None
    max_component_diameter: int
    delta_doubled: int
    witness: tuple | None
    runtime_ms: float
    bound_check: bool

    def csv_fields(self):
        w = list(self.witness) if self.witness is not None else ["", "", "", ""]
        return [
            self.trial,
            self.seed,
            self.n,
            self.m,
            "inf" if self.diameter is None else self.diameter,
            self.delta_doubled,
            *w,
            "true" if self.bound_check else "false",
            f"{self.runtime_ms:.3f}",
        ]


def run_trial(n: int, p: float, trial: int, seed: int, algo: str = "pruned") -> TrialRecord:
    sub = mix_seed(seed, trial)
    t0 = time.perf_counter()
    g = gen_gnp(GenSpec(n, p, sub))
    try:
        dm = apsp(g)
        rep = diameter_from_matrix(dm, connected_components(g))
        res = hyperbolicity(g, algo, dm=dm)
    except CapacityError as exc:
        raise CapacityError(f"trial {trial} (seed {sub}): {exc}") from exc
    # Each component obeys its own diameter bound, and the bound is monotone in D.
    ok = check_delta_diameter_bound(res.delta_doubled, rep.max_component_diameter)
    return TrialRecord(
        trial=trial,
        seed=sub,
        n=n,
        p=p,
        m=g.m,
        diameter=rep.diameter,
        max_component_diameter=rep.max_component_diameter,
        delta_doubled=res.delta_doubled,
        witness=res.witness,
        runtime_ms=(time.perf_counter() - t0) * 1e3,
        bound_check=ok,
    )


def run_trials(n, p, trials, seed, algo="pruned", threads=1):
    if trials < 1:
        raise InputError(f"trials must be at least 1, got {trials}")
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            return list(pool.map(lambda t: run_trial(n, p, t, seed, algo), range(trials)))
    return [run_trial(n, p, t, seed, algo) for t in range(trials)]


def wilson_interval(k: int, n: int, z: float = Z95):
    """Wilson score interval for a binomial proportion."""
    if n == 0:
        return (0.0, 1.0)
    phat = k / n
    denom = 1 + z * z / n
    centre = (phat + z * z / (2 * n)) / denom
    half = z * math.sqrt(phat * (1 - phat) / n + z * z / (4 * n * n)) / denom
    # pin the endpoints so rounding never excludes the point estimate
    lo = 0.0 if k == 0 else min(phat, centre - half)
    hi = 1.0 if k == n else max(phat, centre + half)
    return (lo, hi)


def records_csv(records, with_runtime: bool = True) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    header = CSV_HEADER.split(",")
    w.writerow(header if with_runtime else header[:-1])
    for r in records:
        row = r.csv_fields()
        w.writerow(row if with_runtime else row[:-1])
    return buf.getvalue()


def determinism_hash(records) -> str:
    """SHA-256 of the CSV without the runtime column."""
    return hashlib.sha256(records_csv(records, with_runtime=False).encode()).hexdigest()


@dataclass
class ExperimentSummary:
    config: dict
    trials: int
    empirical: dict
    expected: dict | None
    intervals: dict
    max_deviation: float | None
    wall_time_s: float
    counts: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    def as_json(self):
        out = {
            "config": self.config,
            "trials": self.trials,
            "empirical": self.empirical,
            "expected": self.expected,
            "intervals": {k: list(v) for k, v in self.intervals.items()},
            "max_deviation": self.max_deviation,
            "wall_time_s": round(self.wall_time_s, 3),
            "counts": self.counts,
        }
        out.update(self.extra)
        return out


def empty_summary(config) -> ExperimentSummary:
    return ExperimentSummary(config, 0, {}, None, {}, None, 0.0)


def _summarise(config, records, labels, expected, wall):
    counts = Counter(labels)
    total = len(records)
    keys = list(expected) if expected else sorted(counts, key=_label_order)
    keys += [k for k in sorted(counts, key=_label_order) if k not in keys]
    empirical = {k: counts.get(k, 0) / total for k in keys}
    intervals = {k: wilson_interval(counts.get(k, 0), total) for k in keys}
    dev = None
    if expected:
        dev = max(abs(empirical[k] - expected.get(k, 0.0)) for k in keys)
    return ExperimentSummary(
        config=config,
        trials=total,
        empirical=empirical,
        expected=expected,
        intervals=intervals,
        max_deviation=dev,
        wall_time_s=wall,
        counts={k: counts.get(k, 0) for k in keys},
        extra={"violations": sum(not r.bound_check for r in records), "determinism_hash": determinism_hash(records)},
    )


def _label_order(label):
    return math.inf if label == "other" else float(label)


def check_bounds(records):
    bad = [r for r in records if not r.bound_check]
    if bad:
        r = bad[0]
        raise InternalAssertionError(
            f"trial {r.trial} (seed {r.seed}): delta_doubled={r.delta_doubled} "
            f"violates the diameter bound for D={r.max_component_diameter}"
        )


DENSE_LABELS = {0: "0", 1: "0.5", 2: "1"}


def run_dense_experiment(n, c=None, trials=1, seed=0, threads=1, p=None, algo="pruned", check=True):
    """Dense regime ``p = 1 - 2c/n**2`` (or an explicit ``p``) against the limit law.

    Returns ``(summary, records)``. Values above 1 are tallied as ``"other"``.
    """
    if n < 20:
        raise InputError(f"dense experiment needs n >= 20, got {n}")
    if p is None:
        if c is None or c <= 0:
            raise InputError("dense experiment needs c > 0 or an explicit p")
        p = 1 - 2 * c / n ** 2
    c_eff = (1 - p) * n * n / 2
    config = {"kind": "dense", "n": n, "c": c_eff, "p": p, "trials": trials, "seed": seed, "algo": algo, "threads": threads}
    t0 = time.perf_counter()
    records = run_trials(n, p, trials, seed, algo, threads)
    labels = [DENSE_LABELS.get(r.delta_doubled, "other") for r in records]
    expected = None
    if c_eff > 0:
        p0, ph, p1 = dense_probabilities(c_eff)
        expected = {"0": p0, "0.5": ph, "1": p1, "other": 0.0}
    summary = _summarise(config, records, labels, expected, time.perf_counter() - t0)
    if check:
        check_bounds(records)
    return summary, records


def run_regime_experiment(config: dict, check=True):
    """Sparse-to-moderate regimes judged against :func:`predict`.

    ``config`` holds ``n``, one of ``p`` / ``d``, ``trials``, ``seed`` and
    optionally ``algo``, ``threads``, ``tau``. Returns ``(summary, records)``.
    """
    cfg = normalise_config(config)
    if cfg["kind"] == "dense":
        return run_dense_experiment(
            cfg["n"], p=cfg["p"], trials=cfg["trials"], seed=cfg["seed"],
            threads=cfg["threads"], algo=cfg["algo"], check=check,
        )
    n, p = cfg["n"], cfg["p"]
    pred = predict(n, p, tau=cfg["tau"])
    t0 = time.perf_counter()
    records = run_trials(n, p, cfg["trials"], cfg["seed"], cfg["algo"], cfg["threads"])
    labels = [format_delta(r.delta_doubled) for r in records]
    expected = None
    if pred.distribution is not None:
        expected = {format_delta(k): v for k, v in pred.distribution.items()}
    elif pred.predicted is not None:
        expected = {format_delta(pred.predicted): 1.0}
    summary = _summarise(cfg, records, labels, expected, time.perf_counter() - t0)
    values = Counter(r.delta_doubled for r in records)
    modal = min(values, key=lambda v: (-values[v], v))
    summary.extra.update(
        prediction=pred.as_json(),
        modal_delta_doubled=modal,
        matching_trials=sum(pred.admits(r.delta_doubled) for r in records),
        modal_matches=pred.admits(modal),
    )
    if check:
        check_bounds(records)
    return summary, records


def normalise_config(config: dict) -> dict:
    """Validate an experiment config and fill defaults; ``d`` and ``c`` are turned into ``p``."""
    cfg = dict(config)
    kind = cfg.get("kind", "regime")
    if kind not in ("regime", "dense"):
        raise InputError(f"unknown experiment kind {kind!r}")
    try:
        n = int(cfg["n"])
        trials = int(cfg["trials"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"config needs integer n and trials: {exc}") from exc
    given = [k for k in ("p", "d", "c") if cfg.get(k) is not None]
    if len(given) != 1:
        raise InputError("config must give exactly one of p, d, c")
    if "d" in given:
        p = float(cfg["d"]) / (n - 1)
    elif "c" in given:
        p = 1 - 2 * float(cfg["c"]) / n ** 2
    else:
        p = float(cfg["p"])
    if trials < 1:
        raise InputError(f"trials must be at least 1, got {trials}")
    if not 0 < p <= 1:
        raise InputError(f"edge probability {p} outside (0, 1]")
    return {
        "kind": kind,
        "n": n,
        "p": p,
        **{k: cfg[k] for k in given if k != "p"},
        "trials": trials,
        "seed": int(cfg.get("seed", 0)),
        "algo": cfg.get("algo", "pruned"),
        "threads": int(cfg.get("threads", 1)),
        "tau": float(cfg.get("tau", DEFAULT_TAU)),
    }
