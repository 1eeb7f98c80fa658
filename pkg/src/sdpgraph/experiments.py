"""Config-driven Monte Carlo experiments with JSON-lines / CSV output.

Trial ``t`` of a run with seed ``s`` uses ``derive_seed(s, t)`` for every
sweep point, so sweeps over ``d`` or ``lam`` share random inputs.
"""

from concurrent.futures import ThreadPoolExecutor
import csv
import dataclasses
from dataclasses import dataclass, field
import itertools
import json
import math
from pathlib import Path
import time

import numpy as np
import yaml

from . import detection, graphs, matrices, solver, witness
from .errors import ConfigError
from .rng import derive_seed

SCHEMA_VERSION = 1
EXPERIMENTS = ("er_value", "regular_value", "goe_bbap", "goe_sdp", "detect2", "detect_r",
               "estimate", "witness", "grothendieck", "calibrate")
SWEEP_KEYS = ("d", "lam")


@dataclass
class ExperimentConfig:
    experiment: str
    n: int = 2000
    d: object = 10.0
    a: float = None
    b: float = None
    r: int = 2
    lam: object = 0.0
    delta: float = 0.05
    eps: float = None
    k: int = None
    restarts: int = solver.DEFAULT_RESTARTS
    tol: float = solver.DEFAULT_TOL
    max_epochs: int = solver.DEFAULT_MAX_EPOCHS
    trials: int = 20
    seed: int = 0
    margin: float = 0.02
    auto_d: bool = True
    out: str = None
    schema_version: int = SCHEMA_VERSION

    def to_dict(self):
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, doc):
        doc = dict(doc or {})
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(doc) - known)
        if unknown:
            raise ConfigError(f"unknown field(s): {', '.join(unknown)}")
        if "experiment" not in doc:
            raise ConfigError("experiment: required")
        cfg = cls(**doc)
        cfg.validate()
        return cfg

    def points(self):
        """Sweep points: dicts over the list-valued entries of d / lam."""
        axes = {key: getattr(self, key) for key in SWEEP_KEYS}
        lists = {k: v for k, v in axes.items() if isinstance(v, (list, tuple))}
        scalars = {k: v for k, v in axes.items() if k not in lists}
        out = []
        for combo in itertools.product(*lists.values()):
            p = dict(scalars)
            p.update(zip(lists, combo))
            out.append(p)
        return out

    def validate(self):
        errs = []
        if self.schema_version != SCHEMA_VERSION:
            errs.append(f"schema_version: expected {SCHEMA_VERSION}")
        if self.experiment not in EXPERIMENTS:
            errs.append(f"experiment: must be one of {', '.join(EXPERIMENTS)}")
        if not isinstance(self.n, int) or self.n < 1:
            errs.append("n: must be a positive integer")
        if not isinstance(self.trials, int) or self.trials < 1:
            errs.append("trials: must be >= 1")
        if self.restarts < 1:
            errs.append("restarts: must be >= 1")
        if self.tol <= 0:
            errs.append("tol: must be > 0")
        if self.k is not None and self.k < 1:
            errs.append("k: must be >= 1")
        for key in SWEEP_KEYS:
            vals = getattr(self, key)
            vals = vals if isinstance(vals, (list, tuple)) else [vals]
            if not vals or any(not isinstance(v, (int, float)) or v < 0 for v in vals):
                errs.append(f"{key}: must be a nonnegative number or list of them")
        if self.experiment in ("detect_r",) and (self.r < 2 or self.n % self.r):
            errs.append("r: must be >= 2 and divide n")
        if self.experiment in ("detect2", "estimate") and self.n % 2:
            errs.append("n: must be even for two communities")
        if self.experiment == "regular_value":
            for p in self.points():
                if p["d"] != int(p["d"]) or p["d"] >= self.n or (self.n * int(p["d"])) % 2:
                    errs.append("d: must be an integer < n with n*d even")
                    break
        if self.experiment == "calibrate" and self.trials < 10:
            errs.append("trials: calibration needs >= 10 trials")
        if errs:
            raise ConfigError("; ".join(errs))


def load_config(path, overrides=None):
    doc = yaml.safe_load(Path(path).read_text()) or {}
    doc.update({k: v for k, v in (overrides or {}).items() if v is not None})
    return ExperimentConfig.from_dict(doc)


def dump_config(cfg):
    return yaml.safe_dump(cfg.to_dict(), sort_keys=True)


def planted_params(d, lam, r=2):
    """(a, b) with average degree d and (a-b)/sqrt(r(a+(r-1)b)) = lam."""
    diff = lam * r * math.sqrt(d)
    b = d - diff / r
    return b + diff, b


def _ab(cfg, p):
    if cfg.a is not None and cfg.b is not None:
        return cfg.a, cfg.b
    return planted_params(p["d"], p["lam"], cfg.r if cfg.experiment == "detect_r" else 2)


def _solve_kwargs(cfg, n):
    return dict(k=cfg.k or solver.default_rank(n), restarts=cfg.restarts, tol=cfg.tol,
                max_epochs=cfg.max_epochs)


def _trial(cfg, p, seed):
    n = cfg.n
    kw = _solve_kwargs(cfg, n)
    exp = cfg.experiment
    if exp == "er_value":
        d = p["d"]
        g = graphs.gen_er(n, d, seed)
        op = graphs.centered_operator(g, d)
        pos = solver.opt_k(op, seed=derive_seed(seed, 1), **kw)[0]
        neg = solver.opt_k(-op, seed=derive_seed(seed, 2), **kw)[0]
        xi1 = solver.top_eigenvalue(op)
        scale = n * math.sqrt(d)
        return {"value": pos / scale, "value_neg": neg / scale,
                "spectral_bound": n * xi1 / scale, "spectral_ratio": n * xi1 / pos}
    if exp == "regular_value":
        d = int(p["d"])
        g = graphs.gen_regular(n, d, seed)
        val = solver.opt_k(graphs.centered_operator(g, d), seed=derive_seed(seed, 1), **kw)[0]
        return {"value": val / n, "target": 2 * math.sqrt(max(d - 1, 0))}
    if exp in ("goe_bbap", "goe_sdp", "witness", "grothendieck"):
        b = matrices.deformed_goe(n, p["lam"], seed)
        if exp == "goe_bbap":
            return {"xi1": float(np.linalg.eigvalsh(b)[-1]),
                    "prediction": matrices.bbap_prediction(p["lam"])}
        if exp == "goe_sdp":
            val = solver.opt_k(b, seed=derive_seed(seed, 1), **kw)[0]
            return {"value": val / n, "xi1": float(np.linalg.eigvalsh(b)[-1])}
        if exp == "witness":
            mode = "supercritical" if p["lam"] > 1 else "subcritical"
            val, w = witness.grid_search(b, mode)
            rec = {"value": val, "feasible": int(w is not None)}
            if w is not None:
                rec.update({f"w_{k}": v for k, v in w.params.items()})
            return rec
        sw = solver.sdp_sandwich(b, kw["k"], kw["restarts"], kw["tol"], kw["max_epochs"],
                                 derive_seed(seed, 1))
        return {"lower": sw.lower / n, "upper": sw.upper / n, "alpha_k": sw.alpha_k}
    if exp == "calibrate":
        g = graphs.gen_er(n, p["d"], seed)
        d_arg = None if cfg.auto_d else p["d"]
        res = detection.test_two_communities(g, d_arg, cfg.delta, seed=derive_seed(seed, 1), **kw)
        return {"statistic": res.statistic, "d_used": res.d_used}
    a, b_ = _ab(cfg, p)
    if exp == "detect2":
        g, _ = graphs.gen_planted_2(n, a, b_, seed)
        d_arg = None if cfg.auto_d else (a + b_) / 2
        res = detection.test_two_communities(g, d_arg, cfg.delta, seed=derive_seed(seed, 1), **kw)
    elif exp == "detect_r":
        g, _ = graphs.gen_planted_r(n, cfg.r, a, b_, seed)
        d_arg = None if cfg.auto_d else (a + (cfg.r - 1) * b_) / cfg.r
        res = detection.test_r_communities(g, d=d_arg, delta=cfg.delta, seed=derive_seed(seed, 1), **kw)
    else:
        g, labels = graphs.gen_planted_2(n, a, b_, seed)
        d_arg = None if cfg.auto_d else (a + b_) / 2
        est = detection.estimate_partition(g, d_arg, kw["k"], kw["restarts"], kw["tol"],
                                           kw["max_epochs"], derive_seed(seed, 1), labels)
        return {"overlap": est.overlap, "score": est.score}
    return {"statistic": res.statistic, "threshold": res.threshold,
            "decision": res.decision, "d_used": res.d_used}


def run_trial(cfg, p, trial):
    seed = derive_seed(cfg.seed, trial)
    t0 = time.perf_counter()
    out = _trial(cfg, p, seed)
    rec = {"experiment": cfg.experiment, "trial": trial, "seed": seed, "n": cfg.n}
    rec.update(p)
    rec.update(out)
    rec["wallclock_ms"] = 1000.0 * (time.perf_counter() - t0)
    return rec


def _sort_key(rec):
    return tuple(rec[k] for k in SWEEP_KEYS) + (rec["trial"],)


def summarize(records, margin=0.02):
    """Per sweep point: trial count, mean/std of numeric outputs, and the
    frequency of ``decision``.  Calibration runs also get ``delta``.
    Independent of record order."""
    groups = {}
    for rec in sorted(records, key=_sort_key):
        groups.setdefault(tuple(rec[k] for k in SWEEP_KEYS), []).append(rec)
    skip = {"trial", "seed", "n", "wallclock_ms", *SWEEP_KEYS}
    rows = []
    for key, recs in groups.items():
        row = {"experiment": recs[0]["experiment"], "n": recs[0]["n"],
               **dict(zip(SWEEP_KEYS, key)), "trials": len(recs)}
        for name in recs[0]:
            if name in skip or not isinstance(recs[0][name], (int, float)):
                continue
            vals = np.array([r[name] for r in recs], dtype=np.float64)
            if name == "decision":
                row["frequency"] = float(vals.mean())
            else:
                row[f"{name}_mean"] = float(vals.mean())
                row[f"{name}_std"] = float(vals.std(ddof=1)) if len(vals) > 1 else 0.0
        rows.append(row)
    if records and records[0]["experiment"] == "calibrate":
        for row in rows:
            stats = [r["statistic"] for r in records if tuple(r[k] for k in SWEEP_KEYS)
                     == tuple(row[k] for k in SWEEP_KEYS)]
            row["delta"] = delta_from_null(stats, margin)
    return rows


def run(cfg, workers=1):
    """Run every (sweep point, trial) of ``cfg``; returns ``(records, summary)``."""
    cfg.validate()
    jobs = [(p, t) for p in cfg.points() for t in range(cfg.trials)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as pool:
            records = list(pool.map(lambda j: run_trial(cfg, *j), jobs))
    else:
        records = [run_trial(cfg, p, t) for p, t in jobs]
    records.sort(key=_sort_key)
    return records, summarize(records, cfg.margin)


def write_outputs(out_dir, records, summary):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / "records.jsonl", "w") as fh:
        for rec in records:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")
    fields = []
    for row in summary:
        fields += [k for k in row if k not in fields]
    with open(out / "summary.csv", "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=fields)
        w.writeheader()
        w.writerows(summary)


def read_records(path):
    with open(path) as fh:
        return [json.loads(line) for line in fh if line.strip()]


def delta_from_null(stats, margin=0.02):
    """delta with 2(1 + delta) = max(null statistics) + margin."""
    stats = np.asarray(stats, dtype=np.float64)
    if stats.size == 0 or not np.all(np.isfinite(stats)):
        raise ConfigError("null statistics must be finite and nonempty")
    if stats.size > 1 and np.ptp(stats) == 0.0:
        raise ConfigError("degenerate null spread: all statistics identical")
    return (stats.max() + margin) / 2.0 - 1.0


def calibrate_threshold(cfg, margin=None, workers=1):
    """Run the null configuration and return delta."""
    cfg = dataclasses.replace(cfg, experiment="calibrate")
    cfg.validate()
    records, _ = run(cfg, workers)
    return delta_from_null([r["statistic"] for r in records],
                           cfg.margin if margin is None else margin)


OVERLAYS = {"bbap": matrices.bbap_prediction,
            "regular": lambda d: 2 * math.sqrt(max(d - 1, 0)),
            "two": lambda _x: 2.0}


def emit_plotdata(records, out_dir, x, y, series=None, overlay=None, name=None):
    """Tab-separated ``x  y_mean  y_err [overlay]`` files, one per series.

    Returns the list of written paths.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    base = name or f"{y}_vs_{x}"
    header = [x, y, f"{y}_err"] + ([overlay] if overlay else [])
    groups = {}
    for rec in records:
        groups.setdefault(rec.get(series) if series else None, {}).setdefault(
            rec[x], []).append(rec[y])
    if not groups:
        groups[None] = {}
    paths = []
    for key, by_x in sorted(groups.items(), key=lambda kv: str(kv[0])):
        path = out / (base + ("" if key is None else f"_{series}={key}") + ".tsv")
        with open(path, "w") as fh:
            fh.write("\t".join(header) + "\n")
            for xv in sorted(by_x):
                vals = np.asarray(by_x[xv], dtype=np.float64)
                err = vals.std(ddof=1) / math.sqrt(len(vals)) if len(vals) > 1 else 0.0
                cols = [xv, vals.mean(), err]
                if overlay:
                    cols.append(OVERLAYS[overlay](xv))
                fh.write("\t".join(repr(float(c)) for c in cols) + "\n")
        paths.append(path)
    return paths


def read_plotdata(path):
    lines = Path(path).read_text().splitlines()
    header = lines[0].split("\t")
    rows = [[float(v) for v in line.split("\t")] for line in lines[1:] if line]
    return header, np.array(rows).reshape(-1, len(header))
