"""Paired fast/precise benchmark harness with seeded input streams.

Reproduces the evaluation protocol at desk scale: a seeded linear
congruential generator feeds bit-identical inputs to both variants of
every operation category, latencies come from the monotonic clock with an
auto-scaled inner repeat count, and accuracy is measured against a
double-precision oracle. Accuracy columns are a pure function of the
seed; only latencies vary between runs.

Latency magnitudes on a host are not comparable to embedded cycle
counts; the structural properties (pairing, determinism scores, the
crossover grid) are the reproduction target.
"""

from __future__ import annotations

import csv
import json
import math
import statistics
import time
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import cordic, engine, matq, qcore
from .matq import FMatrix, QMatrix, TileConfig

LCG_MULTIPLIER = 1664525
LCG_INCREMENT = 1013904223
LCG_MODULUS = 1 << 32

CATEGORIES = ("sin", "cos", "mul", "matmul", "switch")

CSV_FIELDS = ("op", "variant", "input_id", "latency_ns", "repeats", "abs_error", "dim")


class LcgStream:
    """Deterministic 32-bit linear congruential generator (seed 42 default)."""

    def __init__(self, seed: int = 42) -> None:
        self.state = seed & 0xFFFFFFFF

    def next_u32(self) -> int:
        self.state = (LCG_MULTIPLIER * self.state + LCG_INCREMENT) % LCG_MODULUS
        return self.state

    def uniform(self, lo: float, hi: float) -> float:
        return lo + (hi - lo) * (self.next_u32() / float(LCG_MODULUS))


@dataclass
class BenchConfig:
    categories: tuple = CATEGORIES
    samples: int = 50
    seed: int = 42
    dims: tuple = (4, 8, 16)
    tile: int = 32
    mul_variant: str = "floor"  # floor | rounded

    def validate(self) -> None:
        for cat in self.categories:
            if cat not in CATEGORIES:
                raise ValueError(f"unknown category {cat!r}; expected one of {CATEGORIES}")
        if self.samples < 1:
            raise ValueError("samples must be >= 1")
        if not self.dims or any(d < 1 for d in self.dims):
            raise ValueError("dims must be nonempty with every entry >= 1")
        if self.tile < 1:
            raise ValueError("tile must be >= 1")
        if self.mul_variant not in ("floor", "rounded"):
            raise ValueError("mul_variant must be 'floor' or 'rounded'")


@dataclass
class BenchRecord:
    op: str
    variant: str            # fast | precise
    input_id: int
    latency_ns: float
    repeats: int
    abs_error: float | None  # absent for switch
    dim: int | None          # matmul only


# --- timing ----------------------------------------------------------------

_RES_NS: float | None = None


def clock_resolution_ns() -> float:
    """Effective resolution of the monotonic timer, measured once."""
    global _RES_NS
    if _RES_NS is None:
        reported = time.get_clock_info("perf_counter").resolution * 1e9
        deltas = []
        last = time.perf_counter_ns()
        for _ in range(500):
            now = time.perf_counter_ns()
            if now > last:
                deltas.append(now - last)
            last = now
        observed = float(min(deltas)) if deltas else 1.0
        _RES_NS = max(reported, observed, 1.0)
    return _RES_NS


def _calibrate_repeats(fn) -> int:
    """Smallest power-of-two repeat count whose timed region exceeds 100x resolution."""
    floor_ns = 100.0 * clock_resolution_ns()
    repeats = 1
    while repeats < (1 << 22):
        t0 = time.perf_counter_ns()
        for _ in range(repeats):
            fn()
        if time.perf_counter_ns() - t0 >= floor_ns:
            return repeats
        repeats *= 2
    return repeats


def _time_once(fn, repeats: int) -> float:
    t0 = time.perf_counter_ns()
    for _ in range(repeats):
        fn()
    t1 = time.perf_counter_ns()
    return (t1 - t0) / repeats


# --- input generation --------------------------------------------------------

def generate_inputs(config: BenchConfig) -> dict:
    """Seed-deterministic inputs per category; each category gets a fresh stream."""
    config.validate()
    out: dict = {}
    for cat in config.categories:
        stream = LcgStream(config.seed)
        if cat in ("sin", "cos"):
            out[cat] = [stream.uniform(-math.pi, math.pi) for _ in range(config.samples)]
        elif cat == "mul":
            out[cat] = [
                (stream.uniform(-100.0, 100.0), stream.uniform(-100.0, 100.0))
                for _ in range(config.samples)
            ]
        elif cat == "matmul":
            mats = []
            for i in range(config.samples):
                n = config.dims[i % len(config.dims)]
                a = np.array(
                    [[stream.uniform(-1.0, 1.0) for _ in range(n)] for _ in range(n)]
                )
                b = np.array(
                    [[stream.uniform(-1.0, 1.0) for _ in range(n)] for _ in range(n)]
                )
                mats.append((n, a, b))
            out[cat] = mats
        else:  # switch: no value inputs, just sample slots
            out[cat] = list(range(config.samples))
    return out


# --- category runners --------------------------------------------------------

def _record_pair(op, input_id, fast_fn, precise_fn, fast_err, precise_err, dim=None):
    recs = []
    for variant, fn, err in (("fast", fast_fn, fast_err), ("precise", precise_fn, precise_err)):
        repeats = _calibrate_repeats(fn)
        recs.append(
            BenchRecord(op, variant, input_id, _time_once(fn, repeats), repeats, err, dim)
        )
    return recs


def _run_trig(op: str, angles, config: BenchConfig):
    exact = math.sin if op == "sin" else math.cos
    np_fn = np.sin if op == "sin" else np.cos
    component = (lambda sc: sc.sin) if op == "sin" else (lambda sc: sc.cos)
    records = []
    for i, x in enumerate(angles):
        q = qcore.from_real(x)
        x32 = np.float32(x)
        fast_val = qcore.to_real(component(cordic.sincos(q)))
        precise_val = float(np_fn(x32))
        records += _record_pair(
            op,
            i,
            lambda q=q: cordic.sincos(q),
            lambda x32=x32: np_fn(x32),
            abs(fast_val - exact(x)),
            abs(precise_val - exact(x)),
        )
    return records


def _run_mul(pairs, config: BenchConfig):
    qmul = qcore.mul if config.mul_variant == "floor" else qcore.mul_rounded
    records = []
    for i, (a, b) in enumerate(pairs):
        qa, qb = qcore.from_real(a), qcore.from_real(b)
        a32, b32 = np.float32(a), np.float32(b)
        exact = a * b
        records += _record_pair(
            "mul",
            i,
            lambda qa=qa, qb=qb: qmul(qa, qb),
            lambda a32=a32, b32=b32: a32 * b32,
            abs(qcore.to_real(qmul(qa, qb)) - exact),
            abs(float(a32 * b32) - exact),
        )
    return records


def _run_matmul(mats, config: BenchConfig):
    tile = TileConfig(config.tile)
    records = []
    for i, (n, a, b) in enumerate(mats):
        qa, qb = QMatrix.from_real(a), QMatrix.from_real(b)
        fa, fb = FMatrix.from_real(a), FMatrix.from_real(b)
        exact = a @ b
        fast_err = float(np.abs(matq.matmul_tiled(qa, qb, tile).to_real() - exact).mean())
        precise_err = float(np.abs(matq.matmul_float(fa, fb).to_real() - exact).mean())
        records += _record_pair(
            "matmul",
            i,
            lambda qa=qa, qb=qb, tile=tile: matq.matmul_tiled(qa, qb, tile),
            lambda fa=fa, fb=fb: matq.matmul_float(fa, fb),
            fast_err,
            precise_err,
            dim=n,
        )
    return records


def _run_switch(slots, config: BenchConfig):
    """Barriered mode switch vs bare table rebinding (dispatch-only baseline)."""
    eng = engine.init(engine.Mode.FAST, tile=TileConfig(config.tile))
    modes = (engine.Mode.PRECISE, engine.Mode.FAST)
    flip_state = {"i": 0}

    def barriered():
        eng.set_mode(modes[flip_state["i"] & 1])
        flip_state["i"] += 1

    tables = engine._build_tables(TileConfig(config.tile))
    bound = {"table": tables[engine.Mode.FAST]}
    plain_state = {"i": 0}

    def plain_rebind():
        bound["table"] = tables[modes[plain_state["i"] & 1]]
        plain_state["i"] += 1

    try:
        records = []
        for i in slots:
            records += _record_pair("switch", i, barriered, plain_rebind, None, None)
        return records
    finally:
        eng.stop()


_RUNNERS = {
    "sin": lambda inputs, cfg: _run_trig("sin", inputs, cfg),
    "cos": lambda inputs, cfg: _run_trig("cos", inputs, cfg),
    "mul": _run_mul,
    "matmul": _run_matmul,
    "switch": _run_switch,
}


# --- statistics ---------------------------------------------------------------

def determinism_score(samples) -> float:
    """1 - coefficient of variation, clamped to [0, 1].

    Identical samples score exactly 1.0; spreads wider than the mean
    clamp to 0.
    """
    samples = list(samples)
    if len(samples) < 2:
        raise ValueError("determinism score needs at least 2 samples")
    if any(s <= 0 for s in samples):
        raise ValueError("latency samples must be positive")
    mean = statistics.fmean(samples)
    sd = statistics.stdev(samples)
    return max(0.0, 1.0 - sd / mean)


def _outlier_count(samples) -> int:
    if len(samples) < 2:
        return 0
    mean = statistics.fmean(samples)
    sd = statistics.stdev(samples)
    if sd == 0:
        return 0
    return sum(1 for s in samples if abs(s - mean) > 3 * sd)


def summarize(records) -> dict:
    """Per-category, per-variant stats plus paired mean speedup."""
    cats: dict = {}
    for rec in records:
        cats.setdefault(rec.op, {"fast": {}, "precise": {}})
        cats[rec.op][rec.variant][rec.input_id] = rec.latency_ns
    out = {}
    for op, variants in cats.items():
        entry: dict = {}
        for variant in ("fast", "precise"):
            lats = list(variants[variant].values())
            if not lats:
                continue
            entry[variant] = {
                "median_ns": statistics.median(lats),
                "mean_ns": statistics.fmean(lats),
                "determinism": determinism_score(lats) if len(lats) >= 2 else None,
                "outliers": _outlier_count(lats),
                "samples": len(lats),
            }
        shared = sorted(set(variants["fast"]) & set(variants["precise"]))
        if shared:
            entry["mean_speedup"] = statistics.fmean(
                variants["precise"][i] / variants["fast"][i] for i in shared
            )
        out[op] = entry
    return out


# --- suite and sweep ----------------------------------------------------------

def run_suite(config: BenchConfig | None = None):
    """Run every configured category; returns (records, summary)."""
    config = config or BenchConfig()
    config.validate()
    inputs = generate_inputs(config)
    records = []
    for cat in config.categories:
        records += _RUNNERS[cat](inputs[cat], config)
    summary = {
        "seed": config.seed,
        "config": asdict(config),
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
        "clock_resolution_ns": clock_resolution_ns(),
        "categories": summarize(records),
    }
    return records, summary


def crossover_sweep(dims, tiles, reps: int = 20, seed: int = 42) -> dict:
    """Median tiled-Q16.16 vs float latency over a (dim x tile) grid.

    Cells where the dimension is below the tile size are marked sub_tile:
    blocking cannot engage there. The smallest dimension (per tile) where
    the fast kernel reaches parity is reported, never asserted; host
    crossover points say nothing about other hardware.
    """
    dims = list(dims)
    tiles = list(tiles)
    if not dims or any(d < 1 for d in dims):
        raise ValueError("dims must be nonempty with every entry >= 1")
    if not tiles or any(t < 1 for t in tiles):
        raise ValueError("tiles must be nonempty with every entry >= 1")
    if reps < 1:
        raise ValueError("reps must be >= 1")

    stream = LcgStream(seed)
    operands = {}
    for n in dims:
        a = np.array([[stream.uniform(-1.0, 1.0) for _ in range(n)] for _ in range(n)])
        b = np.array([[stream.uniform(-1.0, 1.0) for _ in range(n)] for _ in range(n)])
        operands[n] = (
            QMatrix.from_real(a), QMatrix.from_real(b),
            FMatrix.from_real(a), FMatrix.from_real(b),
        )

    cells = []
    for n in dims:
        qa, qb, fa, fb = operands[n]
        for t in tiles:
            tile = TileConfig(t)

            def fast_fn(qa=qa, qb=qb, tile=tile):
                matq.matmul_tiled(qa, qb, tile)

            def precise_fn(fa=fa, fb=fb):
                matq.matmul_float(fa, fb)

            fast_reps = _calibrate_repeats(fast_fn)
            precise_reps = _calibrate_repeats(precise_fn)
            fast_med = statistics.median(_time_once(fast_fn, fast_reps) for _ in range(reps))
            precise_med = statistics.median(
                _time_once(precise_fn, precise_reps) for _ in range(reps)
            )
            cells.append(
                {
                    "dim": n,
                    "tile": t,
                    "fast_median_ns": fast_med,
                    "precise_median_ns": precise_med,
                    "speedup": precise_med / fast_med,
                    "sub_tile": n < t,
                    "repetitions": reps,
                }
            )

    crossover_by_tile = {}
    for t in tiles:
        hits = sorted(c["dim"] for c in cells if c["tile"] == t and c["speedup"] >= 1.0)
        crossover_by_tile[str(t)] = hits[0] if hits else None

    return {
        "dims": dims,
        "tiles": tiles,
        "repetitions": reps,
        "seed": seed,
        "cells": cells,
        "crossover_by_tile": crossover_by_tile,
    }


# --- emit ----------------------------------------------------------------------

def emit(records, summary, out_dir, fmt: str = "both"):
    """Write records.csv and/or summary.json; returns the written paths."""
    if not records:
        raise ValueError("no records to emit")
    if fmt not in ("csv", "json", "both"):
        raise ValueError(f"unknown format {fmt!r}")
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc
    written = []
    if fmt in ("csv", "both"):
        path = out / "records.csv"
        try:
            with open(path, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(CSV_FIELDS)
                for rec in records:
                    writer.writerow(
                        [
                            rec.op,
                            rec.variant,
                            rec.input_id,
                            repr(rec.latency_ns),
                            rec.repeats,
                            "" if rec.abs_error is None else repr(rec.abs_error),
                            "" if rec.dim is None else rec.dim,
                        ]
                    )
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc}") from exc
        written.append(path)
    if fmt in ("json", "both"):
        path = out / "summary.json"
        try:
            with open(path, "w") as fh:
                json.dump(summary, fh, indent=2)
                fh.write("\n")
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc}") from exc
        written.append(path)
    return written
