"""Harness protocol: seeded streams, pairing, stats, emit formats, CLI."""

import json
import math

import pytest

from qengine import bench, cli
from qengine.bench import BenchConfig, BenchRecord, LcgStream


def small_config(**overrides):
    defaults = dict(categories=("sin", "mul"), samples=4, seed=42, dims=(4,), tile=32)
    defaults.update(overrides)
    return BenchConfig(**defaults)


class TestLcgStream:
    def test_recurrence_constants(self):
        s = LcgStream(42)
        assert s.next_u32() == (1664525 * 42 + 1013904223) % 2**32

    def test_identical_seeds_identical_streams(self):
        a = LcgStream(42)
        b = LcgStream(42)
        assert [a.next_u32() for _ in range(1000)] == [b.next_u32() for _ in range(1000)]

    def test_uniform_range(self):
        s = LcgStream(1)
        vals = [s.uniform(-math.pi, math.pi) for _ in range(1000)]
        assert all(-math.pi <= v < math.pi for v in vals)
        assert min(vals) < -2.0 and max(vals) > 2.0  # actually spreads


class TestDeterminismScore:
    def test_identical_samples_score_one(self):
        assert bench.determinism_score([250.0] * 50) == 1.0

    def test_frozen_example(self):
        # stddev({100, 200}) = 70.710..., mean = 150
        assert bench.determinism_score([100.0, 200.0]) == pytest.approx(0.5285954792, abs=1e-9)

    def test_clamped_at_zero(self):
        assert bench.determinism_score([1.0, 1.0, 1000.0]) == 0.0

    def test_input_validation(self):
        with pytest.raises(ValueError):
            bench.determinism_score([5.0])
        with pytest.raises(ValueError):
            bench.determinism_score([1.0, -2.0])


class TestInputs:
    def test_deterministic_across_calls(self):
        cfg = small_config(categories=("sin", "cos", "mul", "matmul"))
        a = bench.generate_inputs(cfg)
        b = bench.generate_inputs(cfg)
        assert a["sin"] == b["sin"]
        assert a["mul"] == b["mul"]
        for (n1, x1, y1), (n2, x2, y2) in zip(a["matmul"], b["matmul"]):
            assert n1 == n2 and (x1 == x2).all() and (y1 == y2).all()

    def test_ranges_and_dim_cycling(self):
        cfg = BenchConfig(categories=("sin", "mul", "matmul"), samples=6, dims=(4, 8))
        inputs = bench.generate_inputs(cfg)
        assert all(-math.pi <= x <= math.pi for x in inputs["sin"])
        assert all(-100 <= a <= 100 and -100 <= b <= 100 for a, b in inputs["mul"])
        assert [n for n, _, _ in inputs["matmul"]] == [4, 8, 4, 8, 4, 8]

    def test_unknown_category_rejected(self):
        with pytest.raises(ValueError):
            bench.generate_inputs(small_config(categories=("sqrt",)))
        with pytest.raises(ValueError):
            bench.generate_inputs(small_config(samples=0))


class TestSuite:
    def test_pairing_and_counts(self):
        records, summary = bench.run_suite(small_config())
        assert len(records) == 2 * 4 * 2  # 2 categories x 4 samples x 2 variants
        for op in ("sin", "mul"):
            fast = {r.input_id for r in records if r.op == op and r.variant == "fast"}
            precise = {r.input_id for r in records if r.op == op and r.variant == "precise"}
            assert fast == precise == set(range(4))
        assert all(r.latency_ns > 0 for r in records)
        assert "mean_speedup" in summary["categories"]["mul"]

    def test_mul_only_config(self):
        records, _ = bench.run_suite(small_config(categories=("mul",), samples=10))
        assert len(records) == 20
        assert all(r.op == "mul" for r in records)

    def test_accuracy_columns_reproducible(self):
        cfg = small_config(categories=("sin", "mul", "matmul"), samples=3, dims=(4,))
        rec1, _ = bench.run_suite(cfg)
        rec2, _ = bench.run_suite(cfg)
        err1 = [(r.op, r.variant, r.input_id, r.abs_error) for r in rec1]
        err2 = [(r.op, r.variant, r.input_id, r.abs_error) for r in rec2]
        assert err1 == err2

    def test_mul_variant_changes_fast_error(self):
        floor_rec, _ = bench.run_suite(small_config(categories=("mul",), samples=20))
        round_rec, _ = bench.run_suite(
            small_config(categories=("mul",), samples=20, mul_variant="rounded")
        )
        floor_err = [r.abs_error for r in floor_rec if r.variant == "fast"]
        round_err = [r.abs_error for r in round_rec if r.variant == "fast"]
        assert floor_err != round_err
        assert all(e <= 2.0**-17 + 2 * 100 * 2.0**-17 for e in round_err)

    def test_switch_category_smoke(self):
        records, summary = bench.run_suite(
            BenchConfig(categories=("switch",), samples=3)
        )
        assert len(records) == 6
        assert all(r.abs_error is None for r in records)
        assert summary["categories"]["switch"]["fast"]["samples"] == 3


class TestEmit:
    def make_records(self, n):
        return [
            BenchRecord("mul", "fast", i, 12.5 + i, 4, 1e-6, None) for i in range(n)
        ]

    def test_csv_shape_and_header(self, tmp_path):
        paths = bench.emit(self.make_records(10), {"seed": 42}, tmp_path, "csv")
        lines = paths[0].read_text().splitlines()
        assert len(lines) == 11
        assert lines[0] == "op,variant,input_id,latency_ns,repeats,abs_error,dim"

    def test_json_round_trips(self, tmp_path):
        records, summary = bench.run_suite(small_config(samples=2))
        paths = bench.emit(records, summary, tmp_path, "both")
        loaded = json.loads((tmp_path / "summary.json").read_text())
        assert loaded == json.loads(json.dumps(summary))
        assert loaded["seed"] == 42
        assert {p.name for p in paths} == {"records.csv", "summary.json"}

    def test_empty_fields_for_switch_and_scalar(self, tmp_path):
        recs = [
            BenchRecord("switch", "fast", 0, 5000.0, 1, None, None),
            BenchRecord("matmul", "fast", 0, 5000.0, 1, 1e-5, 8),
        ]
        bench.emit(recs, {}, tmp_path, "csv")
        lines = (tmp_path / "records.csv").read_text().splitlines()
        assert lines[1].endswith(",,")  # no abs_error, no dim
        assert lines[2].endswith(",8")

    def test_validation(self, tmp_path):
        with pytest.raises(ValueError):
            bench.emit([], {}, tmp_path, "csv")
        with pytest.raises(ValueError):
            bench.emit(self.make_records(1), {}, tmp_path, "yaml")


class TestCrossover:
    def test_grid_complete_and_subtile_marked(self):
        report = bench.crossover_sweep([4, 8, 16], [32], reps=2)
        assert len(report["cells"]) == 3
        assert all(c["sub_tile"] for c in report["cells"])  # all below tile size
        assert set(report["crossover_by_tile"]) == {"32"}

    def test_degenerate_dim_one(self):
        report = bench.crossover_sweep([1], [8], reps=2)
        cell = report["cells"][0]
        assert cell["fast_median_ns"] > 0 and cell["precise_median_ns"] > 0

    def test_validation(self):
        with pytest.raises(ValueError):
            bench.crossover_sweep([], [8])
        with pytest.raises(ValueError):
            bench.crossover_sweep([4], [0])


class TestCli:
    def test_suite_end_to_end(self, tmp_path, capsys):
        rc = cli.main(
            [
                "suite",
                "--categories", "mul,sin",
                "--samples", "3",
                "--seed", "42",
                "--out", str(tmp_path),
                "--format", "both",
            ]
        )
        assert rc == 0
        assert (tmp_path / "records.csv").exists()
        assert (tmp_path / "summary.json").exists()
        header = (tmp_path / "records.csv").read_text().splitlines()[0]
        assert header == "op,variant,input_id,latency_ns,repeats,abs_error,dim"

    def test_invalid_category_fails_with_diagnostic(self, tmp_path, capsys):
        rc = cli.main(["suite", "--categories", "cbrt", "--out", str(tmp_path)])
        assert rc != 0
        assert "cbrt" in capsys.readouterr().err

    def test_crossover_end_to_end(self, tmp_path):
        rc = cli.main(
            ["crossover", "--dims", "2,4", "--tiles", "8", "--reps", "2",
             "--out", str(tmp_path), "--format", "both"]
        )
        assert rc == 0
        report = json.loads((tmp_path / "crossover.json").read_text())
        assert len(report["cells"]) == 2
        assert (tmp_path / "crossover.csv").exists()
