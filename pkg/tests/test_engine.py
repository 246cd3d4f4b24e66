"""Engine behavior: dispatch, boundary conversion, and the mode barrier."""

import threading
import time

import numpy as np
import pytest

from qengine import engine, matq, qcore
from qengine.engine import MathEngine, Mode, init, static_footprint
from qengine.matq import FMatrix, QMatrix, TileConfig


def result_of(eng, op, *operands):
    return eng.submit(op, *operands).result(timeout=30)


class TestLifecycle:
    def test_init_sets_mode(self):
        with init(Mode.FAST) as eng:
            assert eng.mode is Mode.FAST
        with init(Mode.PRECISE) as eng:
            assert eng.mode is Mode.PRECISE

    def test_double_initialization_rejected(self):
        eng = init(Mode.FAST)
        try:
            with pytest.raises(RuntimeError):
                eng.start()
        finally:
            eng.stop()

    def test_submit_after_stop_rejected(self):
        eng = init(Mode.FAST)
        eng.stop()
        with pytest.raises(RuntimeError):
            eng.submit("mul", 1.0, 2.0)
        with pytest.raises(RuntimeError):
            eng.set_mode(Mode.PRECISE)

    def test_quiescent_shutdown_loses_nothing(self):
        eng = init(Mode.FAST)
        futures = [eng.submit("mul", float(i), 2.0) for i in range(100)]
        eng.stop()
        results = [f.result(timeout=5) for f in futures]
        assert sorted(r.job_id for r in results) == sorted(set(r.job_id for r in results))
        assert len(results) == 100
        assert all(r.error is None for r in results)


class TestDispatch:
    def test_fast_mul(self):
        with init(Mode.FAST) as eng:
            r = result_of(eng, "mul", 1.5, 0.5)
            assert abs(r.value - 0.75) <= 2.0**-16
            assert r.mode is Mode.FAST

    def test_fast_add_sub_exact(self):
        with init(Mode.FAST) as eng:
            assert result_of(eng, "add", 1.25, 2.5).value == 3.75
            assert result_of(eng, "sub", 1.25, 2.5).value == -1.25

    def test_fast_sin(self):
        with init(Mode.FAST) as eng:
            r = result_of(eng, "sin", np.pi / 6)
            assert abs(r.value - 0.5) <= 2.0**-11

    def test_precise_sin(self):
        with init(Mode.PRECISE) as eng:
            r = result_of(eng, "sin", 0.5)
            assert r.value == float(np.sin(np.float32(0.5)))

    def test_precise_matmul_identity(self):
        # entries exactly representable in float32
        a = (np.arange(16, dtype=np.float64).reshape(4, 4) - 8.0) / 16.0
        with init(Mode.PRECISE) as eng:
            r = result_of(eng, "matmul", np.eye(4), a)
            assert np.array_equal(r.value, a)

    def test_fast_matmul_matches_direct_kernel_bit_exactly(self):
        rng = np.random.default_rng(42)
        a = rng.uniform(-1, 1, (8, 8))
        b = rng.uniform(-1, 1, (8, 8))
        with init(Mode.FAST) as eng:
            r = result_of(eng, "matmul", a, b)
        direct = matq.matmul_tiled(
            QMatrix.from_real(a), QMatrix.from_real(b), TileConfig()
        ).to_real()
        assert np.array_equal(r.value, direct)

    def test_same_request_valid_in_both_modes(self):
        jobs = [("mul", (1.5, 0.5)), ("sin", (0.3,)), ("matmul", (np.eye(2), np.eye(2)))]
        for mode in (Mode.FAST, Mode.PRECISE):
            with init(mode) as eng:
                for op, operands in jobs:
                    assert result_of(eng, op, *operands).error is None

    def test_range_flag_propagates(self):
        with init(Mode.FAST) as eng:
            r = result_of(eng, "mul", 1.0e6, 1.0)
            assert r.flags.range >= 1

    def test_malformed_operands_produce_error_result(self):
        with init(Mode.FAST) as eng:
            r = result_of(eng, "mul", 1.0)
            assert r.error is not None and "mul" in r.error
            r = result_of(eng, "matmul", np.eye(3), np.eye(4))
            assert r.error is not None and "dimensions" in r.error
            r = result_of(eng, "sin", "not a number")
            assert r.error is not None
            # worker survived all of the above
            assert result_of(eng, "mul", 2.0, 3.0).value == 6.0

    def test_unknown_operation_rejected_at_submit(self):
        with init(Mode.FAST) as eng:
            with pytest.raises(ValueError):
                eng.submit("tan", 1.0)


class TestModeSwitch:
    def test_noop_switch_returns_immediately(self):
        with init(Mode.FAST) as eng:
            t0 = time.perf_counter()
            eng.set_mode(Mode.FAST)
            assert time.perf_counter() - t0 < 0.01
            assert len(eng.transition_log()) == 1

    def test_switch_with_empty_queue_is_fast(self):
        with init(Mode.FAST) as eng:
            t0 = time.perf_counter()
            eng.set_mode(Mode.PRECISE)
            assert time.perf_counter() - t0 < 0.01
            assert eng.mode is Mode.PRECISE

    def test_switch_changes_results(self):
        with init(Mode.FAST) as eng:
            fast = result_of(eng, "sin", 0.5).value
            eng.set_mode(Mode.PRECISE)
            precise = result_of(eng, "sin", 0.5).value
            assert precise == float(np.sin(np.float32(0.5)))
            assert fast != precise

    def test_interleaved_stress_no_mixed_modes(self):
        with init(Mode.FAST) as eng:
            results = []
            issued = []
            mode = Mode.FAST
            for epoch in range(20):
                futures = [eng.submit("mul", float(i), 1.5) for i in range(100)]
                results += [f.result(timeout=30) for f in futures]
                mode = Mode.PRECISE if mode is Mode.FAST else Mode.FAST
                eng.set_mode(mode)
                issued.append(mode)
            log = eng.transition_log()
        # issued switches all took effect, in order
        assert [m for _, m in log[1:]] == issued
        # no job observed a table/mode disagreement
        for r in results:
            assert all(w is r.mode for w in r.witness)
        # every job's mode matches the epoch its execution fell into
        for r in sorted(results, key=lambda r: r.seq):
            epoch_mode = log[0][1]
            for first_seq, m in log:
                if r.seq >= first_seq:
                    epoch_mode = m
            assert r.mode is epoch_mode

    def test_transition_sequence_visible_in_result_stream(self):
        with init(Mode.FAST) as eng:
            seen = [result_of(eng, "mul", 1.0, 1.0)]
            issued = []
            mode = Mode.FAST
            for _ in range(6):
                mode = Mode.PRECISE if mode is Mode.FAST else Mode.FAST
                eng.set_mode(mode)
                issued.append(mode)
                seen.append(result_of(eng, "mul", 1.0, 1.0))  # one job per epoch
        ordered = [r.mode for r in sorted(seen, key=lambda r: r.seq)]
        collapsed = [ordered[0]] + [m for a, m in zip(ordered, ordered[1:]) if m is not a]
        assert collapsed == [Mode.FAST] + issued


class TestBackpressure:
    def test_submit_blocks_when_queue_full(self):
        a = np.random.default_rng(0).uniform(-1, 1, (400, 400))
        with init(Mode.PRECISE, queue_depth=1) as eng:
            slow = eng.submit("matmul", a, a)  # worker picks this up
            filler = eng.submit("mul", 1.0, 1.0)  # fills the queue
            t0 = time.perf_counter()
            third = eng.submit("mul", 2.0, 2.0)  # must wait for the slot
            blocked = time.perf_counter() - t0
            assert slow.result(timeout=60).error is None
            assert filler.result(timeout=60).value == 1.0
            assert third.result(timeout=60).value == 4.0
        assert blocked > 0.005


class TestFootprint:
    def test_static_accounting(self):
        report = static_footprint()
        assert report.slot_count == 6
        assert report.cordic_table_bytes == 64
        assert report.w32_table_bytes == 24
        assert report.w32_total_bytes == 88
        assert report.host_total_bytes == 6 * report.host_word_bytes + 64

    def test_dispatch_table_has_exactly_six_slots(self):
        assert len(engine.OPS) == 6
        tables = engine._build_tables(TileConfig())
        for mode, table in tables.items():
            assert table.mode is mode
            for op in engine.OPS:
                assert callable(table.get(op))
        with pytest.raises(ValueError):
            tables[Mode.FAST].get("div")
