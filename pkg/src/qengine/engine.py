"""Runtime precision context: dispatch table, compute worker, mode barrier.

The engine holds one of two prebuilt six-slot dispatch tables (mul, add,
sub, sin, cos, matmul), each bound entirely to the fast Q16.16 path or
entirely to the precise single-precision path. Jobs carry real-valued
operands in both modes; the fast path converts to Q16.16 on entry and
back on exit, so the submit interface is mode-independent.

Mode transitions use a two-phase barrier: the controller requests
suspension, the worker parks at its next job boundary (never mid-kernel),
the controller swaps the whole table in one reference assignment and
resumes the worker. Jobs therefore never observe a mixed table, and the
transition cost is bounded by one in-flight job plus two handoffs.
"""

from __future__ import annotations

import enum
import itertools
import struct
import threading
from collections import deque
from concurrent.futures import Future
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import cordic, matq, qcore
from .matq import FMatrix, QMatrix, TileConfig
from .qcore import FlagTally


class Mode(enum.Enum):
    FAST = "fast"
    PRECISE = "precise"


OPS = ("mul", "add", "sub", "sin", "cos", "matmul")


@dataclass(frozen=True)
class DispatchTable:
    """Immutable binding of all six operation slots to one mode."""

    mode: Mode
    mul: Callable
    add: Callable
    sub: Callable
    sin: Callable
    cos: Callable
    matmul: Callable

    def get(self, op: str) -> Callable:
        if op not in OPS:
            raise ValueError(f"unknown operation {op!r}; expected one of {OPS}")
        return getattr(self, op)


# --- fast (Q16.16) implementations; reals in, reals out -------------------

def _fast_binary(qop):
    def impl(a: float, b: float, flags: FlagTally) -> float:
        qa = qcore.from_real(float(a), flags)
        qb = qcore.from_real(float(b), flags)
        return qcore.to_real(qop(qa, qb))
    return impl


def _fast_sin(x: float, flags: FlagTally) -> float:
    q = qcore.from_real(float(x), flags)
    return qcore.to_real(cordic.sincos(q).sin)


def _fast_cos(x: float, flags: FlagTally) -> float:
    q = qcore.from_real(float(x), flags)
    return qcore.to_real(cordic.sincos(q).cos)


def _make_fast_matmul(tile: TileConfig):
    def impl(a, b, flags: FlagTally) -> np.ndarray:
        qa = QMatrix.from_real(a, flags)
        qb = QMatrix.from_real(b, flags)
        stats = matq.MatmulStats()
        out = matq.matmul_tiled(qa, qb, tile, stats=stats)
        flags.overflow += stats.overflow_count
        return out.to_real()
    return impl


# --- precise (single-precision) implementations ---------------------------

def _precise_mul(a: float, b: float, flags: FlagTally) -> float:
    return float(np.float32(a) * np.float32(b))


def _precise_add(a: float, b: float, flags: FlagTally) -> float:
    return float(np.float32(a) + np.float32(b))


def _precise_sub(a: float, b: float, flags: FlagTally) -> float:
    return float(np.float32(a) - np.float32(b))


def _precise_sin(x: float, flags: FlagTally) -> float:
    return float(np.sin(np.float32(x)))


def _precise_cos(x: float, flags: FlagTally) -> float:
    return float(np.cos(np.float32(x)))


def _precise_matmul(a, b, flags: FlagTally) -> np.ndarray:
    fa = FMatrix.from_real(a)
    fb = FMatrix.from_real(b)
    return matq.matmul_float(fa, fb).to_real()


def _build_tables(tile: TileConfig) -> dict:
    fast = DispatchTable(
        mode=Mode.FAST,
        mul=_fast_binary(qcore.mul),
        add=_fast_binary(qcore.add),
        sub=_fast_binary(qcore.sub),
        sin=_fast_sin,
        cos=_fast_cos,
        matmul=_make_fast_matmul(tile),
    )
    precise = DispatchTable(
        mode=Mode.PRECISE,
        mul=_precise_mul,
        add=_precise_add,
        sub=_precise_sub,
        sin=_precise_sin,
        cos=_precise_cos,
        matmul=_precise_matmul,
    )
    return {Mode.FAST: fast, Mode.PRECISE: precise}


@dataclass
class Job:
    op: str
    operands: tuple
    job_id: int


@dataclass
class JobResult:
    job_id: int
    value: object
    mode: Mode             # mode the whole job executed under
    flags: FlagTally
    error: str | None
    seq: int               # execution order stamped by the worker
    witness: tuple = ()    # live mode reads at job start/end; uniform when safe


class OperandError(ValueError):
    """Malformed operands for an operation; reported as an error result."""


def _validate(op: str, operands: tuple):
    if op in ("mul", "add", "sub"):
        if len(operands) != 2:
            raise OperandError(f"{op} expects 2 scalars, got {len(operands)}")
        try:
            return tuple(float(v) for v in operands)
        except (TypeError, ValueError) as exc:
            raise OperandError(f"{op} operands must be real scalars: {exc}") from exc
    if op in ("sin", "cos"):
        if len(operands) != 1:
            raise OperandError(f"{op} expects 1 scalar, got {len(operands)}")
        try:
            return (float(operands[0]),)
        except (TypeError, ValueError) as exc:
            raise OperandError(f"{op} operand must be a real scalar: {exc}") from exc
    # matmul
    if len(operands) != 2:
        raise OperandError(f"matmul expects 2 matrices, got {len(operands)}")
    try:
        a = np.asarray(operands[0], dtype=np.float64)
        b = np.asarray(operands[1], dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise OperandError(f"matmul operands must be real matrices: {exc}") from exc
    if a.ndim != 2 or b.ndim != 2:
        raise OperandError("matmul operands must be 2-D")
    if a.shape[1] != b.shape[0]:
        raise OperandError(f"matmul inner dimensions differ: {a.shape} x {b.shape}")
    return (a, b)


class MathEngine:
    """One compute worker, a bounded job queue, and atomic mode switching.

    Any number of threads may submit; set_mode is serialized across
    callers. The dispatch table is written only while the worker is
    provably parked between jobs.
    """

    def __init__(
        self,
        mode: Mode = Mode.FAST,
        queue_depth: int = 64,
        tile: TileConfig | None = None,
    ) -> None:
        if queue_depth < 1:
            raise ValueError("queue_depth must be >= 1")
        self._tables = _build_tables(tile or TileConfig())
        self._mode = mode
        self._table = self._tables[mode]
        self._cv = threading.Condition()
        self._jobs: deque = deque()
        self._depth = queue_depth
        self._suspend = False
        self._parked = False
        self._stop = False
        self._started = False
        self._seq = 0
        self._ids = itertools.count()
        self._transitions: list[tuple[int, Mode]] = [(0, mode)]
        self._mode_lock = threading.Lock()
        self._worker: threading.Thread | None = None

    # -- lifecycle ---------------------------------------------------------

    def start(self) -> "MathEngine":
        with self._cv:
            if self._started:
                raise RuntimeError("engine already initialized")
            self._started = True
        self._worker = threading.Thread(target=self._run, name="qengine-worker", daemon=True)
        self._worker.start()
        return self

    def stop(self) -> None:
        """Request shutdown and block until the queue is drained."""
        with self._cv:
            if not self._started or self._stop:
                return
            self._stop = True
            self._cv.notify_all()
        assert self._worker is not None
        self._worker.join()

    def __enter__(self) -> "MathEngine":
        return self

    def __exit__(self, *exc) -> None:
        self.stop()

    # -- public API --------------------------------------------------------

    @property
    def mode(self) -> Mode:
        return self._mode

    def submit(self, op: str, *operands) -> Future:
        """Queue a job; returns a future resolving to a JobResult.

        Blocks while the queue is at capacity. Operand problems surface as
        an error result, not an exception; the worker keeps running.
        """
        if op not in OPS:
            raise ValueError(f"unknown operation {op!r}; expected one of {OPS}")
        fut: Future = Future()
        job = Job(op, operands, next(self._ids))
        with self._cv:
            if not self._started or self._stop:
                raise RuntimeError("engine is not running")
            while len(self._jobs) >= self._depth and not self._stop:
                self._cv.wait()
            if self._stop:
                raise RuntimeError("engine is shutting down")
            self._jobs.append((job, fut))
            self._cv.notify_all()
        return fut

    def set_mode(self, mode: Mode) -> None:
        """Switch every table slot to `mode` atomically; blocks until done.

        Suspension phase: the worker is asked to park and finishes at most
        its current job. Transition phase: with the worker parked, the
        table reference is swapped (O(1) in the slot count) and the worker
        resumes. Setting the current mode returns immediately.
        """
        if mode not in (Mode.FAST, Mode.PRECISE):
            raise ValueError(f"unknown mode {mode!r}")
        with self._mode_lock:
            if mode is self._mode:
                return
            with self._cv:
                if not self._started or self._stop:
                    raise RuntimeError("engine is not running")
                self._suspend = True
                self._cv.notify_all()
                while not self._parked:
                    self._cv.wait()
                self._table = self._tables[mode]
                self._mode = mode
                self._transitions.append((self._seq, mode))
                self._suspend = False
                self._cv.notify_all()

    def transition_log(self) -> tuple:
        """(first_seq, mode) epochs in the order they took effect."""
        with self._cv:
            return tuple(self._transitions)

    def pending(self) -> int:
        with self._cv:
            return len(self._jobs)

    # -- worker ------------------------------------------------------------

    def _run(self) -> None:
        while True:
            with self._cv:
                while True:
                    if self._suspend:
                        self._parked = True
                        self._cv.notify_all()
                        while self._suspend:
                            self._cv.wait()
                        self._parked = False
                        self._cv.notify_all()
                        continue
                    if self._jobs:
                        job, fut = self._jobs.popleft()
                        table = self._table
                        mode = self._mode
                        seq = self._seq
                        self._seq += 1
                        self._cv.notify_all()
                        break
                    if self._stop:
                        return
                    self._cv.wait()
            fut.set_result(self._execute(job, table, mode, seq))

    def _execute(self, job: Job, table: DispatchTable, mode: Mode, seq: int) -> JobResult:
        flags = FlagTally()
        witness = [self._mode]  # live read: must match `mode` if the barrier held
        value = None
        error = None
        try:
            operands = _validate(job.op, job.operands)
            value = table.get(job.op)(*operands, flags=flags)
        except OperandError as exc:
            error = str(exc)
        witness.append(self._mode)
        return JobResult(
            job_id=job.job_id,
            value=value,
            mode=mode,
            flags=flags,
            error=error,
            seq=seq,
            witness=tuple(witness),
        )


def init(mode: Mode = Mode.FAST, **kwargs) -> MathEngine:
    """Create and start an engine bound to `mode`."""
    return MathEngine(mode, **kwargs).start()


@dataclass
class FootprintReport:
    """Static storage accounting for the table and CORDIC constants."""

    slot_count: int
    cordic_table_bytes: int
    w32_table_bytes: int       # slots x 4-byte words
    w32_total_bytes: int       # reference figure on a 32-bit word model
    host_word_bytes: int
    host_table_bytes: int
    host_total_bytes: int

    def as_dict(self) -> dict:
        return {
            "slot_count": self.slot_count,
            "cordic_table_bytes": self.cordic_table_bytes,
            "w32_table_bytes": self.w32_table_bytes,
            "w32_total_bytes": self.w32_total_bytes,
            "host_word_bytes": self.host_word_bytes,
            "host_table_bytes": self.host_table_bytes,
            "host_total_bytes": self.host_total_bytes,
        }


def static_footprint() -> FootprintReport:
    """Byte counts for the six table slots plus the arctangent table.

    On a 4-byte word model the slots take 24 bytes and the table 64, for
    88 total; the host figures recompute the slot storage at this
    machine's pointer width.
    """
    slots = len(OPS)
    cordic_bytes = cordic.TABLE_BYTES
    host_word = struct.calcsize("P")
    return FootprintReport(
        slot_count=slots,
        cordic_table_bytes=cordic_bytes,
        w32_table_bytes=slots * 4,
        w32_total_bytes=slots * 4 + cordic_bytes,
        host_word_bytes=host_word,
        host_table_bytes=slots * host_word,
        host_total_bytes=slots * host_word + cordic_bytes,
    )
