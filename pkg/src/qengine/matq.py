"""Dense Q16.16 matrices and multiplication kernels.

Three production kernels plus a verification oracle:

* ``matmul_tiled``   - blocked loops with a 64-bit accumulator per output
  element per K-block; the >>16 correction is deferred to once per block,
  so rounding events drop from one per product to one per K-block.
* ``matmul_naive_q`` - the contrast case, shifting after every product.
* ``matmul_float``   - single-precision triple-loop reference path.
* ``matmul_oracle``  - wide-integer recomputation of the tiled kernel's
  result without the tiling loop structure, in plain Python arithmetic.

Block inner products are exact integer sums, so evaluation order inside a
K-block cannot change results; the tiled kernel therefore computes them
with vectorized 64-bit matrix products.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qcore
from .qcore import FRAC_BITS, RAW_MAX, RAW_MIN

_WRAP_BIAS = 1 << 31
_WRAP_MASK = 0xFFFFFFFF

#: Safe operand magnitude for deferred accumulation (value <= 2**14),
#: checked only in debug mode; see matmul_tiled.
SAFE_VALUE_RAW = 1 << 30


def _wrap32(a: np.ndarray) -> np.ndarray:
    """Elementwise signed 32-bit wrap of an int64 array."""
    return ((a + _WRAP_BIAS) & _WRAP_MASK) - _WRAP_BIAS


def _round_away(scaled: np.ndarray) -> np.ndarray:
    # same decomposition as qcore.from_real, vectorized
    ip = np.floor(scaled)
    fr = scaled - ip
    up = np.where(scaled >= 0.0, fr >= 0.5, fr > 0.5)
    return ip + up


@dataclass
class QMatrix:
    """Row-major dense matrix of raw Q16.16 words."""

    rows: int
    cols: int
    data: np.ndarray  # int32, shape (rows, cols), C-contiguous

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError("matrix dimensions must be >= 1")
        self.data = np.ascontiguousarray(self.data, dtype=np.int32)
        if self.data.shape != (self.rows, self.cols):
            raise ValueError(
                f"data shape {self.data.shape} != ({self.rows}, {self.cols})"
            )

    @classmethod
    def from_raw(cls, rows: int, cols: int, flat) -> "QMatrix":
        a = np.asarray(flat, dtype=np.int64).reshape(rows, cols)
        return cls(rows, cols, a.astype(np.int32))

    @classmethod
    def from_real(cls, values, flags: qcore.FlagTally | None = None) -> "QMatrix":
        """Elementwise Q16.16 conversion, saturating out-of-range entries."""
        v = np.asarray(values, dtype=np.float64)
        if v.ndim != 2:
            raise ValueError("expected a 2-D array of reals")
        raw = _round_away(v * float(qcore.ONE))
        out_of_range = (raw > RAW_MAX) | (raw < RAW_MIN)
        if flags is not None:
            flags.range += int(out_of_range.sum())
        raw = np.clip(raw, RAW_MIN, RAW_MAX)
        return cls(v.shape[0], v.shape[1], raw.astype(np.int64).astype(np.int32))

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls(n, n, (np.eye(n, dtype=np.int64) * qcore.ONE).astype(np.int32))

    def to_real(self) -> np.ndarray:
        return self.data.astype(np.float64) / float(qcore.ONE)


@dataclass
class FMatrix:
    """Row-major dense matrix of single-precision floats."""

    rows: int
    cols: int
    data: np.ndarray  # float32, shape (rows, cols)

    def __post_init__(self) -> None:
        if self.rows < 1 or self.cols < 1:
            raise ValueError("matrix dimensions must be >= 1")
        self.data = np.ascontiguousarray(self.data, dtype=np.float32)
        if self.data.shape != (self.rows, self.cols):
            raise ValueError(
                f"data shape {self.data.shape} != ({self.rows}, {self.cols})"
            )

    @classmethod
    def from_real(cls, values) -> "FMatrix":
        v = np.asarray(values, dtype=np.float32)
        if v.ndim != 2:
            raise ValueError("expected a 2-D array of reals")
        return cls(v.shape[0], v.shape[1], v)

    @classmethod
    def identity(cls, n: int) -> "FMatrix":
        return cls(n, n, np.eye(n, dtype=np.float32))

    def to_real(self) -> np.ndarray:
        return self.data.astype(np.float64)


@dataclass(frozen=True)
class TileConfig:
    """Block size for the tiled kernel.

    The default of 32 is a power of two whose working set (4 * 32**2 bytes
    for three operand blocks of 4-byte words) stays inside an 8 KB budget.
    """

    b: int = 32

    def __post_init__(self) -> None:
        if self.b < 1:
            raise ValueError("tile dimension must be >= 1")


@dataclass
class MatmulStats:
    """Instrumentation counters filled in by the Q16.16 kernels."""

    shift_count: int = 0
    overflow_count: int = 0


def _check_dims(a_cols: int, b_rows: int) -> None:
    if a_cols != b_rows:
        raise ValueError(f"inner dimensions differ: {a_cols} vs {b_rows}")


def matmul_tiled(
    A: QMatrix,
    B: QMatrix,
    tile: TileConfig | None = None,
    stats: MatmulStats | None = None,
    debug: bool = False,
) -> QMatrix:
    """Blocked Q16.16 product with deferred-shift 64-bit accumulation.

    Block loop order is I, J, K with edge blocks clipped by min() bounds.
    Each K-block contributes ``floor(sum_k A_raw*B_raw / 2**16)`` to the
    output element through a 32-bit wrapping add; wraps are counted in
    ``stats.overflow_count`` and one shift per element per K-block in
    ``stats.shift_count``.

    Operands are expected normalized to [-1, 1] for best precision; the
    documented safe-magnitude contract (|value| <= 2**14) is enforced only
    when ``debug`` is set. The 64-bit accumulator bound is always verified
    from operand maxima before computing.
    """
    _check_dims(A.cols, B.rows)
    b = (tile or TileConfig()).b
    a64 = A.data.astype(np.int64)
    b64 = B.data.astype(np.int64)
    amax = int(np.abs(a64).max())
    bmax = int(np.abs(b64).max())
    if debug and (amax > SAFE_VALUE_RAW or bmax > SAFE_VALUE_RAW):
        raise ValueError("operand magnitude exceeds the safe bound of 2**14")
    # accumulator never exceeds k_block * |A|max * |B|max; int64 must hold it
    if amax * bmax * min(b, A.cols) >= 2**63:
        raise OverflowError("64-bit accumulator could overflow for these operands")

    out = np.zeros((A.rows, B.cols), dtype=np.int64)
    for I in range(0, A.rows, b):
        i_max = min(I + b, A.rows)
        for J in range(0, B.cols, b):
            j_max = min(J + b, B.cols)
            for K in range(0, A.cols, b):
                k_max = min(K + b, A.cols)
                acc = a64[I:i_max, K:k_max] @ b64[K:k_max, J:j_max]
                shifted = acc >> FRAC_BITS
                shifted32 = _wrap32(shifted)
                raw_sum = out[I:i_max, J:j_max] + shifted32
                if stats is not None:
                    stats.shift_count += shifted.size
                    stats.overflow_count += int(
                        np.count_nonzero(shifted32 != shifted)
                        + np.count_nonzero((raw_sum > RAW_MAX) | (raw_sum < RAW_MIN))
                    )
                out[I:i_max, J:j_max] = _wrap32(raw_sum)
    return QMatrix(A.rows, B.cols, out.astype(np.int32))


def matmul_naive_q(
    A: QMatrix, B: QMatrix, stats: MatmulStats | None = None
) -> QMatrix:
    """Unblocked Q16.16 product with a floor shift after every product.

    The higher-rounding baseline: each of the k products in an inner
    product is shifted (and so rounded) individually before accumulation.
    """
    _check_dims(A.cols, B.rows)
    a64 = A.data.astype(np.int64)
    b64 = B.data.astype(np.int64)
    out = np.zeros((A.rows, B.cols), dtype=np.int64)
    for k in range(A.cols):
        prod = a64[:, k, None] * b64[k, None, :]
        shifted = prod >> FRAC_BITS
        term = _wrap32(shifted)
        raw_sum = out + term
        if stats is not None:
            stats.shift_count += prod.size
            stats.overflow_count += int(
                np.count_nonzero(term != shifted)
                + np.count_nonzero((raw_sum > RAW_MAX) | (raw_sum < RAW_MIN))
            )
        out = _wrap32(raw_sum)
    return QMatrix(A.rows, B.cols, out.astype(np.int32))


def matmul_float(A: FMatrix, B: FMatrix) -> FMatrix:
    """Naive single-precision product: triple loop, no tiling.

    Accumulation runs in k order with float32 rounding at every
    multiply-accumulate, matching a scalar i, j, k loop bit for bit.
    """
    _check_dims(A.cols, B.rows)
    out = np.zeros((A.rows, B.cols), dtype=np.float32)
    a = A.data
    b = B.data
    for k in range(A.cols):
        out += a[:, k, None] * b[k, None, :]
    return FMatrix(A.rows, B.cols, out)


def matmul_oracle(
    A: QMatrix, B: QMatrix, tile: TileConfig | None = None
) -> QMatrix:
    """Recompute the tiled kernel's result without its loop structure.

    Walks output elements directly, summing each K-block in unbounded
    Python integers before the single floor shift, to prove the tiling
    transformation is result-preserving.
    """
    _check_dims(A.cols, B.rows)
    b = (tile or TileConfig()).b
    a_rows = [[int(v) for v in row] for row in A.data]
    b_cols = [[int(v) for v in col] for col in B.data.T]
    blocks = [(K, min(K + b, A.cols)) for K in range(0, A.cols, b)]
    out = np.zeros((A.rows, B.cols), dtype=np.int64)
    for i, row in enumerate(a_rows):
        for j, col in enumerate(b_cols):
            c = 0
            for k_lo, k_hi in blocks:
                s = sum(x * y for x, y in zip(row[k_lo:k_hi], col[k_lo:k_hi]))
                c = qcore.wrap32(c + qcore.wrap32(s >> FRAC_BITS))
            out[i, j] = c
    return QMatrix(A.rows, B.cols, out.astype(np.int32))


def exact_real_product(A: QMatrix, B: QMatrix) -> np.ndarray:
    """Exact real-arithmetic product of the represented values.

    Inner products are formed in unbounded integers at scale 2**32 and
    divided once, so each element is correct to double rounding.
    """
    _check_dims(A.cols, B.rows)
    a_rows = [[int(v) for v in row] for row in A.data]
    b_cols = [[int(v) for v in col] for col in B.data.T]
    out = np.empty((A.rows, B.cols), dtype=np.float64)
    for i, row in enumerate(a_rows):
        for j, col in enumerate(b_cols):
            out[i, j] = sum(x * y for x, y in zip(row, col)) / 2.0**32
    return out


@dataclass
class MaeReport:
    """Mean/max absolute error of both Q16.16 kernels vs exact arithmetic."""

    tiled_mean: float
    tiled_max: float
    naive_mean: float
    naive_max: float

    def as_dict(self) -> dict:
        return {
            "tiled_mean": self.tiled_mean,
            "tiled_max": self.tiled_max,
            "naive_mean": self.naive_mean,
            "naive_max": self.naive_max,
        }


def mae_report(A: QMatrix, B: QMatrix, tile: TileConfig | None = None) -> MaeReport:
    exact = exact_real_product(A, B)
    tiled_err = np.abs(matmul_tiled(A, B, tile).to_real() - exact)
    naive_err = np.abs(matmul_naive_q(A, B).to_real() - exact)
    return MaeReport(
        tiled_mean=float(tiled_err.mean()),
        tiled_max=float(tiled_err.max()),
        naive_mean=float(naive_err.mean()),
        naive_max=float(naive_err.max()),
    )


def save_matrix(path, M: QMatrix) -> None:
    """Write the text fixture format: 'rows cols' then raw words row-major."""
    with open(path, "w") as fh:
        fh.write(f"{M.rows} {M.cols}\n")
        for row in M.data:
            fh.write(" ".join(str(int(v)) for v in row) + "\n")


def load_matrix(path) -> QMatrix:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}: expected 'rows cols' header")
        rows, cols = int(header[0]), int(header[1])
        flat = [int(tok) for tok in fh.read().split()]
    if len(flat) != rows * cols:
        raise ValueError(f"{path}: expected {rows * cols} words, found {len(flat)}")
    return QMatrix.from_raw(rows, cols, flat)
