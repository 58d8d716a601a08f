"""Scaling benchmark: median wall time of one operation over growing train orders."""
import csv
import statistics
import sys
import time
from enum import Enum
from typing import Callable, List, Optional, Sequence, TextIO

from services.oracle.report import seeded_rng
from services.tt_format.cores import random_tt
from services.tt_format.decomposition import tt_round
from services.tt_linops.arithmetic import quadratic_form, tt_add, tt_dot, tt_hadamard, ttm_apply
from services.tt_linops.matrix_tt import random_ttm
from shared.config.loader import get_bench_config
from shared.events.report_stream import ReportStream
from shared.events.schemas import BENCH_CSV_HEADER, BenchRecord
from shared.utils.logger import get_logger

logger = get_logger(__name__)


class BenchOp(str, Enum):
    DOT = "dot"
    ADD = "add"
    HADAMARD = "hadamard"
    ROUND = "round"
    MATVEC = "matvec"
    QUADFORM = "quadform"


def _workload(op: BenchOp, order: int, mode_size: int, rank: int, rng) -> tuple:
    """Operands for one order and the zero-argument call that runs the operation."""
    dims = [mode_size] * order
    ranks = [rank] * (order - 1)
    x = random_tt(dims, ranks, rng)

    if op in (BenchOp.MATVEC, BenchOp.QUADFORM):
        a = random_ttm(dims, dims, ranks, rng)
        call = (lambda: ttm_apply(a, x)) if op is BenchOp.MATVEC else (lambda: quadratic_form(x, a))
        return call, a.storage_bytes + x.storage_bytes
    if op is BenchOp.ROUND:
        return (lambda: tt_round(x)), x.storage_bytes

    y = random_tt(dims, ranks, rng)
    binary = {BenchOp.DOT: tt_dot, BenchOp.ADD: tt_add, BenchOp.HADAMARD: tt_hadamard}[op]
    return (lambda: binary(x, y)), x.storage_bytes + y.storage_bytes


def time_call(call: Callable[[], object], repeats: int) -> float:
    """Median of ``repeats`` perf_counter timings."""
    samples = []
    for _ in range(repeats):
        start = time.perf_counter()
        call()
        samples.append(time.perf_counter() - start)
    return statistics.median(samples)


def run_bench(
    op: BenchOp,
    orders: Optional[Sequence[int]] = None,
    mode_size: Optional[int] = None,
    rank: Optional[int] = None,
    repeats: Optional[int] = None,
    seed: Optional[int] = None,
    out: Optional[TextIO] = None,
    stream: Optional[ReportStream] = None,
) -> List[BenchRecord]:
    """
    Time one operation for every order and write CSV rows.

    Unset arguments fall back to the ``bench`` config section. Bytes are the
    storage of the operands.

    Returns:
        One BenchRecord per order
    """
    op = BenchOp(op)
    defaults = get_bench_config()
    orders = list(orders) if orders else defaults.orders
    mode_size = mode_size or defaults.mode_size
    rank = rank or defaults.rank
    repeats = repeats or defaults.repeats
    rng = seeded_rng(defaults.seed if seed is None else seed)

    writer = csv.writer(out or sys.stdout, lineterminator="\n")
    writer.writerow(BENCH_CSV_HEADER)

    records = []
    for order in orders:
        call, operand_bytes = _workload(op, order, mode_size, rank, rng)
        call()  # warm-up
        seconds = time_call(call, repeats)
        record = BenchRecord(n=order, i=mode_size, r=rank, op=op.value, seconds=seconds, bytes=operand_bytes)
        writer.writerow(record.csv_row())
        if stream is not None:
            stream.publish(record)
        logger.info("bench_point", op=op.value, order=order, seconds=seconds)
        records.append(record)
    return records
