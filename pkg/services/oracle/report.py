"""Comparison of optimized results against references, emitted as OracleReport records."""
from typing import Optional

import numpy as np

from services.tensor_core.dense import DenseTensor
from shared.config.loader import get_oracle_config
from shared.events.report_stream import ReportStream
from shared.events.schemas import OracleReport
from shared.errors import ShapeMismatchError
from shared.utils.logger import LogContext, get_logger

logger = get_logger(__name__)


def seeded_rng(seed: Optional[int] = None) -> np.random.Generator:
    """Random generator used for every oracle instance."""
    return np.random.default_rng(seed)


def _values(x) -> np.ndarray:
    if isinstance(x, DenseTensor):
        return x.array
    return np.asarray(x, dtype=np.float64)


def compare(
    op_name: str,
    expected,
    actual,
    *,
    seed: Optional[int] = None,
    descriptor: str = "",
    tolerance: Optional[float] = None,
    scale: Optional[float] = None,
    stream: Optional[ReportStream] = None,
) -> OracleReport:
    """
    Compare an optimized result with its reference.

    The relative error is max|expected - actual| divided by max|expected|, or by
    ``scale`` when given (scalar reductions pass the product of operand norms).

    Args:
        op_name: Name recorded in the report
        expected: Reference value (array, DenseTensor or scalar)
        actual: Optimized value of the same shape
        seed: Seed of the random instance
        descriptor: Free-form instance description
        tolerance: Pass threshold on the relative error; config default if None
        scale: Explicit normalization for the relative error
        stream: Record sink; the configured report path is used if None

    Returns:
        OracleReport with ``passed`` set from the tolerance test
    """
    ref, got = _values(expected), _values(actual)
    if ref.shape != got.shape:
        raise ShapeMismatchError(f"{op_name}: reference shape {ref.shape} vs result shape {got.shape}")

    settings = get_oracle_config()
    tolerance = settings.tolerance if tolerance is None else tolerance

    max_abs = float(np.max(np.abs(ref - got))) if ref.size else 0.0
    if scale is None:
        scale = float(np.max(np.abs(ref))) if ref.size else 0.0
    if scale > 0.0:
        max_rel = max_abs / scale
    else:
        max_rel = 0.0 if max_abs == 0.0 else float("inf")

    report = OracleReport(
        op_name=op_name,
        max_abs_err=max_abs,
        max_rel_err=max_rel,
        tolerance=tolerance,
        instance_descriptor=descriptor,
        seed=seed,
    )

    log = logger.info if report.passed else logger.warning
    with LogContext(seed=seed):
        log("oracle_compare", op=op_name, max_abs_err=max_abs, max_rel_err=max_rel, passed=report.passed)

    if stream is not None:
        stream.publish(report)
    elif settings.report_path:
        with ReportStream(settings.report_path) as sink:
            sink.publish(report)

    return report
