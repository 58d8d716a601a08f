"""Reader and writer for the ``.dnst`` dense tensor format."""
import math
from pathlib import Path
from typing import Union

from services.tensor_core.dense import DenseTensor, Shape, reserve_elements
from shared.errors import FormatError, TensorTrainError
from shared.utils.binary import BinaryReader, BinaryWriter
from shared.utils.logger import get_logger

logger = get_logger(__name__)

DENSE_MAGIC = b"DNS1"
DENSE_SUFFIX = ".dnst"


def write_dense(path: Union[str, Path], x: DenseTensor):
    """Write magic, u32 order, u64 dims and f64 values (all little-endian)."""
    with Path(path).open("wb") as handle:
        writer = BinaryWriter(handle)
        writer.magic(DENSE_MAGIC)
        writer.u32(x.order)
        writer.u64s(x.dims)
        writer.f64s(x.array)
    logger.debug("dense_written", path=str(path), dims=list(x.dims))


def read_dense(path: Union[str, Path]) -> DenseTensor:
    reader = BinaryReader.open(path)
    reader.magic(DENSE_MAGIC)
    order = reader.u32("order")
    dims = reader.u64s(order, "dims")
    reader.expect_f64s(math.prod(dims), "values")
    try:
        shape = Shape(tuple(dims))
    except TensorTrainError as exc:
        raise FormatError(str(path), "dims", str(exc)) from exc
    reserve_elements(shape.size, f"{path} payload")
    values = reader.f64s(shape.size, "values")
    reader.finish()
    return DenseTensor(values.reshape(shape.dims))
