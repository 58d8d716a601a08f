"""Reader and writer for the ``.ttm`` matrix tensor-train format."""
from pathlib import Path
from typing import Union

from services.tensor_core.dense import reserve_elements
from services.tt_linops.matrix_tt import MTTCore, TTMatrix
from shared.errors import BondMismatchError, FormatError
from shared.utils.binary import BinaryReader, BinaryWriter
from shared.utils.logger import get_logger

logger = get_logger(__name__)

TTM_MAGIC = b"TTM1"
TTM_SUFFIX = ".ttm"


def write_ttm(path: Union[str, Path], a: TTMatrix):
    """Per core: u64 (R_left, I, J, R_right) then the f64 payload."""
    with Path(path).open("wb") as handle:
        writer = BinaryWriter(handle)
        writer.magic(TTM_MAGIC)
        writer.u32(a.order)
        for core in a:
            writer.u64s(core.shape)
            writer.f64s(core.data)
    logger.debug("ttm_written", path=str(path), rows=list(a.row_dims), cols=list(a.col_dims))


def read_ttm(path: Union[str, Path]) -> TTMatrix:
    reader = BinaryReader.open(path)
    reader.magic(TTM_MAGIC)
    order = reader.u32("order")
    if order < 1:
        raise FormatError(str(path), "order", "a matrix tensor train needs at least one core")

    cores = []
    for n in range(1, order + 1):
        shape = reader.u64s(4, f"core {n} shape")
        count = shape[0] * shape[1] * shape[2] * shape[3]
        if 0 in shape:
            raise FormatError(str(path), f"core {n} shape", f"sizes must be >= 1, got {tuple(shape)}")
        reader.expect_f64s(count, f"core {n} values")
        reserve_elements(count, f"{path} core {n}")
        cores.append(MTTCore(reader.f64s(count, f"core {n} values").reshape(shape)))
    reader.finish()
    try:
        return TTMatrix(cores)
    except BondMismatchError as exc:
        raise FormatError(str(path), f"core {max(exc.bond, 1)} shape", str(exc)) from exc
