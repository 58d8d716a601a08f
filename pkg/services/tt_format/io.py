"""Reader and writer for the ``.ttv`` tensor-train format."""
from pathlib import Path
from typing import Union

from services.tensor_core.dense import reserve_elements
from services.tt_format.cores import Orthogonality, TTCore, TTTensor
from shared.errors import BondMismatchError, FormatError
from shared.utils.binary import BinaryReader, BinaryWriter
from shared.utils.logger import get_logger

logger = get_logger(__name__)

TT_MAGIC = b"TTV1"
TT_SUFFIX = ".ttv"

ORTH_CODES = {Orthogonality.NONE: 0, Orthogonality.LEFT: 1, Orthogonality.RIGHT: 2}
_CODE_TO_ORTH = {code: orth for orth, code in ORTH_CODES.items()}


def write_tt(path: Union[str, Path], x: TTTensor):
    """Per core: u64 (R_left, I, R_right), the f64 payload, one flag byte."""
    with Path(path).open("wb") as handle:
        writer = BinaryWriter(handle)
        writer.magic(TT_MAGIC)
        writer.u32(x.order)
        for core in x:
            writer.u64s(core.shape)
            writer.f64s(core.data)
            writer.u8(ORTH_CODES[core.orth])
    logger.debug("tt_written", path=str(path), dims=list(x.dims), ranks=list(x.ranks))


def read_tt(path: Union[str, Path]) -> TTTensor:
    reader = BinaryReader.open(path)
    reader.magic(TT_MAGIC)
    order = reader.u32("order")
    if order < 1:
        raise FormatError(str(path), "order", "a tensor train needs at least one core")

    cores = []
    for n in range(1, order + 1):
        shape = reader.u64s(3, f"core {n} shape")
        count = shape[0] * shape[1] * shape[2]
        if 0 in shape:
            raise FormatError(str(path), f"core {n} shape", f"sizes must be >= 1, got {tuple(shape)}")
        reader.expect_f64s(count, f"core {n} values")
        reserve_elements(count, f"{path} core {n}")
        values = reader.f64s(count, f"core {n} values")
        code = reader.u8(f"core {n} orthFlag")
        if code not in _CODE_TO_ORTH:
            raise FormatError(str(path), f"core {n} orthFlag", f"unknown flag value {code}")
        cores.append(TTCore(values.reshape(shape), _CODE_TO_ORTH[code]))
    reader.finish()
    try:
        return TTTensor(cores)
    except BondMismatchError as exc:
        raise FormatError(str(path), f"core {max(exc.bond, 1)} shape", str(exc)) from exc
