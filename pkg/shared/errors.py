"""Exception hierarchy shared by every tensor-train component."""
from typing import Optional


class TensorTrainError(Exception):
    """Base class for all toolkit errors."""


class ShapeMismatchError(TensorTrainError, ValueError):
    """Operand shapes are incompatible for the requested operation."""


class IndexOutOfRangeError(TensorTrainError, IndexError):
    """An element index lies outside its mode."""

    def __init__(self, mode: int, index: int, size: int):
        self.mode = mode
        self.index = index
        self.size = size
        super().__init__(
            f"index {index} out of range for mode {mode} of size {size}"
        )


class SiteOutOfRangeError(TensorTrainError, ValueError):
    """A mode, site or split number is outside its legal range."""


class BondMismatchError(TensorTrainError, ValueError):
    """Adjacent cores disagree on a bond size, or a boundary rank is not 1."""

    def __init__(self, message: str, bond: Optional[int] = None):
        self.bond = bond
        super().__init__(message)


class ElementCountOverflowError(TensorTrainError, OverflowError):
    """Element count does not fit a signed 64-bit word."""


class MemoryCapExceededError(TensorTrainError, MemoryError):
    """A dense allocation would exceed the configured memory cap."""

    def __init__(self, what: str, requested_bytes: int, cap_bytes: int):
        self.what = what
        self.requested_bytes = requested_bytes
        self.cap_bytes = cap_bytes
        super().__init__(
            f"{what} needs {requested_bytes} bytes, memory cap is {cap_bytes} bytes"
        )


class FormatError(TensorTrainError, ValueError):
    """A binary tensor file could not be parsed."""

    def __init__(self, path: str, field: str, reason: str):
        self.path = path
        self.field = field
        super().__init__(f"{path}: field '{field}': {reason}")


class WorkCapExceededError(TensorTrainError, RuntimeError):
    """A reference computation would exceed the oracle work cap."""


class TruncationSpecError(TensorTrainError, ValueError):
    """Truncation settings do not fit the tensor they are applied to."""
