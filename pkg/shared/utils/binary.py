"""Little-endian binary reader/writer shared by the tensor file formats."""
import struct
from pathlib import Path
from typing import BinaryIO, List, Union

import numpy as np

from shared.errors import FormatError

_U32 = struct.Struct("<I")
_U64 = struct.Struct("<Q")
_U8 = struct.Struct("<B")
F64_LE = np.dtype("<f8")


class BinaryWriter:
    """Sequential writer for magic tags, unsigned counts and f64 payloads."""

    def __init__(self, handle: BinaryIO):
        self._handle = handle

    def magic(self, tag: bytes):
        self._handle.write(tag)

    def u8(self, value: int):
        self._handle.write(_U8.pack(value))

    def u32(self, value: int):
        self._handle.write(_U32.pack(value))

    def u64s(self, values):
        for value in values:
            self._handle.write(_U64.pack(int(value)))

    def f64s(self, array: np.ndarray):
        self._handle.write(np.ascontiguousarray(array, dtype=F64_LE).tobytes(order="C"))


class BinaryReader:
    """Bounds-checked reader over a whole file held in memory."""

    def __init__(self, data: bytes, path: str):
        self._data = data
        self._offset = 0
        self.path = path

    @classmethod
    def open(cls, path: Union[str, Path]) -> "BinaryReader":
        return cls(Path(path).read_bytes(), str(path))

    def _take(self, count: int, field: str) -> bytes:
        end = self._offset + count
        if end > len(self._data):
            raise FormatError(
                self.path, field,
                f"needs {count} bytes at offset {self._offset}, file has {len(self._data)}",
            )
        chunk = self._data[self._offset:end]
        self._offset = end
        return chunk

    def magic(self, expected: bytes):
        found = self._take(len(expected), "magic")
        if found != expected:
            raise FormatError(self.path, "magic", f"expected {expected!r}, found {found!r}")

    def u8(self, field: str) -> int:
        return _U8.unpack(self._take(_U8.size, field))[0]

    def u32(self, field: str) -> int:
        return _U32.unpack(self._take(_U32.size, field))[0]

    def u64s(self, count: int, field: str) -> List[int]:
        raw = self._take(_U64.size * count, field)
        return [_U64.unpack_from(raw, k * _U64.size)[0] for k in range(count)]

    @property
    def remaining(self) -> int:
        return len(self._data) - self._offset

    def expect_f64s(self, count: int, field: str):
        """Fail before allocating when fewer than ``count`` doubles remain."""
        needed = F64_LE.itemsize * count
        if needed > self.remaining:
            raise FormatError(
                self.path, field,
                f"declares {count} values ({needed} bytes), file has {self.remaining} left",
            )

    def f64s(self, count: int, field: str) -> np.ndarray:
        raw = self._take(F64_LE.itemsize * count, field)
        return np.frombuffer(raw, dtype=F64_LE).astype(np.float64)

    def finish(self):
        if self._offset != len(self._data):
            raise FormatError(
                self.path, "trailer",
                f"{len(self._data) - self._offset} unexpected bytes after payload",
            )
