import struct

import numpy as np
import pytest
from numpy.testing import assert_array_equal

from services.tensor_core.dense import DenseTensor, random_dense
from services.tensor_core.io import DENSE_MAGIC, read_dense, write_dense
from shared.config.loader import numerics_overrides
from shared.errors import FormatError, MemoryCapExceededError


def test_round_trip_is_bit_exact(tmp_path, rng):
    for k in range(100):
        dims = tuple(int(d) for d in rng.integers(1, 4, size=int(rng.integers(0, 4))))
        x = random_dense(dims, rng)
        path = tmp_path / f"x{k}.dnst"
        write_dense(path, x)
        y = read_dense(path)
        assert y.dims == x.dims
        assert y.array.tobytes() == x.array.tobytes()


def test_layout_is_little_endian(tmp_path):
    path = tmp_path / "x.dnst"
    write_dense(path, DenseTensor(np.arange(6.0).reshape(2, 3)))
    data = path.read_bytes()
    assert data[:4] == DENSE_MAGIC
    assert struct.unpack("<I", data[4:8]) == (2,)
    assert struct.unpack("<QQ", data[8:24]) == (2, 3)
    assert struct.unpack("<6d", data[24:]) == (0.0, 1.0, 2.0, 3.0, 4.0, 5.0)


def test_scalar_round_trip(tmp_path):
    path = tmp_path / "s.dnst"
    write_dense(path, DenseTensor.scalar(-1.25))
    assert read_dense(path).item() == -1.25


def test_bad_magic_names_field(tmp_path):
    path = tmp_path / "bad.dnst"
    path.write_bytes(b"XXXX" + bytes(8))
    with pytest.raises(FormatError) as excinfo:
        read_dense(path)
    assert excinfo.value.field == "magic"
    assert str(path) in str(excinfo.value)


def test_truncated_payload_names_field(tmp_path):
    path = tmp_path / "short.dnst"
    write_dense(path, DenseTensor.ones((2, 2)))
    path.write_bytes(path.read_bytes()[:-8])
    with pytest.raises(FormatError) as excinfo:
        read_dense(path)
    assert excinfo.value.field == "values"


def test_trailing_bytes_rejected(tmp_path):
    path = tmp_path / "long.dnst"
    write_dense(path, DenseTensor.ones((2,)))
    path.write_bytes(path.read_bytes() + b"\x00")
    with pytest.raises(FormatError):
        read_dense(path)


def test_oversized_header_without_payload_is_a_format_error(tmp_path):
    path = tmp_path / "huge.dnst"
    path.write_bytes(DENSE_MAGIC + struct.pack("<I", 2) + struct.pack("<QQ", 100000, 100000))
    with numerics_overrides(memory_cap_bytes=1 << 20):
        with pytest.raises(FormatError) as excinfo:
            read_dense(path)
    assert excinfo.value.field == "values"


def test_complete_file_checked_against_memory_cap(tmp_path):
    path = tmp_path / "x.dnst"
    write_dense(path, DenseTensor.ones((2, 3)))
    with numerics_overrides(memory_cap_bytes=16):
        with pytest.raises(MemoryCapExceededError):
            read_dense(path)


def test_zero_size_mode_names_file_and_field(tmp_path):
    path = tmp_path / "empty.dnst"
    path.write_bytes(DENSE_MAGIC + struct.pack("<I", 2) + struct.pack("<QQ", 2, 0))
    with pytest.raises(FormatError) as excinfo:
        read_dense(path)
    assert excinfo.value.field == "dims"
    assert str(path) in str(excinfo.value)


def test_values_survive_as_written(tmp_path):
    values = np.array([np.pi, -0.0, 1e-300, 1.7976931348623157e308])
    path = tmp_path / "v.dnst"
    write_dense(path, DenseTensor(values))
    assert_array_equal(read_dense(path).array, values)
