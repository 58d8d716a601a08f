import pytest
from pydantic import ValidationError

from shared.config.loader import (
    ConfigLoader,
    OracleConfig,
    get_bench_config,
    get_numerics_config,
    numerics_overrides,
)

YAML = """
numerics:
  memory_cap_bytes: ${TEST_TTALG_CAP:-2048}
  rank_cutoff: 1.0e-10
oracle:
  report_path: "${TEST_TTALG_REPORT:-}"
"""


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "config.yaml"
    path.write_text(YAML)
    return path


def test_defaults_substituted(config_file, monkeypatch):
    monkeypatch.delenv("TEST_TTALG_CAP", raising=False)
    loader = ConfigLoader(str(config_file))
    assert loader.get("numerics.memory_cap_bytes") == 2048
    assert loader.get("numerics.rank_cutoff") == 1e-10
    assert loader.get("numerics.missing", "fallback") == "fallback"


def test_environment_wins(config_file, monkeypatch):
    monkeypatch.setenv("TEST_TTALG_CAP", "4096")
    assert ConfigLoader(str(config_file)).get_section("numerics")["memory_cap_bytes"] == 4096


def test_config_path_from_settings(config_file, monkeypatch):
    monkeypatch.setenv("TTALG_CONFIG_PATH", str(config_file))
    assert ConfigLoader().config_path == config_file


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        ConfigLoader(str(tmp_path / "absent.yaml"))


def test_blank_report_path_is_none(config_file, monkeypatch):
    monkeypatch.delenv("TEST_TTALG_REPORT", raising=False)
    section = ConfigLoader(str(config_file)).get_section("oracle")
    assert OracleConfig(**section).report_path is None


def test_oracle_tolerance_must_be_positive():
    with pytest.raises(ValidationError):
        OracleConfig(tolerance=0.0)


def test_numerics_overrides_are_scoped():
    before = get_numerics_config().memory_cap_bytes
    with numerics_overrides(memory_cap_bytes=64) as active:
        assert active.memory_cap_bytes == 64
        assert get_numerics_config().memory_cap_bytes == 64
    assert get_numerics_config().memory_cap_bytes == before


def test_override_restored_after_error():
    before = get_numerics_config()
    with pytest.raises(RuntimeError):
        with numerics_overrides(rank_cutoff=0.5):
            raise RuntimeError("boom")
    assert get_numerics_config() == before


def test_bench_defaults():
    bench = get_bench_config()
    assert bench.orders == [8, 16, 32, 64]
    assert (bench.mode_size, bench.rank, bench.repeats) == (4, 8, 5)
