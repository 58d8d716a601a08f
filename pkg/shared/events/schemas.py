"""Record schemas emitted by the oracle and the benchmark, using Pydantic."""
from datetime import datetime, timezone
from typing import Optional

from pydantic import BaseModel, Field, model_validator


def _utcnow() -> datetime:
    return datetime.now(timezone.utc)


class OracleReport(BaseModel):
    """Outcome of one optimized-versus-reference comparison."""
    kind: str = "oracle_report"
    op_name: str
    max_abs_err: float = Field(ge=0.0)
    max_rel_err: float = Field(ge=0.0)
    tolerance: float = Field(gt=0.0)
    passed: bool = False
    instance_descriptor: str = ""
    seed: Optional[int] = None
    timestamp: datetime = Field(default_factory=_utcnow)

    @model_validator(mode="after")
    def derive_passed(self) -> "OracleReport":
        # passed always mirrors the tolerance test
        self.passed = self.max_rel_err <= self.tolerance
        return self


class BenchRecord(BaseModel):
    """One timing row of the scaling benchmark."""
    kind: str = "bench_record"
    n: int = Field(ge=1)
    i: int = Field(ge=1)
    r: int = Field(ge=1)
    op: str
    seconds: float = Field(ge=0.0)
    bytes: int = Field(ge=0)

    def csv_row(self) -> list:
        return [self.n, self.i, self.r, self.op, f"{self.seconds:.9g}", self.bytes]


class RecordKind:
    """Record kind tags written as the first field of every line."""
    ORACLE_REPORT = "oracle_report"
    BENCH_RECORD = "bench_record"


BENCH_CSV_HEADER = ["n", "i", "r", "op", "seconds", "bytes"]
