"""JSON-lines record stream for oracle reports and benchmark rows."""
import json
from pathlib import Path
from typing import Any, Iterator, Optional, TextIO, Union

from pydantic import BaseModel

from shared.events.schemas import BenchRecord, OracleReport, RecordKind
from shared.utils.logger import get_logger

logger = get_logger(__name__)

_RECORD_TYPES = {
    RecordKind.ORACLE_REPORT: OracleReport,
    RecordKind.BENCH_RECORD: BenchRecord,
}


class ReportStream:
    """Append-only line-delimited record sink backed by a file or text stream."""

    def __init__(self, target: Union[str, Path, TextIO]):
        """
        Args:
            target: File path (opened for append) or an open text stream
        """
        if isinstance(target, (str, Path)):
            path = Path(target)
            path.parent.mkdir(parents=True, exist_ok=True)
            self._stream: TextIO = path.open("a", encoding="utf-8")
            self._owns_stream = True
            self.name = str(path)
        else:
            self._stream = target
            self._owns_stream = False
            self.name = getattr(target, "name", "<stream>")
        self.published = 0

    def publish(self, record: Any) -> int:
        """
        Write one record as a single JSON line.

        Args:
            record: Pydantic model instance or plain dict

        Returns:
            Sequence number of the record within this stream
        """
        try:
            if isinstance(record, BaseModel):
                data = record.model_dump(mode="json")
            else:
                data = dict(record)

            self._stream.write(json.dumps(data, sort_keys=False) + "\n")
            self._stream.flush()
            self.published += 1

            logger.debug(
                "record_published",
                stream=self.name,
                sequence=self.published,
                record_type=type(record).__name__,
            )
            return self.published

        except (TypeError, ValueError, OSError) as e:
            logger.error("publish_failed", stream=self.name, error=str(e), exc_info=True)
            raise

    def close(self):
        """Close the underlying file if this stream opened it."""
        if self._owns_stream:
            self._stream.close()

    def __enter__(self) -> "ReportStream":
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()


def read_records(path: Union[str, Path]) -> Iterator[BaseModel]:
    """Parse a JSON-lines record file back into typed records."""
    with Path(path).open(encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            data = json.loads(line)
            record_type: Optional[type] = _RECORD_TYPES.get(data.get("kind"))
            if record_type is None:
                logger.warning("unknown_record_kind", path=str(path), line=line_number)
                continue
            yield record_type(**data)
