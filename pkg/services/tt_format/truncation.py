"""Truncation settings and the singular-value rank selection rule."""
import math
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from shared.errors import TruncationSpecError


class TruncationSpec(BaseModel):
    """Relative Frobenius tolerance and/or per-bond rank caps."""

    model_config = ConfigDict(frozen=True)

    epsilon: float = Field(default=0.0, ge=0.0)
    max_ranks: Optional[Tuple[int, ...]] = None

    @field_validator("max_ranks")
    @classmethod
    def caps_positive(cls, value: Optional[Tuple[int, ...]]) -> Optional[Tuple[int, ...]]:
        if value is not None:
            for bond, cap in enumerate(value, start=1):
                if cap < 1:
                    raise ValueError(f"rank cap for bond {bond} must be >= 1, got {cap}")
        return value

    def bond_caps(self, order: int) -> List[Optional[int]]:
        """Caps for the N-1 bonds of an order-N tensor (None where unbounded)."""
        if self.max_ranks is None:
            return [None] * max(order - 1, 0)
        if len(self.max_ranks) != order - 1:
            raise TruncationSpecError(
                f"{len(self.max_ranks)} rank caps given for a tensor with {order - 1} bonds"
            )
        return list(self.max_ranks)

    def split_threshold(self, norm: float, order: int) -> float:
        """Per-split discard budget delta = epsilon / sqrt(N - 1) * norm."""
        if order < 2 or self.epsilon == 0.0:
            return 0.0
        return self.epsilon / math.sqrt(order - 1) * norm


EXACT = TruncationSpec()


def truncation_rank(
    singular_values: np.ndarray,
    delta: float,
    cap: Optional[int] = None,
    cutoff: float = 1e-12,
) -> int:
    """
    Number of singular values to keep at one split.

    With delta > 0 this is the smallest r whose discarded tail sum of squares is
    strictly below delta**2; a tail equal to the budget keeps the value. With
    delta == 0 it is the numerical rank (values below cutoff * sigma_max dropped).
    The result is clipped to ``cap`` and never drops below 1.
    """
    s = np.asarray(singular_values, dtype=np.float64)
    if s.size == 0 or s[0] == 0.0:
        return 1

    if delta > 0.0:
        tails = np.cumsum((s ** 2)[::-1])[::-1]
        discarded = np.append(tails[1:], 0.0)
        rank = int(np.argmax(discarded < delta ** 2)) + 1
    else:
        rank = int(np.count_nonzero(s >= cutoff * s[0]))

    rank = max(rank, 1)
    if cap is not None:
        rank = min(rank, cap)
    return rank
