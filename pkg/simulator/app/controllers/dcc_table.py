"""
Reactive DCC state table and channel-load smoothing.
"""

from bisect import bisect_right
from dataclasses import dataclass
from typing import List, Sequence

from ..models.run_models import DEFAULT_DCC_TABLE, DccTableRow


class DccTable:
    """Rows partition CL in [0, 1]; each row is [lower, upper) except the last, which is closed."""

    def __init__(self, rows: Sequence[DccTableRow] = DEFAULT_DCC_TABLE):
        self.rows: List[DccTableRow] = list(rows)
        self._lowers = [row.cl_lower for row in self.rows]

    def __len__(self) -> int:
        return len(self.rows)

    def row_for(self, cl: float) -> DccTableRow:
        if not 0.0 <= cl <= 1.0:
            raise ValueError(f"channel load {cl} outside [0, 1]")
        return self.rows[bisect_right(self._lowers, cl) - 1]

    def lookup_interval(self, cl: float) -> int:
        """T_off in ms for the row containing `cl`."""
        return self.row_for(cl).t_off_ms

    @property
    def intervals_ms(self) -> List[int]:
        return [row.t_off_ms for row in self.rows]

    @property
    def relaxed(self) -> DccTableRow:
        return self.rows[0]


def update_channel_load(load: "ChannelLoadState", cbr_n: float) -> float:
    """CL_n = (1 - alpha) * CL_{n-1} + alpha * CBR_n; stores and returns CL_n."""
    if not 0.0 <= cbr_n <= 1.0:
        raise ValueError(f"CBR {cbr_n} outside [0, 1]")
    cl = (1.0 - load.alpha) * load.cl + load.alpha * cbr_n
    # rounding can push a convex combination a hair past the ends
    load.cl = min(max(cl, 0.0), 1.0)
    return load.cl


@dataclass
class ChannelLoadState:
    """Exponentially weighted channel load."""
    cl: float = 0.0
    alpha: float = 1.0

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha {self.alpha} outside [0, 1]")
        if not 0.0 <= self.cl <= 1.0:
            raise ValueError(f"initial channel load {self.cl} outside [0, 1]")

    def update(self, cbr_n: float) -> float:
        return update_channel_load(self, cbr_n)
