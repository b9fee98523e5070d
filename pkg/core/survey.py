from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from utils.exceptions import EmptyColumn, InputError

log = logging.getLogger(__name__)

__all__: Tuple[str, ...] = (
    "SUMMARY_COLUMNS",
    "SurveySummary",
    "summarize_survey",
    "summarize_frame",
)

SUMMARY_COLUMNS: Tuple[str, ...] = ("variable", "n", "mean", "sd", "min", "max", "sd_defined")


@dataclass(frozen=True)
class SurveySummary:
    """Mean, sample standard deviation and range of one survey variable.

    ``sd`` uses the ``n - 1`` denominator. For a single observation it is undefined;
    it is then reported as 0 with ``sd_defined`` set to False.
    """

    variable: str
    n: int
    mean: float
    sd: float
    min: float
    max: float
    sd_defined: bool = True

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def summarize_survey(column: Iterable[float], variable: str = "value") -> SurveySummary:
    """Summarises a numeric column. Missing values are dropped.

    Raises
    ------
    EmptyColumn
        The column holds no value.
    """
    values = pd.to_numeric(pd.Series(list(column), dtype=object), errors="coerce").to_numpy(dtype=float)
    if np.isinf(values).any():
        raise InputError(f"Column {variable!r} contains infinite values.")
    missing = int(np.isnan(values).sum())
    if missing:
        log.warning("Column %s: %s missing or non-numeric values dropped", variable, missing)
        values = values[~np.isnan(values)]
    if values.size == 0:
        raise EmptyColumn(f"Column {variable!r} has no values to summarise.")

    n = int(values.size)
    mean = math.fsum(values) / n
    if n > 1:
        sd = math.sqrt(math.fsum((values - mean) ** 2) / (n - 1))
    else:
        sd = 0.0
    return SurveySummary(
        variable=variable,
        n=n,
        mean=mean,
        sd=sd,
        min=float(values.min()),
        max=float(values.max()),
        sd_defined=n > 1,
    )


def summarize_frame(frame: pd.DataFrame, columns: Optional[Sequence[str]] = None) -> pd.DataFrame:
    """Summaries of ``columns`` (default: every numeric column), one row each."""
    if columns is None:
        columns = [name for name in frame.columns if pd.api.types.is_numeric_dtype(frame[name])]
    unknown = [name for name in columns if name not in frame.columns]
    if unknown:
        raise InputError(f"Unknown survey column(s): {', '.join(unknown)}.")

    rows: List[Dict[str, Any]] = [summarize_survey(frame[name], name).to_dict() for name in columns]
    return pd.DataFrame(rows, columns=list(SUMMARY_COLUMNS))
