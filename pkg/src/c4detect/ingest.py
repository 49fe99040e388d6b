"""Price CSV ingestion and log increments."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path

import numpy as np

from .errors import IngestionError

__all__ = ["PriceSeries", "ingest_prices", "log_increments", "write_increments_csv"]


@dataclass(frozen=True)
class PriceSeries:
    timestamps: tuple
    assets: tuple
    prices: np.ndarray


def _parse_stamp(text: str, row: int):
    try:
        return datetime.fromisoformat(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        raise IngestionError(f"row {row}: unparseable timestamp {text!r}") from None


def ingest_prices(source) -> PriceSeries:
    """
    Read prices from CSV: a header of asset names after the timestamp column,
    then one row per observation time in increasing time order.

    ``source`` is a path or an open text stream.  Rows are numbered from 1
    for the header in error messages.
    """
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="utf-8-sig")
    else:
        text = source.read()
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if len(rows) < 2:
        raise IngestionError("price file needs a header and at least one data row")
    header = [h.strip() for h in rows[0]]
    assets = tuple(header[1:])
    if not assets:
        raise IngestionError("price file has no asset columns")

    stamps, values = [], []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise IngestionError(
                f"row {lineno}: expected {len(header)} cells, got {len(row)}"
            )
        stamps.append(_parse_stamp(row[0].strip(), lineno))
        vals = []
        for col, cell in zip(assets, row[1:]):
            cell = cell.strip()
            if not cell:
                raise IngestionError(f"row {lineno}, column {col}: missing price")
            try:
                v = float(cell)
            except ValueError:
                raise IngestionError(
                    f"row {lineno}, column {col}: not a number {cell!r}"
                ) from None
            if not np.isfinite(v) or v <= 0:
                raise IngestionError(f"row {lineno}, column {col}: non-positive price {v}")
            vals.append(v)
        values.append(vals)

    kinds = {type(s) for s in stamps}
    if len(kinds) > 1:
        raise IngestionError("timestamps mix dates and numbers")
    for k in range(1, len(stamps)):
        if not stamps[k] > stamps[k - 1]:
            raise IngestionError(f"row {k + 2}: timestamps not strictly increasing")
    return PriceSeries(tuple(r[0].strip() for r in rows[1:]), assets, np.array(values))


def log_increments(series: PriceSeries) -> np.ndarray:
    """Row ``j`` is ``log p[j + 1] - log p[j]`` for every asset."""
    return np.diff(np.log(series.prices), axis=0)


def write_increments_csv(target, series: PriceSeries) -> None:
    inc = log_increments(series)
    if isinstance(target, (str, Path)):
        np.savetxt(target, inc, delimiter=",", header=",".join(series.assets),
                   comments="", fmt="%.17g")
    else:
        target.write(",".join(series.assets) + "\n")
        np.savetxt(target, inc, delimiter=",", fmt="%.17g")
