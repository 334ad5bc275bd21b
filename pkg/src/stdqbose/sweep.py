"""Parameter sweeps over (q or theta, x, r) and their CSV/JSON serialisation."""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from enum import Enum
from typing import Iterable, Sequence

import numpy as np

from . import model, oracle
from .errors import ConfigError, DomainError, NonConvergent, ZeroDenominator
from .qkernel import DeformationParameter

__all__ = [
    "Quantity",
    "Status",
    "SweepSpec",
    "SweepRow",
    "FIELDS",
    "parse_grid",
    "parse_orders",
    "run_sweep",
    "emit",
    "format_rows",
    "parse_rows",
]

FIELDS = ("q_repr", "x", "r", "quantity", "value", "oracle_value", "abs_diff", "status")


class Quantity(str, Enum):
    MEAN = "mean"
    DIST = "dist"
    INTERCEPT = "intercept"
    ASYMPTOTE = "asymptote"


class Status(str, Enum):
    OK = "ok"
    DOMAIN_ERROR = "domain_error"
    ZERO_DENOMINATOR = "zero_denominator"
    NON_CONVERGENT = "non_convergent"


@dataclass(frozen=True)
class SweepSpec:
    deformations: Sequence[DeformationParameter]
    x_grid: Sequence[float]
    orders: Sequence[int]
    quantity: Quantity = Quantity.DIST
    output_format: str = "csv"
    series_tolerance: float | None = None

    def validate(self) -> None:
        if not self.deformations:
            raise ConfigError("at least one deformation parameter is required")
        if not self.orders:
            raise ConfigError("at least one order r is required")
        for r in self.orders:
            if int(r) != r or not 1 <= r <= model.MAX_ORDER:
                raise ConfigError(f"order r must be an integer in [1, {model.MAX_ORDER}], got {r!r}")
        if Quantity(self.quantity) is not Quantity.ASYMPTOTE and not self.x_grid:
            raise ConfigError(f"quantity {Quantity(self.quantity).value!r} needs a non-empty x grid")
        for x in self.x_grid:
            if not (x > 0.0 and math.isfinite(x)):
                raise ConfigError(f"x values must be positive and finite, got {x!r}")
        if self.output_format not in ("csv", "json"):
            raise ConfigError(f"unknown output format {self.output_format!r}")
        tol = self.series_tolerance
        if tol is not None and not 0.0 < tol < 1.0:
            raise ConfigError(f"oracle tolerance must lie in (0, 1), got {tol!r}")


@dataclass
class SweepRow:
    q_repr: str
    x: float | None
    r: int
    quantity: str
    value: float | None = None
    oracle_value: float | None = None
    abs_diff: float | None = None
    status: str = Status.OK.value

    @property
    def ok(self) -> bool:
        return self.status == Status.OK.value


def _failure(exc: Exception) -> Status:
    if isinstance(exc, ZeroDenominator):
        return Status.ZERO_DENOMINATOR
    if isinstance(exc, NonConvergent):
        return Status.NON_CONVERGENT
    return Status.DOMAIN_ERROR


def _closed(dp, x, r, quantity):
    if quantity is Quantity.ASYMPTOTE:
        return model.intercept_asymptotic(dp, r)
    if quantity is Quantity.MEAN:
        return model.mean_occupation(dp, x)
    if quantity is Quantity.DIST:
        return model.dist_r(dp, x, r)
    return model.intercept_r(dp, x, r)


def _reference(dp, x, r, quantity, cfg):
    f = oracle.STD(dp)
    if quantity is Quantity.MEAN:
        return oracle.oracle_dist_r(f, x, 1, cfg)
    if quantity is Quantity.DIST:
        return oracle.oracle_dist_r(f, x, r, cfg)
    return oracle.oracle_intercept_r(f, x, r, cfg)


def _evaluate(point) -> SweepRow:
    dp, x, r, quantity, tol = point
    row = SweepRow(str(dp), x, r, quantity.value)
    try:
        value = _closed(dp, x, r, quantity)
        ref = None
        if tol is not None and quantity is not Quantity.ASYMPTOTE:
            ref = _reference(dp, x, r, quantity, oracle.SeriesConfig(rel_tol=tol))
    except (DomainError, ZeroDenominator, NonConvergent) as exc:
        row.status = _failure(exc).value
        return row
    row.value = value
    if ref is not None:
        row.oracle_value = ref
        row.abs_diff = abs(value - ref)
    return row


def run_sweep(spec: SweepSpec, jobs: int = 1) -> list[SweepRow]:
    """Evaluate every (deformation, x, r) point of ``spec``.

    Failing points become error rows; the sweep never aborts on them. Rows
    come back sorted by ``(q_repr, x, r)`` whatever ``jobs`` is.
    """
    spec.validate()
    quantity = Quantity(spec.quantity)
    xs: Iterable = spec.x_grid if spec.x_grid else [None]
    points = [
        (dp, None if x is None else float(x), int(r), quantity, spec.series_tolerance)
        for dp in spec.deformations
        for x in xs
        for r in spec.orders
    ]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_evaluate, points))
    else:
        rows = [_evaluate(p) for p in points]
    rows.sort(key=lambda row: (row.q_repr, -math.inf if row.x is None else row.x, row.r))
    return rows


def parse_grid(token: str) -> list[float]:
    """Parse ``"a,b,c"`` or ``"start:stop:steps[:log]"`` into floats."""
    token = token.strip()
    try:
        if ":" in token:
            parts = token.split(":")
            if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "log"):
                raise ConfigError(f"range must be start:stop:steps[:log], got {token!r}")
            start, stop, steps = float(parts[0]), float(parts[1]), int(parts[2])
            if steps < 1:
                raise ConfigError(f"range needs at least one step, got {token!r}")
            if len(parts) == 4:
                if start <= 0 or stop <= 0:
                    raise ConfigError(f"log range needs positive endpoints, got {token!r}")
                return [float(v) for v in np.geomspace(start, stop, steps)]
            return [float(v) for v in np.linspace(start, stop, steps)]
        return [float(v) for v in token.split(",") if v.strip()]
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"cannot parse grid {token!r}: {exc}") from None


def parse_orders(token: str) -> list[int]:
    """Parse ``"1,2,5"`` or ``"2-4"`` (inclusive) into a list of orders."""
    out = []
    try:
        for part in token.split(","):
            part = part.strip()
            if not part:
                continue
            if "-" in part:
                lo, hi = part.split("-", 1)
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise ConfigError(f"cannot parse order list {token!r}") from None
    if not out:
        raise ConfigError(f"empty order list {token!r}")
    return out


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def format_rows(rows: Sequence[SweepRow], fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\r\n")
        w.writerow(FIELDS)
        for row in rows:
            d = asdict(row)
            w.writerow([_csv_cell(d[k]) for k in FIELDS])
        return buf.getvalue()
    if fmt == "json":
        return json.dumps([{k: asdict(row)[k] for k in FIELDS} for row in rows], indent=2) + "\n"
    raise ConfigError(f"unknown output format {fmt!r}")


def emit(rows: Sequence[SweepRow], fmt: str, destination: str | None = None) -> None:
    """Write rows as CSV or JSON to ``destination`` (a path) or stdout (``None``/``"-"``)."""
    text = format_rows(rows, fmt)
    if destination in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(destination, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _from_cell(name: str, cell: str):
    if cell == "":
        return None
    if name == "r":
        return int(cell)
    if name in ("x", "value", "oracle_value", "abs_diff"):
        return float(cell)
    return cell


def parse_rows(text: str, fmt: str) -> list[SweepRow]:
    """Inverse of :func:`format_rows`."""
    if fmt == "json":
        return [SweepRow(**obj) for obj in json.loads(text)]
    reader = csv.reader(io.StringIO(text, newline=""))
    header = next(reader)
    if tuple(header) != FIELDS:
        raise ConfigError(f"unexpected CSV header {header!r}")
    return [SweepRow(**{k: _from_cell(k, c) for k, c in zip(FIELDS, cells)}) for cells in reader]
