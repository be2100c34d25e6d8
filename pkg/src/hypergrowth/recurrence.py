"""Exact Fibonacci machinery and the blue/yellow transfer-matrix recurrence.

All values are Python ints, so nothing overflows or rounds. The closed forms
for the perimeter and area of ``D_7(r)`` are stated for ``r >= 1``; the area
formula reaches ``r = 1`` through ``F(-1) = 1``.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .errors import IndexOutOfBounds, InvalidN, InvalidRadius

DEFAULT_FIB_BOUND = 10_000


@dataclass(frozen=True)
class Matrix2:
    """2x2 integer matrix ``[[a, b], [c, d]]``."""

    a: int
    b: int
    c: int
    d: int

    @classmethod
    def identity(cls) -> "Matrix2":
        return cls(1, 0, 0, 1)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "Matrix2":
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    def rows(self) -> tuple[tuple[int, int], tuple[int, int]]:
        return ((self.a, self.b), (self.c, self.d))

    def __matmul__(self, other: "Matrix2") -> "Matrix2":
        return Matrix2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def apply(self, x: int, y: int) -> tuple[int, int]:
        return self.a * x + self.b * y, self.c * x + self.d * y

    @property
    def determinant(self) -> int:
        return self.a * self.d - self.b * self.c

    @property
    def trace(self) -> int:
        return self.a + self.d


# The recurrence matrix of the Fibonacci numbers and its square.
FIBONACCI_MATRIX = Matrix2(1, 1, 1, 0)
GROWTH_MATRIX_7 = Matrix2(2, 1, 1, 1)


def matrix_power(m: Matrix2, k: int) -> Matrix2:
    if k < 0:
        raise ValueError(f"exponent must be >= 0, got {k}")
    result = Matrix2.identity()
    base = m
    while k:
        if k & 1:
            result = result @ base
        base = base @ base
        k >>= 1
    return result


def fibonacci(k: int, bound: int = DEFAULT_FIB_BOUND) -> int:
    """F(k) for any integer k, with F(-k) = (-1)**(k+1) * F(k)."""
    if abs(k) > bound:
        raise IndexOutOfBounds(f"|k| = {abs(k)} exceeds the bound {bound}")
    if k < 0:
        value = fibonacci(-k, bound)
        return value if k % 2 else -value
    # [[1,1],[1,0]]^k = [[F(k+1), F(k)], [F(k), F(k-1)]]
    return matrix_power(FIBONACCI_MATRIX, k).b


def transfer_matrix(n: int) -> Matrix2:
    """Matrix taking (B_r, Y_r) to (B_{r+1}, Y_{r+1}) in X_n.

    A blue boundary vertex has n-2 triangles outside the disk and a yellow one
    n-3. Of the new boundary vertices around it, the two at the ends are
    shared with the neighbouring boundary vertices (they become yellow) and
    the rest belong to it alone (they become blue).
    """
    if n < 6:
        raise InvalidN(f"the blue/yellow recurrence needs n >= 6, got {n}")
    return Matrix2(n - 5, n - 6, 1, 1)


class CountPair(NamedTuple):
    blue: int
    yellow: int

    @property
    def perimeter(self) -> int:
        return self.blue + self.yellow


def counts_by_recurrence(n: int, r: int) -> CountPair:
    if r < 1:
        raise InvalidRadius(f"r must be >= 1, got {r}")
    m = matrix_power(transfer_matrix(n), r - 1)
    return CountPair(*m.apply(n, 0))


def _check_radius(r: int) -> None:
    if r < 1:
        raise InvalidRadius(f"r must be >= 1, got {r}")


def perimeter_closed(r: int) -> int:
    """P_7(r) = 7 F(2r)."""
    _check_radius(r)
    return 7 * fibonacci(2 * r)


def area_closed(r: int) -> int:
    """A_7(r) = 7 (4 F(2r-2) + 3 F(2r-3) - 2)."""
    _check_radius(r)
    return 7 * (4 * fibonacci(2 * r - 2) + 3 * fibonacci(2 * r - 3) - 2)


def area_delta_closed(r: int) -> int:
    """A_7(r+1) - A_7(r) = 7 (4 F(2r-1) + 3 F(2r-2))."""
    _check_radius(r)
    return 7 * (4 * fibonacci(2 * r - 1) + 3 * fibonacci(2 * r - 2))


def identity_even_sum(r: int) -> tuple[int, int]:
    _check_radius(r)
    return sum(fibonacci(2 * i) for i in range(1, r + 1)), fibonacci(2 * r + 1) - 1


def identity_odd_sum(r: int) -> tuple[int, int]:
    _check_radius(r)
    return sum(fibonacci(2 * i - 1) for i in range(1, r + 1)), fibonacci(2 * r)


# -- growth tables -----------------------------------------------------------


@dataclass(frozen=True)
class GrowthRow:
    r: int
    P: int
    A: int
    B: int
    Y: int
    P_oracle: int | None = None
    A_oracle: int | None = None

    @property
    def agrees(self) -> bool:
        if self.P_oracle is None:
            return True
        return self.P == self.P_oracle and self.A == self.A_oracle


@dataclass(frozen=True)
class GrowthTable:
    rows: tuple[GrowthRow, ...]

    @property
    def has_oracle(self) -> bool:
        return any(row.P_oracle is not None for row in self.rows)

    @property
    def agrees(self) -> bool:
        return all(row.agrees for row in self.rows)

    def columns(self) -> list[str]:
        cols = ["r", "P", "A", "B", "Y"]
        if self.has_oracle:
            cols += ["P_oracle", "A_oracle"]
        return cols

    def records(self) -> list[dict[str, str]]:
        # Exact integers travel as decimal strings.
        cols = self.columns()
        return [
            {c: ("" if getattr(row, c) is None else str(getattr(row, c))) for c in cols}
            for row in self.rows
        ]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=self.columns(), lineterminator="\n")
        writer.writeheader()
        writer.writerows(self.records())
        return buf.getvalue()

    def to_json(self) -> str:
        return json.dumps(self.records(), indent=2)


def growth_table(r_max: int, oracle: Iterable | None = None) -> GrowthTable:
    """Closed-form rows for D_7(1..r_max).

    ``oracle`` may be an iterable of measured metrics (anything with ``r``,
    ``perimeter`` and ``area``); matching radii fill the oracle columns.
    """
    _check_radius(r_max)
    measured = {m.r: m for m in oracle} if oracle is not None else {}
    rows = []
    for r in range(1, r_max + 1):
        b, y = counts_by_recurrence(7, r)
        m = measured.get(r)
        rows.append(
            GrowthRow(
                r=r,
                P=perimeter_closed(r),
                A=area_closed(r),
                B=b,
                Y=y,
                P_oracle=None if m is None else m.perimeter,
                A_oracle=None if m is None else m.area,
            )
        )
    return GrowthTable(tuple(rows))
