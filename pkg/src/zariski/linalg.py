"""Dense exact matrices over a field, just enough for rank computations."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .polyfield.field import Field


@dataclass(frozen=True)
class Matrix:
    field: Field
    nrows: int
    ncols: int
    rows: tuple[tuple, ...]

    @classmethod
    def from_rows(cls, field_: Field, rows: Sequence[Sequence], ncols: int | None = None) -> "Matrix":
        rows = tuple(tuple(field_(x) for x in r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols required for a matrix without rows")
            ncols = len(rows[0])
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        return cls(field_, len(rows), ncols, rows)

    @classmethod
    def zeros(cls, field_: Field, nrows: int, ncols: int) -> "Matrix":
        return cls(field_, nrows, ncols, tuple((field_.zero,) * ncols for _ in range(nrows)))

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.nrows}x{self.ncols} @ {other.nrows}x{other.ncols}")
        F = self.field
        cols = list(zip(*other.rows)) if other.nrows else [() for _ in range(other.ncols)]
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = F.zero
                for a, b in zip(r, c):
                    if a != 0 and b != 0:
                        acc = F.add(acc, F.mul(a, b))
                row.append(acc)
            out.append(tuple(row))
        return Matrix(F, self.nrows, other.ncols, tuple(out))

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def permuted(self, row_perm: Sequence[int], col_perm: Sequence[int]) -> "Matrix":
        rows = tuple(tuple(self.rows[i][j] for j in col_perm) for i in row_perm)
        return Matrix(self.field, self.nrows, self.ncols, rows)

    def rank(self) -> int:
        return rank(self)


def row_echelon(M: Matrix) -> tuple[list[list], list[int]]:
    """Reduced row echelon form and pivot columns, by Gauss-Jordan elimination."""
    F = M.field
    A = [list(r) for r in M.rows]
    pivots: list[int] = []
    r = 0
    for c in range(M.ncols):
        piv = next((i for i in range(r, M.nrows) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = F.inv(A[r][c])
        A[r] = [F.mul(inv, x) for x in A[r]]
        for i in range(M.nrows):
            if i != r and A[i][c] != 0:
                factor = A[i][c]
                A[i] = [F.sub(x, F.mul(factor, y)) for x, y in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == M.nrows:
            break
    return A, pivots


def rank(M: Matrix) -> int:
    return len(row_echelon(M)[1])
