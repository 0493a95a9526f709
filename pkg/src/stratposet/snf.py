"""Exact integer matrices, Smith normal form invariant factors, and ranks mod p.

All arithmetic is on Python ints, so there is no overflow regime to fall
back from.  Elimination always pivots on an entry of minimal absolute value:
first a sparse pass that removes every unit pivot together with its row and
column, then a dense reduction of whatever is left.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence


@dataclass
class IntMatrix:
    """Sparse integer matrix; ``entries`` maps (row, col) to a nonzero int."""

    nrows: int
    ncols: int
    entries: dict[tuple[int, int], int] = field(default_factory=dict)

    def __post_init__(self):
        self.entries = {k: v for k, v in self.entries.items() if v}
        for (r, c) in self.entries:
            if not (0 <= r < self.nrows and 0 <= c < self.ncols):
                raise IndexError(f"entry ({r}, {c}) outside a {self.nrows}x{self.ncols} matrix")

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "IntMatrix":
        rows = [list(map(int, r)) for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged matrix")
        return cls(len(rows), ncols, {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r) if v})

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for (r, c), v in self.entries.items():
            out[r][c] = v
        return out

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        by_row: dict[int, list[tuple[int, int]]] = {}
        for (r, c), v in other.entries.items():
            by_row.setdefault(r, []).append((c, v))
        out: dict[tuple[int, int], int] = {}
        for (r, k), v in self.entries.items():
            for c, w in by_row.get(k, ()):
                out[r, c] = out.get((r, c), 0) + v * w
        return IntMatrix(self.nrows, other.ncols, out)

    def is_zero(self) -> bool:
        return not self.entries

    def to_text(self) -> str:
        """Dimensions line, then one line of integers per row."""
        lines = [f"{self.nrows} {self.ncols}"]
        lines += [" ".join(map(str, row)) for row in self.to_dense()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "IntMatrix":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        nrows, ncols = map(int, lines[0].split())
        rows = [list(map(int, ln.split())) for ln in lines[1:1 + nrows]]
        if len(rows) != nrows:
            raise ValueError("matrix text has fewer rows than declared")
        return cls.from_dense(rows, ncols)


@dataclass(frozen=True)
class SmithForm:
    factors: tuple[int, ...]  # nonzero diagonal entries d1 | d2 | ... (units included)

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.factors if d > 1)


def _as_matrix(M) -> IntMatrix:
    if isinstance(M, IntMatrix):
        return M
    return IntMatrix.from_dense(M)


def _rows_and_cols(M: IntMatrix, modulus: int | None):
    rows: dict[int, dict[int, int]] = {}
    cols: dict[int, set[int]] = {}
    for (r, c), v in M.entries.items():
        if modulus:
            v %= modulus
            if not v:
                continue
        rows.setdefault(r, {})[c] = v
        cols.setdefault(c, set()).add(r)
    return rows, cols


def _eliminate_units(rows, cols, modulus: int | None) -> int:
    """Clear unit pivots in place; returns how many were removed."""

    def is_unit(v):
        return bool(v % modulus) if modulus else v in (1, -1)

    count = 0
    progress = True
    while progress:
        progress = False
        for c in sorted(cols, key=lambda c: (len(cols[c]), c)):
            if c not in cols:
                continue
            best = None
            for r in cols[c]:
                if is_unit(rows[r][c]) and (best is None or (len(rows[r]), r) < (len(rows[best]), best)):
                    best = r
            if best is None:
                continue
            prow = rows.pop(best)
            for col in prow:
                cols[col].discard(best)
            u = prow[c]
            inv = pow(u, -1, modulus) if modulus else u
            for r in cols.pop(c):
                row = rows[r]
                f = row.pop(c) * inv
                for col, v in prow.items():
                    if col == c:
                        continue
                    nv = row.get(col, 0) - f * v
                    if modulus:
                        nv %= modulus
                    if nv:
                        if col not in row:
                            cols[col].add(r)
                        row[col] = nv
                    elif col in row:
                        del row[col]
                        cols[col].discard(r)
                if not row:
                    del rows[r]
            for col in prow:
                if col in cols and not cols[col]:
                    del cols[col]
            count += 1
            progress = True
    return count


def dense_invariant_factors(A: Sequence[Sequence[int]]) -> list[int]:
    """Invariant factors of a dense integer matrix by min-|pivot| row/column reduction."""
    A = [list(r) for r in A]
    m = len(A)
    n = len(A[0]) if m else 0
    factors = []
    t = 0
    while t < min(m, n):
        piv = _min_abs(A, t, range(t, m), range(t, n))
        if piv is None:
            break
        _move_to(A, t, *piv)
        while True:
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    ri, rt = A[i], A[t]
                    for j in range(t, n):
                        ri[j] -= q * rt[j]
                    clean = clean and not ri[t]
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    for i in range(t, m):
                        A[i][j] -= q * A[i][t]
                    clean = clean and not A[t][j]
            if not clean:
                # a remainder smaller than the pivot survived in row/column t
                cands = [(i, t) for i in range(t, m) if A[i][t]] + [(t, j) for j in range(t + 1, n) if A[t][j]]
                _move_to(A, t, *min(cands, key=lambda ij: abs(A[ij[0]][ij[1]])))
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p), None)
            if bad is None:
                break
            # pull the non-divisible row into row t so the next pass shrinks the pivot
            for j in range(t, n):
                A[t][j] += A[bad[0]][j]
        factors.append(abs(A[t][t]))
        t += 1
    return factors


def _min_abs(A, t, rows, cols):
    best, bv = None, 0
    for i in rows:
        for j in cols:
            v = abs(A[i][j])
            if v and (best is None or v < bv):
                best, bv = (i, j), v
                if v == 1:
                    return best
    return best


def _move_to(A, t, i, j):
    A[t], A[i] = A[i], A[t]
    if j != t:
        for row in A:
            row[t], row[j] = row[j], row[t]


def smith_normal_form(M) -> SmithForm:
    M = _as_matrix(M)
    rows, cols = _rows_and_cols(M, None)
    units = _eliminate_units(rows, cols, None)
    rest: list[int] = []
    if rows:
        rix = {r: i for i, r in enumerate(sorted(rows))}
        cix = {c: j for j, c in enumerate(sorted(cols))}
        dense = [[0] * len(cix) for _ in rix]
        for r, row in rows.items():
            for c, v in row.items():
                dense[rix[r]][cix[c]] = v
        rest = dense_invariant_factors(dense)
    return SmithForm(tuple([1] * units + rest))


def rank_mod_p(M, p: int) -> int:
    M = _as_matrix(M)
    rows, cols = _rows_and_cols(M, p)
    return _eliminate_units(rows, cols, p)


def divisibility_ok(factors: Iterable[int]) -> bool:
    fs = list(factors)
    return all(d > 0 for d in fs) and all(b % a == 0 for a, b in zip(fs, fs[1:]))
