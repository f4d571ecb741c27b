"""Exact field arithmetic (prime fields, rationals) and dense matrix kernels.

Everything downstream reduces to row operations over one of two exact
coefficient fields: GF(p) with elements stored as ints in [0, p), and Q
with elements stored as fractions.Fraction (lowest terms, positive
denominator).  No floating point anywhere.
"""

from __future__ import annotations

from fractions import Fraction

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(p: int) -> bool:
    """Deterministic Miller-Rabin, valid for all p < 3.3e24."""
    if p < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if p % q == 0:
            return p == q
    d = p - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


class FieldSpec:
    """A coefficient field: GF(p) for a prime p, or the rationals.

    Elements of GF(p) are canonical ints in [0, p); elements of Q are
    Fraction instances.  All arithmetic goes through the methods here so
    callers never need to branch on the kind.
    """

    __slots__ = ("kind", "p")

    def __init__(self, kind: str, p: int | None = None):
        if kind == "GF":
            if p is None or p < 2 or not is_prime(p):
                raise ValueError(f"GF modulus must be prime, got {p!r}")
            if p.bit_length() > 63:
                raise ValueError("GF modulus must fit in a machine word")
        elif kind == "Q":
            if p is not None:
                raise ValueError("rationals take no modulus")
        else:
            raise ValueError(f"unknown field kind {kind!r}")
        self.kind = kind
        self.p = p

    # -- element constructors -------------------------------------------

    def coerce(self, v):
        """Canonical field element from an int, Fraction, or '1/2' string."""
        if self.kind == "GF":
            return int(v) % self.p
        return Fraction(v)

    @property
    def zero(self):
        return 0 if self.kind == "GF" else Fraction(0)

    @property
    def one(self):
        return 1 if self.kind == "GF" else Fraction(1)

    # -- arithmetic ------------------------------------------------------

    def add(self, a, b):
        return (a + b) % self.p if self.kind == "GF" else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.kind == "GF" else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.kind == "GF" else a * b

    def neg(self, a):
        return (-a) % self.p if self.kind == "GF" else -a

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero field element")
        return pow(a, -1, self.p) if self.kind == "GF" else 1 / a

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    # ---------------------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, FieldSpec)
            and self.kind == other.kind
            and self.p == other.p
        )

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        return f"GF({self.p})" if self.kind == "GF" else "Q"


def GF(p: int) -> FieldSpec:
    return FieldSpec("GF", p)


QQ = FieldSpec("Q")


class Matrix:
    """Dense exact matrix, row-major entries over a FieldSpec.

    Entries are stored canonically reduced.  All operations return new
    matrices; nothing mutates in place.
    """

    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field: FieldSpec, rows: int, cols: int, entries):
        entries = tuple(entries)
        if len(entries) != rows * cols:
            raise ValueError("entry count does not match shape")
        self.field = field
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def from_rows(cls, field: FieldSpec, rows) -> "Matrix":
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        ents = [field.coerce(v) for r in rows for v in r]
        return cls(field, len(rows), ncols, ents)

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def row_lists(self) -> list[list]:
        return [list(self.row(i)) for i in range(self.rows)]

    def column(self, j: int) -> tuple:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    # -- kernels ----------------------------------------------------------

    def rref(self) -> tuple["Matrix", tuple[int, ...]]:
        """Reduced row echelon form and the strictly increasing pivot columns."""
        F = self.field
        m = self.row_lists()
        nrows, ncols = self.rows, self.cols
        pivots = []
        r = 0
        for c in range(ncols):
            if r == nrows:
                break
            pr = next((i for i in range(r, nrows) if m[i][c]), None)
            if pr is None:
                continue
            m[r], m[pr] = m[pr], m[r]
            inv = F.inv(m[r][c])
            m[r] = [F.mul(inv, v) for v in m[r]]
            for i in range(nrows):
                if i != r and m[i][c]:
                    f = m[i][c]
                    m[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
        ents = [v for row in m for v in row]
        return Matrix(F, nrows, ncols, ents), tuple(pivots)

    def rank(self) -> int:
        if self.field.kind == "GF" and self.field.p == 2:
            packed = [
                sum(1 << j for j, v in enumerate(self.row(i)) if v)
                for i in range(self.rows)
            ]
            return rank_bitrows(packed)
        span = RowSpan(self.field, self.cols)
        for i in range(self.rows):
            span.add(self.row(i))
        return span.rank

    def kernel_basis(self) -> "Matrix":
        """Canonical right null space basis, one column per rref free column.

        Free columns are taken in increasing order; the free coordinate is
        set to 1 and pivot coordinates are back-solved from the rref.
        """
        F = self.field
        R, pivots = self.rref()
        free = [c for c in range(self.cols) if c not in pivots]
        cols = []
        for f in free:
            v = [F.zero] * self.cols
            v[f] = F.one
            for r, c in enumerate(pivots):
                v[c] = F.neg(R.entries[r * R.cols + f])
            cols.append(v)
        ents = [cols[j][i] for i in range(self.cols) for j in range(len(free))]
        return Matrix(F, self.cols, len(free), ents)

    # -- algebra ----------------------------------------------------------

    def __mul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        F = self.field
        out = []
        orows = other.row_lists()
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                acc = F.zero
                for k, a in enumerate(ri):
                    if a:
                        acc = F.add(acc, F.mul(a, orows[k][j]))
                out.append(acc)
        return Matrix(F, self.rows, other.cols, out)

    def transpose(self) -> "Matrix":
        ents = [
            self.entries[i * self.cols + j]
            for j in range(self.cols)
            for i in range(self.rows)
        ]
        return Matrix(self.field, self.cols, self.rows, ents)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.field == other.field
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.field, self.rows, self.cols, self.entries))

    def __repr__(self):
        body = "; ".join(
            " ".join(str(v) for v in self.row(i)) for i in range(self.rows)
        )
        return f"Matrix({self.field}, {self.rows}x{self.cols}: {body})"


class RowSpan:
    """Incremental row space: feed vectors, query rank and membership.

    Keeps rows in echelon form keyed by pivot column.  This is the inner
    loop of every rank/closure computation, so it avoids Matrix overhead.
    """

    __slots__ = ("field", "width", "pivots")

    def __init__(self, field: FieldSpec, width: int):
        self.field = field
        self.width = width
        self.pivots = {}  # pivot column -> normalized row (list)

    def _reduce(self, vec):
        F = self.field
        v = list(vec)
        for c, row in self.pivots.items():
            if v[c]:
                f = v[c]
                v = [F.sub(a, F.mul(f, b)) for a, b in zip(v, row)]
        return v

    def add(self, vec) -> bool:
        """Insert a vector; True if it enlarged the span."""
        F = self.field
        v = self._reduce(vec)
        c = next((j for j, a in enumerate(v) if a), None)
        if c is None:
            return False
        inv = F.inv(v[c])
        self.pivots[c] = [F.mul(inv, a) for a in v]
        return True

    def contains(self, vec) -> bool:
        return not any(self._reduce(vec))

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def copy(self) -> "RowSpan":
        s = RowSpan(self.field, self.width)
        s.pivots = dict(self.pivots)
        return s


class BitSpan:
    """GF(2) row space over int-packed vectors (bit j = coordinate j)."""

    __slots__ = ("pivots",)

    def __init__(self):
        self.pivots = {}  # pivot bit position -> row (int)

    def _reduce(self, v: int) -> int:
        while v:
            b = v.bit_length() - 1
            row = self.pivots.get(b)
            if row is None:
                return v
            v ^= row
        return 0

    def add(self, v: int) -> bool:
        v = self._reduce(v)
        if not v:
            return False
        self.pivots[v.bit_length() - 1] = v
        return True

    def contains(self, v: int) -> bool:
        return self._reduce(v) == 0

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def copy(self) -> "BitSpan":
        s = BitSpan()
        s.pivots = dict(self.pivots)
        return s


def rank_bitrows(rows) -> int:
    """Rank over GF(2) of int-packed rows."""
    span = BitSpan()
    r = 0
    for v in rows:
        if span.add(v):
            r += 1
    return r


def rank_of_rows(field: FieldSpec, rows) -> int:
    """Rank of a list of coefficient vectors (assumed canonical elements)."""
    if not rows:
        return 0
    if field.kind == "GF" and field.p == 2:
        return rank_bitrows(
            sum(1 << j for j, v in enumerate(r) if v) for r in rows
        )
    span = RowSpan(field, len(rows[0]))
    for r in rows:
        span.add(r)
    return span.rank
