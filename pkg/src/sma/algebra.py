"""Exact scalar fields and pattern-constrained matrices.

Scalars are either `fractions.Fraction` (the rationals) or plain ints kept
reduced mod a prime (GF(p)).  Both support the native + and * operators, so
matrix kernels accumulate with ordinary arithmetic and reduce once per entry;
division and inversion go through the `Field` descriptor.  No floating point
is used anywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .errors import FieldMismatch, OffPattern, ParseError, PatternMismatch, Singular
from .relation import Relation

Scalar = Union[Fraction, int]
Grid = tuple[tuple[Scalar, ...], ...]


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    for d in range(3, math.isqrt(p) + 1, 2):
        if p % d == 0:
            return False
    return True


@dataclass(frozen=True)
class Field:
    """Scalar field descriptor: rationals when char is None, else GF(char)."""

    char: Optional[int] = None

    def __post_init__(self) -> None:
        if self.char is not None and not _is_prime(self.char):
            raise ValueError(f"{self.char} is not prime")

    @property
    def name(self) -> str:
        return "Q" if self.char is None else f"GF({self.char})"

    @property
    def is_rational(self) -> bool:
        return self.char is None

    def zero(self) -> Scalar:
        return Fraction(0) if self.char is None else 0

    def one(self) -> Scalar:
        return Fraction(1) if self.char is None else 1

    def element(self, value) -> Scalar:
        """Canonical scalar from an int, Fraction, or string; floats are rejected."""
        if isinstance(value, float):
            raise ValueError("floating-point values are not exact; use ints or 'num/den' strings")
        if self.char is None:
            try:
                return Fraction(value)
            except (TypeError, ValueError) as exc:
                raise ValueError(f"not a rational value: {value!r}") from exc
        try:
            return int(value) % self.char
        except (TypeError, ValueError) as exc:
            raise ValueError(f"not a {self.name} value: {value!r}") from exc

    def reduce(self, value: Scalar) -> Scalar:
        return value if self.char is None else value % self.char

    def neg(self, value: Scalar) -> Scalar:
        return -value if self.char is None else (-value) % self.char

    def inv(self, value: Scalar) -> Scalar:
        if value == 0:
            raise ZeroDivisionError(f"division by zero in {self.name}")
        if self.char is None:
            return Fraction(1) / value
        return pow(value, -1, self.char)

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        return self.reduce(a * self.inv(b))

    def pow(self, value: Scalar, exponent: int) -> Scalar:
        if self.char is None:
            return Fraction(value) ** exponent
        if exponent < 0 and value % self.char == 0:
            raise ZeroDivisionError(f"division by zero in {self.name}")
        return pow(value, exponent, self.char)

    def random(self, rng) -> Scalar:
        if self.char is None:
            return Fraction(rng.randint(-9, 9), rng.randint(1, 4))
        return rng.randrange(self.char)

    def random_nonzero(self, rng) -> Scalar:
        while True:
            v = self.random(rng)
            if v != 0:
                return v

    def to_json(self):
        return "Q" if self.char is None else {"GF": self.char}

    @classmethod
    def from_json(cls, obj) -> Field:
        if obj == "Q":
            return RATIONALS
        if isinstance(obj, dict) and set(obj) == {"GF"}:
            try:
                return cls(int(obj["GF"]))
            except ValueError as exc:
                raise ParseError(str(exc)) from exc
        raise ParseError(f'field must be "Q" or {{"GF": p}}, got {obj!r}')

    def scalar_to_json(self, value: Scalar):
        return str(value) if self.char is None else int(value)

    def parse_scalar(self, obj) -> Scalar:
        if isinstance(obj, float):
            raise ParseError(f"floating-point scalar {obj!r} is not exact")
        try:
            return self.element(obj)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc


RATIONALS = Field(None)


def gf(p: int) -> Field:
    return Field(p)


# ---------------------------------------------------------------------------
# raw grid arithmetic (dense, row-major tuples; callers keep entries reduced)

def zero_grid(field: Field, n: int) -> Grid:
    z = field.zero()
    return tuple(tuple(z for _ in range(n)) for _ in range(n))


def identity_grid(field: Field, n: int) -> Grid:
    one, z = field.one(), field.zero()
    return tuple(tuple(one if i == j else z for j in range(n)) for i in range(n))


def grid_add(field: Field, a: Grid, b: Grid) -> Grid:
    return tuple(tuple(field.reduce(x + y) for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def grid_sub(field: Field, a: Grid, b: Grid) -> Grid:
    return tuple(tuple(field.reduce(x - y) for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def grid_scale(field: Field, c: Scalar, a: Grid) -> Grid:
    return tuple(tuple(field.reduce(c * x) for x in row) for row in a)


def grid_mul(field: Field, a: Grid, b: Grid) -> Grid:
    """Matrix product, skipping zero entries (patterns here are typically sparse)."""
    n = len(a)
    b_nonzero = [tuple((j, v) for j, v in enumerate(row) if v != 0) for row in b]
    zero = field.zero()
    out = []
    for row in a:
        acc = [zero] * n
        for k, av in enumerate(row):
            if av == 0:
                continue
            for j, bv in b_nonzero[k]:
                acc[j] = acc[j] + av * bv
        out.append(tuple(field.reduce(x) for x in acc))
    return tuple(out)


def grid_is_zero(a: Grid) -> bool:
    return all(x == 0 for row in a for x in row)


def rref(field: Field, rows: Sequence[Sequence[Scalar]]) -> tuple[list[list[Scalar]], list[int]]:
    """Reduced row echelon form and pivot columns, by exact elimination."""
    mat = [list(r) for r in rows]
    nrows = len(mat)
    ncols = len(mat[0]) if nrows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, nrows) if mat[i][c] != 0), None)
        if pivot_row is None:
            continue
        mat[r], mat[pivot_row] = mat[pivot_row], mat[r]
        inv = field.inv(mat[r][c])
        mat[r] = [field.reduce(x * inv) for x in mat[r]]
        for i in range(nrows):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [field.reduce(x - f * y) for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return mat, pivots


def matrix_rank(field: Field, rows: Sequence[Sequence[Scalar]]) -> int:
    if not rows:
        return 0
    _, pivots = rref(field, rows)
    return len(pivots)


def nullspace(field: Field, rows: Sequence[Sequence[Scalar]], ncols: int) -> list[tuple[Scalar, ...]]:
    """Canonical nullspace basis: one vector per free column, that column set to 1."""
    if not rows:
        reduced, pivots = [], []
    else:
        reduced, pivots = rref(field, rows)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    zero, one = field.zero(), field.one()
    for f in free:
        vec = [zero] * ncols
        vec[f] = one
        for r, pc in enumerate(pivots):
            vec[pc] = field.neg(reduced[r][f])
        basis.append(tuple(vec))
    return basis


def invert_grid(field: Field, a: Grid) -> Grid:
    """Exact inverse by Gauss-Jordan elimination; raise Singular when none exists."""
    n = len(a)
    left = [list(row) for row in a]
    right = [list(row) for row in identity_grid(field, n)]
    for c in range(n):
        pivot_row = next((i for i in range(c, n) if left[i][c] != 0), None)
        if pivot_row is None:
            raise Singular("matrix is singular")
        left[c], left[pivot_row] = left[pivot_row], left[c]
        right[c], right[pivot_row] = right[pivot_row], right[c]
        inv = field.inv(left[c][c])
        left[c] = [field.reduce(x * inv) for x in left[c]]
        right[c] = [field.reduce(x * inv) for x in right[c]]
        for i in range(n):
            if i != c and left[i][c] != 0:
                f = left[i][c]
                left[i] = [field.reduce(x - f * y) for x, y in zip(left[i], left[c])]
                right[i] = [field.reduce(x - f * y) for x, y in zip(right[i], right[c])]
    return tuple(tuple(row) for row in right)


def is_member(rel: Relation, rows: Union[Grid, "StructMatrix"]) -> bool:
    """True iff every entry outside the relation's pairs is zero."""
    if isinstance(rows, StructMatrix):
        rows = rows.rows
    n = len(rows)
    if n != rel.n:
        return False
    for i in range(n):
        for j in range(n):
            if rows[i][j] != 0 and (i + 1, j + 1) not in rel.pairs:
                return False
    return True


# ---------------------------------------------------------------------------
# pattern-constrained matrices

@dataclass(frozen=True)
class StructMatrix:
    """Dense n x n matrix whose support is constrained to a relation's pairs."""

    field: Field
    pattern: Relation
    rows: Grid

    def __post_init__(self) -> None:
        n = self.pattern.n
        if len(self.rows) != n or any(len(r) != n for r in self.rows):
            raise ValueError(f"expected a {n}x{n} grid")
        for i in range(n):
            for j in range(n):
                if self.rows[i][j] != 0 and (i + 1, j + 1) not in self.pattern.pairs:
                    raise OffPattern(f"nonzero entry at ({i + 1},{j + 1}) outside the pattern")

    @property
    def n(self) -> int:
        return self.pattern.n

    def entry(self, i: int, j: int) -> Scalar:
        return self.rows[i - 1][j - 1]

    @classmethod
    def from_entries(cls, field: Field, pattern: Relation, entries) -> StructMatrix:
        rows = tuple(tuple(field.element(v) for v in row) for row in entries)
        return cls(field, pattern, rows)

    @classmethod
    def from_values(cls, field: Field, pattern: Relation, values: dict[tuple[int, int], Scalar]) -> StructMatrix:
        n = pattern.n
        zero = field.zero()
        grid = [[zero] * n for _ in range(n)]
        for (i, j), v in values.items():
            grid[i - 1][j - 1] = field.element(v)
        return cls(field, pattern, tuple(tuple(r) for r in grid))

    def _check_compatible(self, other: StructMatrix) -> None:
        if self.field != other.field:
            raise FieldMismatch(f"{self.field.name} vs {other.field.name}")
        if self.pattern != other.pattern:
            raise PatternMismatch("matrices are constrained by different relations")

    def __add__(self, other: StructMatrix) -> StructMatrix:
        self._check_compatible(other)
        return StructMatrix(self.field, self.pattern, grid_add(self.field, self.rows, other.rows))

    def __sub__(self, other: StructMatrix) -> StructMatrix:
        self._check_compatible(other)
        return StructMatrix(self.field, self.pattern, grid_sub(self.field, self.rows, other.rows))

    def __mul__(self, other: StructMatrix) -> StructMatrix:
        self._check_compatible(other)
        return StructMatrix(self.field, self.pattern, grid_mul(self.field, self.rows, other.rows))

    def scale(self, c) -> StructMatrix:
        return StructMatrix(self.field, self.pattern, grid_scale(self.field, self.field.element(c), self.rows))

    def inverse(self) -> StructMatrix:
        """Exact inverse.  The inverse of an invertible algebra element stays in
        the algebra; this is asserted by the pattern check rather than assumed."""
        inv = invert_grid(self.field, self.rows)
        if not is_member(self.pattern, inv):
            raise OffPattern("inverse left the pattern; input was not an algebra element")
        return StructMatrix(self.field, self.pattern, inv)

    def is_zero(self) -> bool:
        return grid_is_zero(self.rows)

    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "n": self.n,
            "entries": [[self.field.scalar_to_json(v) for v in row] for row in self.rows],
        }

    @classmethod
    def from_json(cls, obj, pattern: Relation) -> StructMatrix:
        if not isinstance(obj, dict) or "field" not in obj or "entries" not in obj:
            raise ParseError('matrix JSON must be {"field": ..., "n": ..., "entries": [[...], ...]}')
        field = Field.from_json(obj["field"])
        entries = obj["entries"]
        n = int(obj.get("n", len(entries)))
        if n != pattern.n:
            raise ParseError(f"matrix size {n} does not match the relation size {pattern.n}")
        if len(entries) != n or any(len(r) != n for r in entries):
            raise ParseError(f"expected a {n}x{n} entries grid")
        rows = tuple(tuple(field.parse_scalar(v) for v in row) for row in entries)
        return cls(field, pattern, rows)


def multiply(a: StructMatrix, b: StructMatrix) -> StructMatrix:
    """Matrix product; closure under the pattern is rechecked by construction."""
    return a * b


def invert(a: StructMatrix) -> StructMatrix:
    return a.inverse()


def identity_matrix(field: Field, pattern: Relation) -> StructMatrix:
    return StructMatrix(field, pattern, identity_grid(field, pattern.n))


def matrix_unit(rel: Relation, field: Field, i: int, j: int) -> StructMatrix:
    """The matrix with a single 1 at position (i,j); the pair must lie in the relation."""
    if (i, j) not in rel.pairs:
        raise OffPattern(f"({i},{j}) is not in the relation")
    return StructMatrix.from_values(field, rel, {(i, j): field.one()})


def diagonal_matrix(field: Field, pattern: Relation, values: Iterable) -> StructMatrix:
    vals = [field.element(v) for v in values]
    if len(vals) != pattern.n:
        raise ValueError(f"expected {pattern.n} diagonal values")
    return StructMatrix.from_values(field, pattern, {(i, i): v for i, v in enumerate(vals, start=1)})
