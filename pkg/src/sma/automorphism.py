"""Algebra automorphisms: permutation similarities, inner maps, and basis images.

An automorphism can be given in factored form (conjugator, scaling function,
relation permutation, applied right to left) or by its images on the matrix
units.  Basis images are the universal interchange form; the factored form
converts on demand and caches nothing.  Conventions, pinned by the tests:
conjugation is B -> A^-1 B A, and a permutation similarity acts entrywise as
B -> (B[t(i)][t(j)]).
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from typing import Union

from .algebra import (
    Field,
    Grid,
    StructMatrix,
    grid_add,
    grid_is_zero,
    grid_mul,
    grid_scale,
    identity_grid,
    invert_grid,
    is_member,
    matrix_rank,
    zero_grid,
)
from .blockform import Permutation
from .errors import (
    BoundExceeded,
    Mismatch,
    NotRelationAutomorphism,
    NotTransitive,
    OffPattern,
    ParseError,
    Singular,
)
from .relation import Relation, equivalence_classes
from .transitive import TransitiveFn, check_transitive

DEFAULT_ENUMERATION_BOUND = 10


def is_relation_automorphism(rel: Relation, tau: Permutation) -> bool:
    """True iff (i,j) and (tau(i),tau(j)) are related or unrelated together, for all i,j."""
    if tau.n != rel.n:
        raise ValueError("permutation size does not match the relation")
    for i in range(1, rel.n + 1):
        for j in range(1, rel.n + 1):
            if (((i, j) in rel.pairs) != ((tau(i), tau(j)) in rel.pairs)):
                return False
    return True


def _enumeration_bound(explicit) -> int:
    if explicit is not None:
        return int(explicit)
    env = os.environ.get("SMA_MAX_N")
    return int(env) if env else DEFAULT_ENUMERATION_BOUND


def enumerate_relation_automorphisms(rel: Relation, bound=None) -> tuple[Permutation, ...]:
    """All relation automorphisms, in lexicographic order of the image tuple.

    Backtracking search; candidate images must preserve in-degree, out-degree,
    and class size, and every partial assignment is checked both ways against
    the already-placed elements.
    """
    n = rel.n
    if n > _enumeration_bound(bound):
        raise BoundExceeded(f"n = {n} exceeds the enumeration bound (set SMA_MAX_N to raise it)")
    part = equivalence_classes(rel)
    outdeg = {i: 0 for i in range(1, n + 1)}
    indeg = {i: 0 for i in range(1, n + 1)}
    for i, j in rel.pairs:
        outdeg[i] += 1
        indeg[j] += 1
    signature = {
        i: (outdeg[i], indeg[i], len(part.classes[part.class_of(i)])) for i in range(1, n + 1)
    }
    candidates = {
        i: tuple(j for j in range(1, n + 1) if signature[j] == signature[i])
        for i in range(1, n + 1)
    }

    found: list[Permutation] = []
    image = [0] * (n + 1)
    used = [False] * (n + 1)

    def place(i: int) -> None:
        if i > n:
            found.append(Permutation(n, tuple(image[1:])))
            return
        for j in candidates[i]:
            if used[j]:
                continue
            ok = True
            for t in range(1, i + 1):
                jt = image[t] if t < i else j
                if ((i, t) in rel.pairs) != ((j, jt) in rel.pairs):
                    ok = False
                    break
                if ((t, i) in rel.pairs) != ((jt, j) in rel.pairs):
                    ok = False
                    break
            if not ok:
                continue
            image[i] = j
            used[j] = True
            place(i + 1)
            used[j] = False
        image[i] = 0

    place(1)
    return tuple(found)


@dataclass(frozen=True)
class FactoredAutomorphism:
    """Composite map B -> A^-1 * scale(B[t(i)][t(j)]) * A, right factor first."""

    conjugator: StructMatrix
    scaling: TransitiveFn
    permutation: Permutation

    def __post_init__(self) -> None:
        a = self.conjugator
        if self.scaling.relation != a.pattern or self.scaling.field != a.field:
            raise Mismatch("factors must share one relation and one field")
        if self.permutation.n != a.n:
            raise Mismatch("permutation size does not match")
        if not is_relation_automorphism(a.pattern, self.permutation):
            raise NotRelationAutomorphism(
                f"{self.permutation.cycle_notation()} does not preserve the relation"
            )
        report = check_transitive(self.scaling)
        if not report.ok:
            raise NotTransitive(str(report.violations[0]))

    @property
    def relation(self) -> Relation:
        return self.conjugator.pattern

    @property
    def field(self) -> Field:
        return self.conjugator.field

    def images(self) -> dict[tuple[int, int], Grid]:
        """Image of each matrix unit, computed in one pass (nothing is cached)."""
        fld, rel = self.field, self.relation
        a = self.conjugator.rows
        a_inv = invert_grid(fld, a)
        tau_inv = self.permutation.inverse()
        n = rel.n
        out = {}
        for i, j in rel.sorted_pairs():
            bi, bj = tau_inv(i), tau_inv(j)
            c = self.scaling(bi, bj)
            # A^-1 E^{bi,bj} A is the outer product of A^-1's column bi with A's row bj.
            grid = tuple(
                tuple(fld.reduce(c * a_inv[r][bi - 1] * a[bj - 1][s]) for s in range(n))
                for r in range(n)
            )
            out[(i, j)] = grid
        return out

    def apply_grid(self, grid: Grid) -> Grid:
        fld, rel = self.field, self.relation
        n = rel.n
        if not is_member(rel, grid):
            raise OffPattern("matrix is not in the algebra")
        tau = self.permutation
        moved = [[grid[tau(i) - 1][tau(j) - 1] for j in range(1, n + 1)] for i in range(1, n + 1)]
        for i, j in rel.sorted_pairs():
            v = moved[i - 1][j - 1]
            if v != 0:
                moved[i - 1][j - 1] = fld.reduce(v * self.scaling(i, j))
        a = self.conjugator.rows
        a_inv = invert_grid(fld, a)
        return grid_mul(fld, grid_mul(fld, a_inv, tuple(map(tuple, moved))), a)

    def apply(self, m: StructMatrix) -> StructMatrix:
        _check_applicable(self, m)
        return StructMatrix(self.field, self.relation, self.apply_grid(m.rows))

    def as_basis_images(self) -> BasisImageAutomorphism:
        return BasisImageAutomorphism.from_map(self.relation, self.field, self.images())

    def to_json(self) -> dict:
        return {
            "A": self.conjugator.to_json(),
            "g": self.scaling.to_json(),
            "tau": self.permutation.to_json(),
        }


@dataclass(frozen=True)
class BasisImageAutomorphism:
    """Linear map recorded by its matrix-unit images; nothing about it is assumed."""

    relation: Relation
    field: Field
    images_table: tuple[tuple[tuple[int, int], Grid], ...]  # sorted by pair

    @cached_property
    def _lookup(self) -> dict[tuple[int, int], Grid]:
        return dict(self.images_table)

    @classmethod
    def from_map(cls, relation: Relation, field: Field, images) -> BasisImageAutomorphism:
        pairs = relation.sorted_pairs()
        missing = [p for p in pairs if p not in images]
        extra = [p for p in images if p not in relation.pairs]
        if missing or extra:
            raise Mismatch(f"images must cover the relation exactly (missing {missing[:3]}, extra {extra[:3]})")
        table = tuple((p, tuple(tuple(row) for row in images[p])) for p in pairs)
        return cls(relation, field, table)

    def image(self, i: int, j: int) -> Grid:
        return self._lookup[(i, j)]

    def images(self) -> dict[tuple[int, int], Grid]:
        return dict(self.images_table)

    def apply_grid(self, grid: Grid) -> Grid:
        fld, rel = self.field, self.relation
        n = rel.n
        if not is_member(rel, grid):
            raise OffPattern("matrix is not in the algebra")
        acc = zero_grid(fld, n)
        for (i, j), img in self.images_table:
            c = grid[i - 1][j - 1]
            if c != 0:
                acc = grid_add(fld, acc, grid_scale(fld, c, img))
        return acc

    def apply(self, m: StructMatrix) -> StructMatrix:
        _check_applicable(self, m)
        return StructMatrix(self.field, self.relation, self.apply_grid(m.rows))

    def to_json(self) -> dict:
        return {
            "images": [
                [i, j, _grid_json(self.field, self.relation.n, img)]
                for (i, j), img in self.images_table
            ]
        }


AutomorphismSpec = Union[FactoredAutomorphism, BasisImageAutomorphism]


def _grid_json(field: Field, n: int, grid: Grid) -> dict:
    return {
        "field": field.to_json(),
        "n": n,
        "entries": [[field.scalar_to_json(v) for v in row] for row in grid],
    }


def _check_applicable(phi: AutomorphismSpec, m: StructMatrix) -> None:
    if m.field != phi.field:
        raise Mismatch(f"matrix over {m.field.name}, map over {phi.field.name}")
    if m.pattern != phi.relation:
        raise Mismatch("matrix and map are constrained by different relations")


def images_of(phi: AutomorphismSpec) -> dict[tuple[int, int], Grid]:
    return phi.images()


def permutation_similarity(rel: Relation, tau: Permutation, field: Field) -> FactoredAutomorphism:
    """The map B -> (B[tau(i)][tau(j)]), for a relation-preserving permutation."""
    if not is_relation_automorphism(rel, tau):
        raise NotRelationAutomorphism(f"{tau.cycle_notation()} does not preserve the relation")
    from .algebra import identity_matrix

    return FactoredAutomorphism(identity_matrix(field, rel), TransitiveFn.ones(rel, field), tau)


def inner_automorphism(a: StructMatrix) -> FactoredAutomorphism:
    """Conjugation B -> A^-1 B A by an invertible in-pattern matrix."""
    invert_grid(a.field, a.rows)  # raises Singular now rather than at first use
    return FactoredAutomorphism(
        a, TransitiveFn.ones(a.pattern, a.field), Permutation.identity_perm(a.n)
    )


def identity_automorphism(rel: Relation, field: Field) -> FactoredAutomorphism:
    from .algebra import identity_matrix

    return FactoredAutomorphism(
        identity_matrix(field, rel), TransitiveFn.ones(rel, field), Permutation.identity_perm(rel.n)
    )


def compose(outer: AutomorphismSpec, inner: AutomorphismSpec) -> BasisImageAutomorphism:
    """The map X -> outer(inner(X)), recorded on basis images."""
    if outer.relation != inner.relation or outer.field != inner.field:
        raise Mismatch("composition requires the same relation and field")
    inner_images = inner.images()
    images = {p: _apply_to_grid(outer, img) for p, img in inner_images.items()}
    return BasisImageAutomorphism.from_map(outer.relation, outer.field, images)


def _apply_to_grid(phi: AutomorphismSpec, grid: Grid) -> Grid:
    return phi.apply_grid(grid)


def apply(phi: AutomorphismSpec, m: StructMatrix) -> StructMatrix:
    """Evaluate the map on an algebra element, by linearity over the unit basis."""
    return phi.apply(m)


def equal_as_maps(a: AutomorphismSpec, b: AutomorphismSpec) -> bool:
    """Equality of automorphisms is exact equality of every basis image."""
    if a.relation != b.relation or a.field != b.field:
        return False
    return a.images() == b.images()


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    check: str | None = None   # which of pattern/multiplicativity/unit/bijectivity failed
    detail: str | None = None


def verify_automorphism(phi: AutomorphismSpec) -> VerifyReport:
    """Check the defining properties on the basis: in-pattern images, the
    unit-product rule (delta on the middle indices), preservation of the
    identity, and bijectivity of the induced linear map.  Reports the first
    failing identity."""
    rel, fld = phi.relation, phi.field
    images = phi.images()
    pairs = rel.sorted_pairs()

    for p in pairs:
        if not is_member(rel, images[p]):
            return VerifyReport(False, "pattern", f"image of unit {p} leaves the pattern")

    n = rel.n
    zero = zero_grid(fld, n)
    for (i, j) in pairs:
        for (k, l) in pairs:
            prod = grid_mul(fld, images[(i, j)], images[(k, l)])
            expected = images[(i, l)] if j == k else zero
            if prod != expected:
                return VerifyReport(
                    False,
                    "multiplicativity",
                    f"image({i},{j}) * image({k},{l}) != "
                    + (f"image({i},{l})" if j == k else "0"),
                )

    total = zero
    for i in range(1, n + 1):
        total = grid_add(fld, total, images[(i, i)])
    if total != identity_grid(fld, n):
        return VerifyReport(False, "unit", "images of the diagonal units do not sum to the identity")

    coords = []
    for out_pair in pairs:
        r, c = out_pair
        coords.append([images[in_pair][r - 1][c - 1] for in_pair in pairs])
    if matrix_rank(fld, coords) != len(pairs):
        return VerifyReport(False, "bijectivity", "induced linear map is not bijective")
    return VerifyReport(True)


# ---------------------------------------------------------------------------
# JSON wire format

def spec_to_json(phi: AutomorphismSpec) -> dict:
    return phi.to_json()


def spec_from_json(obj, relation: Relation) -> AutomorphismSpec:
    """Parse either the factored form {"A", "g", "tau"} or {"images": [...]}."""
    if not isinstance(obj, dict):
        raise ParseError("automorphism JSON must be an object")
    if "images" in obj:
        images = {}
        field = None
        for item in obj["images"]:
            try:
                i, j, mat = item
            except (TypeError, ValueError) as exc:
                raise ParseError(f"malformed image triple {item!r}") from exc
            m = StructMatrix.from_json(mat, Relation.full(relation.n))
            if field is None:
                field = m.field
            elif field != m.field:
                raise ParseError("images use inconsistent fields")
            images[(int(i), int(j))] = m.rows
        if field is None:
            raise ParseError("images list is empty")
        try:
            return BasisImageAutomorphism.from_map(relation, field, images)
        except Mismatch as exc:
            raise ParseError(str(exc)) from exc
    if {"A", "g", "tau"} <= set(obj):
        a = StructMatrix.from_json(obj["A"], relation)
        g = TransitiveFn.from_json(obj["g"], relation)
        try:
            tau = Permutation(relation.n, tuple(int(v) for v in obj["tau"]))
        except (TypeError, ValueError) as exc:
            raise ParseError(f"malformed permutation: {exc}") from exc
        return FactoredAutomorphism(a, g, tau)
    raise ParseError('automorphism JSON must contain "images" or all of "A", "g", "tau"')
