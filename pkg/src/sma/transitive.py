"""Multiplicative scaling functions on a quasi-order's pairs.

A transitive function assigns a nonzero scalar g(i,j) to every related pair so
that g(i,j)g(j,k) = g(i,k) whenever the chain composes; it is a multiplicative
1-cocycle on the relation.  Coboundaries g(i,j) = s(i)/s(j) are the trivial
ones: they induce inner automorphisms via a diagonal conjugating matrix.  The
quotient of cocycles by coboundaries is computed exactly over the rationals on
exponents, with canonical generators normalized to zero on a fixed spanning
forest of the comparability graph.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Iterable, Mapping, Union

from .errors import DomainMismatch, InvalidRelation, NotTransitive, ParseError
from .algebra import RATIONALS, Field, Scalar, matrix_rank, nullspace
from .relation import Relation, validate

MAX_REPORTED_VIOLATIONS = 100


@dataclass(frozen=True)
class TransitiveFn:
    """Map from every relation pair to a nonzero scalar, diagonal pinned to 1."""

    relation: Relation
    field: Field
    entries: tuple[tuple[tuple[int, int], Scalar], ...]  # sorted by pair

    @cached_property
    def _lookup(self) -> dict[tuple[int, int], Scalar]:
        return dict(self.entries)

    def __call__(self, i: int, j: int) -> Scalar:
        return self._lookup[(i, j)]

    @classmethod
    def build(
        cls,
        relation: Relation,
        field: Field,
        values: Union[Mapping[tuple[int, int], object], Iterable, None] = None,
    ) -> TransitiveFn:
        """Construct from a (possibly partial) assignment; omitted pairs default to 1.

        The domain must be contained in the relation, every value must be
        nonzero, and any explicitly given diagonal value must be 1.
        """
        report = validate(relation)
        if not report.ok:
            raise InvalidRelation("transitive functions require a valid quasi-order")
        given: dict[tuple[int, int], Scalar] = {}
        items = values.items() if isinstance(values, Mapping) else (values or [])
        for pair, raw in items:
            i, j = int(pair[0]), int(pair[1])
            if (i, j) not in relation.pairs:
                raise DomainMismatch(f"value given for ({i},{j}), which is not in the relation")
            v = field.element(raw)
            if v == 0:
                raise ValueError(f"value at ({i},{j}) must be nonzero")
            if i == j and v != field.one():
                raise ValueError(f"diagonal value at ({i},{i}) must be 1")
            given[(i, j)] = v
        one = field.one()
        complete = tuple(
            (pair, given.get(pair, one)) for pair in relation.sorted_pairs()
        )
        return cls(relation, field, complete)

    @classmethod
    def ones(cls, relation: Relation, field: Field) -> TransitiveFn:
        return cls.build(relation, field, {})

    def nontrivial_values(self) -> dict[tuple[int, int], Scalar]:
        one = self.field.one()
        return {p: v for p, v in self.entries if v != one}

    def pointwise_mul(self, other: TransitiveFn) -> TransitiveFn:
        if self.relation != other.relation or self.field != other.field:
            raise DomainMismatch("pointwise product requires the same relation and field")
        vals = {p: self.field.reduce(v * other._lookup[p]) for p, v in self.entries}
        return TransitiveFn.build(self.relation, self.field, vals)

    def pointwise_inv(self) -> TransitiveFn:
        vals = {p: self.field.inv(v) for p, v in self.entries}
        return TransitiveFn.build(self.relation, self.field, vals)

    def to_json(self) -> dict:
        return {
            "field": self.field.to_json(),
            "values": [
                [i, j, self.field.scalar_to_json(v)]
                for (i, j), v in sorted(self.nontrivial_values().items())
            ],
        }

    @classmethod
    def from_json(cls, obj, relation: Relation) -> TransitiveFn:
        if not isinstance(obj, dict) or "field" not in obj:
            raise ParseError('transitive-function JSON must be {"field": ..., "values": [[i, j, v], ...]}')
        field = Field.from_json(obj["field"])
        vals: dict[tuple[int, int], Scalar] = {}
        for item in obj.get("values", []):
            try:
                i, j, raw = item
            except (TypeError, ValueError) as exc:
                raise ParseError(f"malformed value triple {item!r}") from exc
            vals[(int(i), int(j))] = field.parse_scalar(raw)
        try:
            return cls.build(relation, field, vals)
        except (ValueError, DomainMismatch) as exc:
            raise ParseError(str(exc)) from exc


def coboundary(relation: Relation, field: Field, scaling: Iterable) -> TransitiveFn:
    """The transitive function g(i,j) = s(i) / s(j) for a nonzero scaling s."""
    s = [field.element(v) for v in scaling]
    if len(s) != relation.n:
        raise ValueError(f"expected {relation.n} scaling values")
    if any(v == 0 for v in s):
        raise ValueError("scaling values must be nonzero")
    vals = {
        (i, j): field.div(s[i - 1], s[j - 1])
        for (i, j) in relation.off_diagonal_pairs()
    }
    return TransitiveFn.build(relation, field, vals)


def exponential(relation: Relation, field: Field, pairs, exponents, base) -> TransitiveFn:
    """base**e(i,j) on each off-diagonal pair, from an integer exponent vector."""
    b = field.element(base)
    vals = {}
    for pair, e in zip(pairs, exponents):
        if e:
            vals[pair] = field.pow(b, int(e))
    return TransitiveFn.build(relation, field, vals)


@dataclass(frozen=True)
class CocycleViolation:
    first: tuple[int, int]
    second: tuple[int, int]
    product: Scalar
    expected: Scalar

    def __str__(self) -> str:
        (i, j), (_, k) = self.first, self.second
        return (
            f"g({i},{j})*g({j},{k}) = {self.product} but g({i},{k}) = {self.expected}"
        )


@dataclass(frozen=True)
class TransitivityReport:
    ok: bool
    violations: tuple[CocycleViolation, ...]
    truncated: bool = False


def check_transitive(g: TransitiveFn) -> TransitivityReport:
    """Verify g(i,j)g(j,k) = g(i,k) over every composable pair of pairs."""
    rel = g.relation
    fld = g.field
    succ = {i: rel.successors(i) for i in range(1, rel.n + 1)}
    violations: list[CocycleViolation] = []
    truncated = False
    for i, j in rel.sorted_pairs():
        for k in succ[j]:
            lhs = fld.reduce(g(i, j) * g(j, k))
            rhs = g(i, k)
            if lhs != rhs:
                if len(violations) >= MAX_REPORTED_VIOLATIONS:
                    truncated = True
                    break
                violations.append(CocycleViolation((i, j), (j, k), lhs, rhs))
        if truncated:
            break
    return TransitivityReport(not violations and not truncated, tuple(violations), truncated)


# ---------------------------------------------------------------------------
# comparability graph and its canonical spanning forest

@dataclass(frozen=True)
class Forest:
    components: tuple[tuple[int, ...], ...]     # vertex sets, sorted
    tree_edges: frozenset[tuple[int, int]]      # stored as (min, max)
    order: tuple[tuple[int, int], ...]          # (parent, child) in propagation order
    roots: tuple[int, ...]


def comparability_edges(rel: Relation) -> tuple[tuple[int, int], ...]:
    """Undirected edges {i,j}, i < j, with at least one direction related."""
    edges = {(min(i, j), max(i, j)) for i, j in rel.pairs if i != j}
    return tuple(sorted(edges))


def spanning_forest(rel: Relation) -> Forest:
    """Deterministic spanning forest of the comparability graph.

    Edges are taken greedily in descending (i,j) order, so the pairs left out
    of the forest (where free cocycle parameters live) are the
    lexicographically earliest ones.  Each component is rooted at its minimum
    vertex and traversed breadth-first for propagation.
    """
    n = rel.n
    parent_uf = list(range(n + 1))

    def find(x: int) -> int:
        while parent_uf[x] != x:
            parent_uf[x] = parent_uf[parent_uf[x]]
            x = parent_uf[x]
        return x

    tree: set[tuple[int, int]] = set()
    for i, j in sorted(comparability_edges(rel), reverse=True):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent_uf[ri] = rj
            tree.add((i, j))

    adjacency: dict[int, list[int]] = {v: [] for v in range(1, n + 1)}
    for i, j in tree:
        adjacency[i].append(j)
        adjacency[j].append(i)

    seen: set[int] = set()
    components: list[tuple[int, ...]] = []
    roots: list[int] = []
    order: list[tuple[int, int]] = []
    for root in range(1, n + 1):
        if root in seen:
            continue
        comp = [root]
        seen.add(root)
        queue = [root]
        while queue:
            u = queue.pop(0)
            for v in sorted(adjacency[u]):
                if v not in seen:
                    seen.add(v)
                    comp.append(v)
                    order.append((u, v))
                    queue.append(v)
        components.append(tuple(sorted(comp)))
        roots.append(root)
    return Forest(tuple(components), frozenset(tree), tuple(order), tuple(roots))


@dataclass(frozen=True)
class ScalingVector:
    """Nonzero scalar per element; witnesses g(i,j) = s(i)/s(j)."""

    field: Field
    values: tuple[Scalar, ...]

    def __call__(self, i: int) -> Scalar:
        return self.values[i - 1]

    def to_json(self) -> list:
        return [self.field.scalar_to_json(v) for v in self.values]


@dataclass(frozen=True)
class ViolatingCycle:
    """Closed walk in the comparability graph whose oriented g-product is not 1.

    Edges traversed against their relation orientation contribute the inverse
    value, so the product is conjugation-invariant evidence of nontriviality.
    """

    vertices: tuple[int, ...]
    product: Scalar


def _propagate_scaling(g: TransitiveFn, forest: Forest) -> tuple[Scalar, ...]:
    rel, fld = g.relation, g.field
    s: dict[int, Scalar] = {root: fld.one() for root in forest.roots}
    for u, v in forest.order:
        if (u, v) in rel.pairs:
            s[v] = fld.div(s[u], g(u, v))       # g(u,v) = s(u)/s(v)
        else:
            s[v] = fld.reduce(g(v, u) * s[u])   # g(v,u) = s(v)/s(u)
    return tuple(s[i] for i in range(1, rel.n + 1))


def canonicalize(g: TransitiveFn) -> tuple[ScalingVector, TransitiveFn]:
    """Split g = coboundary(s) * canonical, the canonical part 1 on the forest.

    The canonical part depends only on the cocycle class of g, so two
    transitive functions differing by a coboundary canonicalize identically.
    """
    fld = g.field
    forest = spanning_forest(g.relation)
    s = _propagate_scaling(g, forest)
    canon_vals = {}
    for (i, j), v in g.entries:
        if i != j:
            canon_vals[(i, j)] = fld.reduce(fld.div(v * s[j - 1], s[i - 1]))
    canonical = TransitiveFn.build(g.relation, fld, canon_vals)
    return ScalingVector(fld, s), canonical


def _tree_path_to_root(v: int, parents: dict[int, int]) -> list[int]:
    path = [v]
    while path[-1] in parents:
        path.append(parents[path[-1]])
    return path


def triviality_witness(g: TransitiveFn) -> Union[ScalingVector, ViolatingCycle]:
    """Either a scaling s with g(i,j) = s(i)/s(j) everywhere, or a violating cycle.

    Propagates a candidate scaling along the spanning forest; the first
    off-forest pair (in sorted order) that disagrees yields a closed walk
    through the tree whose oriented product differs from 1.
    """
    report = check_transitive(g)
    if not report.ok:
        raise NotTransitive(str(report.violations[0]) if report.violations else "cocycle check failed")
    rel, fld = g.relation, g.field
    forest = spanning_forest(g.relation)
    s = _propagate_scaling(g, forest)
    bad_pair = None
    for (i, j), v in g.entries:
        if i != j and fld.div(s[i - 1], s[j - 1]) != v:
            bad_pair = (i, j)
            break
    if bad_pair is None:
        return ScalingVector(fld, s)

    i, j = bad_pair
    parents = {child: parent for parent, child in forest.order}
    path_i = _tree_path_to_root(i, parents)
    path_j = _tree_path_to_root(j, parents)
    shared = 0
    while (
        shared < min(len(path_i), len(path_j))
        and path_i[-1 - shared] == path_j[-1 - shared]
    ):
        shared += 1
    walk = [i, j]
    walk.extend(path_j[1 : len(path_j) - shared + 1])        # j up to the meeting vertex
    down = list(reversed(path_i[: len(path_i) - shared + 1]))  # meeting vertex back to i
    walk.extend(down[1:])

    product = fld.one()
    for u, v in zip(walk, walk[1:]):
        if (u, v) in rel.pairs:
            product = fld.reduce(product * g(u, v))
        else:
            product = fld.reduce(product * fld.inv(g(v, u)))
    assert product != fld.one(), "cycle construction must exhibit the obstruction"
    return ViolatingCycle(tuple(walk), product)


# ---------------------------------------------------------------------------
# the cocycle/coboundary quotient on integer exponents

@dataclass(frozen=True)
class CocycleBasis:
    """Canonical generators of nontrivial transitive functions, as exponents.

    `pairs` lists every off-diagonal related pair; each generator assigns an
    integer exponent per pair and is zero on the canonical spanning forest.
    Raising any nonzero scalar to a generator yields a transitive function.
    """

    rank: int
    pairs: tuple[tuple[int, int], ...]
    vectors: tuple[tuple[int, ...], ...]

    def exponents(self, k: int) -> dict[tuple[int, int], int]:
        return {p: e for p, e in zip(self.pairs, self.vectors[k]) if e}


def _primitive_integer(vec: Iterable[Fraction]) -> tuple[int, ...]:
    vec = list(vec)
    denom_lcm = 1
    for v in vec:
        denom_lcm = denom_lcm * v.denominator // gcd(denom_lcm, v.denominator)
    ints = [int(v * denom_lcm) for v in vec]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g > 1:
        ints = [v // g for v in ints]
    first = next((v for v in ints if v != 0), 0)
    if first < 0:
        ints = [-v for v in ints]
    return tuple(ints)


def cocycle_rank(rel: Relation) -> CocycleBasis:
    """Dimension and canonical basis of transitive functions modulo coboundaries.

    Additive variables x(i,j) live on off-diagonal pairs, with x(j,i) = -x(i,j)
    when both directions are present; chain constraints x(i,j)+x(j,k) = x(i,k)
    cut out the cocycles.  The coboundary subspace has dimension n minus the
    number of comparability components, and the canonical complement is the
    set of cocycles vanishing on the spanning forest.
    """
    report = validate(rel)
    if not report.ok:
        raise InvalidRelation("cocycle rank requires a valid quasi-order")
    all_pairs = rel.off_diagonal_pairs()

    var_index: dict[tuple[int, int], int] = {}
    signed: dict[tuple[int, int], tuple[int, int]] = {}  # pair -> (var, sign)
    for i, j in all_pairs:
        if (j, i) in rel.pairs and (j, i) < (i, j):
            continue
        var_index[(i, j)] = len(var_index)
    for i, j in all_pairs:
        if (i, j) in var_index:
            signed[(i, j)] = (var_index[(i, j)], 1)
        else:
            signed[(i, j)] = (var_index[(j, i)], -1)
    nvars = len(var_index)

    zero, one = Fraction(0), Fraction(1)
    rows: list[list[Fraction]] = []
    succ = {i: rel.successors(i) for i in range(1, rel.n + 1)}
    for i, j in all_pairs:
        for k in succ[j]:
            if k == j or k == i:
                continue
            row = [zero] * nvars
            for pair, coeff in (((i, j), one), ((j, k), one), ((i, k), -one)):
                var, sign = signed[pair]
                row[var] += sign * coeff
            if any(v != 0 for v in row):
                rows.append(row)

    solution_dim = nvars - (matrix_rank(RATIONALS, rows) if rows else 0)
    forest = spanning_forest(rel)
    coboundary_dim = rel.n - len(forest.components)

    normalized_rows = list(rows)
    for i, j in sorted(forest.tree_edges):
        pair = (i, j) if (i, j) in rel.pairs else (j, i)
        row = [zero] * nvars
        row[signed[pair][0]] = one
        normalized_rows.append(row)
    basis = nullspace(RATIONALS, normalized_rows, nvars) if nvars else []

    vectors = []
    for vec in basis:
        expanded = [signed[p][1] * vec[signed[p][0]] for p in all_pairs]
        vectors.append(_primitive_integer(Fraction(v) for v in expanded))
    rank = len(vectors)
    assert rank == solution_dim - coboundary_dim, "forest normalization lost dimensions"
    return CocycleBasis(rank, all_pairs, tuple(vectors))


def induced_automorphism(g: TransitiveFn):
    """The algebra automorphism scaling each matrix unit by g's value on its pair."""
    report = check_transitive(g)
    if not report.ok:
        raise NotTransitive(str(report.violations[0]) if report.violations else "cocycle check failed")
    from .automorphism import BasisImageAutomorphism  # deferred: automorphism imports this module

    fld = g.field
    n = g.relation.n
    zero = fld.zero()
    images = {}
    for (i, j), v in g.entries:
        grid = [[zero] * n for _ in range(n)]
        grid[i - 1][j - 1] = v
        images[(i, j)] = tuple(tuple(row) for row in grid)
    return BasisImageAutomorphism.from_map(g.relation, fld, images)
