"""Brute-force cross-checks and seeded random generators.

These deliberately share no machinery with the main implementations beyond
the Relation type and scalar arithmetic: automorphisms are found by filtering
every permutation, cocycle ranks come from the raw unreduced constraint
system with a local elimination routine, and quasi-orders are enumerated by
filtering every off-diagonal pair subset.
"""

from __future__ import annotations

import os
import random
from fractions import Fraction
from itertools import permutations
from typing import Iterator

from .algebra import Field, StructMatrix, invert_grid
from .automorphism import FactoredAutomorphism, enumerate_relation_automorphisms
from .blockform import Permutation
from .errors import BoundExceeded, Singular
from .relation import Relation
from .transitive import TransitiveFn, cocycle_rank

BRUTE_AUTOS_BOUND = 8
BRUTE_RANK_BOUND = 6
QUASIORDER_BOUND = 4


def _bound(default: int) -> int:
    env = os.environ.get("SMA_MAX_N")
    return int(env) if env else default


def brute_relation_automorphisms(rel: Relation) -> tuple[Permutation, ...]:
    """Filter all n! permutations by the definitional test."""
    n = rel.n
    if n > _bound(BRUTE_AUTOS_BOUND):
        raise BoundExceeded(f"n = {n} exceeds the brute-force bound")
    found = []
    everything = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    for image in permutations(range(1, n + 1)):
        if all(((i, j) in rel.pairs) == ((image[i - 1], image[j - 1]) in rel.pairs) for i, j in everything):
            found.append(Permutation(n, image))
    return tuple(found)


def _rank_fractions(rows: list[list[Fraction]]) -> int:
    """Row-reduction rank over the rationals, local to the oracle."""
    mat = [list(r) for r in rows]
    rank = 0
    ncols = len(mat[0]) if mat else 0
    for c in range(ncols):
        pivot = next((i for i in range(rank, len(mat)) if mat[i][c] != 0), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        pv = mat[rank][c]
        mat[rank] = [x / pv for x in mat[rank]]
        for i in range(len(mat)):
            if i != rank and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[rank])]
        rank += 1
    return rank


def brute_cocycle_rank(rel: Relation) -> int:
    """Solution dimension of the raw chain constraints minus the coboundary dimension.

    No structural shortcuts: every off-diagonal pair is its own variable (the
    antisymmetry x(j,i) = -x(i,j) has to emerge from the constraints), and the
    coboundary dimension is the rank of the full difference map.
    """
    if rel.n > _bound(BRUTE_RANK_BOUND):
        raise BoundExceeded(f"n = {rel.n} exceeds the brute-force bound")
    variables = rel.off_diagonal_pairs()
    index = {p: k for k, p in enumerate(variables)}
    nvars = len(variables)
    zero, one = Fraction(0), Fraction(1)

    rows = []
    for (i, j) in rel.sorted_pairs():
        for (j2, k) in rel.sorted_pairs():
            if j2 != j:
                continue
            row = [zero] * nvars
            if i != j:
                row[index[(i, j)]] += one
            if j != k:
                row[index[(j, k)]] += one
            if i != k:
                row[index[(i, k)]] -= one
            if any(v != 0 for v in row):
                rows.append(row)
    solution_dim = nvars - _rank_fractions(rows)

    cob_rows = []
    for (i, j) in variables:
        row = [zero] * rel.n
        row[i - 1] += one
        row[j - 1] -= one
        cob_rows.append(row)
    coboundary_dim = _rank_fractions(cob_rows)
    return solution_dim - coboundary_dim


def enumerate_quasiorders(n: int) -> Iterator[Relation]:
    """All reflexive-transitive relations on {1..n}, by filtering pair subsets."""
    if n > _bound(QUASIORDER_BOUND):
        raise BoundExceeded(f"n = {n} exceeds the enumeration bound")
    diagonal = [(i, i) for i in range(1, n + 1)]
    off = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1) if i != j]
    for mask in range(1 << len(off)):
        chosen = {off[b] for b in range(len(off)) if mask >> b & 1}
        pairs = chosen.union(diagonal)
        transitive = True
        for (i, j) in pairs:
            for (j2, k) in pairs:
                if j2 == j and (i, k) not in pairs:
                    transitive = False
                    break
            if not transitive:
                break
        if transitive:
            yield Relation(n, frozenset(pairs))


_RATIONAL_BASES = (2, 3, 5, 7)


def random_in_pattern(rel: Relation, field: Field, rng: random.Random) -> StructMatrix:
    values = {p: field.random(rng) for p in rel.sorted_pairs()}
    return StructMatrix.from_values(field, rel, values)


def random_invertible(rel: Relation, field: Field, rng: random.Random) -> StructMatrix:
    """Random in-pattern matrix, resampled until invertible."""
    while True:
        m = random_in_pattern(rel, field, rng)
        try:
            invert_grid(field, m.rows)
        except Singular:
            continue
        return m


def random_transitive_fn(rel: Relation, field: Field, rng: random.Random) -> TransitiveFn:
    """Random coboundary times random small powers of the canonical generators."""
    scaling = [field.random_nonzero(rng) for _ in range(rel.n)]
    values = {
        p: field.div(scaling[p[0] - 1], scaling[p[1] - 1]) for p in rel.off_diagonal_pairs()
    }
    basis = cocycle_rank(rel)
    for k in range(basis.rank):
        power = rng.randint(-3, 3)
        if field.is_rational:
            base = field.element(rng.choice(_RATIONAL_BASES))
        else:
            base = field.element(rng.randrange(1, field.char))
        for pair, e in zip(basis.pairs, basis.vectors[k]):
            if e:
                values[pair] = field.reduce(values[pair] * field.pow(base, power * int(e)))
    return TransitiveFn.build(rel, field, values)


def random_factored_automorphism(rel: Relation, field: Field, seed: int) -> FactoredAutomorphism:
    """Deterministic-in-seed factored automorphism with all three parts random."""
    rng = random.Random(seed)
    conjugator = random_invertible(rel, field, rng)
    taus = enumerate_relation_automorphisms(rel)
    tau = taus[rng.randrange(len(taus))]
    scaling = random_transitive_fn(rel, field, rng)
    return FactoredAutomorphism(conjugator, scaling, tau)
