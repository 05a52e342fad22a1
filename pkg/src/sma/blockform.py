"""Relabelling a quasi-order into block upper triangular form.

Listing each class on a contiguous index range, with the class order a linear
extension of the condensation and the isolated classes trailing, turns the
pattern of the associated matrix algebra into a block upper triangular grid
whose diagonal blocks are the classes.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import InvalidOverride, InvalidRelation
from .relation import (
    ClassPartition,
    CondensationDAG,
    Relation,
    condensation,
    equivalence_classes,
    isolated_classes,
    validate,
)


@dataclass(frozen=True)
class Permutation:
    """Bijection of {1..n}; image[i-1] is where i is sent."""

    n: int
    image: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.image) != self.n or sorted(self.image) != list(range(1, self.n + 1)):
            raise ValueError(f"not a bijection of 1..{self.n}: {self.image}")

    @classmethod
    def identity_perm(cls, n: int) -> Permutation:
        return cls(n, tuple(range(1, n + 1)))

    @classmethod
    def from_mapping(cls, n: int, mapping: dict[int, int]) -> Permutation:
        return cls(n, tuple(mapping[i] for i in range(1, n + 1)))

    def __call__(self, i: int) -> int:
        return self.image[i - 1]

    def inverse(self) -> Permutation:
        inv = [0] * self.n
        for i, img in enumerate(self.image, start=1):
            inv[img - 1] = i
        return Permutation(self.n, tuple(inv))

    def is_identity(self) -> bool:
        return all(self.image[i] == i + 1 for i in range(self.n))

    def cycles(self) -> tuple[tuple[int, ...], ...]:
        """Nontrivial cycles, each starting at its minimum, for display."""
        seen: set[int] = set()
        out: list[tuple[int, ...]] = []
        for i in range(1, self.n + 1):
            if i in seen:
                continue
            cyc = [i]
            j = self(i)
            while j != i:
                cyc.append(j)
                j = self(j)
            seen.update(cyc)
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return tuple(out)

    def cycle_notation(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "id"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cycs)

    def to_json(self) -> list[int]:
        return list(self.image)


def compose_permutations(p: Permutation, q: Permutation) -> Permutation:
    """The bijection i -> p(q(i))."""
    if p.n != q.n:
        raise ValueError("size mismatch")
    return Permutation(p.n, tuple(p(q(i)) for i in range(1, p.n + 1)))


def conjugate_relation(rel: Relation, perm: Permutation) -> Relation:
    """Relabel: (i,j) related in the result iff their preimages are in the source."""
    if perm.n != rel.n:
        raise ValueError("size mismatch")
    return Relation(rel.n, frozenset((perm(i), perm(j)) for i, j in rel.pairs))


@dataclass(frozen=True)
class BlockForm:
    source: Relation
    pi: Permutation
    permuted: Relation
    class_order: tuple[int, ...]  # indices into partition.classes, diagonal order
    block_sizes: tuple[int, ...]
    num_comparable: int
    num_isolated: int
    partition: ClassPartition

    @property
    def p(self) -> int:
        return len(self.class_order)

    def block_spans(self) -> tuple[tuple[int, int], ...]:
        """Half-open 1-based index range (start, stop) of each diagonal block."""
        spans = []
        start = 1
        for size in self.block_sizes:
            spans.append((start, start + size))
            start += size
        return tuple(spans)


def class_order_permutation(part: ClassPartition, order: Sequence[int]) -> Permutation:
    """Permutation sending each class, elements ascending, onto the next free range."""
    mapping: dict[int, int] = {}
    pos = 1
    for cls_idx in order:
        for element in part.classes[cls_idx]:
            mapping[element] = pos
            pos += 1
    return Permutation.from_mapping(len(mapping), mapping)


def _default_class_order(part: ClassPartition, dag: CondensationDAG, isolated: frozenset[int]) -> list[int]:
    """Comparable classes topologically sorted (ties by representative), isolated last."""
    reps = part.representatives
    comparable = [k for k in range(part.p) if k not in isolated]
    indeg = {k: 0 for k in comparable}
    for a, b in dag.edges:
        indeg[b] += 1
    ready = [(reps[k], k) for k in comparable if indeg[k] == 0]
    heapq.heapify(ready)
    order: list[int] = []
    while ready:
        _, k = heapq.heappop(ready)
        order.append(k)
        for a, b in sorted(dag.edges):
            if a == k:
                indeg[b] -= 1
                if indeg[b] == 0:
                    heapq.heappush(ready, (reps[b], b))
    order.extend(sorted(isolated, key=lambda k: reps[k]))
    return order


def _check_override(
    order: Sequence[int], part: ClassPartition, dag: CondensationDAG, isolated: frozenset[int]
) -> list[int]:
    order = [int(k) for k in order]
    if sorted(order) != list(range(part.p)):
        raise InvalidOverride(f"override must list each of the {part.p} classes exactly once")
    reps = part.representatives
    pos = {k: t for t, k in enumerate(order)}
    for a, b in sorted(dag.edges):
        if pos[a] > pos[b]:
            raise InvalidOverride(
                f"the class of {reps[a]} must precede the class of {reps[b]} (they are comparable)"
            )
    num_comparable = part.p - len(isolated)
    trailing = set(order[num_comparable:])
    if trailing != isolated:
        raise InvalidOverride("isolated classes must occupy the trailing positions")
    return order


def build_block_form(rel: Relation, class_order_override: Optional[Sequence[int]] = None) -> BlockForm:
    """Relabel `rel` so the permuted relation is block upper triangular.

    The default class order is the deterministic linear extension of the
    condensation (topological, ties broken by class representative) with the
    isolated classes last, sorted by representative.  An override must be a
    linear extension with the isolated classes last; it exists so any other
    admissible diagonal layout can be reproduced exactly.
    """
    report = validate(rel)
    if not report.ok:
        detail = str(report.violations[0]) if report.violations else "too many violations"
        raise InvalidRelation(f"not a quasi-order: {detail}")
    part = equivalence_classes(rel)
    dag = condensation(rel, part)
    isolated = isolated_classes(dag)
    if class_order_override is None:
        order = _default_class_order(part, dag, isolated)
    else:
        order = _check_override(class_order_override, part, dag, isolated)
    pi = class_order_permutation(part, order)
    permuted = conjugate_relation(rel, pi)

    sizes = tuple(len(part.classes[k]) for k in order)
    bf = BlockForm(
        source=rel,
        pi=pi,
        permuted=permuted,
        class_order=tuple(order),
        block_sizes=sizes,
        num_comparable=part.p - len(isolated),
        num_isolated=len(isolated),
        partition=part,
    )
    # Contiguous ascending class layout makes triangularity automatic; assert it anyway.
    block_of = _position_blocks(sizes, rel.n)
    for i, j in permuted.pairs:
        assert block_of[i] <= block_of[j], f"block triangularity violated at ({i},{j})"
    return bf


def _position_blocks(sizes: Sequence[int], n: int) -> dict[int, int]:
    block_of: dict[int, int] = {}
    pos = 1
    for b, size in enumerate(sizes):
        for _ in range(size):
            block_of[pos] = b
            pos += 1
    assert pos == n + 1
    return block_of


@dataclass(frozen=True)
class BlockPattern:
    """p x p grid; full[a][b] is True where the block holds arbitrary entries."""

    p: int
    full: tuple[tuple[bool, ...], ...]


def block_pattern(bf: BlockForm) -> BlockPattern:
    """Which blocks of the permuted pattern are full.

    Diagonal blocks are always full; block (a,b) above the diagonal is full
    exactly when the classes on positions a and b are comparable, which the
    first elements of the two index ranges already decide.
    """
    spans = bf.block_spans()
    grid = []
    for a in range(bf.p):
        row = []
        for b in range(bf.p):
            if a == b:
                row.append(True)
            else:
                row.append((spans[a][0], spans[b][0]) in bf.permuted.pairs)
        grid.append(tuple(row))
    return BlockPattern(bf.p, tuple(grid))


def is_semisimple(rel: Relation) -> bool:
    """True iff the relation is symmetric, i.e. the block form is block diagonal."""
    return all((j, i) in rel.pairs for i, j in rel.pairs)


def is_block_form(rel: Relation) -> bool:
    """True iff `rel` is already laid out as its own block upper triangular form."""
    part = equivalence_classes(rel)
    pos = 1
    for cls in part.classes:
        if cls != tuple(range(pos, pos + len(cls))):
            return False
        pos += len(cls)
    for i, j in rel.pairs:
        if part.class_of(i) > part.class_of(j):
            return False
    dag = condensation(rel, part)
    isolated = isolated_classes(dag)
    comparable = [k for k in range(part.p) if k not in isolated]
    if comparable and isolated and max(comparable) > min(isolated):
        return False
    return True


def render_pattern_grid(bf: BlockForm) -> str:
    """n x n grid of F/0 cells with block separators, for eyeball comparison."""
    spans = bf.block_spans()
    boundaries = {stop for _, stop in spans[:-1]}
    lines = []
    for i in range(1, bf.source.n + 1):
        cells = []
        for j in range(1, bf.source.n + 1):
            cells.append("F" if (i, j) in bf.permuted.pairs else "0")
            if j + 1 in boundaries:
                cells.append("|")
        lines.append(" ".join(cells))
        if i + 1 in boundaries:
            lines.append("".join("+" if ch == "|" else "-" for ch in lines[-1]))
    return "\n".join(lines)


def render_block_pattern(pat: BlockPattern) -> str:
    return "\n".join(" ".join("F" if cell else "0" for cell in row) for row in pat.full)
