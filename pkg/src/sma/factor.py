"""Constructive factorization of automorphisms of block-form structural algebras.

Any automorphism of a block upper triangular structural matrix algebra splits,
exactly, as inner conjugation after a unit-scaling map after a permutation
similarity.  This module computes such a splitting:

  1. The images of the class idempotents (sums of diagonal units over one
     class) have their identity diagonal block in exactly one position, which
     pins a size-preserving bijection of classes.
  2. The bijection lifts to a permutation, ascending elements to ascending
     elements within classes; it must preserve the relation.
  3. Dividing out the permutation similarity leaves a map fixing each class.
     Its idempotent images are conjugated back onto the standard diagonal
     system by the invertible element V = sum_k e_k * Theta(e_k).
  4. Each diagonal block now carries an automorphism of a full matrix algebra,
     hence inner; the conjugating block is the one-dimensional solution of
     A_k * Theta1(X) = X * A_k over the block's unit basis, normalized so its
     first nonzero entry is 1.
  5. What remains fixes every diagonal unit, so it scales each unit by a
     scalar; those scalars form a transitive function.  Its coboundary part is
     folded into the conjugator, leaving the canonical (forest-normalized)
     scaling function.

Every choice is deterministic, so factoring the same map twice returns
identical factors.
"""

from __future__ import annotations

from .algebra import (
    Grid,
    StructMatrix,
    diagonal_matrix,
    grid_add,
    grid_mul,
    invert_grid,
    nullspace,
    zero_grid,
)
from .automorphism import (
    AutomorphismSpec,
    BasisImageAutomorphism,
    FactoredAutomorphism,
    is_relation_automorphism,
    verify_automorphism,
)
from .blockform import BlockForm, Permutation, is_block_form, is_semisimple
from .errors import (
    NonScalarBlockAction,
    NotAutomorphism,
    NotBlockForm,
    NotSemisimple,
    SizeObstruction,
    Singular,
)
from .relation import equivalence_classes
from .transitive import TransitiveFn, canonicalize, check_transitive


def _class_spans(classes) -> list[tuple[int, int]]:
    """0-based half-open row/column range of each (contiguous) class."""
    spans = []
    for cls in classes:
        spans.append((cls[0] - 1, cls[-1]))
    return spans


def _diag_block_support(grid: Grid, spans) -> list[int]:
    out = []
    for k, (lo, hi) in enumerate(spans):
        if any(grid[r][c] != 0 for r in range(lo, hi) for c in range(lo, hi)):
            out.append(k)
    return out


def factor_automorphism(phi: AutomorphismSpec, *, assume_verified: bool = False) -> FactoredAutomorphism:
    """Split a verified automorphism into (conjugator, canonical scaling, permutation).

    The relation must already be in block upper triangular form; callers with
    another layout first normalize with build_block_form and conjugate across
    (see conjugate_by_block_form).  `assume_verified` skips the automorphism
    check for callers that have already run it on the same object.
    """
    rel, fld = phi.relation, phi.field
    if not is_block_form(rel):
        raise NotBlockForm(
            "relation is not in block upper triangular form; normalize it first"
        )
    if not assume_verified:
        report = verify_automorphism(phi)
        if not report.ok:
            raise NotAutomorphism(f"{report.check}: {report.detail}")

    images = phi.images()
    part = equivalence_classes(rel)
    spans = _class_spans(part.classes)
    n = rel.n

    # (1) class bijection from the diagonal-block support of idempotent images
    matched: dict[int, int] = {}
    for k, cls in enumerate(part.classes):
        idem = zero_grid(fld, n)
        for i in cls:
            idem = grid_add(fld, idem, images[(i, i)])
        support = _diag_block_support(idem, spans)
        if len(support) != 1:
            raise SizeObstruction(
                f"idempotent image of class {k} meets {len(support)} diagonal blocks"
            )
        m = support[0]
        if len(part.classes[m]) != len(cls):
            raise SizeObstruction(f"classes {k} and {m} have different sizes")
        matched[k] = m
    if sorted(matched.values()) != list(range(part.p)):
        raise SizeObstruction("diagonal-block supports do not give a class bijection")

    # (2) ascending lift: the permutation sends class matched[k] onto class k
    mapping: dict[int, int] = {}
    for k, m in matched.items():
        for src, dst in zip(part.classes[m], part.classes[k]):
            mapping[src] = dst
    tau = Permutation.from_mapping(n, mapping)
    if not is_relation_automorphism(rel, tau):
        raise NotAutomorphism(
            f"class bijection lifts to {tau.cycle_notation()}, which does not preserve the relation"
        )

    # (3) divide out the permutation: Theta = phi o P_(tau^-1) is a unit lookup,
    # then realign its idempotent images onto the standard diagonal system
    theta = {(i, j): images[(tau(i), tau(j))] for (i, j) in rel.sorted_pairs()}
    v_rows = []
    for i in range(1, n + 1):
        k = part.class_of(i)
        block_sum = zero_grid(fld, n)
        for e in part.classes[k]:
            block_sum = grid_add(fld, block_sum, theta[(e, e)])
        v_rows.append(block_sum[i - 1])
    v = tuple(v_rows)
    try:
        v_inv = invert_grid(fld, v)
    except Singular as exc:
        raise NotAutomorphism("idempotent images are not conjugate to the diagonal system") from exc

    def conj_v(grid: Grid) -> Grid:
        return grid_mul(fld, grid_mul(fld, v, grid), v_inv)

    # (4) blockwise inner part by solving A_k * Theta1(X) = X * A_k on each block
    block_conjugators: list[Grid] = []
    for k, cls in enumerate(part.classes):
        lo, hi = spans[k]
        m = hi - lo
        local_images: dict[tuple[int, int], list[list]] = {}
        for u in cls:
            for w in cls:
                img = conj_v(theta[(u, w)])
                for r in range(n):
                    for c in range(n):
                        if img[r][c] != 0 and not (lo <= r < hi and lo <= c < hi):
                            raise NonScalarBlockAction(
                                f"image of unit ({u},{w}) leaves diagonal block {k}"
                            )
                local_images[(u - lo - 1, w - lo - 1)] = [
                    [img[lo + r][lo + c] for c in range(m)] for r in range(m)
                ]
        nvars = m * m
        zero = fld.zero()
        rows = []
        for (u, w), x in local_images.items():
            # (W X)[r][c] - (E^{uw} W)[r][c] = 0, unknowns W[r][d] flattened row-major
            for r in range(m):
                for c in range(m):
                    row = [zero] * nvars
                    for d in range(m):
                        row[r * m + d] = fld.reduce(row[r * m + d] + x[d][c])
                    if r == u:
                        row[w * m + c] = fld.reduce(row[w * m + c] - fld.one())
                    if any(val != 0 for val in row):
                        rows.append(row)
        basis = nullspace(fld, rows, nvars)
        if len(basis) != 1:
            raise NonScalarBlockAction(
                f"block {k} conjugator space has dimension {len(basis)}, expected 1"
            )
        vec = basis[0]
        lead = next(val for val in vec if val != 0)
        lead_inv = fld.inv(lead)
        block = tuple(
            tuple(fld.reduce(vec[r * m + c] * lead_inv) for c in range(m)) for r in range(m)
        )
        try:
            invert_grid(fld, block)
        except Singular as exc:
            raise NonScalarBlockAction(f"block {k} conjugator is singular") from exc
        block_conjugators.append(block)

    a0_rows = [[fld.zero()] * n for _ in range(n)]
    for k, (lo, hi) in enumerate(spans):
        blk = block_conjugators[k]
        for r in range(hi - lo):
            for c in range(hi - lo):
                a0_rows[lo + r][lo + c] = blk[r][c]
    a0 = tuple(tuple(r) for r in a0_rows)

    # (5) read off the scaling, canonicalize, fold the coboundary into the conjugator
    w = grid_mul(fld, a0, v)
    w_inv = invert_grid(fld, w)
    gvals: dict[tuple[int, int], object] = {}
    for (i, j) in rel.sorted_pairs():
        img = grid_mul(fld, grid_mul(fld, w, theta[(i, j)]), w_inv)
        c = img[i - 1][j - 1]
        if c == 0:
            raise NonScalarBlockAction(f"reduced image of unit ({i},{j}) has no ({i},{j}) entry")
        for r in range(n):
            for s in range(n):
                if img[r][s] != 0 and (r, s) != (i - 1, j - 1):
                    raise NonScalarBlockAction(
                        f"reduced image of unit ({i},{j}) is not a scalar multiple of it"
                    )
        gvals[(i, j)] = c
    g = TransitiveFn.build(rel, fld, gvals)
    report = check_transitive(g)
    if not report.ok:
        raise NonScalarBlockAction(f"unit scalars are not transitive: {report.violations[0]}")

    scaling_vec, g_canonical = canonicalize(g)
    d = diagonal_matrix(fld, rel, [fld.inv(s) for s in scaling_vec.values])
    a_final = StructMatrix(fld, rel, grid_mul(fld, d.rows, w))
    return FactoredAutomorphism(a_final, g_canonical, tau)


def factor_semisimple(phi: AutomorphismSpec) -> FactoredAutomorphism:
    """Factor over a symmetric (block diagonal) relation; the scaling is always trivial."""
    if not is_semisimple(phi.relation):
        raise NotSemisimple("relation is not symmetric")
    factored = factor_automorphism(phi)
    one = factored.scaling.field.one()
    assert all(v == one for _, v in factored.scaling.entries), (
        "block diagonal relations admit only trivial canonical scalings"
    )
    return factored


def conjugate_by_block_form(phi: AutomorphismSpec, bf: BlockForm) -> BasisImageAutomorphism:
    """Transport a map over bf.source to the relabelled algebra over bf.permuted."""
    if phi.relation != bf.source:
        raise NotAutomorphism("map is not over the block form's source relation")
    pi, pi_inv = bf.pi, bf.pi.inverse()
    n = bf.source.n
    images = phi.images()
    moved = {}
    for (i, j) in bf.permuted.sorted_pairs():
        src = images[(pi_inv(i), pi_inv(j))]
        moved[(i, j)] = tuple(
            tuple(src[pi_inv(r) - 1][pi_inv(c) - 1] for c in range(1, n + 1))
            for r in range(1, n + 1)
        )
    return BasisImageAutomorphism.from_map(bf.permuted, phi.field, moved)
