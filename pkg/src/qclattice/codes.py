"""Component-code parity-check builders.

The two-level construction pairs a level-0 matrix H0 = [H_qc; S] (the QC
matrix with a staircase block appended) with a level-1 matrix H1 whose rows
all lie in the row space of H0.  H1 is either one CPM block row of H_qc over
the staircase (an SPC product code), or, when no block row is free of zero
blocks, bands formed as GF(2) sums of block rows over the staircase
(a concatenation of SPC-like product codes).

Canonical row order everywhere: CPM band(s) first, staircase last.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gf2 import BitMatrix, rank, rref, vstack
from .qc import ProtoMatrix, expand


class ZeroBlockError(ValueError):
    """Selected block row contains a zero block."""


class BadGroupsError(ValueError):
    """Row-sum groups are empty or do not cover every block column."""


def build_staircase(p: int, q: int) -> BitMatrix:
    """p x (p*q) staircase: row j has ones exactly in columns j*q .. j*q+q-1."""
    if p < 1 or q < 1:
        raise ValueError("p and q must be >= 1")
    a = np.zeros((p, p * q), dtype=np.uint8)
    for j in range(p):
        a[j, j * q: (j + 1) * q] = 1
    return BitMatrix(a)


def build_spc(p: int, q: int) -> BitMatrix:
    """Parity-check matrix of the p x q single-parity-check product code.

    (p+q) x (p*q): q rows of p side-by-side q x q identities (column checks)
    over the staircase (row checks).  One row is redundant, so the rank is
    p+q-1; the nullspace has dimension (p-1)(q-1) and minimum weight 4.
    """
    if p < 2 or q < 2:
        raise ValueError("SPC product codes need p, q >= 2")
    ident = np.tile(np.eye(q, dtype=np.uint8), (1, p))
    return BitMatrix(np.vstack([ident, build_staircase(p, q).a]))


@dataclass(frozen=True)
class NestedPair:
    """Nested parity-check pair defining a two-level construction.

    ``h1_h0_rows`` lists the rows of H0 that make up H1 when H1 is literally
    a submatrix (single block row variant); it is None for the row-sum
    variant, where band rows are GF(2) sums of H0 rows rather than rows.
    """

    h0: BitMatrix
    h1: BitMatrix
    n: int
    z: int
    p: int
    q: int
    h1_h0_rows: tuple[int, ...] | None

    def __post_init__(self):
        if self.n != self.p * self.q or self.q != self.z:
            raise ValueError("expected p = n/z and q = z")


def build_h0(P: ProtoMatrix) -> BitMatrix:
    """Level-0 matrix: the expanded QC matrix over the staircase block."""
    h_qc = expand(P)
    stair = build_staircase(P.n_b, P.z)
    return vstack(h_qc, stair)


def build_h1_block_row(P: ProtoMatrix, i: int) -> BitMatrix:
    """Level-1 matrix from one all-nonzero block row of the prototype.

    (z + n/z) x n: block row ``i`` of the expansion over the staircase.
    Raises :class:`ZeroBlockError` if the block row has an empty cell.
    """
    if not 0 <= i < P.m_b:
        raise IndexError(f"block row {i} outside 0..{P.m_b - 1}")
    empties = [j for j in range(P.n_b) if not P.cells[i][j]]
    if empties:
        raise ZeroBlockError(f"block row {i} has zero blocks at columns {empties}")
    band = expand(P).a[i * P.z: (i + 1) * P.z]
    stair = build_staircase(P.n_b, P.z)
    return BitMatrix(np.vstack([band, stair.a]))


def build_h1_row_sums(P: ProtoMatrix, groups) -> BitMatrix:
    """Level-1 matrix from GF(2) sums of block rows, one band per group.

    Every block column must be covered by (have a CPM in) at least one
    group's sum; bands keep their 0/1 entries for reuse as integer
    congruence rows.  Raises :class:`BadGroupsError` on empty groups or
    uncovered block columns.
    """
    groups = [tuple(sorted(set(g))) for g in groups]
    if not groups or any(not g for g in groups):
        raise BadGroupsError("groups must be nonempty")
    for g in groups:
        for i in g:
            if not 0 <= i < P.m_b:
                raise BadGroupsError(f"block row {i} outside 0..{P.m_b - 1}")
    A = expand(P).a
    z = P.z
    bands = []
    for g in groups:
        band = np.zeros((z, P.n), dtype=np.uint8)
        for i in g:
            band ^= A[i * z: (i + 1) * z]
        bands.append(band)
    covered = np.zeros(P.n_b, dtype=bool)
    for band in bands:
        block_weights = band.reshape(z, P.n_b, z).sum(axis=(0, 2))
        covered |= block_weights > 0
    if not covered.all():
        missing = np.nonzero(~covered)[0].tolist()
        raise BadGroupsError(f"block columns {missing} not covered by any group")
    stair = build_staircase(P.n_b, P.z)
    return BitMatrix(np.vstack(bands + [stair.a]))


def make_pair_block_row(P: ProtoMatrix, i: int) -> NestedPair:
    """Nested pair with H1 = block row ``i`` over the staircase."""
    h0 = build_h0(P)
    h1 = build_h1_block_row(P, i)
    z, n = P.z, P.n
    band_rows = tuple(range(i * z, (i + 1) * z))
    stair_rows = tuple(range(P.m, P.m + P.n_b))
    return NestedPair(h0=h0, h1=h1, n=n, z=z, p=P.n_b, q=z,
                      h1_h0_rows=band_rows + stair_rows)


def make_pair_row_sums(P: ProtoMatrix, groups) -> NestedPair:
    """Nested pair with H1 = per-group block-row sums over the staircase."""
    h0 = build_h0(P)
    h1 = build_h1_row_sums(P, groups)
    return NestedPair(h0=h0, h1=h1, n=P.n, z=P.z, p=P.n_b, q=P.z,
                      h1_h0_rows=None)


def verify_nesting(pair: NestedPair) -> bool:
    """True iff every row of H1 lies in the GF(2) row space of H0."""
    R, piv = rref(pair.h0.a)
    R = R[: len(piv)]
    for row in pair.h1.a:
        w = row.copy()
        for i, p in enumerate(piv):
            if w[p]:
                w ^= R[i]
        if w.any():
            return False
    return True
