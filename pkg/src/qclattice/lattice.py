"""The two-level lattice object: congruences, dimensions, volume, gain.

A check family lists integer 0/1 rows h_j with a level boundary m1: points
x in Z^n belong to the lattice iff h_j . x = 0 (mod 4) for j < m1 and
h_j . x = 0 (mod 2) for the remaining rows.  Redundant congruences are kept
(they do not change the point set); all dimension counts come from GF(2)
ranks, never from row counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .codes import NestedPair, verify_nesting
from .gf2 import BitMatrix, rank

DESIGN_D2MIN_CAP = 16  # 4^L for two levels


class NotNestedError(ValueError):
    """H1 rows are not contained in the row space of H0."""


@dataclass(frozen=True)
class CheckFamily:
    """Ordered congruence rows with the level-1/level-0 boundary."""

    rows: np.ndarray   # (M, n) uint8; integer 0/1 congruence rows
    m1: int            # rows[:m1] use modulus 4, rows[m1:] modulus 2
    n: int

    def __post_init__(self):
        r = np.asarray(self.rows, dtype=np.uint8)
        if r.ndim != 2 or r.shape[1] != self.n:
            raise ValueError("rows must be (M, n)")
        if not 0 < self.m1 <= r.shape[0]:
            raise ValueError("m1 must satisfy 0 < m1 <= M")
        r = r.copy()
        r.setflags(write=False)
        object.__setattr__(self, "rows", r)

    @property
    def num_rows(self) -> int:
        return self.rows.shape[0]

    @property
    def level1_rows(self) -> np.ndarray:
        return self.rows[: self.m1]


@dataclass(frozen=True)
class LatticeProfile:
    """Reported parameters of a two-level construction."""

    N: int                       # reported dimension n + 1 (dummy coordinate)
    k: tuple[int, int]           # (k0, k1), from GF(2) ranks
    r: tuple[float, float]       # k_l / N
    d: tuple[int, int]           # per-level design distances
    d2min: int
    normalized_volume: float     # V^{2/N}
    gain_db: float


def make_family(pair: NestedPair) -> CheckFamily:
    """Congruence family for a nested pair: H1 rows first (modulus 4).

    For the submatrix variant the level-0 part is the rows of H0 not already
    listed in H1; for the row-sum variant (bands are row combinations, not
    rows) all of H0 is retained at level 0.  Raises
    :class:`NotNestedError` when the pair is not nested.
    """
    if not verify_nesting(pair):
        raise NotNestedError("every row of H1 must lie in the row space of H0")
    if pair.h1_h0_rows is not None:
        keep = np.setdiff1d(np.arange(pair.h0.rows), np.asarray(pair.h1_h0_rows))
        level0 = pair.h0.a[keep]
    else:
        level0 = pair.h0.a
    rows = np.vstack([pair.h1.a, level0])
    return CheckFamily(rows=rows, m1=pair.h1.rows, n=pair.n)


def is_member(fam: CheckFamily, x) -> bool:
    """True iff integer vector ``x`` satisfies every congruence."""
    x = np.asarray(x, dtype=np.int64)
    if x.shape != (fam.n,):
        raise ValueError(f"expected length-{fam.n} integer vector")
    dots = fam.rows.astype(np.int64) @ x
    if (dots[: fam.m1] % 4).any():
        return False
    return not (dots[fam.m1:] % 2).any()


def code_dimensions(pair: NestedPair) -> tuple[int, int]:
    """(k0, k1) with k_l = n - rank(H_l)."""
    return pair.n - rank(pair.h0), pair.n - rank(pair.h1)


def volume_gain(k: tuple[int, int], N: int, d2min: float,
                d: tuple[int, int] | None = None) -> LatticeProfile:
    """Profile from per-level dimensions: normalized volume and gain.

    V^{2/N} = 4^(2 - r0 - r1) with r_l = k_l / N, and the coding gain is
    10 log10(d2min / V^{2/N}) dB.
    """
    if N <= 0 or d2min <= 0:
        raise ValueError("N and d2min must be positive")
    k0, k1 = k
    r0, r1 = k0 / N, k1 / N
    vol = 4.0 ** (2.0 - r0 - r1)
    gain_db = 10.0 * math.log10(d2min / vol)
    return LatticeProfile(N=N, k=(k0, k1), r=(r0, r1),
                          d=d if d is not None else (0, 0),
                          d2min=int(d2min), normalized_volume=vol,
                          gain_db=gain_db)


def dmin_bounds(d0: int, d1: int) -> tuple[int, int]:
    """Bounds on the squared minimum distance for two levels.

    Lower bound min(d0, 4*d1) capped at 16; the upper bound is 16 = 4^L.
    """
    if d0 < 1 or d1 < 1:
        raise ValueError("distances must be >= 1")
    return min(min(d0, 4 * d1), DESIGN_D2MIN_CAP), DESIGN_D2MIN_CAP


def balanced_check(d) -> bool:
    """True iff 4^l * d_l is the same for every level l."""
    vals = [(4 ** l) * dl for l, dl in enumerate(d)]
    return len(set(vals)) <= 1
