"""Named built-in constructions.

``example1``:  (3,5)-regular QC code, z=34, n=170; level 1 is block row 0
over the staircase.  Design distances (16, 4), coding gain 7.04 dB.

``wimax1152``: modified 802.16e rate-1/2 code, z=48, n=1152; level 1 is the
concatenation of the block-row sums 1+8 and 4+10 over the staircase.
Design distances (25, 4), coding gain 8.34 dB.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from . import codec, codes, lattice, qc


@dataclass(frozen=True)
class LatticeBundle:
    """Everything needed to encode, decode and simulate one construction."""

    name: str
    proto: qc.ProtoMatrix
    pair: codes.NestedPair
    family: lattice.CheckFamily
    profile: lattice.LatticeProfile
    plan0: codec.EncoderPlan
    plan1: codec.EncoderPlan

    @property
    def plans(self) -> tuple[codec.EncoderPlan, codec.EncoderPlan]:
        return self.plan0, self.plan1


def _bundle(name: str, proto: qc.ProtoMatrix, pair: codes.NestedPair,
            design_d: tuple[int, int]) -> LatticeBundle:
    fam = lattice.make_family(pair)
    k = lattice.code_dimensions(pair)
    d2min = lattice.dmin_bounds(*design_d)[0]
    profile = lattice.volume_gain(k, pair.n + 1, d2min, d=design_d)
    return LatticeBundle(name=name, proto=proto, pair=pair, family=fam,
                         profile=profile,
                         plan0=codec.plan_level(pair.h0),
                         plan1=codec.plan_level(pair.h1))


@lru_cache(maxsize=None)
def example1() -> LatticeBundle:
    proto = qc.example1_proto()
    pair = codes.make_pair_block_row(proto, 0)
    return _bundle("example1", proto, pair, (16, 4))


@lru_cache(maxsize=None)
def wimax1152() -> LatticeBundle:
    proto = qc.wimax_proto_1152(modified=True)
    pair = codes.make_pair_row_sums(proto, [(1, 8), (4, 10)])
    return _bundle("wimax1152", proto, pair, (25, 4))


BUILTIN_LATTICES = {"example1": example1, "wimax1152": wimax1152}


def get_bundle(name: str) -> LatticeBundle:
    try:
        return BUILTIN_LATTICES[name]()
    except KeyError:
        raise KeyError(f"unknown lattice {name!r}; choose from "
                       f"{sorted(BUILTIN_LATTICES)}") from None
