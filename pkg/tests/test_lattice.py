import itertools

import numpy as np
import pytest

from oracles import lattice_points_in_box
from qclattice import codes, lattice, qc


@pytest.fixture(scope="module")
def toy_pair():
    # all-{0} 1x2 prototype at z=2: n=4, H1 = H0
    P = qc.ProtoMatrix.from_shifts([[0, 0]], 2)
    return codes.make_pair_block_row(P, 0)


@pytest.fixture(scope="module")
def toy_family(toy_pair):
    return lattice.make_family(toy_pair)


class TestMakeFamily:
    def test_example1_boundaries(self, example1_bundle):
        fam = example1_bundle.family
        assert fam.m1 == 39
        assert fam.num_rows == 107
        assert fam.n == 170

    def test_wimax_boundaries(self, wimax_bundle):
        fam = wimax_bundle.family
        assert fam.m1 == 120
        assert fam.num_rows == 720
        assert fam.n == 1152

    def test_level1_rows_are_h1(self, example1_bundle):
        fam = example1_bundle.family
        assert np.array_equal(fam.level1_rows, example1_bundle.pair.h1.a)

    def test_not_nested_raises(self, example1_bundle):
        pair = example1_bundle.pair
        rng = np.random.default_rng(1)
        from qclattice.gf2 import BitMatrix, vstack
        bad_h1 = vstack(pair.h1, BitMatrix(rng.integers(0, 2, (1, 170)).astype(np.uint8)))
        bad = codes.NestedPair(h0=pair.h0, h1=bad_h1, n=170, z=34, p=5, q=34,
                               h1_h0_rows=None)
        with pytest.raises(lattice.NotNestedError):
            lattice.make_family(bad)


class TestMembership:
    def test_zero_is_member(self, toy_family):
        assert lattice.is_member(toy_family, np.zeros(4, dtype=int))

    def test_4z_subset(self, toy_family):
        rng = np.random.default_rng(2)
        for _ in range(20):
            x = 4 * rng.integers(-3, 4, 4)
            assert lattice.is_member(toy_family, x)

    def test_toy_box_matches_enumeration(self, toy_family):
        expected = set(lattice_points_in_box(toy_family.rows, toy_family.m1, -2, 2))
        got = {p for p in itertools.product(range(-2, 3), repeat=4)
               if lattice.is_member(toy_family, np.array(p))}
        assert got == expected
        assert len(got) == 19  # frozen from the enumeration oracle

    def test_closed_under_addition_and_negation(self, toy_family):
        members = [np.array(p) for p in
                   lattice_points_in_box(toy_family.rows, toy_family.m1, -2, 2)]
        for a in members:
            assert lattice.is_member(toy_family, -a)
            for b in members:
                assert lattice.is_member(toy_family, a + b)

    def test_richer_toy_box(self):
        # two block rows at z=2 so levels differ
        P = qc.ProtoMatrix.from_shifts([[0, 1], [0, 0]], 2)
        pair = codes.make_pair_block_row(P, 1)
        fam = lattice.make_family(pair)
        assert fam.m1 == 4 and fam.num_rows == 6
        expected = set(lattice_points_in_box(fam.rows, fam.m1, -2, 2))
        got = {p for p in itertools.product(range(-2, 3), repeat=4)
               if lattice.is_member(fam, np.array(p))}
        assert got == expected


class TestDimensions:
    def test_example1(self, example1_bundle):
        assert lattice.code_dimensions(example1_bundle.pair) == (68, 132)

    def test_wimax(self, wimax_bundle):
        assert lattice.code_dimensions(wimax_bundle.pair) == (564, 1034)

    def test_h0_equals_h1(self, toy_pair):
        k0, k1 = lattice.code_dimensions(toy_pair)
        assert k0 == k1 == 1


class TestVolumeGain:
    def test_trivial_rates(self):
        prof = lattice.volume_gain((10, 10), 10, 4.0)
        assert prof.normalized_volume == pytest.approx(1.0)
        assert prof.gain_db == pytest.approx(10 * np.log10(4.0))

    def test_example1_gain(self, example1_bundle):
        prof = lattice.volume_gain((68, 132), 171, 16)
        assert prof.normalized_volume == pytest.approx(3.1619591151679227, rel=1e-12)
        assert prof.gain_db == pytest.approx(7.04, abs=0.005)

    def test_wimax_gain(self):
        prof = lattice.volume_gain((564, 1034), 1153, 16)
        assert prof.gain_db == pytest.approx(8.34, abs=0.005)


class TestDminBounds:
    def test_balanced_pair(self):
        assert lattice.dmin_bounds(16, 4) == (16, 16)

    def test_weak_codes(self):
        assert lattice.dmin_bounds(1, 1) == (1, 16)

    def test_overshoot_capped(self):
        assert lattice.dmin_bounds(25, 4) == (16, 16)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            lattice.dmin_bounds(0, 4)


class TestBalancedCheck:
    def test_examples(self):
        assert lattice.balanced_check((16, 4)) is True
        assert lattice.balanced_check((16, 5)) is False
        assert lattice.balanced_check((4, 1)) is True
        assert lattice.balanced_check((25, 4)) is False
