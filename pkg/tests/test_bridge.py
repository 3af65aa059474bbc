from itertools import product

import pytest

from sftcd.bridge import (
    BridgeWitness,
    bounded_bridge_exists,
    construct_bridge,
    fixed_point_class_oracle,
    verify_bridge,
)
from sftcd.codes import OneBlockCode, identity_code, trivial_code
from sftcd.core import Block, PeriodicPoint, VertexShift, is_point_of, parse_block_text
from sftcd.depth import depth, relative_is_presented
from sftcd.errors import ImageMismatch, NoFixedPoint, NotRoutable, UnknownSymbol


def point(*symbols, phase=0):
    return PeriodicPoint.make(Block(symbols), phase)


@pytest.fixture(scope="module")
def xor2_cert(xor2):
    w = parse_block_text(xor2.Y.alphabet, "00000")
    return relative_is_presented(xor2, w, frozenset({"00"}), 3)


class TestConstructBridge:
    def test_all_routable_pairs_verify(self, xor2, xor2_cert):
        pts = [point("00"), point("11")]
        for x, xp in product(pts, pts):
            fwd, rev = construct_bridge(xor2, x, xp, 1, xor2_cert, "00")
            assert verify_bridge(xor2, fwd)
            assert verify_bridge(xor2, rev)
            assert (fwd.left, fwd.right) == (x, xp)
            assert (rev.left, rev.right) == (xp, x)

    def test_cross_track_middles(self, xor2, xor2_cert):
        fwd, rev = construct_bridge(
            xor2, point("00"), point("11"), 1, xor2_cert, "00"
        )
        assert fwd.middle_symbols == ("00", "00", "00", "01", "11")
        assert rev.middle_symbols == ("11", "10", "00", "00", "00")
        assert (fwd.m, fwd.n) == (0, 6)

    def test_absolute_mode_can_refuse(self, xor2):
        # inside phi's own fiber the ones track never reaches 00
        res = depth(xor2.phi, parse_block_text(xor2.Y.alphabet, "00000"))
        cert = res.certificate
        with pytest.raises(NotRoutable):
            construct_bridge(xor2.phi, point("11"), point("11"), 1, cert, "00")

    def test_bridges_carry_provenance(self, xor2, xor2_cert):
        fwd, _ = construct_bridge(
            xor2, point("00"), point("00"), 1, xor2_cert, "00"
        )
        assert fwd.mode == "relative"
        assert fwd.provenance


class TestVerifyBridge:
    def test_rejects_bad_seam(self, xor2, xor2_cert):
        fwd, _ = construct_bridge(
            xor2, point("00"), point("11"), 1, xor2_cert, "00"
        )
        # reversing the middle breaks the final seam into the 11 track
        bad = BridgeWitness(
            fwd.left,
            fwd.right,
            fwd.m,
            fwd.n,
            Block(tuple(reversed(fwd.middle_symbols))),
            fwd.mode,
        )
        assert not verify_bridge(xor2, bad)

    def test_rejects_wrong_length_middle(self, xor2, xor2_cert):
        fwd, _ = construct_bridge(
            xor2, point("00"), point("00"), 1, xor2_cert, "00"
        )
        bad = BridgeWitness(
            fwd.left, fwd.right, fwd.m, fwd.n + 1, fwd.middle, fwd.mode
        )
        assert not verify_bridge(xor2, bad)

    def test_rejects_mismatched_images(self, xor2):
        w = BridgeWitness(point("00"), point("01", "10"), 0, 2, None, "absolute")
        assert not verify_bridge(xor2.phi, w)


class TestBoundedBridge:
    def test_trivial_code_always_bridges(self, xor2):
        pts = [point("00"), point("01", "10"), point("11")]
        for x, xp in product(pts, pts):
            search = bounded_bridge_exists(xor2.pi, x, xp, 0, 4)
            assert search.found
            assert verify_bridge(xor2.pi, search.witness)

    def test_rigid_fibers_never_bridge(self, xor2):
        search = bounded_bridge_exists(xor2.phi, point("00"), point("11"), 0, 12)
        assert not search.found
        assert search.witness is None
        assert "12" in search.note

    def test_identity_self_bridge_has_empty_middle(self, golden_identity):
        x = point("0")
        search = bounded_bridge_exists(golden_identity.phi, x, x, 0)
        assert search.found
        assert search.witness.n == 1
        assert search.witness.middle is None
        assert search.witness.middle_symbols == ()
        assert verify_bridge(golden_identity.phi, search.witness)

    def test_default_window_is_twice_alphabet(self, xor2):
        search = bounded_bridge_exists(xor2.pi, point("00"), point("11"), 0)
        assert search.window == 8

    def test_middle_is_lex_least(self, xor2):
        search = bounded_bridge_exists(xor2.pi, point("00"), point("11"), 0, 4)
        assert search.witness.n == 2
        assert search.witness.middle_symbols == ("01",)

    def test_image_mismatch_rejected(self, xor2):
        with pytest.raises(ImageMismatch):
            bounded_bridge_exists(xor2.phi, point("00"), point("01", "10"), 0)


class TestFixedPointOracle:
    def test_xor2_phi_splits_at_zero(self, xor2):
        res = fixed_point_class_oracle(xor2.phi, "0")
        assert res.count == 2
        assert [p.text() for p in res.representatives] == ["(00)", "(11)"]
        assert res.preorder == ()
        assert res.caveat

    def test_xor2_pi_single_class(self, xor2):
        res = fixed_point_class_oracle(xor2.pi, "z")
        assert res.count == 1
        assert res.representatives[0].text() == "(00)"

    def test_representatives_live_in_the_domain(self, xor2):
        res = fixed_point_class_oracle(xor2.phi, "0")
        assert all(is_point_of(xor2.X, p) for p in res.representatives)

    def test_one_way_preorder(self):
        dom = VertexShift.build(
            ("a", "b", "c"),
            [("a", "a"), ("b", "b"), ("a", "b"), ("a", "c"), ("c", "b"), ("c", "c")],
        )
        code = OneBlockCode.from_dict(dom, ("w", "z"), {"a": "z", "b": "z", "c": "w"})
        res = fixed_point_class_oracle(code, "z")
        assert res.count == 2
        assert [p.text() for p in res.representatives] == ["(a)", "(b)"]
        assert res.preorder == ((0, 1),)

    def test_mod3_counts_components_not_phases(self, mod3):
        # the alternating 12/21 component is one strongly connected piece
        # with period two: the oracle reports it once, while the two
        # phase-locked points of that component form separate transition
        # classes; this is exactly what the caveat warns about
        res = fixed_point_class_oracle(mod3.phi, "0")
        assert res.count == 2
        assert [p.text() for p in res.representatives] == ["(00)", "(12·21)"]

    def test_identity_single_class(self, golden_identity):
        res = fixed_point_class_oracle(golden_identity.phi, "0")
        assert res.count == 1
        assert res.representatives[0].text() == "(0)"

    def test_trivial_code_single_class_by_irreducibility(self, golden_trivial):
        res = fixed_point_class_oracle(golden_trivial.pi, "z")
        assert res.count == 1

    def test_rejects_unknown_symbol(self, xor2):
        with pytest.raises(UnknownSymbol):
            fixed_point_class_oracle(xor2.phi, "q")

    def test_rejects_non_fixed_symbol(self, golden_identity):
        with pytest.raises(NoFixedPoint):
            fixed_point_class_oracle(golden_identity.phi, "1")

    def test_rejects_acyclic_fiber(self):
        two_cycle = VertexShift.build(("a", "b"), [("a", "b"), ("b", "a")])
        full = VertexShift.full_shift(("p", "q"))
        code = OneBlockCode.from_dict(
            two_cycle, ("p", "q"), {"a": "p", "b": "q"}, codomain=full
        )
        with pytest.raises(NoFixedPoint):
            fixed_point_class_oracle(code, "p")
