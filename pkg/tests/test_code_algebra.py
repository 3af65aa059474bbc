import pytest

from conftest import naive_finite_to_one
from sftcd.codes import (
    CodeTriple,
    OneBlockCode,
    SlidingBlockCode,
    apply_sliding_to_point,
    apply_to_block,
    apply_to_point,
    check_onto,
    compose,
    identity_code,
    is_finite_to_one,
    recode_to_one_block,
    trivial_code,
)
from sftcd.core import Block, PeriodicPoint, VertexShift, parse_block_text
from sftcd.errors import AlphabetMismatch, InvalidBlock, InvariantViolation


def golden():
    return VertexShift.build(("0", "1"), [("0", "0"), ("0", "1"), ("1", "0")])


def xor_sliding(n=2):
    """Sum of two consecutive symbols mod n, on the full n-shift."""
    full = VertexShift.full_shift(tuple(str(i) for i in range(n)))
    rule = {
        (str(a), str(b)): str((a + b) % n)
        for a in range(n)
        for b in range(n)
    }
    return SlidingBlockCode.from_dict(full, full.alphabet, 0, 1, rule)


class TestOneBlockCode:
    def test_apply_symbolwise(self, xor2):
        phi = xor2.phi
        assert phi.apply_symbol("00") == "0"
        assert phi.apply_symbol("01") == "1"

    def test_apply_to_block_images_letterwise(self, xor2):
        # 00 -> 0, 01 -> 1, 11 -> 0: images are taken letter by letter
        w = parse_block_text(xor2.X.alphabet, "00·01·11")
        assert apply_to_block(xor2.phi, w).text() == "010"

    def test_apply_to_block_rejects_invalid_word(self, xor2):
        # 00 cannot be followed by 10: windows must overlap
        w = Block(("00", "10"))
        with pytest.raises(InvalidBlock):
            apply_to_block(xor2.phi, w)

    def test_apply_to_point_renormalizes(self, xor2):
        p = PeriodicPoint.make(Block(("01", "10")), 0)
        assert apply_to_point(xor2.phi, p).text() == "(1)"

    def test_mapping_must_cover_alphabet(self):
        g = golden()
        with pytest.raises(InvariantViolation):
            OneBlockCode.from_dict(g, ("a",), {"0": "a"})

    def test_identity_and_trivial(self):
        g = golden()
        ident = identity_code(g)
        assert ident.codomain is g
        assert apply_to_block(ident, Block(("0", "1"))).symbols == ("0", "1")
        triv = trivial_code(g)
        assert set(triv.mapping) == {"z"}
        assert triv.codomain.alphabet.symbols == ("z",)


class TestSlidingRecode:
    def test_xor_rule_windows(self):
        code = xor_sliding()
        assert code.apply_window(("1", "1")) == "0"
        assert code.width == 2

    def test_recode_window_shift_of_full_2_shift(self):
        rec = recode_to_one_block(xor_sliding())
        names = rec.window_shift.alphabet.symbols
        assert names == ("00", "01", "10", "11")
        assert rec.window_shift.allows("00", "01")
        assert not rec.window_shift.allows("00", "10")

    def test_recode_golden_has_three_windows(self):
        g = golden()
        rule = {("0", "0"): "a", ("0", "1"): "b", ("1", "0"): "b"}
        code = SlidingBlockCode.from_dict(g, ("a", "b"), 0, 1, rule)
        rec = recode_to_one_block(code)
        # 11 is not a golden block, so only three windows exist
        assert rec.window_shift.alphabet.symbols == ("00", "01", "10")

    def test_recoded_code_matches_sliding_on_points(self):
        code = xor_sliding()
        rec = recode_to_one_block(code)
        p = PeriodicPoint.make(Block(("0", "1", "1")), 0)
        lifted = rec.lift_point(p)
        assert apply_to_point(rec.code, lifted) == apply_sliding_to_point(code, p)

    def test_conjugacy_is_window_to_central_symbol(self):
        rec = recode_to_one_block(xor_sliding())
        assert rec.width == 2
        assert rec.offset == 0
        assert rec.conjugacy.apply_symbol("01") == "0"


class TestCompose:
    def test_compose_order(self, xor2):
        pi = compose(xor2.phi, xor2.psi)
        assert pi.mapping == xor2.pi.mapping

    def test_compose_checks_alphabets(self, xor2):
        with pytest.raises(AlphabetMismatch):
            compose(xor2.psi, xor2.phi)


class TestCheckOnto:
    def test_xor2_phi_onto_certified(self, xor2):
        res = check_onto(xor2.phi, xor2.Y, 9)
        assert res.ok and res.certified

    def test_small_bound_uncertified(self, xor2):
        # max_len 1 leaves no room for the subset automaton to close
        res = check_onto(xor2.phi, xor2.Y, 1)
        assert res.ok and not res.certified
        assert res.checked_length == 1

    def test_closure_certifies_below_bound(self, xor2):
        res = check_onto(xor2.phi, xor2.Y, 2)
        assert res.ok and res.certified
        assert res.checked_length == 1

    def test_missing_block_named(self):
        g = golden()
        sub = OneBlockCode.from_dict(
            g, ("0", "1"), {"0": "0", "1": "0"}, codomain=g
        )
        res = check_onto(sub, g, 9)
        assert not res.ok
        assert res.missing_block.text() == "1"

    def test_bool_protocol(self, xor2):
        assert check_onto(xor2.phi, xor2.Y, 9)


class TestFiniteToOne:
    def test_builtin_codes(self, xor2, mod3, golden_identity):
        assert is_finite_to_one(xor2.phi)
        assert not is_finite_to_one(xor2.psi)
        assert is_finite_to_one(mod3.phi)
        assert is_finite_to_one(golden_identity.psi)

    def test_diamond_code_is_infinite_to_one(self):
        # two parallel tracks a->b and a->c with equal images reconverging
        dom = VertexShift.build(
            ("a", "b", "c", "d"),
            [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d"), ("d", "a")],
        )
        code = OneBlockCode.from_dict(
            dom, ("p", "q", "r"), {"a": "p", "b": "q", "c": "q", "d": "r"}
        )
        assert not is_finite_to_one(code)

    def test_against_pair_counting_oracle(self, xor2, mod3):
        cases = [xor2.phi, xor2.psi, xor2.pi, mod3.phi, mod3.psi]
        dom = VertexShift.build(
            ("a", "b", "c", "d"),
            [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d"), ("d", "a")],
        )
        cases.append(
            OneBlockCode.from_dict(
                dom, ("p", "q", "r"), {"a": "p", "b": "q", "c": "q", "d": "r"}
            )
        )
        cases.append(identity_code(golden()))
        cases.append(trivial_code(golden()))
        for code in cases:
            assert is_finite_to_one(code) == naive_finite_to_one(code)


class TestCodeTriple:
    def test_build_recomputes_pi(self, xor2):
        assert xor2.pi.mapping == tuple(
            xor2.psi.apply_symbol(xor2.phi.apply_symbol(s))
            for s in xor2.X.alphabet.symbols
        )

    def test_build_requires_attached_codomain(self):
        g = golden()
        phi = OneBlockCode.from_dict(g, ("z",), {"0": "z", "1": "z"})
        psi = identity_code(VertexShift.full_shift(("z",)))
        with pytest.raises(InvariantViolation):
            CodeTriple.build(phi, psi)

    def test_build_requires_onto_phi(self):
        g = golden()
        phi = OneBlockCode.from_dict(g, ("0", "1"), {"0": "0", "1": "0"}, codomain=g)
        psi = trivial_code(g)
        with pytest.raises(InvariantViolation):
            CodeTriple.build(phi, psi)

    def test_build_requires_matching_psi_domain(self, xor2):
        other = trivial_code(golden())
        with pytest.raises(AlphabetMismatch):
            CodeTriple.build(xor2.phi, other)

    def test_psi_word(self, xor2):
        assert xor2.psi_word(("0", "1", "0")) == ("z", "z", "z")

    def test_z_shift_is_full(self, xor2):
        z = xor2.Z_shift
        assert z.alphabet.symbols == ("z",)
        assert z.allows("z", "z")
