"""Surface syntax: parsing, rendering, round trips, error reporting."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from szk import corpus
from szk.core import OMEGA, Div, TailSpec, Tor, make_description
from szk.dsl import (ParseError, parse_formula, parse_group, render,
                     render_formula, render_group)


class TestParseGroup:
    def test_zero_group(self):
        assert parse_group("0").is_trivial

    def test_cyclic_with_multiplicities(self):
        d = parse_group("Z(2^3)^w + Z(3^1)^2 + Z(2^3)")
        assert d.cyclic_dict() == {(2, 3): OMEGA, (3, 1): 2}

    def test_prime_power_shorthand(self):
        assert parse_group("Z(8)") == parse_group("Z(2^3)")
        assert parse_group("Z(9)^w") == parse_group("Z(3^2)^w")

    def test_local_and_divisible_and_q(self):
        d = parse_group("Z_(5)^2 + Z(7^inf)^w + Q^w")
        assert d.tf_dict() == {5: 2}
        assert d.div_dict()[7] is OMEGA
        assert d.q_mult is OMEGA

    def test_tail_forms(self):
        assert parse_group("tail(2)").tail_dict()[2] == TailSpec(0, 1)
        assert parse_group("tail(2,w)").tail_dict()[2] == TailSpec(0, OMEGA)
        assert parse_group("tail(2,cutoff=3)").tail_dict()[2] == TailSpec(3, 1)
        assert parse_group("tail(2,2,cutoff=3)").tail_dict()[2] == TailSpec(3, 2)

    def test_prime_tail_shape(self):
        d = parse_group("forall_p{Z(P^2)^w + Z_(P) + Z(P^inf)^2}")
        shape = d.prime_tail
        assert shape.pattern_dict() == {2: OMEGA}
        assert shape.tf_mult == 1 and shape.div_mult == 2

    def test_repeated_terms_accumulate(self):
        d = parse_group("Z(2^1) + Z(2^1)^w")
        assert d.cyclic_dict()[(2, 1)] is OMEGA


class TestParseErrors:
    @pytest.mark.parametrize("text", [
        "Z(6)",                   # not a prime power
        "Z(4^2)",                 # composite base
        "Z(2^0)",                 # zero exponent
        "tail(9)",                # composite tail prime
        "Z(2^3",                  # unbalanced
        "Z(2^3) Z(3^1)",          # missing +
        "Q + ",                   # dangling operator
        "tail(2,0)",              # zero tail multiplicity
    ])
    def test_rejects(self, text):
        with pytest.raises(ParseError):
            parse_group(text)

    def test_low_tail_cutoff_is_repaired_by_the_sum(self):
        # the direct sum raises the cutoff over the explicit block and turns
        # the covered stretch of the tail into explicit blocks
        d = parse_group("Z(2^5) + tail(2,cutoff=1)")
        assert d.tail_dict()[2].cutoff == 5
        assert d.cyclic_dict() == {(2, 2): 1, (2, 3): 1, (2, 4): 1, (2, 5): 2}

    def test_error_carries_span(self):
        with pytest.raises(ParseError) as e:
            parse_group("Z(2^3) + Z(15)")
        assert e.value.span.start >= 9
        assert "prime power" in e.value.message


class TestParseFormula:
    def test_atoms(self):
        f = parse_formula("tor(12) & div(2,3,1)")
        assert f.atoms == (Tor(12), Div(2, 3, 1))

    def test_top(self):
        assert parse_formula("top").is_top

    @pytest.mark.parametrize("text", [
        "tor(0)", "div(4,2,1)", "div(2,2,2)", "div(2,1,2)", "tor(2) &",
    ])
    def test_rejects(self, text):
        with pytest.raises(ParseError):
            parse_formula(text)


class TestRender:
    def test_group_examples(self):
        d = parse_group("Z(2^3)^w + tail(3,cutoff=1) + Z_(5)^2 + Q")
        assert render_group(d) == "Z(2^3)^w + tail(3,cutoff=1) + Z_(5)^2 + Q"

    def test_trivial_group(self):
        assert render_group(make_description()) == "0"

    def test_formula_sorted(self):
        f = parse_formula("div(2,3,1) & tor(4)")
        assert render_formula(f) == "tor(4) & div(2,3,1)"

    def test_dispatch(self):
        assert render(parse_group("Q")) == "Q^1".replace("^1", "")
        assert render(parse_formula("top")) == "top"


class TestRoundTrips:
    @settings(max_examples=150, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1), st.booleans())
    def test_group_round_trip(self, seed, finite_only):
        rng = random.Random(seed)
        d = corpus.random_description(rng, finite_dp_only=finite_only)
        assert parse_group(render_group(d)) == d

    @settings(max_examples=150, deadline=None)
    @given(st.integers(0, 2 ** 32 - 1))
    def test_formula_round_trip(self, seed):
        rng = random.Random(seed)
        f = corpus.random_formula(rng)
        assert parse_formula(render_formula(f)) == f

    @settings(max_examples=100, deadline=None)
    @given(st.text(max_size=40))
    def test_parser_never_crashes(self, text):
        for fn in (parse_group, parse_formula):
            try:
                fn(text)
            except ParseError:
                pass
