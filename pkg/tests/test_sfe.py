import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from mfsc.sfe import (BlockCode, LengthMismatch, NoMatch, UnknownBlock, ceil_neg_log2, is_prefix_free,
                      kraft_sum, pack_bits, sfe_decode, sfe_encode, unpack_bits)

from oracles import sfe_codebook


def test_uniform_binary_codebook():
    code = BlockCode.from_table("01", 1, {("0",): Fraction(1, 2), ("1",): Fraction(1, 2)})
    assert code.codebook() == {("0",): "01", ("1",): "11"}


def test_three_symbol_codebook():
    table = {("a",): Fraction(1, 2), ("b",): Fraction(1, 4), ("c",): Fraction(1, 4)}
    code = BlockCode.from_table("abc", 1, table)
    assert code.codebook() == {("a",): "01", ("b",): "101", ("c",): "111"}
    assert sfe_encode(code, "b") == "101"
    assert sfe_decode(code, "1010") == (("b",), 3)


def test_ceil_neg_log2():
    assert ceil_neg_log2(Fraction(1)) == 0
    assert ceil_neg_log2(Fraction(1, 2)) == 1
    assert ceil_neg_log2(Fraction(1, 3)) == 2
    assert ceil_neg_log2(Fraction(3, 4) ** 16) == 7
    with pytest.raises(ValueError):
        ceil_neg_log2(Fraction(0))


def _random_table(rng, alphabet, k):
    weights = {w: rng.randint(1, 9) for w in product(alphabet, repeat=k)}
    total = sum(weights.values())
    return {w: Fraction(v, total) for w, v in weights.items()}


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10_000), st.sampled_from(["01", "abc"]), st.integers(1, 3))
def test_codebook_matches_textbook_construction(seed, alphabet, k):
    table = _random_table(random.Random(seed), alphabet, k)
    code = BlockCode.from_table(alphabet, k, table)
    book = code.codebook()
    assert book == sfe_codebook(alphabet, table)
    assert is_prefix_free(book.values())
    assert kraft_sum(book.values()) <= 1
    for w, c in book.items():
        assert len(c) == 1 + ceil_neg_log2(table[w])
        assert code.decode(c + "1100") == (w, len(c))


def test_decode_errors():
    code = BlockCode.from_table("01", 1, {("0",): Fraction(1, 2), ("1",): Fraction(1, 2)})
    with pytest.raises(NoMatch):
        code.decode("0")
    with pytest.raises(NoMatch):
        code.decode("00")
    with pytest.raises(UnknownBlock):
        code.encode("2")


def test_from_table_rejects_bad_measures():
    with pytest.raises(ValueError):
        BlockCode.from_table("01", 1, {("0",): Fraction(1)})
    with pytest.raises(ValueError):
        BlockCode.from_table("01", 1, {("0",): Fraction(1), ("1",): Fraction(0)})


@settings(max_examples=100, deadline=None)
@given(st.text("01", max_size=70))
def test_pack_round_trip(bits):
    data = pack_bits(bits)
    assert len(data) == 8 + -(-len(bits) // 8)
    assert unpack_bits(data) == bits


def test_pack_layout_is_big_endian():
    assert pack_bits("1") == bytes(7) + b"\x01" + b"\x80"
    with pytest.raises(LengthMismatch):
        unpack_bits(bytes(7) + b"\x09" + b"\x00")
