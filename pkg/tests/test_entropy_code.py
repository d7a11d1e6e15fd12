import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import A_PRIME, WORKED_PSI_MOD, WORKED_SUPPORT
from fsic.entropy_code import (
    BitStream,
    CodeTable,
    build_code_table,
    decode,
    encode,
    huffman_lengths,
)
from fsic.errors import (
    BitsExhaustedError,
    OvershootError,
    RowStraddleError,
    TrailingBitsError,
    UnknownTokenError,
)
from fsic.seq_mine import Pattern, PatternSet
from fsic.support_adjust import compute_modified_support, tokens_in_order
from oracles import exhaustive_prefix_cost, heap_huffman_cost


def _adjusted(psi_mod):
    return PatternSet([Pattern(s, WORKED_SUPPORT.get(s, v), v) for s, v in psi_mod.items()], 2, 4)


@pytest.fixture
def worked():
    mined = PatternSet([Pattern.mined(s, v) for s, v in WORKED_SUPPORT.items()], 2, 4)
    adjusted, parse = compute_modified_support(mined, A_PRIME.tolist())
    return adjusted, tokens_in_order(parse)


def test_worked_table_is_111_bits(worked):
    adjusted, tokens = worked
    table = build_code_table(adjusted)
    assert len(table) == 17
    assert table.weighted_length(WORKED_PSI_MOD) == 111
    assert heap_huffman_cost(list(WORKED_PSI_MOD.values())) == 111
    stream = encode(tokens, table)
    assert stream.bit_count == 111
    assert len(stream.data) == 14
    np.testing.assert_array_equal(decode(stream, table, 64, 8), A_PRIME)


def test_zero_weight_patterns_have_no_code(worked):
    table = build_code_table(worked[0])
    for s, v in WORKED_PSI_MOD.items():
        assert (s in table) == (v > 0)


def test_single_pattern_gets_one_bit():
    table = build_code_table(_adjusted({(5,): 9}))
    assert table.codes == {(5,): "0"}
    stream = encode([(5,)] * 3, table)
    assert stream.bit_count == 3
    assert decode(stream, table, 3, 3).tolist() == [[5, 5, 5]]


def test_small_weights_exhaustive():
    weights = [1, 1, 2, 4]
    lengths = huffman_lengths(weights)
    assert lengths == [3, 3, 2, 1]
    best, _ = exhaustive_prefix_cost(weights)
    assert sum(w * n for w, n in zip(weights, lengths)) == best == 14


def test_empty_stream():
    table = CodeTable({(1,): 1, (2,): 1})
    s = encode([], table)
    assert s.bit_count == 0 and s.data == b""


def test_encode_unknown_token():
    with pytest.raises(UnknownTokenError):
        encode([(9,)], CodeTable({(1,): 1, (2,): 1}))


def test_decode_errors(worked):
    adjusted, tokens = worked
    table = build_code_table(adjusted)
    stream = encode(tokens, table)
    with pytest.raises(BitsExhaustedError):
        decode(BitStream(stream.bit_count, stream.data[:-1]), table, 64, 8)
    with pytest.raises(TrailingBitsError):
        decode(encode(tokens + [(0,)], table), table, 64, 8)
    with pytest.raises(OvershootError):
        decode(stream, table, 62, 62)
    with pytest.raises(RowStraddleError):
        decode(stream, table, 64, 2)


def test_decode_rejects_nonzero_padding():
    table = CodeTable({(1,): 1, (2,): 1})
    s = encode([(1,), (2,)], table)
    with pytest.raises(TrailingBitsError):
        decode(BitStream(s.bit_count, bytes([s.data[0] | 1])), table, 2, 2)


def test_canonical_order():
    table = CodeTable({(2,): 2, (0, 1): 2, (0,): 1})
    assert table.codes == {(0,): "0", (0, 1): "10", (2,): "11"}


weight_lists = st.lists(st.integers(1, 50), min_size=1, max_size=40)


@settings(max_examples=200, deadline=None)
@given(weight_lists)
def test_huffman_optimal_and_prefix_free(weights):
    syms = [(i % 7, i) for i in range(len(weights))]
    table = CodeTable(dict(zip(syms, huffman_lengths(weights))))
    assert table.kraft_sum() <= 1.0
    codes = list(table.codes.values())
    for a in codes:
        for b in codes:
            assert a == b or not b.startswith(a)
    cost = sum(w * table.lengths[s] for s, w in zip(syms, weights))
    assert cost == (heap_huffman_cost(weights) if len(weights) > 1 else weights[0])
    assert CodeTable(dict(zip(syms, huffman_lengths(weights)))) == table


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(1, 9), min_size=2, max_size=5))
def test_huffman_matches_exhaustive(weights):
    best, _ = exhaustive_prefix_cost(weights)
    assert sum(w * n for w, n in zip(weights, huffman_lengths(weights))) == best


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(0, 5), min_size=1, max_size=60), st.data())
def test_round_trip(idx, data):
    vocab = [(0,), (1,), (0, 1), (2, 2, 2), (1, 0), (3,)]
    weights = [data.draw(st.integers(1, 20)) for _ in vocab]
    table = CodeTable(dict(zip(vocab, huffman_lengths(weights))))
    tokens = [vocab[i] for i in idx]
    stream = encode(tokens, table)
    assert stream.bit_count == sum(table.lengths[t] for t in tokens)
    assert stream.pad_bits().count("1") == 0
    cells = sum(len(t) for t in tokens)
    assert decode(stream, table, cells, cells).ravel().tolist() == [s for t in tokens for s in t]
