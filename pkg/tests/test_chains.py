import pytest

from qccycles.chains import (
    ChainError,
    CycleChain,
    canonical_key,
    closure_apm,
    closure_residue_qc,
    is_allowable,
    is_allowable_qc_delta,
    is_isomorphic,
    isomorphic_by_encoding,
    kadic_encodings,
    parse_chain,
    readings,
    reverse_pairs,
    walk_trace,
)
from qccycles.model import ShiftAssignment, SlopeAssignment

EX2_CHAIN = "(1,2,0,0,1,1,0,0,1,2,0,0,1,1,0,0)"


def test_parse_forms_agree():
    a = parse_chain("(1,2,0,0)")
    assert a == parse_chain("1 2 0 0") == parse_chain([1, 2, 0, 0])
    assert a.pairs == ((1, 2), (0, 0))
    assert str(a) == "(1,2,0,0)"


@pytest.mark.parametrize("text", ["(1,2,1,0)", "(1,2,0,2)", "(1,2)", "(1,2,0)"])
def test_invalid_chains_rejected(text):
    with pytest.raises(ChainError):
        parse_chain(text)


def test_wraparound_repeat_rejected():
    # i_{l-1} == i_0 closes the chain with a repeated row
    with pytest.raises(ChainError):
        parse_chain("(0,0,1,1,0,2)")


def test_reverse_pattern():
    pairs = ((1, 2), (0, 0), (2, 1))
    assert reverse_pairs(pairs) == ((1, 1), (2, 0), (0, 2))
    assert reverse_pairs(reverse_pairs(pairs)) == pairs


def test_readings_count():
    chain = parse_chain("(1,2,0,0,2,1)")
    assert len(readings(chain.pairs)) == 6


def test_figure_chains_are_isomorphic():
    a = parse_chain("(1,2,0,0,1,2,0,1,1,0,0,1)")
    b = parse_chain("(1,2,0,1,1,0,0,1,1,2,0,0)")
    assert is_isomorphic(a, b)
    assert isomorphic_by_encoding(a, b, 3)


def test_distinct_chains_not_isomorphic():
    a = parse_chain("(1,2,0,1,1,2,0,1)")
    b = parse_chain("(1,2,0,0,1,2,0,1)")
    assert not is_isomorphic(a, b)
    assert not isomorphic_by_encoding(a, b, 3)
    assert not is_isomorphic(a, parse_chain("(1,2,0,1)"))


def test_canonical_key_is_a_reading():
    chain = parse_chain("(2,3,0,0,1,1,0,2,2,3,1,1)")
    key = canonical_key(chain)
    assert key in {tuple(x for p in r for x in p) for r in readings(chain.pairs)}
    assert canonical_key(CycleChain.from_flat(key)) == key


def test_kadic_encoding_digits():
    right, left = kadic_encodings(parse_chain("(1,2,0,0)"), 3)
    assert right == 1 + 2 * 3 + 0 * 9 + 0 * 27
    # reversed reading (1,0,0,2)
    assert left == 1 + 0 * 3 + 0 * 9 + 2 * 27
    with pytest.raises(ChainError):
        kadic_encodings(parse_chain("(1,2,0,0)"), 2)


def test_example_two_chain_closes(ex2):
    chain = parse_chain(EX2_CHAIN)
    assert closure_residue_qc(chain, ex2.slopes) == 0
    assert is_allowable(chain, ex2.slopes)
    assert is_allowable_qc_delta(chain, ex2.slopes)


def _rows_in_block(chain, trace, block):
    l = chain.half_length
    rows = set()
    for t, (i, j) in enumerate(chain.pairs):
        if (i, j) == block:
            rows.add(trace.row_indices[t])
        if (chain.pairs[(t + 1) % l][0], j) == block:
            rows.add(trace.row_indices[(t + 1) % l])
    return rows


def test_walk_trace_lift_convention(ex2):
    chain = parse_chain(EX2_CHAIN)
    # under row = col + s the walk from row 0 meets the negation of {0,4,5,9}
    trace = walk_trace(chain, ex2.slopes, None, 0)
    assert trace.closes
    assert _rows_in_block(chain, trace, (0, 0)) == {0, 1, 5, 6}
    assert _rows_in_block(chain, walk_trace(chain, ex2.slopes, None, 4), (0, 0)) == {0, 4, 5, 9}


def test_walk_trace_rejects_bad_start(ex2):
    with pytest.raises(ChainError):
        walk_trace(parse_chain(EX2_CHAIN), ex2.slopes, None, 10)


def test_chain_outside_domain(ex2):
    with pytest.raises(ChainError):
        closure_residue_qc(parse_chain("(2,0,0,1)"), ex2.slopes)


def test_four_cycle_not_allowable_when_residue_nonzero(ex2):
    chain = parse_chain("(0,0,1,1)")
    assert closure_residue_qc(chain, ex2.slopes) == (0 - 0 + 1 - 0) % 10
    assert not is_allowable(chain, ex2.slopes)


def test_apm_closure_reduces_to_qc(ex2):
    chain = parse_chain(EX2_CHAIN)
    ones = ShiftAssignment.ones(ex2.slopes.slopes, 10)
    res = closure_apm(chain, ex2.slopes, ones)
    assert res.satisfied
    assert res.residue == closure_residue_qc(chain, ex2.slopes)
    assert set(res.p_products) == {1}


def test_apm_closure_matches_walk():
    # 2x2 all-ones base with m = 7 and a nontrivial shift
    slopes = SlopeAssignment(7, {(0, 0): 0, (1, 0): 1, (0, 1): 2, (1, 1): 4})
    for a in range(1, 7):
        shifts = ShiftAssignment(7, {(0, 0): 1, (1, 0): a, (0, 1): 1, (1, 1): 3})
        chain = parse_chain("(0,0,1,1)")
        closes = any(walk_trace(chain, slopes, shifts, r).closes for r in range(7))
        assert closure_apm(chain, slopes, shifts).satisfied == closes


def test_doubled_closed_chain_is_not_simple(ex1):
    # (0,0,1,1) closes by itself, so its double retraces the same 4-cycle
    chain = parse_chain("(0,0,1,1,0,0,1,1)")
    assert closure_residue_qc(parse_chain("(0,0,1,1)"), ex1.slopes) == 0
    assert closure_residue_qc(chain, ex1.slopes) == 0
    assert not is_allowable(chain, ex1.slopes)
    assert not is_allowable_qc_delta(chain, ex1.slopes)


def test_doubled_open_chain_is_simple(ex1):
    # half residue 3 in Z_6: the second copy lands three rows lower
    assert closure_residue_qc(parse_chain("(1,2,0,0)"), ex1.slopes) == 3
    chain = parse_chain("(1,2,0,0,1,2,0,0)")
    assert is_allowable(chain, ex1.slopes)
    assert is_allowable_qc_delta(chain, ex1.slopes)


def test_qc_trace_is_translation_invariant(ex2):
    chain = parse_chain(EX2_CHAIN)
    zero = walk_trace(chain, ex2.slopes, None, 0)
    for r in range(10):
        tr = walk_trace(chain, ex2.slopes, None, r)
        assert tr.row_indices == tuple((x + r) % 10 for x in zero.row_indices)
        assert tr.col_indices == tuple((x + r) % 10 for x in zero.col_indices)


def test_trace_stays_on_lifted_nonzeros():
    from qccycles.model import lift, slopes_from_rows

    base, slopes = slopes_from_rows([[0, 0, 0], [0, 1, 3]], 7)
    shifts = ShiftAssignment(7, {(0, 0): 1, (0, 1): 2, (0, 2): 3, (1, 0): 1, (1, 1): 4, (1, 2): 6})
    positions = lift(base, slopes, shifts).positions
    chain = parse_chain("(0,0,1,1,0,2,1,1)")
    traces = [walk_trace(chain, slopes, shifts, r) for r in range(7)]
    for tr in traces:
        assert tr.lifted_edges(chain, 7) <= positions
    assert any(tr.closes for tr in traces) == closure_apm(chain, slopes, shifts).satisfied
