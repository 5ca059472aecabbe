"""Property-based checks of the invariants tying the modules together."""

from math import gcd

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from qccycles.chains import (
    CycleChain,
    canonical_key,
    closure_residue_qc,
    is_allowable,
    is_allowable_qc_delta,
    isomorphic_by_encoding,
    readings,
)
from qccycles.counting import apm_cycle_spectrum, cycle_spectrum, period, repetition
from qccycles.io import parse_exponent_file, serialize_exponent_file
from qccycles.model import ShiftAssignment, SlopeAssignment, lift, slopes_from_rows
from qccycles.oracle import TannerGraph, brute_count_cycles


@st.composite
def chains(draw, v=3, k=4, max_l=6):
    l = draw(st.integers(2, max_l))
    rows = [draw(st.integers(0, v - 1))]
    cols = [draw(st.integers(0, k - 1))]
    for _ in range(l - 1):
        rows.append((rows[-1] + draw(st.integers(1, v - 1))) % v)
        cols.append((cols[-1] + draw(st.integers(1, k - 1))) % k)
    assume(rows[-1] != rows[0] and cols[-1] != cols[0])
    return CycleChain(tuple(zip(rows, cols)))


@st.composite
def qc_instances(draw, max_v=3, max_k=4, max_m=8):
    v = draw(st.integers(2, max_v))
    k = draw(st.integers(2, max_k))
    m = draw(st.integers(1, max_m))
    rows = [[draw(st.one_of(st.none(), st.integers(0, m - 1))) for _ in range(k)] for _ in range(v)]
    for j in range(k):
        if all(rows[i][j] is None for i in range(v)):
            rows[draw(st.integers(0, v - 1))][j] = 0
    return slopes_from_rows(rows, m)


@given(chains())
def test_canonical_key_invariance(chain):
    key = canonical_key(chain)
    assert canonical_key(CycleChain.from_flat(key)) == key
    for reading in readings(chain.pairs):
        assert canonical_key(reading) == key
    assert canonical_key(chain.reversed()) == key


@given(chains(), chains())
def test_encoding_route_agrees_with_key(a, b):
    same = len(a.pairs) == len(b.pairs) and canonical_key(a) == canonical_key(b)
    assert isomorphic_by_encoding(a, b, 4) == same
    assert isomorphic_by_encoding(a, a.rotate(1).reversed(), 4)


@given(chains())
def test_repetition_divides_length(chain):
    invariant, n = repetition(chain)
    assert chain.half_length % n == 0
    assert (n == 1) == (not invariant)


@given(st.integers(1, 30), st.data())
def test_period_properties(m, data):
    values = data.draw(st.sets(st.integers(0, m - 1), min_size=1))
    p = period(values, m)
    assert m % p == 0
    assert {(x + p) % m for x in values} == values
    for q in range(1, p):
        assert {(x + q) % m for x in values} != values


@settings(max_examples=60, deadline=None)
@given(chains(), st.integers(2, 12), st.data())
def test_delta_test_matches_walk(chain, m, data):
    entries = set(chain.pairs) | set(chain.exit_edges())
    slopes = SlopeAssignment(m, {e: data.draw(st.integers(0, m - 1)) for e in entries})
    assume(closure_residue_qc(chain, slopes) == 0)
    assert is_allowable_qc_delta(chain, slopes) == is_allowable(chain, slopes)


@settings(max_examples=40, deadline=None)
@given(qc_instances())
def test_chain_spectrum_equals_oracle(instance):
    base, slopes = instance
    graph = TannerGraph.from_lifted(lift(base, slopes))
    assert cycle_spectrum(base, slopes, 5) == brute_count_cycles(graph, 5)


@settings(max_examples=25, deadline=None)
@given(qc_instances(max_m=6))
def test_apm_path_with_unit_shifts_equals_qc(instance):
    base, slopes = instance
    ones = ShiftAssignment.ones(base.nonzero(), slopes.m)
    assert apm_cycle_spectrum(base, slopes, ones, 5) == cycle_spectrum(base, slopes, 5)


@given(qc_instances(max_m=12), st.data())
def test_exponent_file_round_trip(instance, data):
    base, slopes = instance
    m = slopes.m
    units = [a for a in range(1, max(m, 2)) if m == 1 or gcd(a, m) == 1] or [1]
    shifts = ShiftAssignment(m, {e: data.draw(st.sampled_from(units)) for e in base.nonzero()})
    text = serialize_exponent_file(base, slopes, shifts)
    f = parse_exponent_file(text)
    assert (f.base, f.slopes, f.shifts) == (base, slopes, shifts)
    assert serialize_exponent_file(f.base, f.slopes, f.shifts) == text


@settings(max_examples=20, deadline=None)
@given(qc_instances(), st.randoms(use_true_random=False))
def test_oracle_relabeling_invariance(instance, rnd):
    base, slopes = instance
    g = TannerGraph.from_lifted(lift(base, slopes))
    checks, variables = list(range(g.n_checks)), list(range(g.n_variables))
    rnd.shuffle(checks)
    rnd.shuffle(variables)
    assert brute_count_cycles(g.relabeled(checks, variables), 4) == brute_count_cycles(g, 4)
