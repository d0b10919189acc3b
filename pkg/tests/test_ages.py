import itertools

import pytest
from hypothesis import given, settings, strategies as st

from homforge.ages import (
    CopyEnumeration,
    colex_lt,
    copies_in,
    copy_rank,
    disjoint_copy_sequence,
    enumerate_copies,
    max_copy_index,
    popcount_sum_below,
)
from homforge.errors import InvalidInput
from homforge.limits import (
    CompletePresentation,
    LdiagPrimesPresentation,
    RadoPresentation,
)
from homforge.natbits import RankAccumulator
from homforge.ages import _triangle_sum_into
from homforge.structures import (
    FinStructure,
    complete_graph,
    find_isomorphism,
    induced,
    vertex_set,
)

RADO = RadoPresentation()
COMPLETE = CompletePresentation()
K2 = complete_graph(2)
K3 = complete_graph(3)


def test_enumerate_copies_examples():
    assert enumerate_copies(RADO, K2, 5) == [
        (0, (0, 1)), (1, (1, 2)), (2, (0, 3)), (3, (1, 3)), (4, (2, 4))]
    assert enumerate_copies(RADO, K3, 1) == [(0, (0, 1, 3))]
    assert enumerate_copies(COMPLETE, K3, 2) == [(0, (0, 1, 2)), (1, (0, 1, 3))]


def test_enumeration_prefix_stability():
    for count in range(1, 30):
        assert enumerate_copies(RADO, K2, count) == enumerate_copies(RADO, K2, count + 1)[:count]


def test_enumeration_never_stalls_desk_scale():
    assert len(enumerate_copies(RADO, K2, 200)) == 200
    assert len(enumerate_copies(RADO, K3, 200)) == 200
    assert len(enumerate_copies(COMPLETE, K2, 200)) == 200
    ld = LdiagPrimesPresentation(3)
    pair = FinStructure.make(ld.signature, 2,
                             {"L0": [[0]], "L1": [[1]], "S": [[0, 1]]})
    assert len(enumerate_copies(ld, pair, 200)) == 200


def test_cursor_resumes():
    enum = CopyEnumeration(RADO, K2)
    first = enum.advance(3)
    more = enum.advance(6)
    assert more[:3] == first


def test_popcount_sum_closed_form():
    for n in range(1500):
        assert popcount_sum_below(n) == sum(bin(y).count("1") for y in range(n))


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**14))
def test_triangle_sum_closed_form(m):
    acc = RankAccumulator()
    _triangle_sum_into(acc, m)
    brute = 0
    for z in range(m):
        bits = [i for i in range(z.bit_length()) if z >> i & 1]
        for x, y in itertools.combinations(bits, 2):
            if y >> x & 1:
                brute += 1
    assert acc.result() == brute


@pytest.mark.parametrize("pres,beta", [
    (RADO, K2), (RADO, K3), (COMPLETE, K2), (COMPLETE, K3),
    (RADO, complete_graph(1)),
])
def test_rank_matches_enumeration(pres, beta):
    for j, copy in enumerate_copies(pres, beta, 250):
        assert copy_rank(pres, beta, copy) == j


def test_rank_of_noncopy_rejected():
    with pytest.raises(InvalidInput):
        copy_rank(RADO, K2, (0, 2))


def test_generic_rank_path():
    ld = LdiagPrimesPresentation(3)
    pair = FinStructure.make(ld.signature, 2,
                             {"L0": [[0]], "L1": [[1]], "S": [[0, 1]]})
    for j, copy in enumerate_copies(ld, pair, 40):
        assert copy_rank(ld, pair, copy) == j


def test_max_copy_index_examples():
    assert max_copy_index(RADO, K2, (0, 1, 3)) == 3
    assert max_copy_index(RADO, K2, ()) == -1
    assert max_copy_index(RADO, K2, (0, 2)) == -1


def test_disjoint_copy_sequence_examples():
    assert disjoint_copy_sequence(RADO, (), (0, 1), 1) == (2, 4)
    assert disjoint_copy_sequence(RADO, (), (0, 1), 2) == (3, 8)
    assert disjoint_copy_sequence(RADO, (0,), (1,), 2) == (5,)


def _fixing_isomorphism_ok(pres, U, V, W):
    """U kept pointwise, V ascending onto W ascending, induced structures equal."""
    U, V, W = vertex_set(U), vertex_set(V), vertex_set(W)
    a = induced(pres, vertex_set(U + V))
    b = induced(pres, vertex_set(U + W))
    if find_isomorphism(a, b) is None:
        return False
    # additionally check the *specific* U-fixing ascending map
    src = vertex_set(U + V)
    dst = vertex_set(U + W)
    mapping = {}
    for i, v in enumerate(src):
        if v in U:
            mapping[i] = dst.index(v)
        else:
            mapping[i] = dst.index(W[V.index(v)])
    for name, arity in a.signature.relations:
        rel = set(a.relation(name))
        for t in itertools.product(range(a.size), repeat=arity):
            if (tuple(mapping[x] for x in t) in set(b.relation(name))) != (t in rel):
                return False
    return True


@pytest.mark.parametrize("pres", [RADO, LdiagPrimesPresentation(3)])
def test_disjoint_family_laws(pres):
    # pairwise disjointness and U-fixing isomorphism over small U, V
    if pres.kind == "rado":
        configs = [((), (0, 1)), ((0,), (1,)), ((1, 2), (0, 3)), ((), (0, 1, 3))]
    else:
        pair = [(u, v) for u in range(0, 9, 3) for v in range(1, 16, 3)
                if pres.adjacent(u, v)]
        u0, v0 = pair[0]
        configs = [((), (u0, v0)), ((u0,), (v0,))]
    for U, V in configs:
        members = [disjoint_copy_sequence(pres, U, V, k) for k in range(6)]
        assert members[0] == vertex_set(V)
        for i, j in itertools.combinations(range(6), 2):
            assert not (set(members[i]) & set(members[j]))
        for m in members:
            assert not (set(m) & set(U))
            assert _fixing_isomorphism_ok(pres, U, V, m)


def test_colex_lt_matches_codes():
    from homforge.structures import encode_set, decode_set
    sets = [decode_set(c) for c in range(150)]
    for a in sets:
        for b in sets:
            assert colex_lt(a, b) == (encode_set(a) < encode_set(b))


def test_copies_in_touching_filter():
    everything = copies_in(RADO, K2, (0, 1, 2, 3, 4))
    touching = copies_in(RADO, K2, (0, 1, 2, 3, 4), touching={4})
    assert set(touching) <= set(everything)
    assert all(4 in c for c in touching)


def test_bit_exhaustion_propagates_through_enumeration():
    from homforge.bits import literal_source
    from homforge.errors import PrefixExhausted
    from homforge.limits import LdiagBitsPresentation

    pres = LdiagBitsPresentation(2, literal_source("1"))
    pair = FinStructure.make(pres.signature, 2,
                             {"L0": [[0]], "L1": [[1]], "S": [[0, 1]]})
    with pytest.raises(PrefixExhausted):
        enumerate_copies(pres, pair, 5)
