import pytest

from homforge.bits import BitSource, literal_source
from homforge.encodings import (
    b_event,
    build_chain,
    chain_to_json,
    extend_chain,
    identity_encoding,
)
from homforge.errors import BudgetExhausted, PrefixExhausted


def alternating():
    """epsilon = 0 1 0 1 ..."""
    return BitSource({"test": "alt01"}, lambda j: j & 1)


ONES = literal_source("ones")
ZEROS = literal_source("zeros")


def test_b_event_identity_examples():
    enc = identity_encoding()
    assert b_event(enc, alternating(), (), 1) is True
    assert b_event(enc, alternating(), (), 0) is False


def test_b_event_vacuous():
    # an encoding whose pi never grows: the event holds for any oracle
    from homforge.encodings import EffectiveEncoding
    enc = EffectiveEncoding(contains=lambda j, w: False, size=lambda w: 0,
                            index_bound=lambda w: -1)
    assert b_event(enc, ZEROS, (), 5) is True


def test_b_event_prefix_exhaustion_carries_index():
    enc = identity_encoding()
    with pytest.raises(PrefixExhausted) as exc:
        b_event(enc, literal_source("01"), (), 7)
    assert exc.value.index == 7


def test_extend_chain_examples():
    enc = identity_encoding()
    assert extend_chain(enc, alternating(), (), 10) == 1
    assert extend_chain(enc, ONES, (1,), 10) == 2
    with pytest.raises(BudgetExhausted):
        extend_chain(enc, ZEROS, (), 100)


def test_build_chain_examples():
    enc = identity_encoding()
    assert build_chain(enc, alternating(), 3, 10) == [(1,), (1, 3), (1, 3, 5)]
    assert build_chain(enc, ONES, 3, 10) == [(0,), (0, 1), (0, 1, 2)]
    assert build_chain(enc, ONES, 0, 10) == []


def test_build_chain_postcondition_audit():
    enc = identity_encoding()
    eps = alternating()
    chain = build_chain(enc, eps, 6, 50)
    last = chain[-1]
    for j in range(max(last) + 1):
        if any(enc.contains(j, w) for w in chain):
            assert eps(j) == 1


def test_build_chain_failure_reports_step():
    enc = identity_encoding()
    with pytest.raises(BudgetExhausted) as exc:
        build_chain(enc, ZEROS, 3, 20)
    assert exc.value.step == 1


def test_monotone_failure():
    enc = identity_encoding()
    # fails at budget 40 -> fails at every smaller budget
    with pytest.raises(BudgetExhausted):
        build_chain(enc, ZEROS, 1, 40)
    for b in (1, 5, 17, 39):
        with pytest.raises(BudgetExhausted):
            build_chain(enc, ZEROS, 1, b)


def test_chain_json_shape():
    doc = chain_to_json([(1,), (1, 3)], 100, {"literal": "ones"})
    assert doc == {"chain": [[1], [1, 3]], "budget": 100, "bits": {"literal": "ones"}}
