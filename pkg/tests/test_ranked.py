import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from homforge.bits import BitSource, literal_source, prng_source
from homforge.errors import InvalidInput
from homforge.limits import LdiagBitsPresentation, LdiagPrimesPresentation
from homforge.ranked import (
    ExtensionInstance,
    PrimeTable,
    bits_adjacent,
    check_rd_axioms,
    genericity_probe,
    ldiag_signature,
    prime_adjacent,
    prime_witness,
    psi,
    psi_inv,
)
from homforge.structures import FinStructure


def alt10():
    """alpha = 1 0 1 0 ..."""
    return BitSource({"test": "alt10"}, lambda j: 1 - (j & 1))


def test_prime_table_layout():
    pt = PrimeTable(3)
    assert [pt.prime(0, 0), pt.prime(1, 0), pt.prime(2, 0)] == [3, 5, 7]
    assert [pt.prime(0, 1), pt.prime(1, 1), pt.prime(2, 1)] == [11, 13, 17]
    # all distinct odd primes
    seen = {pt.prime(i, n) for i in range(3) for n in range(30)}
    assert len(seen) == 90
    assert all(q % 2 == 1 for q in seen)


def test_prime_adjacent_examples():
    pt = PrimeTable(3)
    assert prime_adjacent(pt, (0, 0), (1, 3))
    assert not prime_adjacent(pt, (0, 0), (1, 5))
    assert prime_adjacent(pt, (0, 1), (1, 11))
    with pytest.raises(InvalidInput):
        prime_adjacent(pt, (0, 0), (2, 1))


def test_check_rd_axioms():
    sig = ldiag_signature(2)
    empty = FinStructure.make(sig, 0, {})
    assert check_rd_axioms(empty, [])
    good = FinStructure.make(sig, 2, {"L0": [[0]], "L1": [[1]], "S": [[0, 1]]})
    assert check_rd_axioms(good, [0, 1])
    same_level = FinStructure.make(sig, 2, {"L0": [[0], [1]], "S": [[0, 1]]})
    assert not check_rd_axioms(same_level, [0, 0])


def test_prime_witness_examples():
    pt = PrimeTable(3)
    assert prime_witness(pt, ExtensionInstance(3, 1, X=(1,), Xp=(1,))) == 187
    assert prime_witness(pt, ExtensionInstance(3, 1)) == 1
    assert prime_witness(pt, ExtensionInstance(3, 1, Z=(1,))) == 2


def test_prime_witness_boundary_levels():
    pt = PrimeTable(3)
    z = prime_witness(pt, ExtensionInstance(3, 0, X=(2,), Y=(3,)))
    assert z >= 1  # audited inside
    z = prime_witness(pt, ExtensionInstance(3, 2, Xp=(1,), Yp=(2,)))
    assert z >= 1


def test_psi_examples():
    assert psi(2, 0, 0, 0) == 0
    assert psi(2, 0, 1, 0) == 1
    assert psi(2, 0, 0, 1) == 2


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 5), st.integers(0, 400), st.integers(0, 400))
def test_psi_bijective(levels, n, m):
    for i in range(levels - 1):
        t = psi(levels, i, n, m)
        assert psi_inv(levels, t) == (i, n, m)


def test_psi_injective_on_sample():
    seen = {}
    rnd = random.Random(0)
    for _ in range(1000):
        i, n, m = rnd.randrange(2), rnd.randrange(100), rnd.randrange(100)
        t = psi(3, i, n, m)
        assert seen.setdefault(t, (i, n, m)) == (i, n, m)


def test_bits_adjacent_examples():
    a = alt10()
    assert bits_adjacent(a, 2, (0, 0), (1, 0))
    assert not bits_adjacent(a, 2, (0, 1), (1, 0))
    assert bits_adjacent(a, 2, (0, 0), (1, 1))


def test_bits_presentation_axioms_hold_by_construction():
    pres = LdiagBitsPresentation(2, prng_source(3))
    for v in range(20):
        levels = [i for i in range(2) if pres.query(f"L{i}", (v,))]
        assert levels == [v % 2]
    for u in range(10):
        for v in range(10):
            if pres.query("S", (u, v)):
                assert v % 2 == u % 2 + 1


def test_probe_prime_diagram_clean():
    pres = LdiagPrimesPresentation(3)
    report = genericity_probe(pres, 1, 2, 10_000)
    assert report["violated"] == []
    assert report["exhausted"] == []
    assert report["satisfied"] == report["instances"]


def test_probe_zeros_alpha_has_violations():
    pres = LdiagBitsPresentation(2, literal_source("zeros"))
    report = genericity_probe(pres, 1, 1, 64)
    assert report["violated"]  # no successions exist at all


def test_probe_monotone_in_zbound():
    pres = LdiagBitsPresentation(2, prng_source(7))
    small = genericity_probe(pres, 1, 1, 8)
    large = genericity_probe(pres, 1, 1, 64)
    sat_small = set(small["witnesses"])
    sat_large = set(large["witnesses"])
    assert sat_small <= sat_large


def test_probe_bit_driven_seed7():
    pres = LdiagBitsPresentation(2, prng_source(7))
    report = genericity_probe(pres, 1, 2, 64)
    assert report["violated"] == []


def test_eq6_locality():
    # flipping one oracle bit changes exactly one succession
    base = prng_source(12)
    lv = 3
    for t in range(30):
        flipped = BitSource({"test": f"flip{t}"},
                            lambda j, t=t: 1 - base(j) if j == t else base(j))
        p0 = LdiagBitsPresentation(lv, base)
        p1 = LdiagBitsPresentation(lv, flipped)
        i, n, m = psi_inv(lv, t)
        changed = [(a, b)
                   for a in range(12) for b in range(12)
                   if p0.adjacent(a, b) != p1.adjacent(a, b)]
        lo = i + lv * n
        hi = (i + 1) + lv * m
        if lo < 12 and hi < 12:
            assert set(changed) == {(lo, hi), (hi, lo)}
        else:
            assert changed == []


def test_witness_audit_rejects_bad_z():
    pt = PrimeTable(3)
    from homforge.ranked import _audit_witness
    inst = ExtensionInstance(3, 1, X=(1,))
    with pytest.raises(InvalidInput):
        _audit_witness(pt, inst, 1)  # z=1 has no succession to (2,1)
