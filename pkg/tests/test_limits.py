import itertools
import time

import pytest

from homforge.bits import literal_source
from homforge.errors import InconsistentTask, InvalidInput
from homforge.limits import (
    CompletePresentation,
    ExtensionTask,
    LdiagBitsPresentation,
    LdiagPrimesPresentation,
    RadoPresentation,
    check_homogeneity_sample,
    extension_witness,
    presentation_from_descriptor,
    rado_adjacent,
)
from homforge.structures import complete_graph, graph

RADO = RadoPresentation()
COMPLETE = CompletePresentation()


def test_rado_adjacent_examples():
    assert rado_adjacent(0, 1)
    assert not rado_adjacent(0, 2)
    assert rado_adjacent(1, 3)
    assert rado_adjacent(3, 1)  # symmetric
    with pytest.raises(InvalidInput):
        rado_adjacent(4, 4)


def test_descriptor_roundtrip():
    for desc in ({"kind": "rado"}, {"kind": "complete"},
                 {"kind": "ldiag_primes", "levels": 3},
                 {"kind": "ldiag_bits", "levels": 2, "bits": {"literal": "ones"}}):
        pres = presentation_from_descriptor(desc)
        assert pres.descriptor() == desc


def test_extension_witness_examples():
    t = ExtensionTask(positive=[("E", (0, None))], negative=[("E", (1, None))],
                      excluded=(0, 1))
    assert extension_witness(RADO, t, 100) == 5

    t = ExtensionTask(positive=[("E", (0, None)), ("E", (1, None))], excluded=(0, 1))
    assert extension_witness(COMPLETE, t, 100) == 2

    t = ExtensionTask(excluded=(0,))
    assert extension_witness(RADO, t, 100) == 1


def test_extension_witness_inconsistent():
    t = ExtensionTask(positive=[("E", (0, None))], negative=[("E", (None, 0))])
    with pytest.raises(InconsistentTask):
        extension_witness(RADO, t, 10)


def test_extension_witness_determinism():
    t = ExtensionTask(positive=[("E", (3, None))], negative=[("E", (5, None))],
                      excluded=(1, 2))
    assert extension_witness(RADO, t, 10**6) == extension_witness(RADO, t, 10**6)


def test_rado_extension_property_desk_scale():
    # every disjoint U, V over {0..9} with |U|+|V| <= 4 has a witness <= 2**10
    start = time.time()
    universe = range(10)
    checked = 0
    for k in range(0, 5):
        for uv in itertools.combinations(universe, k):
            for split in range(2 ** len(uv)):
                U = [u for i, u in enumerate(uv) if split >> i & 1]
                V = [u for i, u in enumerate(uv) if not split >> i & 1]
                task = ExtensionTask(
                    positive=[("E", (u, None)) for u in U],
                    negative=[("E", (v, None)) for v in V],
                    excluded=tuple(uv))
                z = extension_witness(RADO, task, 2**10)
                assert z is not None and z <= 2**10
                checked += 1
    assert checked > 4000
    assert time.time() - start < 30


def test_ldiag_primes_witness_respects_levels():
    pres = LdiagPrimesPresentation(3)
    # ask for a level-1 point with a succession from (0, 1) = vertex 3
    t = ExtensionTask(positive=[("S", (3, None))], excluded=(), level=1)
    z = extension_witness(pres, t, 10**5)
    assert z is not None and z % 3 == 1
    assert pres.query("S", (3, z))


def test_ldiag_wrong_direction_positive_is_unsatisfiable():
    pres = LdiagPrimesPresentation(3)
    # S(z, u) with u on the level below z can never hold
    t = ExtensionTask(positive=[("S", (None, 0))], excluded=(), level=1)
    assert extension_witness(pres, t, 10**4) is None


def test_ldiag_bits_needs_bound():
    pres = LdiagBitsPresentation(2, literal_source("zeros"))
    with pytest.raises(InvalidInput):
        extension_witness(pres, ExtensionTask(level=0), None)
    assert extension_witness(pres, ExtensionTask(level=0), 10) == 0


def test_homogeneity_sample_examples():
    empty = graph(0, [])
    k1 = graph(1, [])
    assert check_homogeneity_sample(RADO, empty, k1, {}, 100) == {0: 0}

    k2 = complete_graph(2)
    assert check_homogeneity_sample(RADO, k1, k2, {0: 0}, 100) == {0: 0, 1: 1}

    two_isolated = graph(2, [])
    assert check_homogeneity_sample(RADO, k1, two_isolated, {0: 0}, 100) == {0: 0, 1: 2}


def test_homogeneity_sample_preconditions_distinct():
    k1, k2 = graph(1, []), complete_graph(2)
    with pytest.raises(InvalidInput, match="one element"):
        check_homogeneity_sample(RADO, k1, complete_graph(3), {0: 0}, 10)
    # A is not B minus its last element
    with pytest.raises(InvalidInput, match="induced substructure"):
        check_homogeneity_sample(RADO, graph(2, []), graph(3, [(0, 1), (0, 2)]),
                                 {0: 0, 1: 2}, 10)
    # h is not an embedding (0 and 2 are non-adjacent in the BIT graph)
    with pytest.raises(InvalidInput, match="does not embed"):
        check_homogeneity_sample(RADO, k2, complete_graph(3), {0: 0, 1: 2}, 10)
