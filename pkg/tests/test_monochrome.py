import itertools
import json

import pytest

from homforge.ages import copies_in, copy_rank
from homforge.bits import complement, literal_source, prng_source
from homforge.errors import BudgetExhausted
from homforge.limits import CompletePresentation, RadoPresentation
from homforge.monochrome import (
    EmbeddingCertificate,
    GreedyState,
    monochromatic_embedding,
    mu_encoding,
    verify_certificate,
)
from homforge.natbits import HugeIndex, nat_from_json, nat_to_json
from homforge.structures import complete_graph, induced, is_embedding

RADO = RadoPresentation()
K2 = complete_graph(2)
K3 = complete_graph(3)
ONES = literal_source("ones")
ZEROS = literal_source("zeros")


def test_first_step_plants_a_copy():
    state = GreedyState(RADO, K2)
    mu, nu = state.step((), 0)
    assert len(mu) == 3
    assert len(copies_in(RADO, K2, mu)) >= 1
    assert list(nu) == [0]


def test_nu_is_compatible_along_steps():
    state = GreedyState(RADO, K2)
    state.step((), 0)
    mu1, nu1 = state.mu[(0,)], state.nu[(0,)]
    state.step((0,), 1)
    nu2 = state.nu[(0, 1)]
    assert {d: nu2[d] for d in nu1} == nu1


def test_sibling_mus_meet_in_mu_w():
    state = GreedyState(RADO, K2)
    mu_a, _ = state.step((), 0)
    mu_b, _ = state.step((), 1)
    assert not (set(mu_a) & set(mu_b))  # mu(empty) is empty


def test_mu_encoding_base_cases():
    state = GreedyState(RADO, K2)
    enc = mu_encoding(state)
    assert enc.size(()) == 0
    assert enc.index_bound(()) == -1
    assert enc.size((0,)) >= 1


def test_mu_encoding_intersection_law_instance():
    state = GreedyState(RADO, K3)
    enc = mu_encoding(state)
    a = set(map(_key, enc.new_indices((), 0)))
    b = set(map(_key, enc.new_indices((), 1)))
    assert not (a & b)


def test_mu_encoding_contains_interface():
    state = GreedyState(RADO, K2)
    enc = mu_encoding(state)
    # no copy index is in both pi({0}) and pi({1})
    for j in range(40):
        assert not (enc.contains(j, (0,)) and enc.contains(j, (1,)))
    # and contains agrees with membership of the listed copy in mu
    mu0 = state.mu[(0,)]
    from homforge.ages import enumerate_copies
    for j, copy in enumerate_copies(RADO, K2, 40):
        assert enc.contains(j, (0,)) == (set(copy) <= set(mu0))


def _key(r):
    return ("huge", r.low) if isinstance(r, HugeIndex) else r


def test_monochromatic_embedding_all_ones():
    cert = monochromatic_embedding(RADO, K2, ONES, 5, 1000)
    assert verify_certificate(cert)
    assert cert.audited_copy_count >= 1


def test_monochromatic_embedding_zeros_fails_at_step_one():
    with pytest.raises(BudgetExhausted) as exc:
        monochromatic_embedding(RADO, K2, ZEROS, 1, 300)
    assert exc.value.step == 1


def test_end_to_end_seed42_k3():
    cert = monochromatic_embedding(RADO, K3, prng_source(42), 8, 100_000)
    assert verify_certificate(cert)


def test_certificate_roundtrip_and_tamper():
    cert = monochromatic_embedding(RADO, K2, prng_source(3), 6, 100_000)
    doc = json.loads(json.dumps(cert.to_json()))
    again = EmbeddingCertificate.from_json(doc)
    assert verify_certificate(again)

    # replace one image vertex with a wrongly-connected one: embedding audit fails
    broken = json.loads(json.dumps(cert.to_json()))
    image = [nat_from_json(v) for _, v in cert.nu_table]

    def same_pattern(s):
        return all(RADO.adjacent(s, v) == RADO.adjacent(image[-1], v)
                   for v in image[:-1])

    spoiler = 0
    while spoiler in image or same_pattern(spoiler):
        spoiler += 1
    broken["nu"][-1][1] = nat_to_json(spoiler)
    assert not verify_certificate(EmbeddingCertificate.from_json(broken))

    # swap the oracle for all-zeros: some image copy loses its colour
    wrong_bits = json.loads(json.dumps(cert.to_json()))
    wrong_bits["bits"] = {"literal": "zeros"}
    assert not verify_certificate(EmbeddingCertificate.from_json(wrong_bits))


def test_colour_zero_dual():
    eps = prng_source(5)
    cert = monochromatic_embedding(RADO, K2, complement(eps), 6, 100_000)
    image = [nat_from_json(v) for _, v in cert.nu_table]
    for copy in copies_in(RADO, K2, image):
        assert eps(copy_rank(RADO, K2, copy)) == 0


def test_ramsey_sanity_on_the_complete_graph():
    comp = CompletePresentation()
    cert = monochromatic_embedding(comp, K2, prng_source(11), 8, 100_000)
    assert verify_certificate(cert)
    image = [nat_from_json(v) for _, v in cert.nu_table]
    # the image is a clique prefix: every pair is a monochromatic copy
    eps = prng_source(11)
    for pair in itertools.combinations(sorted(image), 2):
        assert eps(copy_rank(comp, K2, pair)) == 1


def test_run_is_a_function_of_the_prefix():
    a = monochromatic_embedding(RADO, K3, prng_source(9), 6, 100_000)
    b = monochromatic_embedding(RADO, K3, prng_source(9), 6, 100_000)
    assert json.dumps(a.to_json(), sort_keys=True) == json.dumps(b.to_json(), sort_keys=True)


def test_embedding_audit_on_final_nu():
    cert = monochromatic_embedding(RADO, K3, prng_source(1), 7, 100_000)
    nu = {d: nat_from_json(v) for d, v in cert.nu_table}
    prefix = induced(RADO, tuple(range(7)))
    assert is_embedding(nu, prefix, RADO)


def test_depth_zero():
    cert = monochromatic_embedding(RADO, K2, ZEROS, 0, 10)
    assert cert.chain == [] and cert.audited_copy_count == 0
    assert verify_certificate(cert)
