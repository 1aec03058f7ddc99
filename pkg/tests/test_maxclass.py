"""Maximal-class validation, the distinguished subgroup, degree of
commutativity, standard generators, exponent relations, conjugacy facts."""

import random
from math import comb

import pytest

from pcmax.errors import PresentationError
from pcmax.maxclass import (build_profile, compute_G1, conjugacy_facts,
                            degree_of_commutativity, standard_generators,
                            validate_maximal_class, verify_exponent_relations)
from pcmax.pcgroup import PcPresentation

from .conftest import SEED
from .oracles import brute_degree_of_commutativity


def test_validate_blackburn_fixtures(g35, g57):
    assert validate_maximal_class(g35).nilpotency_class == 4
    rep = validate_maximal_class(g57)
    assert rep.ok and rep.nilpotency_class == 6 and rep.standard_chain


def test_validate_rejects_elementary_abelian():
    pres = PcPresentation(3, 3, [(0, 0, 0)] * 3, {})
    rep = validate_maximal_class(pres)
    assert not rep.ok
    assert "class" in rep.failure


def test_compute_G1(g57):
    G1 = compute_G1(g57)
    assert G1 == g57.suffix_subgroup(2)
    assert G1.order_exponent == 6
    assert G1.is_abelian()


def test_compute_G1_index_p(g36):
    G1 = compute_G1(g36)
    assert g36.n - G1.order_exponent == 1


def test_compute_G1_requires_n4():
    pres = PcPresentation(5, 3, [(0, 0, 0)] * 3, {(2, 1): (0, 0, 1)})
    with pytest.raises(PresentationError):
        compute_G1(pres)


def test_profile_rejects_non_maximal_class():
    pres = PcPresentation(3, 3, [(0, 0, 0)] * 3, {})
    with pytest.raises(PresentationError):
        build_profile(pres)


def test_standard_generators_ignore_labels(g57):
    relabeled = PcPresentation(
        g57.p, g57.n, g57.power_tails, g57.commutator_tails,
        labels=[f"x{i}" for i in range(7)])
    series = relabeled.lower_central_series()
    G1 = compute_G1(relabeled, series)
    s, s1, chain = standard_generators(relabeled, series, G1)
    assert s == relabeled.generator(1)
    assert s1 == relabeled.generator(2)
    assert chain == relabeled.generators[1:]


def test_degree_of_commutativity_metabelian(g57, g35):
    for pres, expect in [(g57, 4), (g35, 2)]:
        series = pres.lower_central_series()
        G1 = compute_G1(pres, series)
        assert degree_of_commutativity(pres, series, G1) == expect


def test_degree_of_commutativity_matches_brute_force(g55, nonmetabelian58):
    for pres in [g55, nonmetabelian58.pres]:
        series = pres.lower_central_series()
        G1 = compute_G1(pres, series)
        fast = degree_of_commutativity(pres, series, G1)
        assert fast == brute_degree_of_commutativity(pres, series, G1)


def test_nonmetabelian_fixture_dc(nm_profile58):
    assert nm_profile58.l == 2
    assert not nm_profile58.metabelian
    assert nm_profile58.r == 5


def test_standard_generators_blackburn(g57):
    series = g57.lower_central_series()
    G1 = compute_G1(g57, series)
    s, s1, chain = standard_generators(g57, series, G1)
    assert s == g57.generator(1)
    assert s1 == g57.generator(2)
    assert chain == g57.generators[1:]


def test_standard_generators_reject_abelian():
    pres = PcPresentation(5, 4, [(0,) * 4] * 4, {})
    series = pres.lower_central_series()
    with pytest.raises(PresentationError):
        standard_generators(pres, series, pres.suffix_subgroup(2))


def test_profile_named_subgroups(profile57):
    p = profile57
    assert p.A == p.G(p.r)
    assert p.N == p.G(p.l + 2)
    assert p.t == max(p.r, (p.pres.n + 2) // 2) == 4
    assert p.A.is_abelian()
    assert 0 <= p.l <= p.pres.n - 3


def test_profile_l_positive_when_n_large(profile57, nm_profile58):
    # n > p + 1 forces a positive degree of commutativity
    assert profile57.l >= 1
    assert nm_profile58.l >= 1


def test_G1_centralizes_every_two_step_layer(profile57, nm_profile58):
    # G_1 = C_G(G_i / G_{i+2}) for i = 2..n-2: containment on basis
    # commutators plus maximality (s moves some layer element out).
    for prof in (profile57, nm_profile58):
        pres = prof.pres
        for i in range(2, pres.n - 1):
            Gi, target = prof.G(i), prof.G(i + 2)
            for h in Gi.basis:
                for b in prof.G1.basis:
                    assert target.contains(pres.commutator(h, b))
            assert any(
                not target.contains(pres.commutator(h, prof.s)) for h in Gi.basis
            )


def test_chain_spans_and_membership(profile57):
    prof = profile57
    pres = prof.pres
    for i in range(1, pres.n):
        el = prof.chain_element(i)
        assert prof.G(i).contains(el)
        assert not prof.G(i + 1).contains(el)
    assert prof.chain_element(pres.n).is_identity()


def test_metabelian_flag_equivalences(profile35, profile55, profile57, nm_profile58):
    for prof in (profile35, profile55, profile57):
        assert prof.metabelian
        assert prof.G1.is_abelian()
        assert prof.l == prof.pres.n - 3
    assert not nm_profile58.metabelian
    assert not nm_profile58.G1.is_abelian()
    assert nm_profile58.l < nm_profile58.pres.n - 3


def test_commutator_containment_at_computed_l(nm_profile58):
    prof = nm_profile58
    pres = prof.pres
    for i in range(1, pres.n):
        for j in range(i, pres.n):
            target = prof.G(min(i + j + prof.l, pres.n))
            for x in prof.G(i).basis:
                for y in prof.G(j).basis:
                    assert target.contains(pres.commutator(x, y))


def test_binomials_for_p5():
    assert [comb(5, k) for k in range(2, 6)] == [10, 10, 5, 1]


def test_exponent_relations_blackburn(g57, profile57):
    rep = verify_exponent_relations(g57, profile57)
    assert rep.ok
    assert rep.exact_from == 1  # exact for every i by construction
    assert rep.congruence_all and rep.head_congruences


def test_exponent_relations_nonmetabelian(nonmetabelian58, nm_profile58):
    rep = verify_exponent_relations(nonmetabelian58.pres, nm_profile58)
    assert rep.ok
    assert rep.exact_from <= nm_profile58.r


def test_conjugacy_facts_s(g57, profile57):
    rep = conjugacy_facts(g57, profile57, profile57.s)
    assert rep.ok
    assert rep.orbit_size == 5 ** 5
    assert rep.power_in_last_term  # s^5 = 1 is central


def test_conjugacy_facts_random_outside_G1(g57, profile57):
    rng = random.Random(SEED)
    seen_cosets = {}
    checked = 0
    while checked < 100:
        g = g57.random_element(rng)
        if profile57.G1.contains(g):
            continue
        checked += 1
        key = (g[0], g[1])  # coset of G_2 determines the orbit
        if key in seen_cosets:
            continue
        rep = conjugacy_facts(g57, profile57, g)
        seen_cosets[key] = rep
        assert rep.ok, (g, rep)


def test_conjugacy_facts_rejects_G1_member(g57, profile57):
    with pytest.raises(PresentationError):
        conjugacy_facts(g57, profile57, profile57.s1)
