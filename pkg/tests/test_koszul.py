"""Koszul pairs, complex slices, and the cross-checked decision."""

import pytest

from koszulity.exact_linalg import RATIONALS
from koszulity.bimodule import BaseRing, Bimodule, BimoduleMap, tensor, unit_bimodule
from koszulity.graded_structures import (GradedRing, shriek_of_ring,
                                         direct_product, direct_sum_corings)
from koszulity.koszul import (AlmostKoszulPair, KoszulVerdict,
                              make_pair_shriek_ring, make_pair_shriek_coring,
                              koszul_complex_left, koszul_complex_right,
                              is_exact, decide_koszul_ring,
                              decide_koszul_coring, phi_shriek_ring_check,
                              phi_shriek_coring_check, pair_product,
                              RING_CRITERION_KINDS, CORING_CRITERION_KINDS,
                              _check_agreement)
from koszulity.poset import GradedPoset, incidence_ring, incidence_coring
from koszulity.errors import (StructureError, PreconditionError,
                              CriteriaDisagreement)
from conftest import chain_poset, antichain_poset, P_BAD_COVERS
import oracle


def renamed_p_bad():
    'p_bad with primed element names, for products with the diamond.'
    ren = {x: x + "'" for x in ('0', 'a', 'b', 'c', 'd', '1')}
    return GradedPoset(list(ren.values()),
                       [(ren[a], ren[b]) for a, b in P_BAD_COVERS])


def test_pair_rejects_non_invertible_theta(diamond):
    A = incidence_ring(diamond)
    shr = shriek_of_ring(A)
    with pytest.raises(StructureError) as err:
        AlmostKoszulPair(A, shr, BimoduleMap.zero(shr.component(1),
                                                  A.component(1)))
    assert 'invertible' in str(err.value)


def test_pair_rejects_nonzero_square(diamond):
    # the incidence coring itself is not a Koszul partner of the incidence
    # ring under the identity: mu(theta x theta)Delta(e_{0,1}) = 2 e_{0,1}
    A = incidence_ring(diamond)
    C = incidence_coring(diamond)
    with pytest.raises(StructureError) as err:
        AlmostKoszulPair(A, C, BimoduleMap.identity(A.component(1)))
    assert 'zero' in str(err.value)


def test_pair_rejects_base_mismatch(diamond):
    A = incidence_ring(diamond)
    B = incidence_ring(chain_poset(1))
    with pytest.raises(StructureError):
        AlmostKoszulPair(A, shriek_of_ring(B),
                         BimoduleMap.identity(B.component(1)))


def test_make_pair_requires_strongly_graded():
    base = BaseRing(('x',), RATIONALS)
    A1 = Bimodule(base, {('x', 'x'): ('v',)})
    A2 = Bimodule(base, {('x', 'x'): ('w',)})
    lonely = GradedRing(base, {0: unit_bimodule(base), 1: A1, 2: A2},
                        {}, 2)   # nothing multiplies onto A^2
    with pytest.raises(PreconditionError):
        make_pair_shriek_ring(lonely)


def test_left_complex_matches_oracle(diamond, p_bad):
    # the package slice carries the augmentation (degree -1 holds R at
    # weight 0), the oracle does not; at m = 0 augmented exactness is the
    # same statement as the oracle's H_0 = dim R
    for P, ref in ((diamond, oracle.DIAMOND), (p_bad, oracle.P_BAD)):
        pair = make_pair_shriek_ring(incidence_ring(P))
        ok0, _ = is_exact(koszul_complex_left(pair, 0))
        assert ok0
        assert oracle.koszul_left_homology(ref, 0) == {0: len(P.elements)}
        bound = pair.ring.top_degree + pair.coring.top_degree
        for m in range(1, bound + 1):
            got = {n: d for n, d in
                   koszul_complex_left(pair, m).homology_dims().items() if d}
            want = {n: d for n, d in
                    oracle.koszul_left_homology(ref, m).items() if d}
            assert got == want, (m, got, want)


def test_diamond_slices_exact(diamond):
    pair = make_pair_shriek_ring(incidence_ring(diamond))
    for m in range(1, 5):
        ok, dims = is_exact(koszul_complex_left(pair, m))
        assert ok, (m, dims)
        ok, dims = is_exact(koszul_complex_right(
            make_pair_shriek_coring(incidence_coring(diamond)), m))
        assert ok, (m, dims)


def test_pbad_fails_exactly_at_weight_three(p_bad):
    pair = make_pair_shriek_ring(incidence_ring(p_bad))
    failing = {}
    for m in range(1, 7):
        ok, dims = is_exact(koszul_complex_left(pair, m))
        if not ok:
            failing[m] = {n: d for n, d in dims.items() if d}
    assert failing == {3: {1: 1}}


def test_weight_zero_slice_is_the_unit_resolution(diamond):
    pair = make_pair_shriek_ring(incidence_ring(diamond))
    cx = koszul_complex_left(pair, 0)
    assert cx.spaces[-1].dim == 4 and cx.spaces[0].dim == 4
    ok, _ = is_exact(cx)
    assert ok


def test_decide_diamond(diamond):
    v = decide_koszul_ring(incidence_ring(diamond))
    assert v.verdict is True
    assert v.sound is True
    assert v.m_bound_used == 4
    assert set(v.per_criterion) == set(RING_CRITERION_KINDS)
    assert all(ok for ok, _ in v.per_criterion.values())
    j = v.to_json()
    assert j['verdict'] is True
    assert [c['id'] for c in j['criteria']] == sorted(RING_CRITERION_KINDS)


def test_decide_pbad(p_bad):
    v = decide_koszul_ring(incidence_ring(p_bad))
    assert v.verdict is False
    assert v.sound is True
    ok, ev = v.per_criterion['pair_exactness']
    assert not ok and '3' in ev['failing_weights']
    ok, ev = v.per_criterion['tor_diagonal']
    assert not ok and ev['off_diagonal'] == [[2, 3, 1]]
    ok, ev = v.per_criterion['primitives_degree_one']
    assert not ok and ev['nonzero'] == [[2, 3, 1]]
    ok, ev = v.per_criterion['shriek_isomorphism']
    assert not ok
    ok, ev = v.per_criterion['quadraticity_consistent']
    assert ok and ev['direct'] is False

    cv = decide_koszul_coring(incidence_coring(p_bad))
    assert cv.verdict is False
    assert set(cv.per_criterion) == set(CORING_CRITERION_KINDS)
    ok, ev = cv.per_criterion['ext_strongly_graded']
    assert not ok and ev['off_diagonal'] == [[2, 3, 1]]


def test_decide_chains_and_antichains():
    for L in range(1, 6):
        assert decide_koszul_ring(incidence_ring(chain_poset(L))).verdict
        assert decide_koszul_coring(
            incidence_coring(chain_poset(L))).verdict
    for k in range(1, 6):
        v = decide_koszul_ring(incidence_ring(antichain_poset(k)))
        assert v.verdict and v.m_bound_used == 0


def test_decide_unsound_cap_is_bounded_check(p_bad):
    # every criterion shares the capped window, so below the first failing
    # weight the bounded run reports a clean (but flagged) True
    v = decide_koszul_ring(incidence_ring(p_bad), m_max=2)
    assert v.verdict is True
    assert v.sound is False
    assert v.per_criterion['tor_diagonal'][0]
    # one weight further the witness enters the window on both sides
    v3 = decide_koszul_ring(incidence_ring(p_bad), m_max=3)
    assert v3.verdict is False
    assert v3.sound is False
    assert not v3.per_criterion['tor_diagonal'][0]


def test_check_agreement_guard():
    crit = {'pair_exactness': (True, {}), 'tor_diagonal': (False, {}),
            'primitives_degree_one': (True, {}),
            'shriek_isomorphism': (True, {}),
            'quadraticity_consistent': (True, {})}
    with pytest.raises(CriteriaDisagreement) as err:
        _check_agreement(True, crit, RING_CRITERION_KINDS)
    assert 'tor_diagonal' in str(err.value)
    crit['tor_diagonal'] = (True, {})
    _check_agreement(True, crit, RING_CRITERION_KINDS)
    crit['quadraticity_consistent'] = (False, {'why': 'routes split'})
    with pytest.raises(CriteriaDisagreement):
        _check_agreement(True, crit, RING_CRITERION_KINDS)


def test_phi_comparisons(diamond, p_bad):
    A = incidence_ring(diamond)
    C = incidence_coring(diamond)
    for n in (1, 2, 3):
        assert phi_shriek_ring_check(A, n)
        assert phi_shriek_coring_check(C, n)
    B = incidence_ring(p_bad)
    for n in (1, 2, 3):
        assert phi_shriek_ring_check(B, n)
        assert phi_shriek_coring_check(incidence_coring(p_bad), n)


def test_pair_product_stability(diamond):
    good = make_pair_shriek_ring(incidence_ring(diamond))
    also_good = make_pair_shriek_ring(incidence_ring(chain_poset(2)))
    bad = make_pair_shriek_ring(incidence_ring(renamed_p_bad()))

    prod = pair_product(good, also_good)
    for m in range(1, 7):
        ok, _ = is_exact(koszul_complex_left(prod, m))
        assert ok

    mixed = pair_product(good, bad)
    failing = []
    bound = mixed.ring.top_degree + mixed.coring.top_degree
    for m in range(1, bound + 1):
        ok, _ = is_exact(koszul_complex_left(mixed, m))
        if not ok:
            failing.append(m)
    assert failing == [3]


def test_product_verdict_is_conjunction(diamond):
    A = direct_product(incidence_ring(diamond),
                       incidence_ring(chain_poset(2)))
    assert decide_koszul_ring(A).verdict is True
    B = direct_product(incidence_ring(diamond),
                       incidence_ring(renamed_p_bad()))
    assert decide_koszul_ring(B).verdict is False


def test_verdict_repr(diamond):
    v = decide_koszul_ring(incidence_ring(diamond))
    text = repr(v)
    assert 'True' in text and 'm_bound=4' in text
