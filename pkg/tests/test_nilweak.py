import pytest

from spbw import nilweak
from spbw.errors import (
    EmptyTarget,
    HypothesisFailedRingSide,
    HypothesisNotCertified,
    LawViolation,
    PreconditionNilpotent,
)
from spbw.finring import GF, Product, Zmod, build_ring
from spbw.nilweak import (
    galois_laws,
    is_nilpotent_poly,
    pi_armendariz_check,
    principal_nilpotent_generator,
    verify_nilradical,
    verify_theorem_3x,
    weak_annihilator_ext,
    weak_annihilator_ring,
)
from spbw.presentation import load_preset


def test_units_of_local_ring(f4z2):
    ring = f4z2.rings['R']
    units = [p for p in ring.elements() if not ring.is_nilpotent(p)]
    assert len(units) == 12
    for p in units:
        report = weak_annihilator_ring(ring, [p])
        assert report.annihilator == {0, 4, 8, 12}
        assert report.generator == 4
        assert report.method == 'brute_force'


def test_annihilator_of_nilpotent(f4z2):
    ring = f4z2.rings['R']
    report = weak_annihilator_ring(ring, [f4z2.element('z', ring)])
    assert report.annihilator == set(ring.elements())
    assert report.contains(1)


def test_principal_generator():
    z4 = build_ring(Zmod(4))
    assert principal_nilpotent_generator(z4, [0, 2]) == 2
    assert principal_nilpotent_generator(z4, [0, 1, 2, 3]) is None


def test_empty_target(f4z2):
    with pytest.raises(EmptyTarget):
        weak_annihilator_ring(f4z2.rings['R'], [])


def test_symbolic_membership():
    pres = load_preset('t2z-symbolic')
    ring = pres.rings['S']
    report = weak_annihilator_ring(ring, [ring.one])
    assert report.method == 'membership'
    assert report.annihilator is None
    assert report.contains(ring.generators()['e'])
    assert not report.contains(ring.one)


@pytest.mark.parametrize(
    'ring',
    [Zmod(4), Zmod(6), GF(4), Product([GF(2), GF(2)])],
    ids=['Z4', 'Z6', 'GF4', 'GF2xGF2'],
)
def test_galois_laws(ring):
    assert galois_laws(build_ring(ring), trials=50, seed=1).ok


def test_galois_laws_local(f4z2):
    report = galois_laws(f4z2.rings['R'], trials=100, seed=0)
    assert report.ok
    assert report.checked == 216


def test_nilpotent_polys(s2z4):
    assert is_nilpotent_poly(s2z4.poly('e*x3'))
    assert is_nilpotent_poly(s2z4.poly('e*x3'), 'oracle')
    assert not is_nilpotent_poly(s2z4.poly('x1 + e'))
    assert not is_nilpotent_poly(s2z4.poly('x1'), 'both')
    assert is_nilpotent_poly(s2z4.extension.zero, 'oracle')


def test_nilpotent_polys_twisted(f4z2_ext):
    assert is_nilpotent_poly(f4z2_ext.poly('z*x1 + a*z*x2'), 'both')
    assert not is_nilpotent_poly(f4z2_ext.poly('z + x1*x2'), 'both')


def test_weak_annihilator_ext(f4z2_ext):
    us = [f4z2_ext.poly('x1 + z')]
    report = weak_annihilator_ext(f4z2_ext.extension, us, degree=1)
    assert report.method == 'both_agree'
    assert report.agree
    assert report.generator == 4
    assert len(report.brute) == 4 ** 3


def test_weak_annihilator_ext_modes(f4z2_ext):
    ext = f4z2_ext.extension
    us = [f4z2_ext.poly('x2'), f4z2_ext.poly('a*x1 + 1')]
    fast = weak_annihilator_ext(ext, us, 1, 'fastpath')
    assert fast.annihilator == {0, 4, 8, 12}
    assert fast.brute is None
    brute = weak_annihilator_ext(ext, us, 1, 'brute')
    assert brute.annihilator is None
    assert all(c in fast.annihilator for g in brute.brute for c in g)


def test_fastpath_needs_compatibility(s2z4):
    with pytest.raises(HypothesisNotCertified):
        weak_annihilator_ext(s2z4.extension, [s2z4.poly('x1')], 1, 'fastpath')


def test_enumeration_is_rechecked(f4z2_ext, mocker):
    enumerate_mask = nilweak._brute_mask
    mocker.patch(
        'spbw.nilweak._brute_mask', side_effect=lambda *args: ~enumerate_mask(*args)
    )
    with pytest.raises(LawViolation):
        weak_annihilator_ext(f4z2_ext.extension, [f4z2_ext.poly('x1')], 1, 'brute')


@pytest.mark.parametrize('which', ['subsets', 'principal_ideals', 'single_elements'])
def test_theorem_variants(f4z2_ext, which):
    report = verify_theorem_3x(f4z2_ext.extension, which, trials=20, seed=7, degree=1)
    assert report.ok
    assert len(report.trials) == 20
    assert all(t.generator == 4 for t in report.trials)


@pytest.mark.parametrize('which', ['principal_ideals', 'single_elements'])
def test_theorem_hypothesis_fails_on_ring(s2z4, which):
    with pytest.raises(HypothesisFailedRingSide) as excinfo:
        verify_theorem_3x(s2z4.extension, which, trials=5, seed=7)
    assert excinfo.value.witness is not None


def test_theorem_rejects_nilpotent_target(f4z2_ext):
    with pytest.raises(PreconditionNilpotent):
        verify_theorem_3x(
            f4z2_ext.extension, 'subsets', targets=[[f4z2_ext.poly('z*x1')]]
        )


def test_armendariz(f4z2_ext):
    report = pi_armendariz_check(f4z2_ext.extension, trials=500, seed=2)
    assert report.ok
    assert report.trials == 500


def test_nilradical(f4z2_ext):
    report = verify_nilradical(f4z2_ext.extension, trials=500, seed=0, degree=2)
    assert report.ok
    assert not report.mismatches
    assert not report.budget_exceeded
    assert 0 < report.nilpotent < 500
