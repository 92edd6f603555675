import logging

import numpy as np
import pytest

from spbw.errors import (
    GeneratorImageMissing,
    LawViolation,
    MixedRings,
    NotADerivation,
    NotAHomomorphism,
    NotAnIdeal,
    SymbolicNeedsSampledMode,
)
from spbw.finring import GF, IntegerRing, Quotient, TrivialExt, Zmod, build_ring
from spbw.ringmaps import (
    build_derivation,
    build_map,
    check_compatibility,
    check_compatible_ideal,
    commuting_family,
    derived_law_suite,
    identity_map,
    ideal_mask,
    zero_derivation,
)
from spbw.spbwalg import ExtensionSpec


@pytest.fixture(scope='module')
def s2z4():
    return build_ring(TrivialExt(Zmod(4)))


@pytest.fixture(scope='module')
def s2z4_maps(s2z4):
    e = s2z4.generators()['e']
    return [
        build_map(s2z4, {'e': e}, 's1'),
        build_map(s2z4, {'e': s2z4.neg(e)}, 's2'),
        build_map(s2z4, {'e': s2z4.zero}, 's3'),
    ]


@pytest.fixture(scope='module')
def f4z2():
    return build_ring(Quotient(build_ring(GF(4, (1, 1, 1))), 'z', (0, 0, 1)))


def test_identity(s2z4):
    sigma = identity_map(s2z4)
    assert sigma.is_identity
    assert sigma.injective
    assert sigma.table.tolist() == list(range(16))


def test_map_values(s2z4, s2z4_maps):
    s1, s2, s3 = s2z4_maps
    x = s2z4.add(s2z4.from_int(3), s2z4.generators()['e'])
    assert s1(x) == x
    assert s2z4.format(s2(x)) == '3 + 3*e'
    assert s3(x) == 3
    assert not s3.injective


def test_not_a_homomorphism(s2z4):
    with pytest.raises(NotAHomomorphism):
        build_map(s2z4, {'e': s2z4.one}, 'bad')


def test_missing_image(s2z4):
    with pytest.raises(GeneratorImageMissing):
        build_map(s2z4, {}, 'bad')


def test_frobenius_composition(f4z2):
    a, z = f4z2.generators()['a'], f4z2.generators()['z']
    s20 = build_map(f4z2, {'a': f4z2.mul(a, a), 'z': z}, 's20')
    s11 = build_map(f4z2, {'a': a, 'z': f4z2.mul(a, z)}, 's11')
    assert (s20.power(2).table == np.arange(16)).all()
    assert s11.power(3).is_identity
    assert s20.compose(s11)(z) == f4z2.mul(f4z2.mul(a, a), z)
    assert s11.compose(s20)(a) == f4z2.mul(a, a)
    assert commuting_family([s11, s20]) is not None
    assert commuting_family([s11, s11.power(2)]) is None


def test_derivation():
    b = build_ring(Quotient(GF(2), 't', (0, 0, 1)))
    t = b.generators()['t']
    sigma = identity_map(b)
    d = build_derivation(b, sigma, {'t': b.one}, 'd')
    assert d(t) == b.one
    assert d(b.one) == b.zero
    assert not d.is_zero
    assert zero_derivation(b, sigma).is_zero


def test_not_a_derivation():
    z4 = build_ring(Zmod(4))
    r = build_ring(Quotient(z4, 't', (0, 0, 1)))
    with pytest.raises(NotADerivation):
        build_derivation(r, identity_map(r), {'t': r.one}, 'd')


def test_mixed_rings(s2z4, f4z2):
    with pytest.raises(MixedRings):
        build_derivation(f4z2, identity_map(s2z4), {'a': 0, 'z': 0})


def test_compat_s2z4(s2z4, s2z4_maps):
    report = check_compatibility(s2z4, s2z4_maps, [])
    assert report.mode == 'exhaustive'
    assert not report.verdicts['sigma_compatible']
    assert report.verdicts['weak_sigma']
    assert report.verdicts['delta_compatible']
    w = report.witnesses['sigma_compatible']
    s3 = s2z4_maps[w.index]
    assert s3.name == 's3'
    assert s2z4.mul(w.a, s3(w.b)) == s2z4.zero
    assert s2z4.mul(w.a, w.b) != s2z4.zero


def test_compat_single_maps(s2z4, s2z4_maps):
    s1, s2, _ = s2z4_maps
    assert check_compatibility(s2z4, [s1, s2], []).ok


def test_compat_sampled(s2z4, s2z4_maps):
    report = check_compatibility(s2z4, s2z4_maps, [], 'sampled', samples=2000, seed=1)
    assert report.samples == 2000
    assert report.verdicts['weak_sigma']
    again = check_compatibility(s2z4, s2z4_maps, [], 'sampled', samples=2000, seed=1)
    assert report == again


def test_symbolic_needs_sampling():
    s = build_ring(TrivialExt(IntegerRing()))
    s3 = build_map(s, {'e': s.zero}, 's3')
    with pytest.raises(SymbolicNeedsSampledMode):
        check_compatibility(s, [s3], [])
    report = check_compatibility(s, [s3], [], 'sampled', samples=500, seed=0)
    assert not report.verdicts['sigma_compatible']
    assert report.verdicts['weak_sigma']


def test_ideal_mask(s2z4):
    e = s2z4.generators()['e']
    ideal = [0, e, s2z4.times_int(2, e), s2z4.times_int(3, e)]
    assert ideal_mask(s2z4, ideal).sum() == 4
    with pytest.raises(NotAnIdeal):
        ideal_mask(s2z4, [0, 1])


def test_compatible_ideal(s2z4, s2z4_maps):
    nil = sorted(np.flatnonzero(s2z4.nil_mask).tolist())
    assert check_compatible_ideal(s2z4, nil, s2z4_maps, []).ok


def test_law_suite_strict_uncertified(s2z4, s2z4_maps):
    laws = derived_law_suite(s2z4, s2z4_maps, [], 'strict')
    assert any(not law.holds for law in laws)


def test_law_suite_weak(s2z4, s2z4_maps):
    laws = derived_law_suite(s2z4, s2z4_maps, [], 'weak')
    assert laws
    assert all(law.holds for law in laws)


def test_law_suite_ideal(s2z4, s2z4_maps):
    nil = np.flatnonzero(s2z4.nil_mask).tolist()
    laws = derived_law_suite(s2z4, s2z4_maps, [], 'ideal', ideal=nil, max_order=3)
    assert all(law.holds for law in laws)


def test_law_suite_raises_on_broken_certificate(s2z4, s2z4_maps, mocker):
    laws = derived_law_suite(s2z4, s2z4_maps, [], 'strict')
    assert not all(law.holds for law in laws)
    fake = mocker.patch('spbw.ringmaps.check_compatibility')
    fake.return_value.verdicts = {'sigma_compatible': True, 'delta_compatible': True}
    with pytest.raises(LawViolation):
        derived_law_suite(s2z4, s2z4_maps, [], 'strict')


def test_non_injective_warned_once(s2z4, caplog):
    with caplog.at_level(logging.WARNING, logger='spbw'):
        sigma = build_map(s2z4, {'e': s2z4.zero}, 'kill')
        ext = ExtensionSpec(
            s2z4,
            [sigma, sigma],
            [zero_derivation(s2z4, sigma)] * 2,
            names=['x', 'y'],
        )
        assert not ext.certificate.bijective
        check_compatibility(s2z4, [sigma], [])
        derived_law_suite(s2z4, [sigma], [], 'weak')
        assert sigma.injective is False
    warnings = [
        r for r in caplog.records if r.message.startswith('kill is not injective')
    ]
    assert len(warnings) == 1
