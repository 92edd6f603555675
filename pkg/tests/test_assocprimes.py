import pytest

from spbw.assocprimes import (
    enumerate_right_ideals,
    is_nilpotent_good,
    lattice_dot,
    make_nilpotent_good,
    nass_ring,
    ndeg,
    quasi_prime_check,
    verify_good_descent,
    verify_nass_extension,
)
from spbw.errors import CardinalityOverCap, NotNI, PreconditionNilpotent
from spbw.finring import GF, FullMatrix, Product, Zmod, build_ring
from spbw.spbwalg import ExtensionSpec


@pytest.fixture(scope='module')
def split():
    ring = build_ring(Product([GF(2), GF(2)]))
    return ExtensionSpec.commutative(ring, 1, names=['x'])


def test_lattice_z4():
    z4 = build_ring(Zmod(4))
    lattice = enumerate_right_ideals(z4)
    assert [sorted(i.elements) for i in lattice] == [[0], [0, 2], [0, 1, 2, 3]]
    assert [str(i) for i in lattice] == ['<0>', '<2>', '<1>']
    assert nass_ring(z4) == [{0, 2}]


def test_quasi_primes_z4():
    z4 = build_ring(Zmod(4))
    zero, nil, whole = enumerate_right_ideals(z4)
    assert not quasi_prime_check(nil).is_quasi_prime
    cert = quasi_prime_check(whole)
    assert cert.is_quasi_prime
    assert cert.annihilator == {0, 2}


def test_nass_field():
    assert nass_ring(build_ring(GF(4))) == [{0}]


def test_nass_split():
    ring = build_ring(Product([GF(2), GF(2)]))
    assert len(enumerate_right_ideals(ring)) == 4
    assert nass_ring(ring) == [{0, 1}, {0, 2}]
    whole = enumerate_right_ideals(ring)[-1]
    cert = quasi_prime_check(whole)
    assert not cert.is_quasi_prime
    assert cert.witness is not None


def test_nass_local(f4z2, mat_kt2):
    assert nass_ring(f4z2.rings['R']) == [{0, 4, 8, 12}]
    ring = mat_kt2.rings['R']
    nilpotents = {p for p in ring.elements() if ring.is_nilpotent(p)}
    assert len(nilpotents) == 8
    assert nass_ring(ring) == [nilpotents]


def test_not_ni():
    with pytest.raises(NotNI):
        nass_ring(build_ring(FullMatrix(GF(2), 2)))


def test_ideal_cap():
    ring = build_ring(Zmod(65))
    with pytest.raises(CardinalityOverCap):
        enumerate_right_ideals(ring)
    assert len(enumerate_right_ideals(ring, force=True)) == 4


def test_ndeg(f4z2_ext):
    data = ndeg(f4z2_ext.poly('z + x1'))
    assert data.ndeg == 1
    assert data.monomial == (1, 0)
    assert data.is_good
    assert ndeg(f4z2_ext.poly('z*x2')).ndeg == -1


def test_descent(split):
    ring = split.ring
    e1, e2 = ring.generators()['e1'], ring.generators()['e2']
    f = split.poly({(0,): e1, (1,): e2})
    assert not is_nilpotent_good(f)
    result = make_nilpotent_good(f)
    assert result.r == e1
    assert result.fr == split.constant(e1)
    assert result.steps == 1
    assert is_nilpotent_good(result.fr)


def test_descent_precondition(f4z2_ext):
    with pytest.raises(PreconditionNilpotent):
        make_nilpotent_good(f4z2_ext.poly('z*x1'))


def test_verify_descent(split, f4z2_ext):
    report = verify_good_descent(split, trials=30, seed=1)
    assert report.ok
    assert len(report.steps) == 30
    assert verify_good_descent(f4z2_ext.extension, trials=20).ok


def test_nass_extension(f4z2_ext):
    report = verify_nass_extension(f4z2_ext.extension, degree=1, trials=10, seed=0)
    assert report.ok
    assert report.primes == [{0, 4, 8, 12}]
    assert report.forward
    assert report.backward


def test_nass_extension_matrix(mat_kt2):
    report = verify_nass_extension(mat_kt2.extensions['A'], degree=2, trials=5)
    assert report.ok
    assert report.degree_bound == 2


def test_nass_extension_split(split):
    report = verify_nass_extension(split, degree=1, trials=10, seed=3)
    assert report.ok
    assert len(report.forward) == 2


def test_lattice_dot():
    lattice = enumerate_right_ideals(build_ring(Zmod(4)))
    source = lattice_dot(lattice).source
    assert 'I0 -> I1' in source
    assert 'I1 -> I2' in source
    assert 'I0 -> I2' not in source
    assert 'filled' in source
