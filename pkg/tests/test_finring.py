import numpy as np
import pytest

from spbw.errors import (
    CardinalityOverCap,
    MalformedPreset,
    MixedRings,
    NonIrreducibleModulus,
    SymbolicRingUnsupported,
)
from spbw.finring import (
    GF,
    FullMatrix,
    IntegerRing,
    PolyOverGF,
    Product,
    Quotient,
    Triangular,
    TrivialExt,
    Zmod,
    build_ring,
    first_irreducible,
    ideal_closure,
    nil_data,
)


@pytest.fixture
def f4():
    return build_ring(GF(4, (1, 1, 1)))


def test_zmod_arith():
    z4 = build_ring(Zmod(4))
    assert z4.mul(3, 3) == 1
    assert z4.neg(1) == 3
    assert z4.from_int(-1) == 3
    assert z4.format(2) == '2'


def test_zmod_nil_data():
    nd = nil_data(build_ring(Zmod(4)))
    assert nd.nilpotents == {0, 2}
    assert nd.is_ni
    assert nd.nilindex == 2
    assert nd.is_2primal


def test_gf4_codes(f4):
    a = f4.generators()['a']
    assert a == 2
    assert f4.mul(a, a) == 3
    assert f4.mul(a, 3) == 1
    assert f4.format(3) == '1 + a'
    assert f4.description == 'GF(4, a^2 + a + 1)'


def test_first_irreducible():
    assert first_irreducible(2, 2) == (1, 1, 1)
    assert GF(4).modulus == (1, 1, 1)


def test_gf_errors():
    with pytest.raises(MalformedPreset):
        GF(6)
    with pytest.raises(NonIrreducibleModulus):
        GF(4, (1, 0, 1))


def test_quotient(f4):
    r = build_ring(Quotient(f4, 'z', (0, 0, 1)))
    gens = r.generators()
    assert r.cardinality == 16
    assert gens['z'] == 4
    assert gens['a'] == 2
    assert r.mul(gens['a'], gens['z']) == 8
    assert r.mul(gens['z'], gens['z']) == 0
    assert r.format(8) == 'a*z'
    assert nil_data(r).nilpotents == {0, 4, 8, 12}


def test_trivial_extension():
    s = build_ring(TrivialExt(Zmod(4)))
    e = s.generators()['e']
    assert s.cardinality == 16
    assert s.mul(e, e) == 0
    assert s.format(s.times_int(2, e)) == '2*e'
    assert len(nil_data(s).nilpotents) == 8


def test_triangular_ni():
    t = build_ring(Triangular(Zmod(2), 2))
    nd = nil_data(t)
    assert t.cardinality == 8
    assert nd.nilpotents == {t.generators()['e12'], 0}
    assert nd.is_ni


def test_full_matrix_not_ni():
    m = build_ring(FullMatrix(GF(2), 2))
    gens = m.generators()
    nd = nil_data(m)
    assert not nd.is_ni
    assert nd.nilindex is None
    assert nd.ni_witness == ('sum', gens['e12'], gens['e21'])
    assert not m.is_commutative()


def test_product():
    p = build_ring(Product([GF(2), GF(2)]))
    assert p.generators() == {'e1': 1, 'e2': 2}
    assert p.mul(1, 2) == 0
    assert nil_data(p).nilpotents == {0}
    assert p.description == 'product(GF(2), GF(2))'


def test_axioms_hold():
    for ring in [Zmod(6), GF(9), TrivialExt(GF(3)), Triangular(Zmod(2), 2)]:
        build_ring(ring).verify_axioms()


def test_symbolic_rings():
    z = build_ring(IntegerRing())
    assert z.symbolic
    assert not z.tabulated
    assert z.mul(6, -7) == -42
    with pytest.raises(SymbolicRingUnsupported):
        z.elements()
    with pytest.raises(SymbolicRingUnsupported):
        nil_data(z)
    p = build_ring(PolyOverGF(GF(3), 't'))
    t = p.generators()['t']
    assert p.mul(t, t) == (0, 0, 1)
    assert not p.is_nilpotent(t)
    assert p.format(p.add(t, p.one)) == '1 + t'


def test_symbolic_composite():
    s = build_ring(TrivialExt(IntegerRing()))
    e = s.generators()['e']
    assert s.cardinality is None
    assert s.is_nilpotent(e)
    assert not s.is_nilpotent(s.add(e, s.one))


def test_polyring_needs_field():
    with pytest.raises(MalformedPreset):
        PolyOverGF(Zmod(4), 't')


def test_cap():
    ring = build_ring(Zmod(300))
    assert not ring.tabulated
    with pytest.raises(CardinalityOverCap) as info:
        ring.require_tables()
    assert info.value.cardinality == 300
    assert info.value.cap == 256
    assert ring.mul(299, 299) == 1


def test_ideal_closure():
    z4 = build_ring(Zmod(4))
    assert np.flatnonzero(ideal_closure(z4, [2])).tolist() == [0, 2]
    assert np.flatnonzero(ideal_closure(z4, [1])).tolist() == [0, 1, 2, 3]


def test_ring_elem():
    z4, z2 = build_ring(Zmod(4)), build_ring(Zmod(2))
    x = z4.element(3)
    assert str(x * x) == '1'
    assert (x + x).code == 2
    assert z4.element(2).is_nilpotent()
    with pytest.raises(MixedRings):
        x + z2.element(1)
