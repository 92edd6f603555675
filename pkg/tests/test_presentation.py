from pathlib import Path

import pytest

from spbw.config import Config
from spbw.errors import (
    DuplicateDeclaration,
    MalformedPreset,
    PresentationSyntaxError,
    RelationNotLowerTriangular,
    UnresolvedName,
)
from spbw.presentation import (
    Name,
    Num,
    Pow,
    format_presentation,
    load_presentation,
    load_preset,
    parse_expr,
    parse_presentation,
)
from spbw.presets import preset_names, preset_text
from spbw.ringmaps import commuting_family
from spbw.spbwalg import check_pbw_confluence

DATA = Path(__file__).parent / 'data'


def load_text(text, **kwargs):
    return load_presentation(parse_presentation(text), **kwargs)


@pytest.mark.parametrize('name', preset_names())
def test_canonical_roundtrip(name):
    pf = parse_presentation(preset_text(name), name)
    text = format_presentation(pf)
    assert parse_presentation(text) == pf
    assert format_presentation(parse_presentation(text)) == text


def test_naturals_are_ints():
    power = parse_expr('x^12')
    assert power == Pow(Name('x'), 12)
    assert type(power.exp) is int
    assert parse_expr('7') == Num(7)
    (decl,) = parse_presentation('ring K = Zmod(12);').statements
    assert decl.ring.ints == (12,)
    assert type(decl.ring.ints[0]) is int


def test_format_expr():
    pf = parse_presentation('const q = -(2 + x)^2*3 - 1;')
    assert format_presentation(pf) == 'const q = -(2 + x)^2*3 - 1;\n'
    assert parse_expr('a*(b + c)') == parse_expr('a * ( b+c )')


def test_constants(qplane5):
    assert 'q' in qplane5.consts
    assert qplane5.element('q^2') == 4


def test_elements(f4z2):
    assert f4z2.element('a^2') == 3
    assert f4z2.element('a^3') == 1
    assert f4z2.element('a*z') == 8
    assert f4z2.element('z^2') == 0


def test_active(mat_kt2, s2z4):
    assert mat_kt2.active == 'A'
    assert set(mat_kt2.extensions) == {'A', 'D'}
    assert mat_kt2.extensions['D'].deltas[0].name == 'd'
    assert s2z4.active == 'A'
    assert s2z4.extension.names == ('x1', 'x2', 'x3')


def test_no_extension(f4z2):
    assert f4z2.active is None
    with pytest.raises(MalformedPreset):
        f4z2.extension


def test_cap():
    pres = load_preset('f4z2', cap=8)
    assert not pres.rings['R'].tabulated
    assert load_preset('f4z2').rings['R'].tabulated


def test_relation_order():
    text = 'ring K = GF(5);\nextension Q over K {\n  vars x, y;\n  x*y = 2*y*x;\n}\n'
    with pytest.raises(RelationNotLowerTriangular) as info:
        parse_presentation(text)
    assert info.value.line == 4


def test_non_standard_word():
    text = 'ring K = GF(5);\nextension Q over K {\n  vars x, y;\n  y*x = y*x;\n}\n'
    with pytest.raises(MalformedPreset):
        load_text(text)


def test_unresolved_names():
    with pytest.raises(UnresolvedName) as info:
        parse_presentation('ring K = GF(5);\nendo s on L { }\n')
    assert info.value.line == 2
    with pytest.raises(UnresolvedName):
        parse_presentation('import nosuch;')
    pres = load_text('ring K = GF(5);\nendo s on K { }\nconst c = b;\nactive K;\n')
    with pytest.raises(UnresolvedName):
        pres.element('c')


def test_duplicates():
    with pytest.raises(DuplicateDeclaration):
        parse_presentation('ring K = GF(5);\nring K = Zmod(5);\n')
    with pytest.raises(DuplicateDeclaration):
        parse_presentation('ring K = GF(5);\nextension Q over K { vars x, x; }\n')


def test_syntax_error():
    with pytest.raises(PresentationSyntaxError) as info:
        parse_presentation('ring K = GF(5);\nring L = Zmod(;\n')
    assert info.value.line == 2


def test_modulus_of_prime_field():
    with pytest.raises(MalformedPreset):
        load_text('ring K = GF(5, a^2 + 2);')


def test_self_referential_constant():
    pres = load_text('const c = c + 1;\nring K = GF(5);')
    with pytest.raises(MalformedPreset):
        pres.element('c')


def test_import_is_idempotent():
    pres = load_text('import f4z2;\nimport f4z2;\nextension B over R { vars y; }')
    assert len(pres.maps) == 6
    assert pres.active == 'B'


def test_six_endomorphisms():
    path = DATA / 'f4z2_six.spbw'
    pres = load_presentation(parse_presentation(path.read_text(), str(path)))
    ext = pres.extension
    assert ext.nvars == 6
    assert ext.certificate.compatible
    assert pres.poly('x21*a') == pres.poly('(a + 1)*x21')
    assert pres.poly('x12*z') == pres.poly('a^2*z*x12')
    assert pres.poly('x22*x10') == pres.poly('x10*x22')
    assert commuting_family(ext.sigmas) is not None
    report = check_pbw_confluence(ext)
    assert not report.confluent
    assert report.witness[0] == 'coefficient'


def test_loaded_config_is_threaded(mocker):
    config = Config(paths=[], rewrite_constant=7)
    mocker.patch('spbw.presentation.Config', side_effect=AssertionError)
    mocker.patch('spbw.spbwalg.Config', side_effect=AssertionError)
    pres = load_preset('mat-kt2', config=config)
    assert pres.config is config
    assert pres.cap == config.cap
    assert {ext.rewrite_constant for ext in pres.extensions.values()} == {7}
