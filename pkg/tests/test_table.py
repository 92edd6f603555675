import pytest

from spbw.table import Table, verdict


def test_table():
    table = Table('name', 'value')
    table.add_row('a', 1)
    table.add_row('longer', 22)
    assert len(table) == 2
    assert str(table) == 'name    value\n-------------\na       1\nlonger  22'


def test_alignment():
    table = Table(align=['<', '>'], indent='  ')
    table.add_rows([('x', 1), ('yy', 100)])
    assert str(table) == '  x     1\n  yy  100'


def test_free_rows():
    table = Table('law', 'holds')
    table.add_row('a', 'yes')
    table.add_row('-- sampled --', free=True)
    assert len(table) == 1
    assert str(table).splitlines()[-1] == '-- sampled --'


def test_unequal_columns():
    table = Table('a', 'b')
    table.add_row('only')
    with pytest.raises(ValueError):
        str(table)


def test_verdict():
    assert verdict(True) == 'yes'
    assert verdict(False) == 'NO'
    assert verdict(None) == 'n/a'
