import json
from typing import NamedTuple

import numpy as np
import pytest

from spbw.errors import HypothesisFailedRingSide, ReportError, SpbwError
from spbw.report import SCHEMA, ReportDoc, dumps, emit_report, input_digest, jsonify


class Pair(NamedTuple):
    a: int
    b: frozenset


def test_empty_results():
    assert ReportDoc('presets').results_json() == '[]\n'


def test_jsonify():
    assert jsonify({12, 0, 8, 4}) == [0, 4, 8, 12]
    assert jsonify(Pair(1, frozenset([3, 2]))) == {'a': 1, 'b': [2, 3]}
    assert jsonify(np.int64(3)) == 3
    assert jsonify(np.array([True, False])) == [True, False]
    assert jsonify({1: (2, None)}) == {'1': [2, None]}
    assert jsonify(frozenset(['b', 'a'])) == ['a', 'b']


def test_large_set_summary():
    summary = jsonify(set(range(100)))
    assert summary['cardinality'] == 100
    assert summary['first'] == list(range(16))
    assert summary['digest'] == jsonify(set(range(99, -1, -1)))['digest']


def test_unknown_object():
    with pytest.raises(ReportError):
        jsonify(object())


def test_deterministic_results():
    docs = []
    for _ in range(2):
        doc = ReportDoc('nass', 'ring K = GF(5);', seed=7, mode='brute')
        doc.add('nass', primes=[{0, 2}], count=1)
        doc.judge(True)
        docs.append(doc)
    assert docs[0].results_json() == docs[1].results_json()
    assert docs[0].input_digest == input_digest('ring K = GF(5);')


def test_verdict():
    doc = ReportDoc('verify')
    assert doc.verdict is None
    doc.judge(True)
    doc.judge(False)
    doc.judge(True)
    assert doc.verdict is False


def test_emit(tmp_path):
    doc = ReportDoc('mul', seed=0, mode='fast')
    doc.add('product', value='(2)*x*y')
    path = tmp_path / 'report.json'
    emit_report(doc, path)
    data = json.loads(path.read_text())
    assert data['schema'] == SCHEMA
    assert data['order'] == 'deglex'
    assert data['results'] == [{'kind': 'product', 'value': '(2)*x*y'}]
    assert path.read_text() == dumps(doc.to_json())


def test_emit_fails(tmp_path):
    with pytest.raises(ReportError):
        emit_report(ReportDoc('mul'), tmp_path)


def test_failed_run():
    doc = ReportDoc('verify', seed=0)
    assert doc.to_json()['error'] is None
    doc.fail(HypothesisFailedRingSide('not principal', (4, 8)))
    assert doc.to_json()['error'] == {
        'type': 'HypothesisFailedRingSide',
        'message': 'not principal',
        'witness': [4, 8],
    }
    doc.fail(SpbwError('plain'))
    assert doc.to_json()['error']['witness'] is None
