# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.
"""Canonical JSON reports of command runs."""
from __future__ import annotations

import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from .errors import ReportError
from .utils import get_timestamp

__version__ = '0.1.0'
__all__ = ['SCHEMA', 'ReportDoc', 'input_digest', 'jsonify', 'dumps', 'emit_report']

log = logging.getLogger(__name__)

SCHEMA = 'spbw-report/1'
SET_LIMIT = 64

JSONValue = Union[None, bool, int, float, str, List[Any], Dict[str, Any]]


def input_digest(text: Union[str, bytes]) -> str:
    if isinstance(text, str):
        text = text.encode()
    return hashlib.sha1(text).hexdigest()


def _sort_key(x: JSONValue) -> Tuple[int, Any]:
    if isinstance(x, (int, float)) and not isinstance(x, bool):
        return 0, x
    return 1, json.dumps(x, sort_keys=True)


def jsonify(obj: Any) -> JSONValue:
    """Convert results to JSON values in a deterministic way.

    Sets become sorted lists; sets with more than 64 elements are replaced
    by their size, digest and first elements.
    """
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return round(float(obj), 6)
    if hasattr(obj, '_asdict'):
        return {k: jsonify(v) for k, v in obj._asdict().items()}
    if isinstance(obj, dict):
        return {str(k): jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (set, frozenset)):
        items = sorted((jsonify(x) for x in obj), key=_sort_key)
        if len(items) > SET_LIMIT:
            return {
                'cardinality': len(items),
                'digest': input_digest(json.dumps(items, sort_keys=True)),
                'first': items[:16],
            }
        return items
    if isinstance(obj, (list, tuple)):
        return [jsonify(x) for x in obj]
    if isinstance(obj, np.ndarray):
        return jsonify(obj.tolist())
    raise ReportError(f'Unknown object in report: {obj!r}')


def dumps(obj: Any) -> str:
    return json.dumps(jsonify(obj), sort_keys=True, indent=2, ensure_ascii=False) + '\n'


class ReportDoc:
    """Report of one command run.

    The ``results`` payload depends only on the input, the seed and the
    mode; the wall time and timestamp are kept outside of it.
    """

    def __init__(
        self,
        command: str,
        source: str = '',
        seed: Optional[int] = None,
        mode: Optional[str] = None,
    ) -> None:
        from . import __version__ as tool_version

        self.tool_version = tool_version
        self.command = command
        self.input_digest = input_digest(source)
        self.seed = seed
        self.mode = mode
        self.results: List[Dict[str, Any]] = []
        self.verdict: Optional[bool] = None
        self.error: Optional[Dict[str, Any]] = None
        self.wall_time = 0.0
        self.timestamp = get_timestamp()

    def add(self, kind: str, **payload: Any) -> None:
        self.results.append({'kind': kind, **payload})

    def judge(self, ok: bool) -> None:
        self.verdict = ok if self.verdict is None else self.verdict and ok

    def fail(self, exc: Exception) -> None:
        """Record the error that ended the run."""
        witness = getattr(exc, 'witness', None)
        try:
            witness = jsonify(witness)
        except ReportError:
            witness = str(witness)
        self.error = {
            'type': type(exc).__name__,
            'message': str(exc),
            'witness': witness,
        }

    def results_json(self) -> str:
        return dumps(self.results)

    def to_json(self) -> Dict[str, JSONValue]:
        return {
            'schema': SCHEMA,
            'tool_version': self.tool_version,
            'command': self.command,
            'input_digest': self.input_digest,
            'seed': self.seed,
            'mode': self.mode,
            'order': 'deglex',
            'verdict': self.verdict,
            'error': self.error,
            'results': jsonify(self.results),
            'wall_time': round(self.wall_time, 3),
            'timestamp': self.timestamp,
        }


def emit_report(doc: ReportDoc, path: Union[str, Path]) -> None:
    path = Path(path)
    try:
        path.write_text(dumps(doc.to_json()))
    except OSError as exc:
        raise ReportError(f'Cannot write report to {path}: {exc.strerror}') from exc
    log.debug(f'Report written to {path}')
