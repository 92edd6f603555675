# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.
"""Catalog of shipped presentation files."""
from importlib import resources
from typing import Dict, List

__version__ = '0.1.0'
__all__ = ['CATALOG', 'preset_names', 'preset_text']

CATALOG: Dict[str, str] = {
    'zmod4': 'the ring Z/4',
    'f4z2': 'F_4[z]/(z^2) with six endomorphisms',
    'f4z2-ext': 'two twisted commuting variables over F_4[z]/(z^2)',
    'qplane5': 'quantum plane over GF(5), q = 2',
    's2z4': 'three variables over S_2(Z/4), one non-compatible map',
    't2z-symbolic': 'Ore extensions of T_2(Z) and S_2(Z)',
    'mat-kt2': '(p q; 0 p) over F_2[t]/(t^2), with and without d/dt',
    'mat-kt3': '(p q; 0 p) over F_2[t]/(t^3)',
    'usoq3-gf9': "U'_q(so_3) over GF(9)",
    'conformal-sl2-gf5': 'conformal sl_2 over GF(5)',
    'corrupted-gf5': 'conformal sl_2 with one altered coefficient',
    'bq3-gf7': 'skew bi-quadratic algebra on three generators over GF(7)',
    'aw3-gf7': 'Askey-Wilson algebra AW(3) over GF(7)',
    'qabc-gf3': 'Q(a, b, 0) over GF(3)[x]/(x^3) with a nonzero derivation',
}


def preset_names() -> List[str]:
    return list(CATALOG)


def preset_text(name: str) -> str:
    """Source of a catalog preset; raises KeyError for unknown names."""
    if name not in CATALOG:
        raise KeyError(name)
    return resources.read_text(__name__, f'{name}.spbw')
