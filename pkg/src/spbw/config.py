# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.
import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Optional

import toml

from .errors import SpbwError

__all__ = ['Config']

log = logging.getLogger(__name__)

DEFAULT_CAP = 256
DEFAULT_IDEAL_CAP = 64


class Config:
    """Layered configuration of the kernel.

    Values are read from ``~/.config/spbw/config.toml`` and ``spbw.toml`` in
    the working directory, later files overriding earlier ones, and finally
    from the ``SPBW_CAP`` environment variable.
    """

    defaults: Dict[str, Any] = {
        'cap': DEFAULT_CAP,
        'ideal_cap': DEFAULT_IDEAL_CAP,
        'samples': 10_000,
        'seed': 0,
        'rewrite_constant': 64,
    }

    def __init__(self, paths: Optional[List[Path]] = None, **overrides: Any) -> None:
        self._config: Dict[str, Any] = dict(self.defaults)
        if paths is None:
            paths = [Path('~/.config/spbw/config.toml').expanduser(), Path('spbw.toml')]
        for path in paths:
            if path.exists():
                log.debug(f'Reading configuration from {path}')
                with path.open() as f:
                    self._config.update(toml.load(f))
        cap = os.environ.get('SPBW_CAP')
        if cap:
            try:
                self._config['cap'] = int(cap)
            except ValueError:
                raise SpbwError(f'SPBW_CAP must be an integer, got {cap!r}')
        self._config.update({k: v for k, v in overrides.items() if v is not None})
        unknown = set(self._config) - set(self.defaults)
        if unknown:
            log.warning(f'Ignoring unknown configuration keys: {sorted(unknown)}')

    def __getitem__(self, key: str) -> Any:
        return self._config[key]

    @property
    def cap(self) -> int:
        return int(self._config['cap'])

    @property
    def ideal_cap(self) -> int:
        return int(self._config['ideal_cap'])

    @property
    def samples(self) -> int:
        return int(self._config['samples'])

    @property
    def seed(self) -> int:
        return int(self._config['seed'])

    @property
    def rewrite_constant(self) -> int:
        return int(self._config['rewrite_constant'])
