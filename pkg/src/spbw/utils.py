# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.
import random
from datetime import datetime
from typing import Iterator, Tuple

__all__ = ()


def get_timestamp() -> str:
    return datetime.now().isoformat(timespec='seconds')


def seeded(seed: int, *salt: object) -> random.Random:
    """Deterministic generator derived from a seed and a salt."""
    return random.Random(repr((seed, *salt)))


def compositions(n: int, max_total: int) -> Iterator[Tuple[int, ...]]:
    """Exponent vectors of length n with total degree at most max_total.

    Yields vectors by increasing total degree.
    """
    for total in range(max_total + 1):
        yield from _compositions_of(n, total)


def _compositions_of(n: int, total: int) -> Iterator[Tuple[int, ...]]:
    if n == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions_of(n - 1, total - first):
            yield (first, *rest)
