# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.
"""Aligned text tables for command output."""
from itertools import chain, starmap
from typing import Any, List, Optional, Sequence, Tuple, Union

__all__ = ['Table', 'verdict']


def align(s: str, align: str, width: int) -> str:
    pad = width - len(s)
    if pad <= 0:
        return s
    if align == '<':
        return s + pad * ' '
    if align == '>':
        return pad * ' ' + s
    return (pad // 2) * ' ' + s + (pad - pad // 2) * ' '


def verdict(ok: Optional[bool]) -> str:
    if ok is None:
        return 'n/a'
    return 'yes' if ok else 'NO'


class Table:
    """Rows of cells printed in aligned columns.

    Free rows are printed verbatim and do not take part in alignment.
    """

    def __init__(self, *header: str, **kwargs: Any) -> None:
        self._header: Tuple[str, ...] = header
        self._rows: List[Tuple[bool, Tuple[str, ...]]] = []
        self.set_format(**kwargs)

    def add_row(self, *row: Any, free: bool = False) -> None:
        self._rows.append((free, tuple(str(cell) for cell in row)))

    def add_rows(self, rows: Sequence[Sequence[Any]]) -> None:
        for row in rows:
            self.add_row(*row)

    def set_format(
        self,
        sep: Union[str, List[str]] = '  ',
        align: Union[str, List[str]] = '<',
        indent: str = '',
    ) -> None:
        self._sep = sep
        self._align = align
        self._indent = indent

    def __len__(self) -> int:
        return sum(not free for free, _ in self._rows)

    def __str__(self) -> str:
        rows = [row for free, row in self._rows if not free]
        if self._header:
            rows.insert(0, self._header)
        if not rows:
            return '\n'.join(row[0] for _, row in self._rows)
        col_nums = {len(row) for row in rows}
        if len(col_nums) != 1:
            raise ValueError(f'Unequal column lengths: {sorted(col_nums)}')
        (col_num,) = col_nums
        col_widths = [max(len(cell) for cell in col) for col in zip(*rows)]
        seps = self._sep if isinstance(self._sep, list) else (col_num - 1) * [self._sep]
        seps = [*seps, '']
        aligns = self._align if isinstance(self._align, list) else col_num * [self._align]

        def render(row: Sequence[str]) -> str:
            cells = starmap(align, zip(row, aligns, col_widths))
            return self._indent + ''.join(chain.from_iterable(zip(cells, seps))).rstrip()

        lines: List[str] = []
        if self._header:
            lines.append(render(self._header))
            lines.append(self._indent + '-' * (sum(col_widths) + sum(map(len, seps))))
        for free, row in self._rows:
            lines.append(row[0] if free else render(row))
        return '\n'.join(lines)
