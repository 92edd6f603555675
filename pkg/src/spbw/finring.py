# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.
"""Constructive coefficient rings.

Every ring is built from a small set of presets. Finite rings number their
elements by a mixed-radix encoding of the preset's coordinates, coordinate
zero being least significant, and materialize numpy addition and
multiplication tables when their cardinality is within the cap. The two
symbolic presets, :class:`IntegerRing` and :class:`PolyOverGF`, and
composites built on them, work on structural values and support pointwise
operations only.
"""
from __future__ import annotations

import logging
import math
import random
from abc import ABC, abstractmethod
from itertools import groupby as _groupby
from typing import (
    Any,
    Dict,
    Hashable,
    Iterable,
    Iterator,
    List,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np
from sympy import Poly, factorint, isprime, symbols

from .config import DEFAULT_CAP
from .errors import (
    CardinalityOverCap,
    MalformedPreset,
    MixedRings,
    NonIrreducibleModulus,
    SymbolicRingUnsupported,
)

__version__ = '0.1.0'
__all__ = [
    'Ring',
    'RingElem',
    'NilData',
    'Zmod',
    'GF',
    'Quotient',
    'Triangular',
    'FullMatrix',
    'TrivialExt',
    'Product',
    'IntegerRing',
    'PolyOverGF',
    'build_ring',
    'ring_arith',
    'nil_data',
    'enumerate_elements',
    'is_nilpotent',
    'ideal_closure',
]

log = logging.getLogger(__name__)

Value = Hashable
Word = Tuple[str, ...]
Term = Tuple[int, Word]


def format_word(word: Word) -> str:
    if not word:
        return '1'
    parts = []
    for name, group in _groupby(word):
        power = len(list(group))
        parts.append(name if power == 1 else f'{name}^{power}')
    return '*'.join(parts)


def format_terms(terms: Sequence[Term]) -> str:
    if not terms:
        return '0'
    out = ''
    for i, (k, word) in enumerate(terms):
        sign = '-' if k < 0 else '+'
        k = abs(k)
        if not word:
            body = str(k)
        elif k == 1:
            body = format_word(word)
        else:
            body = f'{k}*{format_word(word)}'
        if i == 0:
            out = body if sign == '+' else f'-{body}'
        else:
            out += f' {sign} {body}'
    return out


def parenthesized(text: str) -> str:
    if any(c in text for c in ' +-*'):
        return f'({text})'
    return text


class Ring(ABC):
    """Base of all coefficient rings.

    Subclasses implement the structural operations on coordinates; the
    public operations work on values, which are integer codes for finite
    rings and structural values for symbolic ones.
    """

    symbolic = False

    def __init__(self, cap: int = DEFAULT_CAP) -> None:
        self.cap = cap
        self._add_rows: Optional[List[List[int]]] = None
        self._mul_rows: Optional[List[List[int]]] = None
        self._neg_row: Optional[List[int]] = None
        self._nil_cache: Dict[Value, bool] = {}

    # structural interface

    @abstractmethod
    def _s_zero(self) -> Any:
        ...

    @abstractmethod
    def _s_one(self) -> Any:
        ...

    @abstractmethod
    def _s_add(self, x: Any, y: Any) -> Any:
        ...

    @abstractmethod
    def _s_neg(self, x: Any) -> Any:
        ...

    @abstractmethod
    def _s_mul(self, x: Any, y: Any) -> Any:
        ...

    @abstractmethod
    def _s_generators(self) -> Dict[str, Any]:
        ...

    @abstractmethod
    def _s_decompose(self, x: Any) -> List[Term]:
        ...

    @property
    @abstractmethod
    def description(self) -> str:
        """Canonical presentation-language expression of the ring."""
        ...

    @property
    def cardinality(self) -> Optional[int]:
        return None

    def _encode(self, s: Any) -> Value:
        return s

    def _decode(self, v: Value) -> Any:
        return v

    def _s_from_int(self, n: int) -> Any:
        one = self._s_one()
        result = self._s_zero()
        base = one if n >= 0 else self._s_neg(one)
        for _ in range(abs(n)):
            result = self._s_add(result, base)
        return result

    def _s_is_nilpotent(self, x: Any) -> bool:
        raise NotImplementedError

    def _s_random(self, rng: random.Random) -> Any:
        raise NotImplementedError

    # public interface

    @property
    def finite(self) -> bool:
        return self.cardinality is not None

    @property
    def tabulated(self) -> bool:
        return self._mul_rows is not None

    def __repr__(self) -> str:
        return f'<{self.__class__.__name__} {self.description}>'

    @property
    def zero(self) -> Value:
        if not hasattr(self, '_zero'):
            self._zero = self._encode(self._s_zero())
        return self._zero

    @property
    def one(self) -> Value:
        if not hasattr(self, '_one'):
            self._one = self._encode(self._s_one())
        return self._one

    def add(self, x: Value, y: Value) -> Value:
        if self._add_rows is not None:
            return self._add_rows[x][y]  # type: ignore
        return self._encode(self._s_add(self._decode(x), self._decode(y)))

    def neg(self, x: Value) -> Value:
        if self._neg_row is not None:
            return self._neg_row[x]  # type: ignore
        return self._encode(self._s_neg(self._decode(x)))

    def sub(self, x: Value, y: Value) -> Value:
        return self.add(x, self.neg(y))

    def mul(self, x: Value, y: Value) -> Value:
        if self._mul_rows is not None:
            return self._mul_rows[x][y]  # type: ignore
        return self._encode(self._s_mul(self._decode(x), self._decode(y)))

    def pow(self, x: Value, k: int) -> Value:
        result = self.one
        for _ in range(k):
            result = self.mul(result, x)
        return result

    def from_int(self, n: int) -> Value:
        return self._encode(self._s_from_int(n))

    def generators(self) -> Dict[str, Value]:
        if not hasattr(self, '_generators'):
            self._generators = {
                name: self._encode(s) for name, s in self._s_generators().items()
            }
        return self._generators

    def decompose(self, x: Value) -> List[Term]:
        """Write x as a sum of integer multiples of generator words."""
        return self._s_decompose(self._decode(x))

    def word_value(self, word: Word) -> Value:
        gens = self.generators()
        result = self.one
        for name in word:
            result = self.mul(result, gens[name])
        return result

    def times_int(self, k: int, x: Value) -> Value:
        return self.mul(self.from_int(k), x)

    def format(self, x: Value) -> str:
        return format_terms(self.decompose(x))

    def element(self, x: Value) -> RingElem:
        return RingElem(self, x)

    def elements(self) -> range:
        self.require_enumerable()
        assert self.cardinality is not None
        return range(self.cardinality)

    def random_element(self, rng: random.Random) -> Value:
        if self.cardinality is not None:
            return rng.randrange(self.cardinality)
        return self._s_random(rng)

    def require_enumerable(self) -> None:
        if self.cardinality is None:
            raise SymbolicRingUnsupported(
                f'{self.description} is symbolic and cannot be enumerated'
            )
        if self.cardinality > self.cap:
            raise CardinalityOverCap(
                f'{self.description} has {self.cardinality} elements, '
                f'above the cap of {self.cap}',
                self.cardinality,
                self.cap,
            )

    def is_nilpotent(self, x: Value) -> bool:
        if self.cardinality is None:
            return self._s_is_nilpotent(self._decode(x))
        if x not in self._nil_cache:
            seen = set()
            power = x
            while power != self.zero and power not in seen:
                seen.add(power)
                power = self.mul(power, x)
            self._nil_cache[x] = power == self.zero
        return self._nil_cache[x]

    # tables

    @property
    def add_table(self) -> np.ndarray:
        self.require_tables()
        return self._add_table

    @property
    def mul_table(self) -> np.ndarray:
        self.require_tables()
        return self._mul_table

    @property
    def neg_table(self) -> np.ndarray:
        self.require_tables()
        return self._neg_table

    @property
    def nil_mask(self) -> np.ndarray:
        if not hasattr(self, '_nil_mask'):
            self._nil_mask = np.array(
                [self.is_nilpotent(x) for x in self.elements()], dtype=bool
            )
        return self._nil_mask

    def require_tables(self) -> None:
        self.require_enumerable()
        if self._mul_rows is None:
            self.materialize()

    def materialize(self) -> None:
        card = self.cardinality
        assert card is not None
        log.debug(f'Materializing tables of {self.description} ({card} elements)')
        coords = [self._decode(x) for x in range(card)]
        add = np.empty((card, card), dtype=np.int64)
        mul = np.empty((card, card), dtype=np.int64)
        for x, sx in enumerate(coords):
            for y, sy in enumerate(coords):
                add[x, y] = self._encode(self._s_add(sx, sy))
                mul[x, y] = self._encode(self._s_mul(sx, sy))
        neg = np.array([self._encode(self._s_neg(sx)) for sx in coords], dtype=np.int64)
        self._add_table, self._mul_table, self._neg_table = add, mul, neg
        self._add_rows = add.tolist()
        self._mul_rows = mul.tolist()
        self._neg_row = neg.tolist()

    def verify_axioms(self) -> None:
        add, mul = self.add_table, self.mul_table
        card = len(add)
        idx = np.arange(card)
        one = self.one
        if not ((mul[one, :] == idx).all() and (mul[:, one] == idx).all()):
            raise MalformedPreset(f'{self.description}: 1 is not a two-sided identity')
        if not ((add[self.zero, :] == idx).all() and (add == add.T).all()):
            raise MalformedPreset(f'{self.description}: addition is not a group law')
        for a in range(card):
            row = mul[a]
            if not (mul[row] == row[mul]).all():
                raise MalformedPreset(
                    f'{self.description}: multiplication is not associative at {a}'
                )
            if not (row[add] == add[row[:, None], row[None, :]]).all():
                raise MalformedPreset(
                    f'{self.description}: left distributivity fails at {a}'
                )
            col = mul[:, a]
            if not (col[add] == add[col[:, None], col[None, :]]).all():
                raise MalformedPreset(
                    f'{self.description}: right distributivity fails at {a}'
                )

    def validate(self) -> Ring:
        card = self.cardinality
        if card is not None and card <= self.cap:
            self.materialize()
            self.verify_axioms()
        elif card is not None:
            log.debug(
                f'{self.description} has {card} elements, tables not materialized'
            )
        return self

    def is_commutative(self) -> bool:
        if self.tabulated:
            return bool((self._mul_table == self._mul_table.T).all())
        return False


class RingElem:
    """Element of a ring, compared by its canonical code."""

    __slots__ = ('ring', 'code')

    def __init__(self, ring: Ring, code: Value) -> None:
        self.ring = ring
        self.code = code

    def _check(self, other: RingElem) -> None:
        if other.ring is not self.ring:
            raise MixedRings(
                f'{self.ring.description} and {other.ring.description} differ'
            )

    def __add__(self, other: RingElem) -> RingElem:
        self._check(other)
        return RingElem(self.ring, self.ring.add(self.code, other.code))

    def __sub__(self, other: RingElem) -> RingElem:
        self._check(other)
        return RingElem(self.ring, self.ring.sub(self.code, other.code))

    def __mul__(self, other: RingElem) -> RingElem:
        self._check(other)
        return RingElem(self.ring, self.ring.mul(self.code, other.code))

    def __neg__(self) -> RingElem:
        return RingElem(self.ring, self.ring.neg(self.code))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RingElem):
            return NotImplemented
        return self.ring is other.ring and self.code == other.code

    def __hash__(self) -> int:
        return hash(self.code)

    def __str__(self) -> str:
        return self.ring.format(self.code)

    def __repr__(self) -> str:
        return f'<RingElem {self}>'

    def is_nilpotent(self) -> bool:
        return self.ring.is_nilpotent(self.code)


class _Mixed:
    """Mixed-radix coding of coordinate tuples over base rings."""

    _radices: Tuple[int, ...]

    def _encode_coords(self, coords: Sequence[int]) -> int:
        code, scale = 0, 1
        for c, radix in zip(coords, self._radices):
            code += c * scale
            scale *= radix
        return code

    def _decode_coords(self, code: int) -> Tuple[int, ...]:
        coords = []
        for radix in self._radices:
            code, c = divmod(code, radix)
            coords.append(c)
        return tuple(coords)


class Zmod(Ring):
    def __init__(self, n: int, cap: int = DEFAULT_CAP) -> None:
        if n < 2:
            raise MalformedPreset(f'Zmod({n}) is not a nonzero ring')
        super().__init__(cap)
        self.n = n

    @property
    def description(self) -> str:
        return f'Zmod({self.n})'

    @property
    def cardinality(self) -> int:
        return self.n

    def _s_zero(self) -> int:
        return 0

    def _s_one(self) -> int:
        return 1

    def _s_add(self, x: int, y: int) -> int:
        return (x + y) % self.n

    def _s_neg(self, x: int) -> int:
        return -x % self.n

    def _s_mul(self, x: int, y: int) -> int:
        return x * y % self.n

    def _s_from_int(self, n: int) -> int:
        return n % self.n

    def _s_generators(self) -> Dict[str, int]:
        return {}

    def _s_decompose(self, x: int) -> List[Term]:
        return [(x, ())] if x else []


def first_irreducible(p: int, k: int) -> Tuple[int, ...]:
    """Least monic irreducible of degree k over F_p in coefficient-code order."""
    t = symbols('t')
    for code in range(p ** k):
        coeffs = [(code // p ** i) % p for i in range(k)] + [1]
        if Poly(list(reversed(coeffs)), t, modulus=p).is_irreducible:
            return tuple(coeffs)
    raise NonIrreducibleModulus(f'No irreducible polynomial of degree {k} mod {p}')


class GF(_Mixed, Ring):
    """Finite field F_q as F_p[a]/(modulus).

    :param order: prime power q
    :param modulus: monic coefficients, lowest degree first; the least
        irreducible polynomial is taken when absent
    :param generator: name of the field generator
    """

    def __init__(
        self,
        order: int,
        modulus: Optional[Sequence[int]] = None,
        generator: str = 'a',
        cap: int = DEFAULT_CAP,
    ) -> None:
        super().__init__(cap)
        factors = factorint(order)
        if order < 2 or len(factors) != 1:
            raise MalformedPreset(f'GF({order}): order must be a prime power')
        ((p, k),) = factors.items()
        self.order, self.p, self.k = order, int(p), int(k)
        self.generator = generator
        self._explicit = modulus is not None
        if modulus is None:
            modulus = first_irreducible(self.p, self.k) if self.k > 1 else (0, 1)
        modulus = tuple(int(c) % self.p for c in modulus)
        if self.k > 1:
            if len(modulus) != self.k + 1 or modulus[-1] != 1:
                raise MalformedPreset(
                    f'GF({order}): modulus must be monic of degree {self.k}'
                )
            t = symbols('t')
            if not Poly(list(reversed(modulus)), t, modulus=self.p).is_irreducible:
                raise NonIrreducibleModulus(
                    f'GF({order}): modulus {self._format_modulus(modulus)} '
                    f'is reducible mod {self.p}'
                )
        self.modulus = modulus
        self._radices = self.k * (self.p,)

    def _format_modulus(self, modulus: Sequence[int]) -> str:
        terms = [(c, i * (self.generator,)) for i, c in enumerate(modulus) if c]
        return format_terms(list(reversed(terms)))

    @property
    def description(self) -> str:
        if self.k == 1:
            return f'GF({self.order})'
        return f'GF({self.order}, {self._format_modulus(self.modulus)})'

    @property
    def cardinality(self) -> int:
        return self.order

    def _s_zero(self) -> int:
        return 0

    def _s_one(self) -> int:
        return 1

    def _s_add(self, x: int, y: int) -> int:
        xs, ys = self._decode_coords(x), self._decode_coords(y)
        return self._encode_coords([(a + b) % self.p for a, b in zip(xs, ys)])

    def _s_neg(self, x: int) -> int:
        return self._encode_coords([-a % self.p for a in self._decode_coords(x)])

    def _s_mul(self, x: int, y: int) -> int:
        xs, ys, k, p = self._decode_coords(x), self._decode_coords(y), self.k, self.p
        prod = [0] * (2 * k - 1)
        for i, a in enumerate(xs):
            if a:
                for j, b in enumerate(ys):
                    prod[i + j] = (prod[i + j] + a * b) % p
        for deg in range(2 * k - 2, k - 1, -1):
            c = prod[deg]
            if c:
                for j in range(k):
                    prod[deg - k + j] = (prod[deg - k + j] - c * self.modulus[j]) % p
                prod[deg] = 0
        return self._encode_coords(prod[:k])

    def _s_from_int(self, n: int) -> int:
        return n % self.p

    def _s_generators(self) -> Dict[str, int]:
        if self.k == 1:
            return {}
        return {self.generator: self.p}

    def _s_decompose(self, x: int) -> List[Term]:
        return [
            (c, i * (self.generator,))
            for i, c in enumerate(self._decode_coords(x))
            if c
        ]

    def is_field(self) -> bool:
        return True


class _Composite(Ring):
    """Ring whose structural values are tuples of base-ring values."""

    base: Ring
    _nslots: int

    def __init__(self, base: Ring, cap: int) -> None:
        super().__init__(cap)
        self.base = base

    @property
    def cardinality(self) -> Optional[int]:
        if self.base.cardinality is None:
            return None
        return self.base.cardinality ** self._nslots

    def _encode(self, s: Any) -> Value:
        if self.base.cardinality is None:
            return s
        code, scale, radix = 0, 1, self.base.cardinality
        for c in s:
            code += c * scale
            scale *= radix
        return code

    def _decode(self, v: Value) -> Any:
        if self.base.cardinality is None:
            return v
        coords, radix, code = [], self.base.cardinality, v
        for _ in range(self._nslots):
            code, c = divmod(code, radix)  # type: ignore
            coords.append(c)
        return tuple(coords)

    def _s_add(self, x: Any, y: Any) -> Any:
        return tuple(self.base.add(a, b) for a, b in zip(x, y))

    def _s_neg(self, x: Any) -> Any:
        return tuple(self.base.neg(a) for a in x)

    def _s_zero(self) -> Any:
        return self._nslots * (self.base.zero,)

    def _s_from_int(self, n: int) -> Any:
        return self._scalar(self.base.from_int(n))

    @abstractmethod
    def _scalar(self, c: Value) -> Any:
        ...

    def _s_one(self) -> Any:
        return self._scalar(self.base.one)

    def _base_generators(self) -> Dict[str, Any]:
        return {name: self._scalar(g) for name, g in self.base.generators().items()}

    def _s_random(self, rng: random.Random) -> Any:
        return tuple(
            self.base.zero if rng.random() < 0.25 else self.base.random_element(rng)
            for _ in range(self._nslots)
        )

    def _check_names(self, extra: Sequence[str]) -> None:
        clash = set(self.base.generators()) & set(extra)
        if clash:
            raise MalformedPreset(
                f'{self.description}: ambiguous generator names {sorted(clash)}'
            )


class Quotient(_Composite):
    """B[var]/(modulus) for a finite commutative base B and monic modulus."""

    def __init__(
        self, base: Ring, var: str, modulus: Sequence[Value], cap: int = DEFAULT_CAP
    ) -> None:
        super().__init__(base, cap)
        if not base.finite:
            raise MalformedPreset('quotient() requires a finite base ring')
        modulus = list(modulus)
        while modulus and modulus[-1] == base.zero:
            modulus.pop()
        if len(modulus) < 2 or modulus[-1] != base.one:
            raise MalformedPreset(
                f'quotient(): modulus must be monic of degree at least 1'
            )
        if base.tabulated and not base.is_commutative():
            raise MalformedPreset('quotient() requires a commutative base ring')
        self.var = var
        self.modulus = tuple(modulus)
        self._nslots = len(modulus) - 1
        self._check_names([var])

    @property
    def description(self) -> str:
        terms = []
        for i in reversed(range(len(self.modulus))):
            c = self.modulus[i]
            if c == self.base.zero:
                continue
            mono = format_word(i * (self.var,))
            coef = self.base.format(c)
            if i == 0:
                terms.append(coef)
            elif c == self.base.one:
                terms.append(mono)
            else:
                terms.append(f'{parenthesized(coef)}*{mono}')
        return f'quotient({self.base.description}, {self.var}, {" + ".join(terms)})'

    def _scalar(self, c: Value) -> Any:
        return (c, *((self._nslots - 1) * (self.base.zero,)))

    def _s_mul(self, x: Any, y: Any) -> Any:
        base, d = self.base, self._nslots
        prod = [base.zero] * (2 * d - 1)
        for i, a in enumerate(x):
            if a == base.zero:
                continue
            for j, b in enumerate(y):
                if b != base.zero:
                    prod[i + j] = base.add(prod[i + j], base.mul(a, b))
        for deg in range(2 * d - 2, d - 1, -1):
            c = prod[deg]
            if c != base.zero:
                for j in range(d):
                    prod[deg - d + j] = base.sub(
                        prod[deg - d + j], base.mul(c, self.modulus[j])
                    )
                prod[deg] = base.zero
        return tuple(prod[:d])

    def _s_generators(self) -> Dict[str, Any]:
        gens = self._base_generators()
        var = [self.base.zero] * self._nslots
        if self._nslots > 1:
            var[1] = self.base.one
        else:
            var[0] = self.base.neg(self.modulus[0])
        gens[self.var] = tuple(var)
        return gens

    def _s_decompose(self, x: Any) -> List[Term]:
        return [
            (k, word + i * (self.var,))
            for i, c in enumerate(x)
            for k, word in self.base.decompose(c)
        ]


class _MatrixRing(_Composite):
    size: int
    positions: List[Tuple[int, int]]

    def _setup(self, size: int, positions: List[Tuple[int, int]]) -> None:
        if size < 1:
            raise MalformedPreset('matrix size must be positive')
        self.size = size
        self.positions = positions
        self._nslots = len(positions)
        self._slot = {pos: i for i, pos in enumerate(positions)}
        self._check_names([self._unit_name(pos) for pos in positions])

    @staticmethod
    def _unit_name(pos: Tuple[int, int]) -> str:
        return f'e{pos[0] + 1}{pos[1] + 1}'

    def _scalar(self, c: Value) -> Any:
        return tuple(c if i == j else self.base.zero for i, j in self.positions)

    def _entry(self, x: Any, i: int, j: int) -> Value:
        slot = self._slot.get((i, j))
        return self.base.zero if slot is None else x[slot]

    def _s_mul(self, x: Any, y: Any) -> Any:
        base, n = self.base, self.size
        out = []
        for i, j in self.positions:
            acc = base.zero
            for k in range(n):
                a = self._entry(x, i, k)
                if a == base.zero:
                    continue
                b = self._entry(y, k, j)
                if b != base.zero:
                    acc = base.add(acc, base.mul(a, b))
            out.append(acc)
        return tuple(out)

    def _s_generators(self) -> Dict[str, Any]:
        gens = self._base_generators()
        for pos in self.positions:
            gens[self._unit_name(pos)] = tuple(
                self.base.one if p == pos else self.base.zero for p in self.positions
            )
        return gens

    def _s_decompose(self, x: Any) -> List[Term]:
        return [
            (k, word + (self._unit_name(pos),))
            for pos, c in zip(self.positions, x)
            for k, word in self.base.decompose(c)
        ]


class Triangular(_MatrixRing):
    """Upper triangular n×n matrices over a base ring."""

    def __init__(self, base: Ring, size: int, cap: int = DEFAULT_CAP) -> None:
        super().__init__(base, cap)
        self._setup(size, [(i, j) for i in range(size) for j in range(i, size)])

    @property
    def description(self) -> str:
        return f'triangular({self.base.description}, {self.size})'

    def _s_is_nilpotent(self, x: Any) -> bool:
        return all(self.base.is_nilpotent(self._entry(x, i, i)) for i in range(self.size))


class FullMatrix(_MatrixRing):
    def __init__(self, base: Ring, size: int, cap: int = DEFAULT_CAP) -> None:
        super().__init__(base, cap)
        self._setup(size, [(i, j) for i in range(size) for j in range(size)])

    @property
    def description(self) -> str:
        return f'matrices({self.base.description}, {self.size})'

    def _s_is_nilpotent(self, x: Any) -> bool:
        # over a commutative domain a nilpotent n×n matrix has x^n = 0
        power = x
        for _ in range(self.size - 1):
            power = self._s_mul(power, x)
        return power == self._s_zero()


class TrivialExt(_Composite):
    """Trivial extension T(B, B) = {(r, m)}, realized as matrices (r m; 0 r)."""

    def __init__(self, base: Ring, cap: int = DEFAULT_CAP) -> None:
        super().__init__(base, cap)
        self._nslots = 2
        self._check_names(['e'])

    @property
    def description(self) -> str:
        return f'trivial({self.base.description})'

    def _scalar(self, c: Value) -> Any:
        return (c, self.base.zero)

    def _s_mul(self, x: Any, y: Any) -> Any:
        base = self.base
        (r1, m1), (r2, m2) = x, y
        return (base.mul(r1, r2), base.add(base.mul(r1, m2), base.mul(m1, r2)))

    def _s_generators(self) -> Dict[str, Any]:
        gens = self._base_generators()
        gens['e'] = (self.base.zero, self.base.one)
        return gens

    def _s_decompose(self, x: Any) -> List[Term]:
        r, m = x
        return [*self.base.decompose(r), *((k, w + ('e',)) for k, w in self.base.decompose(m))]

    def _s_is_nilpotent(self, x: Any) -> bool:
        return self.base.is_nilpotent(x[0])


class Product(Ring):
    """Direct product of rings; generators of factor i carry the suffix _i."""

    def __init__(self, factors: Sequence[Ring], cap: int = DEFAULT_CAP) -> None:
        if len(factors) < 2:
            raise MalformedPreset('product() needs at least two factors')
        super().__init__(cap)
        self.factors = tuple(factors)
        if all(f.finite for f in factors):
            self._radices = tuple(f.cardinality for f in factors)  # type: ignore
        else:
            self._radices = ()

    @property
    def description(self) -> str:
        return f'product({", ".join(f.description for f in self.factors)})'

    @property
    def cardinality(self) -> Optional[int]:
        if not self._radices:
            return None
        return math.prod(self._radices)

    def _encode(self, s: Any) -> Value:
        if not self._radices:
            return s
        code, scale = 0, 1
        for c, radix in zip(s, self._radices):
            code += c * scale
            scale *= radix
        return code

    def _decode(self, v: Value) -> Any:
        if not self._radices:
            return v
        coords, code = [], v
        for radix in self._radices:
            code, c = divmod(code, radix)  # type: ignore
            coords.append(c)
        return tuple(coords)

    def _s_zero(self) -> Any:
        return tuple(f.zero for f in self.factors)

    def _s_one(self) -> Any:
        return tuple(f.one for f in self.factors)

    def _s_add(self, x: Any, y: Any) -> Any:
        return tuple(f.add(a, b) for f, a, b in zip(self.factors, x, y))

    def _s_neg(self, x: Any) -> Any:
        return tuple(f.neg(a) for f, a in zip(self.factors, x))

    def _s_mul(self, x: Any, y: Any) -> Any:
        return tuple(f.mul(a, b) for f, a, b in zip(self.factors, x, y))

    def _s_from_int(self, n: int) -> Any:
        return tuple(f.from_int(n) for f in self.factors)

    def _embed(self, i: int, c: Value) -> Any:
        return tuple(c if j == i else f.zero for j, f in enumerate(self.factors))

    def _s_generators(self) -> Dict[str, Any]:
        gens: Dict[str, Any] = {}
        for i, f in enumerate(self.factors, start=1):
            gens[f'e{i}'] = self._embed(i - 1, f.one)
            for name, g in f.generators().items():
                gens[f'{name}_{i}'] = self._embed(i - 1, g)
        return gens

    def _s_decompose(self, x: Any) -> List[Term]:
        terms: List[Term] = []
        for i, (f, c) in enumerate(zip(self.factors, x), start=1):
            for k, word in f.decompose(c):
                terms.append(
                    (k, tuple(f'{g}_{i}' for g in word) if word else (f'e{i}',))
                )
        return terms

    def _s_is_nilpotent(self, x: Any) -> bool:
        return all(f.is_nilpotent(c) for f, c in zip(self.factors, x))

    def _s_random(self, rng: random.Random) -> Any:
        return tuple(f.random_element(rng) for f in self.factors)


class IntegerRing(Ring):
    """The symbolic ring of integers."""

    symbolic = True

    @property
    def description(self) -> str:
        return 'Int'

    def _s_zero(self) -> int:
        return 0

    def _s_one(self) -> int:
        return 1

    def _s_add(self, x: int, y: int) -> int:
        return x + y

    def _s_neg(self, x: int) -> int:
        return -x

    def _s_mul(self, x: int, y: int) -> int:
        return x * y

    def _s_from_int(self, n: int) -> int:
        return n

    def _s_generators(self) -> Dict[str, int]:
        return {}

    def _s_decompose(self, x: int) -> List[Term]:
        return [(x, ())] if x else []

    def _s_is_nilpotent(self, x: int) -> bool:
        return x == 0

    def _s_random(self, rng: random.Random) -> int:
        return 0 if rng.random() < 0.25 else rng.randint(-50, 50)


class PolyOverGF(Ring):
    """The symbolic ring F_q[var]; values are trimmed coefficient tuples."""

    symbolic = True

    def __init__(self, base: Ring, var: str, cap: int = DEFAULT_CAP) -> None:
        super().__init__(cap)
        if not (isinstance(base, GF) or (isinstance(base, Zmod) and isprime(base.n))):
            raise MalformedPreset('polyring() requires a finite field base')
        if var in base.generators():
            raise MalformedPreset(f'polyring(): ambiguous generator name {var}')
        self.base = base
        self.var = var

    @property
    def description(self) -> str:
        return f'polyring({self.base.description}, {self.var})'

    def _trim(self, coeffs: List[Value]) -> Tuple[Value, ...]:
        while coeffs and coeffs[-1] == self.base.zero:
            coeffs.pop()
        return tuple(coeffs)

    def _s_zero(self) -> Tuple[Value, ...]:
        return ()

    def _s_one(self) -> Tuple[Value, ...]:
        return (self.base.one,)

    def _s_add(self, x: Any, y: Any) -> Any:
        n = max(len(x), len(y))
        zero = self.base.zero
        return self._trim(
            [
                self.base.add(x[i] if i < len(x) else zero, y[i] if i < len(y) else zero)
                for i in range(n)
            ]
        )

    def _s_neg(self, x: Any) -> Any:
        return tuple(self.base.neg(c) for c in x)

    def _s_mul(self, x: Any, y: Any) -> Any:
        if not x or not y:
            return ()
        prod = [self.base.zero] * (len(x) + len(y) - 1)
        for i, a in enumerate(x):
            for j, b in enumerate(y):
                prod[i + j] = self.base.add(prod[i + j], self.base.mul(a, b))
        return self._trim(prod)

    def _s_from_int(self, n: int) -> Any:
        return self._trim([self.base.from_int(n)])

    def _s_generators(self) -> Dict[str, Any]:
        gens: Dict[str, Any] = {
            name: (g,) for name, g in self.base.generators().items()
        }
        gens[self.var] = (self.base.zero, self.base.one)
        return gens

    def _s_decompose(self, x: Any) -> List[Term]:
        return [
            (k, word + i * (self.var,))
            for i, c in enumerate(x)
            for k, word in self.base.decompose(c)
        ]

    def _s_is_nilpotent(self, x: Any) -> bool:
        return not x

    def _s_random(self, rng: random.Random) -> Any:
        if rng.random() < 0.25:
            return ()
        return self._trim(
            [self.base.random_element(rng) for _ in range(rng.randint(1, 4))]
        )


class NilData(NamedTuple):
    ring: Ring
    nilpotents: frozenset
    nilindex: Optional[int]
    is_ni: bool
    is_2primal: bool
    prime_radical: frozenset
    ni_witness: Optional[Tuple[str, int, int]]


def build_ring(ring: Ring) -> Ring:
    """Validate a ring, materializing and checking its tables within the cap."""
    return ring.validate()


def ring_arith(a: RingElem, b: Optional[RingElem], op: str) -> RingElem:
    if op == 'neg':
        return -a
    assert b is not None
    if op == 'add':
        return a + b
    if op == 'mul':
        return a * b
    raise ValueError(f'Unknown operation: {op}')


def enumerate_elements(ring: Ring) -> Iterator[RingElem]:
    for x in ring.elements():
        yield RingElem(ring, x)


def is_nilpotent(r: RingElem) -> bool:
    return r.ring.is_nilpotent(r.code)


def nilpotent_mask_by_power(ring: Ring) -> np.ndarray:
    """Mask of elements with r^|R| = 0, by vectorized binary powering."""
    mul = ring.mul_table
    card = len(mul)
    result = np.full(card, ring.one, dtype=np.int64)
    base = np.arange(card)
    e = card
    while e:
        if e & 1:
            result = mul[result, base]
        base = mul[base, base]
        e >>= 1
    return result == ring.zero


def _ni_witness(ring: Ring, mask: np.ndarray) -> Optional[Tuple[str, int, int]]:
    nil = np.flatnonzero(mask)
    add, mul = ring.add_table, ring.mul_table
    checks = [
        ('sum', add[np.ix_(nil, nil)], nil, nil),
        ('left', mul[:, nil], np.arange(len(mask)), nil),
        ('right', mul[nil, :], nil, np.arange(len(mask))),
    ]
    for kind, values, rows, cols in checks:
        bad = np.argwhere(~mask[values])
        if len(bad):
            i, j = bad[0]
            return kind, int(rows[i]), int(cols[j])
    return None


def nil_data(ring: Ring) -> NilData:
    if ring.symbolic or not ring.finite:
        raise SymbolicRingUnsupported(f'{ring.description} is symbolic')
    if not hasattr(ring, '_nil_data'):
        ring.require_tables()
        mask = ring.nil_mask
        nil = np.flatnonzero(mask)
        witness = _ni_witness(ring, mask)
        is_ni = witness is None
        nilindex: Optional[int] = None
        if is_ni:
            products = nil
            nilindex = 1
            while not (products == ring.zero).all():
                products = np.unique(ring.mul_table[np.ix_(products, nil)])
                nilindex += 1
                assert nilindex <= len(mask)
        mul, add, neg = ring.mul_table, ring.add_table, ring.neg_table
        left_invertible = (mul == ring.one).any(axis=0)
        one_minus = add[ring.one][neg[mul]]
        jacobson = left_invertible[one_minus].all(axis=0)
        nilpotents = frozenset(int(x) for x in nil)
        prime_radical = frozenset(int(x) for x in np.flatnonzero(jacobson))
        if witness:
            log.info(
                f'{ring.description} is not NI: {witness[0]} of '
                f'{ring.format(witness[1])} and {ring.format(witness[2])}'
            )
        ring._nil_data = NilData(  # type: ignore
            ring,
            nilpotents,
            nilindex,
            is_ni,
            prime_radical == nilpotents,
            prime_radical,
            witness,
        )
    return ring._nil_data  # type: ignore


def ideal_closure(ring: Ring, gens: Iterable[Value], two_sided: bool = False) -> np.ndarray:
    """Membership mask of the right (or two-sided) ideal generated by gens."""
    add, mul = ring.add_table, ring.mul_table
    mask = np.zeros(len(add), dtype=bool)
    mask[ring.zero] = True
    mask[np.fromiter(gens, dtype=np.int64)] = True
    while True:
        members = np.flatnonzero(mask)
        grown = mask.copy()
        grown[mul[members, :].ravel()] = True
        if two_sided:
            grown[mul[:, members].ravel()] = True
        members = np.flatnonzero(grown)
        grown[add[np.ix_(members, members)].ravel()] = True
        if (grown == mask).all():
            return mask
        mask = grown
