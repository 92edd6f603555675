# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.
"""Endomorphisms and σ-derivations of coefficient rings.

Maps are given by generator images and extended to the whole ring through
the generator-word decomposition of each element. On tabulated rings the
induced tables are checked exhaustively against the homomorphism and
Leibniz laws, and the compatibility checkers work on whole tables at once.
"""
from __future__ import annotations

import logging
from typing import (
    Dict,
    Iterator,
    List,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np

from .config import Config
from .errors import (
    GeneratorImageMissing,
    LawViolation,
    MalformedPreset,
    MixedRings,
    NotADerivation,
    NotAHomomorphism,
    NotAnIdeal,
    SymbolicNeedsSampledMode,
)
from .finring import Ring, Value, Word
from .utils import compositions, seeded

__version__ = '0.1.0'
__all__ = [
    'RingMap',
    'Derivation',
    'Witness',
    'CompatReport',
    'LawVerdict',
    'build_map',
    'build_derivation',
    'identity_map',
    'zero_derivation',
    'check_compatibility',
    'check_compatible_ideal',
    'derived_law_suite',
    'commuting_family',
]

log = logging.getLogger(__name__)


class _TableMap:
    ring: Ring
    name: str

    def __init__(self, ring: Ring, name: str) -> None:
        self.ring = ring
        self.name = name
        self._cache: Dict[Value, Value] = {}

    def _evaluate(self, x: Value) -> Value:
        raise NotImplementedError

    def __call__(self, x: Value) -> Value:
        if self.ring.tabulated:
            return self._values[x]  # type: ignore
        if x not in self._cache:
            self._cache[x] = self._evaluate(x)
        return self._cache[x]

    @property
    def _values(self) -> List[Value]:
        if not hasattr(self, '_value_list'):
            self._value_list = [self._evaluate(x) for x in self.ring.elements()]
        return self._value_list

    @property
    def table(self) -> np.ndarray:
        """Full value table indexed by element code."""
        self.ring.require_tables()
        if not hasattr(self, '_table'):
            self._table = np.array(self._values, dtype=np.int64)
        return self._table

    def __repr__(self) -> str:
        return f'<{self.__class__.__name__} {self.name} on {self.ring.description}>'


class RingMap(_TableMap):
    """Ring endomorphism determined by the images of the ring's generators."""

    def __init__(self, ring: Ring, images: Dict[str, Value], name: str = 'sigma') -> None:
        super().__init__(ring, name)
        self.images = images

    def _evaluate(self, x: Value) -> Value:
        ring = self.ring
        result = ring.zero
        for k, word in ring.decompose(x):
            term = ring.from_int(k)
            for g in word:
                term = ring.mul(term, self.images[g])
            result = ring.add(result, term)
        return result

    @classmethod
    def from_table(cls, ring: Ring, table: np.ndarray, name: str) -> RingMap:
        images = {g: int(table[v]) for g, v in ring.generators().items()}
        sigma = cls(ring, images, name)
        sigma._value_list = table.tolist()
        sigma._table = table
        return sigma

    @property
    def is_identity(self) -> bool:
        return all(self.images[g] == v for g, v in self.ring.generators().items())

    @property
    def injective(self) -> Optional[bool]:
        """Injectivity, known on tabulated rings only."""
        if not self.ring.tabulated:
            return None
        if not hasattr(self, '_injective'):
            self._injective = len(np.unique(self.table)) == len(self.table)
            if not self._injective:
                log.warning(f'{self.name} is not injective on {self.ring.description}')
        return self._injective

    def compose(self, other: RingMap) -> RingMap:
        """The map x ↦ self(other(x))."""
        if other.ring is not self.ring:
            raise MixedRings(f'{self.name} and {other.name} act on different rings')
        name = f'{self.name}*{other.name}'
        if self.ring.tabulated:
            return RingMap.from_table(self.ring, self.table[other.table], name)
        images = {g: self(other.images[g]) for g in self.ring.generators()}
        return RingMap(self.ring, images, name)

    def power(self, k: int) -> RingMap:
        result = identity_map(self.ring)
        for _ in range(k):
            result = self.compose(result)
        return result


class Derivation(_TableMap):
    """σ-derivation extended from generator images by the Leibniz rule."""

    def __init__(
        self, ring: Ring, sigma: RingMap, images: Dict[str, Value], name: str = 'delta'
    ) -> None:
        super().__init__(ring, name)
        self.sigma = sigma
        self.images = images

    def _word(self, word: Word) -> Value:
        ring = self.ring
        gens = ring.generators()
        result = ring.zero
        for l, g in enumerate(word):
            prefix = ring.one
            for h in word[:l]:
                prefix = ring.mul(prefix, self.sigma.images[h])
            suffix = ring.one
            for h in word[l + 1 :]:
                suffix = ring.mul(suffix, gens[h])
            result = ring.add(result, ring.mul(ring.mul(prefix, self.images[g]), suffix))
        return result

    def _evaluate(self, x: Value) -> Value:
        ring = self.ring
        result = ring.zero
        for k, word in ring.decompose(x):
            result = ring.add(result, ring.times_int(k, self._word(word)))
        return result

    @property
    def is_zero(self) -> bool:
        return all(v == self.ring.zero for v in self.images.values())


def _check_images(ring: Ring, images: Dict[str, Value], what: str) -> None:
    gens = ring.generators()
    missing = [g for g in gens if g not in images]
    if missing:
        raise GeneratorImageMissing(
            f'{what}: no image for generator(s) {", ".join(missing)} '
            f'of {ring.description}'
        )
    unknown = [g for g in images if g not in gens]
    if unknown:
        raise MalformedPreset(
            f'{what}: {", ".join(unknown)} not a generator of {ring.description}'
        )


def build_map(ring: Ring, images: Dict[str, Value], name: str = 'sigma') -> RingMap:
    """Build an endomorphism and verify it exhaustively on tabulated rings."""
    _check_images(ring, images, name)
    sigma = RingMap(ring, images, name)
    if not ring.tabulated:
        return sigma
    add, mul, t = ring.add_table, ring.mul_table, sigma.table
    if t[ring.one] != ring.one:
        raise NotAHomomorphism(f'{name} does not fix 1', (ring.one,))
    for law, lhs, rhs in [
        ('additive', t[add], add[t[:, None], t[None, :]]),
        ('multiplicative', t[mul], mul[t[:, None], t[None, :]]),
    ]:
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            a, b = (int(v) for v in bad[0])
            raise NotAHomomorphism(
                f'{name} is not {law}: fails at '
                f'{ring.format(a)}, {ring.format(b)}',
                (a, b),
            )
    return sigma


def build_derivation(
    ring: Ring, sigma: RingMap, images: Dict[str, Value], name: str = 'delta'
) -> Derivation:
    """Build a σ-derivation and verify the Leibniz rule on tabulated rings."""
    if sigma.ring is not ring:
        raise MixedRings(f'{name}: {sigma.name} acts on a different ring')
    _check_images(ring, images, name)
    delta = Derivation(ring, sigma, images, name)
    if not ring.tabulated:
        return delta
    add, mul, d, s = ring.add_table, ring.mul_table, delta.table, sigma.table
    idx = np.arange(len(d))
    leibniz = add[mul[s[:, None], d[None, :]], mul[d[:, None], idx[None, :]]]
    for law, lhs, rhs in [
        ('additive', d[add], add[d[:, None], d[None, :]]),
        ('a sigma-derivation', d[mul], leibniz),
    ]:
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            a, b = (int(v) for v in bad[0])
            raise NotADerivation(
                f'{name} is not {law}: fails at {ring.format(a)}, {ring.format(b)}',
                (a, b),
            )
    return delta


def identity_map(ring: Ring) -> RingMap:
    sigma = RingMap(ring, dict(ring.generators()), 'id')
    if ring.tabulated:
        sigma._table = np.arange(ring.cardinality)  # type: ignore
        sigma._value_list = list(range(ring.cardinality))  # type: ignore
    return sigma


def zero_derivation(ring: Ring, sigma: RingMap) -> Derivation:
    return Derivation(ring, sigma, {g: ring.zero for g in ring.generators()}, '0')


class Witness(NamedTuple):
    law: str
    index: int
    a: Value
    b: Value


class CompatReport(NamedTuple):
    verdicts: Dict[str, bool]
    witnesses: Dict[str, Witness]
    mode: str
    samples: Optional[int] = None
    seed: Optional[int] = None

    @property
    def ok(self) -> bool:
        return all(self.verdicts.values())


class LawVerdict(NamedTuple):
    law: str
    theta: Tuple[int, ...]
    beta: Tuple[int, ...]
    holds: bool
    witness: Optional[Tuple[Value, Value]]


def _same_ring(ring: Ring, maps: Sequence[_TableMap]) -> None:
    for m in maps:
        if m.ring is not ring:
            raise MixedRings(f'{m.name} does not act on {ring.description}')


def _first(mask: np.ndarray) -> Optional[Tuple[int, int]]:
    bad = np.argwhere(mask)
    if not len(bad):
        return None
    return int(bad[0][0]), int(bad[0][1])


def _sigma_violation(
    mul: np.ndarray, member: np.ndarray, table: np.ndarray
) -> Optional[Tuple[int, int]]:
    before = member[mul]
    after = member[mul[:, table]]
    return _first(after & ~before) or _first(before & ~after)


def _delta_violation(
    mul: np.ndarray, member: np.ndarray, table: np.ndarray
) -> Optional[Tuple[int, int]]:
    return _first(member[mul] & ~member[mul[:, table]])


def _table_verdicts(
    ring: Ring,
    member: np.ndarray,
    sigmas: Sequence[RingMap],
    deltas: Sequence[Derivation],
    sigma_key: str,
    delta_key: str,
) -> Tuple[Dict[str, bool], Dict[str, Witness]]:
    mul = ring.mul_table
    verdicts = {sigma_key: True, delta_key: True}
    witnesses: Dict[str, Witness] = {}
    for key, maps, check in [
        (sigma_key, sigmas, _sigma_violation),
        (delta_key, deltas, _delta_violation),
    ]:
        for i, m in enumerate(maps):
            pair = check(mul, member, m.table)  # type: ignore
            if pair:
                verdicts[key] = False
                witnesses[key] = Witness(key, i, *pair)
                log.info(
                    f'{key} fails for {m.name}: a = {ring.format(pair[0])}, '
                    f'b = {ring.format(pair[1])}'
                )
                break
    return verdicts, witnesses


def _sampled_pairs(ring: Ring, samples: int, seed: int) -> Iterator[Tuple[Value, Value]]:
    rng = seeded(seed, 'compat', ring.description)
    for _ in range(samples):
        yield ring.random_element(rng), ring.random_element(rng)


def _sampled_verdicts(
    ring: Ring,
    sigmas: Sequence[RingMap],
    deltas: Sequence[Derivation],
    samples: int,
    seed: int,
) -> Tuple[Dict[str, bool], Dict[str, Witness]]:
    checks = [
        ('sigma_compatible', sigmas, lambda x: x == ring.zero, True),
        ('delta_compatible', deltas, lambda x: x == ring.zero, False),
        ('weak_sigma', sigmas, ring.is_nilpotent, True),
        ('weak_delta', deltas, ring.is_nilpotent, False),
    ]
    verdicts = {key: True for key, *_ in checks}
    witnesses: Dict[str, Witness] = {}
    for a, b in _sampled_pairs(ring, samples, seed):
        ab = ring.mul(a, b)
        for key, maps, member, both_ways in checks:
            if not verdicts[key]:
                continue
            before = member(ab)
            for i, m in enumerate(maps):
                after = member(ring.mul(a, m(b)))
                if (before and not after) or (both_ways and after and not before):
                    verdicts[key] = False
                    witnesses[key] = Witness(key, i, a, b)
                    log.info(f'{key} fails for {m.name} on a sampled pair')
                    break
    return verdicts, witnesses


def check_compatibility(
    ring: Ring,
    sigmas: Sequence[RingMap],
    deltas: Sequence[Derivation],
    mode: str = 'exhaustive',
    samples: Optional[int] = None,
    seed: Optional[int] = None,
) -> CompatReport:
    """Check strict and weak (Σ,Δ)-compatibility against the generating maps.

    :param mode: 'exhaustive' over all pairs, or 'sampled' over seeded pairs
    """
    _same_ring(ring, [*sigmas, *deltas])
    if mode == 'sampled':
        if samples is None or seed is None:
            config = Config()
            samples = samples or config.samples
            seed = config.seed if seed is None else seed
        verdicts, witnesses = _sampled_verdicts(ring, sigmas, deltas, samples, seed)
        return CompatReport(verdicts, witnesses, mode, samples, seed)
    if not ring.tabulated:
        raise SymbolicNeedsSampledMode(
            f'{ring.description} has no tables; use sampled mode'
        )
    idx = np.arange(ring.cardinality)  # type: ignore
    verdicts, witnesses = _table_verdicts(
        ring, idx == ring.zero, sigmas, deltas, 'sigma_compatible', 'delta_compatible'
    )
    weak_verdicts, weak_witnesses = _table_verdicts(
        ring, ring.nil_mask, sigmas, deltas, 'weak_sigma', 'weak_delta'
    )
    verdicts.update(weak_verdicts)
    witnesses.update(weak_witnesses)
    return CompatReport(verdicts, witnesses, mode)


def ideal_mask(ring: Ring, ideal: Sequence[Value]) -> np.ndarray:
    """Membership mask of a two-sided ideal, verified elementwise."""
    mask = np.zeros(ring.cardinality, dtype=bool)  # type: ignore
    mask[np.fromiter(ideal, dtype=np.int64)] = True
    members = np.flatnonzero(mask)
    if not mask[ring.zero]:
        raise NotAnIdeal('the set does not contain 0', ('zero', ring.zero, ring.zero))
    idx = np.arange(len(mask))
    add, mul = ring.add_table, ring.mul_table
    for kind, values, rows, cols in [
        ('sum', add[np.ix_(members, members)], members, members),
        ('left', mul[:, members], idx, members),
        ('right', mul[members, :], members, idx),
    ]:
        pair = _first(~mask[values])
        if pair:
            a, b = int(rows[pair[0]]), int(cols[pair[1]])
            raise NotAnIdeal(
                f'the set is not closed under {kind} products: '
                f'{ring.format(a)}, {ring.format(b)}',
                (kind, a, b),
            )
    return mask


def check_compatible_ideal(
    ring: Ring,
    ideal: Sequence[Value],
    sigmas: Sequence[RingMap],
    deltas: Sequence[Derivation],
) -> CompatReport:
    _same_ring(ring, [*sigmas, *deltas])
    ring.require_tables()
    mask = ideal_mask(ring, ideal)
    verdicts, witnesses = _table_verdicts(
        ring, mask, sigmas, deltas, 'sigma_compatible', 'delta_compatible'
    )
    return CompatReport(verdicts, witnesses, 'exhaustive')


def _multi(tables: Sequence[np.ndarray], exps: Tuple[int, ...], size: int) -> np.ndarray:
    """Table of m_1^e_1 ∘ … ∘ m_n^e_n, the last map applied first."""
    t = np.arange(size)
    for table, e in reversed(list(zip(tables, exps))):
        for _ in range(e):
            t = table[t]
    return t


def derived_law_suite(
    ring: Ring,
    sigmas: Sequence[RingMap],
    deltas: Sequence[Derivation],
    kind: str = 'strict',
    ideal: Optional[Sequence[Value]] = None,
    max_order: int = 2,
) -> List[LawVerdict]:
    """Re-derive the consequences of compatibility for composite maps.

    The laws are checked for all multi-indices θ, β with |θ|, |β| at most
    ``max_order``. When the generating maps certify compatibility of the
    chosen kind, any failing law raises :class:`LawViolation`.

    :param kind: 'strict' (membership in {0}), 'weak' (membership in N(R))
        or 'ideal' (membership in a given compatible ideal)
    """
    _same_ring(ring, [*sigmas, *deltas])
    if not ring.tabulated:
        raise SymbolicNeedsSampledMode(f'{ring.description} has no tables')
    card = ring.cardinality
    assert card is not None
    idx = np.arange(card)
    if kind == 'strict':
        member = idx == ring.zero
        report = check_compatibility(ring, sigmas, deltas)
        certified = report.verdicts['sigma_compatible'] and report.verdicts['delta_compatible']
    elif kind == 'weak':
        member = ring.nil_mask
        report = check_compatibility(ring, sigmas, deltas)
        certified = report.verdicts['weak_sigma'] and report.verdicts['weak_delta']
    elif kind == 'ideal':
        assert ideal is not None
        report = check_compatible_ideal(ring, ideal, sigmas, deltas)
        member = ideal_mask(ring, ideal)
        certified = report.ok
    else:
        raise ValueError(f'Unknown law kind: {kind}')
    mul = ring.mul_table
    product = member[mul]
    n_sigma, n_delta = len(sigmas), len(deltas)
    sigma_tables = [s.table for s in sigmas]
    delta_tables = [d.table for d in deltas]
    thetas = list(compositions(n_sigma, max_order)) if n_sigma else [()]
    betas = list(compositions(n_delta, max_order)) if n_delta else [()]
    verdicts: List[LawVerdict] = []

    def record(law: str, theta: Tuple[int, ...], beta: Tuple[int, ...], bad: np.ndarray) -> None:
        pair = _first(bad)
        verdicts.append(LawVerdict(law, theta, beta, pair is None, pair))
        if pair and certified:
            a, b = pair
            raise LawViolation(
                f'{kind} law "{law}" fails for theta={theta}, beta={beta} '
                f'at {ring.format(a)}, {ring.format(b)}',
                (law, theta, beta, a, b),
            )

    for theta in thetas:
        s = _multi(sigma_tables, theta, card)
        right = member[mul[:, s]]
        left = member[mul[s, :]]
        record('ab in I => a s(b) in I', theta, (), product & ~right)
        record('ab in I => s(a) b in I', theta, (), product & ~left)
        record('a s(b) in I => ab in I', theta, (), right & ~product)
        record('s(a) b in I => ab in I', theta, (), left & ~product)
        for beta in betas:
            d = _multi(delta_tables, beta, card)
            record(
                'ab in I => s(a) d(b) in I',
                theta,
                beta,
                product & ~member[mul[s[:, None], d[None, :]]],
            )
            record(
                'ab in I => d(a) s(b) in I',
                theta,
                beta,
                product & ~member[mul[d[:, None], s[None, :]]],
            )
    failed = sum(not v.holds for v in verdicts)
    log.debug(f'{kind} law suite: {len(verdicts)} laws, {failed} failed')
    return verdicts


def commuting_family(maps: Sequence[RingMap]) -> Optional[Tuple[int, int, Value]]:
    """Return (i, j, x) with σ_i σ_j (x) ≠ σ_j σ_i (x), or None.

    Pairwise commutation makes σ^α independent of the composition order.
    """
    for i, si in enumerate(maps):
        for j in range(i + 1, len(maps)):
            sj = maps[j]
            if si.ring.tabulated:
                bad = np.flatnonzero(si.table[sj.table] != sj.table[si.table])
                if len(bad):
                    return i, j, int(bad[0])
            else:
                for g, v in si.ring.generators().items():
                    if si(sj(v)) != sj(si(v)):
                        return i, j, v
    return None
