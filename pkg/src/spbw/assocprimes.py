# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.
"""Right ideals, quasi-prime ideals and nilpotent associated primes."""
from __future__ import annotations

import logging
from typing import Any, Dict, FrozenSet, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .config import Config
from .errors import (
    CardinalityOverCap,
    DescentStuck,
    HypothesisNotCertified,
    NotNI,
    PreconditionNilpotent,
    SymbolicRingUnsupported,
)
from .finring import Ring, Value, ideal_closure, nil_data
from .nilweak import _ann_mask, _brute_mask, _candidates, _coefficient_mask
from .spbwalg import ExtensionSpec, Monomial, SkewPoly, deglex_key, random_poly
from .utils import seeded

__version__ = '0.1.0'
__all__ = [
    'RightIdeal',
    'QuasiPrimeCert',
    'NdegData',
    'GoodResult',
    'NassExtReport',
    'DescentReport',
    'enumerate_right_ideals',
    'quasi_prime_check',
    'nass_ring',
    'ndeg',
    'is_nilpotent_good',
    'make_nilpotent_good',
    'verify_nass_extension',
    'verify_good_descent',
    'lattice_dot',
]

log = logging.getLogger(__name__)


class RightIdeal(NamedTuple):
    ring: Ring
    elements: FrozenSet[Value]
    generators: Tuple[Value, ...]

    def __str__(self) -> str:
        gens = ', '.join(self.ring.format(g) for g in self.generators) or '0'
        return f'<{gens}>'

    def mask(self) -> np.ndarray:
        m = np.zeros(self.ring.cardinality, dtype=bool)  # type: ignore
        m[np.fromiter(self.elements, dtype=np.int64)] = True
        return m


def _minimize(ring: Ring, gens: Sequence[Value], target: np.ndarray) -> Tuple[Value, ...]:
    kept = list(gens)
    for g in list(kept):
        rest = [h for h in kept if h != g]
        if (ideal_closure(ring, rest) == target).all():
            kept = rest
    return tuple(kept)


def enumerate_right_ideals(ring: Ring, force: bool = False) -> List[RightIdeal]:
    """All right ideals, by adjoining one element at a time and closing."""
    if ring.symbolic or not ring.finite:
        raise SymbolicRingUnsupported(f'{ring.description} is symbolic')
    cap = Config().ideal_cap
    card = ring.cardinality
    assert card is not None
    if card > cap and not force:
        raise CardinalityOverCap(
            f'{ring.description} has {card} elements, above the ideal cap of {cap}',
            card,
            cap,
        )
    if not hasattr(ring, '_right_ideals'):
        seen: Dict[FrozenSet[Value], Tuple[Value, ...]] = {frozenset([ring.zero]): ()}
        queue = [frozenset([ring.zero])]
        while queue:
            ideal = queue.pop()
            for a in ring.elements():
                if a in ideal:
                    continue
                gens = (*seen[ideal], a)
                grown = frozenset(
                    int(x) for x in np.flatnonzero(ideal_closure(ring, [*ideal, a]))
                )
                if grown not in seen:
                    seen[grown] = gens
                    queue.append(grown)
        lattice = []
        for elements, gens in seen.items():
            target = np.zeros(card, dtype=bool)
            target[np.fromiter(elements, dtype=np.int64)] = True
            lattice.append(RightIdeal(ring, elements, _minimize(ring, gens, target)))
        lattice.sort(key=lambda i: (len(i.elements), sorted(i.elements)))
        log.debug(f'{ring.description}: {len(lattice)} right ideals')
        ring._right_ideals = lattice  # type: ignore
    return ring._right_ideals  # type: ignore


def _annihilator(ring: Ring, elements: FrozenSet[Value]) -> FrozenSet[Value]:
    return frozenset(int(a) for a in np.flatnonzero(_ann_mask(ring, sorted(elements))))


class QuasiPrimeCert(NamedTuple):
    ideal: RightIdeal
    is_quasi_prime: bool
    annihilator: FrozenSet[Value]
    witness: Optional[RightIdeal]


def quasi_prime_check(
    ideal: RightIdeal, lattice: Optional[Sequence[RightIdeal]] = None
) -> QuasiPrimeCert:
    """Whether I ⊄ N(R) and N_R(I') = N_R(I) for every I' ⊆ I with I' ⊄ N(R)."""
    ring = ideal.ring
    nilpotents = nil_data(ring).nilpotents
    annihilator = _annihilator(ring, ideal.elements)
    if ideal.elements <= nilpotents:
        return QuasiPrimeCert(ideal, False, annihilator, None)
    if lattice is None:
        lattice = enumerate_right_ideals(ring, force=True)
    for sub in lattice:
        if not sub.elements <= ideal.elements or sub.elements <= nilpotents:
            continue
        if _annihilator(ring, sub.elements) != annihilator:
            return QuasiPrimeCert(ideal, False, annihilator, sub)
    return QuasiPrimeCert(ideal, True, annihilator, None)


def nass_ring(ring: Ring, force: bool = False) -> List[FrozenSet[Value]]:
    """NAss(R) = {N_R(I) : I quasi-prime}, ordered by size and elements."""
    nd = nil_data(ring)
    if not nd.is_ni:
        raise NotNI(f'N({ring.description}) is not an ideal', nd.ni_witness)
    lattice = enumerate_right_ideals(ring, force)
    primes = {
        cert.annihilator
        for cert in (quasi_prime_check(i, lattice) for i in lattice)
        if cert.is_quasi_prime
    }
    return sorted(primes, key=lambda p: (len(p), sorted(p)))


class NdegData(NamedTuple):
    poly: SkewPoly
    ndeg: int
    monomial: Optional[Monomial]
    is_good: bool


def ndeg(f: SkewPoly) -> NdegData:
    """Nilpotent degree over the ascending deglex support of f."""
    ring = f.ext.ring
    ring.require_tables()
    support = f.support()
    coeffs = [f.terms[m] for m in support]
    mask = ring.nil_mask
    k = max((i for i, c in enumerate(coeffs) if not mask[c]), default=-1)
    if k < 0:
        return NdegData(f, -1, None, True)
    top = _ann_mask(ring, [coeffs[k]])
    good = all(not (top & ~_ann_mask(ring, [c])).any() for c in coeffs[: k + 1])
    return NdegData(f, k, support[k], good)


def is_nilpotent_good(f: SkewPoly) -> bool:
    return ndeg(f).is_good


class GoodResult(NamedTuple):
    r: Value
    fr: SkewPoly
    steps: int


def _certified(ext: ExtensionSpec) -> None:
    cert = ext.certificate
    if not (cert.ni and cert.compatible):
        raise HypothesisNotCertified(
            f'{ext.name}: needs a (Σ,Δ)-compatible NI ring '
            f'(NI: {cert.ni}, compatible: {cert.compatible})'
        )


def make_nilpotent_good(f: SkewPoly) -> GoodResult:
    """Find r with fr nilpotent good by descending on the nilpotent degree."""
    ext, ring = f.ext, f.ext.ring
    _certified(ext)
    data = ndeg(f)
    if data.ndeg < 0:
        raise PreconditionNilpotent(f'{f} has only nilpotent coefficients')
    r, current, steps = ring.one, f, 0
    while not data.is_good:
        coeffs = [current.terms[m] for m in current.support()]
        top = _ann_mask(ring, [coeffs[data.ndeg]])
        i = next(
            i
            for i, c in enumerate(coeffs[: data.ndeg + 1])
            if (top & ~_ann_mask(ring, [c])).any()
        )
        b = int(np.flatnonzero(top & ~_ann_mask(ring, [coeffs[i]]))[0])
        r = ring.mul(r, b)
        current = current * ext.constant(b)
        steps += 1
        new = ndeg(current)
        if new.ndeg < 0 or deglex_key(new.monomial) >= deglex_key(data.monomial):  # type: ignore
            raise DescentStuck(
                f'multiplying {f} by {ring.format(b)} does not lower the nilpotent degree',
                (str(current), b),
            )
        log.debug(f'descent step {steps}: b = {ring.format(b)}, Ndeg at {new.monomial}')
        data = new
    return GoodResult(r, current, steps)


class NassExtReport(NamedTuple):
    primes: List[FrozenSet[Value]]
    forward: List[Tuple[FrozenSet[Value], bool, Optional[Tuple[Value, ...]]]]
    backward: List[Tuple[str, FrozenSet[Value], bool]]
    degree_bound: int
    seed: int

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.forward) and all(ok for *_, ok in self.backward)


def verify_nass_extension(
    ext: ExtensionSpec, degree: int, trials: int = 20, seed: int = 0
) -> NassExtReport:
    """Bounded check of NAss(A) = {PA : P ∈ NAss(R)}.

    Forward: for each quasi-prime I with P = N_R(I), the polynomials g of
    degree at most ``degree`` with (iX)g ∈ N(A) for all i ∈ I and monomials
    X of that degree are exactly those with coefficients in P. Backward:
    for seeded nilpotent good m, N_R(m_k R) lies in NAss(R).
    """
    ring = ext.ring
    _certified(ext)
    primes = nass_ring(ring, force=True)
    lattice = enumerate_right_ideals(ring, force=True)
    monos, grid = _candidates(ext, degree)
    forward = []
    for ideal in lattice:
        cert = quasi_prime_check(ideal, lattice)
        if not cert.is_quasi_prime:
            continue
        members = [
            ext.monomial(m, i) for i in sorted(ideal.elements) if i != ring.zero for m in monos
        ]
        alive = _brute_mask(ext, members, monos, grid)
        p_mask = np.zeros(ring.cardinality, dtype=bool)  # type: ignore
        p_mask[np.fromiter(cert.annihilator, dtype=np.int64)] = True
        bad = np.flatnonzero(alive != _coefficient_mask(grid, p_mask))
        witness = tuple(int(c) for c in grid[bad[0]]) if len(bad) else None
        if witness:
            log.info(f'forward check fails for {ideal} at candidate {witness}')
        forward.append((cert.annihilator, witness is None, witness))
    rng = seeded(seed, 'nass')
    mask = ring.nil_mask
    backward = []
    for _ in range(trials):
        m = random_poly(ext, rng, degree)
        if all(mask[c] for c in m.terms.values()):
            continue
        good = make_nilpotent_good(m).fr
        data = ndeg(good)
        lead = good.terms[data.monomial]  # type: ignore
        right = sorted(int(x) for x in np.flatnonzero(ideal_closure(ring, [lead])))
        p = _annihilator(ring, frozenset(right))
        backward.append((str(good), p, p in primes))
    return NassExtReport(primes, forward, backward, degree, seed)


def lattice_dot(lattice: Sequence[RightIdeal], *args: Any, **kwargs: Any) -> Any:
    """Hasse diagram of the right-ideal lattice, quasi-prime ideals filled."""
    from graphviz import Digraph  # type: ignore

    dot = Digraph(*args, **kwargs)
    ids = {ideal.elements: f'I{k}' for k, ideal in enumerate(lattice)}
    for ideal in lattice:
        cert = quasi_prime_check(ideal, lattice)
        label = f'{ideal} ({len(ideal.elements)})'
        if cert.is_quasi_prime:
            dot.node(ids[ideal.elements], label, style='filled', fillcolor='lightblue')
        else:
            dot.node(ids[ideal.elements], label)
    for small in lattice:
        for big in lattice:
            if not small.elements < big.elements:
                continue
            covered = any(
                small.elements < mid.elements < big.elements for mid in lattice
            )
            if not covered:
                dot.edge(ids[small.elements], ids[big.elements])
    return dot


class DescentReport(NamedTuple):
    trials: int
    seed: int
    steps: List[int]
    failures: List[Tuple[str, str]]

    @property
    def ok(self) -> bool:
        return not self.failures


def verify_good_descent(
    ext: ExtensionSpec, trials: int = 100, seed: int = 0, degree: int = 2
) -> DescentReport:
    """Run make_nilpotent_good on seeded f outside N(R)A."""
    _certified(ext)
    mask = ext.ring.nil_mask
    rng = seeded(seed, 'descent')
    steps: List[int] = []
    failures: List[Tuple[str, str]] = []
    while len(steps) + len(failures) < trials:
        f = random_poly(ext, rng, degree)
        if all(mask[c] for c in f.terms.values()):
            continue
        try:
            result = make_nilpotent_good(f)
        except DescentStuck as exc:
            failures.append((str(f), str(exc)))
            continue
        if not is_nilpotent_good(result.fr):
            failures.append((str(f), 'result is not nilpotent good'))
        elif all(mask[c] for c in result.fr.terms.values()):
            failures.append((str(f), 'result lies in N(R)A'))
        else:
            steps.append(result.steps)
    return DescentReport(trials, seed, steps, failures)
