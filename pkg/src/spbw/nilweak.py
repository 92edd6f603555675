# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.
"""Nilpotent polynomials and weak annihilators.

The weak annihilator of X ⊆ R is N_R(X) = {a : xa ∈ N(R) for all x ∈ X}.
On the extension side, annihilators are computed on the finite set of
polynomials with support among the monomials of degree at most D, either
through the coefficient identity N_A(U) = N_R(C_U)A or by enumerating all
candidates.
"""
from __future__ import annotations

import logging
import random
from itertools import product
from typing import (
    Any,
    Callable,
    FrozenSet,
    List,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np

from .errors import (
    EmptyTarget,
    EnumerationOverCap,
    HypothesisFailedRingSide,
    HypothesisNotCertified,
    LawViolation,
    MixedExtensions,
    NotAnIdeal,
    OracleBudgetExceeded,
    PreconditionNilpotent,
    SymbolicRingUnsupported,
)
from .finring import Ring, Value, ideal_closure, nil_data
from .ringmaps import ideal_mask
from .spbwalg import ExtensionSpec, Monomial, SkewPoly, random_poly
from .utils import compositions, seeded

__version__ = '0.1.0'
__all__ = [
    'AnnReport',
    'TrialResult',
    'TheoremReport',
    'GaloisReport',
    'ArmendarizReport',
    'NilradicalReport',
    'is_nilpotent_poly',
    'weak_annihilator_ring',
    'weak_annihilator_ext',
    'principal_nilpotent_generator',
    'verify_theorem_3x',
    'pi_armendariz_check',
    'galois_laws',
    'verify_nilradical',
]

log = logging.getLogger(__name__)

ENUMERATION_CAP = 1 << 16
AUDIT_SAMPLES = 32


class AnnReport(NamedTuple):
    query: str
    method: str
    annihilator: Optional[FrozenSet[Value]]
    generator: Optional[Value]
    degree_bound: Optional[int] = None
    witnesses: Tuple[Tuple[Value, ...], ...] = ()
    brute: Optional[FrozenSet[Tuple[Value, ...]]] = None
    contains: Optional[Callable[[Value], bool]] = None

    @property
    def agree(self) -> bool:
        return not self.witnesses


def _require_tables(ring: Ring) -> None:
    if ring.symbolic or not ring.finite:
        raise SymbolicRingUnsupported(f'{ring.description} is symbolic')
    ring.require_tables()


def _criterion_certified(ext: ExtensionSpec) -> None:
    cert = ext.certificate
    if not (cert.ni and cert.weak):
        raise HypothesisNotCertified(
            f'{ext.name}: the nilpotency criterion needs a weak compatible NI ring '
            f'(NI: {cert.ni}, weak: {cert.weak})'
        )


def _fastpath_certified(ext: ExtensionSpec) -> None:
    cert = ext.certificate
    if not (cert.ni and cert.compatible):
        raise HypothesisNotCertified(
            f'{ext.name}: needs a (Σ,Δ)-compatible NI ring '
            f'(NI: {cert.ni}, compatible: {cert.compatible})'
        )


def _compatible_ring_side(ext: ExtensionSpec) -> None:
    """The coefficient ring is NI and (Σ,Δ)-compatible, or a witness is raised."""
    cert = ext.certificate
    if cert.ni and cert.compatible:
        return
    if not cert.ni:
        witness: Any = nil_data(ext.ring).ni_witness
    else:
        witness = next(iter(cert.report.witnesses.values()), None)
    log.info(f'{ext.name}: coefficient ring fails the hypothesis, witness {witness}')
    raise HypothesisFailedRingSide(
        f'{ext.name}: the coefficient ring is not a (Σ,Δ)-compatible NI ring '
        f'(NI: {cert.ni}, compatible: {cert.compatible})',
        witness,
    )


def _oracle_budget(f: SkewPoly) -> int:
    ext = f.ext
    t = nil_data(ext.ring).nilindex or ext.ring.cardinality
    return 2 * t * (max(f.degree, 0) + 1) * ext.nvars * max(len(f.terms), 1)  # type: ignore


def _residue_chain_escapes(f: SkewPoly, budget: int) -> bool:
    """Whether the leading chain of f^m modulo N(R) avoids N(R) for m ≤ budget.

    Only meaningful when N(R) is an ideal stable under Σ and Δ, so that f
    and its powers can be read in the extension over R/N(R).
    """
    mask = f.ext.ring.nil_mask
    lead = next(((m, c) for m, c in f if not mask[c]), None)
    if lead is None:
        return False
    mono, u = lead
    gr = f.ext.graded()
    term = gr.monomial(mono, u)
    power = term
    for m in range(2, budget + 1):
        power = term * power
        top = tuple(m * e for e in mono)
        c = power.terms.get(top)
        if c is None or mask[c]:
            return False
        power = gr.monomial(top, c)
    return True


def _power_oracle(f: SkewPoly) -> Tuple[bool, bool]:
    """Return (nilpotent, exhausted)."""
    ext = f.ext
    _require_tables(ext.ring)
    if not f:
        return True, False
    budget = _oracle_budget(f)
    if ext.certificate.nil_delta_stable and _residue_chain_escapes(f, budget):
        return False, True
    power = f
    for m in range(1, budget + 1):
        if not power:
            log.debug(f'{f} vanishes at power {m}')
            return True, False
        if m < budget:
            power = power * f
    return False, True


def is_nilpotent_poly(f: SkewPoly, mode: str = 'criterion') -> bool:
    """Nilpotency of f in A.

    :param mode: 'criterion' (all coefficients in N(R), on certified
        extensions), 'oracle' (explicit powers up to a budget) or 'both'
    """
    ext = f.ext
    if mode == 'oracle':
        return _power_oracle(f)[0]
    _criterion_certified(ext)
    criterion = all(ext.ring.is_nilpotent(c) for c in f.terms.values())
    if mode == 'criterion':
        return criterion
    oracle, exhausted = _power_oracle(f)
    if criterion and not oracle:
        raise OracleBudgetExceeded(
            f'{f} did not vanish within {_oracle_budget(f)} powers', _oracle_budget(f)
        )
    if oracle and not criterion:
        raise LawViolation(f'{f} is nilpotent with a non-nilpotent coefficient', f)
    return criterion


def _ann_mask(ring: Ring, xs: Sequence[Value]) -> np.ndarray:
    mul = ring.mul_table
    if not len(xs):
        return np.ones(len(mul), dtype=bool)
    return ring.nil_mask[mul[np.asarray(xs, dtype=np.int64), :]].all(axis=0)


def principal_nilpotent_generator(ring: Ring, target: Sequence[Value]) -> Optional[Value]:
    """Least c ∈ N(R) with cR equal to the target set."""
    _require_tables(ring)
    mask = np.zeros(ring.cardinality, dtype=bool)  # type: ignore
    mask[np.fromiter(target, dtype=np.int64)] = True
    mul = ring.mul_table
    size = int(mask.sum())
    for c in sorted(nil_data(ring).nilpotents):
        row = mul[c]
        if mask[row].all() and len(np.unique(row)) == size:
            two_sided = ideal_closure(ring, [c], two_sided=True)
            if not (two_sided == mask).all():
                log.warning(
                    f'{ring.format(c)}R differs from the two-sided ideal it generates'
                )
            return c
    return None


def weak_annihilator_ring(ring: Ring, xs: Sequence[Value]) -> AnnReport:
    """N_R(X) with its least nilpotent principal generator, if any."""
    xs = list(xs)
    if not xs:
        raise EmptyTarget('the weak annihilator needs a non-empty set')
    query = '{' + ', '.join(ring.format(x) for x in xs) + '}'
    if ring.symbolic or not ring.finite:

        def contains(a: Value) -> bool:
            return all(ring.is_nilpotent(ring.mul(x, a)) for x in xs)

        return AnnReport(query, 'membership', None, None, contains=contains)
    ring.require_tables()
    mask = _ann_mask(ring, xs)
    annihilator = frozenset(int(a) for a in np.flatnonzero(mask))
    generator = principal_nilpotent_generator(ring, annihilator)
    return AnnReport(
        query,
        'brute_force',
        annihilator,
        generator,
        contains=lambda a: bool(mask[a]),
    )


def _candidates(ext: ExtensionSpec, degree: int) -> Tuple[List[Monomial], np.ndarray]:
    monos = list(compositions(ext.nvars, degree))
    card = ext.ring.cardinality
    assert card is not None
    total = card ** len(monos)
    if total > ENUMERATION_CAP:
        raise EnumerationOverCap(
            f'{total} candidates of degree at most {degree} exceed {ENUMERATION_CAP}'
        )
    log.debug(f'Enumerating {total} candidates over {len(monos)} monomials')
    grid = np.array(list(product(range(card), repeat=len(monos))), dtype=np.int64)
    return monos, grid.reshape(total, len(monos))


def _brute_mask(
    ext: ExtensionSpec, us: Sequence[SkewPoly], monos: List[Monomial], grid: np.ndarray
) -> np.ndarray:
    """Candidates g with all coefficients of u·g nilpotent for every u."""
    ring = ext.ring
    add, nil = ring.add_table, ring.nil_mask
    card = len(add)
    alive = np.ones(len(grid), dtype=bool)
    for u in us:
        products = [[u * ext.monomial(m, c) for c in range(card)] for m in monos]
        targets = sorted(
            {w for row in products for p in row for w in p.terms},
        )
        index = {w: k for k, w in enumerate(targets)}
        total = np.zeros((len(grid), len(targets)), dtype=np.int64)
        for k, row in enumerate(products):
            coeffs = np.zeros((card, len(targets)), dtype=np.int64)
            for c, p in enumerate(row):
                for w, e in p.terms.items():
                    coeffs[c, index[w]] = e
            total = add[total, coeffs[grid[:, k]]]
        alive &= nil[total].all(axis=1)
    return alive


def _audit_mask(
    ext: ExtensionSpec,
    us: Sequence[SkewPoly],
    monos: List[Monomial],
    grid: np.ndarray,
    alive: np.ndarray,
    seed: int = 0,
) -> None:
    """Recheck enumerated candidates by explicit products and the power oracle."""
    rng = seeded(seed, 'audit', ext.name, len(grid))
    picks: List[int] = []
    for side in (np.flatnonzero(alive), np.flatnonzero(~alive)):
        picks.extend(rng.sample(side.tolist(), min(AUDIT_SAMPLES // 2, len(side))))
    for k in sorted(picks):
        g = ext.zero
        for m, c in zip(monos, grid[k]):
            g = g + ext.monomial(m, int(c))
        member = all(_power_oracle(u * g)[0] for u in us)
        if member != alive[k]:
            candidate = tuple(int(c) for c in grid[k])
            raise LawViolation(
                f'candidate {g}: enumeration gives {bool(alive[k])}, '
                f'explicit powers give {member}',
                candidate,
            )
    log.debug(f'{len(picks)} enumerated candidates rechecked')


def _coefficient_mask(grid: np.ndarray, ideal: np.ndarray) -> np.ndarray:
    return ideal[grid].all(axis=1)


def _coefficients(us: Sequence[SkewPoly]) -> List[Value]:
    return sorted({c for u in us for c in u.terms.values()})


def weak_annihilator_ext(
    ext: ExtensionSpec, us: Sequence[SkewPoly], degree: int, mode: str = 'both'
) -> AnnReport:
    """N_A(U) on polynomials of degree at most ``degree``.

    :param mode: 'fastpath' (N_R(C_U)A), 'brute' (enumeration) or 'both'
    """
    us = list(us)
    if not us:
        raise EmptyTarget('the weak annihilator needs a non-empty set')
    for u in us:
        if u.ext is not ext:
            raise MixedExtensions(f'{u} does not belong to {ext.name}')
    ring = ext.ring
    _require_tables(ring)
    query = '{' + ', '.join(str(u) for u in us) + '}'
    annihilator = generator = None
    if mode in ('fastpath', 'both'):
        _fastpath_certified(ext)
        ring_side = weak_annihilator_ring(ring, _coefficients(us))
        annihilator, generator = ring_side.annihilator, ring_side.generator
        if mode == 'fastpath':
            return AnnReport(query, 'theorem_fastpath', annihilator, generator, degree)
    _criterion_certified(ext)
    monos, grid = _candidates(ext, degree)
    alive = _brute_mask(ext, us, monos, grid)
    _audit_mask(ext, us, monos, grid, alive)
    brute = frozenset(tuple(int(c) for c in g) for g in grid[alive])
    if mode == 'brute':
        return AnnReport(query, 'brute_force', None, None, degree, brute=brute)
    assert annihilator is not None
    ideal = np.zeros(ring.cardinality, dtype=bool)  # type: ignore
    ideal[np.fromiter(annihilator, dtype=np.int64)] = True
    diverging = np.flatnonzero(alive != _coefficient_mask(grid, ideal))
    witnesses = tuple(tuple(int(c) for c in grid[k]) for k in diverging[:5])
    if len(diverging):
        log.info(f'{len(diverging)} candidates diverge between fastpath and enumeration')
    return AnnReport(query, 'both_agree', annihilator, generator, degree, witnesses, brute)


class TrialResult(NamedTuple):
    target: str
    generator: Optional[Value]
    ok: bool
    witness: Optional[Tuple[Value, ...]]


class TheoremReport(NamedTuple):
    which: str
    seed: int
    degree_bound: int
    trials: List[TrialResult]

    @property
    def ok(self) -> bool:
        return all(t.ok for t in self.trials)


def _ring_hypothesis(ext: ExtensionSpec, which: str, rng: random.Random, trials: int) -> None:
    """Every weak annihilator the theorem relies on is principal by a nilpotent."""
    ring = ext.ring
    mask = ring.nil_mask
    outside = [p for p in ring.elements() if not mask[p]]
    targets: List[Tuple[List[Value], Sequence[Value]]] = []
    for p in outside:
        if which == 'principal_ideals':
            right = np.flatnonzero(ideal_closure(ring, [p]))
            targets.append(([p], right.tolist()))
        else:
            targets.append(([p], [p]))
    if which == 'subsets':
        for _ in range(trials):
            size = rng.randint(2, 3)
            xs = rng.sample(list(ring.elements()), size)
            if not all(mask[x] for x in xs):
                targets.append((xs, xs))
    for label, xs in targets:
        ann = np.flatnonzero(_ann_mask(ring, list(xs)))
        if principal_nilpotent_generator(ring, ann.tolist()) is None:
            shown = ', '.join(ring.format(x) for x in label)
            log.info(f'N_R of {{{shown}}} is not generated by a nilpotent element')
            raise HypothesisFailedRingSide(
                f'{ext.name}: the weak annihilator of {{{shown}}} is not '
                f'generated by a nilpotent element',
                tuple(label),
            )


def _random_target(
    ext: ExtensionSpec, rng: random.Random, which: str, degree: int
) -> List[SkewPoly]:
    mask = ext.ring.nil_mask
    while True:
        size = rng.randint(1, 3) if which == 'subsets' else 1
        us = [random_poly(ext, rng, degree) for _ in range(size)]
        if any(not mask[c] for u in us for c in u.terms.values()):
            return us


def _recipe_generator(ext: ExtensionSpec, which: str, us: Sequence[SkewPoly]) -> Value:
    """The ring-side c with N_A(target) = cA, as chosen in the proofs."""
    ring = ext.ring
    mask = ring.nil_mask
    if which == 'subsets':
        xs: Sequence[Value] = _coefficients(us)
    else:
        (f,) = us
        a = next(c for _, c in f if not mask[c])
        if which == 'principal_ideals':
            xs = np.flatnonzero(ideal_closure(ring, [a])).tolist()
        else:
            xs = [a]
    ann = np.flatnonzero(_ann_mask(ring, list(xs))).tolist()
    c = principal_nilpotent_generator(ring, ann)
    assert c is not None
    return c


def verify_theorem_3x(
    ext: ExtensionSpec,
    which: str,
    trials: int = 20,
    seed: int = 0,
    degree: int = 1,
    targets: Optional[Sequence[Sequence[SkewPoly]]] = None,
) -> TheoremReport:
    """Check that weak annihilators in A are generated by a nilpotent constant.

    :param which: 'subsets', 'principal_ideals' or 'single_elements'
    :param targets: explicit targets instead of seeded random ones
    """
    if which not in ('subsets', 'principal_ideals', 'single_elements'):
        raise ValueError(f'Unknown theorem: {which}')
    ring = ext.ring
    _require_tables(ring)
    rng = seeded(seed, 'theorem', which)
    _ring_hypothesis(ext, which, rng, trials)
    _compatible_ring_side(ext)
    mask = ring.nil_mask
    if targets is None:
        targets = [_random_target(ext, rng, which, min(degree, 1)) for _ in range(trials)]
    monos, grid = _candidates(ext, degree)
    results = []
    for us in targets:
        if all(mask[c] for u in us for c in u.terms.values()):
            raise PreconditionNilpotent(
                f'{{{", ".join(map(str, us))}}} lies in N(A), outside the theorem'
            )
        c = _recipe_generator(ext, which, us)
        if which == 'principal_ideals':
            (f,) = us
            members = list({f * ext.constant(r) for r in ring.elements()} - {ext.zero})
        else:
            members = list(us)
        alive = _brute_mask(ext, members, monos, grid)
        _audit_mask(ext, members, monos, grid, alive, seed)
        generated = _coefficient_mask(grid, ideal_closure(ring, [c]))
        fastpath = _coefficient_mask(
            grid, _ann_mask(ring, _coefficients(members))
        )
        bad = np.flatnonzero((alive != generated) | (alive != fastpath))
        witness = tuple(int(v) for v in grid[bad[0]]) if len(bad) else None
        label = '{' + ', '.join(str(u) for u in us) + '}'
        if witness:
            log.info(f'{which}: {label} fails with candidate {witness}')
        results.append(TrialResult(label, c, witness is None, witness))
    return TheoremReport(which, seed, degree, results)


class ArmendarizReport(NamedTuple):
    trials: int
    seed: int
    counterexamples: List[Tuple[str, str]]

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def pi_armendariz_check(ext: ExtensionSpec, trials: int = 500, seed: int = 0) -> ArmendarizReport:
    """fg ∈ N(A) exactly when every a_i b_j ∈ N(R), on seeded random pairs."""
    ring = ext.ring
    _require_tables(ring)
    _criterion_certified(ext)
    nil = sorted(nil_data(ring).nilpotents)
    rng = seeded(seed, 'armendariz')
    counterexamples = []
    for _ in range(trials):
        f, g = (random_poly(ext, rng, 2) for _ in range(2))
        if rng.random() < 0.5:
            f = ext.poly({m: rng.choice(nil) for m in f.terms})
        lhs = is_nilpotent_poly(f * g, 'both')
        rhs = all(
            ring.is_nilpotent(ring.mul(a, b))
            for a in f.terms.values()
            for b in g.terms.values()
        )
        if lhs != rhs:
            log.info(f'Armendariz counterexample: f = {f}, g = {g}')
            counterexamples.append((str(f), str(g)))
    return ArmendarizReport(trials, seed, counterexamples)


class GaloisReport(NamedTuple):
    checked: int
    violations: List[Tuple[str, Tuple[Value, ...]]]

    @property
    def ok(self) -> bool:
        return not self.violations


def galois_laws(ring: Ring, trials: int = 200, seed: int = 0) -> GaloisReport:
    """Galois-connection laws of weak annihilators on singletons and seeded pairs."""
    _require_tables(ring)
    mul = ring.mul_table
    nd = nil_data(ring)
    reduced = len(nd.nilpotents) == 1
    rng = seeded(seed, 'galois', ring.description)
    elements = list(ring.elements())
    violations: List[Tuple[str, Tuple[Value, ...]]] = []
    checked = 0

    def ann(xs: Sequence[Value]) -> np.ndarray:
        return _ann_mask(ring, list(xs))

    def check_set(xs: List[Value]) -> None:
        nonlocal checked
        checked += 1
        n1 = ann(xs)
        n2 = ann(np.flatnonzero(n1))
        n3 = ann(np.flatnonzero(n2))
        key = tuple(xs)
        if not n2[xs].all():
            violations.append(('X in N(N(X))', key))
        if not (n1 == n3).all():
            violations.append(('N(X) = N(N(N(X)))', key))
        zero = mul[np.asarray(xs)] == ring.zero
        right = zero.all(axis=0)
        left = (mul[:, np.asarray(xs)] == ring.zero).all(axis=1)
        if ((left | right) & ~n1).any():
            violations.append(('l(X) and r(X) inside N(X)', key))
        if reduced and not ((left == n1).all() and (right == n1).all()):
            violations.append(('l(X) = r(X) = N(X) on reduced rings', key))
        if nd.is_ni:
            try:
                ideal_mask(ring, np.flatnonzero(n1).tolist())
            except NotAnIdeal:
                violations.append(('N(X) is an ideal', key))

    for x in elements:
        check_set([x])
    for _ in range(trials):
        xs = rng.sample(elements, rng.randint(1, min(3, len(elements))))
        ys = sorted(set(xs) | set(rng.sample(elements, rng.randint(0, min(3, len(elements))))))
        checked += 1
        if (ann(ys) & ~ann(xs)).any():
            violations.append(('X in Y implies N(Y) in N(X)', (*xs, *ys)))
        check_set(sorted(xs))
    if violations:
        log.info(f'{len(violations)} Galois-law violations on {ring.description}')
    return GaloisReport(checked, violations)


class NilradicalReport(NamedTuple):
    trials: int
    seed: int
    degree_bound: int
    nilpotent: int
    mismatches: List[str]
    budget_exceeded: List[str]

    @property
    def ok(self) -> bool:
        return not (self.mismatches or self.budget_exceeded)


def verify_nilradical(
    ext: ExtensionSpec, trials: int = 500, seed: int = 0, degree: int = 2
) -> NilradicalReport:
    """Compare the coefficient criterion with the power oracle on seeded polynomials.

    Half of the samples have nilpotent coefficients only, so that both
    verdicts occur.
    """
    ring = ext.ring
    _require_tables(ring)
    _criterion_certified(ext)
    nil = sorted(nil_data(ring).nilpotents)
    rng = seeded(seed, 'nilradical')
    mismatches: List[str] = []
    exceeded: List[str] = []
    nilpotent = 0
    for _ in range(trials):
        f = random_poly(ext, rng, degree)
        if rng.random() < 0.5:
            f = ext.poly({m: rng.choice(nil) for m in f.terms})
        try:
            nilpotent += is_nilpotent_poly(f, 'both')
        except LawViolation:
            mismatches.append(str(f))
        except OracleBudgetExceeded:
            exceeded.append(str(f))
    if mismatches or exceeded:
        log.info(f'{len(mismatches)} mismatches, {len(exceeded)} budget overruns')
    return NilradicalReport(trials, seed, degree, nilpotent, mismatches, exceeded)
