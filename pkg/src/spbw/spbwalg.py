# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.
"""Skew PBW extensions over coefficient rings.

Elements are kept in normal form: a left combination of standard monomials
x^α = x_1^α_1 ⋯ x_n^α_n with coefficients on the left. Products are
normalized by rewriting x_i r → σ_i(r) x_i + δ_i(r) and, for j > i,
x_j x_i → d_ij x_i x_j + r0 + Σ r_k x_k. Monomials are ordered
degree-lexicographically with x_1 < x_2 < ⋯ < x_n.
"""
from __future__ import annotations

import logging
import random
from typing import (
    Dict,
    Iterable,
    Iterator,
    List,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np

from .config import Config
from .errors import MalformedPreset, MixedExtensions, MixedRings, NonTerminatingRewrite
from .finring import Ring, Value, format_word, nil_data, parenthesized
from .ringmaps import (
    CompatReport,
    Derivation,
    RingMap,
    check_compatibility,
    identity_map,
    zero_derivation,
)
from .utils import compositions, seeded

__version__ = '0.1.0'
__all__ = [
    'Monomial',
    'QuadRelation',
    'ExtensionSpec',
    'Certificate',
    'SkewPoly',
    'LeadingData',
    'ConfluenceReport',
    'ArithReport',
    'deglex_key',
    'nf_mul',
    'nf_add',
    'nf_neg',
    'nf_scale',
    'pow_alpha_times_r',
    'leading_data',
    'check_pbw_confluence',
    'check_arithmetic',
    'random_poly',
]

log = logging.getLogger(__name__)

Monomial = Tuple[int, ...]
Terms = Dict[Monomial, Value]


def deglex_key(alpha: Monomial) -> Tuple[int, Tuple[int, ...]]:
    """Sort key of the degree-lexicographic order with x_1 < ⋯ < x_n."""
    return sum(alpha), alpha[::-1]


class QuadRelation(NamedTuple):
    """x_j x_i = d x_i x_j + r0 + Σ_k rk[k] x_k for a pair j > i."""

    d: Value
    r0: Value
    rk: Tuple[Value, ...]


class Certificate(NamedTuple):
    ni: bool
    sigma_compatible: bool
    delta_compatible: bool
    weak_sigma: bool
    weak_delta: bool
    nil_delta_stable: bool
    bijective: bool
    report: CompatReport

    @property
    def compatible(self) -> bool:
        return self.sigma_compatible and self.delta_compatible

    @property
    def weak(self) -> bool:
        return self.weak_sigma and self.weak_delta

    def flags(self) -> Dict[str, bool]:
        return {k: v for k, v in self._asdict().items() if k != 'report'}


class ExtensionSpec:
    """Presentation data of a skew PBW extension σ(R)⟨x_1, …, x_n⟩.

    :param ring: coefficient ring
    :param sigmas: one endomorphism per variable
    :param deltas: one σ_i-derivation per variable
    :param quad: relations keyed by 0-based pairs (j, i) with j > i; missing
        pairs commute
    :param names: variable names, x1 … xn by default
    """

    order = 'deglex'

    def __init__(
        self,
        ring: Ring,
        sigmas: Sequence[RingMap],
        deltas: Sequence[Derivation],
        quad: Optional[Dict[Tuple[int, int], QuadRelation]] = None,
        names: Optional[Sequence[str]] = None,
        name: str = 'A',
        rewrite_constant: Optional[int] = None,
    ) -> None:
        n = len(sigmas)
        if n < 1:
            raise MalformedPreset(f'{name}: an extension needs at least one variable')
        if len(deltas) != n:
            raise MalformedPreset(f'{name}: {n} endomorphisms but {len(deltas)} derivations')
        for m in [*sigmas, *deltas]:
            if m.ring is not ring:
                raise MixedRings(f'{name}: {m.name} acts on a different ring')
        self.ring = ring
        self.sigmas = tuple(sigmas)
        self.deltas = tuple(deltas)
        self.names = tuple(names or (f'x{i + 1}' for i in range(n)))
        if len(self.names) != n or len(set(self.names)) != n:
            raise MalformedPreset(f'{name}: variable names must be {n} distinct names')
        self.name = name
        self.rewrite_constant = rewrite_constant or Config().rewrite_constant
        zeros = n * (ring.zero,)
        self.quad: Dict[Tuple[int, int], QuadRelation] = {}
        for j in range(n):
            for i in range(j):
                rel = (quad or {}).get((j, i), QuadRelation(ring.one, ring.zero, zeros))
                if rel.d == ring.zero:
                    raise MalformedPreset(
                        f'{name}: coefficient d of {self.names[j]}*{self.names[i]} is zero'
                    )
                if len(rel.rk) != n:
                    raise MalformedPreset(f'{name}: relation needs {n} linear coefficients')
                self.quad[j, i] = rel
        for key in quad or {}:
            if key not in self.quad:
                raise MalformedPreset(f'{name}: relation {key} is not for a pair j > i')
        if any(sigma.injective is False for sigma in self.sigmas):
            log.info(f'{name}: recorded as non-bijective')
        self._var_cache: Dict[Tuple[int, Monomial], Terms] = {}
        self._coef_cache: Dict[Tuple[Monomial, Value], Terms] = {}
        self._mono_cache: Dict[Tuple[Monomial, Monomial], Terms] = {}
        self._steps = 0
        self._budget = 0

    @classmethod
    def commutative(cls, ring: Ring, nvars: int, **kwargs: object) -> ExtensionSpec:
        sigma = identity_map(ring)
        delta = zero_derivation(ring, sigma)
        return cls(ring, nvars * [sigma], nvars * [delta], **kwargs)  # type: ignore

    def __repr__(self) -> str:
        return f'<ExtensionSpec {self.name} over {self.ring.description} {self.names}>'

    @property
    def nvars(self) -> int:
        return len(self.sigmas)

    # construction of elements

    def poly(self, terms: Dict[Monomial, Value]) -> SkewPoly:
        return SkewPoly(self, {m: c for m, c in terms.items() if c != self.ring.zero})

    @property
    def zero(self) -> SkewPoly:
        return SkewPoly(self, {})

    @property
    def one(self) -> SkewPoly:
        return self.constant(self.ring.one)

    def constant(self, r: Value) -> SkewPoly:
        return self.poly({self.nvars * (0,): r})

    def unit_vector(self, i: int) -> Monomial:
        return tuple(int(k == i) for k in range(self.nvars))

    def var(self, i: int) -> SkewPoly:
        return self.poly({self.unit_vector(i): self.ring.one})

    def monomial(self, alpha: Monomial, coef: Optional[Value] = None) -> SkewPoly:
        return self.poly({tuple(alpha): self.ring.one if coef is None else coef})

    def relation(self, j: int, i: int) -> SkewPoly:
        """Normal form of x_j x_i for j > i."""
        rel = self.quad[j, i]
        mono = tuple(int(k in (i, j)) for k in range(self.nvars))
        terms = {mono: rel.d, self.nvars * (0,): rel.r0}
        for k, c in enumerate(rel.rk):
            terms[self.unit_vector(k)] = c
        return self.poly(terms)

    def sigma_alpha(self, alpha: Monomial, r: Value) -> Value:
        """σ^α(r) = σ_1^α_1 ∘ ⋯ ∘ σ_n^α_n (r), σ_n applied first."""
        for sigma, e in reversed(list(zip(self.sigmas, alpha))):
            for _ in range(e):
                r = sigma(r)
        return r

    def graded(self) -> ExtensionSpec:
        """Same σ's and d's, with zero derivations and no lower-order terms."""
        if not hasattr(self, '_graded'):
            ring, n = self.ring, self.nvars
            self._graded = ExtensionSpec(
                ring,
                self.sigmas,
                [zero_derivation(ring, s) for s in self.sigmas],
                {
                    key: QuadRelation(rel.d, ring.zero, n * (ring.zero,))
                    for key, rel in self.quad.items()
                },
                self.names,
                f'gr({self.name})',
                self.rewrite_constant,
            )
        return self._graded

    @property
    def certificate(self) -> Certificate:
        """Compatibility and NI data of the coefficient ring under Σ and Δ."""
        if not hasattr(self, '_certificate'):
            self._certificate = self._compute_certificate()
        return self._certificate

    def _compute_certificate(self) -> Certificate:
        ring = self.ring
        bijective = all(s.injective for s in self.sigmas)
        if not ring.tabulated:
            report = check_compatibility(ring, self.sigmas, self.deltas, 'sampled')
            v = report.verdicts
            return Certificate(
                False,
                v['sigma_compatible'],
                v['delta_compatible'],
                v['weak_sigma'],
                v['weak_delta'],
                False,
                bijective,
                report,
            )
        report = check_compatibility(ring, self.sigmas, self.deltas)
        nd = nil_data(ring)
        nil = np.array(sorted(nd.nilpotents))
        mask = ring.nil_mask
        stable = nd.is_ni and all(
            mask[m.table[nil]].all() for m in [*self.sigmas, *self.deltas]
        )
        v = report.verdicts
        cert = Certificate(
            nd.is_ni,
            v['sigma_compatible'],
            v['delta_compatible'],
            v['weak_sigma'],
            v['weak_delta'],
            stable,
            bijective,
            report,
        )
        log.debug(f'{self.name}: certificate {cert.flags()}')
        return cert

    # rewriting

    def _tick(self) -> None:
        self._steps += 1
        if self._budget and self._steps > self._budget:
            raise NonTerminatingRewrite(
                f'{self.name}: rewriting exceeded {self._budget} steps', self._steps
            )

    def _add_into(self, acc: Terms, mono: Monomial, c: Value) -> None:
        ring = self.ring
        if c == ring.zero:
            return
        new = ring.add(acc[mono], c) if mono in acc else c
        if new == ring.zero:
            acc.pop(mono, None)
        else:
            acc[mono] = new

    def _scaled_into(self, acc: Terms, c: Value, terms: Terms) -> None:
        """acc += c·terms, c acting on the left."""
        if c == self.ring.zero:
            return
        for mono, e in terms.items():
            self._add_into(acc, mono, self.ring.mul(c, e))

    def var_times_mono(self, i: int, Y: Monomial) -> Terms:
        """Normal form of x_i·Y."""
        key = (i, Y)
        if key not in self._var_cache:
            self._tick()
            j = next((k for k, e in enumerate(Y) if e), None)
            if j is None or i <= j:
                self._var_cache[key] = {Y[:i] + (Y[i] + 1,) + Y[i + 1 :]: self.ring.one}
            else:
                rel = self.quad[i, j]
                rest = Y[:j] + (Y[j] - 1,) + Y[j + 1 :]
                acc: Terms = {}
                self._scaled_into(acc, rel.d, self.left_mul_var(j, self.var_times_mono(i, rest)))
                self._add_into(acc, rest, rel.r0)
                for k, c in enumerate(rel.rk):
                    self._scaled_into(acc, c, self.var_times_mono(k, rest))
                self._var_cache[key] = acc
        return self._var_cache[key]

    def left_mul_var(self, i: int, P: Terms) -> Terms:
        """Normal form of x_i·P = Σ σ_i(b)·(x_i Y) + δ_i(b)·Y."""
        sigma, delta = self.sigmas[i], self.deltas[i]
        acc: Terms = {}
        for Y, b in P.items():
            self._scaled_into(acc, sigma(b), self.var_times_mono(i, Y))
            self._add_into(acc, Y, delta(b))
        return acc

    def mono_times_coeff(self, alpha: Monomial, r: Value) -> Terms:
        """Normal form of x^α·r."""
        key = (alpha, r)
        if key not in self._coef_cache:
            P: Terms = {} if r == self.ring.zero else {self.nvars * (0,): r}
            for k in reversed(range(self.nvars)):
                for _ in range(alpha[k]):
                    P = self.left_mul_var(k, P)
            self._coef_cache[key] = P
        return self._coef_cache[key]

    def mono_mul(self, X: Monomial, Y: Monomial) -> Terms:
        """Normal form of x^X·x^Y."""
        key = (X, Y)
        if key not in self._mono_cache:
            P: Terms = {Y: self.ring.one}
            for k in reversed(range(self.nvars)):
                for _ in range(X[k]):
                    P = self.left_mul_var(k, P)
            self._mono_cache[key] = P
        return self._mono_cache[key]

    def multiply(self, f: SkewPoly, g: SkewPoly) -> SkewPoly:
        ring = self.ring
        deg = f.degree + g.degree
        self._steps = 0
        self._budget = (
            self.rewrite_constant
            * (max(deg, 0) + 1) ** (self.nvars + 1)
            * max(len(f.terms) * len(g.terms), 1)
        )
        acc: Terms = {}
        try:
            for X, a in f.terms.items():
                for Y, b in g.terms.items():
                    for Z, c in self.mono_times_coeff(X, b).items():
                        self._scaled_into(acc, ring.mul(a, c), self.mono_mul(Z, Y))
        except RecursionError:
            raise NonTerminatingRewrite(
                f'{self.name}: rewriting does not terminate', self._steps
            )
        finally:
            self._budget = 0
        return SkewPoly(self, acc)


class SkewPoly:
    """Normal-form element of a skew PBW extension."""

    __slots__ = ('ext', 'terms')

    def __init__(self, ext: ExtensionSpec, terms: Terms) -> None:
        self.ext = ext
        self.terms = terms

    def _check(self, other: SkewPoly) -> None:
        if other.ext is not self.ext:
            raise MixedExtensions(f'{self.ext.name} and {other.ext.name} differ')

    def __iter__(self) -> Iterator[Tuple[Monomial, Value]]:
        """Terms in descending deglex order."""
        for mono in sorted(self.terms, key=deglex_key, reverse=True):
            yield mono, self.terms[mono]

    def __add__(self, other: SkewPoly) -> SkewPoly:
        self._check(other)
        acc = dict(self.terms)
        for mono, c in other.terms.items():
            self.ext._add_into(acc, mono, c)
        return SkewPoly(self.ext, acc)

    def __neg__(self) -> SkewPoly:
        ring = self.ext.ring
        return SkewPoly(self.ext, {m: ring.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other: SkewPoly) -> SkewPoly:
        return self + -other

    def __mul__(self, other: SkewPoly) -> SkewPoly:
        self._check(other)
        return self.ext.multiply(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SkewPoly):
            return NotImplemented
        return self.ext is other.ext and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return '0'
        ring, names = self.ext.ring, self.ext.names
        parts = []
        for mono, c in self:
            word = format_word(tuple(n for n, e in zip(names, mono) for _ in range(e)))
            if not any(mono):
                parts.append(parenthesized(ring.format(c)))
            elif c == ring.one:
                parts.append(word)
            else:
                parts.append(f'({ring.format(c)})*{word}')
        return ' + '.join(parts)

    def __repr__(self) -> str:
        return f'<SkewPoly {self}>'

    def scale(self, r: Value) -> SkewPoly:
        """Left scaling r·f."""
        ring = self.ext.ring
        acc: Terms = {}
        for mono, c in self.terms.items():
            self.ext._add_into(acc, mono, ring.mul(r, c))
        return SkewPoly(self.ext, acc)

    @property
    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def coefficients(self) -> List[Value]:
        return list(self.terms.values())

    def support(self) -> List[Monomial]:
        """Monomials in ascending deglex order."""
        return sorted(self.terms, key=deglex_key)


class LeadingData(NamedTuple):
    lm: SkewPoly
    lc: Value
    lt: SkewPoly
    deg: int
    exp: Monomial


def nf_mul(f: SkewPoly, g: SkewPoly) -> SkewPoly:
    return f * g


def nf_add(f: SkewPoly, g: SkewPoly) -> SkewPoly:
    return f + g


def nf_neg(f: SkewPoly) -> SkewPoly:
    return -f


def nf_scale(f: SkewPoly, r: Value) -> SkewPoly:
    return f.scale(r)


def leading_data(f: SkewPoly) -> LeadingData:
    ext = f.ext
    if not f:
        return LeadingData(ext.zero, ext.ring.zero, ext.zero, -1, ext.nvars * (0,))
    mono, c = next(iter(f))
    return LeadingData(ext.monomial(mono), c, ext.monomial(mono, c), sum(mono), mono)


def pow_alpha_times_r(ext: ExtensionSpec, alpha: Monomial, r: Value) -> SkewPoly:
    """x^α·r by the closed-form expansion.

    x^α r = σ^α(r) x^α + Σ_l Σ_{j=1}^{α_l} x_1^α_1 ⋯ x_{l-1}^α_{l-1}
    x_l^{α_l-j} δ_l(σ_l^{j-1}(s_l)) x_l^{j-1} x_{l+1}^α_{l+1} ⋯ x_n^α_n,
    where s_l = σ_{l+1}^α_{l+1} ∘ ⋯ ∘ σ_n^α_n (r). Shorter prefixes are
    expanded recursively.
    """
    alpha = tuple(alpha)
    ring, n = ext.ring, ext.nvars
    result = ext.monomial(alpha, ext.sigma_alpha(alpha, r))
    s = r
    for l in reversed(range(n)):
        sigma, delta = ext.sigmas[l], ext.deltas[l]
        t = s
        for j in range(1, alpha[l] + 1):
            c = delta(t)
            t = sigma(t)
            if c == ring.zero:
                continue
            prefix = alpha[:l] + (alpha[l] - j,) + (n - l - 1) * (0,)
            suffix = l * (0,) + (j - 1,) + alpha[l + 1 :]
            result = result + pow_alpha_times_r(ext, prefix, c) * ext.monomial(suffix)
        for _ in range(alpha[l]):
            s = sigma(s)
    return result


class ConfluenceReport(NamedTuple):
    confluent: bool
    checked: int
    bound: str
    witness: Optional[Tuple[str, Tuple[int, ...], str, str]]
    mode: str


def _ring_sample(ring: Ring, samples: int, seed: int) -> Iterable[Value]:
    if ring.tabulated:
        return ring.elements()
    rng = seeded(seed, 'confluence', ring.description)
    return [ring.random_element(rng) for _ in range(samples)]


def check_pbw_confluence(
    ext: ExtensionSpec, samples: Optional[int] = None, seed: Optional[int] = None
) -> ConfluenceReport:
    """Compare both reductions of every overlap x_k x_j x_i and x_j x_i r."""
    if samples is None or seed is None:
        config = Config()
        samples = samples or config.samples
        seed = config.seed if seed is None else seed
    n = ext.nvars
    x = [ext.var(i) for i in range(n)]
    checked = 0
    bound = 'words x_k x_j x_i (k > j > i) and x_j x_i r'
    mode = 'exhaustive' if ext.ring.tabulated else f'sampled({samples}, {seed})'

    def diverged(
        kind: str, idx: Tuple[int, ...], lhs: SkewPoly, rhs: SkewPoly
    ) -> ConfluenceReport:
        log.info(f'{ext.name}: overlap {kind} {idx} diverges: {lhs} != {rhs}')
        return ConfluenceReport(False, checked, bound, (kind, idx, str(lhs), str(rhs)), mode)

    for k in range(n):
        for j in range(k):
            for i in range(j):
                checked += 1
                lhs = ext.relation(k, j) * x[i]
                rhs = x[k] * ext.relation(j, i)
                if lhs != rhs:
                    return diverged('variables', (k, j, i), lhs, rhs)
    for j in range(n):
        for i in range(j):
            for r in _ring_sample(ext.ring, samples, seed):
                checked += 1
                c = ext.constant(r)
                lhs = ext.relation(j, i) * c
                rhs = x[j] * (x[i] * c)
                if lhs != rhs:
                    return diverged('coefficient', (j, i, r), lhs, rhs)  # type: ignore
    log.debug(f'{ext.name}: {checked} overlaps agree')
    return ConfluenceReport(True, checked, bound, None, mode)


def random_poly(
    ext: ExtensionSpec, rng: random.Random, degree: int, nterms: Optional[int] = None
) -> SkewPoly:
    """Seeded random polynomial with support among monomials of degree ≤ degree."""
    monos = list(compositions(ext.nvars, degree))
    if nterms is None:
        nterms = rng.randint(1, len(monos))
    chosen = rng.sample(monos, min(nterms, len(monos)))
    return ext.poly({m: ext.ring.random_element(rng) for m in chosen})


class ArithReport(NamedTuple):
    trials: int
    seed: int
    closed_form_checked: int
    failures: List[Tuple[str, Tuple[str, ...]]]

    @property
    def ok(self) -> bool:
        return not self.failures


def check_arithmetic(
    ext: ExtensionSpec, trials: int = 1000, seed: int = 0, degree: int = 2, max_alpha: int = 3
) -> ArithReport:
    """Associativity and distributivity on seeded triples.

    Also compares the closed form of x^α·r with rewriting for every
    |α| ≤ ``max_alpha``.
    """
    rng = seeded(seed, 'arith', ext.name)
    failures: List[Tuple[str, Tuple[str, ...]]] = []
    for _ in range(trials):
        f, g, h = (random_poly(ext, rng, degree) for _ in range(3))
        if (f * g) * h != f * (g * h):
            failures.append(('associativity', (str(f), str(g), str(h))))
        if f * (g + h) != f * g + f * h:
            failures.append(('left distributivity', (str(f), str(g), str(h))))
        if (f + g) * h != f * h + g * h:
            failures.append(('right distributivity', (str(f), str(g), str(h))))
    ring = ext.ring
    if ring.tabulated:
        sample: Iterable[Value] = ring.elements()
    else:
        sample = [ring.random_element(rng) for _ in range(min(trials, 50))]
    sample = list(sample)
    checked = 0
    for alpha in compositions(ext.nvars, max_alpha):
        for r in sample:
            checked += 1
            closed = pow_alpha_times_r(ext, alpha, r)
            rewritten = ext.monomial(alpha) * ext.constant(r)
            if closed != rewritten:
                witness = (str(ext.monomial(alpha)), ring.format(r))
                failures.append(('closed form', witness))
    if failures:
        log.info(f'{ext.name}: {len(failures)} arithmetic law failures')
    return ArithReport(trials, seed, checked, failures)
