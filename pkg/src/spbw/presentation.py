# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.
"""Presentation files of rings, maps and skew PBW extensions.

A presentation file declares rings, endomorphisms and σ-derivations by
generator images, and extensions by their variables, per-variable σ/δ and
pairwise relations. It is parsed with textX into a frozen AST that prints
back canonically, and evaluated into :class:`Presentation`.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache, reduce
from importlib import resources
from typing import Any, Dict, List, Optional, Set, Tuple, Union

from textx import TextXSyntaxError, get_location, metamodel_from_str  # type: ignore

from .config import Config
from .errors import (
    DuplicateDeclaration,
    MalformedPreset,
    PresentationSyntaxError,
    RelationNotLowerTriangular,
    UnresolvedName,
)
from .finring import (
    GF,
    FullMatrix,
    IntegerRing,
    PolyOverGF,
    Product,
    Quotient,
    Ring,
    TrivialExt,
    Triangular,
    Value,
    Zmod,
    build_ring,
)
from .presets import preset_text
from .ringmaps import (
    Derivation,
    RingMap,
    build_derivation,
    build_map,
    identity_map,
    zero_derivation,
)
from .spbwalg import ExtensionSpec, QuadRelation, SkewPoly

__version__ = '0.1.0'
__all__ = [
    'PresentationFile',
    'Presentation',
    'parse_presentation',
    'parse_expr',
    'format_presentation',
    'format_expr',
    'load_presentation',
    'load_preset',
]

log = logging.getLogger(__name__)

_grammar = resources.read_text(__package__, 'presentation.tx')  # type: ignore
_file_mm = metamodel_from_str(_grammar, auto_init_attributes=False, autokwd=True)
_expr_mm = metamodel_from_str(
    'ExprInput: expr=Expr;\n' + _grammar, auto_init_attributes=False, autokwd=True
)
for _mm in (_file_mm, _expr_mm):
    _mm.register_obj_processors({'NAT': int})

Loc = Optional[Tuple[int, int]]


def _loc() -> Any:
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Name:
    name: str
    loc: Loc = _loc()


@dataclass(frozen=True)
class Pow:
    base: Expr
    exp: int


@dataclass(frozen=True)
class Mul:
    factors: Tuple[Expr, ...]


@dataclass(frozen=True)
class Sum:
    terms: Tuple[Tuple[str, Expr], ...]


Expr = Union[Num, Name, Pow, Mul, Sum]


@dataclass(frozen=True)
class RingNode:
    """Ring expression; ``kind`` is the constructor keyword or 'ref'."""

    kind: str
    ints: Tuple[int, ...] = ()
    var: Optional[str] = None
    modulus: Optional[Expr] = None
    bases: Tuple[RingNode, ...] = ()
    name: Optional[str] = None
    loc: Loc = _loc()


@dataclass(frozen=True)
class ImportDecl:
    name: str
    loc: Loc = _loc()


@dataclass(frozen=True)
class ConstDecl:
    name: str
    value: Expr
    loc: Loc = _loc()


@dataclass(frozen=True)
class RingDecl:
    name: str
    ring: RingNode
    loc: Loc = _loc()


@dataclass(frozen=True)
class EndoDecl:
    name: str
    ring: str
    images: Tuple[Tuple[str, Expr], ...]
    loc: Loc = _loc()


@dataclass(frozen=True)
class DerivDecl:
    name: str
    ring: str
    sigma: str
    images: Tuple[Tuple[str, Expr], ...]
    loc: Loc = _loc()


@dataclass(frozen=True)
class VarRule:
    var: str
    sigma: str
    delta: Optional[str]
    loc: Loc = _loc()


@dataclass(frozen=True)
class QuadRule:
    left: str
    right: str
    rhs: Expr
    loc: Loc = _loc()


@dataclass(frozen=True)
class ExtensionDecl:
    name: str
    ring: str
    vars: Tuple[str, ...]
    varrules: Tuple[VarRule, ...]
    quadrules: Tuple[QuadRule, ...]
    loc: Loc = _loc()


@dataclass(frozen=True)
class ActiveDecl:
    name: str
    loc: Loc = _loc()


Statement = Union[
    ImportDecl, ConstDecl, RingDecl, EndoDecl, DerivDecl, ExtensionDecl, ActiveDecl
]


@dataclass(frozen=True)
class PresentationFile:
    statements: Tuple[Statement, ...]


# textX model to AST


def _pos(o: Any) -> Loc:
    loc = get_location(o)
    return loc['line'], loc['col']


def _kind(o: Any) -> str:
    return o.__class__.__name__


def _expr(o: Any) -> Expr:
    terms = [(o.sign or '+', _product(o.first))]
    terms.extend((t.sign, _product(t.term)) for t in o.rest)
    if len(terms) == 1 and terms[0][0] == '+':
        return terms[0][1]
    return Sum(tuple(terms))


def _product(o: Any) -> Expr:
    factors: List[Expr] = []
    for p in o.factors:
        f = _power(p)
        factors.extend(f.factors if isinstance(f, Mul) else [f])
    return factors[0] if len(factors) == 1 else Mul(tuple(factors))


def _power(o: Any) -> Expr:
    base = _atom(o.base)
    return base if o.exp is None else Pow(base, o.exp)


def _atom(o: Any) -> Expr:
    kind = _kind(o)
    if kind == 'Number':
        return Num(o.value)
    if kind == 'Paren':
        return _expr(o.expr)
    return Name(o.name, _pos(o))


_ring_kinds = {
    'ZmodRing': 'Zmod',
    'GFRing': 'GF',
    'QuotientRing': 'quotient',
    'TriangularRing': 'triangular',
    'MatricesRing': 'matrices',
    'TrivialRing': 'trivial',
    'IntRing': 'Int',
    'PolyRing': 'polyring',
    'ProductRing': 'product',
    'RingRef': 'ref',
}


def _ring(o: Any) -> RingNode:
    kind, loc = _ring_kinds[_kind(o)], _pos(o)
    if kind == 'Zmod':
        return RingNode(kind, ints=(o.n,), loc=loc)
    if kind == 'GF':
        modulus = _expr(o.modulus) if o.modulus is not None else None
        return RingNode(kind, ints=(o.order,), modulus=modulus, loc=loc)
    if kind == 'quotient':
        return RingNode(
            kind, var=o.var, modulus=_expr(o.modulus), bases=(_ring(o.base),), loc=loc
        )
    if kind in ('triangular', 'matrices'):
        return RingNode(kind, ints=(o.size,), bases=(_ring(o.base),), loc=loc)
    if kind == 'trivial':
        return RingNode(kind, bases=(_ring(o.base),), loc=loc)
    if kind == 'Int':
        return RingNode(kind, loc=loc)
    if kind == 'polyring':
        return RingNode(kind, var=o.var, bases=(_ring(o.base),), loc=loc)
    if kind == 'product':
        return RingNode(kind, bases=tuple(_ring(f) for f in o.factors), loc=loc)
    return RingNode(kind, name=o.name, loc=loc)


def _images(o: Any) -> Tuple[Tuple[str, Expr], ...]:
    return tuple((img.gen, _expr(img.value)) for img in o.images)


def _statement(o: Any) -> Statement:
    kind, loc = _kind(o), _pos(o)
    if kind == 'ImportStmt':
        return ImportDecl(o.name, loc)
    if kind == 'ConstStmt':
        return ConstDecl(o.name, _expr(o.value), loc)
    if kind == 'RingStmt':
        return RingDecl(o.name, _ring(o.ring), loc)
    if kind == 'EndoStmt':
        return EndoDecl(o.name, o.ring, _images(o), loc)
    if kind == 'DerivStmt':
        return DerivDecl(o.name, o.ring, o.sigma, _images(o), loc)
    if kind == 'ExtensionStmt':
        return ExtensionDecl(
            o.name,
            o.ring,
            tuple(o.vars),
            tuple(VarRule(r.var, r.sigma, r.delta, _pos(r)) for r in o.varrules),
            tuple(
                QuadRule(r.left, r.right, _expr(r.rhs), _pos(r)) for r in o.quadrules
            ),
            loc,
        )
    return ActiveDecl(o.name, loc)


# parsing and name resolution


def _syntax_error(source: str, exc: TextXSyntaxError) -> PresentationSyntaxError:
    msg = str(exc.message).split(' at position')[0]
    return PresentationSyntaxError(f'{source}: {msg}', exc.line, exc.col)


def parse_expr(text: str) -> Expr:
    """Parse a single ring or polynomial expression."""
    try:
        model = _expr_mm.model_from_str(text)
    except TextXSyntaxError as exc:
        raise _syntax_error('expression', exc) from None
    return _expr(model.expr)


def parse_presentation(text: str, source: str = '<string>') -> PresentationFile:
    """Parse and name-resolve a presentation file."""
    try:
        model = _file_mm.model_from_str(text)
    except TextXSyntaxError as exc:
        raise _syntax_error(source, exc) from None
    pf = PresentationFile(tuple(_statement(s) for s in model.statements))
    _Resolver().resolve(pf)
    log.debug(f'{source}: {len(pf.statements)} statements')
    return pf


@lru_cache(maxsize=None)
def _preset_file(name: str) -> PresentationFile:
    return parse_presentation(preset_text(name), name)


def _at(loc: Loc) -> Tuple[Optional[int], Optional[int]]:
    return loc if loc else (None, None)


class _Resolver:
    def __init__(self) -> None:
        self.scope: Dict[str, str] = {}
        self.imported: Set[str] = set()

    def declare(self, name: str, kind: str, loc: Loc) -> None:
        if name == 'id' or name in self.scope:
            raise DuplicateDeclaration(f'{name} is already declared', *_at(loc))
        self.scope[name] = kind

    def require(self, name: str, kinds: Tuple[str, ...], loc: Loc) -> None:
        if self.scope.get(name) not in kinds:
            raise UnresolvedName(
                f'{name} is not a declared {" or ".join(kinds)}', *_at(loc)
            )

    def resolve(self, pf: PresentationFile, top: bool = True) -> None:
        for stmt in pf.statements:
            if isinstance(stmt, ImportDecl):
                if stmt.name in self.imported:
                    continue
                self.imported.add(stmt.name)
                try:
                    imported = _preset_file(stmt.name)
                except KeyError:
                    raise UnresolvedName(
                        f'no preset named {stmt.name}', *_at(stmt.loc)
                    ) from None
                self.resolve(imported, top=False)
            elif isinstance(stmt, ConstDecl):
                self.declare(stmt.name, 'constant', stmt.loc)
            elif isinstance(stmt, RingDecl):
                self.ring_refs(stmt.ring)
                self.declare(stmt.name, 'ring', stmt.loc)
            elif isinstance(stmt, EndoDecl):
                self.require(stmt.ring, ('ring',), stmt.loc)
                self.images(stmt.images, stmt.loc)
                self.declare(stmt.name, 'endomorphism', stmt.loc)
            elif isinstance(stmt, DerivDecl):
                self.require(stmt.ring, ('ring',), stmt.loc)
                if stmt.sigma != 'id':
                    self.require(stmt.sigma, ('endomorphism',), stmt.loc)
                self.images(stmt.images, stmt.loc)
                self.declare(stmt.name, 'derivation', stmt.loc)
            elif isinstance(stmt, ExtensionDecl):
                self.extension(stmt)
                self.declare(stmt.name, 'extension', stmt.loc)
            elif top:
                self.require(stmt.name, ('extension', 'ring'), stmt.loc)

    def ring_refs(self, node: RingNode) -> None:
        if node.kind == 'ref':
            self.require(node.name, ('ring',), node.loc)  # type: ignore
        for base in node.bases:
            self.ring_refs(base)

    def images(self, images: Tuple[Tuple[str, Expr], ...], loc: Loc) -> None:
        seen: Set[str] = set()
        for gen, _ in images:
            if gen in seen:
                raise DuplicateDeclaration(f'two images given for {gen}', *_at(loc))
            seen.add(gen)

    def extension(self, ext: ExtensionDecl) -> None:
        self.require(ext.ring, ('ring',), ext.loc)
        index: Dict[str, int] = {}
        for k, var in enumerate(ext.vars):
            if var in index:
                raise DuplicateDeclaration(f'variable {var} is listed twice', *_at(ext.loc))
            index[var] = k
        ruled: Set[str] = set()
        for rule in ext.varrules:
            if rule.var not in index:
                raise UnresolvedName(f'{rule.var} is not a variable', *_at(rule.loc))
            if rule.var in ruled:
                raise DuplicateDeclaration(f'two rules for {rule.var}', *_at(rule.loc))
            ruled.add(rule.var)
            if rule.sigma != 'id':
                self.require(rule.sigma, ('endomorphism',), rule.loc)
            if rule.delta is not None:
                self.require(rule.delta, ('derivation',), rule.loc)
        pairs: Set[Tuple[str, str]] = set()
        for quad in ext.quadrules:
            for var in (quad.left, quad.right):
                if var not in index:
                    raise UnresolvedName(f'{var} is not a variable', *_at(quad.loc))
            if index[quad.left] <= index[quad.right]:
                raise RelationNotLowerTriangular(
                    f'{quad.left}*{quad.right}: relations define x_j*x_i with j > i',
                    *_at(quad.loc),
                )
            if (quad.left, quad.right) in pairs:
                raise DuplicateDeclaration(
                    f'two relations for {quad.left}*{quad.right}', *_at(quad.loc)
                )
            pairs.add((quad.left, quad.right))


# canonical printing


def _atom_str(e: Expr) -> str:
    if isinstance(e, (Num, Name)):
        return format_expr(e)
    return f'({format_expr(e)})'


def _factor_str(e: Expr) -> str:
    return f'({format_expr(e)})' if isinstance(e, Sum) else format_expr(e)


def format_expr(e: Expr) -> str:
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Name):
        return e.name
    if isinstance(e, Pow):
        return f'{_atom_str(e.base)}^{e.exp}'
    if isinstance(e, Mul):
        return '*'.join(_factor_str(f) for f in e.factors)
    out = ''
    for k, (sign, term) in enumerate(e.terms):
        text = _factor_str(term)
        if k == 0:
            out = f'-{text}' if sign == '-' else text
        else:
            out += f' {sign} {text}'
    return out


def format_ring(node: RingNode) -> str:
    args: List[str] = [format_ring(b) for b in node.bases]
    if node.kind == 'ref':
        return node.name  # type: ignore
    if node.kind == 'Int':
        return 'Int'
    if node.kind == 'GF':
        args = [str(node.ints[0])]
        if node.modulus is not None:
            args.append(format_expr(node.modulus))
    elif node.kind == 'quotient':
        args += [node.var, format_expr(node.modulus)]  # type: ignore
    elif node.kind == 'polyring':
        args.append(node.var)  # type: ignore
    else:
        args += [str(n) for n in node.ints]
    return f'{node.kind}({", ".join(args)})'


def _images_str(images: Tuple[Tuple[str, Expr], ...]) -> str:
    if not images:
        return '{}'
    return '{ ' + ', '.join(f'{g} -> {format_expr(v)}' for g, v in images) + ' }'


def format_presentation(pf: PresentationFile) -> str:
    """Canonical text of a presentation; parsing it gives back an equal AST."""
    lines = []
    for stmt in pf.statements:
        if isinstance(stmt, ImportDecl):
            lines.append(f'import {stmt.name};')
        elif isinstance(stmt, ConstDecl):
            lines.append(f'const {stmt.name} = {format_expr(stmt.value)};')
        elif isinstance(stmt, RingDecl):
            lines.append(f'ring {stmt.name} = {format_ring(stmt.ring)};')
        elif isinstance(stmt, EndoDecl):
            lines.append(f'endo {stmt.name} on {stmt.ring} {_images_str(stmt.images)}')
        elif isinstance(stmt, DerivDecl):
            lines.append(
                f'deriv {stmt.name} on {stmt.ring} sigma {stmt.sigma} '
                f'{_images_str(stmt.images)}'
            )
        elif isinstance(stmt, ExtensionDecl):
            lines.append(f'extension {stmt.name} over {stmt.ring} {{')
            lines.append(f'  vars {", ".join(stmt.vars)};')
            for rule in stmt.varrules:
                delta = f', delta {rule.delta}' if rule.delta else ''
                lines.append(f'  {rule.var}: sigma {rule.sigma}{delta};')
            for quad in stmt.quadrules:
                lines.append(f'  {quad.left}*{quad.right} = {format_expr(quad.rhs)};')
            lines.append('}')
        else:
            lines.append(f'active {stmt.name};')
    return '\n'.join(lines) + '\n'


# evaluation


class _Algebra:
    """Evaluates expressions; subclasses supply names and arithmetic."""

    def __init__(self, pres: Presentation) -> None:
        self._pres = pres
        self._expanding: Set[str] = set()

    def lookup(self, name: str) -> Any:
        raise NotImplementedError

    def integer(self, k: int) -> Any:
        raise NotImplementedError

    def add(self, x: Any, y: Any) -> Any:
        raise NotImplementedError

    def neg(self, x: Any) -> Any:
        raise NotImplementedError

    def mul(self, x: Any, y: Any) -> Any:
        raise NotImplementedError

    def evaluate(self, e: Expr) -> Any:
        if isinstance(e, Num):
            return self.integer(e.value)
        if isinstance(e, Name):
            return self._name(e)
        if isinstance(e, Pow):
            base, result = self.evaluate(e.base), self.integer(1)
            for _ in range(e.exp):
                result = self.mul(result, base)
            return result
        if isinstance(e, Mul):
            return reduce(self.mul, (self.evaluate(f) for f in e.factors))
        acc = self.integer(0)
        for sign, term in e.terms:
            value = self.evaluate(term)
            acc = self.add(acc, self.neg(value) if sign == '-' else value)
        return acc

    def _name(self, e: Name) -> Any:
        value = self.lookup(e.name)
        if value is not None:
            return value
        const = self._pres.consts.get(e.name)
        if const is None:
            raise UnresolvedName(f'unknown name {e.name}', *_at(e.loc))
        if e.name in self._expanding:
            raise MalformedPreset(f'constant {e.name} is defined through itself')
        self._expanding.add(e.name)
        try:
            return self.evaluate(const)
        finally:
            self._expanding.discard(e.name)


class _RingAlgebra(_Algebra):
    def __init__(self, pres: Presentation, ring: Ring) -> None:
        super().__init__(pres)
        self.ring = ring

    def lookup(self, name: str) -> Any:
        return self.ring.generators().get(name)

    def integer(self, k: int) -> Value:
        return self.ring.from_int(k)

    def add(self, x: Value, y: Value) -> Value:
        return self.ring.add(x, y)

    def neg(self, x: Value) -> Value:
        return self.ring.neg(x)

    def mul(self, x: Value, y: Value) -> Value:
        return self.ring.mul(x, y)


class _UnivariateAlgebra(_RingAlgebra):
    """Coefficient lists, lowest degree first, of polynomials base[var]."""

    def __init__(self, pres: Presentation, ring: Ring, var: str) -> None:
        super().__init__(pres, ring)
        self.var = var

    def _trim(self, xs: List[Value]) -> Tuple[Value, ...]:
        while xs and xs[-1] == self.ring.zero:
            xs.pop()
        return tuple(xs)

    def lookup(self, name: str) -> Any:
        if name == self.var:
            return (self.ring.zero, self.ring.one)
        g = super().lookup(name)
        return None if g is None else (g,)

    def integer(self, k: int) -> Any:
        return self._trim([self.ring.from_int(k)])

    def add(self, x: Any, y: Any) -> Any:
        zero, n = self.ring.zero, max(len(x), len(y))
        pad = [(x + n * (zero,))[:n], (y + n * (zero,))[:n]]
        return self._trim([self.ring.add(a, b) for a, b in zip(*pad)])

    def neg(self, x: Any) -> Any:
        return tuple(self.ring.neg(a) for a in x)

    def mul(self, x: Any, y: Any) -> Any:
        if not x or not y:
            return ()
        prod = [self.ring.zero] * (len(x) + len(y) - 1)
        for i, a in enumerate(x):
            for j, b in enumerate(y):
                prod[i + j] = self.ring.add(prod[i + j], self.ring.mul(a, b))
        return self._trim(prod)


class _ExtensionAlgebra(_Algebra):
    def __init__(self, pres: Presentation, ext: ExtensionSpec) -> None:
        super().__init__(pres)
        self.ext = ext

    def lookup(self, name: str) -> Any:
        if name in self.ext.names:
            return self.ext.var(self.ext.names.index(name))
        g = self.ext.ring.generators().get(name)
        return None if g is None else self.ext.constant(g)

    def integer(self, k: int) -> SkewPoly:
        return self.ext.constant(self.ext.ring.from_int(k))

    def add(self, x: SkewPoly, y: SkewPoly) -> SkewPoly:
        return x + y

    def neg(self, x: SkewPoly) -> SkewPoly:
        return -x

    def mul(self, x: SkewPoly, y: SkewPoly) -> SkewPoly:
        return x * y


def _names_in(e: Expr) -> Set[str]:
    if isinstance(e, Name):
        return {e.name}
    if isinstance(e, Pow):
        return _names_in(e.base)
    if isinstance(e, Mul):
        return set().union(*(_names_in(f) for f in e.factors))
    if isinstance(e, Sum):
        return set().union(*(_names_in(t) for _, t in e.terms))
    return set()


def _standard_words(e: Expr, names: Tuple[str, ...], loc: Loc) -> None:
    """Variables in each product of a relation must appear in ascending order."""
    if isinstance(e, Sum):
        for _, term in e.terms:
            _standard_words(term, names, loc)
        return
    factors = e.factors if isinstance(e, Mul) else (e,)
    order: List[int] = []
    for f in factors:
        base = f.base if isinstance(f, Pow) else f
        if isinstance(base, Name) and base.name in names:
            order.append(names.index(base.name))
        elif _names_in(f) & set(names):
            raise MalformedPreset(
                f'line {_at(loc)[0]}: write relation terms as coefficients '
                f'times standard monomials'
            )
    if order != sorted(order):
        raise MalformedPreset(
            f'line {_at(loc)[0]}: {format_expr(e)} is not a standard monomial'
        )


class Presentation:
    """Rings, maps and extensions declared by a presentation file.

    :param cap: cardinality up to which ring tables are materialized
    :param config: loaded configuration, read from the toml layers if omitted
    """

    def __init__(self, cap: Optional[int] = None, config: Optional[Config] = None) -> None:
        self.config = config or Config()
        self.cap = cap if cap is not None else self.config.cap
        self.rings: Dict[str, Ring] = {}
        self.maps: Dict[str, RingMap] = {}
        self.derivations: Dict[str, Derivation] = {}
        self.consts: Dict[str, Expr] = {}
        self.extensions: Dict[str, ExtensionSpec] = {}
        self.active: Optional[str] = None
        self._identity: Dict[str, RingMap] = {}
        self._imported: Set[str] = set()

    def __repr__(self) -> str:
        return (
            f'<Presentation rings={list(self.rings)} '
            f'extensions={list(self.extensions)} active={self.active}>'
        )

    # access

    @property
    def extension(self) -> ExtensionSpec:
        """The active extension."""
        if self.active not in self.extensions:
            raise MalformedPreset('the presentation has no active extension')
        return self.extensions[self.active]  # type: ignore

    @property
    def ring(self) -> Ring:
        """The active ring, or the coefficient ring of the active extension."""
        if self.active in self.rings:
            return self.rings[self.active]  # type: ignore
        if self.active in self.extensions:
            return self.extensions[self.active].ring  # type: ignore
        if not self.rings:
            raise MalformedPreset('the presentation declares no ring')
        return list(self.rings.values())[-1]

    def identity(self, ring_name: str) -> RingMap:
        if ring_name not in self._identity:
            self._identity[ring_name] = identity_map(self.rings[ring_name])
        return self._identity[ring_name]

    def element(self, text: str, ring: Optional[Ring] = None) -> Value:
        return _RingAlgebra(self, ring or self.ring).evaluate(parse_expr(text))

    def poly(self, text: str, ext: Optional[ExtensionSpec] = None) -> SkewPoly:
        return _ExtensionAlgebra(self, ext or self.extension).evaluate(parse_expr(text))

    # evaluation of statements

    def execute(self, pf: PresentationFile, top: bool = True) -> Presentation:
        for stmt in pf.statements:
            if isinstance(stmt, ImportDecl):
                if stmt.name not in self._imported:
                    self._imported.add(stmt.name)
                    self.execute(_preset_file(stmt.name), top=False)
            elif isinstance(stmt, ConstDecl):
                self.consts[stmt.name] = stmt.value
            elif isinstance(stmt, RingDecl):
                self.rings[stmt.name] = self._ring(stmt.ring)
                log.debug(f'ring {stmt.name} = {self.rings[stmt.name].description}')
            elif isinstance(stmt, EndoDecl):
                ring = self.rings[stmt.ring]
                images = self._images(ring, stmt.images)
                self.maps[stmt.name] = build_map(ring, images, stmt.name)
            elif isinstance(stmt, DerivDecl):
                ring = self.rings[stmt.ring]
                sigma = self._sigma(stmt.ring, stmt.sigma)
                images = self._images(ring, stmt.images)
                self.derivations[stmt.name] = build_derivation(
                    ring, sigma, images, stmt.name
                )
            elif isinstance(stmt, ExtensionDecl):
                self.extensions[stmt.name] = self._extension(stmt)
            elif top:
                self.active = stmt.name
        if top and self.active is None and self.extensions:
            self.active = list(self.extensions)[-1]
        return self

    def _sigma(self, ring_name: str, name: str) -> RingMap:
        if name == 'id':
            return self.identity(ring_name)
        sigma = self.maps[name]
        if sigma.ring is not self.rings[ring_name]:
            raise MalformedPreset(f'{name} is not an endomorphism of {ring_name}')
        return sigma

    def _images(self, ring: Ring, images: Tuple[Tuple[str, Expr], ...]) -> Dict[str, Value]:
        algebra = _RingAlgebra(self, ring)
        return {gen: algebra.evaluate(value) for gen, value in images}

    def _ring(self, node: RingNode) -> Ring:
        kind, cap = node.kind, self.cap
        bases = [self._ring(b) for b in node.bases]
        if kind == 'ref':
            return self.rings[node.name]  # type: ignore
        if kind == 'Zmod':
            ring: Ring = Zmod(node.ints[0], cap)
        elif kind == 'GF':
            ring = self._field(node)
        elif kind == 'quotient':
            assert node.modulus is not None and node.var is not None
            modulus = _UnivariateAlgebra(self, bases[0], node.var).evaluate(node.modulus)
            ring = Quotient(bases[0], node.var, modulus, cap)
        elif kind == 'triangular':
            ring = Triangular(bases[0], node.ints[0], cap)
        elif kind == 'matrices':
            ring = FullMatrix(bases[0], node.ints[0], cap)
        elif kind == 'trivial':
            ring = TrivialExt(bases[0], cap)
        elif kind == 'Int':
            ring = IntegerRing(cap)
        elif kind == 'polyring':
            ring = PolyOverGF(bases[0], node.var, cap)  # type: ignore
        else:
            ring = Product(bases, cap)
        return build_ring(ring)

    def _field(self, node: RingNode) -> Ring:
        order = node.ints[0]
        field_ring = GF(order, cap=self.cap)
        if node.modulus is None:
            return field_ring
        if field_ring.k == 1:
            raise MalformedPreset(f'GF({order}) is a prime field and takes no modulus')
        free = sorted(_names_in(node.modulus) - set(self.consts))
        if len(free) != 1:
            raise MalformedPreset(
                f'GF({order}): the modulus must be a polynomial in one generator'
            )
        (var,) = free
        modulus = _UnivariateAlgebra(self, Zmod(field_ring.p), var).evaluate(node.modulus)
        return GF(order, modulus, var, self.cap)

    def _extension(self, decl: ExtensionDecl) -> ExtensionSpec:
        ring = self.rings[decl.ring]
        rules = {rule.var: rule for rule in decl.varrules}
        sigmas, deltas = [], []
        for var in decl.vars:
            rule = rules.get(var)
            sigma = self._sigma(decl.ring, rule.sigma if rule else 'id')
            if rule and rule.delta:
                delta = self.derivations[rule.delta]
                if delta.sigma is not sigma:
                    raise MalformedPreset(
                        f'{decl.name}: {rule.delta} is a derivation for '
                        f'{delta.sigma.name}, not for {sigma.name}'
                    )
            else:
                delta = zero_derivation(ring, sigma)
            sigmas.append(sigma)
            deltas.append(delta)
        rewrite_constant = self.config.rewrite_constant
        provisional = ExtensionSpec(
            ring, sigmas, deltas, None, decl.vars, decl.name, rewrite_constant
        )
        algebra = _ExtensionAlgebra(self, provisional)
        quad = {}
        for rule in decl.quadrules:
            j, i = decl.vars.index(rule.left), decl.vars.index(rule.right)
            _standard_words(rule.rhs, decl.vars, rule.loc)
            quad[j, i] = self._relation(algebra.evaluate(rule.rhs), j, i, rule)
        return ExtensionSpec(ring, sigmas, deltas, quad, decl.vars, decl.name, rewrite_constant)

    def _relation(self, rhs: SkewPoly, j: int, i: int, rule: QuadRule) -> QuadRelation:
        ring, n = rhs.ext.ring, rhs.ext.nvars
        pair = tuple(int(k in (i, j)) for k in range(n))
        d, r0, rk = ring.zero, ring.zero, [ring.zero] * n
        for mono, c in rhs.terms.items():
            if mono == pair:
                d = c
            elif sum(mono) == 0:
                r0 = c
            elif sum(mono) == 1:
                rk[mono.index(1)] = c
            else:
                raise MalformedPreset(
                    f'line {_at(rule.loc)[0]}: {rule.left}*{rule.right} may only '
                    f'involve {rule.right}*{rule.left}, variables and constants'
                )
        return QuadRelation(d, r0, tuple(rk))


def load_presentation(
    pf: PresentationFile, cap: Optional[int] = None, config: Optional[Config] = None
) -> Presentation:
    return Presentation(cap, config).execute(pf)


def load_preset(
    name: str, cap: Optional[int] = None, config: Optional[Config] = None
) -> Presentation:
    """Load a catalog preset by name."""
    return load_presentation(_preset_file(name), cap, config)
