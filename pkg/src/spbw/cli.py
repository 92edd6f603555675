# This Source Code Form is subject to the terms of the Mozilla Public
# License, v. 2.0. If a copy of the MPL was not distributed with this
# file, You can obtain one at http://mozilla.org/MPL/2.0/.
import functools
import logging
import shutil
import tempfile
import time
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import click

from .assocprimes import (
    enumerate_right_ideals,
    lattice_dot,
    make_nilpotent_good,
    nass_ring,
    ndeg,
    quasi_prime_check,
    verify_good_descent,
    verify_nass_extension,
)
from .config import Config
from .errors import LawViolation, PresentationError, SpbwError, UnresolvedName
from .finring import Ring, Value, nil_data
from .nilweak import (
    galois_laws,
    is_nilpotent_poly,
    pi_armendariz_check,
    verify_nilradical,
    verify_theorem_3x,
    weak_annihilator_ext,
    weak_annihilator_ring,
)
from .presentation import Presentation, load_presentation, parse_presentation
from .presets import CATALOG, preset_names, preset_text
from .report import ReportDoc, emit_report
from .ringmaps import (
    CompatReport,
    Derivation,
    RingMap,
    check_compatibility,
    derived_law_suite,
)
from .spbwalg import check_arithmetic, check_pbw_confluence
from .table import Table, verdict

__version__ = '0.1.0'
__all__ = ()

log = logging.getLogger(__name__)

MODES = ['fast', 'brute', 'both']
THEOREMS = [
    'ann-subsets',
    'ann-principal',
    'ann-element',
    'armendariz',
    'nass-ext',
    'confluence',
    'galois',
    'nilradical',
    'arith',
    'good-descent',
]


class NaturalOrderGroup(click.Group):
    def list_commands(self, ctx):  # type: ignore
        return self.commands.keys()


@click.group(cls=NaturalOrderGroup)
@click.option('--debug', is_flag=True, envvar='SPBW_DEBUG')
def cli(debug: bool) -> None:
    if debug:
        log_format = '[{asctime}.{msecs:03.0f}] {levelname}:{name}: {message}'
        log_level = logging.DEBUG
    else:
        log_format = '{message}'
        log_level = logging.INFO
    logging.basicConfig(style='{', format=log_format, datefmt='%H:%M:%S')
    logging.getLogger('spbw').setLevel(log_level)


class Run:
    """Input, report and seed shared by the steps of one command."""

    def __init__(
        self,
        command: str,
        file: Optional[Path],
        preset: Optional[str],
        ext: Optional[str],
        cap: Optional[int],
        seed: Optional[int],
        mode: Optional[str],
    ) -> None:
        self._file = file
        self._preset = preset
        self._ext = ext
        self._cap = cap
        self.config = Config()
        self.seed = self.config.seed if seed is None else seed
        self.mode = mode
        self.doc = ReportDoc(command, self._source(), self.seed, mode)

    def _source(self) -> str:
        if self._file and self._preset:
            raise click.UsageError('--file and --preset are exclusive')
        if self._file:
            try:
                return self._file.read_text()
            except OSError as exc:
                raise PresentationError(f'Cannot read {self._file}: {exc.strerror}')
        if self._preset:
            return preset_text(self._preset)
        return ''

    @property
    def pres(self) -> Presentation:
        if not hasattr(self, '_pres'):
            if not (self._file or self._preset):
                raise click.UsageError('one of --file or --preset is required')
            source = str(self._file) if self._file else self._preset
            pf = parse_presentation(self._source(), source)  # type: ignore
            self._pres = load_presentation(pf, self._cap, self.config)
            if self._ext:
                if self._ext not in self._pres.extensions:
                    raise UnresolvedName(f'no extension named {self._ext}')
                self._pres.active = self._ext
            log.debug(f'Loaded {self._pres!r}')
        return self._pres

    def echo(self, obj: Any = '') -> None:
        click.echo(str(obj))


def _input_options(func: Callable[..., None]) -> Callable[..., None]:
    options = [
        click.option('--file', type=Path, help='Presentation file'),
        click.option('--preset', type=click.Choice(preset_names()), help='Catalog preset'),
        click.option('--ext', help='Extension to use instead of the active one'),
        click.option('--cap', type=int, help='Cardinality cap for ring tables'),
        click.option('--seed', type=int, help='Seed of randomized steps'),
        click.option('--json', 'json_path', type=Path, help='Write a JSON report'),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _mode_option(func: Callable[..., None]) -> Callable[..., None]:
    return click.option(
        '--mode', type=click.Choice(MODES), help='Fast path, brute force or both'
    )(func)


def _write_report(run: Run, json_path: Optional[Path], start: float) -> None:
    run.doc.wall_time = time.perf_counter() - start
    if not json_path:
        return
    try:
        emit_report(run.doc, json_path)
    except SpbwError as exc:
        click.echo(f'error: {exc}', err=True)
        click.get_current_context().exit(2)


def reported(command: str) -> Callable[[Callable[..., None]], Callable[..., None]]:
    """Run the body with a Run, map errors to exit 2 and false verdicts to 1."""

    def decorator(func: Callable[..., None]) -> Callable[..., None]:
        @functools.wraps(func)
        def wrapper(
            file: Optional[Path],
            preset: Optional[str],
            ext: Optional[str],
            cap: Optional[int],
            seed: Optional[int],
            json_path: Optional[Path],
            **kwargs: Any,
        ) -> None:
            ctx = click.get_current_context()
            start = time.perf_counter()
            run: Optional[Run] = None
            try:
                run = Run(command, file, preset, ext, cap, seed, kwargs.get('mode'))
                func(run, **kwargs)
            except SpbwError as exc:
                click.echo(f'error: {exc}', err=True)
                if run is not None:
                    run.doc.fail(exc)
                    _write_report(run, json_path, start)
                ctx.exit(2)
            assert run is not None
            _write_report(run, json_path, start)
            if run.doc.verdict is False:
                ctx.exit(1)

        return wrapper

    return decorator


def _fmt_set(ring: Ring, elements: Sequence[Value], limit: int = 16) -> str:
    shown = [ring.format(x) for x in sorted(elements)]
    if len(shown) > limit:
        return '{' + ', '.join(shown[:limit]) + f', ... ({len(shown)} elements)}}'
    return '{' + ', '.join(shown) + '}'


def _formatted(ring: Ring, elements: Sequence[Value]) -> List[str]:
    return [ring.format(x) for x in sorted(elements)]


@cli.command('ring-info')
@_input_options
@reported('ring-info')
def ring_info(run: Run) -> None:
    """Show the active ring, its nilradical data and its maps."""
    pres = run.pres
    ring = pres.ring
    table = Table('property', 'value')
    table.add_row('ring', ring.description)
    table.add_row('cardinality', ring.cardinality or 'infinite')
    table.add_row('generators', ', '.join(ring.generators()) or '-')
    payload: Dict[str, Any] = {
        'ring': ring.description,
        'cardinality': ring.cardinality,
        'generators': list(ring.generators()),
        'symbolic': not ring.tabulated,
    }
    if ring.tabulated:
        nd = nil_data(ring)
        table.add_row('commutative', verdict(ring.is_commutative()))
        table.add_row('nilpotents', len(nd.nilpotents))
        table.add_row('nilpotency index', nd.nilindex or '-')
        table.add_row('NI', verdict(nd.is_ni))
        table.add_row('2-primal', verdict(nd.is_2primal))
        table.add_row('prime radical', _fmt_set(ring, nd.prime_radical))
        payload.update(
            commutative=ring.is_commutative(),
            nilpotents=frozenset(_formatted(ring, nd.nilpotents)),
            ni=nd.is_ni,
            two_primal=nd.is_2primal,
        )
        if nd.nilindex is not None:
            payload['nilindex'] = nd.nilindex
    else:
        table.add_row('tables', 'symbolic, no tables')
    run.echo(table)
    maps = [m for m in [*pres.maps.values(), *pres.derivations.values()] if m.ring is ring]
    if maps:
        run.echo()
        mtable = Table('map', 'kind', 'injective')
        for m in maps:
            if isinstance(m, RingMap):
                mtable.add_row(m.name, 'endomorphism', verdict(m.injective))
            else:
                mtable.add_row(m.name, f'{m.sigma.name}-derivation', '')
        run.echo(mtable)
        payload['maps'] = [m.name for m in maps]
    run.doc.add('ring', **payload)


def _maps(pres: Presentation) -> Tuple[Ring, List[RingMap], List[Derivation]]:
    """Maps of the active extension, or all maps on the active ring."""
    if pres.extensions:
        ext = pres.extension
        ring = ext.ring
        sigmas: List[RingMap] = list({m.name: m for m in ext.sigmas}.values())
        deltas: List[Derivation] = list({d.name: d for d in ext.deltas}.values())
    else:
        ring = pres.ring
        sigmas = [m for m in pres.maps.values() if m.ring is ring]
        deltas = [d for d in pres.derivations.values() if d.ring is ring]
    return ring, sigmas, deltas


def _witness_text(
    ring: Ring, sigmas: List[RingMap], deltas: List[Derivation], key: str, report: CompatReport
) -> str:
    w = report.witnesses.get(key)
    if w is None:
        return ''
    m = (sigmas if 'sigma' in key else deltas)[w.index]
    a, b = ring.format(w.a), ring.format(w.b)
    ab = ring.format(ring.mul(w.a, w.b))
    amb = ring.format(ring.mul(w.a, m(w.b)))
    return f'C = {a}, D = {b}: CD = {ab}, C{m.name}(D) = {amb}'


def _compat_payload(
    ring: Ring, sigmas: List[RingMap], deltas: List[Derivation], report: CompatReport
) -> Dict[str, Any]:
    witnesses = {}
    for key, w in report.witnesses.items():
        m = (sigmas if 'sigma' in key else deltas)[w.index]
        witnesses[key] = {'map': m.name, 'a': ring.format(w.a), 'b': ring.format(w.b)}
    return {
        'ring': ring.description,
        'sigmas': [m.name for m in sigmas],
        'deltas': [d.name for d in deltas],
        'method': report.mode,
        'samples': report.samples,
        'verdicts': report.verdicts,
        'witnesses': witnesses,
    }


@cli.command('check-compat')
@_input_options
@_mode_option
@reported('check-compat')
def check_compat(run: Run, mode: Optional[str]) -> None:
    """Check strict and weak (Σ,Δ)-compatibility of the declared maps."""
    ring, sigmas, deltas = _maps(run.pres)
    if mode is None:
        mode = 'brute' if ring.tabulated else 'fast'
    method = 'sampled' if mode == 'fast' else 'exhaustive'
    report = check_compatibility(
        ring, sigmas, deltas, method, run.config.samples, run.seed
    )
    table = Table('law', 'holds', 'witness')
    for key, ok in report.verdicts.items():
        table.add_row(key, verdict(ok), _witness_text(ring, sigmas, deltas, key, report))
    run.echo(f'{ring.description}, {report.mode}')
    run.echo(table)
    run.doc.add('compat', **_compat_payload(ring, sigmas, deltas, report))
    run.doc.judge(report.ok)
    if mode != 'both':
        return
    sampled = check_compatibility(
        ring, sigmas, deltas, 'sampled', run.config.samples, run.seed
    )
    contradicted = [
        key for key, ok in sampled.verdicts.items() if not ok and report.verdicts[key]
    ]
    run.doc.add(
        'compat', contradicted=contradicted, **_compat_payload(ring, sigmas, deltas, sampled)
    )
    run.doc.judge(not contradicted)
    for kind in ['strict', 'weak']:
        laws = derived_law_suite(ring, sigmas, deltas, kind)
        failed = [law for law in laws if not law.holds]
        run.echo(f'{kind} derived laws: {len(laws) - len(failed)}/{len(laws)} hold')
        run.doc.add(
            'derived_laws',
            law_kind=kind,
            checked=len(laws),
            failed=[(law.law, law.theta, law.beta) for law in failed],
        )


@cli.command()
@_input_options
@click.argument('exprs', nargs=-1, required=True)
@reported('mul')
def mul(run: Run, exprs: Tuple[str, ...]) -> None:
    """Multiply polynomials of the active extension left to right."""
    factors = [run.pres.poly(e) for e in exprs]
    result = functools.reduce(lambda f, g: f * g, factors)
    run.echo(result)
    run.doc.add('product', factors=list(exprs), result=str(result))


@cli.command()
@_input_options
@reported('nilradical')
def nilradical(run: Run) -> None:
    """Show N(R) and whether N(A) = N(R)A is certified."""
    pres = run.pres
    ring = pres.ring
    nd = nil_data(ring)
    table = Table('property', 'value')
    table.add_row('N(R)', _fmt_set(ring, nd.nilpotents))
    table.add_row('|N(R)|', len(nd.nilpotents))
    table.add_row('nilpotency index', nd.nilindex or '-')
    table.add_row('NI', verdict(nd.is_ni))
    table.add_row('2-primal', verdict(nd.is_2primal))
    payload: Dict[str, Any] = {
        'ring': ring.description,
        'nilpotents': frozenset(_formatted(ring, nd.nilpotents)),
        'ni': nd.is_ni,
        'two_primal': nd.is_2primal,
    }
    if nd.ni_witness:
        kind, a, b = nd.ni_witness
        table.add_row('NI witness', f'{kind} of {ring.format(a)} and {ring.format(b)}')
        payload['ni_witness'] = (kind, ring.format(a), ring.format(b))
    if pres.extensions:
        cert = pres.extension.certificate
        certified = cert.ni and cert.weak
        name = pres.extension.name
        table.add_row(f'N({name}) = N(R){name}', verdict(certified))
        payload['extension'] = pres.extension.name
        payload['certificate'] = cert.flags()
    run.echo(table)
    run.doc.add('nilradical', **payload)


@cli.command()
@_input_options
@_mode_option
@click.argument('expr')
@reported('nilpoly')
def nilpoly(run: Run, expr: str, mode: Optional[str]) -> None:
    """Decide whether a polynomial is nilpotent."""
    f = run.pres.poly(expr)
    method = {'fast': 'criterion', 'brute': 'oracle', 'both': 'both'}[mode or 'fast']
    try:
        nilpotent = is_nilpotent_poly(f, method)
    except LawViolation as exc:
        run.echo(f'criterion and oracle disagree on {f}')
        run.doc.add('nilpotent', poly=str(f), method=method, witness=str(exc.witness))
        run.doc.judge(False)
        return
    run.echo(f'{f} is {"" if nilpotent else "not "}nilpotent')
    run.doc.add('nilpotent', poly=str(f), method=method, nilpotent=nilpotent)


@cli.command('weak-ann')
@_input_options
@_mode_option
@click.option('--degree', type=int, default=1, help='Degree bound of candidates')
@click.option('--ring', 'ring_side', is_flag=True, help='Elements of the ring')
@click.argument('exprs', nargs=-1, required=True)
@reported('weak-ann')
def weak_ann(
    run: Run, exprs: Tuple[str, ...], mode: Optional[str], degree: int, ring_side: bool
) -> None:
    """Weak annihilator of a set of ring elements or polynomials."""
    pres = run.pres
    if ring_side or not pres.extensions:
        ring = pres.ring
        report = weak_annihilator_ring(ring, [pres.element(e) for e in exprs])
        ext_name = None
    else:
        ext = pres.extension
        ring, ext_name = ext.ring, ext.name
        method = {'fast': 'fastpath', 'brute': 'brute', 'both': 'both'}[mode or 'fast']
        report = weak_annihilator_ext(ext, [pres.poly(e) for e in exprs], degree, method)
    generator = None if report.generator is None else ring.format(report.generator)
    table = Table('property', 'value')
    table.add_row('query', report.query)
    table.add_row('method', report.method)
    payload: Dict[str, Any] = {
        'query': report.query,
        'method': report.method,
        'generator': generator,
    }
    if report.annihilator is not None:
        table.add_row('N_R', _fmt_set(ring, report.annihilator))
        table.add_row('generator', generator or 'not principal by a nilpotent')
        payload['annihilator'] = frozenset(_formatted(ring, report.annihilator))
    if ext_name:
        table.add_row('degree bound', degree)
        payload['degree_bound'] = degree
    if report.brute is not None:
        table.add_row('candidates in N_A', len(report.brute))
        payload['brute_cardinality'] = len(report.brute)
    if report.method == 'both_agree':
        table.add_row('agree', verdict(report.agree))
        payload['witnesses'] = report.witnesses
        run.doc.judge(report.agree)
    run.echo(table)
    run.doc.add('weak_annihilator', **payload)


@cli.command('good-poly')
@_input_options
@click.argument('expr')
@reported('good-poly')
def good_poly(run: Run, expr: str) -> None:
    """Multiply a polynomial on the right into a nilpotent good one."""
    f = run.pres.poly(expr)
    ring = f.ext.ring
    result = make_nilpotent_good(f)
    data = ndeg(result.fr)
    table = Table('property', 'value')
    table.add_row('f', f)
    table.add_row('r', ring.format(result.r))
    table.add_row('fr', result.fr)
    table.add_row('Ndeg', data.ndeg)
    table.add_row('steps', result.steps)
    run.echo(table)
    run.doc.add(
        'good_poly',
        poly=str(f),
        r=ring.format(result.r),
        fr=str(result.fr),
        ndeg=data.ndeg,
        steps=result.steps,
    )


@cli.command('quasi-primes')
@_input_options
@click.option('--force', is_flag=True, help='Enumerate above the ideal cap')
@click.option('--graph', type=Path, help='Render the lattice to a file')
@reported('quasi-primes')
def quasi_primes(run: Run, force: bool, graph: Optional[Path]) -> None:
    """List the right-ideal lattice with quasi-prime certificates."""
    ring = run.pres.ring
    lattice = enumerate_right_ideals(ring, force)
    table = Table('ideal', 'size', 'quasi-prime', 'N_R(I)')
    ideals = []
    for ideal in lattice:
        cert = quasi_prime_check(ideal, lattice)
        table.add_row(
            ideal,
            len(ideal.elements),
            verdict(cert.is_quasi_prime),
            _fmt_set(ring, cert.annihilator),
        )
        ideals.append(
            {
                'generators': _formatted(ring, ideal.generators),
                'cardinality': len(ideal.elements),
                'quasi_prime': cert.is_quasi_prime,
                'annihilator': frozenset(_formatted(ring, cert.annihilator)),
            }
        )
    run.echo(table)
    run.doc.add('quasi_primes', ring=ring.description, ideals=ideals)
    if graph:
        dot = lattice_dot(lattice)
        fmt = graph.suffix[1:] or 'pdf'
        tgt = dot.render(tempfile.mkstemp()[1], cleanup=True, format=fmt)
        shutil.move(tgt, graph)


@cli.command()
@_input_options
@click.option('--force', is_flag=True, help='Enumerate above the ideal cap')
@reported('nass')
def nass(run: Run, force: bool) -> None:
    """Nilpotent associated primes of the active ring."""
    ring = run.pres.ring
    primes = nass_ring(ring, force)
    lattice = enumerate_right_ideals(ring, force)
    table = Table('prime', 'size', 'elements')
    entries = []
    for p in primes:
        gens = next((i.generators for i in lattice if i.elements == p), tuple(sorted(p)))
        label = '<' + ', '.join(ring.format(g) for g in gens) + '>' if gens else '<0>'
        table.add_row(label, len(p), _fmt_set(ring, p))
        entries.append(
            {
                'generators': _formatted(ring, gens),
                'cardinality': len(p),
                'elements': frozenset(_formatted(ring, p)),
            }
        )
    run.echo(table)
    run.doc.add('nass', ring=ring.description, primes=entries)


def _theorem(
    run: Run, thm: str, trials: Optional[int], degree: Optional[int]
) -> Tuple[bool, Any]:
    pres, seed = run.pres, run.seed
    if thm == 'galois':
        report: Any = galois_laws(pres.ring, trials or 200, seed)
        run.echo(f'{report.checked} sets checked, {len(report.violations)} violations')
        return report.ok, report
    ext = pres.extension
    if thm.startswith('ann-'):
        which = {
            'ann-subsets': 'subsets',
            'ann-principal': 'principal_ideals',
            'ann-element': 'single_elements',
        }[thm]
        report = verify_theorem_3x(ext, which, trials or 20, seed, degree or 1)
        table = Table('target', 'generator', 'holds')
        for t in report.trials:
            gen = '-' if t.generator is None else ext.ring.format(t.generator)
            table.add_row(t.target, gen, verdict(t.ok))
        run.echo(table)
    elif thm == 'armendariz':
        report = pi_armendariz_check(ext, trials or 500, seed)
        run.echo(f'{report.trials} pairs, {len(report.counterexamples)} counterexamples')
    elif thm == 'nass-ext':
        report = verify_nass_extension(ext, degree or 1, trials or 20, seed)
        table = Table('check', 'subject', 'holds')
        for p, ok, _ in report.forward:
            table.add_row('forward', _fmt_set(ext.ring, p), verdict(ok))
        for good, p, ok in report.backward:
            table.add_row('backward', good, verdict(ok))
        run.echo(table)
    elif thm == 'confluence':
        report = check_pbw_confluence(ext, run.config.samples, seed)
        run.echo(f'{report.checked} overlaps checked ({report.mode})')
        if report.witness:
            kind, idx, lhs, rhs = report.witness
            run.echo(f'{kind} overlap {idx}: {lhs} != {rhs}')
        return report.confluent, report
    elif thm == 'nilradical':
        report = verify_nilradical(ext, trials or 500, seed, degree or 2)
        run.echo(
            f'{report.trials} polynomials, {report.nilpotent} nilpotent, '
            f'{len(report.mismatches)} mismatches, '
            f'{len(report.budget_exceeded)} budget overruns'
        )
    elif thm == 'arith':
        report = check_arithmetic(ext, trials or 1000, seed, degree or 2)
        run.echo(
            f'{report.trials} triples, {report.closed_form_checked} closed forms, '
            f'{len(report.failures)} failures'
        )
    else:
        report = verify_good_descent(ext, trials or 100, seed, degree or 2)
        run.echo(f'{len(report.steps)} descents, {len(report.failures)} failures')
    return report.ok, report


@cli.command()
@_input_options
@click.option('--thm', type=click.Choice(THEOREMS), required=True, help='Statement to verify')
@click.option('--trials', type=int, help='Number of seeded trials')
@click.option('--degree', type=int, help='Degree bound')
@reported('verify')
def verify(run: Run, thm: str, trials: Optional[int], degree: Optional[int]) -> None:
    """Verify a statement on seeded or exhaustive instances."""
    ok, report = _theorem(run, thm, trials, degree)
    run.echo(f'{thm}: {verdict(ok)}')
    run.doc.add(thm, ok=ok, report=report)
    run.doc.judge(ok)


@cli.command()
@click.option('--json', 'json_path', type=Path, help='Write a JSON report')
def presets(json_path: Optional[Path]) -> None:
    """List the preset catalog."""
    table = Table('preset', 'description')
    for name, desc in CATALOG.items():
        table.add_row(name, desc)
    click.echo(str(table))
    if json_path:
        doc = ReportDoc('presets')
        doc.add('presets', presets=CATALOG)
        try:
            emit_report(doc, json_path)
        except SpbwError as exc:
            click.echo(f'error: {exc}', err=True)
            click.get_current_context().exit(2)
