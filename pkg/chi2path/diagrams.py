# -*- coding: utf-8 -*-
"""
.. currentmodule:: chi2path.diagrams

.. moduleauthor:: chi2path developers

Diagrams of the second-order nonlinear interaction up to two vertices. A vertex joins exactly one signal and one
idler line to the pump; depending on the direction of the two photon lines it creates a pair (down-conversion),
converts one photon into the other (difference-frequency generation) or annihilates a pair (sum-frequency
generation). Propagator lines run between vertices and current sources (the external coordinates).

=========================================    ==========================================================================
Class / Function                             Characteristics
=========================================    ==========================================================================
:py:class:`Mode`                             Photon line label, signal or idler
:py:class:`VertexKind`                       Vertex type by line directions (create, convert, annihilate)
:py:class:`Process`                          Physical process of a diagram
:py:class:`Diagram`                          Vertices, mode-labelled propagator edges, sources and vacuum legs
:py:class:`EvaluationContext`                Medium, kinematics, propagator mode and source coordinates
:py:func:`enumerate_diagrams`                Topologically distinct diagrams with V vertices and up to P lines
:py:func:`canonical_form`                    Relabelling invariant key of a diagram
:py:func:`symmetry_factor`                   Number of source orderings, s!
:py:func:`evaluate_amplitude`                Feynman-rule value of a diagram
:py:func:`cross_section`                     First-order and cascaded cross sections
:py:func:`allowed_processes`                 Diagrams compatible with an initial Fock state
:py:func:`seeded_cross_section`              Cross section of a seeded (stimulated) process
=========================================    ==========================================================================
"""

import logging
from collections import namedtuple
from enum import Enum
from itertools import combinations, permutations
from math import factorial

import networkx as nx

from .core import (DEFAULTS, HBAR, ArityError, ContextError, DomainError, ForbiddenProcessError,
                   RenormalisationPolicyError, UnsupportedOrderError, complex_quad)
from .greens import DressedPropagator, PropagatorMode
from .nonlinear import biphoton_numeric, effective_coupling, frequency_mismatch, is_energy_allowed

__author__ = "chi2path developers"
__docformat__ = "restructuredtext en"

logger = logging.getLogger(__name__)

MAX_VERTICES = 2
MAX_PROPAGATORS = 4


class Mode(Enum):
    SIGNAL = 's'
    IDLER = 'i'

    @property
    def rank(self):
        return 0 if self is Mode.SIGNAL else 1

    @property
    def partner(self):
        return Mode.IDLER if self is Mode.SIGNAL else Mode.SIGNAL


class VertexKind(Enum):
    CREATE = 'create'
    CONVERT = 'convert'
    ANNIHILATE = 'annihilate'


# incoming and outgoing photon lines per vertex kind
_PORTS = {VertexKind.CREATE: (0, 2), VertexKind.CONVERT: (1, 1), VertexKind.ANNIHILATE: (2, 0)}


class Process(Enum):
    SPDC = 'spdc'
    DFG = 'dfg'
    SFG = 'sfg'
    SHG = 'sfg'
    CASCADED_SPDC = 'cascaded_spdc'
    VACUUM_LOOP = 'vacuum_loop'
    OTHER = 'other'


FIRST_ORDER = (Process.SPDC, Process.DFG, Process.SFG)


def as_process(value):
    """Process from an enum member, its value or its name ('shg' resolves to sum-frequency generation)."""
    if isinstance(value, Process):
        return value
    try:
        return Process(str(value).lower())
    except ValueError:
        try:
            return Process[str(value).upper()]
        except KeyError:
            raise DomainError('unknown process %r' % (value,), field='process')


Source = namedtuple('Source', ['label', 'direction', 'mode'])
Edge = namedtuple('Edge', ['start', 'end', 'mode'])


def _vertex(i):
    return 'v', i


def _source(label):
    return 'x', label


class Diagram(object):
    """
    A diagram with ``V`` vertices and ``P`` propagator lines. Edge endpoints are ``('v', index)`` for vertices and
    ``('x', label)`` for sources; every edge points along the photon flow. ``exchanged`` marks the signal/idler
    exchanged partner of a diagram.
    """

    def __init__(self, kinds, edges, sources, process=Process.OTHER, exchanged=False):
        self.kinds = tuple(kinds)
        self.edges = tuple(Edge(*e) for e in edges)
        self.sources = tuple(Source(*s) for s in sources)
        self.process = process
        self.exchanged = bool(exchanged)
        self.vacuum_legs = tuple((v, 'in' if k is VertexKind.CREATE else 'out') for v, k in enumerate(self.kinds))
        self._validate()

    def _validate(self):
        labels = set(s.label for s in self.sources)
        if len(labels) != len(self.sources):
            raise DomainError('duplicate source labels', field='sources')
        for v, kind in enumerate(self.kinds):
            attached = [e for e in self.edges if _vertex(v) in (e.start, e.end)]
            if len(attached) != 2 or set(e.mode for e in attached) != {Mode.SIGNAL, Mode.IDLER}:
                raise DomainError('vertex %d must join one signal and one idler line' % v, field='edges')
            n_in = sum(e.end == _vertex(v) for e in attached)
            if (n_in, 2 - n_in) != _PORTS[kind]:
                raise DomainError('vertex %d lines do not match its kind %s' % (v, kind.value), field='edges')
        for e in self.edges:
            for node in (e.start, e.end):
                if node[0] == 'v' and not 0 <= node[1] < len(self.kinds) or node[0] == 'x' and node[1] not in labels:
                    raise DomainError('edge endpoint %r is neither a vertex nor a source' % (node,), field='edges')

    @property
    def V(self):
        return len(self.kinds)

    @property
    def P(self):
        return len(self.edges)

    @property
    def vertices(self):
        return tuple(range(self.V))

    def internal_edges(self):
        return [e for e in self.edges if e.start[0] == 'v' and e.end[0] == 'v']

    def swapped(self):
        """Signal/idler exchanged image. Bare propagators without vertices carry no mode and map onto themselves."""
        if not self.kinds:
            return self
        edges = [Edge(e.start, e.end, e.mode.partner) for e in self.edges]
        sources = [Source(s.label, s.direction, s.mode.partner) for s in self.sources]
        return Diagram(self.kinds, edges, sources, self.process, not self.exchanged)

    def to_graph(self):
        """The diagram as a :py:class:`networkx.MultiDiGraph`; vertices carry ``kind``, sources ``direction``."""
        g = nx.MultiDiGraph()
        for v, kind in enumerate(self.kinds):
            g.add_node(_vertex(v), kind=kind.value)
        for s in self.sources:
            g.add_node(_source(s.label), direction=s.direction)
        for e in self.edges:
            g.add_edge(e.start, e.end, mode=e.mode.value)
        return g

    def describe(self):
        """One-line ASCII adjacency description.

        :Example:

        >>> print(enumerate_diagrams(1, 2)[0].describe())
        spdc V=1 P=2 [v0:create] v0 -s-> x1, v0 -i-> x2
        """
        name = lambda node: ('v%d' % node[1]) if node[0] == 'v' else node[1]
        kinds = ' '.join('v%d:%s' % (v, k.value) for v, k in enumerate(self.kinds))
        edges = ', '.join('%s -%s-> %s' % (name(e.start), e.mode.value, name(e.end)) for e in self.edges)
        return '%s V=%d P=%d [%s] %s%s' % (self.process.value, self.V, self.P, kinds, edges,
                                           ' (s<->i)' if self.exchanged else '')

    def __eq__(self, other):
        return isinstance(other, Diagram) and canonical_form(self) == canonical_form(other)

    def __hash__(self):
        return hash(canonical_form(self))

    def __repr__(self):
        return 'Diagram(%s)' % self.describe()


def canonical_form(diagram, modes=True):
    """
    Lexicographically smallest sorted edge list over all relabellings of vertices and sources. Vertices map to
    ``(0, i)``, sources to ``(1, j)`` and modes to their rank (signal first). With ``modes=False`` the mode labels and
    the exchange flag are ignored, which gives the unlabelled topology.

    :param diagram: {Diagram} diagram
    :param modes: {bool} keep mode labels
    :return: {tuple} canonical key
    """
    labels = [s.label for s in diagram.sources]
    best = None
    for vp in permutations(range(diagram.V)):
        for sp in permutations(range(len(labels))):
            key = dict((_vertex(i), (0, vp[i])) for i in range(diagram.V))
            key.update((_source(labels[j]), (1, sp[j])) for j in range(len(labels)))
            edges = tuple(sorted((key[e.start], key[e.end], e.mode.rank if modes else 0) for e in diagram.edges))
            if best is None or edges < best:
                best = edges
    return (best, diagram.exchanged) if modes else best


def _port_assignments(kind):
    """Possible ``(in modes, out modes)`` of a vertex."""
    if kind is VertexKind.CREATE:
        return [((), (Mode.SIGNAL, Mode.IDLER))]
    if kind is VertexKind.ANNIHILATE:
        return [((Mode.SIGNAL, Mode.IDLER), ())]
    return [((Mode.SIGNAL,), (Mode.IDLER,)), ((Mode.IDLER,), (Mode.SIGNAL,))]


def _build(kinds, ports, contracted):
    """Diagram from per-vertex ports; ``contracted`` holds the modes running from vertex 0 to vertex 1."""
    edges = [Edge(_vertex(0), _vertex(1), m) for m in sorted(contracted, key=lambda m: m.rank)]
    incoming, outgoing = [], []
    for v, (ins, outs) in enumerate(ports):
        for m in sorted(ins, key=lambda m: m.rank):
            if not (v == 1 and m in contracted):
                incoming.append((v, m))
        for m in sorted(outs, key=lambda m: m.rank):
            if not (v == 0 and m in contracted):
                outgoing.append((v, m))
    sources = []
    for n, (v, m) in enumerate(incoming + outgoing):
        label = 'x%d' % (n + 1)
        if n < len(incoming):
            sources.append(Source(label, 'in', m))
            edges.append(Edge(_source(label), _vertex(v), m))
        else:
            sources.append(Source(label, 'out', m))
            edges.append(Edge(_vertex(v), _source(label), m))
    return Diagram(kinds, edges, sources, _classify(kinds, len(contracted)))


def _classify(kinds, contractions):
    if len(kinds) == 1:
        return {VertexKind.CREATE: Process.SPDC, VertexKind.CONVERT: Process.DFG,
                VertexKind.ANNIHILATE: Process.SFG}[kinds[0]]
    if len(kinds) == 2:
        if kinds == (VertexKind.CREATE, VertexKind.CREATE):
            return Process.CASCADED_SPDC
        if kinds == (VertexKind.CREATE, VertexKind.ANNIHILATE) and contractions == 2:
            return Process.VACUUM_LOOP
    return Process.OTHER


def _labelled_variants(V):
    """All mode-labelled diagrams of order V. At second order the later vertex absorbs as many lines of the earlier
    vertex as it can; two vertices sharing no line are kept only when they are of the same kind."""
    variants = []
    if V == 1:
        for kind in VertexKind:
            for ports in _port_assignments(kind):
                variants.append(_build((kind,), [ports], ()))
        return variants
    for k1 in VertexKind:
        for k2 in VertexKind:
            m = min(_PORTS[k1][1], _PORTS[k2][0])
            if m == 0 and k1 is not k2:
                continue
            for p1 in _port_assignments(k1):
                for p2 in _port_assignments(k2):
                    for contracted in combinations(set(p1[1]) & set(p2[0]), m):
                        variants.append(_build((k1, k2), [p1, p2], contracted))
    return variants


def _bare_propagators(n):
    sources = [Source('x%d' % (j + 1), 'in', Mode.SIGNAL) for j in range(n)] + \
              [Source('x%d' % (n + j + 1), 'out', Mode.SIGNAL) for j in range(n)]
    edges = [Edge(_source('x%d' % (j + 1)), _source('x%d' % (n + j + 1)), Mode.SIGNAL) for j in range(n)]
    return Diagram((), edges, sources)


def enumerate_diagrams(V, P):
    """
    Topologically distinct diagrams with ``V`` vertices and at most ``P`` propagator lines, each topology together
    with its signal/idler exchanged partner, sorted by number of lines and canonical form.

    :param V: {int} number of vertices, 0, 1 or 2
    :param P: {int} maximal number of propagator lines, up to 4
    :return: {list} of :py:class:`Diagram`
    :raises UnsupportedOrderError: for orders beyond ``V = 2`` or ``P = 4``
    :Example:

    >>> len(enumerate_diagrams(1, 2)), len(enumerate_diagrams(2, 4))
    (6, 12)
    """
    if not (0 <= V <= MAX_VERTICES and 0 <= P <= MAX_PROPAGATORS):
        raise UnsupportedOrderError('only V <= %d and P <= %d are supported, got V=%r, P=%r'
                                    % (MAX_VERTICES, MAX_PROPAGATORS, V, P), field='order')
    if V == 0:
        return [_bare_propagators(n) for n in range(1, P + 1)]

    topologies = {}
    for d in _labelled_variants(V):
        if d.P <= P:
            topologies.setdefault(canonical_form(d, modes=False), []).append(d)
    result = []
    for variants in topologies.values():
        reference = min(variants, key=canonical_form)
        result.extend([reference, reference.swapped()])
    result.sort(key=lambda d: (d.P, canonical_form(d)))
    logger.debug("enumerated %d diagrams (%d topologies) for V=%d, P<=%d", len(result), len(topologies), V, P)
    return result


def symmetry_factor(d):
    """Number of orderings of the current sources, ``s!``.

    :Example:

    >>> [symmetry_factor(d) for d in enumerate_diagrams(1, 2)][:2]
    [2, 2]
    """
    return factorial(len(d.sources))


def allowed_processes(diagrams, signal=0, idler=0):
    """
    Diagrams whose incoming photon lines can be fed by an initial Fock state with ``signal`` signal and ``idler``
    idler photons. The vacuum only admits diagrams without incoming lines.

    :param diagrams: {list} of :py:class:`Diagram`
    :param signal: {int} signal photons in the initial state
    :param idler: {int} idler photons in the initial state
    :return: {list} admitted diagrams in input order
    """
    if signal < 0 or idler < 0:
        raise DomainError('photon numbers must be >= 0', field='initial_state')
    admitted = []
    for d in diagrams:
        needed = [s.mode for s in d.sources if s.direction == 'in']
        if needed.count(Mode.SIGNAL) <= signal and needed.count(Mode.IDLER) <= idler:
            admitted.append(d)
    return admitted


def seeded_cross_section(sigma, mean_photon_number):
    """Cross section of a process seeded by a coherent state with ``|alpha|^2 = mean_photon_number``."""
    if mean_photon_number < 0.:
        raise DomainError('mean photon number must be >= 0', field='mean_photon_number')
    return mean_photon_number * sigma


class EvaluationContext(object):
    """
    Everything needed to evaluate a diagram: the nonlinear medium, the kinematics, the propagator of the linear
    medium and the coordinates ``label -> (omega, x)`` of the sources.
    """

    def __init__(self, medium, kin, propagator_mode=PropagatorMode.ANALYTIC_1D, coordinates=None, grid=None,
                 scale=1.):
        """
        :param medium: {Chi2Medium} nonlinear medium, its ``linear`` profile dresses the propagators
        :param kin: {ThreeWaveKinematics} kinematics
        :param propagator_mode: {PropagatorMode or str} propagator evaluation mode
        :param coordinates: {dict} source label to ``(omega, x)``
        :param grid: {array} grid of the numeric propagator
        :param scale: {float} propagator normalisation
        """
        self.medium = medium
        self.kin = kin
        self.propagator_mode = PropagatorMode(propagator_mode)
        self.coordinates = dict((k, (float(w), float(x))) for k, (w, x) in (coordinates or {}).items())
        self.propagator = DressedPropagator(medium.linear, self.propagator_mode, grid, scale)

    def omega(self, mode):
        return self.kin.omega_s if mode is Mode.SIGNAL else self.kin.omega_i

    def resolve(self, diagram):
        """Source positions of ``diagram``; checks binding and frequencies."""
        positions = {}
        tolerance = DEFAULTS['energy_tolerance'] * self.kin.pump.omega_p
        for s in diagram.sources:
            if s.label not in self.coordinates:
                raise ContextError("source '%s' has no coordinate" % s.label, field='coordinates.%s' % s.label)
            omega, x = self.coordinates[s.label]
            if diagram.V and abs(omega - self.omega(s.mode)) > tolerance:
                raise ForbiddenProcessError("source '%s' at omega = %g does not carry the %s frequency %g"
                                            % (s.label, omega, s.mode.name.lower(), self.omega(s.mode)),
                                            field='coordinates.%s' % s.label)
            positions[s.label] = omega, x
        return positions


def evaluate_amplitude(d, ctx):
    """
    Feynman-rule value of a diagram: ``(i / 3! hbar)`` and an integral of ``lambda(z)`` over the nonlinear extent
    per vertex, ``G / (i hbar)`` per propagator line and ``i`` per source.

    :param d: {Diagram} diagram
    :param ctx: {EvaluationContext} evaluation context
    :return: {complex} amplitude
    :raises RenormalisationPolicyError: for the vacuum loop
    :raises ContextError: for unbound sources
    :raises ForbiddenProcessError: for energy-violating kinematics or mismatched source frequencies
    """
    if d.process is Process.VACUUM_LOOP:
        raise RenormalisationPolicyError('the vacuum loop renormalises the pump intensity and is not evaluated')
    if d.V and not is_energy_allowed(ctx.kin):
        raise ForbiddenProcessError('omega_p - omega_s - omega_i = %g violates energy conservation at the vertices'
                                    % frequency_mismatch(ctx.kin), field='kinematics')
    sources = ctx.resolve(d)
    G = ctx.propagator

    def position(node, z):
        return z[node[1]] if node[0] == 'v' else sources[node[1]][1]

    def frequency(edge):
        if d.V:
            return ctx.omega(edge.mode)
        return sources[edge.start[1]][0]

    def lines(z):
        res = 1. + 0j
        for e in d.edges:
            res *= G(frequency(e), position(e.end, z), position(e.start, z)) / (1j * HBAR)
        return res

    prefactor = (1j / (6. * HBAR)) ** d.V * 1j ** len(d.sources)
    if d.V == 0:
        return complex(prefactor * lines(()))

    a, b = ctx.medium.extent
    fixed = [x for _, x in sources.values()] + ctx.medium.linear.boundaries()

    def vertex(z):
        return effective_coupling(ctx.medium, ctx.kin.pump, z)

    if d.V == 1:
        value = complex_quad(lambda z: vertex(z) * lines((z,)), a, b, fixed)
    else:
        def inner(z0):
            lam0 = vertex(z0)
            if lam0 == 0.:
                return 0j
            return lam0 * complex_quad(lambda z1: vertex(z1) * lines((z0, z1)), a, b, fixed + [z0])
        value = complex_quad(inner, a, b, fixed)
    return complex(prefactor * value)


def cross_section(process, ctx, coords):
    """
    Cross section of a first-order process, ``X(x, y) / hbar^2`` (identical for SPDC, DFG and SFG), or of cascaded
    down-conversion, ``24 / hbar^4 * X(x1, x2) * X(x3, x4)``.

    :param process: {Process or str} process
    :param ctx: {EvaluationContext} context providing medium, kinematics and propagators
    :param coords: {list} ``(omega, x)`` pairs: 2 for first order, 4 for the cascade
    :return: {complex} cross section
    :raises ArityError: for the wrong number of coordinates
    """
    process = as_process(process)
    expected = 2 if process in FIRST_ORDER else 4 if process is Process.CASCADED_SPDC else None
    if process is Process.VACUUM_LOOP:
        raise RenormalisationPolicyError('the vacuum loop has no cross section')
    if expected is None:
        raise DomainError('no cross section is defined for %s' % process.name, field='process')
    if len(coords) != expected:
        raise ArityError('%s needs %d coordinates, got %d' % (process.name, expected, len(coords)), field='coords')

    def pair(first, second):
        kin = ctx.kin._replace(omega_s=float(first[0]), omega_i=float(second[0]))
        return biphoton_numeric(ctx.medium, kin, ctx.propagator, ctx.propagator, float(first[1]), float(second[1]))

    if expected == 2:
        return pair(coords[0], coords[1]) / HBAR ** 2
    return 24. * pair(coords[0], coords[1]) * pair(coords[2], coords[3]) / HBAR ** 4
