"""Maps between charts: images, graphs, finiteness, pullback, pushforward.

A ChartMap is a morphism of charts source -> target, stored through its
algebra map: each target variable gets a polynomial image over the source
(checked to send the target relations to zero).  All geometric operations
run through the graph: the product ring on source and (renamed) target
variables, with the graph ideal

    (source relations) + (target variable - its image).

Eliminating the source block gives closures of images; pure powers of the
source variables in a block-order basis certify finiteness; coefficient
modules over the target block present pushforward modules.
"""

from .errors import EngineError, RingMismatchError
from .geometry import Chart, Cycle, codim, cycle_of_subscheme
from .groebner import Ideal, eliminate
from .homology import FPModule, FreeModuleElement, coefficient_module
from .polyring import PolynomialRing, elimination_order, transport
from .primes import PrimeIdeal, generic_rank


class ChartMap:
    """A morphism of charts, dual to images of the target coordinates."""

    def __init__(self, source, target, images, flat=None, finite=None, proper=None):
        if source.ring.field != target.ring.field:
            raise RingMismatchError("chart map across base fields")
        self.source = source
        self.target = target
        imgs = {}
        for nm in target.ring.names:
            if nm not in images:
                raise EngineError(f"no image for target variable {nm!r}")
            v = images[nm]
            imgs[nm] = source.ring.parse(v) if isinstance(v, str) else v
        self.images = imgs
        for g in target.ideal.gens:
            if not source.ideal.contains(self.pullback(g)):
                raise EngineError(
                    f"map does not respect target relations: {g} pulls back "
                    f"to {source.ideal.normal_form(self.pullback(g))}")
        self.flat = flat
        self.finite = finite
        self.proper = proper
        self._graph = None
        self._finite_checked = None

    def pullback(self, f):
        """The image of a target function in the source algebra."""
        if isinstance(f, str):
            f = self.target.ring.parse(f)
        image_list = [self.images[nm] for nm in self.target.ring.names]
        return f.substitute(image_list, self.source.ring)

    def then(self, other):
        """The composite source -> target -> other.target."""
        if other.source != self.target:
            raise EngineError("composition mismatch: target != next source")
        images = {nm: self.pullback(other.images[nm])
                  for nm in other.target.ring.names}
        flat = True if (self.flat and other.flat) else None
        finite = True if (self.finite and other.finite) else None
        proper = True if (self.proper and other.proper) else None
        return ChartMap(self.source, other.target, images,
                        flat=flat, finite=finite, proper=proper)

    def graph(self):
        """(product ring, graph ideal, source var names, target rename map)."""
        if self._graph is None:
            self._graph = _build_graph(self)
        return self._graph

    def is_finite(self):
        """Pure powers of every source variable in the elimination basis of
        the graph ideal certify module-finiteness over the target."""
        if self._finite_checked is None:
            P, G, src_names, _ = self.graph()
            self._finite_checked = (
                _standard_source_monomials(P, G, src_names) is not None)
            if self._finite_checked:
                self.finite = True
        return self._finite_checked

    def __repr__(self):
        pairs = ", ".join(f"{nm} -> {self.images[nm]}"
                          for nm in self.target.ring.names)
        return f"<map {self.source.name} -> {self.target.name}: {pairs}>"


def identity_map(chart):
    return ChartMap(chart, chart, {nm: nm for nm in chart.ring.names},
                    flat=True, finite=True, proper=True)


def inclusion_of_subscheme(chart, ideal):
    """The closed immersion V(ideal) -> chart."""
    if not isinstance(ideal, Ideal):
        ideal = Ideal(chart.ring, ideal)
    sub = Chart(f"{chart.name}|V", chart.ring, ideal + chart.ideal)
    return ChartMap(sub, chart, {nm: nm for nm in chart.ring.names},
                    finite=True, proper=True)


def _build_graph(m):
    src = m.source.ring
    tgt = m.target.ring
    rename = {}
    taken = set(src.names)
    for nm in tgt.names:
        new = nm
        while new in taken:
            new = new + "_t"
        rename[nm] = new
        taken.add(new)
    P = PolynomialRing(src.field, src.names + tuple(rename[nm] for nm in tgt.names))
    gens = [transport(g, P) for g in m.source.ideal.gens]
    for nm in tgt.names:
        yvar = P.var(P.index_of(rename[nm]))
        gens.append(yvar - transport(m.images[nm], P))
    return P, Ideal(P, gens), src.names, rename


def _standard_source_monomials(P, G, src_names, bound=100000):
    """Monomials in the source variables outside the leading ideal of the
    block-order basis; None when some source variable has no pure power
    (the map is then not finite)."""
    if G.is_unit():
        return []  # empty locus: the zero module is finite
    idx = [P.index_of(nm) for nm in src_names]
    order = elimination_order(idx, P.nvars)
    lead = []
    for g in G.groebner_basis(order):
        e = max((t[0] for t in g.terms), key=order.key)
        if all(e[i] == 0 for i in range(P.nvars) if i not in idx):
            lead.append(tuple(e[i] for i in idx))
    caps = [None] * len(idx)
    for e in lead:
        nz = [i for i, k in enumerate(e) if k]
        if len(nz) == 1 and (caps[nz[0]] is None or e[nz[0]] < caps[nz[0]]):
            caps[nz[0]] = e[nz[0]]
    if any(c is None for c in caps):
        return None
    import itertools
    total = 1
    for c in caps:
        total *= max(c, 1)
        if total > bound:
            raise EngineError("standard monomial count exceeds bound")
    out = []
    for exps in itertools.product(*[range(c) for c in caps]):
        if not any(all(exps[i] >= e[i] for i in range(len(idx))) for e in lead):
            mono = P.one
            for i, k in enumerate(exps):
                if k:
                    mono = mono * P.var(idx[i]) ** k
            out.append(mono)
    out.sort(key=lambda m: P.order.key(m.lm()))
    return out


def zariski_image(m, ideal=None):
    """Closure of the image of V(ideal) (default: the whole source chart),
    as an ideal over the target ring."""
    P, G, src_names, rename = m.graph()
    total = G
    if ideal is not None:
        if not isinstance(ideal, Ideal):
            ideal = Ideal(m.source.ring, ideal)
        total = total + Ideal(P, [transport(g, P) for g in ideal.gens])
    small = eliminate(total, src_names)
    back = {rename[nm]: nm for nm in m.target.ring.names}
    out = [transport(g, m.target.ring, back) for g in small.gens]
    return Ideal(m.target.ring, out)


def pushforward_module(m, M=None, extra=None):
    """The source module M (default: the structure algebra) viewed over the
    target coordinates, presented on the standard monomial generators.

    Requires the map restricted to V(extra) to be finite."""
    P, G, src_names, rename = m.graph()
    if M is None:
        M = FPModule.free(m.source.ring, 1)
    if M.ring != m.source.ring:
        raise RingMismatchError("module not over the source chart")
    total = G
    if extra is not None:
        total = total + Ideal(P, [transport(g, P) for g in extra.gens])
    monos = _standard_source_monomials(P, total, src_names)
    if monos is None:
        raise EngineError(
            f"map {m.source.name} -> {m.target.name} is not finite here; "
            "pushforward needs module-finiteness")
    rank = M.rank
    gens = [FreeModuleElement.unit(P, rank, a).scale(mono)
            for mono in monos for a in range(rank)]
    rels = [FreeModuleElement(P, [transport(c, P) for c in v.coords])
            for v in M.relations]
    ynames = tuple(rename[nm] for nm in m.target.ring.names)
    coeffs = coefficient_module(gens, rels, rank, P, modulo=total,
                                coeff_names=ynames)
    back = {rename[nm]: nm for nm in m.target.ring.names}
    out_rels = [FreeModuleElement(m.target.ring,
                                  [transport(c, m.target.ring, back)
                                   for c in w.coords])
                for w in coeffs]
    return FPModule(m.target.ring, len(gens), out_rels)


def pullback_module(m, M):
    """M tensored up along the map: same presentation, entries pulled back."""
    if M.ring != m.target.ring:
        raise RingMismatchError("module not over the target chart")
    rels = [FreeModuleElement(m.source.ring, [m.pullback(c) for c in v.coords])
            for v in M.relations]
    return FPModule(m.source.ring, M.rank, rels)


def degree(m):
    """Generic degree: the rank of the pushed-forward structure sheaf at
    the generic point of the image (source and image both integral)."""
    if not m.source.is_integral():
        raise EngineError("degree needs an integral source chart")
    image = zariski_image(m) + m.target.ideal
    M = pushforward_module(m)
    return generic_rank(M, PrimeIdeal(image), modulo=m.target.ideal)


def flat_pullback(m, cycle):
    """Preimage cycle of a cycle on the target, for a flat map: each prime
    pulls back to the fundamental cycle of its preimage subscheme."""
    if m.flat is not True:
        raise EngineError("flat_pullback: the map is not marked flat")
    if cycle.chart != m.target:
        raise EngineError("cycle does not live on the target chart")
    out = Cycle.zero(m.source, cycle.grade)
    for p, mult in cycle.coeffs.items():
        preimage = Ideal(m.source.ring, [m.pullback(g) for g in p.ideal.gens])
        out = out + mult * cycle_of_subscheme(preimage, m.source, grade=cycle.grade)
    return out


def proper_pushforward(m, cycle):
    """Image cycle with field-extension degrees as multiplicities; verified
    finite onto its image component-by-component, with honest dimension
    drops allowed only for maps marked proper."""
    if cycle.chart != m.source:
        raise EngineError("cycle does not live on the source chart")
    grade_out = m.target.dim() - (m.source.dim() - cycle.grade)
    out = Cycle.zero(m.target, grade_out)
    for p, mult in cycle.coeffs.items():
        image = zariski_image(m, p.ideal) + m.target.ideal
        q = PrimeIdeal(image)  # image of an irreducible stays irreducible
        if q.dim() < p.dim():
            if m.proper is not True:
                raise EngineError(
                    f"component {p} drops dimension; pushforward is only "
                    "defined for proper maps (mark the map proper)")
            continue
        try:
            M = pushforward_module(m, extra=p.ideal)
        except EngineError:
            raise EngineError(
                f"component {p} is not finite over its image; outside the "
                "supported fragment")
        deg = generic_rank(M, q, modulo=m.target.ideal)
        out = out + Cycle(m.target, grade_out, {q: mult * deg})
    return out


def fiber_product(f, g):
    """X x_Z Y for maps f: X -> Z, g: Y -> Z: the chart on the joined
    variables with both relation sets and the identification of the two
    pullbacks of every base coordinate; returns (chart, to X, to Y).

    Flatness and finiteness of g transfer to the projection to X."""
    if f.target != g.target:
        raise EngineError("fiber product needs a common base chart")
    X, Y, Z = f.source, g.source, f.target
    rename = {}
    taken = set(X.ring.names)
    for nm in Y.ring.names:
        new = nm
        while new in taken:
            new = new + "_r"
        rename[nm] = new
        taken.add(new)
    P = PolynomialRing(X.ring.field,
                       X.ring.names + tuple(rename[nm] for nm in Y.ring.names))
    gens = [transport(h, P) for h in X.ideal.gens]
    gens += [transport(h, P, rename) for h in Y.ideal.gens]
    for nm in Z.ring.names:
        left = transport(f.images[nm], P)
        right = transport(g.images[nm], P, rename)
        gens.append(left - right)
    W = Chart(f"{X.name}x{Y.name}", P, Ideal(P, gens))
    to_x = ChartMap(W, X, {nm: nm for nm in X.ring.names},
                    flat=g.flat, finite=g.finite, proper=g.proper)
    to_y = ChartMap(W, Y, {nm: rename[nm] for nm in Y.ring.names},
                    flat=f.flat, finite=f.finite, proper=f.proper)
    return W, to_x, to_y
