"""Charts, cycles, Cartier divisors, and glued spaces.

A chart is Spec of a finitely presented algebra over the base field,
presented as ring/ideal.  Cycles are integer combinations of certified
prime ideals of fixed codimension on a chart.  Charts glue along principal
localizations; the gluing data is a pair of variable-image dictionaries
checked to be mutually inverse ring isomorphisms, and cycles on a glued
space can be audited for consistency on the overlaps.
"""

from .errors import EngineError, GlueError, HypothesisError
from .groebner import Ideal, divide_exact, krull_dim, quotient
from .homology import FPModule, annihilator
from .polyring import PolynomialRing, transport
from .primes import (PrimeIdeal, length_at_prime, minimal_primes,
                     vector_space_dimension)


class Chart:
    """An affine chart ring/ideal with cached geometry."""

    def __init__(self, name, ring, ideal=()):
        if not isinstance(ideal, Ideal):
            ideal = Ideal(ring, ideal)
        if ideal.ring != ring:
            raise EngineError("chart ideal from a different ring")
        if ideal.is_unit():
            raise EngineError(f"chart {name!r} would be empty")
        self.name = name
        self.ring = ring
        self.ideal = ideal
        self._dim = None
        self._components = None
        self._regular = -1

    def dim(self):
        if self._dim is None:
            self._dim = krull_dim(self.ideal)
        return self._dim

    def components(self):
        if self._components is None:
            self._components = minimal_primes(self.ideal)
        return self._components

    def is_integral(self):
        comps = self.components()
        return len(comps) == 1 and comps[0].ideal == self.ideal

    def is_regular(self):
        """Jacobian criterion for complete-intersection presentations;
        None when the presentation is not a complete intersection."""
        if self._regular == -1:
            self._regular = self._regular_check()
        return self._regular

    def _regular_check(self):
        gens = self.ideal.groebner_basis()
        if not gens:
            return True
        c = self.ring.nvars - self.dim()
        if len(gens) != c:
            return None
        minors = _jacobian_minors(gens, self.ring, c)
        return (self.ideal + Ideal(self.ring, minors)).is_unit()

    def localize(self, f, inv_name=None, name=None):
        """The chart with f inverted: adjoin u with u*f = 1."""
        if isinstance(f, str):
            f = self.ring.parse(f)
        if f.ring != self.ring:
            raise EngineError("localizing at an element of a different ring")
        if inv_name is None:
            inv_name = "u"
            k = 0
            while inv_name in self.ring.names:
                inv_name = f"u{k}"
                k += 1
        elif inv_name in self.ring.names:
            raise EngineError(f"inverse variable {inv_name!r} already in use")
        big = PolynomialRing(self.ring.field, self.ring.names + (inv_name,),
                             self.ring.order)
        gens = [transport(g, big) for g in self.ideal.gens]
        gens.append(big.var(big.nvars - 1) * transport(f, big) - big.one)
        label = name if name is not None else f"{self.name}[1/{f}]"
        return Chart(label, big, Ideal(big, gens))

    def __eq__(self, other):
        return (isinstance(other, Chart) and other.name == self.name
                and other.ring == self.ring and other.ideal == self.ideal)

    def __hash__(self):
        return hash((self.name, self.ring, self.ideal))

    def __repr__(self):
        rel = ", ".join(str(g) for g in self.ideal.gens) or "0"
        return f"<chart {self.name}: {self.ring} mod ({rel})>"


def _jacobian_minors(gens, ring, c):
    """All c x c minors of the Jacobian of gens."""
    from itertools import combinations
    rows = [[g.diff(j) for j in range(ring.nvars)] for g in gens]
    out = []
    for cols in combinations(range(ring.nvars), c):
        out.append(_det([[rows[i][j] for j in cols] for i in range(c)], ring))
    return out


def _det(m, ring):
    n = len(m)
    if n == 1:
        return m[0][0]
    total = ring.zero
    for j in range(n):
        minor = [[m[i][k] for k in range(n) if k != j] for i in range(1, n)]
        term = m[0][j] * _det(minor, ring)
        total = total + term if j % 2 == 0 else total - term
    return total


def codim(prime, chart):
    """sup over chart components through the prime of (dim component -
    dim prime)."""
    if not prime.ideal.contains_ideal(chart.ideal):
        raise EngineError(f"{prime} does not lie on chart {chart.name}")
    best = None
    for comp in chart.components():
        if prime.ideal.contains_ideal(comp.ideal):
            c = comp.dim() - prime.dim()
            best = c if best is None else max(best, c)
    assert best is not None
    return best


class Cycle:
    """Integer combination of codimension-`grade` primes on a chart."""

    __slots__ = ("chart", "grade", "coeffs")

    def __init__(self, chart, grade, coeffs):
        clean = {}
        for p, m in coeffs.items():
            if m == 0:
                continue
            if p.ring != chart.ring:
                raise EngineError("cycle prime from a different ring")
            if codim(p, chart) != grade:
                raise EngineError(
                    f"{p} has codimension {codim(p, chart)} on {chart.name}, "
                    f"expected {grade}")
            clean[p] = m
        self.chart = chart
        self.grade = grade
        self.coeffs = clean

    @classmethod
    def zero(cls, chart, grade):
        return cls(chart, grade, {})

    def components(self):
        return sorted(self.coeffs.items(), key=lambda it: (len(it[0].key), it[0].key))

    def support(self):
        return [p for p, _ in self.components()]

    def is_zero(self):
        return not self.coeffs

    def is_effective(self):
        return all(m > 0 for m in self.coeffs.values())

    def _merge(self, other, sign):
        if not isinstance(other, Cycle):
            return NotImplemented
        if other.chart != self.chart or other.grade != self.grade:
            raise EngineError("cycle arithmetic across charts or grades")
        out = dict(self.coeffs)
        for p, m in other.coeffs.items():
            out[p] = out.get(p, 0) + sign * m
        return Cycle(self.chart, self.grade, out)

    def __add__(self, other):
        return self._merge(other, 1)

    def __sub__(self, other):
        return self._merge(other, -1)

    def __neg__(self):
        return Cycle(self.chart, self.grade, {p: -m for p, m in self.coeffs.items()})

    def __rmul__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        return Cycle(self.chart, self.grade, {p: n * m for p, m in self.coeffs.items()})

    __mul__ = __rmul__

    def __eq__(self, other):
        return (isinstance(other, Cycle) and other.chart == self.chart
                and other.grade == self.grade and other.coeffs == self.coeffs)

    def __hash__(self):
        return hash((self.chart, self.grade,
                     tuple(sorted((p.key, m) for p, m in self.coeffs.items()))))

    def degree(self):
        """Sum of multiplicities weighted by residue degrees; the primes
        must be points."""
        total = 0
        for p, m in self.coeffs.items():
            if p.dim() != 0:
                raise EngineError("degree of a non-point cycle")
            total += m * vector_space_dimension(p.ideal)
        return total

    def __str__(self):
        if not self.coeffs:
            return "0"
        bits = []
        for p, m in self.components():
            mag = f"[{p}]" if abs(m) == 1 else f"{abs(m)}*[{p}]"
            if not bits:
                bits.append(mag if m > 0 else f"-{mag}")
            else:
                bits.append(f"+ {mag}" if m > 0 else f"- {mag}")
        return " ".join(bits)

    def __repr__(self):
        return f"<cycle {self} (codim {self.grade} on {self.chart.name})>"


def _cycle_from_support(M, ann, chart, grade):
    if ann.is_unit():
        return Cycle.zero(chart, grade)
    coeffs = {}
    for p in minimal_primes(ann):
        c = codim(p, chart)
        if c < grade:
            raise HypothesisError(
                f"support component {p} has codimension {c} < {grade}")
        if c == grade:
            coeffs[p] = length_at_prime(M, p, modulo=chart.ideal)
    return Cycle(chart, grade, coeffs)


def cycle_of_module(M, chart, grade):
    """Codimension-`grade` part of the support cycle of M on the chart,
    with local lengths as multiplicities."""
    ann = annihilator(M, modulo=chart.ideal)
    return _cycle_from_support(M, ann, chart, grade)


def cycle_of_subscheme(I, chart, grade=None):
    """Fundamental cycle of V(I) on the chart."""
    if not isinstance(I, Ideal):
        I = Ideal(chart.ring, I)
    total = I + chart.ideal
    if total.is_unit():
        return Cycle.zero(chart, 0 if grade is None else grade)
    if grade is None:
        grade = min(codim(p, chart) for p in minimal_primes(total))
    return _cycle_from_support(FPModule.cyclic(total), total, chart, grade)


def point_cycle(chart, I):
    """Zero-cycle (top codimension) of a finite subscheme."""
    return cycle_of_subscheme(I, chart, grade=chart.dim())


# ---------------------------------------------------------------------------
# Cartier divisors

class CartierDivisor:
    """A fraction a/b of elements regular on the chart (principal data)."""

    __slots__ = ("chart", "num", "den")

    def __init__(self, chart, num, den=None):
        ring = chart.ring
        if isinstance(num, str):
            num = ring.parse(num)
        den = ring.one if den is None else (ring.parse(den) if isinstance(den, str) else den)
        for part in (num, den):
            if part.ring != ring:
                raise EngineError("divisor data from a different ring")
            if not _regular_on(part, chart):
                raise EngineError(f"{part} is a zero divisor on chart {chart.name}")
        self.chart = chart
        self.num = num
        self.den = den

    def __add__(self, other):
        if not isinstance(other, CartierDivisor) or other.chart != self.chart:
            raise EngineError("divisor arithmetic across charts")
        return CartierDivisor(self.chart, self.num * other.num, self.den * other.den)

    def __neg__(self):
        return CartierDivisor(self.chart, self.den, self.num)

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n >= 0:
            return CartierDivisor(self.chart, self.num ** n, self.den ** n)
        return CartierDivisor(self.chart, self.den ** (-n), self.num ** (-n))

    __mul__ = __rmul__

    def __eq__(self, other):
        """Equality of the defining fractions modulo the chart ideal."""
        return (isinstance(other, CartierDivisor) and other.chart == self.chart
                and self.chart.ideal.contains(self.num * other.den - other.num * self.den))

    def __hash__(self):
        return hash(self.chart)

    def weil(self):
        """Associated codimension-1 cycle: orders of vanishing of the
        numerator minus those of the denominator."""
        return (_principal_cycle(self.num, self.chart)
                - _principal_cycle(self.den, self.chart))

    def __str__(self):
        if self.den == self.chart.ring.one:
            return f"div({self.num})"
        return f"div({self.num} / {self.den})"

    def __repr__(self):
        return f"<cartier {self} on {self.chart.name}>"


def _regular_on(f, chart):
    if chart.ideal.contains(f):
        return False
    return quotient(chart.ideal, f) == chart.ideal


def _principal_cycle(f, chart):
    if f.is_constant():
        return Cycle.zero(chart, 1)
    return cycle_of_subscheme(Ideal(chart.ring, (f,)), chart, grade=1)


def weil_of_cartier(D):
    return D.weil()


# ---------------------------------------------------------------------------
# glued spaces

def _apply_images(f, images, target_ring):
    """Evaluate f under variable images given as a name -> polynomial dict."""
    source = f.ring
    try:
        image_list = [images[nm] for nm in source.names]
    except KeyError as missing:
        raise GlueError(f"no image for variable {missing.args[0]}")
    return f.substitute(image_list, target_ring)


def _parse_images(raw, source_ring, target_ring):
    out = {}
    for nm in source_ring.names:
        if nm not in raw:
            raise GlueError(f"gluing map misses variable {nm!r}")
        v = raw[nm]
        out[nm] = target_ring.parse(v) if isinstance(v, str) else v
    return out


class GlueRecord:
    """A verified isomorphism between principal localizations of two charts."""

    __slots__ = ("name1", "name2", "overlap1", "overlap2", "forward", "backward")

    def __init__(self, name1, name2, overlap1, overlap2, forward, backward):
        self.name1 = name1
        self.name2 = name2
        self.overlap1 = overlap1
        self.overlap2 = overlap2
        self.forward = forward
        self.backward = backward


class ChartedSpace:
    """Charts glued along principal localizations with verified data."""

    def __init__(self, name="X"):
        self.name = name
        self.charts = {}
        self.glues = []

    def add_chart(self, chart):
        if chart.name in self.charts:
            raise GlueError(f"duplicate chart name {chart.name!r}")
        self.charts[chart.name] = chart
        return chart

    def add_glue(self, name1, f1, name2, f2, forward, backward,
                 inv1="w1", inv2="w2"):
        """Glue chart1 localized at f1 to chart2 localized at f2.

        forward maps every variable of the first overlap ring to a
        polynomial over the second; backward inverts it.  Both directions
        are verified to be well defined and mutually inverse modulo the
        overlap ideals."""
        c1, c2 = self.charts[name1], self.charts[name2]
        L1 = c1.localize(f1, inv_name=inv1, name=f"{name1}&{name2}")
        L2 = c2.localize(f2, inv_name=inv2, name=f"{name2}&{name1}")
        fwd = _parse_images(forward, L1.ring, L2.ring)
        bwd = _parse_images(backward, L2.ring, L1.ring)
        for g in L1.ideal.gens:
            if not L2.ideal.contains(_apply_images(g, fwd, L2.ring)):
                raise GlueError(
                    f"gluing {name1}->{name2} does not preserve relations: {g}")
        for g in L2.ideal.gens:
            if not L1.ideal.contains(_apply_images(g, bwd, L1.ring)):
                raise GlueError(
                    f"gluing {name2}->{name1} does not preserve relations: {g}")
        for nm in L1.ring.names:
            back = _apply_images(fwd[nm], bwd, L1.ring)
            if not L1.ideal.contains(back - L1.ring.var(L1.ring.index_of(nm))):
                raise GlueError(f"gluing maps are not mutually inverse at {nm!r}")
        for nm in L2.ring.names:
            there = _apply_images(bwd[nm], fwd, L2.ring)
            if not L2.ideal.contains(there - L2.ring.var(L2.ring.index_of(nm))):
                raise GlueError(f"gluing maps are not mutually inverse at {nm!r}")
        rec = GlueRecord(name1, name2, L1, L2, fwd, bwd)
        self.glues.append(rec)
        return rec

    def glue_cycles(self, cycles):
        """Check a per-chart cycle family for agreement on every overlap.

        Returns (consistent, messages)."""
        messages = []
        ok = True
        grades = {c.grade for c in cycles.values()}
        if len(grades) > 1:
            return False, [f"mixed grades {sorted(grades)}"]
        for rec in self.glues:
            if rec.name1 not in cycles or rec.name2 not in cycles:
                messages.append(f"missing cycle on {rec.name1} or {rec.name2}")
                ok = False
                continue
            a = restrict_cycle(cycles[rec.name1], rec.overlap1)
            b = restrict_cycle(cycles[rec.name2], rec.overlap2)
            a_on_b = transport_cycle(a, rec.overlap2, rec.forward)
            if a_on_b == b:
                messages.append(f"{rec.name1}|{rec.name2}: consistent")
            else:
                ok = False
                messages.append(
                    f"{rec.name1}|{rec.name2}: mismatch {a_on_b} != {b}")
        return ok, messages


def restrict_cycle(cycle, loc_chart):
    """Restrict a cycle to a principal localization of its chart: components
    meeting the inverted element survive with the same multiplicity."""
    coeffs = {}
    big = loc_chart.ring
    for p, m in cycle.coeffs.items():
        total = Ideal(big, [transport(g, big) for g in p.ideal.gens]) + loc_chart.ideal
        if total.is_unit():
            continue  # the component dies in the localization
        coeffs[PrimeIdeal(total)] = m
    return Cycle(loc_chart, cycle.grade, coeffs)


def transport_cycle(cycle, target_chart, images):
    """Push a cycle through a verified chart isomorphism."""
    coeffs = {}
    for p, m in cycle.coeffs.items():
        gens = [_apply_images(g, images, target_chart.ring) for g in p.ideal.gens]
        total = Ideal(target_chart.ring, gens) + target_chart.ideal
        coeffs[PrimeIdeal(total)] = m
    return Cycle(target_chart, cycle.grade, coeffs)


def principal_atlas(base, elements, names=None):
    """The charted space covering `base` by the principal localizations at
    the given elements, glued pairwise by the identity."""
    space = ChartedSpace(name=f"{base.name}-atlas")
    elems = [base.ring.parse(f) if isinstance(f, str) else f for f in elements]
    if names is None:
        names = [f"U{i}" for i in range(len(elems))]
    charts = []
    for label, f, i in zip(names, elems, range(len(elems))):
        charts.append(space.add_chart(base.localize(f, inv_name=f"u{i}", name=label)))
    for i in range(len(elems)):
        for j in range(i + 1, len(elems)):
            fi = str(elems[i])
            fj = str(elems[j])
            fwd = {nm: nm for nm in base.ring.names}
            fwd[f"u{i}"] = "w2"
            fwd["w1"] = f"u{j}"
            bwd = {nm: nm for nm in base.ring.names}
            bwd[f"u{j}"] = "w1"
            bwd["w2"] = f"u{i}"
            space.add_glue(names[i], fj, names[j], fi, fwd, bwd)
    return space
