"""Proper intersections via the alternating sum of local torsion lengths.

For cycles of codimensions s and t on a chart, the product is supported on
the components of the ideal sum; properness means every such component has
codimension at least s + t.   Each pair of primes contributes, on every
component Z of the expected codimension, the alternating sum of the local
lengths of the torsion modules of the two structure algebras at Z.  The
torsion modules are required to die within the regular range (one past the
chart dimension, double-checked two past); charts whose presentation is
certifiably singular are rejected up front.
"""

from .errors import EngineError, HypothesisError
from .geometry import Cycle, codim
from .groebner import Ideal
from .homology import FPModule, tor_modules
from .primes import length_at_prime, minimal_primes


def _as_ideal(chart, data):
    if isinstance(data, Ideal):
        return data
    return Ideal(chart.ring, data)


def intersects_properly(a, b):
    """Every component of every pairwise intersection has codimension at
    least grade(a) + grade(b)."""
    if a.chart != b.chart:
        raise EngineError("cycles on different charts")
    chart = a.chart
    want = a.grade + b.grade
    for p in a.support():
        for q in b.support():
            total = p.ideal + q.ideal + chart.ideal
            if total.is_unit():
                continue
            for z in minimal_primes(total):
                if codim(z, chart) < want:
                    return False
    return True


def tor_length_table(chart, I, K, up_to=None):
    """[(component, [length of Tor_0 at it, Tor_1, ...])] for the two
    structure modules A/I and A/K on the chart."""
    I = _as_ideal(chart, I)
    K = _as_ideal(chart, K)
    if up_to is None:
        up_to = chart.dim() + 2
    total = I + K + chart.ideal
    if total.is_unit():
        return []
    tors = tor_modules(FPModule.cyclic(I + chart.ideal),
                       FPModule.cyclic(K + chart.ideal),
                       modulo=chart.ideal, up_to=up_to)
    rows = []
    for z in minimal_primes(total):
        lengths = [length_at_prime(T, z, modulo=chart.ideal) if T.rank else 0
                   for T in tors]
        rows.append((z, lengths))
    return rows


def _check_tail(chart, z, lengths):
    if lengths[-1] or lengths[-2]:
        raise HypothesisError(
            f"torsion does not vanish past the chart dimension at {z}; "
            "the chart is not regular there, outside the supported fragment")


def serre_multiplicity(chart, I, K, z):
    """Alternating sum of local torsion lengths at the component z."""
    if chart.is_regular() is False:
        raise EngineError(
            f"chart {chart.name} is singular; the torsion formula needs a "
            "regular chart")
    I = _as_ideal(chart, I)
    K = _as_ideal(chart, K)
    up_to = chart.dim() + 2
    tors = tor_modules(FPModule.cyclic(I + chart.ideal),
                       FPModule.cyclic(K + chart.ideal),
                       modulo=chart.ideal, up_to=up_to)
    lengths = [length_at_prime(T, z, modulo=chart.ideal) if T.rank else 0
               for T in tors]
    _check_tail(chart, z, lengths)
    return sum((-1) ** i * n for i, n in enumerate(lengths))


class IntersectionReport:
    """Full accounting of a product: one row per (left prime, right prime,
    component) with the torsion length vector and resulting multiplicity."""

    def __init__(self, chart, grade, rows, cycle):
        self.chart = chart
        self.grade = grade
        self.rows = rows
        self.cycle = cycle

    def as_dict(self):
        return {
            "chart": self.chart.name,
            "grade": self.grade,
            "rows": [
                {
                    "left": list(r["left"].key),
                    "right": list(r["right"].key),
                    "component": list(r["component"].key),
                    "tor_lengths": list(r["tor_lengths"]),
                    "multiplicity": r["multiplicity"],
                    "weight": r["weight"],
                }
                for r in self.rows
            ],
            "cycle": _cycle_dict(self.cycle),
        }

    def __str__(self):
        lines = [f"intersection on {self.chart.name} (codim {self.grade})"]
        for r in self.rows:
            alt = ",".join(str(n) for n in r["tor_lengths"])
            lines.append(
                f"  {r['left']} . {r['right']} along {r['component']}: "
                f"lengths [{alt}] -> {r['multiplicity']} (weight {r['weight']})")
        lines.append(f"  total: {self.cycle}")
        return "\n".join(lines)


def _cycle_dict(cycle):
    return [{"prime": list(p.key), "mult": m} for p, m in cycle.components()]


def intersection_product(a, b, report=False):
    """The product cycle in codimension grade(a) + grade(b); bilinear over
    components, multiplicities from the torsion formula.  Raises on excess
    (improper) intersections."""
    if a.chart != b.chart:
        raise EngineError("cycles on different charts")
    chart = a.chart
    if chart.is_regular() is False:
        raise EngineError(
            f"chart {chart.name} is singular; the torsion formula needs a "
            "regular chart")
    want = a.grade + b.grade
    total_cycle = Cycle.zero(chart, want)
    rows = []
    up_to = chart.dim() + 2
    for p, mp in a.components():
        for q, mq in b.components():
            meet = p.ideal + q.ideal + chart.ideal
            if meet.is_unit():
                continue
            comps = minimal_primes(meet)
            for z in comps:
                if codim(z, chart) < want:
                    raise EngineError(
                        f"improper intersection at component {z}: "
                        f"{p} . {q} meets in codimension "
                        f"{codim(z, chart)} < {want}")
            tors = tor_modules(FPModule.cyclic(p.ideal + chart.ideal),
                               FPModule.cyclic(q.ideal + chart.ideal),
                               modulo=chart.ideal, up_to=up_to)
            for z in comps:
                if codim(z, chart) != want:
                    continue
                lengths = [length_at_prime(T, z, modulo=chart.ideal)
                           if T.rank else 0 for T in tors]
                _check_tail(chart, z, lengths)
                mult = sum((-1) ** i * n for i, n in enumerate(lengths))
                rows.append({"left": p, "right": q, "component": z,
                             "tor_lengths": lengths, "multiplicity": mult,
                             "weight": mp * mq})
                total_cycle = total_cycle + Cycle(chart, want, {z: mp * mq * mult})
    if report:
        return IntersectionReport(chart, want, rows, total_cycle)
    return total_cycle


# ---------------------------------------------------------------------------
# structural identities

def _sides_commutativity(a, b):
    return intersection_product(a, b), intersection_product(b, a)


def _sides_associativity(a, b, c):
    return (intersection_product(intersection_product(a, b), c),
            intersection_product(a, intersection_product(b, c)))


def _sides_pullback_product(f, a, b):
    """Flat pullback distributes over products."""
    from .morphisms import flat_pullback
    return (flat_pullback(f, intersection_product(a, b)),
            intersection_product(flat_pullback(f, a), flat_pullback(f, b)))


def _sides_projection_formula(f, alpha, beta):
    """push(alpha . pull(beta)) == push(alpha) . beta."""
    from .morphisms import flat_pullback, proper_pushforward
    return (proper_pushforward(
                f, intersection_product(alpha, flat_pullback(f, beta))),
            intersection_product(proper_pushforward(f, alpha), beta))


_IDENTITIES = {
    "commutativity": _sides_commutativity,
    "associativity": _sides_associativity,
    "pullback_product": _sides_pullback_product,
    "projection_formula": _sides_projection_formula,
}


def identity_sides(name, *args):
    """Both sides of a named structural identity, for comparison or
    reporting."""
    if name not in _IDENTITIES:
        raise EngineError(f"unknown identity {name!r}; "
                          f"choose from {sorted(_IDENTITIES)}")
    return _IDENTITIES[name](*args)


def verify_identity(name, *args):
    lhs, rhs = identity_sides(name, *args)
    return lhs == rhs


def verify_commutativity(a, b):
    return verify_identity("commutativity", a, b)


def verify_associativity(a, b, c):
    return verify_identity("associativity", a, b, c)


def verify_pullback_product(f, a, b):
    return verify_identity("pullback_product", f, a, b)


def verify_projection_formula(f, alpha, beta):
    return verify_identity("projection_formula", f, alpha, beta)
