"""Minimal primes, primality certificates, and local lengths.

The decomposition loop splits an ideal along factorizations (of reduced
Gröbner basis elements, of single-variable elimination ideals, or of
eliminants of a primitive linear form in the zero-dimensional case) until
the leaves land in a certifiable shape:

  * the zero ideal, or a principal ideal with irreducible generator;
  * a triangular basis x_i - g_i(free vars) under some permuted lex order
    (the quotient is then a polynomial ring);
  * a localization presentation u*f - 1 with u not occurring in f
    (the quotient is then a localized smaller quotient);
  * zero-dimensional with a primitive linear form whose minimal polynomial
    is irreducible of degree equal to the vector-space dimension
    (the quotient is then a field).

Splitting only ever branches on factors q of an element of the ideal, so
every minimal prime survives into some branch; leaves are certified primes
containing the input; dropping the comparable ones leaves exactly the
minimal primes.  A final radical-membership audit re-checks the covering.
Shapes outside the fragment raise DecompositionError rather than guess.
"""

import itertools
import warnings
from fractions import Fraction

import sympy

from .errors import (DecompositionError, EngineError, HypothesisError,
                     NotPrimeError)
from .fields import RationalField
from .groebner import Ideal, eliminate, in_radical, intersect, krull_dim
from .homology import FreeModuleElement, _fold, coefficient_module
from .polyring import BlockOrder, PolynomialRing, lex, transport


class FactorizationUnavailable(EngineError):
    """Raised when the coefficient field/shape falls outside what the
    factorization backend supports (multivariate over F_p)."""


_SYMBOL_CACHE = {}


def _symbols(ring):
    if ring.names not in _SYMBOL_CACHE:
        _SYMBOL_CACHE[ring.names] = tuple(sympy.Symbol(nm) for nm in ring.names)
    return _SYMBOL_CACHE[ring.names]


def _to_sympy(f):
    syms = _symbols(f.ring)
    rational = isinstance(f.ring.field, RationalField)
    total = sympy.Integer(0)
    for e, c in f.terms:
        piece = sympy.Rational(c.numerator, c.denominator) if rational else sympy.Integer(c)
        for i, k in enumerate(e):
            if k:
                piece *= syms[i] ** k
        total += piece
    return total


def _from_sympy_dict(d, ring):
    field = ring.field
    out = {}
    for exps, c in d.items():
        if isinstance(field, RationalField):
            r = sympy.Rational(c)
            out[tuple(exps)] = Fraction(int(r.p), int(r.q))
        else:
            out[tuple(exps)] = int(c) % field.p
    return ring.from_dict(out)


def _factor_homogeneous_bivariate(f):
    """Factor a homogeneous polynomial in exactly two variables by
    dehomogenizing to a univariate one; None when the shape does not
    apply.  This is the one multivariate case the finite-field backend
    can always handle."""
    ring = f.ring
    sup = sorted(f.support())
    if len(sup) != 2:
        return None
    d = f.total_degree()
    if any(sum(e) != d for e, _ in f.terms):
        return None
    i, j = sup
    shadow_terms = {}
    for e, c in f.terms:
        key = tuple(e[i] if k == i else 0 for k in range(ring.nvars))
        shadow_terms[key] = c
    shadow = ring.from_dict(shadow_terms)
    out = []
    if d - shadow.total_degree():
        out.append((ring.var(j), d - shadow.total_degree()))
    for q, e in factor(shadow):
        dq = q.total_degree()
        homog = {}
        for eq, c in q.terms:
            key = tuple(eq[i] if k == i else (dq - eq[i] if k == j else 0)
                        for k in range(ring.nvars))
            homog[key] = c
        out.append((ring.from_dict(homog), e))
    return out


def factor(f):
    """[(irreducible factor, multiplicity)], constants dropped.

    Exact over QQ in any number of variables; over F_p univariate
    generators and homogeneous bivariate ones are supported
    (FactorizationUnavailable otherwise)."""
    ring = f.ring
    if f.is_zero() or f.is_constant():
        return []
    syms = _symbols(ring)
    expr = _to_sympy(f)
    if isinstance(ring.field, RationalField):
        _, raw = sympy.Poly(expr, *syms, domain="QQ").factor_list()
    else:
        if len(f.support()) > 1:
            pairs = _factor_homogeneous_bivariate(f)
            if pairs is not None:
                return pairs
            raise FactorizationUnavailable(
                "multivariate factorization over a finite field is not supported")
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            _, pairs = sympy.factor_list(expr, modulus=ring.field.p)
        raw = [(sympy.Poly(q, *syms, modulus=ring.field.p), e) for q, e in pairs]
    out = []
    for q, e in raw:
        g = _from_sympy_dict(q.as_dict(), ring)
        if not g.is_constant():
            out.append((g, e))
    return out


def is_irreducible(f):
    if f.is_constant():
        return False
    facs = factor(f)
    return len(facs) == 1 and facs[0][1] == 1


# ---------------------------------------------------------------------------
# prime ideals

class PrimeIdeal:
    """A prime ideal, canonicalized by its reduced Gröbner basis.

    Built by minimal_primes (certified) or assert_prime (trusted)."""

    __slots__ = ("ideal", "certified", "key", "_dim")

    def __init__(self, ideal, certified=True):
        self.ideal = ideal
        self.certified = certified
        self.key = tuple(str(g) for g in ideal.groebner_basis())
        self._dim = None

    @property
    def ring(self):
        return self.ideal.ring

    @property
    def gens(self):
        return self.ideal.groebner_basis()

    def dim(self):
        if self._dim is None:
            self._dim = krull_dim(self.ideal)
        return self._dim

    def contains(self, f):
        return self.ideal.contains(f)

    def __eq__(self, other):
        return (isinstance(other, PrimeIdeal) and other.ring == self.ring
                and other.key == self.key)

    def __hash__(self):
        return hash((self.ring, self.key))

    def __str__(self):
        return "(" + (", ".join(self.key) if self.key else "0") + ")"

    def __repr__(self):
        return f"<prime {self}>"


def assert_prime(I):
    """Escape hatch: wrap an ideal the caller knows to be prime."""
    if I.is_unit():
        raise NotPrimeError("the unit ideal is not prime")
    return PrimeIdeal(I, certified=False)


def vector_space_dimension(I, bound=200000):
    """dim_k ring/I when finite, else None."""
    ring = I.ring
    if I.is_unit():
        return 0
    lead = I.leading_exponents()
    caps = [None] * ring.nvars
    for e in lead:
        nz = [i for i, k in enumerate(e) if k]
        if len(nz) == 1:
            i = nz[0]
            if caps[i] is None or e[i] < caps[i]:
                caps[i] = e[i]
    if any(c is None for c in caps):
        return None
    box = 1
    for c in caps:
        box *= c
        if box > bound:
            raise EngineError(f"standard monomial count exceeds bound {bound}")
    count = 0
    for exps in itertools.product(*[range(c) for c in caps]):
        if not any(all(exps[i] >= e[i] for i in range(ring.nvars)) for e in lead):
            count += 1
    return count


def minimal_polynomial(I, lam):
    """Monic generator of the kernel of k[s] -> ring/I, s -> lam
    (I zero-dimensional), as a univariate polynomial."""
    ring = I.ring
    if isinstance(lam, str):
        lam = ring.parse(lam)
    sname = "s" if "s" not in ring.names else "s_"
    while sname in ring.names:
        sname += "_"
    big = PolynomialRing(ring.field, ring.names + (sname,))
    gens = [transport(g, big) for g in I.gens]
    gens.append(big.var(big.nvars - 1) - transport(lam, big))
    elim = eliminate(Ideal(big, gens), ring.names)
    basis = elim.groebner_basis()
    assert len(basis) == 1, "minimal polynomial of a non-zero-dimensional ideal"
    return basis[0]


def _evaluate_univariate(m, lam):
    """m(lam) for univariate m, inside lam's ring (Horner)."""
    ring = lam.ring
    coeffs = {e[0]: c for e, c in m.terms}
    top = max(coeffs)
    total = ring.zero
    for k in range(top, -1, -1):
        total = total * lam
        if k in coeffs:
            total = total + ring.const(coeffs[k])
    return total


def _candidate_orders(ring):
    yield lex
    n = ring.nvars
    if n == 1:
        return
    perms = [tuple(reversed(range(n)))]
    for i in range(n):
        perms.append(tuple(j for j in range(n) if j != i) + (i,))
    seen = set()
    for p in perms:
        if p not in seen and p != tuple(range(n)):
            seen.add(p)
            yield BlockOrder([((i,), lex) for i in p])


def _triangular_under(I, order):
    """All leading monomials are distinct single variables of degree one:
    quotient is a polynomial ring in the remaining variables."""
    lead_vars = set()
    for g in I.groebner_basis(order):
        e = max((t[0] for t in g.terms), key=order.key)
        nz = [i for i, k in enumerate(e) if k]
        if sum(e) != 1 or len(nz) != 1 or nz[0] in lead_vars:
            return False
        lead_vars.add(nz[0])
    return True


def _localization_shape(I, gb):
    """Find g = u*f - 1 with the variable u not occurring in f; yields
    (u index, f).  u may occur in other basis elements: multiplying by
    powers of f clears it, so I is still the contraction plus this one
    relation (the caller re-checks that identity)."""
    ring = I.ring
    for g in gb:
        c0 = None
        const = [c for e, c in g.terms if not any(e)]
        if len(const) == 1:
            c0 = const[0]
        if c0 is None:
            continue
        minus = ring.field.neg(ring.field.one)
        if c0 != ring.field.one and c0 != minus:
            continue
        body = g - ring.const(c0)
        for u in sorted(body.support()):
            if any(t[0][u] == 0 for t in body.terms):
                continue  # u does not divide every term
            coeffs = {}
            for e, c in body.terms:
                e2 = list(e)
                e2[u] -= 1
                coeffs[tuple(e2)] = c
            f = ring.from_dict(coeffs)
            if u in f.support():
                continue
            if c0 == ring.field.one:
                f = -f
            yield u, f


def _split_on_factors(J):
    """Branch J along a reducible reduced-basis element; None if all are
    irreducible (or unfactorable)."""
    for g in J.groebner_basis():
        try:
            facs = factor(g)
        except FactorizationUnavailable:
            continue
        if len(facs) >= 2 or (len(facs) == 1 and facs[0][1] > 1
                              and facs[0][0].total_degree() < g.total_degree()):
            return [J + Ideal(J.ring, (q,)) for q, _ in facs]
    return None


def _eliminant_split(J):
    """Branch J along a reducible element of a single-variable elimination
    ideal.  The factors multiply into J, so every prime over J contains one
    of them; requiring every factor to lie outside J keeps the branches
    strictly larger."""
    ring = J.ring
    if ring.nvars < 2:
        return None
    for v in ring.names:
        small = eliminate(J, (v,))
        for g in small.gens:
            try:
                facs = factor(g)
            except FactorizationUnavailable:
                continue
            proper_power = (len(facs) == 1 and facs[0][1] > 1
                            and facs[0][0].total_degree() < g.total_degree())
            if not (len(facs) >= 2 or proper_power):
                continue
            lifted = [transport(q, ring) for q, _ in facs]
            if any(J.normal_form(q).is_zero() for q in lifted):
                continue
            return [J + Ideal(ring, (q,)) for q in lifted]
    return None


_LINEAR_FORM_TRIES = 4


def _zero_dim_step(J):
    """Certify a zero-dimensional ideal prime via a primitive element, or
    return branch ideals when an eliminant factors."""
    ring = J.ring
    vdim = vector_space_dimension(J)
    assert vdim is not None and vdim > 0
    candidates = [ring.var(i) for i in range(ring.nvars)]
    for c in range(1, _LINEAR_FORM_TRIES):
        lam = ring.zero
        for i in range(ring.nvars):
            lam = lam + ring.var(i) * (c ** i)
        candidates.append(lam)
    stuck = True
    for lam in candidates:
        m = minimal_polynomial(J, lam)
        try:
            facs = factor(m)
        except FactorizationUnavailable:
            stuck = True
            continue
        if len(facs) >= 2 or facs[0][1] > 1:
            return ("split", [J + Ideal(ring, (_evaluate_univariate(q, lam),))
                              for q, _ in facs])
        if m.total_degree() == vdim:
            return ("prime", [PrimeIdeal(J)])
        stuck = False  # proper subfield so far; another form may separate
    reason = ("no factorization backend for the residue field" if stuck
              else "no primitive linear form found")
    raise DecompositionError(
        f"cannot certify the zero-dimensional ideal {J}: {reason}")


def _localization_step(J, gb):
    """Certify via a localization presentation: primes of a localized
    smaller ring extend to primes here."""
    ring = J.ring
    for u, f in _localization_shape(J, gb):
        uname = ring.names[u]
        small = eliminate(J, (uname,))
        rel = ring.var(u) * f - ring.one
        extended = Ideal(ring, [transport(g, ring) for g in small.gens] + [rel])
        if extended != J:
            continue
        f_small = transport(f, small.ring)
        out = []
        for p in minimal_primes(small):
            if p.ideal.contains(f_small):
                continue
            lifted = Ideal(ring, [transport(g, ring) for g in p.ideal.gens] + [rel])
            out.append(PrimeIdeal(lifted))
        if out:
            return ("prime", out)
        return ("split", [])  # everything died after inverting f: empty locus
    return None


def _process(J):
    """One decomposition step: ("prime", [PrimeIdeal..]) or
    ("split", [ideals]) or raise DecompositionError."""
    branches = _split_on_factors(J)
    if branches is not None:
        return ("split", branches)
    gb = J.groebner_basis()
    if not gb:
        return ("prime", [PrimeIdeal(J)])
    if len(gb) == 1:
        try:
            if is_irreducible(gb[0]):
                return ("prime", [PrimeIdeal(J)])
        except FactorizationUnavailable:
            pass
    for order in _candidate_orders(J.ring):
        if _triangular_under(J, order):
            return ("prime", [PrimeIdeal(J)])
    loc = _localization_step(J, gb)
    if loc is not None:
        return loc
    if krull_dim(J) == 0:
        return _zero_dim_step(J)
    branches = _eliminant_split(J)
    if branches is not None:
        return ("split", branches)
    raise DecompositionError(
        f"ideal shape outside the certification fragment: {J}")


_MINIMAL_PRIME_CACHE = {}


def minimal_primes(I, verify=True):
    """The minimal primes over I, certified, as a tuple sorted by canonical
    key.  Raises DecompositionError outside the supported fragment."""
    hit = _MINIMAL_PRIME_CACHE.get(I)
    if hit is not None:
        return hit
    if I.is_unit():
        _MINIMAL_PRIME_CACHE[I] = ()
        return ()
    leaves = []
    seen = {I.key()}
    work = [I]
    while work:
        J = work.pop()
        kind, items = _process(J)
        if kind == "prime":
            leaves.extend(items)
            continue
        for B in items:
            if B.is_unit():
                continue
            k = B.key()
            if k not in seen:
                seen.add(k)
                work.append(B)
    unique = {}
    for p in leaves:
        unique[p.key] = p
    survivors = []
    for p in unique.values():
        if not any(q.key != p.key and p.ideal.contains_ideal(q.ideal)
                   for q in unique.values()):
            survivors.append(p)
    survivors.sort(key=lambda p: (len(p.key), p.key))
    result = tuple(survivors)
    if verify:
        _audit_decomposition(I, result)
    _MINIMAL_PRIME_CACHE[I] = result
    return result


def _audit_decomposition(I, primes):
    for p in primes:
        for g in I.gens:
            assert p.ideal.contains(g), f"component {p} misses the ideal"
    for p, q in itertools.combinations(primes, 2):
        assert not p.ideal.contains_ideal(q.ideal), "comparable components"
        assert not q.ideal.contains_ideal(p.ideal), "comparable components"
    if not primes:
        return
    total = primes[0].ideal
    for p in primes[1:]:
        total = intersect(total, p.ideal)
    for g in total.gens:
        assert in_radical(g, I), "components do not cover the ideal"


def is_prime(I):
    """Certified primality: I equals its single minimal prime."""
    if I.is_unit():
        return False
    primes = minimal_primes(I)
    return len(primes) == 1 and primes[0].ideal == I


def assert_decomposition(I, ideals):
    """Escape hatch: trust primality of the given ideals, but still audit
    containment, incomparability and covering."""
    primes = tuple(PrimeIdeal(J, certified=False) for J in ideals)
    _audit_decomposition(I, primes)
    return primes


# ---------------------------------------------------------------------------
# local lengths and ranks

def _matrix_rank_mod_prime(rows, p):
    """Rank over Frac(ring/p) of the matrix whose rows are coordinate
    tuples, by fraction-free elimination with normal forms as zero tests."""
    nf = p.ideal.normal_form
    mat = [[nf(c) for c in row] for row in rows]
    mat = [row for row in mat if any(not c.is_zero() for c in row)]
    if not mat:
        return 0
    cols = len(mat[0])
    rank = 0
    for col in range(cols):
        pivot = None
        for r in range(rank, len(mat)):
            if not mat[r][col].is_zero():
                pivot = r
                break
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        pv = mat[rank][col]
        for r in range(rank + 1, len(mat)):
            if mat[r][col].is_zero():
                continue
            scale = mat[r][col]
            mat[r] = [nf(pv * mat[r][j] - scale * mat[rank][j])
                      for j in range(cols)]
        rank += 1
        if rank == len(mat):
            break
    return rank


def generic_rank(M, p, modulo=None):
    """Rank of M at the generic point of V(p): rank minus the rank of the
    relation matrix over the residue field of p."""
    if M.rank == 0:
        return 0
    rows = [v.coords for v in M.relations]
    rows += [v.coords for v in _fold(modulo, M.ring, M.rank)]
    return M.rank - _matrix_rank_mod_prime(rows, p)


def length_at_prime(M, p, modulo=None, max_steps=60):
    """Length of the localization of M at p (p minimal over Ann M).

    Filtration by powers of p: each graded piece is a vector space over the
    residue field of p; its dimension is the number of degree-i generators
    minus the generic rank of their relation module.  The first empty piece
    ends the sum (Nakayama).  Non-termination means p was not minimal over
    the annihilator, reported as HypothesisError."""
    ring = M.ring
    if M.rank == 0:
        return 0
    pgens = list(p.ideal.groebner_basis())
    rels = list(M.relations) + _fold(modulo, ring, M.rank)
    if not pgens:
        # generic point of the whole chart: length = generic rank
        return generic_rank(M, p)
    level = [ring.one]
    total = 0
    for _ in range(max_steps):
        nxt_set = {}
        for m in level:
            for g in pgens:
                q = m * g
                nxt_set[q.terms] = q
        nxt = list(nxt_set.values())
        targets = [FreeModuleElement.unit(ring, M.rank, a).scale(m)
                   for m in level for a in range(M.rank)]
        ambient = [FreeModuleElement.unit(ring, M.rank, a).scale(m)
                   for m in nxt for a in range(M.rank)] + rels
        W = coefficient_module(targets, ambient, M.rank, ring)
        d = len(targets) - _matrix_rank_mod_prime([w.coords for w in W], p)
        if d == 0:
            return total
        total += d
        level = nxt
    raise HypothesisError(
        f"length at {p} did not stabilize after {max_steps} steps; "
        "the prime is not minimal over the annihilator")
