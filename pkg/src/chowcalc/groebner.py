"""Buchberger engine and ideal arithmetic.

One engine serves ideals and submodules of free modules: a module monomial is
a (position, exponents) pair and an ideal is the rank-one case.  Pair
selection is by lowest lcm degree; the coprimality and chain criteria are
applied only on the rank-one path (the coprimality criterion is unsound for
module monomials, and in syzygy extraction skipped pairs would lose
generators).

Reduced bases (monic, fully auto-reduced, sorted by descending leading
monomial) are canonical, cached per ideal per order, and every computation
here is deterministic.
"""

import contextvars
from contextlib import contextmanager

from .errors import (DegreeOverflowError, EngineError, InexactDivisionError,
                     RingMismatchError)
from .polyring import (PolynomialRing, elimination_order, grevlex, lex,
                       mono_degree, mono_div, mono_divides, mono_lcm, mono_mul,
                       transport)

_degree_limit_var = contextvars.ContextVar("chowcalc_degree_limit", default=None)


@contextmanager
def degree_limit(bound):
    """Abort any basis computation that produces a leading monomial of total
    degree above `bound` (the CLI safety valve)."""
    token = _degree_limit_var.set(bound)
    try:
        yield
    finally:
        _degree_limit_var.reset(token)


# ---------------------------------------------------------------------------
# module orders: block of positions decides first, then the block's ring
# order on the monomial, then (reversed) position.

class ModuleOrder:
    def __init__(self, ring_orders, block_of):
        self.ring_orders = tuple(ring_orders)
        self.block_of = tuple(block_of)

    def key(self, m):
        pos, exps = m
        b = self.block_of[pos]
        return (-b, self.ring_orders[b].key(exps), -pos)


def module_order(ring_order, rank):
    """Term-over-position order on A^rank."""
    return ModuleOrder((ring_order,), (0,) * rank)


def split_module_order(main_rank, witness_rank, main_order, witness_order):
    """Main positions dominate witness positions: a basis element whose
    leading term sits in the witness block lives entirely in it."""
    return ModuleOrder((main_order, witness_order),
                       (0,) * main_rank + (1,) * witness_rank)


# ---------------------------------------------------------------------------
# vector terms: tuple of ((pos, exps), coeff) sorted descending by key

def vec_from_polys(polys, key):
    terms = []
    for i, p in enumerate(polys):
        for e, c in p.terms:
            terms.append(((i, e), c))
    terms.sort(key=lambda t: key(t[0]), reverse=True)
    return tuple(terms)


def vec_to_polys(v, rank, ring):
    buckets = [{} for _ in range(rank)]
    for (i, e), c in v:
        buckets[i][e] = c
    return tuple(ring.from_dict(b) for b in buckets)


def vec_combine(a, b, key, field, subtract=False):
    """a + b (or a - b) for canonical sorted term tuples."""
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        ma, ca = a[i]
        mb, cb = b[j]
        if ma == mb:
            c = field.sub(ca, cb) if subtract else field.add(ca, cb)
            if c != field.zero:
                out.append((ma, c))
            i += 1
            j += 1
        elif key(ma) > key(mb):
            out.append((ma, ca))
            i += 1
        else:
            out.append((mb, field.neg(cb) if subtract else cb))
            j += 1
    out.extend(a[i:])
    if subtract:
        out.extend((m, field.neg(c)) for m, c in b[j:])
    else:
        out.extend(b[j:])
    return tuple(out)


def vec_mul_term(v, exps, coeff, field):
    return tuple(((pos, mono_mul(e, exps)), field.mul(c, coeff)) for (pos, e), c in v)


def vec_scale(v, coeff, field):
    if coeff == field.zero:
        return ()
    return tuple((m, field.mul(c, coeff)) for m, c in v)


def vec_monic(v, field):
    if not v:
        return v
    c = v[0][1]
    if c == field.one:
        return v
    return vec_scale(v, field.inv(c), field)


def vec_reduce(v, prepared, key, field):
    """Full normal form of v against prepared = [(lm, lc, terms), ...]."""
    out = []
    work = v
    while work:
        (pos, e), c = work[0]
        hit = None
        for lm, lc, terms in prepared:
            if lm[0] == pos and mono_divides(lm[1], e):
                hit = (lm, lc, terms)
                break
        if hit is None:
            out.append(work[0])
            work = work[1:]
        else:
            lm, lc, terms = hit
            factor = field.div(c, lc)
            work = vec_combine(work, vec_mul_term(terms, mono_div(e, lm[1]), factor, field),
                               key, field, subtract=True)
    return tuple(out)


def _prepare(basis):
    return [(v[0][0], v[0][1], v) for v in basis]


def _spair(f, g, key, field):
    (pf, ef), cf = f[0]
    (pg, eg), cg = g[0]
    l = mono_lcm(ef, eg)
    a = vec_mul_term(f, mono_div(l, ef), field.inv(cf), field)
    b = vec_mul_term(g, mono_div(l, eg), field.inv(cg), field)
    return vec_combine(a, b, key, field, subtract=True)


def buchberger(vecs, key, field, use_criteria):
    """Reduced basis of the submodule generated by `vecs`."""
    limit = _degree_limit_var.get()
    basis = [v for v in vecs if v]
    basis.sort(key=lambda v: key(v[0][0]))
    prepared = _prepare(basis)

    def lcm_of(i, j):
        (pi, ei), _ = basis[i][0]
        (pj, ej), _ = basis[j][0]
        if pi != pj:
            return None
        return mono_lcm(ei, ej)

    pending = {}
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            l = lcm_of(i, j)
            if l is not None:
                pending[(i, j)] = l

    while pending:
        (i, j), l = min(pending.items(),
                        key=lambda kv: (mono_degree(kv[1]), key((basis[kv[0][0]][0][0][0], kv[1])), kv[0]))
        del pending[(i, j)]
        (pos, ei), _ = basis[i][0]
        (_, ej), _ = basis[j][0]
        if use_criteria:
            if l == mono_mul(ei, ej):
                continue  # coprime leading monomials
            chained = False
            for k in range(len(basis)):
                if k in (i, j):
                    continue
                (pk, ek), _ = basis[k][0]
                if pk != pos or not mono_divides(ek, l):
                    continue
                if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
                    chained = True
                    break
            if chained:
                continue
        r = vec_reduce(_spair(basis[i], basis[j], key, field), prepared, key, field)
        if not r:
            continue
        if limit is not None and mono_degree(r[0][0][1]) > limit:
            raise DegreeOverflowError(
                f"basis element of degree {mono_degree(r[0][0][1])} exceeds --max-degree {limit}")
        t = len(basis)
        basis.append(r)
        prepared.append((r[0][0], r[0][1], r))
        for s in range(t):
            l2 = lcm_of(s, t)
            if l2 is not None:
                pending[(s, t)] = l2

    return _reduce_basis(basis, key, field)


def _reduce_basis(basis, key, field):
    # minimal: drop anything whose leading monomial another leading monomial divides
    basis = sorted(basis, key=lambda v: key(v[0][0]))
    kept = []
    for v in basis:
        (pos, e), _ = v[0]
        if not any(u[0][0][0] == pos and mono_divides(u[0][0][1], e) for u in kept):
            kept.append(v)
    # one full-reduction pass: leading monomials are untouched, tails become
    # irreducible against the fixed leading set
    reduced = []
    for idx, v in enumerate(kept):
        others = _prepare([u for t, u in enumerate(kept) if t != idx])
        reduced.append(vec_monic(vec_reduce(v, others, key, field), field))
    reduced.sort(key=lambda v: key(v[0][0]), reverse=True)
    return tuple(reduced)


# ---------------------------------------------------------------------------
# ideals

class Ideal:
    """Finitely generated ideal with reduced bases cached per order."""

    def __init__(self, ring, gens):
        self.ring = ring
        clean = []
        for g in gens:
            if isinstance(g, str):
                g = ring.parse(g)
            if g.ring != ring:
                raise RingMismatchError(f"generator {g} not in {ring}")
            if not g.is_zero():
                clean.append(g)
        self.gens = tuple(clean)
        self._cache = {}

    def _computed(self, order=None):
        order = order or self.ring.order
        tag = order.tag
        if tag not in self._cache:
            key = module_order(order, 1).key
            vecs = [vec_from_polys((g,), key) for g in self.gens]
            basis = buchberger(vecs, key, self.ring.field, use_criteria=True) if vecs else ()
            polys = tuple(vec_to_polys(v, 1, self.ring)[0] for v in basis)
            lms = tuple(v[0][0][1] for v in basis)
            self._cache[tag] = (polys, lms, basis, key)
        return self._cache[tag]

    def groebner_basis(self, order=None):
        return self._computed(order)[0]

    def leading_exponents(self, order=None):
        return self._computed(order)[1]

    def normal_form(self, f, order=None):
        if isinstance(f, str):
            f = self.ring.parse(f)
        if f.ring != self.ring:
            raise RingMismatchError(f"{f} not in {self.ring}")
        _, _, basis, key = self._computed(order)
        if not basis:
            return f
        v = vec_from_polys((f,), key)
        r = vec_reduce(v, _prepare(basis), key, self.ring.field)
        return vec_to_polys(r, 1, self.ring)[0]

    def contains(self, f):
        return self.normal_form(f).is_zero()

    def contains_ideal(self, other):
        return all(self.contains(g) for g in other.gens)

    def is_zero(self):
        return not self.groebner_basis()

    def is_unit(self):
        gb = self.groebner_basis()
        return len(gb) == 1 and gb[0].is_one()

    def key(self):
        return tuple(str(g) for g in self.groebner_basis())

    def __add__(self, other):
        if isinstance(other, Ideal):
            if other.ring != self.ring:
                raise RingMismatchError("ideal sum across rings")
            return Ideal(self.ring, self.gens + other.gens)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Ideal):
            if other.ring != self.ring:
                raise RingMismatchError("ideal product across rings")
            return Ideal(self.ring, tuple(g * h for g in self.gens for h in other.gens))
        return NotImplemented

    def __eq__(self, other):
        return (isinstance(other, Ideal) and other.ring == self.ring
                and other.groebner_basis() == self.groebner_basis())

    def __hash__(self):
        return hash((self.ring, self.groebner_basis()))

    def __str__(self):
        gb = self.groebner_basis()
        return "(" + ", ".join(str(g) for g in gb) + ")" if gb else "(0)"

    def __repr__(self):
        return f"Ideal{self}"


def _fresh_name(ring, base):
    if base not in ring.names:
        return base
    k = 0
    while f"{base}{k}" in ring.names:
        k += 1
    return f"{base}{k}"


def _result_order(order):
    # block orders do not survive variable removal; fall back to grevlex
    return order if order in (grevlex, lex) else grevlex


def eliminate(I, kill):
    """I intersected with the subring omitting the named variables, as an
    ideal of that smaller ring."""
    ring = I.ring
    idx = []
    for v in kill:
        idx.append(ring.index_of(v) if isinstance(v, str) else v)
    idx = sorted(set(idx))
    keep = [i for i in range(ring.nvars) if i not in idx]
    order = elimination_order(idx, ring.nvars)
    gb = I.groebner_basis(order)
    target = PolynomialRing(ring.field, tuple(ring.names[i] for i in keep),
                            _result_order(ring.order))
    out = []
    for g in gb:
        if not (g.support() & set(idx)):
            out.append(transport(g, target))
    return Ideal(target, out)


def intersect(I, J):
    if I.ring != J.ring:
        raise RingMismatchError("intersecting ideals across rings")
    ring = I.ring
    if not I.gens or not J.gens:
        return Ideal(ring, ())
    tname = _fresh_name(ring, "t")
    big = PolynomialRing(ring.field, (tname,) + ring.names, grevlex)
    t = big.var(0)
    gens = [t * transport(g, big) for g in I.gens]
    gens += [(big.one - t) * transport(h, big) for h in J.gens]
    elim = eliminate(Ideal(big, gens), (tname,))
    target = ring
    return Ideal(target, [transport(g, target) for g in elim.gens])


def divide_exact(g, h):
    """g / h when h divides g in the ambient polynomial ring."""
    ring = g.ring
    field = ring.field
    q = {}
    r = g
    while not r.is_zero():
        if not mono_divides(h.lm(), r.lm()):
            raise InexactDivisionError(f"{h} does not divide {g}")
        e = mono_div(r.lm(), h.lm())
        c = field.div(r.lc(), h.lc())
        q[e] = field.add(q.get(e, field.zero), c)
        r = r - h.mul_term(e, c)
    return ring.from_dict(q)


def quotient(I, J):
    """Ideal quotient (I : J) = {g : g*J inside I}."""
    ring = I.ring
    if not isinstance(J, Ideal):
        J = Ideal(ring, (J,))
    if J.ring != ring:
        raise RingMismatchError("ideal quotient across rings")
    if not J.gens:
        return Ideal(ring, (ring.one,))
    result = None
    for h in J.gens:
        K = intersect(I, Ideal(ring, (h,)))
        Qh = Ideal(ring, [divide_exact(g, h) for g in K.gens])
        result = Qh if result is None else intersect(result, Qh)
    return result


def saturation(I, f):
    """(I : f^infinity) by iterated quotients; stabilizes by noetherianity."""
    current = I
    while True:
        nxt = quotient(current, f)
        if nxt == current:
            return current
        current = nxt


def in_radical(f, I):
    """Rabinowitsch membership test: f in rad(I) iff 1 in I + (1 - t*f)."""
    ring = I.ring
    if isinstance(f, str):
        f = ring.parse(f)
    tname = _fresh_name(ring, "t")
    big = PolynomialRing(ring.field, (tname,) + ring.names, grevlex)
    t = big.var(0)
    gens = [transport(g, big) for g in I.gens]
    gens.append(big.one - t * transport(f, big))
    return Ideal(big, gens).is_unit()


def is_regular_element(f, I):
    """f is a non-zerodivisor on ring/I iff (I : f) == I."""
    ring = I.ring
    if isinstance(f, str):
        f = ring.parse(f)
    return quotient(I, Ideal(ring, (f,))) == I


def krull_dim(I):
    """Dimension of ring/I: the largest set of variables independent modulo
    the leading-term ideal.  Unit ideal gives -1."""
    ring = I.ring
    if I.is_unit():
        return -1
    supports = []
    for e in I.leading_exponents():
        supports.append(frozenset(i for i, k in enumerate(e) if k))
    n = ring.nvars
    from itertools import combinations
    for size in range(n, -1, -1):
        for S in combinations(range(n), size):
            S = set(S)
            if not any(sup <= S for sup in supports):
                return size
    return 0
