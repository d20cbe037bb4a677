"""Finitely presented modules, syzygies, free resolutions and Tor.

A module over a chart algebra A = R/J is presented over the polynomial ring R
with J folded into every relation list, so one Gröbner engine serves both the
polynomial ring and its quotients.  Syzygies are computed by the witness
trick: run Buchberger on (g_t, e_t) under an order whose main block dominates
the witness block; basis elements with zero main part are exactly the
syzygies.  Resolutions iterate that; Tor is the homology of a resolution
tensored with the second module.
"""

from .errors import EngineError, ResolutionError, RingMismatchError
from .groebner import (Ideal, buchberger, module_order, split_module_order,
                       vec_from_polys, vec_reduce, vec_to_polys, _prepare)
from .polyring import elimination_order


class FreeModuleElement:
    """An element of R^rank: a tuple of polynomial coordinates."""

    __slots__ = ("ring", "coords")

    def __init__(self, ring, coords):
        coords = tuple(coords)
        for c in coords:
            if c.ring != ring:
                raise RingMismatchError("coordinate from a different ring")
        self.ring = ring
        self.coords = coords

    @property
    def rank(self):
        return len(self.coords)

    @classmethod
    def unit(cls, ring, rank, pos):
        return cls(ring, tuple(ring.one if i == pos else ring.zero for i in range(rank)))

    def __getitem__(self, i):
        return self.coords[i]

    def __add__(self, other):
        return FreeModuleElement(self.ring, (a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        return FreeModuleElement(self.ring, (a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        return FreeModuleElement(self.ring, (-a for a in self.coords))

    def scale(self, p):
        return FreeModuleElement(self.ring, (p * a for a in self.coords))

    def is_zero(self):
        return all(c.is_zero() for c in self.coords)

    def __eq__(self, other):
        return (isinstance(other, FreeModuleElement)
                and other.ring == self.ring and other.coords == self.coords)

    def __hash__(self):
        return hash((self.ring, self.coords))

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.coords) + ")"

    def __repr__(self):
        return f"<vec {self}>"


def _as_element(ring, rank, v):
    if isinstance(v, FreeModuleElement):
        if v.rank != rank:
            raise EngineError(f"rank mismatch: {v.rank} != {rank}")
        return v
    coords = []
    for c in v:
        coords.append(ring.parse(c) if isinstance(c, str) else c)
    if len(coords) != rank:
        raise EngineError(f"rank mismatch: {len(coords)} != {rank}")
    return FreeModuleElement(ring, coords)


class FPModule:
    """coker of the relation matrix: A^rank / span(relations)."""

    def __init__(self, ring, rank, relations=()):
        self.ring = ring
        self.rank = rank
        rels = [_as_element(ring, rank, v) for v in relations]
        self.relations = tuple(v for v in rels if not v.is_zero())

    @classmethod
    def free(cls, ring, rank):
        return cls(ring, rank, ())

    @classmethod
    def cyclic(cls, ideal):
        """Presentation of ring/ideal."""
        return cls(ideal.ring, 1, [FreeModuleElement(ideal.ring, (g,)) for g in ideal.gens])

    def __repr__(self):
        return f"<module rank {self.rank}, {len(self.relations)} relations over {self.ring}>"


def _fold(modulo, ring, rank):
    """J * e_a relation copies for working over R/J."""
    if modulo is None or not modulo.gens:
        return []
    out = []
    for g in modulo.gens:
        for a in range(rank):
            out.append(FreeModuleElement(
                ring, tuple(g if i == a else ring.zero for i in range(rank))))
    return out


def module_basis(vectors, rank, ring, modulo=None):
    """Reduced module Gröbner basis of the span (with J folded in)."""
    vecs = list(vectors) + _fold(modulo, ring, rank)
    order = module_order(ring.order, rank)
    raw = [vec_from_polys(v.coords, order.key) for v in vecs]
    basis = buchberger(raw, order.key, ring.field, use_criteria=False)
    return [FreeModuleElement(ring, vec_to_polys(v, rank, ring)) for v in basis]


def vector_normal_form(v, basis, rank, ring):
    """Full normal form of v against a module basis (term-over-position)."""
    order = module_order(ring.order, rank)
    raw = [vec_from_polys(b.coords, order.key) for b in basis if not b.is_zero()]
    w = vec_reduce(vec_from_polys(v.coords, order.key), _prepare(raw), order.key, ring.field)
    return FreeModuleElement(ring, vec_to_polys(w, rank, ring))


def in_span(v, basis, rank, ring):
    return vector_normal_form(v, basis, rank, ring).is_zero()


def coefficient_module(targets, ambient, rank, ring, modulo=None, coeff_names=None):
    """Generators of {(c_1..c_m) : sum c_t * targets_t in span(ambient) + J*A^rank}.

    With coeff_names given, only coefficient vectors lying in the subring on
    those variables are returned (and they generate the restricted module
    over that subring: module elimination).
    """
    targets = [_as_element(ring, rank, t) for t in targets]
    ambient = [_as_element(ring, rank, u) for u in ambient]
    m = len(targets)
    if m == 0:
        return []
    big = rank + m
    vectors = []
    for u in ambient + _fold(modulo, ring, rank):
        vectors.append(tuple(u.coords) + (ring.zero,) * m)
    for t, v in enumerate(targets):
        unit = tuple(ring.one if i == t else ring.zero for i in range(m))
        vectors.append(tuple(v.coords) + unit)
    if coeff_names is None:
        witness_order = ring.order
        banned = None
    else:
        keep = {ring.index_of(nm) for nm in coeff_names}
        banned = [i for i in range(ring.nvars) if i not in keep]
        if banned:
            witness_order = elimination_order(banned, ring.nvars)
        else:
            witness_order = ring.order
    order = split_module_order(rank, m, ring.order, witness_order)
    raw = [vec_from_polys(v, order.key) for v in vectors]
    basis = buchberger(raw, order.key, ring.field, use_criteria=False)
    out = []
    for b in basis:
        if not b or b[0][0][0] < rank:
            continue  # leading term in the main block
        if banned and any(b[0][0][1][i] for i in banned):
            continue  # witness head meets an eliminated variable
        coords = vec_to_polys(b, big, ring)[rank:]
        elem = FreeModuleElement(ring, coords)
        if banned:
            # the order argument guarantees this; keep it as a hard check
            assert not any(set(c.support()) & set(banned) for c in coords)
        out.append(elem)
    return out


def syzygies(vectors, rank, ring, modulo=None):
    """Generators of the syzygy module of `vectors` over ring/modulo."""
    return coefficient_module(vectors, [], rank, ring, modulo=modulo)


class Complex:
    """... -> A^{ranks[i]} --mats[i-1]--> A^{ranks[i-1]} -> ... -> A^{ranks[0]}

    mats[i] is the list of columns of d_{i+1} (each a FreeModuleElement of
    rank ranks[i]).  `complete` records whether the syzygies were exhausted.
    """

    def __init__(self, ring, ranks, mats, complete):
        self.ring = ring
        self.ranks = list(ranks)
        self.mats = list(mats)
        self.complete = complete

    def length(self):
        return len(self.mats)

    def apply(self, i, v):
        """Image of v in A^{ranks[i]} under d_i (columns mats[i-1])."""
        cols = self.mats[i - 1]
        out = [self.ring.zero] * self.ranks[i - 1]
        for a, col in enumerate(cols):
            p = v[a]
            if p.is_zero():
                continue
            for b in range(self.ranks[i - 1]):
                out[b] = out[b] + p * col[b]
        return FreeModuleElement(self.ring, out)

    def is_complex(self, modulo=None):
        """d_i composed with d_{i+1} vanishes (modulo the chart ideal)."""
        zero = Ideal(self.ring, ()) if modulo is None else modulo
        for i in range(1, len(self.mats)):
            for col in self.mats[i]:
                image = self.apply(i, col)
                for c in image.coords:
                    if not zero.normal_form(c).is_zero():
                        return False
        return True


def free_resolution(M, modulo=None, max_length=None, partial=False):
    """Free resolution of M over ring/modulo by iterated syzygies.

    Raises ResolutionError when max_length is hit, unless partial=True (used
    by Tor, which only needs a truncation)."""
    ring = M.ring
    if max_length is None:
        max_length = ring.nvars + 6
    kill = Ideal(ring, ()) if modulo is None else modulo

    def significant(vectors):
        return [v for v in vectors
                if not all(kill.normal_form(c).is_zero() for c in v.coords)]

    ranks = [M.rank]
    mats = []
    current = significant(module_basis(M.relations, M.rank, ring, modulo=modulo))
    complete = not current
    while current:
        if len(mats) >= max_length:
            if partial:
                complete = False
                break
            raise ResolutionError(
                f"free resolution exceeded max_length={max_length} without terminating")
        mats.append(list(current))
        ranks.append(len(current))
        syz = significant(syzygies(current, ranks[-2], ring, modulo=modulo))
        if not syz:
            complete = True
            break
        current = significant(module_basis(syz, ranks[-1], ring, modulo=modulo))
    return Complex(ring, ranks, mats, complete)


def _slot_relations(N, slots, ring):
    """Copies of N.relations in each of `slots` blocks of size N.rank."""
    out = []
    total = slots * N.rank
    for t in range(slots):
        for rel in N.relations:
            coords = [ring.zero] * total
            for b in range(N.rank):
                coords[t * N.rank + b] = rel[b]
            out.append(FreeModuleElement(ring, coords))
    return out


def _tensor_columns(cols, source_rank, N, ring):
    """Columns of d tensor id_N on free covers.

    d has `len(cols)` columns in A^{target_rank}; the tensored map sends
    basis vector (t, b) to the vector with col_t[a] placed at (a, b)."""
    if not cols:
        return []
    target_rank = cols[0].rank
    out = []
    for t, col in enumerate(cols):
        for b in range(N.rank):
            coords = [ring.zero] * (target_rank * N.rank)
            for a in range(target_rank):
                coords[a * N.rank + b] = col[a]
            out.append(FreeModuleElement(ring, coords))
    return out


def tor_modules(M, N, modulo=None, up_to=None):
    """[Tor_0(M, N), ..., Tor_up_to(M, N)] over ring/modulo as FPModules."""
    ring = M.ring
    if N.ring != ring:
        raise RingMismatchError("Tor of modules over different rings")
    if up_to is None:
        up_to = ring.nvars
    res = free_resolution(M, modulo=modulo, max_length=up_to + 1, partial=True)
    out = []
    for i in range(up_to + 1):
        if i > res.length():
            out.append(FPModule(ring, 0, ()))
            continue
        rank_i = res.ranks[i] * N.rank
        if rank_i == 0:
            out.append(FPModule(ring, 0, ()))
            continue
        u_here = _slot_relations(N, res.ranks[i], ring)
        boundary = (_tensor_columns(res.mats[i], res.ranks[i], N, ring)
                    if i < res.length() else [])
        if i == 0:
            out.append(FPModule(ring, rank_i, boundary + u_here))
            continue
        d_cols = _tensor_columns(res.mats[i - 1], res.ranks[i - 1], N, ring)
        u_prev = _slot_relations(N, res.ranks[i - 1], ring)
        kernel = coefficient_module(d_cols, u_prev, res.ranks[i - 1] * N.rank,
                                    ring, modulo=modulo)
        if not kernel:
            out.append(FPModule(ring, 0, ()))
            continue
        rels = coefficient_module(kernel, boundary + u_here, rank_i, ring, modulo=modulo)
        out.append(FPModule(ring, len(kernel), rels))
    return out


def annihilator(M, modulo=None):
    """Ann(M) over ring/modulo, as an ideal of the polynomial ring
    (contains the chart ideal)."""
    ring = M.ring
    if M.rank == 0:
        return Ideal(ring, (ring.one,))
    from .groebner import intersect
    total = None
    for a in range(M.rank):
        unit = FreeModuleElement.unit(ring, M.rank, a)
        gens = coefficient_module([unit], M.relations, M.rank, ring, modulo=modulo)
        Ia = Ideal(ring, [g[0] for g in gens])
        if modulo is not None:
            Ia = Ia + modulo
        total = Ia if total is None else intersect(total, Ia)
    return total


def is_zero_module(M, modulo=None):
    if M.rank == 0:
        return True
    basis = module_basis(M.relations, M.rank, M.ring, modulo=modulo)
    return all(in_span(FreeModuleElement.unit(M.ring, M.rank, a), basis, M.rank, M.ring)
               for a in range(M.rank))
