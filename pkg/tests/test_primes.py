"""Factorization, minimal primes, certification, local lengths."""

import pytest

from chowcalc.errors import DecompositionError, HypothesisError, NotPrimeError
from chowcalc.fields import GF, QQ
from chowcalc.groebner import Ideal, intersect
from chowcalc.homology import FPModule, FreeModuleElement
from chowcalc.polyring import PolynomialRing
from chowcalc.primes import (FactorizationUnavailable, PrimeIdeal, assert_decomposition,
                             assert_prime, factor, generic_rank, is_irreducible,
                             is_prime, length_at_prime, minimal_polynomial,
                             minimal_primes, vector_space_dimension)

R2 = PolynomialRing(QQ, ("x", "y"))
R3 = PolynomialRing(QQ, ("x", "y", "z"))


def keys(primes):
    return {p.key for p in primes}


def test_factor_multivariate_rational():
    f = R2.parse("x^2*y - y^3")
    facs = factor(f)
    assert {str(q) for q, _ in facs} == {"y", "x - y", "x + y"}
    assert all(e == 1 for _, e in facs)


def test_factor_univariate_rational():
    R1 = PolynomialRing(QQ, ("t",))
    facs = factor(R1.parse("t^4 - 1"))
    assert {str(q) for q, _ in facs} == {"t - 1", "t + 1", "t^2 + 1"}


def test_factor_constants_and_irreducibles():
    assert factor(R2.parse("3/4")) == []
    assert factor(R2.zero) == []
    facs = factor(R2.parse("x^2 + 2"))
    assert len(facs) == 1 and facs[0][1] == 1
    assert is_irreducible(R2.parse("x^2 + 2"))
    assert not is_irreducible(R2.parse("x^2 - 1"))
    assert not is_irreducible(R2.parse("5"))
    assert not is_irreducible(R2.parse("x^2 + 2*x + 1"))


def test_factor_finite_field():
    F5 = PolynomialRing(GF(5), ("x", "y"))
    facs = factor(F5.parse("x^2 + 1"))
    assert {str(q) for q, _ in facs} == {"x + 2", "x + 3"}
    # homogeneous bivariate reduces to the univariate case
    facs = factor(F5.parse("x^2 + y^2"))
    assert {str(q) for q, _ in facs} == {"x + 2*y", "x + 3*y"}
    facs = factor(F5.parse("x^3*y^2 + x*y^4"))
    assert sorted((str(q), e) for q, e in facs) == [
        ("x", 1), ("x + 2*y", 1), ("x + 3*y", 1), ("y", 2)]
    with pytest.raises(FactorizationUnavailable):
        factor(F5.parse("x^2 + y^2 + 1"))


def test_prime_ideal_identity():
    p = minimal_primes(Ideal(R2, ("x",)))[0]
    q = minimal_primes(Ideal(R2, ("x", "x*y")))[0]
    assert p == q and hash(p) == hash(q)
    assert str(p) == "(x)"
    assert p.dim() == 1
    assert p.contains(R2.parse("x^2*y"))


def test_minimal_primes_principal_split():
    primes = minimal_primes(Ideal(R2, ("x*y",)))
    assert keys(primes) == {("x",), ("y",)}
    assert all(p.certified for p in primes)


def test_minimal_primes_radical_collapse():
    assert keys(minimal_primes(Ideal(R2, ("x^2",)))) == {("x",)}
    assert keys(minimal_primes(Ideal(R2, ("x^2", "x*y")))) == {("x",)}


def test_minimal_primes_two_components_mixed_dim():
    primes = minimal_primes(Ideal(R3, ("x*y", "x*z")))
    assert keys(primes) == {("x",), ("y", "z")}
    dims = sorted(p.dim() for p in primes)
    assert dims == [1, 2]


def test_minimal_primes_two_planes():
    R4 = PolynomialRing(QQ, ("x", "y", "z", "w"))
    I = intersect(Ideal(R4, ("x", "y")), Ideal(R4, ("z", "w")))
    primes = minimal_primes(I)
    assert keys(primes) == {("x", "y"), ("z", "w")}


def test_twisted_cubic_is_prime():
    I = Ideal(R3, ("y - x^2", "z - x^3"))
    assert is_prime(I)
    assert minimal_primes(I)[0].dim() == 1


def test_linear_ideal_is_prime():
    R4 = PolynomialRing(QQ, ("x", "y", "z", "w"))
    assert is_prime(Ideal(R4, ("x - z", "y - w")))
    assert is_prime(Ideal(R4, ("x", "y", "z", "w")))


def test_hypersurfaces():
    assert is_prime(Ideal(R2, ("x*y - 1",)))
    assert is_prime(Ideal(R2, ("y^2 - x^3",)))  # cusp: irreducible though singular
    assert not is_prime(Ideal(R2, ("y^2 - x^2",)))


def test_zero_dimensional_field_extension():
    I = Ideal(R2, ("x^2 - 2", "y - x"))
    assert is_prime(I)


def test_zero_dimensional_splitting_via_eliminant():
    # both generators are irreducible, yet the ideal splits along y = +-x
    I = Ideal(R2, ("x^2 - 2", "y^2 - 2"))
    primes = minimal_primes(I)
    assert keys(primes) == {("y^2 - 2", "x - y"), ("y^2 - 2", "x + y")}
    assert all(p.dim() == 0 for p in primes)


def test_zero_dimensional_rational_points():
    I = Ideal(R2, ("x^2 - 1", "y - x"))
    primes = minimal_primes(I)
    assert keys(primes) == {("x - 1", "y - 1"), ("x + 1", "y + 1")}


def test_localization_chart_prime():
    R = PolynomialRing(QQ, ("u", "x", "y"))
    assert is_prime(Ideal(R, ("y", "u*x - 1")))
    # inverting x on V(x) leaves nothing
    assert minimal_primes(Ideal(R, ("x", "u*x - 1"))) == ()


def test_localization_with_split_downstairs():
    R = PolynomialRing(QQ, ("u", "x", "y"))
    I = Ideal(R, ("x*y", "u*x - 1"))  # inverting x kills the x-axis branch
    primes = minimal_primes(I)
    assert keys(primes) == {("u*x - 1", "y")}


def test_unit_ideal_and_zero_ideal():
    assert minimal_primes(Ideal(R2, ("x", "x - 1"))) == ()
    zero = minimal_primes(Ideal(R2, ()))
    assert len(zero) == 1 and zero[0].key == ()
    assert str(zero[0]) == "(0)"
    assert not is_prime(Ideal(R2, ("1",)))


def test_finite_field_decomposition():
    F5 = PolynomialRing(GF(5), ("x", "y"))
    primes = minimal_primes(Ideal(F5, ("x^2 + 1", "y")))
    assert keys(primes) == {("x + 2", "y"), ("x + 3", "y")}


def test_decomposition_error_outside_fragment():
    with pytest.raises(DecompositionError):
        minimal_primes(Ideal(R3, ("x^2 + y^2", "z")))
    F5 = PolynomialRing(GF(5), ("x", "y"))
    with pytest.raises(DecompositionError):
        minimal_primes(Ideal(F5, ("x^2 + y^2 + 1",)))


def test_split_found_only_in_an_eliminant():
    # no reduced-basis element factors, but eliminating x exposes t^2 - s^2
    R = PolynomialRing(QQ, ("t", "x", "s"))
    primes = minimal_primes(Ideal(R, ("t^2 - x", "s^2 - x")))
    assert keys(primes) == {("s^2 - x", "t + s"), ("s^2 - x", "t - s")}


def test_finite_field_homogeneous_split():
    F5 = PolynomialRing(GF(5), ("x", "y"))
    primes = minimal_primes(Ideal(F5, ("x^2 + y^2",)))
    assert keys(primes) == {("x + 2*y",), ("x + 3*y",)}


def test_assert_decomposition_escape_hatch():
    I = Ideal(R3, ("x^2 + y^2", "z"))
    primes = assert_decomposition(I, [Ideal(R3, ("x^2 + y^2", "z"))])
    assert len(primes) == 1 and not primes[0].certified
    with pytest.raises(AssertionError):
        assert_decomposition(I, [Ideal(R3, ("x", "z"))])  # fails the covering audit
    with pytest.raises(NotPrimeError):
        assert_prime(Ideal(R2, ("1",)))


def test_vector_space_dimension_table():
    cases = [
        (R2, ("x", "y"), 1),
        (R2, ("x^2", "y^3"), 6),
        (R2, ("x^2", "x*y", "y^2"), 3),
        (R2, ("x^3", "y"), 3),
        (R2, ("x^2 - 1", "y - x"), 2),
        (R2, ("y - x^2",), None),
        (R2, ("1",), 0),
        (R3, ("x", "y", "z"), 1),
        (R3, ("x^2", "y^2", "z^2"), 8),
        (R3, ("x^2 - y", "y^2 - z", "z^2"), 8),
        (R3, ("x*y", "z"), None),
    ]
    for ring, gens, expected in cases:
        assert vector_space_dimension(Ideal(ring, gens)) == expected, gens


def test_minimal_polynomial():
    I = Ideal(R2, ("x^2 - 2", "y - x"))
    m = minimal_polynomial(I, "x + y")  # = 2x, squaring to 8
    assert str(m) == "s^2 - 8"
    assert str(minimal_polynomial(I, "x")) == "s^2 - 2"


def test_generic_rank():
    p_y = minimal_primes(Ideal(R2, ("y",)))[0]
    p_x = minimal_primes(Ideal(R2, ("x",)))[0]
    M = FPModule(R2, 2, [FreeModuleElement(R2, (R2.parse("x"), R2.zero))])
    assert generic_rank(FPModule.free(R2, 2), p_y) == 2
    assert generic_rank(M, p_y) == 1
    assert generic_rank(M, p_x) == 2
    assert generic_rank(FPModule.cyclic(Ideal(R2, ("x",))), p_x) == 1


def prime_of(ring, *gens):
    primes = minimal_primes(Ideal(ring, gens))
    assert len(primes) == 1
    return primes[0]


def test_length_at_prime_curve_cases():
    R1 = PolynomialRing(QQ, ("x",))
    at_x = prime_of(R1, "x")
    assert length_at_prime(FPModule.cyclic(Ideal(R1, ("x",))), at_x) == 1
    assert length_at_prime(FPModule.cyclic(Ideal(R1, ("x^2",))), at_x) == 2
    assert length_at_prime(FPModule.cyclic(Ideal(R1, ("x^5",))), at_x) == 5


def test_length_at_prime_with_residue_extension():
    # one point of degree 2: the local ring k[x]/(q^2) has length 2, not 4
    R1 = PolynomialRing(QQ, ("x",))
    q = prime_of(R1, "x^2 + 2")
    M = FPModule.cyclic(Ideal(R1, ("x^4 + 4*x^2 + 4",)))
    assert length_at_prime(M, q) == 2


def test_length_at_prime_embedded_direction():
    # (x^2, xy) localized at (x) is just (x); at the origin the length diverges
    M = FPModule.cyclic(Ideal(R2, ("x^2", "x*y")))
    at_x = prime_of(R2, "x")
    assert length_at_prime(M, at_x) == 1
    origin = prime_of(R2, "x", "y")
    with pytest.raises(HypothesisError):
        length_at_prime(M, origin, max_steps=8)


def test_length_at_prime_plane_point():
    origin = prime_of(R2, "x", "y")
    assert length_at_prime(FPModule.cyclic(Ideal(R2, ("x^3", "y"))), origin) == 3
    assert length_at_prime(FPModule.cyclic(Ideal(R2, ("x^2", "x*y", "y^2"))), origin) == 3
    M = FPModule(R2, 2, [FreeModuleElement(R2, (R2.parse("x"), R2.zero)),
                         FreeModuleElement(R2, (R2.zero, R2.parse("x^2"))),
                         FreeModuleElement(R2, (R2.parse("y"), R2.zero)),
                         FreeModuleElement(R2, (R2.zero, R2.parse("y")))])
    assert length_at_prime(M, origin) == 3


def test_length_at_prime_on_chart():
    # chart A = k[x, y]/(y): the module A/(x) has length 1 at the origin
    J = Ideal(R2, ("y",))
    origin = prime_of(R2, "x", "y")
    M = FPModule.cyclic(Ideal(R2, ("x",)))
    assert length_at_prime(M, origin, modulo=J) == 1


def test_length_at_generic_point_of_chart():
    zero = minimal_primes(Ideal(R2, ()))[0]
    assert length_at_prime(FPModule.free(R2, 3), zero) == 3


def test_tor_lengths_of_crossing_planes():
    # derived by hand: modulo the diagonal identification the union of the
    # two planes becomes (x^2, xy, y^2), of colength 3; the first torsion
    # term contributes 1.
    from chowcalc.homology import tor_modules
    R4 = PolynomialRing(QQ, ("x", "y", "z", "w"))
    I = intersect(Ideal(R4, ("x", "y")), Ideal(R4, ("z", "w")))
    K = Ideal(R4, ("x - z", "y - w"))
    assert vector_space_dimension(I + K) == 3  # independent check of the 3
    origin = prime_of(R4, "x", "y", "z", "w")
    tors = tor_modules(FPModule.cyclic(I), FPModule.cyclic(K), up_to=4)
    lengths = [length_at_prime(T, origin) if T.rank else 0 for T in tors]
    assert lengths == [3, 1, 0, 0, 0]
