"""Exact coefficient fields: the rationals and prime fields F_p.

Coefficients are plain Python values (fractions.Fraction for QQ, ints in
[0, p) for F_p); the field objects only bundle the arithmetic, so polynomial
code stays agnostic.  Field objects are immutable and compare by value.
"""

from fractions import Fraction

from .errors import EngineError


class RationalField:
    name = "QQ"
    characteristic = 0

    zero = Fraction(0)
    one = Fraction(1)

    def coerce(self, v):
        if isinstance(v, Fraction):
            return v
        if isinstance(v, int):
            return Fraction(v)
        raise EngineError(f"cannot coerce {v!r} into QQ")

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero in QQ")
        return a / b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverting zero in QQ")
        return 1 / Fraction(a)

    def fraction(self, num, den):
        if den == 0:
            raise EngineError("zero denominator in coefficient")
        return Fraction(num, den)

    def is_negative(self, a):
        return a < 0

    def abs(self, a):
        return -a if a < 0 else a

    def to_str(self, a):
        return str(a)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


def _is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class PrimeField:
    def __init__(self, p):
        if not _is_prime(p):
            raise EngineError(f"{p} is not prime")
        self.p = p
        self.name = f"Fp({p})"
        self.characteristic = p
        self.zero = 0
        self.one = 1 % p

    def coerce(self, v):
        if isinstance(v, int):
            return v % self.p
        if isinstance(v, Fraction):
            if v.denominator == 1:
                return v.numerator % self.p
            return self.div(v.numerator % self.p, v.denominator % self.p)
        raise EngineError(f"cannot coerce {v!r} into {self.name}")

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError(f"inverting zero in {self.name}")
        return pow(a, self.p - 2, self.p)

    def fraction(self, num, den):
        if den % self.p == 0:
            raise EngineError("zero denominator in coefficient")
        return self.div(num % self.p, den % self.p)

    def is_negative(self, a):
        # canonical representatives live in [0, p); nothing prints as negative
        return False

    def abs(self, a):
        return a

    def to_str(self, a):
        return str(a)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return self.name


QQ = RationalField()

_gf_cache = {}


def GF(p):
    if p not in _gf_cache:
        _gf_cache[p] = PrimeField(p)
    return _gf_cache[p]


def field_from_name(name):
    """Parse 'QQ' or 'Fp:7' / 'Fp(7)' into a field object."""
    text = name.strip()
    if text == "QQ":
        return QQ
    for prefix, suffix in (("Fp:", ""), ("Fp(", ")"), ("GF(", ")")):
        if text.startswith(prefix) and text.endswith(suffix) and len(text) > len(prefix) + len(suffix):
            body = text[len(prefix):len(text) - len(suffix)] if suffix else text[len(prefix):]
            if body.isdigit():
                return GF(int(body))
    raise EngineError(f"unknown field {name!r} (expected QQ or Fp:<p>)")
