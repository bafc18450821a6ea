"""Exact scalar arithmetic: rationals, prime fields, truncated t-series."""

from __future__ import annotations

from fractions import Fraction


class GerstError(Exception):
    pass


class FpElement:
    """Residue mod a prime, with field arithmetic."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _lift(self, other):
        if isinstance(other, FpElement):
            if other.p != self.p:
                raise GerstError("mixed primes %d and %d" % (self.p, other.p))
            return other
        if isinstance(other, int):
            return FpElement(other, self.p)
        if isinstance(other, Fraction):
            return FpElement(other.numerator, self.p) / FpElement(other.denominator, self.p)
        return None

    def __add__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else FpElement(self.v + o.v, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else FpElement(self.v - o.v, self.p)

    def __rsub__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else FpElement(o.v - self.v, self.p)

    def __mul__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else FpElement(self.v * o.v, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if o.v == 0:
            raise ZeroDivisionError("division by zero in F_%d" % self.p)
        return FpElement(self.v * pow(o.v, self.p - 2, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._lift(other)
        return NotImplemented if o is None else o / self

    def __neg__(self):
        return FpElement(-self.v, self.p)

    def __eq__(self, other):
        if isinstance(other, int):
            return self.v == other % self.p
        o = self._lift(other)
        return NotImplemented if o is None else self.v == o.v

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return "%d (mod %d)" % (self.v, self.p)


class RationalField:
    """Arbitrary-precision rationals."""

    name = "Q"
    char = 0

    def __init__(self):
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def of(self, n):
        if isinstance(n, Fraction):
            return n
        if isinstance(n, str):
            return Fraction(n)
        return Fraction(n)

    def fmt(self, x) -> str:
        return str(x)

    def __repr__(self):
        return "QQ"


class PrimeField:
    name_prefix = "Fp"

    def __init__(self, p: int):
        if p < 2 or any(p % q == 0 for q in range(2, int(p ** 0.5) + 1)):
            raise GerstError("%d is not prime" % p)
        self.p = p
        self.char = p
        self.name = "Fp:%d" % p
        self.zero = FpElement(0, p)
        self.one = FpElement(1, p)

    def of(self, n):
        if isinstance(n, FpElement):
            if n.p != self.p:
                raise GerstError("mixed primes")
            return n
        if isinstance(n, str):
            if "/" in n:
                num, den = n.split("/")
                return FpElement(int(num), self.p) / FpElement(int(den), self.p)
            return FpElement(int(n), self.p)
        if isinstance(n, Fraction):
            return FpElement(n.numerator, self.p) / FpElement(n.denominator, self.p)
        return FpElement(int(n), self.p)

    def fmt(self, x) -> str:
        return str(x.v)

    def __repr__(self):
        return "GF(%d)" % self.p


QQ = RationalField()

_prime_fields: dict[int, PrimeField] = {}


def GF(p: int) -> PrimeField:
    if p not in _prime_fields:
        _prime_fields[p] = PrimeField(p)
    return _prime_fields[p]


def field_by_name(name: str):
    """Parse "Q" or "Fp:<p>" as used in config files and on the CLI."""
    if name == "Q":
        return QQ
    if name.startswith("Fp:"):
        return GF(int(name.split(":")[1]))
    raise GerstError("unknown field %r (expected Q or Fp:<p>)" % name)


class ArtinSeries:
    """Element of k[t]/(t^N): coefficient array indexed by power of t."""

    __slots__ = ("field", "N", "coeffs")

    def __init__(self, field, N: int, coeffs=None):
        self.field = field
        self.N = N
        if coeffs is None:
            coeffs = [field.zero] * N
        else:
            coeffs = list(coeffs) + [field.zero] * (N - len(coeffs))
        self.coeffs = coeffs[:N]

    def _check(self, other):
        if self.N != other.N:
            raise GerstError("mixed truncation orders")
        return other

    def __add__(self, other):
        o = self._check(other)
        return ArtinSeries(self.field, self.N, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    def __sub__(self, other):
        o = self._check(other)
        return ArtinSeries(self.field, self.N, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __neg__(self):
        return ArtinSeries(self.field, self.N, [-a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, ArtinSeries):
            o = self._check(other)
            out = [self.field.zero] * self.N
            for i, a in enumerate(self.coeffs):
                if a == self.field.zero:
                    continue
                for j in range(self.N - i):
                    b = o.coeffs[j]
                    if b != self.field.zero:
                        out[i + j] = out[i + j] + a * b
            return ArtinSeries(self.field, self.N, out)
        c = self.field.of(other)
        return ArtinSeries(self.field, self.N, [a * c for a in self.coeffs])

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, int):
            other = ArtinSeries(self.field, self.N, [self.field.of(other)])
        return self.N == other.N and all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash(tuple(self.field.fmt(c) for c in self.coeffs))

    def is_zero(self) -> bool:
        return all(c == self.field.zero for c in self.coeffs)

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c != self.field.zero:
                terms.append("%s*t^%d" % (self.field.fmt(c), i))
        return " + ".join(terms) if terms else "0"
