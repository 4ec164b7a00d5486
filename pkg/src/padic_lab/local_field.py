"""Exact truncated arithmetic in F = Q_p and a quadratic extension E of F.

Scalars carry an exact valuation and a residue-tower digit expansion of the
unit part, together with an absolute precision measured in pi_E digits.  All
equality and membership tests performed by the library are exact at the
stated precision; a value whose tracked digits all vanish is a distinct
"zero to precision" state that remembers only its guaranteed vanishing depth.

Valuations are normalized so that val(pi_F) = 1 and val(pi_E) = 1/e.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

TRIVIAL = "trivial"
UNRAMIFIED = "unramified"
RAMIFIED = "ramified"

_KIND_ALIASES = {
    "trivial": TRIVIAL,
    "triv": TRIVIAL,
    "unramified": UNRAMIFIED,
    "unram": UNRAMIFIED,
    "ramified": RAMIFIED,
    "ram": RAMIFIED,
}


class PrecisionError(ArithmeticError):
    """The requested result cannot be resolved at the tracked precision.

    Deliberately distinct from ValueError: callers can tell "this input is
    outside the domain" apart from "the digits ran out".
    """


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _vp(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def smallest_nonresidue(p: int) -> int:
    """Smallest quadratic non-residue modulo an odd prime p."""
    for u in range(2, p):
        if pow(u, (p - 1) // 2, p) == p - 1:
            return u
    raise ValueError(f"no quadratic non-residue mod {p}")


@dataclass(frozen=True)
class LocalField:
    """Descriptor of F = Q_p together with E (trivial, unramified or ramified).

    The ramified extension is fixed as E = F(sqrt(p)) and the unramified one
    as E = F(sqrt(u)) for the smallest non-residue u, so that all results are
    reproducible.  precision_k counts pi_E digits of absolute precision.
    """

    p: int
    kind: str
    precision_k: int
    e: int
    q: int
    nonresidue: int | None

    def __post_init__(self):
        object.__setattr__(self, "_pp_cache", {})

    # -- structure ---------------------------------------------------------

    def _pp(self, k: int) -> int:
        cache = self._pp_cache
        v = cache.get(k)
        if v is None:
            v = self.p**k
            cache[k] = v
        return v

    def _gen_square(self) -> int:
        # gen^2 as an integer: u for sqrt(u), p for sqrt(p)
        return self.nonresidue if self.kind == UNRAMIFIED else self.p

    def _caps(self, rel: int) -> tuple[int, int]:
        """Storage moduli exponents (for a, b) of a unit known to rel digits."""
        if rel <= 0:
            return 0, 0
        if self.kind == TRIVIAL:
            return rel, 0
        if self.kind == UNRAMIFIED:
            return rel, rel
        return (rel + 1) // 2, rel // 2

    # -- constructors --------------------------------------------------------

    def zero(self, prec: int | None = None) -> "PadicScalar":
        return PadicScalar(self, None, 0, 0, self.precision_k if prec is None else prec)

    def one(self) -> "PadicScalar":
        return self.scalar(1)

    def scalar(self, value) -> "PadicScalar":
        """Embed an int or Fraction of F into E, truncated to precision_k."""
        if isinstance(value, PadicScalar):
            if value.field is not self and value.field != self:
                raise ValueError("scalar belongs to a different field")
            return value
        frac = Fraction(value)
        if frac == 0:
            return self.zero()
        num, den = frac.numerator, frac.denominator
        vnum = _vp(num, self.p)
        vden = _vp(den, self.p)
        vdig = self.e * (vnum - vden)
        rel = self.precision_k
        adig, _ = self._caps(rel)
        mod = self._pp(adig)
        un = (num // self._pp(vnum)) % mod
        ud = (den // self._pp(vden)) % mod
        a = (un * pow(ud, -1, mod)) % mod
        return PadicScalar(self, vdig, a, 0, vdig + rel)

    def adjoin(self, a_part, b_part) -> "PadicScalar":
        """The element a + b*gen of E, for rational a and b."""
        return self.scalar(a_part) + self.scalar(b_part) * self.gen()

    def gen(self) -> "PadicScalar":
        """The chosen square root generating E over F (sqrt(u) or sqrt(p))."""
        if self.kind == TRIVIAL:
            raise ValueError("trivial extension has no generator")
        rel = self.precision_k
        if self.kind == UNRAMIFIED:
            return PadicScalar(self, 0, 0, 1, rel)
        return PadicScalar(self, 1, 1, 0, 1 + rel)

    def pi_E(self) -> "PadicScalar":
        """Uniformizer of E; equals pi_F when e = 1."""
        if self.kind == RAMIFIED:
            return self.gen()
        return self.scalar(self.p)

    def pi_F(self) -> "PadicScalar":
        return self.scalar(self.p)

    # -- sampling ------------------------------------------------------------

    def random_integral(self, rng, min_digits: int = 0) -> "PadicScalar":
        """Uniform sample from pi_E^min_digits * O_E at working precision."""
        rel = self.precision_k
        adig, bdig = self._caps(rel)
        a = rng.randrange(self._pp(adig))
        b = rng.randrange(self._pp(bdig)) if bdig else 0
        return _normalize(self, min_digits, a, b, min_digits + rel)

    def random_unit(self, rng) -> "PadicScalar":
        while True:
            s = self.random_integral(rng)
            if not s.is_zero() and s.vdig == 0:
                return s

    def __repr__(self):
        return f"LocalField(p={self.p}, kind={self.kind!r}, precision_k={self.precision_k})"


def make_field(p: int, kind: str, precision_k=12) -> LocalField:
    """Build a field descriptor; rejects p = 2 and non-primes."""
    kind_l = str(kind).lower()
    if kind_l not in _KIND_ALIASES:
        raise ValueError(f"unknown extension kind {kind!r}")
    kind_c = _KIND_ALIASES[kind_l]
    if not isinstance(p, int) or not _is_prime(p):
        raise ValueError(f"p must be prime, got {p!r}")
    if p == 2:
        raise ValueError("p = 2 is excluded")
    prec = Fraction(precision_k)
    if prec < 1:
        raise ValueError("precision_k must be >= 1")
    e = 2 if kind_c == RAMIFIED else 1
    if prec.denominator == 1:
        k_digits = int(prec)
    elif prec.denominator == e:
        # precision stated in val units with denominator e
        k_digits = int(prec * e)
    else:
        raise ValueError(f"precision_k must have denominator dividing {e}")
    u = smallest_nonresidue(p) if kind_c == UNRAMIFIED else None
    q = p * p if kind_c == UNRAMIFIED else p
    return LocalField(p=p, kind=kind_c, precision_k=k_digits, e=e, q=q, nonresidue=u)


def _unit_shift(field: LocalField, a: int, b: int, d: int) -> tuple[int, int]:
    """Coordinates of pi_E^d * (a + b*gen) for d >= 0."""
    if d == 0:
        return a, b
    p = field.p
    if field.kind != RAMIFIED:
        m = field._pp(d)
        return a * m, b * m
    if d % 2 == 0:
        m = field._pp(d // 2)
        return a * m, b * m
    m = field._pp((d - 1) // 2)
    # pi * (a + b*pi) = p*b + a*pi
    return b * m * p, a * m


def _leading_digit_index(field: LocalField, a: int, b: int, rel: int) -> int | None:
    """Index of the first nonzero pi_E-digit of a + b*gen, or None below rel."""
    p = field.p
    if field.kind == TRIVIAL:
        if a == 0:
            return None
        v = _vp(a, p)
        return v if v < rel else None
    if field.kind == UNRAMIFIED:
        if a == 0 and b == 0:
            return None
        v = min(_vp(a, p) if a else rel, _vp(b, p) if b else rel)
        return v if v < rel else None
    # ramified: even digits sit in a, odd digits in b
    va = 2 * _vp(a, p) if a else rel
    vb = 2 * _vp(b, p) + 1 if b else rel
    v = min(va, vb)
    return v if v < rel else None


def _normalize(field: LocalField, vbase: int, a: int, b: int, prec: int) -> "PadicScalar":
    """Canonical scalar for pi_E^vbase * (a + b*gen) known modulo pi_E^prec."""
    rel = prec - vbase
    if rel <= 0:
        return PadicScalar(field, None, 0, 0, prec)
    adig, bdig = field._caps(rel)
    a %= field._pp(adig)
    b = b % field._pp(bdig) if bdig else 0
    j = _leading_digit_index(field, a, b, rel)
    if j is None:
        return PadicScalar(field, None, 0, 0, prec)
    if j:
        p = field.p
        if field.kind != RAMIFIED:
            a //= field._pp(j)
            b //= field._pp(j)
        elif j % 2 == 0:
            m = field._pp(j // 2)
            a //= m
            b //= m
        else:
            m = field._pp((j - 1) // 2)
            a1, b1 = a // m, b // m
            a, b = b1, a1 // p
        vbase += j
        adig, bdig = field._caps(prec - vbase)
        a %= field._pp(adig)
        b = b % field._pp(bdig) if bdig else 0
    return PadicScalar(field, vbase, a, b, prec)


class PadicScalar:
    """Element of E tracked to finite precision.

    Either a normalized value pi_E^vdig * (a + b*gen) with a nonzero leading
    digit, or zero-to-precision (vdig is None) with guaranteed vanishing depth
    prec.  Instances are immutable and safe to share.
    """

    __slots__ = ("field", "vdig", "a", "b", "prec")

    def __init__(self, field: LocalField, vdig: int | None, a: int, b: int, prec: int):
        self.field = field
        self.vdig = vdig
        self.a = a
        self.b = b
        self.prec = prec

    # -- state ---------------------------------------------------------------

    def is_zero(self) -> bool:
        """True when the value vanishes to its tracked precision."""
        return self.vdig is None

    def valuation(self) -> Fraction | None:
        """Exact valuation (val(pi_F) = 1), or None for zero-to-precision."""
        if self.vdig is None:
            return None
        return Fraction(self.vdig, self.field.e)

    def val_lower_bound(self) -> Fraction:
        """Certified lower bound on the valuation (prec/e for zeros)."""
        d = self.prec if self.vdig is None else self.vdig
        return Fraction(d, self.field.e)

    def rel_digits(self) -> int:
        return self.prec - (self.vdig or 0)

    # -- digit access ----------------------------------------------------------

    def digit(self, j: int):
        """The j-th pi_E-digit (absolute index); pairs over F_{p^2} if unramified.

        Raises PrecisionError beyond the tracked precision.
        """
        if j >= self.prec:
            raise PrecisionError(f"digit {j} beyond precision {self.prec}")
        f = self.field
        if self.vdig is None or j < self.vdig:
            return (0, 0) if f.kind == UNRAMIFIED else 0
        i = j - self.vdig
        p = f.p
        if f.kind == TRIVIAL:
            return (self.a // f._pp(i)) % p
        if f.kind == UNRAMIFIED:
            return ((self.a // f._pp(i)) % p, (self.b // f._pp(i)) % p)
        if i % 2 == 0:
            return (self.a // f._pp(i // 2)) % p
        return (self.b // f._pp((i - 1) // 2)) % p

    def digits(self, start: int = 0, count: int | None = None) -> list:
        if count is None:
            count = self.prec - start
        return [self.digit(j) for j in range(start, start + count)]

    def key_at(self, prec: int):
        """Canonical comparison key for exact equality tests modulo pi_E^prec."""
        if prec > self.prec:
            raise PrecisionError("comparison beyond tracked precision")
        if self.vdig is None or self.vdig >= prec:
            return ("zero",)
        return (self.vdig, tuple(self.digit(j) for j in range(self.vdig, prec)))

    # -- arithmetic -------------------------------------------------------------

    def _coerce(self, other) -> "PadicScalar":
        if isinstance(other, PadicScalar):
            if other.field is not self.field and other.field != self.field:
                raise ValueError("operands belong to different fields")
            return other
        return self.field.scalar(other)

    def __add__(self, other):
        o = self._coerce(other)
        f = self.field
        prec = min(self.prec, o.prec)
        if self.vdig is None and o.vdig is None:
            return f.zero(prec)
        if self.vdig is None:
            return o.truncate(prec)
        if o.vdig is None:
            return self.truncate(prec)
        v = min(self.vdig, o.vdig)
        a1, b1 = _unit_shift(f, self.a, self.b, self.vdig - v)
        a2, b2 = _unit_shift(f, o.a, o.b, o.vdig - v)
        return _normalize(f, v, a1 + a2, b1 + b2, prec)

    __radd__ = __add__

    def __neg__(self):
        if self.vdig is None:
            return self
        return _normalize(self.field, self.vdig, -self.a, -self.b, self.prec)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        f = self.field
        if self.vdig is None or o.vdig is None:
            if self.vdig is None and o.vdig is None:
                return f.zero(self.prec + o.prec)
            z, nz = (self, o) if self.vdig is None else (o, self)
            return f.zero(z.prec + nz.vdig)
        v = self.vdig + o.vdig
        prec = min(self.prec + o.vdig, o.prec + self.vdig)
        g2 = f._gen_square()
        a = self.a * o.a + self.b * o.b * g2
        b = self.a * o.b + self.b * o.a
        return _normalize(f, v, a, b, prec)

    __rmul__ = __mul__

    def inv(self) -> "PadicScalar":
        """Multiplicative inverse; PrecisionError on zero-to-precision input."""
        if self.vdig is None:
            raise PrecisionError("cannot invert a value that is zero to precision")
        f = self.field
        rel = self.prec - self.vdig
        adig, bdig = f._caps(rel)
        mod = f._pp(adig)
        norm = (self.a * self.a - self.b * self.b * f._gen_square()) % mod
        ninv = pow(norm, -1, mod)
        a = (self.a * ninv) % mod
        b = (-self.b * ninv) % (f._pp(bdig) if bdig else 1) if bdig else 0
        return _normalize(f, -self.vdig, a, b, self.prec - 2 * self.vdig)

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        out = self.field.scalar(1)
        for _ in range(n):
            out = out * self
        return out

    def __truediv__(self, other):
        return self * self._coerce(other).inv()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inv()

    def conj(self) -> "PadicScalar":
        """Galois conjugation of E/F; the identity map when E = F."""
        f = self.field
        if f.kind == TRIVIAL or self.vdig is None:
            return self
        a, b = self.a, -self.b
        if f.kind == RAMIFIED and self.vdig % 2:
            a, b = -a, -b
        return _normalize(f, self.vdig, a, b, self.prec)

    def truncate(self, prec: int) -> "PadicScalar":
        """Forget digits at or beyond pi_E^prec."""
        if prec >= self.prec:
            return self
        f = self.field
        if self.vdig is None or self.vdig >= prec:
            return f.zero(prec)
        return _normalize(f, self.vdig, self.a, self.b, prec)

    # -- comparisons --------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, (PadicScalar, int, Fraction)):
            return NotImplemented
        return (self - other).is_zero()

    def __ne__(self, other):
        eq = self.__eq__(other)
        return NotImplemented if eq is NotImplemented else not eq

    __hash__ = None

    def __repr__(self):
        f = self.field
        pi = "p" if f.e == 1 else "pi"
        if self.vdig is None:
            return f"O({pi}^{self.prec})"
        ds = self.digits(self.vdig, min(4, self.prec - self.vdig))
        tail = "..." if self.prec - self.vdig > 4 else ""
        return f"{pi}^{self.vdig}*({ds}{tail}) + O({pi}^{self.prec})"

    # -- serialization ---------------------------------------------------------------

    def to_json(self) -> dict:
        val = self.valuation()
        return {
            "val": None if val is None else [val.numerator, val.denominator],
            "prec": [self.prec, self.field.e],
            "digits": [] if self.vdig is None else self.digits(self.vdig),
        }
