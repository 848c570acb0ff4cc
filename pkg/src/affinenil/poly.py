"""Univariate polynomials over the rationals.

A ``UniPoly`` is an immutable tuple of Fraction coefficients, constant term
first, with trailing zeros stripped.  Arithmetic mixes freely with ``int`` and
``Fraction``; calling a polynomial on another polynomial composes them.
"""

from fractions import Fraction
from functools import reduce
from math import factorial, lcm


class UniPoly:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def const(cls, c):
        return cls((c,))

    @classmethod
    def var(cls):
        return cls((0, 1))

    @property
    def degree(self):
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_constant(self):
        return len(self.coeffs) <= 1

    def constant_term(self):
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def leading(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == UniPoly.const(other).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"UniPoly({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("n" if i == 1 else f"n^{i}")
            if mono and c == 1:
                parts.append(mono)
            elif mono and c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}{'*' if mono else ''}{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    @staticmethod
    def _coerce(other):
        if isinstance(other, UniPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return UniPoly.const(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        return UniPoly([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return UniPoly([c * other for c in self.coeffs])
        if not isinstance(other, UniPoly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative power")
        result, base = UniPoly.const(1), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __call__(self, x):
        """Horner evaluation; ``x`` may be a number or any ring element."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def shift(self, h):
        """The polynomial n -> p(n + h)."""
        out = self(UniPoly((h, 1)))
        return out if isinstance(out, UniPoly) else UniPoly.const(out)

    def reflect(self):
        """The polynomial n -> p(-n)."""
        return UniPoly([c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs)])

    def derivative(self):
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def divmod(self, other):
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        lead = other.coeffs[-1]
        for shift in range(len(q) - 1, -1, -1):
            c = rem[shift + len(other.coeffs) - 1] / lead
            q[shift] = c
            if c:
                for i, oc in enumerate(other.coeffs):
                    rem[shift + i] -= c * oc
        return UniPoly(q), UniPoly(rem)

    def monic(self):
        return self * (1 / self.leading()) if self else self

    def integer_form(self):
        """Return (ints, den) with self == poly(ints) / den, den > 0 minimal."""
        den = reduce(lcm, (c.denominator for c in self.coeffs), 1)
        return tuple(int(c * den) for c in self.coeffs), den

    def is_integral(self):
        return all(c.denominator == 1 for c in self.coeffs)


def poly_gcd(a, b):
    """Monic gcd over Q (Euclid)."""
    while b:
        a, b = b, a.divmod(b)[1]
    return a.monic()


def squarefree_decomposition(p):
    """Yun's algorithm: list of (factor, multiplicity) with squarefree monic factors.

    ``p`` must be nonconstant; the product of factor**mult equals p.monic().
    """
    p = p.monic()
    out = []
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p.divmod(a)[0]
    c = dp.divmod(a)[0]
    d = c - b.derivative()
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, d)
        if a.degree > 0:
            out.append((a, i))
        b = b.divmod(a)[0]
        c = d.divmod(a)[0]
        d = c - b.derivative()
        i += 1
    return out


def binomial_poly(k):
    """binom(n, k) = n(n-1)...(n-k+1)/k! as a polynomial in n."""
    p = UniPoly.const(1)
    for i in range(k):
        p = p * UniPoly((-i, 1))
    return p * Fraction(1, factorial(k))


def faulhaber_sum(p):
    """Closed form q with q(n) = sum_{j=0}^{n-1} p(j) for every integer n >= 0.

    Works in the binomial basis: p(j) = sum_k c_k binom(j, k) with c_k the
    k-th forward difference of p at 0, and sum_{j<n} binom(j, k) = binom(n, k+1).
    """
    if not isinstance(p, UniPoly):
        return p.summed()
    if not p:
        return UniPoly()
    values = [p(j) for j in range(p.degree + 1)]
    q = UniPoly()
    k = 0
    while values:
        if values[0]:
            q = q + binomial_poly(k + 1) * values[0]
        values = [b - a for a, b in zip(values, values[1:])]
        k += 1
    return q


class DegreeBound:
    """Stand-in for a polynomial of unknown coefficients: tracks only an upper
    bound on its degree.  Running the symbolic engines on these (with the
    base point replaced by degree-0 unknowns) yields degree bounds that cannot
    depend on the base point.
    """

    __slots__ = ("deg",)

    def __init__(self, deg=0):
        self.deg = max(int(deg), 0)

    @staticmethod
    def of(x):
        if isinstance(x, DegreeBound):
            return x
        if isinstance(x, UniPoly):
            return DegreeBound(x.degree)
        return DegreeBound(0)

    def __repr__(self):
        return f"DegreeBound({self.deg})"

    def __add__(self, other):
        return DegreeBound(max(self.deg, DegreeBound.of(other).deg))

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, other):
        return DegreeBound(self.deg + DegreeBound.of(other).deg)

    __rmul__ = __mul__

    def summed(self):
        return DegreeBound(self.deg + 1)
