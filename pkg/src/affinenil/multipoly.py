"""Sparse multivariate polynomials with rational coefficients.

Variables are arbitrary sortable hashables (the nilpotent-group code uses
``(copy, level, position)`` integer triples).  A monomial is a sorted tuple of
``(variable, exponent)`` pairs; the empty tuple is the constant monomial.
Zero coefficients are never stored, so equality is normal-form equality.
"""

from fractions import Fraction


def _mono_mul(a, b):
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


class MultiPoly:
    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c != 0:
                clean[mono] = c
        self.terms = clean

    @classmethod
    def const(cls, c):
        return cls({(): c})

    @classmethod
    def var(cls, v):
        return cls({((v, 1),): 1})

    @classmethod
    def _raw(cls, terms):
        obj = cls.__new__(cls)
        obj.terms = terms
        return obj

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == MultiPoly.const(other).terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms, key=lambda m: (sum(e for _, e in m), m)):
            c = self.terms[mono]
            body = "*".join(_var_str(v) + (f"^{e}" if e > 1 else "") for v, e in mono)
            if not body:
                parts.append(str(c))
            elif c == 1:
                parts.append(body)
            elif c == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{c}*{body}")
        return " + ".join(parts).replace("+ -", "- ")

    @staticmethod
    def _coerce(other):
        if isinstance(other, MultiPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return MultiPoly.const(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for mono, c in o.terms.items():
            v = out.get(mono, 0) + c
            if v:
                out[mono] = v
            else:
                out.pop(mono, None)
        return MultiPoly._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw({m: -c for m, c in self.terms.items()})

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
            if other == 0:
                return MultiPoly()
            return MultiPoly._raw({m: c * other for m, c in self.terms.items()})
        if not isinstance(other, MultiPoly):
            return NotImplemented
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return MultiPoly._raw(out)

    __rmul__ = __mul__

    def __pow__(self, e):
        result = MultiPoly.const(1)
        for _ in range(e):
            result = result * self
        return result

    def variables(self):
        return sorted({v for m in self.terms for v, _ in m})

    def total_degree(self):
        return max((sum(e for _, e in m) for m in self.terms), default=0)

    def constant_term(self):
        return self.terms.get((), Fraction(0))

    def coefficient(self, mono):
        return self.terms.get(tuple(sorted(mono)), Fraction(0))

    def homogeneous_part(self, degree):
        return MultiPoly._raw({m: c for m, c in self.terms.items()
                               if sum(e for _, e in m) == degree})

    def weighted_degree(self, weight):
        """max over monomials of sum weight(v) * exponent; 0 for constants and zero."""
        return max((sum(weight(v) * e for v, e in m) for m in self.terms), default=0)

    def evaluate(self, values):
        """Substitute ``values[v]`` for each variable; values may be any ring elements.

        Variables missing from ``values`` are left symbolic.
        """
        acc = 0
        powers = {}
        for mono, c in self.terms.items():
            term = c
            for v, e in mono:
                if v in values:
                    key = (v, e)
                    if key not in powers:
                        x = values[v]
                        p = x
                        for _ in range(e - 1):
                            p = p * x
                        powers[key] = p
                    term = powers[key] * term
                else:
                    term = MultiPoly.var(v) ** e * term
            acc = acc + term
        return acc

    def rename(self, f):
        """Apply a variable renaming f."""
        out = {}
        for mono, c in self.terms.items():
            m = tuple(sorted((f(v), e) for v, e in mono))
            out[m] = out.get(m, 0) + c
        return MultiPoly(out)


def _var_str(v):
    if isinstance(v, tuple) and len(v) == 3:
        copy, i, j = v
        return f"{'xyzw'[copy] if copy < 4 else 'v' + str(copy)}[{i},{j}]"
    return str(v)
