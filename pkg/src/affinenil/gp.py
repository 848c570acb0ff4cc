"""Generalized-polynomial expressions in one integer variable ``n``.

A ``GPExpr`` is an immutable expression DAG over rational constants, ``n``,
sums, products, scalar multiples, ``floor`` and ``frac``.  There is no normal
form: two expressions are compared by exact evaluation, not by structure.
Subtrees may be shared; evaluation memoizes per call so shared work is done
once.
"""

from fractions import Fraction
from math import floor as _floor

from .rational import fmt, to_fraction

_OPS = ("const", "n", "add", "mul", "scale", "floor", "frac")


class GPExpr:
    __slots__ = ("op", "args", "value", "__weakref__")

    def __init__(self, op, args=(), value=None):
        if op not in _OPS:
            raise ValueError(f"unknown GP node {op!r}")
        self.op = op
        self.args = tuple(args)
        self.value = value

    # -- construction -------------------------------------------------
    def is_const(self):
        return self.op == "const"

    def __add__(self, other):
        return gp_add(self, _lift(other))

    def __radd__(self, other):
        return gp_add(_lift(other), self)

    def __neg__(self):
        return gp_scale(-1, self)

    def __sub__(self, other):
        return gp_add(self, gp_scale(-1, _lift(other)))

    def __rsub__(self, other):
        return gp_add(_lift(other), gp_scale(-1, self))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return gp_scale(other, self)
        return gp_mul(self, _lift(other))

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return gp_scale(other, self)
        return gp_mul(_lift(other), self)

    def __repr__(self):
        return f"GPExpr({self})"

    def __str__(self):
        if self.op == "const":
            return fmt(self.value)
        if self.op == "n":
            return "n"
        if self.op == "add":
            return "(" + " + ".join(str(a) for a in self.args) + ")"
        if self.op == "mul":
            return "*".join(str(a) for a in self.args)
        if self.op == "scale":
            return f"{fmt(self.value)}*{self.args[0]}"
        return f"{self.op}({self.args[0]})"

    # -- evaluation ---------------------------------------------------
    def evaluate(self, n, memo=None):
        """Exact value at integer ``n``; pass a shared ``memo`` dict to reuse
        work across several expressions evaluated at the same ``n``."""
        if memo is None:
            memo = {}
        key = id(self)
        hit = memo.get(key)
        if hit is not None:
            return hit
        op = self.op
        if op == "const":
            v = self.value
        elif op == "n":
            v = Fraction(n)
        elif op == "add":
            v = sum((a.evaluate(n, memo) for a in self.args), Fraction(0))
        elif op == "mul":
            v = Fraction(1)
            for a in self.args:
                v *= a.evaluate(n, memo)
        elif op == "scale":
            v = self.value * self.args[0].evaluate(n, memo)
        else:
            x = self.args[0].evaluate(n, memo)
            v = Fraction(_floor(x)) if op == "floor" else x - _floor(x)
        memo[key] = v
        return v

    __call__ = evaluate

    # -- serialization ------------------------------------------------
    def to_json(self):
        if self.op == "const":
            return {"const": fmt(self.value)}
        if self.op == "n":
            return {"var": "n"}
        if self.op in ("add", "mul"):
            return {self.op: [a.to_json() for a in self.args]}
        if self.op == "scale":
            return {"scale": {"by": fmt(self.value), "expr": self.args[0].to_json()}}
        return {self.op: self.args[0].to_json()}

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, dict) or len(data) != 1:
            raise ValueError(f"malformed GP node: {data!r}")
        (op, body), = data.items()
        if op == "const":
            return gp_const(to_fraction(body))
        if op == "var":
            if body != "n":
                raise ValueError(f"unknown variable {body!r}")
            return N
        if op in ("add", "mul"):
            return GPExpr(op, [cls.from_json(b) for b in body])
        if op == "scale":
            return GPExpr("scale", [cls.from_json(body["expr"])], to_fraction(body["by"]))
        if op in ("floor", "frac"):
            return GPExpr(op, [cls.from_json(body)])
        raise ValueError(f"unknown GP node {op!r}")


def _lift(x):
    if isinstance(x, GPExpr):
        return x
    if isinstance(x, (int, Fraction)):
        return gp_const(x)
    raise TypeError(f"cannot use {type(x).__name__} in a GP expression")


def gp_const(c):
    return GPExpr("const", (), Fraction(c))


N = GPExpr("n")
ZERO = gp_const(0)


def gp_add(a, b):
    if a.is_const() and b.is_const():
        return gp_const(a.value + b.value)
    if a.is_const() and a.value == 0:
        return b
    if b.is_const() and b.value == 0:
        return a
    args = (a.args if a.op == "add" else (a,)) + (b.args if b.op == "add" else (b,))
    return GPExpr("add", args)


def gp_mul(a, b):
    if a.is_const():
        return gp_scale(a.value, b)
    if b.is_const():
        return gp_scale(b.value, a)
    return GPExpr("mul", (a, b))


def gp_scale(c, e):
    c = Fraction(c)
    if c == 0:
        return ZERO
    if e.is_const():
        return gp_const(c * e.value)
    if c == 1:
        return e
    if e.op == "scale":
        return gp_scale(c * e.value, e.args[0])
    return GPExpr("scale", (e,), c)


def gp_floor(e):
    e = _lift(e)
    if e.is_const():
        return gp_const(_floor(e.value))
    return GPExpr("floor", (e,))


def gp_frac(e):
    e = _lift(e)
    if e.is_const():
        return gp_const(e.value - _floor(e.value))
    return GPExpr("frac", (e,))


_POWERS = [None, N]


def n_power(d):
    """Shared node for n^d (d >= 1)."""
    while len(_POWERS) <= d:
        _POWERS.append(GPExpr("mul", (_POWERS[-1], N)))
    return _POWERS[d]


def from_unipoly(p):
    """Sum of scaled powers of n."""
    out = ZERO
    for i, c in enumerate(p.coeffs):
        if c == 0:
            continue
        out = gp_add(out, gp_const(c) if i == 0 else gp_scale(c, n_power(i)))
    return out


def gp_degree(e, memo=None):
    """Upper bound on the GP degree.

    const -> 0, n -> 1, sum -> max, product -> sum, scalar multiple, floor
    and frac keep the degree of their argument.
    """
    if memo is None:
        memo = {}
    key = id(e)
    if key in memo:
        return memo[key]
    if e.op == "const":
        d = 0
    elif e.op == "n":
        d = 1
    elif e.op == "add":
        d = max(gp_degree(a, memo) for a in e.args)
    elif e.op == "mul":
        d = sum(gp_degree(a, memo) for a in e.args)
    else:
        d = gp_degree(e.args[0], memo)
    memo[key] = d
    return d


def gp_split(v):
    """(frac(v), floor(v)) as GP nodes sharing the argument ``v``."""
    v = _lift(v)
    return gp_frac(v), gp_floor(v)
