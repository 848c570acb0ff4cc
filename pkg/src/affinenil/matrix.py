"""Immutable square matrices over exact rings (int, Fraction, UniPoly, ...)."""

from fractions import Fraction

from .rational import to_fraction


class Matrix:
    """Square matrix stored as a tuple of row tuples.

    Entries may be any ring elements supporting ``+``, ``-`` and ``*`` with
    ints; nothing here ever rounds.
    """

    __slots__ = ("rows",)

    def __init__(self, rows):
        rows = tuple(tuple(r) for r in rows)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("matrix must be square and non-empty")
        self.rows = rows

    @classmethod
    def identity(cls, n, one=1, zero=0):
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, n):
        return cls([[0] * n for _ in range(n)])

    @classmethod
    def parse(cls, data):
        """Build from nested lists of ints or "p/q" strings; integral entries become ints."""
        rows = []
        for row in data:
            out = []
            for x in row:
                q = to_fraction(x)
                out.append(int(q) if q.denominator == 1 else q)
            rows.append(out)
        return cls(rows)

    @property
    def dim(self):
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        return f"Matrix({[list(r) for r in self.rows]})"

    def tolist(self):
        return [list(r) for r in self.rows]

    def map(self, f):
        return Matrix([[f(x) for x in r] for r in self.rows])

    def transpose(self):
        return Matrix(list(zip(*self.rows)))

    def __add__(self, other):
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return self.map(lambda x: -x)

    def __mul__(self, c):
        if isinstance(c, Matrix):
            return self @ c
        return self.map(lambda x: x * c)

    def __rmul__(self, c):
        return self.map(lambda x: c * x)

    def __matmul__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            row = []
            for c in cols:
                acc = 0
                for a, b in zip(r, c):
                    if isinstance(a, int) and a == 0:
                        continue
                    acc = acc + a * b
                row.append(acc)
            out.append(row)
        return Matrix(out)

    def apply(self, vec):
        """Matrix-vector product."""
        out = []
        for r in self.rows:
            acc = 0
            for a, x in zip(r, vec):
                acc = acc + a * x
            out.append(acc)
        return tuple(out)

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = Matrix.identity(self.dim), self
        while e:
            if e & 1:
                result = result @ base
            e >>= 1
            if e:
                base = base @ base
        return result

    def is_zero(self):
        return all(x == 0 for r in self.rows for x in r)

    def is_identity(self):
        return self == Matrix.identity(self.dim)

    def trace(self):
        acc = 0
        for i in range(self.dim):
            acc = acc + self.rows[i][i]
        return acc

    def is_integral(self):
        return all(Fraction(x).denominator == 1 for r in self.rows for x in r)

    def det(self):
        """Exact determinant by fraction-free (Bareiss) elimination."""
        a = [list(r) for r in self.rows]
        n = self.dim
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                for i in range(k + 1, n):
                    if a[i][k] != 0:
                        a[k], a[i] = a[i], a[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    v = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                    a[i][j] = v // prev if isinstance(v, int) and isinstance(prev, int) else v / prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]

    def inverse(self):
        """Exact inverse over Q by Gauss-Jordan elimination."""
        n = self.dim
        a = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
             for i, r in enumerate(self.rows)]
        for col in range(n):
            piv = next((i for i in range(col, n) if a[i][col] != 0), None)
            if piv is None:
                raise ValueError("matrix is singular")
            a[col], a[piv] = a[piv], a[col]
            p = a[col][col]
            a[col] = [x / p for x in a[col]]
            for i in range(n):
                if i != col and a[i][col] != 0:
                    f = a[i][col]
                    a[i] = [x - f * y for x, y in zip(a[i], a[col])]
        return Matrix([[_demote(x) for x in r[n:]] for r in a])


def _demote(q):
    return int(q) if q.denominator == 1 else q
