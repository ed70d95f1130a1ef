"""Exact arithmetic in the field of Puiseux series with finitely many terms.

Elements are fractions ``num / den`` of Laurent polynomials in ``t`` with
rational exponents and Gaussian-rational coefficients.  Every element is kept
in lowest terms with ``den`` having lowest term ``1 * t^0``, so equal values
have equal representations.
"""
from __future__ import annotations

import itertools
import math
import numbers
import re
from fractions import Fraction

from .core import INF, BudgetExceeded, TropMatrix, format_scalar

MAX_DET_SIZE = 6
MAX_RANK_SIZE = 6


class GaussRat:
    """A Gaussian rational ``re + im*i`` with ``im != 0``.

    Real values are plain ``Fraction`` objects; arithmetic collapses back to
    ``Fraction`` whenever the imaginary part vanishes.
    """

    __slots__ = ("re", "im")

    def __init__(self, re, im):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __repr__(self):
        return f"GaussRat({self.re}, {self.im})"

    def __str__(self):
        return _format_coef(self)

    def __eq__(self, other):
        if isinstance(other, GaussRat):
            return self.re == other.re and self.im == other.im
        if isinstance(other, numbers.Rational):
            return False
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return True

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __add__(self, other):
        if isinstance(other, GaussRat):
            return gauss(self.re + other.re, self.im + other.im)
        if isinstance(other, numbers.Rational):
            return GaussRat(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, GaussRat):
            return gauss(self.re * other.re - self.im * other.im, self.re * other.im + self.im * other.re)
        if isinstance(other, numbers.Rational):
            return gauss(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def conjugate(self):
        return GaussRat(self.re, -self.im)

    def norm(self):
        return self.re * self.re + self.im * self.im

    def __truediv__(self, other):
        if isinstance(other, GaussRat):
            return (self * other.conjugate()) * (1 / other.norm())
        if isinstance(other, numbers.Rational):
            return gauss(self.re / other, self.im / other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, numbers.Rational):
            return self.conjugate() * (Fraction(other) / self.norm())
        return NotImplemented


def gauss(re, im=0):
    """The coefficient ``re + im*i`` as a ``Fraction`` when real, else a ``GaussRat``."""
    im = Fraction(im)
    if im == 0:
        return Fraction(re)
    return GaussRat(re, im)


def _coef(c):
    if isinstance(c, (Fraction, GaussRat)):
        return c
    if isinstance(c, bool):
        raise TypeError("booleans are not coefficients")
    if isinstance(c, numbers.Rational):
        return Fraction(c)
    if isinstance(c, complex) or isinstance(c, float):
        raise TypeError("floating-point coefficients are not exact; use Fraction or GaussRat")
    raise TypeError(f"cannot use {c!r} as a coefficient")


# --- polynomials ------------------------------------------------------------

class PuiseuxPoly:
    """Finite sum of terms ``c * t^e``; ``terms`` maps exponent to nonzero coefficient."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for e, c in dict(terms).items():
                c = _coef(c)
                if c != 0:
                    clean[Fraction(e)] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms):
        obj = cls.__new__(cls)
        obj.terms = terms
        obj._hash = None
        return obj

    @classmethod
    def monomial(cls, c=1, e=0):
        return cls({e: c})

    def is_zero(self):
        return not self.terms

    def is_monomial(self):
        return len(self.terms) == 1

    def degree(self):
        return min(self.terms) if self.terms else INF

    def top_exponent(self):
        return max(self.terms) if self.terms else -INF

    def leading(self):
        e = min(self.terms)
        return self.terms[e], e

    def __eq__(self, other):
        if not isinstance(other, PuiseuxPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __neg__(self):
        return PuiseuxPoly._raw({e: -c for e, c in self.terms.items()})

    def __add__(self, other):
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e)
            if s is None:
                out[e] = c
            else:
                s = s + c
                if s == 0:
                    del out[e]
                else:
                    out[e] = s
        return PuiseuxPoly._raw(out)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not self.terms or not other.terms:
            return ZERO_POLY
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = e1 + e2
                s = out.get(e)
                out[e] = c1 * c2 if s is None else s + c1 * c2
        return PuiseuxPoly._raw({e: c for e, c in out.items() if c != 0})

    def scale(self, c, e=0):
        """Multiply by the monomial ``c * t^e``."""
        c = _coef(c)
        if c == 0:
            return ZERO_POLY
        return PuiseuxPoly._raw({k + e: v * c for k, v in self.terms.items()})

    def divexact(self, other):
        """Exact quotient in the Laurent ring; raises ``ArithmeticError`` when not exact."""
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if other.is_monomial():
            (e, c), = other.terms.items()
            inv = 1 / c
            return PuiseuxPoly._raw({k - e: v * inv for k, v in self.terms.items()})
        lc, le = other.leading()
        inv = 1 / lc
        limit = self.top_exponent() - other.top_exponent()
        rem = self
        quot = {}
        while rem.terms:
            rc, re_ = rem.leading()
            e = re_ - le
            if e > limit:
                raise ArithmeticError("polynomial division is not exact")
            q = rc * inv
            quot[e] = q
            rem = rem - other.scale(q, e)
        return PuiseuxPoly._raw(quot)

    def exponent_denominator(self):
        d = 1
        for e in self.terms:
            d = d * e.denominator // math.gcd(d, e.denominator)
        return d

    def __repr__(self):
        return f"PuiseuxPoly({format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)


ZERO_POLY = PuiseuxPoly()
ONE_POLY = PuiseuxPoly({0: 1})


def _dense(p: PuiseuxPoly, shift, N):
    """Coefficient list of ``p * t^-shift`` in the variable ``t^(1/N)``."""
    top = int((p.top_exponent() - shift) * N)
    out = [0] * (top + 1)
    for e, c in p.terms.items():
        out[int((e - shift) * N)] = c
    return out


def _strip(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _dense_rem(a, b):
    a = a[:]
    inv = 1 / b[-1]
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        f = a[-1] * inv
        shift = len(a) - 1 - db
        for k, bk in enumerate(b):
            if bk != 0:
                a[shift + k] = a[shift + k] - f * bk
        a.pop()
        _strip(a)
    return a


def _dense_gcd(a, b):
    a, b = _strip(a[:]), _strip(b[:])
    while b:
        a, b = b, _dense_rem(a, b)
    inv = 1 / a[-1]
    return [c * inv for c in a]


def poly_gcd(p: PuiseuxPoly, q: PuiseuxPoly) -> PuiseuxPoly:
    """Monic gcd in the Laurent ring (normalized to lowest term ``1 * t^0``)."""
    if p.is_zero():
        return q
    if q.is_zero():
        return p
    N = p.exponent_denominator() * q.exponent_denominator()
    N //= math.gcd(p.exponent_denominator(), q.exponent_denominator())
    g = _dense_gcd(_dense(p, p.degree(), N), _dense(q, q.degree(), N))
    if len(g) == 1:
        return ONE_POLY
    out = PuiseuxPoly._raw({Fraction(k, N): c for k, c in enumerate(g) if c != 0})
    lc, le = out.leading()
    return out.scale(1 / lc, -le)


# --- field elements ---------------------------------------------------------

class KElement:
    """An element ``num / den`` of the Puiseux field, kept in lowest terms."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = _to_poly(num)
        den = ONE_POLY if den is None else _to_poly(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = ZERO_POLY, ONE_POLY
            return
        if not den.is_monomial() and not num.is_monomial():
            g = poly_gcd(num, den)
            if not g.is_monomial():
                num, den = num.divexact(g), den.divexact(g)
        lc, le = den.leading()
        if lc != 1 or le != 0:
            inv = 1 / lc
            num, den = num.scale(inv, -le), den.scale(inv, -le)
        self.num, self.den = num, den

    @classmethod
    def _raw(cls, num, den):
        obj = cls.__new__(cls)
        obj.num, obj.den = num, den
        return obj

    @classmethod
    def monomial(cls, c=1, e=0):
        return cls(PuiseuxPoly({e: c}))

    @classmethod
    def t(cls, e):
        return cls.monomial(1, e)

    def is_zero(self):
        return self.num.is_zero()

    def degree(self):
        """Exponent of the leading term; ``INF`` for zero."""
        if self.num.is_zero():
            return INF
        return self.num.degree() - self.den.degree()

    def leading_coefficient(self):
        if self.num.is_zero():
            return Fraction(0)
        return self.num.leading()[0] / self.den.leading()[0]

    def __eq__(self, other):
        if not isinstance(other, KElement):
            try:
                other = to_k(other)
            except TypeError:
                return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return not self.num.is_zero()

    def __neg__(self):
        return KElement._raw(-self.num, self.den)

    def __add__(self, other):
        other = _k_or_none(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return KElement(self.num + other.num, self.den)
        return KElement(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = _k_or_none(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _k_or_none(other)
        if other is None:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return K_ZERO
        return KElement(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("division by zero in K")
        return KElement(self.den, self.num)

    def __truediv__(self, other):
        other = _k_or_none(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return to_k(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = K_ONE
        for _ in range(k):
            out = out * self
        return out

    def __repr__(self):
        return f"KElement({format_k(self)!r})"

    def __str__(self):
        return format_k(self)


def _to_poly(x):
    if isinstance(x, PuiseuxPoly):
        return x
    return PuiseuxPoly({0: _coef(x)})


def to_k(x) -> KElement:
    if isinstance(x, KElement):
        return x
    if isinstance(x, PuiseuxPoly):
        return KElement(x)
    if isinstance(x, str):
        return parse_k(x)
    return KElement(_to_poly(x))


def _k_or_none(x):
    try:
        return to_k(x)
    except TypeError:
        return None


K_ZERO = KElement(ZERO_POLY)
K_ONE = KElement(ONE_POLY)


def t_pow(e, c=1) -> KElement:
    """The monomial ``c * t^e``."""
    return KElement.monomial(c, Fraction(e))


def degree(a) -> object:
    return to_k(a).degree()


def k_field_ops(a, b, op: str) -> KElement:
    a, b = to_k(a), to_k(b)
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op in ("*", "×"):
        return a * b
    if op in ("/", "÷"):
        return a / b
    raise ValueError(f"unknown operation {op!r}")


# --- matrices ---------------------------------------------------------------

class KMatrix:
    """Immutable rectangular matrix of :class:`KElement`."""

    __slots__ = ("_rows",)

    def __init__(self, entries):
        if isinstance(entries, KMatrix):
            self._rows = entries._rows
            return
        rows = tuple(tuple(to_k(x) for x in row) for row in entries)
        if not rows or not rows[0]:
            raise ValueError("a matrix needs at least one row and one column")
        if any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged matrix")
        self._rows = rows

    @property
    def rows(self):
        return len(self._rows)

    @property
    def cols(self):
        return len(self._rows[0])

    @property
    def shape(self):
        return (self.rows, self.cols)

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def row(self, i):
        return self._rows[i]

    def col(self, j):
        return tuple(r[j] for r in self._rows)

    def __iter__(self):
        return iter(self._rows)

    def __eq__(self, other):
        return isinstance(other, KMatrix) and self._rows == other._rows

    def __hash__(self):
        return hash(self._rows)

    def submatrix(self, rows=None, cols=None):
        rows = range(self.rows) if rows is None else rows
        cols = range(self.cols) if cols is None else cols
        return KMatrix([[self._rows[i][j] for j in cols] for i in rows])

    def transpose(self):
        return KMatrix(list(zip(*self._rows)))

    def degrees(self) -> TropMatrix:
        return TropMatrix([[x.degree() for x in row] for row in self._rows])

    def __matmul__(self, other):
        if isinstance(other, KMatrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch")
            return KMatrix([
                [_dot(row, other.col(j)) for j in range(other.cols)] for row in self._rows
            ])
        return NotImplemented

    def apply(self, vec):
        """Matrix-vector product."""
        vec = [to_k(v) for v in vec]
        if len(vec) != self.cols:
            raise ValueError("shape mismatch")
        return [_dot(row, vec) for row in self._rows]

    def __repr__(self):
        return "KMatrix([" + "; ".join(" , ".join(str(x) for x in row) for row in self._rows) + "])"


def identity(n) -> KMatrix:
    return KMatrix([[K_ONE if i == j else K_ZERO for j in range(n)] for i in range(n)])


def _dot(u, v):
    total = K_ZERO
    for a, b in zip(u, v):
        if a and b:
            total = total + a * b
    return total


def _clear_denominators(row):
    """Polynomials proportional to ``row`` and the factor that was applied."""
    dens = []
    for x in row:
        if x.den != ONE_POLY and x.den not in dens:
            dens.append(x.den)
    mult = ONE_POLY
    for d in dens:
        mult = mult * d
    polys = [x.num * mult.divexact(x.den) if x.den != ONE_POLY else x.num * mult for x in row]
    return polys, mult


def _bareiss(rows, ncols):
    """Fraction-free row echelon form, in place.

    Pivots are chosen as the first nonzero entry scanning columns left to
    right.  Returns (rank, sign of the row permutation, pivot list).
    """
    m = len(rows)
    prev = ONE_POLY
    sign = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == m:
            break
        piv = next((i for i in range(r, m) if not rows[i][c].is_zero()), None)
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
            sign = -sign
        p = rows[r][c]
        for i in range(r + 1, m):
            a = rows[i][c]
            for j in range(c + 1, ncols):
                val = p * rows[i][j] - a * rows[r][j]
                rows[i][j] = val.divexact(prev) if not val.is_zero() else val
            rows[i][c] = ZERO_POLY
        pivots.append(rows[r][c])
        prev = p
        r += 1
    return r, sign, pivots


def determinant(A: KMatrix) -> KElement:
    if A.rows != A.cols:
        raise ValueError("determinant of a non-square matrix")
    n = A.rows
    if n > MAX_DET_SIZE:
        raise BudgetExceeded(f"determinant size {n} exceeds {MAX_DET_SIZE}")
    if n == 1:
        return A[0, 0]
    if n == 2:
        return A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
    rows, mult = [], ONE_POLY
    for row in A:
        polys, f = _clear_denominators(row)
        rows.append(polys)
        mult = mult * f
    rank, sign, pivots = _bareiss(rows, n)
    if rank < n:
        return K_ZERO
    det = pivots[-1] if sign == 1 else -pivots[-1]
    return KElement(det, mult)


def cofactor(A: KMatrix, i: int, j: int) -> KElement:
    """``(-1)^(i+j)`` times the minor of ``A`` with row ``i`` and column ``j`` removed."""
    n = A.rows
    minor = A.submatrix([r for r in range(n) if r != i], [c for c in range(n) if c != j])
    d = determinant(minor)
    return d if (i + j) % 2 == 0 else -d


def determinant_by_permutations(A: KMatrix) -> KElement:
    n = A.rows
    total = K_ZERO
    for perm in itertools.permutations(range(n)):
        inv = sum(1 for a, b in itertools.combinations(perm, 2) if a > b)
        term = K_ONE
        for i, j in enumerate(perm):
            term = term * A[i, j]
            if not term:
                break
        total = total - term if inv % 2 else total + term
    return total


def cramer_solve(A: KMatrix, rhs) -> list:
    rhs = [to_k(x) for x in rhs]
    n = A.rows
    if A.cols != n or len(rhs) != n:
        raise ValueError("cramer_solve needs a square system")
    det = determinant(A)
    if det.is_zero():
        raise ZeroDivisionError("singular system")
    x = []
    for k in range(n):
        B = KMatrix([[rhs[i] if j == k else A[i, j] for j in range(n)] for i in range(n)])
        x.append(determinant(B) / det)
    if A.apply(x) != rhs:
        raise ArithmeticError("Cramer solution failed substitution check")
    return x


def rank_over_K(A: KMatrix) -> int:
    if min(A.rows, A.cols) > MAX_RANK_SIZE:
        raise BudgetExceeded(f"rank over K limited to min(rows, cols) <= {MAX_RANK_SIZE}")
    rows = [_clear_denominators(row)[0] for row in A]
    rank, _, _ = _bareiss(rows, A.cols)
    return rank


def kernel_vector(A: KMatrix):
    """A nonzero ``x`` with ``A x = 0``, or ``None`` when the columns are independent."""
    m, n = A.rows, A.cols
    R = [list(row) for row in A]
    pivot_cols = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if R[i][c]), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = R[r][c].inverse()
        R[r] = [x * inv for x in R[r]]
        for i in range(m):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [x - f * y for x, y in zip(R[i], R[r])]
        pivot_cols.append(c)
        r += 1
        if r == m:
            break
    free = next((c for c in range(n) if c not in pivot_cols), None)
    if free is None:
        return None
    x = [K_ZERO] * n
    x[free] = K_ONE
    for i, c in enumerate(pivot_cols):
        x[c] = -R[i][free]
    return x


def left_kernel_vector(A: KMatrix):
    """A nonzero ``y`` with ``y A = 0``, or ``None``."""
    return kernel_vector(A.transpose())


def deg_dependence_from_kernel(lam, F: KMatrix, A: TropMatrix):
    """Degrees of a left kernel vector of a lift ``F`` of ``A``, as a certificate."""
    from .rank import DependenceCertificate, check_dependence

    lam = [to_k(x) for x in lam]
    if len(lam) != F.rows:
        raise ValueError("kernel vector length differs from the row count")
    if all(x.is_zero() for x in lam):
        raise ValueError("kernel vector is zero")
    if F.degrees() != A:
        raise ValueError("F is not a lift of A")
    for j in range(F.cols):
        if _dot(lam, F.col(j)):
            raise ValueError(f"vector is not in the left kernel (column {j})")
    cert = DependenceCertificate(tuple(x.degree() for x in lam))
    assert check_dependence(A, cert)
    return cert


# --- text syntax ------------------------------------------------------------

def _format_rat(x: Fraction) -> str:
    return format_scalar(x)


def _format_coef(c) -> str:
    if isinstance(c, GaussRat):
        re_ = _format_rat(c.re)
        im = c.im
        if c.re == 0:
            return f"({_format_rat(im)} i)"
        sign = "+" if im > 0 else "-"
        return f"({re_}{sign}{_format_rat(abs(im))} i)"
    return _format_rat(c)


def format_poly(p: PuiseuxPoly) -> str:
    if p.is_zero():
        return "0"
    parts = []
    for e in sorted(p.terms):
        c = p.terms[e]
        neg = not isinstance(c, GaussRat) and c < 0
        mag = -c if neg else c
        if e == 0:
            body = _format_coef(mag)
        elif mag == 1:
            body = f"t^{{{_format_rat(e)}}}"
        else:
            body = f"{_format_coef(mag)}*t^{{{_format_rat(e)}}}"
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("-" if neg else "+") + body)
    return "".join(parts)


def format_k(x: KElement) -> str:
    if x.den == ONE_POLY:
        return format_poly(x.num)
    return f"({format_poly(x.num)})/({format_poly(x.den)})"


_TOKEN = re.compile(r"\s*(?:(\d+/\d+|\d+)|(.))")


class KSyntaxError(ValueError):
    pass


def _tokenize(text):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        if m.group(1) is not None:
            toks.append(("num", Fraction(m.group(1)), m.start(1)))
        elif m.group(2) is not None:
            toks.append(("sym", m.group(2), m.start(2)))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, sym=None):
        tok = self.toks[self.i]
        if sym is not None and (tok[0] != "sym" or tok[1] != sym):
            self.fail(f"expected {sym!r}")
        self.i += 1
        return tok

    def fail(self, msg):
        tok = self.peek()
        raise KSyntaxError(f"{msg} at position {tok[2]} in {self.text!r}")

    def is_sym(self, *syms):
        tok = self.peek()
        return tok[0] == "sym" and tok[1] in syms

    def expr(self):
        neg = False
        if self.is_sym("+", "-"):
            neg = self.take()[1] == "-"
        val = self.term()
        if neg:
            val = -val
        while self.is_sym("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self):
        val = self.atom()
        while True:
            if self.is_sym("*"):
                self.take()
                val = val * self.atom()
            elif self.is_sym("/"):
                self.take()
                val = val / self.atom()
            elif self.is_sym("i"):
                self.take()
                val = val * KElement.monomial(GaussRat(0, 1))
            else:
                return val

    def atom(self):
        tok = self.peek()
        if tok[0] == "num":
            self.take()
            return KElement.monomial(tok[1])
        if self.is_sym("("):
            self.take()
            val = self.expr()
            self.take(")")
            return val
        if self.is_sym("i"):
            self.take()
            return KElement.monomial(GaussRat(0, 1))
        if self.is_sym("t"):
            self.take()
            e = Fraction(1)
            if self.is_sym("^"):
                self.take()
                e = self.exponent()
            return t_pow(e)
        self.fail("unexpected token")

    def exponent(self):
        braced = self.is_sym("{")
        if braced:
            self.take()
        neg = False
        if self.is_sym("+", "-"):
            neg = self.take()[1] == "-"
        tok = self.peek()
        if tok[0] != "num":
            self.fail("expected a rational exponent")
        self.take()
        e = -tok[1] if neg else tok[1]
        if braced:
            self.take("}")
        return e


def parse_k(text: str) -> KElement:
    """Parse the text syntax, e.g. ``(1+t^{1})/(2+t^{1})`` or ``(1/2+3/4 i)*t^{-1/2}``."""
    p = _Parser(text)
    if p.peek()[0] == "end":
        raise KSyntaxError("empty element")
    val = p.expr()
    if p.peek()[0] != "end":
        p.fail("trailing input")
    return val


def parse_k_matrix(text: str) -> KMatrix:
    """One row per line, entries separated by ``;``."""
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            rows.append([parse_k(cell) for cell in line.split(";")])
        except KSyntaxError as exc:
            raise KSyntaxError(f"line {lineno}: {exc}") from None
    if not rows:
        raise KSyntaxError("no rows")
    return KMatrix(rows)


def format_k_matrix(F: KMatrix) -> str:
    return "".join("; ".join(format_k(x) for x in row) + "\n" for row in F)
