"""Sparse multivariate (Laurent) polynomials over Q.

A polynomial is a map from exponent tuples to nonzero Fractions. Values are
immutable; all arithmetic returns new objects.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Mapping, Sequence

from .linalg import IntMatrix, format_rational, inverse_unimodular, primitive, snf


class VarCountMismatch(ValueError):
    pass


class PolynomialSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class NegativeExponentError(PolynomialSyntaxError):
    pass


class _Sparse:
    laurent = False
    default_prefix = "u"

    __slots__ = ("num_vars", "terms", "_hash")

    def __init__(self, num_vars: int, terms: Mapping | None = None):
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != num_vars:
                raise VarCountMismatch(f"exponent {exp} has wrong length for {num_vars} variables")
            if not self.laurent and any(e < 0 for e in exp):
                raise ValueError("negative exponent in a polynomial")
            c = Fraction(c)
            if c:
                clean[exp] = clean.get(exp, 0) + c
                if not clean[exp]:
                    del clean[exp]
        object.__setattr__(self, "num_vars", num_vars)
        object.__setattr__(self, "terms", clean)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("polynomials are immutable")

    # constructors -------------------------------------------------------

    @classmethod
    def zero(cls, n: int):
        return cls(n)

    @classmethod
    def constant(cls, n: int, c):
        return cls(n, {(0,) * n: c})

    @classmethod
    def var(cls, n: int, i: int, power: int = 1):
        e = [0] * n
        e[i] = power
        return cls(n, {tuple(e): 1})

    @classmethod
    def monomial(cls, exp, coeff=1):
        return cls(len(exp), {tuple(exp): coeff})

    # arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, _Sparse):
            if other.num_vars != self.num_vars:
                raise VarCountMismatch(f"{self.num_vars} vs {other.num_vars} variables")
            if type(other) is not type(self):
                if self.laurent and not other.laurent:
                    return type(self)(self.num_vars, other.terms)
                raise TypeError("cannot mix polynomial kinds")
            return other
        if isinstance(other, (int, Fraction)):
            return type(self).constant(self.num_vars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return type(self)(self.num_vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return type(self)(self.num_vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return type(self)(self.num_vars, terms)

    __rmul__ = __mul__

    def scalar_mul(self, c):
        c = Fraction(c)
        return type(self)(self.num_vars, {e: c * x for e, x in self.terms.items()})

    def __pow__(self, k: int):
        if k < 0:
            if len(self.terms) == 1 and self.laurent:
                (e, c), = self.terms.items()
                return type(self)(self.num_vars, {tuple(-x * -k for x in e): Fraction(1) / c ** -k})
            raise ValueError("negative power of a non-monomial")
        out = type(self).constant(self.num_vars, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = type(self).constant(self.num_vars, other)
        if not isinstance(other, _Sparse):
            return NotImplemented
        return self.num_vars == other.num_vars and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.num_vars, frozenset(self.terms.items()))))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # inspection ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.terms.values())

    def degree(self) -> int | None:
        if not self.terms:
            return None
        return max(sum(e) for e in self.terms)

    def is_homogeneous(self, d: int | None = None) -> bool:
        degs = {sum(e) for e in self.terms}
        if not degs:
            return True
        return len(degs) == 1 and (d is None or degs == {d})

    def coefficient(self, exp) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))

    def sorted_terms(self) -> list:
        """Terms in graded-lexicographic order, highest first."""
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    # substitution -------------------------------------------------------

    def substitute_linear(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Replace variable ``i`` by the polynomial ``images[i]``."""
        if len(images) != self.num_vars:
            raise VarCountMismatch("need one image per variable")
        m = images[0].num_vars if images else 0
        out = Polynomial.zero(m)
        cache = {}
        for e, c in self.terms.items():
            term = Polynomial.constant(m, c)
            for i, k in enumerate(e):
                if k:
                    key = (i, k)
                    if key not in cache:
                        cache[key] = images[i] ** k
                    term = term * cache[key]
            out = out + term
        return out

    # printing -----------------------------------------------------------

    def to_string(self, variables: Sequence[str] | None = None) -> str:
        if variables is None:
            variables = [f"{self.default_prefix}{i + 1}" for i in range(self.num_vars)]
        if not self.terms:
            return "0"
        pieces = []
        for idx, (e, c) in enumerate(self.sorted_terms()):
            factors = []
            for name, k in zip(variables, e):
                if k == 1:
                    factors.append(name)
                elif k:
                    factors.append(f"{name}^{k}")
            mag = abs(c)
            if not factors:
                body = format_rational(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = format_rational(mag) + "*" + "*".join(factors)
            if idx == 0:
                pieces.append(("-" if c < 0 else "") + body)
            else:
                pieces.append((" - " if c < 0 else " + ") + body)
        return "".join(pieces)

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"{type(self).__name__}({self.to_string()!r})"


class Polynomial(_Sparse):
    __slots__ = ()


class LaurentPolynomial(_Sparse):
    __slots__ = ()
    laurent = True
    default_prefix = "t"


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<var>[A-Za-z]+\d+)|(?P<op>[-+*/^()]))")


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise PolynomialSyntaxError(f"unexpected character {text[pos:].lstrip()[:1]!r}", pos)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append((kind, m.group(kind), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text, variables, laurent):
        self.tokens = _tokenize(text)
        self.i = 0
        self.vars = {name: k for k, name in enumerate(variables)}
        self.n = len(variables)
        self.cls = LaurentPolynomial if laurent else Polynomial
        self.laurent = laurent

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None, value=None):
        tok = self.tokens[self.i]
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind
            raise PolynomialSyntaxError(f"expected {want!r}, got {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def expr(self):
        sign = 1
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            sign = -1 if self.take()[1] == "-" else 1
        out = self.term().scalar_mul(sign)
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            t = self.term()
            out = out + t if op == "+" else out - t
        return out

    def term(self):
        tok = self.peek()
        if tok[0] == "num":
            out = self.cls.constant(self.n, self.coeff())
        else:
            out = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] == "*":
            self.take()
            out = out * self.factor()
        return out

    def coeff(self):
        num = int(self.take("num")[1])
        if self.peek()[0] == "op" and self.peek()[1] == "/":
            self.take()
            tok = self.take("num")
            den = int(tok[1])
            if den == 0:
                raise PolynomialSyntaxError("zero denominator", tok[2])
            return Fraction(num, den)
        return Fraction(num)

    def exponent(self):
        sign = 1
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "-":
            self.take()
            sign = -1
        k = sign * int(self.take("num")[1])
        if k < 0 and not self.laurent:
            raise NegativeExponentError("negative exponent outside Laurent mode", tok[2])
        return k

    def factor(self):
        tok = self.peek()
        if tok[0] == "var":
            self.take()
            if tok[1] not in self.vars:
                raise PolynomialSyntaxError(f"unknown variable {tok[1]!r}", tok[2])
            k = 1
            if self.peek()[1] == "^" and self.peek()[0] == "op":
                self.take()
                k = self.exponent()
            e = [0] * self.n
            e[self.vars[tok[1]]] = k
            return self.cls.monomial(e)
        if tok[0] == "op" and tok[1] == "(":
            self.take()
            inner = self.expr()
            self.take("op", ")")
            if self.peek()[1] == "^" and self.peek()[0] == "op":
                self.take()
                pos = self.peek()[2]
                k = self.exponent()
                try:
                    return inner ** k
                except ValueError as exc:
                    raise PolynomialSyntaxError(str(exc), pos) from exc
            return inner
        if tok[0] == "num":
            # a coefficient after '*', e.g. "u1*2"
            return self.cls.constant(self.n, self.coeff())
        raise PolynomialSyntaxError(f"unexpected {tok[1] or 'end of input'!r}", tok[2])


def parse(text: str, variables: Sequence[str], laurent: bool = False):
    """Parse polynomial text over the given variable names."""
    p = _Parser(text, variables, laurent)
    out = p.expr()
    p.take("end")
    return out


# ---------------------------------------------------------------------------
# linear forms and divisibility


class LinearForm:
    """Nonzero integer linear form ``sum c_i u_i``.

    ``primitive`` holds the primitive representative; ``original`` holds the
    coefficients exactly as supplied.
    """

    __slots__ = ("original", "primitive")

    def __init__(self, coeffs: Sequence[int]):
        self.original = tuple(int(c) for c in coeffs)
        self.primitive = primitive(self.original)

    @property
    def num_vars(self) -> int:
        return len(self.original)

    def as_polynomial(self, use_original: bool = True) -> Polynomial:
        c = self.original if use_original else self.primitive
        n = len(c)
        return Polynomial(n, {tuple(int(i == j) for j in range(n)): x for i, x in enumerate(c) if x})

    def __repr__(self):
        return f"LinearForm({list(self.original)})"


def divides_linear(lam: LinearForm, g: Polynomial, ring: str = "Q") -> tuple:
    """Whether ``lam`` divides ``g``; returns ``(verdict, quotient or None)``.

    Over ``"Z"`` the form is used exactly as given and the quotient must have
    integer coefficients.
    """
    if not isinstance(lam, LinearForm):
        lam = LinearForm(lam)
    if lam.num_vars != g.num_vars:
        raise VarCountMismatch("form and polynomial have different variable counts")
    n = g.num_vars
    c = lam.original
    i = max(k for k, x in enumerate(c) if x)
    # u_i = -(sum_{j != i} c_j u_j) / c_i makes the form vanish
    images = [Polynomial.var(n, j) for j in range(n)]
    images[i] = Polynomial(
        n, {tuple(int(j == m) for m in range(n)): Fraction(-c[j], c[i]) for j in range(n) if j != i and c[j]}
    )
    if not g.substitute_linear(images).is_zero():
        return False, None
    q = _divide_along(g, c, i)
    if ring == "Z" and not (q.is_integral):
        return False, None
    if ring not in ("Q", "Z"):
        raise ValueError(f"unknown coefficient ring {ring!r}")
    return True, q


def _divide_along(g: Polynomial, c: Sequence[int], i: int) -> Polynomial:
    """Exact long division of ``g`` by ``sum c_j u_j`` in the variable ``u_i``."""
    n = g.num_vars
    lam = Polynomial(n, {tuple(int(j == m) for m in range(n)): x for j, x in enumerate(c) if x})
    rem = g
    q = Polynomial.zero(n)
    while not rem.is_zero():
        top = max(e[i] for e in rem.terms)
        if top == 0:
            raise ArithmeticError("remainder is not divisible")
        lead = {}
        for e, a in rem.terms.items():
            if e[i] == top:
                e2 = list(e)
                e2[i] -= 1
                lead[tuple(e2)] = a / c[i]
        step = Polynomial(n, lead)
        q = q + step
        rem = rem - step * lam
    return q


def _exponent_basis(a: Sequence[int]) -> tuple:
    """Unimodular ``V`` with ``a' V = e_1`` for the primitive part ``a'`` of ``a``.

    Returns ``(c, V, V^{-1})`` where ``a = c a'``.
    """
    ap = primitive(a)
    c = next(x // y for x, y in zip(a, ap) if y)
    dec = snf(IntMatrix.from_rows([list(ap)]))
    V = dec.V
    u = dec.U[0, 0]  # +-1; a' V = u e_1
    if u != 1:
        V = IntMatrix.from_rows([[x * u if j == 0 else x for j, x in enumerate(V.row(i))] for i in range(V.rows)])
    return c, V, inverse_unimodular(V)


def _transform(g: LaurentPolynomial, M: IntMatrix) -> LaurentPolynomial:
    n = g.num_vars
    return LaurentPolynomial(
        n, {tuple(sum(e[r] * M[r, s] for r in range(n)) for s in range(n)): x for e, x in g.terms.items()}
    )


def divides_binomial(a: Sequence[int], g: LaurentPolynomial) -> tuple:
    """Whether ``1 - t^a`` divides ``g`` in the Laurent ring over Q.

    The exponent lattice is rebased so that ``a = c e_1``; the question then
    becomes division by ``1 - x_1^c`` in one variable. Returns
    ``(verdict, quotient or None)``.
    """
    a = tuple(int(x) for x in a)
    if not any(a):
        raise ValueError("binomial exponent must be nonzero")
    if not isinstance(g, LaurentPolynomial):
        g = LaurentPolynomial(g.num_vars, g.terms)
    if len(a) != g.num_vars:
        raise VarCountMismatch("exponent and polynomial have different variable counts")
    c, V, Vinv = _exponent_basis(a)
    h = _transform(g, V)
    n = g.num_vars
    if h.is_zero():
        return True, LaurentPolynomial.zero(n)
    # group by the exponent of x_1, shifted to start at 0
    low = min(e[0] for e in h.terms)
    by_power = {}
    for e, x in h.terms.items():
        by_power.setdefault(e[0] - low, {})[(0,) + e[1:]] = x
    # (1 - x^c) | sum_m x^m h_m  iff  each residue class mod c sums to zero
    residues = {}
    for m, part in by_power.items():
        acc = residues.setdefault(m % c, {})
        for e, x in part.items():
            acc[e] = acc.get(e, 0) + x
    if any(x for acc in residues.values() for x in acc.values()):
        return False, None
    # h / (1 - x^c): the quotient coefficient at x^m is the sum of h_j for j <= m, j = m (mod c)
    top = max(by_power)
    q_terms = {}
    running = {}
    for m in range(top + 1):
        r = m % c
        acc = running.setdefault(r, {})
        for e, x in by_power.get(m, {}).items():
            acc[e] = acc.get(e, 0) + x
        for e, x in acc.items():
            if x:
                q_terms[(m + low,) + e[1:]] = x
    q = _transform(LaurentPolynomial(n, q_terms), Vinv)
    assert q * LaurentPolynomial(n, {(0,) * n: 1, a: -1}) == g
    return True, q
