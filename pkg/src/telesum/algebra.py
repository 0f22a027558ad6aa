"""Exact rational arithmetic: sparse multivariate polynomials over Q in the
fixed symbol set {n, k, a, b, c, d, e, f}, reduced rational functions, shift
substitution, and rational linear factorization of univariate polynomials.

All values are immutable and all operations are pure, so everything here is
safe to share between concurrent tasks.

Polynomials are sparse maps from exponent vectors to nonzero Fraction
coefficients, compared and printed in graded lexicographic order.  Total
degrees stay small throughout the package, so no asymptotically clever
representation is needed; determinism matters more.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence, Union

from .errors import DivisionByZero, IrreducibleRemainder, UnknownSymbol

#: Rational scalars are plain ``fractions.Fraction`` values (arbitrary
#: precision, always reduced, positive denominator) -- exactly the invariants
#: the package needs, so no wrapper type is introduced.
BigRational = Fraction

SYMBOLS: tuple[str, ...] = ("n", "k", "a", "b", "c", "d", "e", "f")
_SYM_INDEX = {s: i for i, s in enumerate(SYMBOLS)}
_NVARS = len(SYMBOLS)
_ZEROEXP = (0,) * _NVARS

Scalar = Union[int, Fraction]


def sym_index(symbol: str) -> int:
    try:
        return _SYM_INDEX[symbol]
    except KeyError:
        raise UnknownSymbol(f"unknown symbol {symbol!r}; expected one of {SYMBOLS}")


def _grlex_key(exp: tuple[int, ...]) -> tuple:
    return (sum(exp), exp)


class MultiPoly:
    """Sparse multivariate polynomial over Q with graded-lex canonical order."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Mapping[tuple[int, ...], Fraction] | None = None):
        clean: dict[tuple[int, ...], Fraction] = {}
        if terms:
            for exp, coeff in terms.items():
                if coeff:
                    clean[exp] = Fraction(coeff)
        self.terms = clean
        self._hash = None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def const(value: Scalar) -> "MultiPoly":
        v = Fraction(value)
        return MultiPoly({_ZEROEXP: v} if v else {})

    @staticmethod
    def symbol(name: str) -> "MultiPoly":
        i = sym_index(name)
        exp = tuple(1 if j == i else 0 for j in range(_NVARS))
        return MultiPoly({exp: Fraction(1)})

    @staticmethod
    def linear(coeffs: Mapping[str, Scalar], constant: Scalar = 0) -> "MultiPoly":
        terms: dict[tuple[int, ...], Fraction] = {}
        c = Fraction(constant)
        if c:
            terms[_ZEROEXP] = c
        for name, coeff in coeffs.items():
            fc = Fraction(coeff)
            if not fc:
                continue
            i = sym_index(name)
            exp = tuple(1 if j == i else 0 for j in range(_NVARS))
            terms[exp] = terms.get(exp, Fraction(0)) + fc
        return MultiPoly(terms)

    # -- basic queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and _ZEROEXP in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return self.terms.get(_ZEROEXP, Fraction(0))

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree_in(self, symbol: str) -> int:
        i = sym_index(symbol)
        if not self.terms:
            return -1
        return max((e[i] for e in self.terms), default=-1)

    def symbols_used(self) -> tuple[str, ...]:
        used = [False] * _NVARS
        for exp in self.terms:
            for i, e in enumerate(exp):
                if e:
                    used[i] = True
        return tuple(s for i, s in enumerate(SYMBOLS) if used[i])

    def leading(self) -> tuple[tuple[int, ...], Fraction]:
        """Leading (exponent, coefficient) under graded-lex order."""
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        exp = max(self.terms, key=_grlex_key)
        return exp, self.terms[exp]

    def coeff_of(self, symbol: str, power: int) -> "MultiPoly":
        """Coefficient of symbol**power, a polynomial in the other symbols."""
        i = sym_index(symbol)
        out: dict[tuple[int, ...], Fraction] = {}
        for exp, c in self.terms.items():
            if exp[i] == power:
                reduced = exp[:i] + (0,) + exp[i + 1:]
                out[reduced] = out.get(reduced, Fraction(0)) + c
        return MultiPoly(out)

    # -- ring operations ----------------------------------------------------

    def __add__(self, other) -> "MultiPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        out = dict(self.terms)
        for exp, c in other.terms.items():
            s = out.get(exp, Fraction(0)) + c
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
        return MultiPoly(out)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly({e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "MultiPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "MultiPoly":
        return _coerce(other) - self

    def __mul__(self, other) -> "MultiPoly":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if not self.terms or not other.terms:
            return MultiPoly()
        if other.is_constant():
            v = other.constant_value()
            return MultiPoly({e: c * v for e, c in self.terms.items()})
        if self.is_constant():
            v = self.constant_value()
            return MultiPoly({e: c * v for e, c in other.terms.items()})
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(x + y for x, y in zip(e1, e2))
                s = out.get(exp, Fraction(0)) + c1 * c2
                if s:
                    out[exp] = s
                else:
                    del out[exp]
        return MultiPoly(out)

    __rmul__ = __mul__

    def __pow__(self, power: int) -> "MultiPoly":
        if power < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.const(1)
        base = self
        while power:
            if power & 1:
                result = result * base
            base = base * base
            power >>= 1
        return result

    def scale(self, value: Scalar) -> "MultiPoly":
        v = Fraction(value)
        if not v:
            return MultiPoly()
        return MultiPoly({e: c * v for e, c in self.terms.items()})

    # -- substitution -------------------------------------------------------

    def subs(self, mapping: Mapping[str, "MultiPoly | Scalar"]) -> "MultiPoly":
        """Substitute polynomials (or scalars) for symbols, exactly."""
        if not mapping:
            return self
        reps: dict[int, MultiPoly] = {}
        for name, val in mapping.items():
            reps[sym_index(name)] = val if isinstance(val, MultiPoly) else MultiPoly.const(val)
        powers: dict[int, list[MultiPoly]] = {i: [MultiPoly.const(1)] for i in reps}
        out = MultiPoly()
        for exp, coeff in sorted(self.terms.items(), key=lambda it: _grlex_key(it[0])):
            factor = MultiPoly.const(coeff)
            residual = list(exp)
            for i, rep in reps.items():
                e = exp[i]
                if e:
                    cache = powers[i]
                    while len(cache) <= e:
                        cache.append(cache[-1] * rep)
                    factor = factor * cache[e]
                    residual[i] = 0
            if any(residual):
                factor = factor * MultiPoly({tuple(residual): Fraction(1)})
            out = out + factor
        return out

    def shift(self, symbol: str, offset: Scalar) -> "MultiPoly":
        """Replace symbol by symbol + offset."""
        if self.degree_in(symbol) <= 0:
            return self
        return self.subs({symbol: MultiPoly.symbol(symbol) + MultiPoly.const(offset)})

    def eval_frac(self, values: Mapping[str, Scalar]) -> Fraction:
        """Full numeric evaluation; every used symbol must be assigned."""
        vals: dict[int, Fraction] = {sym_index(s): Fraction(v) for s, v in values.items()}
        total = Fraction(0)
        for exp, coeff in self.terms.items():
            term = coeff
            for i, e in enumerate(exp):
                if e:
                    if i not in vals:
                        raise UnknownSymbol(f"symbol {SYMBOLS[i]!r} not assigned")
                    term *= vals[i] ** e
            total += term
        return total

    # -- content and division ----------------------------------------------

    def content(self) -> Fraction:
        """Positive rational c such that self/c has coprime integer
        coefficients; content of 0 is 0."""
        if not self.terms:
            return Fraction(0)
        num_gcd = 0
        den_lcm = 1
        for c in self.terms.values():
            num_gcd = math.gcd(num_gcd, abs(c.numerator))
            den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
        return Fraction(num_gcd, den_lcm)

    def signed_content(self) -> Fraction:
        """Content carrying the sign of the graded-lex leading coefficient."""
        if not self.terms:
            return Fraction(0)
        c = self.content()
        _, lc = self.leading()
        return -c if lc < 0 else c

    def primitive(self) -> "MultiPoly":
        c = self.signed_content()
        if not c:
            return self
        inv = 1 / c
        return MultiPoly({e: q * inv for e, q in self.terms.items()})

    def exact_div(self, divisor: "MultiPoly") -> "MultiPoly":
        """Exact polynomial division; raises ValueError on nonzero remainder."""
        if divisor.is_zero():
            raise DivisionByZero("polynomial division by zero")
        if divisor.is_constant():
            return self.scale(1 / divisor.constant_value())
        quotient: dict[tuple[int, ...], Fraction] = {}
        rem = self
        dexp, dcoeff = divisor.leading()
        while not rem.is_zero():
            rexp, rcoeff = rem.leading()
            qexp = tuple(r - d for r, d in zip(rexp, dexp))
            if any(e < 0 for e in qexp):
                raise ValueError("inexact polynomial division")
            qc = rcoeff / dcoeff
            quotient[qexp] = quotient.get(qexp, Fraction(0)) + qc
            rem = rem - divisor * MultiPoly({qexp: qc})
        return MultiPoly(quotient)

    # -- comparisons / hashing ----------------------------------------------

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __repr__(self) -> str:
        return f"MultiPoly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp in sorted(self.terms, key=_grlex_key, reverse=True):
            coeff = self.terms[exp]
            mono = "*".join(
                f"{SYMBOLS[i]}^{e}" if e > 1 else SYMBOLS[i]
                for i, e in enumerate(exp) if e
            )
            if mono:
                if coeff == 1:
                    body = mono
                elif coeff == -1:
                    body = f"-{mono}"
                else:
                    body = f"{coeff}*{mono}"
            else:
                body = str(coeff)
            parts.append(body)
        text = parts[0]
        for p in parts[1:]:
            text += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return text


def _coerce(value) -> "MultiPoly":
    if isinstance(value, MultiPoly):
        return value
    if isinstance(value, (int, Fraction)):
        return MultiPoly.const(value)
    return NotImplemented


ZERO = MultiPoly()
ONE = MultiPoly.const(1)


# -- multivariate gcd --------------------------------------------------------

def _coeff_list(p: MultiPoly, symbol: str) -> list[MultiPoly]:
    """Dense coefficient list of p viewed as univariate in symbol."""
    d = p.degree_in(symbol)
    return [p.coeff_of(symbol, i) for i in range(d + 1)]

def _from_coeff_list(coeffs: Sequence[MultiPoly], symbol: str) -> MultiPoly:
    x = MultiPoly.symbol(symbol)
    out = MultiPoly()
    xp = MultiPoly.const(1)
    for c in coeffs:
        out = out + c * xp
        xp = xp * x
    return out

def _pseudo_rem(a: list[MultiPoly], b: list[MultiPoly]) -> list[MultiPoly]:
    """Pseudo-remainder of dense coefficient lists (univariate view)."""
    da, db = len(a) - 1, len(b) - 1
    r = list(a)
    lc_b = b[-1]
    for i in range(da - db, -1, -1):
        lead = r[db + i]
        r = [c * lc_b for c in r]
        for j in range(db + 1):
            r[i + j] = r[i + j] - lead * b[j]
    r = r[:db] if db > 0 else []
    while len(r) > 1 and r[-1].is_zero():
        r.pop()
    return r if r else [ZERO]


def _eval_univariate(p: MultiPoly, x: str, point: dict[str, Fraction]) -> list[Fraction]:
    """Specialize all symbols except x at a point; dense Fraction list in x."""
    xi = sym_index(x)
    out: dict[int, Fraction] = {}
    for exp, coeff in p.terms.items():
        val = coeff
        for i, e in enumerate(exp):
            if e and i != xi:
                val *= point[SYMBOLS[i]] ** e
        if val:
            out[exp[xi]] = out.get(exp[xi], Fraction(0)) + val
    if not out:
        return []
    coeffs = [Fraction(0)] * (max(out) + 1)
    for deg, v in out.items():
        coeffs[deg] = v
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return coeffs


def _uni_gcd_frac(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    while b:
        da, db = len(a) - 1, len(b) - 1
        if da < db:
            a, b = b, a
            continue
        lc = b[-1]
        r = list(a)
        for i in range(da - db, -1, -1):
            coeff = r[db + i] / lc
            if coeff:
                for j in range(db + 1):
                    r[i + j] -= coeff * b[j]
        del r[db:]
        while r and not r[-1]:
            r.pop()
        a, b = b, r
    return a


def _coprime_by_evaluation(p: MultiPoly, q: MultiPoly, x: str) -> bool:
    """Certify gcd(p, q) is free of x: for any specialization of the other
    symbols that keeps both leading coefficients in x nonzero, the gcd of the
    specialized polynomials bounds the x-degree of the true gcd."""
    dp, dq = p.degree_in(x), q.degree_in(x)
    lcp, lcq = p.coeff_of(x, dp), q.coeff_of(x, dq)
    others = [s for s in set(p.symbols_used()) | set(q.symbols_used()) if s != x]
    for trial in range(6):
        point = {s: Fraction(2 * trial + 3 + 5 * i) for i, s in enumerate(others)}
        if not lcp.eval_frac(point) or not lcq.eval_frac(point):
            continue
        g = _uni_gcd_frac(_eval_univariate(p, x, point), _eval_univariate(q, x, point))
        return len(g) <= 1
    return False


def poly_gcd(p: MultiPoly, q: MultiPoly) -> MultiPoly:
    """gcd over Q, normalized primitive with positive leading coefficient.

    Recursive content/primitive-part reduction to a pseudo-remainder
    sequence, with an evaluation certificate to dismiss coprime primitive
    parts quickly; adequate for the small total degrees this package
    produces.
    """
    if p.is_zero():
        return q.primitive() if not q.is_zero() else ZERO
    if q.is_zero():
        return p.primitive()
    if p.is_constant() or q.is_constant():
        return ONE
    if p.terms == q.terms:
        return p.primitive()
    syms_p = set(p.symbols_used())
    syms_q = set(q.symbols_used())
    common = syms_p & syms_q
    if not common:
        return ONE
    x = min((s for s in SYMBOLS if s in common),
            key=lambda s: min(p.degree_in(s), q.degree_in(s)))

    def content_and_prim(poly: MultiPoly) -> tuple[MultiPoly, list[MultiPoly]]:
        coeffs = _coeff_list(poly, x)
        cont = ZERO
        for c in coeffs:
            cont = poly_gcd(cont, c)
            if cont == ONE:
                break
        prim = [c.exact_div(cont) for c in coeffs] if cont != ONE else coeffs
        return cont, prim

    cont_p, prim_p = content_and_prim(p)
    cont_q, prim_q = content_and_prim(q)
    cont_gcd = poly_gcd(cont_p, cont_q)

    pp = _from_coeff_list(prim_p, x)
    qq = _from_coeff_list(prim_q, x)
    if _coprime_by_evaluation(pp, qq, x):
        return cont_gcd if not cont_gcd.is_zero() else ONE

    # subresultant pseudo-remainder sequence on the primitive parts
    a, b = prim_p, prim_q
    if len(a) < len(b):
        a, b = b, a
    g_fac = ONE
    h_fac = ONE
    while True:
        if len(b) == 1 and b[0].is_zero():
            g = a
            break
        if len(b) == 1:
            g = [ONE]
            break
        delta = len(a) - len(b)
        r = _pseudo_rem(a, b)
        if len(r) == 1 and r[0].is_zero():
            g = b
            break
        divisor = g_fac * (h_fac ** delta)
        a, b = b, [c.exact_div(divisor) for c in r]
        g_fac = a[-1]
        if delta == 0:
            h_fac = h_fac
        elif delta == 1:
            h_fac = g_fac
        else:
            h_fac = (g_fac ** delta).exact_div(h_fac ** (delta - 1))
    gcont = ZERO
    for coeff in g:
        gcont = poly_gcd(gcont, coeff)
        if gcont == ONE:
            break
    if not (gcont == ONE or gcont.is_zero()):
        g = [c.exact_div(gcont) for c in g]
    gp = _from_coeff_list(g, x)
    return (gp * cont_gcd).primitive()


# -- rational functions ------------------------------------------------------

class RationalFunction:
    """Quotient of multivariate polynomials in canonical reduced form.

    Invariants: den != 0, gcd(num, den) = 1, den primitive with positive
    graded-lex leading coefficient.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly | Scalar, den: MultiPoly | Scalar = 1):
        num = _coerce(num)
        den = _coerce(den)
        if den.is_zero():
            raise DivisionByZero("rational function with zero denominator")
        if num.is_zero():
            den = ONE
        else:
            g = poly_gcd(num, den)
            if g != ONE:
                num = num.exact_div(g)
                den = den.exact_div(g)
            c = den.signed_content()
            if c != 1:
                den = den.scale(1 / c)
                num = num.scale(1 / c)
        self.num = num
        self.den = den

    # -- constructors --------------------------------------------------------

    @staticmethod
    def const(value: Scalar) -> "RationalFunction":
        return RationalFunction(MultiPoly.const(value))

    @staticmethod
    def symbol(name: str) -> "RationalFunction":
        return RationalFunction(MultiPoly.symbol(name))

    @staticmethod
    def from_coprime(num: MultiPoly, den: MultiPoly) -> "RationalFunction":
        """Build from a numerator/denominator already known to be coprime;
        only the canonical denominator normalization is applied."""
        if den.is_zero():
            raise DivisionByZero("rational function with zero denominator")
        obj = object.__new__(RationalFunction)
        c = den.signed_content()
        if c and c != 1:
            den = den.scale(1 / c)
            num = num.scale(1 / c)
        obj.num = num
        obj.den = den if not num.is_zero() else ONE
        return obj

    # -- queries --------------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self) -> Fraction:
        return self.num.constant_value() / self.den.constant_value()

    def symbols_used(self) -> tuple[str, ...]:
        used = set(self.num.symbols_used()) | set(self.den.symbols_used())
        return tuple(s for s in SYMBOLS if s in used)

    # -- field operations ------------------------------------------------------

    def __add__(self, other) -> "RationalFunction":
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * other.den + other.num * self.den,
                                self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other) -> "RationalFunction":
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RationalFunction":
        return _coerce_rf(other) - self

    def __mul__(self, other) -> "RationalFunction":
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalFunction":
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero():
            raise DivisionByZero("division of rational functions by zero")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "RationalFunction":
        return _coerce_rf(other) / self

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise DivisionByZero("inverse of the zero rational function")
        return RationalFunction(self.den, self.num)

    # -- substitution -----------------------------------------------------------

    def subs(self, mapping: Mapping[str, MultiPoly | Scalar]) -> "RationalFunction":
        return RationalFunction(self.num.subs(mapping), self.den.subs(mapping))

    def shift(self, symbol: str, offset: Scalar) -> "RationalFunction":
        return RationalFunction(self.num.shift(symbol, offset),
                                self.den.shift(symbol, offset))

    def eval_frac(self, values: Mapping[str, Scalar]) -> Fraction:
        den = self.den.eval_frac(values)
        if not den:
            raise DivisionByZero("pole at evaluation point")
        return self.num.eval_frac(values) / den

    # -- comparisons ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        other = _coerce_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __repr__(self) -> str:
        return f"RationalFunction({self})"

    def __str__(self) -> str:
        if self.den == ONE:
            return str(self.num)
        return f"({self.num})/({self.den})"


def _coerce_rf(value) -> "RationalFunction":
    if isinstance(value, RationalFunction):
        return value
    if isinstance(value, MultiPoly):
        return RationalFunction(value)
    if isinstance(value, (int, Fraction)):
        return RationalFunction.const(value)
    return NotImplemented


def rf_arith(lhs: RationalFunction, rhs: RationalFunction, op: str) -> RationalFunction:
    """Field arithmetic on rational functions; op in {add, sub, mul, div}."""
    if op == "add":
        return lhs + rhs
    if op == "sub":
        return lhs - rhs
    if op == "mul":
        return lhs * rhs
    if op == "div":
        return lhs / rhs
    raise ValueError(f"unknown operation {op!r}")


def shift_substitute(rf: RationalFunction, symbol: str, offset: int) -> RationalFunction:
    """Replace symbol by symbol + offset throughout, exactly."""
    sym_index(symbol)
    return rf.shift(symbol, offset)


# -- dense univariate helpers -------------------------------------------------
#
# Series-index polynomials (the bracket poly factors, step ratios along an
# orbit) are univariate; a dense tuple of Fractions, ascending by power, is
# the cheapest faithful representation.

UPoly = tuple[Fraction, ...]


def u_trim(p: Sequence[Fraction]) -> UPoly:
    coeffs = [Fraction(c) for c in p]
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return tuple(coeffs)


def u_from_const(value: Scalar) -> UPoly:
    return u_trim([Fraction(value)])


def u_deg(p: UPoly) -> int:
    return len(p) - 1


def u_add(p: UPoly, q: UPoly) -> UPoly:
    out = [Fraction(0)] * max(len(p), len(q))
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += c
    return u_trim(out)


def u_neg(p: UPoly) -> UPoly:
    return tuple(-c for c in p)


def u_sub(p: UPoly, q: UPoly) -> UPoly:
    return u_add(p, u_neg(q))


def u_mul(p: UPoly, q: UPoly) -> UPoly:
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, ci in enumerate(p):
        if ci:
            for j, cj in enumerate(q):
                out[i + j] += ci * cj
    return u_trim(out)


def u_scale(p: UPoly, value: Scalar) -> UPoly:
    v = Fraction(value)
    if not v:
        return ()
    return tuple(c * v for c in p)


def u_eval(p: UPoly, x: Scalar) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def u_shift_var(p: UPoly, h: Scalar) -> UPoly:
    """p(x + h), computed by Horner on the shifted variable."""
    acc: UPoly = ()
    xh: UPoly = (Fraction(h), Fraction(1))
    for c in reversed(p):
        acc = u_add(u_mul(acc, xh), (Fraction(c),))
    return acc


def u_divmod(p: UPoly, q: UPoly) -> tuple[UPoly, UPoly]:
    if not q:
        raise DivisionByZero("univariate division by zero")
    if len(p) < len(q):
        return (), u_trim(p)
    rem = list(p)
    dq = len(q) - 1
    lc = q[-1]
    quo = [Fraction(0)] * (len(p) - dq)
    for i in range(len(p) - dq - 1, -1, -1):
        coeff = rem[dq + i] / lc
        if coeff:
            quo[i] = coeff
            for j in range(dq + 1):
                rem[i + j] -= coeff * q[j]
    return u_trim(quo), u_trim(rem[:dq])


def u_gcd(p: UPoly, q: UPoly) -> UPoly:
    a, b = u_trim(p), u_trim(q)
    while b:
        _, r = u_divmod(a, b)
        a, b = b, r
    if not a:
        return ()
    return u_scale(a, 1 / a[-1])


def u_content(p: UPoly) -> Fraction:
    """Positive content; p / content has coprime integer coefficients."""
    if not p:
        return Fraction(0)
    num_gcd = 0
    den_lcm = 1
    for c in p:
        num_gcd = math.gcd(num_gcd, abs(c.numerator))
        den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
    return Fraction(num_gcd, den_lcm)


def u_primitive(p: UPoly) -> tuple[Fraction, UPoly]:
    """(signed content, primitive part): p = content * primitive, with the
    primitive part having coprime integer coefficients and positive lc."""
    if not p:
        return Fraction(0), ()
    c = u_content(p)
    if p[-1] < 0:
        c = -c
    return c, tuple(q / c for q in p)


# -- integer factorization and rational roots ---------------------------------

def _is_probable_prime(num: int) -> bool:
    if num < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if num % p == 0:
            return num == p
    d = num - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for base in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(base, d, num)
        if x in (1, num - 1):
            continue
        for _ in range(r - 1):
            x = x * x % num
            if x == num - 1:
                break
        else:
            return False
    return True


def _pollard_rho(num: int) -> int:
    if num % 2 == 0:
        return 2
    seed = 1
    while True:
        seed += 1
        x = y = 2
        c = seed
        d = 1
        while d == 1:
            x = (x * x + c) % num
            y = (y * y + c) % num
            y = (y * y + c) % num
            d = math.gcd(abs(x - y), num)
        if d != num:
            return d


def factorize(num: int) -> dict[int, int]:
    """Prime factorization of a positive integer."""
    if num <= 0:
        raise ValueError("factorize expects a positive integer")
    factors: dict[int, int] = {}
    stack = [num]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if _is_probable_prime(m):
            factors[m] = factors.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.append(d)
        stack.append(m // d)
    return factors


def divisors(num: int) -> list[int]:
    """All positive divisors of a positive integer, ascending."""
    divs = [1]
    for p, e in factorize(num).items():
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def factor_linear_rational(p: UPoly | Sequence[Scalar]) -> tuple[Fraction, list[Fraction]]:
    """Split p into content * prod (x + root_i) over Q.

    Returns (content, roots) with roots sorted ascending; the roots are the
    additive constants, so prod_{i<m} (i + root) is a rising factorial of
    argument ``root``.  Raises IrreducibleRemainder when a cofactor without
    rational roots remains.
    """
    poly = u_trim([Fraction(c) for c in p])
    if not poly:
        raise ValueError("cannot factor the zero polynomial")
    if len(poly) == 1:
        return poly[0], []
    content, prim = u_primitive(poly)
    roots: list[Fraction] = []
    # strip x = 0 roots first (additive constant 0)
    while prim and not prim[0]:
        roots.append(Fraction(0))
        prim = prim[1:]
    work = prim
    while len(work) > 1:
        if len(work) == 2:
            # linear: c1*x + c0 = c1 * (x + c0/c1)
            roots.append(work[0] / work[1])
            content *= work[1]
            work = (Fraction(1),)
            break
        a0 = abs(work[0].numerator)
        lc = abs(work[-1].numerator)
        found = None
        for q in divisors(lc):
            for pnum in divisors(a0):
                for sign in (1, -1):
                    cand = Fraction(sign * pnum, q)
                    if u_eval(work, cand) == 0:
                        found = cand
                        break
                if found is not None:
                    break
            if found is not None:
                break
        if found is None:
            raise IrreducibleRemainder(u_scale(work, content))
        # x = found is a zero, i.e. factor (x - found) = (x + (-found))
        roots.append(-found)
        quo, rem = u_divmod(work, (-found, Fraction(1)))
        assert not rem
        cnt, work = u_primitive(quo)
        content *= cnt
    return content, sorted(roots)
