"""Parametrized bivariate hypergeometric terms and displayed series.

A template is a product of rising-factorial factors (x)_{k+shift} with linear
bases, an optional alternating sign, and an optional rational prefactor.  The
consecutive-term ratio in any of {k, n, a, b} is an exact rational function,
because every shift moves Gamma arguments by integers; no Gamma value is ever
evaluated.  Ratios are kept in factored form (content times linear factors)
so later telescoping work never needs to re-factor them.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .algebra import (
    MultiPoly,
    RationalFunction,
    SYMBOLS,
    UPoly,
    divisors,
    sym_index,
    u_eval,
    u_primitive,
    u_trim,
)
from .errors import NonIntegerShift, TemplateSyntaxError, UnknownSymbol

RATIO_SYMBOLS = ("k", "n", "a", "b")


# ---------------------------------------------------------------------------
# linear forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinearForm:
    """Linear combination of symbols plus a rational constant."""

    coeffs: tuple[tuple[str, Fraction], ...]
    constant: Fraction

    @staticmethod
    def make(coeffs: Mapping[str, Fraction | int] | None = None,
             constant: Fraction | int = 0) -> "LinearForm":
        items = []
        if coeffs:
            for s, c in coeffs.items():
                sym_index(s)
                fc = Fraction(c)
                if fc:
                    items.append((s, fc))
        items.sort(key=lambda it: sym_index(it[0]))
        return LinearForm(tuple(items), Fraction(constant))

    @staticmethod
    def const(value: Fraction | int) -> "LinearForm":
        return LinearForm((), Fraction(value))

    @staticmethod
    def symbol(name: str) -> "LinearForm":
        return LinearForm.make({name: 1})

    def coeff(self, symbol: str) -> Fraction:
        for s, c in self.coeffs:
            if s == symbol:
                return c
        return Fraction(0)

    def is_constant(self) -> bool:
        return not self.coeffs

    def __add__(self, other: "LinearForm | Fraction | int") -> "LinearForm":
        if isinstance(other, (int, Fraction)):
            return LinearForm(self.coeffs, self.constant + other)
        merged = dict(self.coeffs)
        for s, c in other.coeffs:
            merged[s] = merged.get(s, Fraction(0)) + c
        return LinearForm.make(merged, self.constant + other.constant)

    def __neg__(self) -> "LinearForm":
        return LinearForm(tuple((s, -c) for s, c in self.coeffs), -self.constant)

    def __sub__(self, other) -> "LinearForm":
        return self + (-other if isinstance(other, LinearForm) else LinearForm.const(-other))

    def scale(self, value: Fraction | int) -> "LinearForm":
        v = Fraction(value)
        if not v:
            return LinearForm.const(0)
        return LinearForm(tuple((s, c * v) for s, c in self.coeffs), self.constant * v)

    def shift_symbol(self, symbol: str, offset: Fraction | int) -> "LinearForm":
        """Replace symbol by symbol + offset."""
        return LinearForm(self.coeffs, self.constant + self.coeff(symbol) * Fraction(offset))

    def subs_params(self, values: Mapping[str, Fraction]) -> "LinearForm":
        keep = []
        const = self.constant
        for s, c in self.coeffs:
            if s in values:
                const += c * Fraction(values[s])
            else:
                keep.append((s, c))
        return LinearForm(tuple(keep), const)

    def to_poly(self) -> MultiPoly:
        return MultiPoly.linear(dict(self.coeffs), self.constant)

    def eval_frac(self, values: Mapping[str, Fraction]) -> Fraction:
        total = self.constant
        for s, c in self.coeffs:
            total += c * Fraction(values[s])
        return total

    def __str__(self) -> str:
        parts = []
        for s, c in self.coeffs:
            if c == 1:
                parts.append(f"+{s}")
            elif c == -1:
                parts.append(f"-{s}")
            elif c.denominator == 1:
                parts.append(f"{'+' if c > 0 else '-'}{abs(c)}*{s}")
            else:
                parts.append(f"{'+' if c > 0 else '-'}{abs(c)}*{s}")
        if self.constant or not parts:
            parts.append(f"{'+' if self.constant >= 0 else '-'}{abs(self.constant)}")
        text = "".join(parts)
        return text[1:] if text.startswith("+") else text


# ---------------------------------------------------------------------------
# factored rational expressions (content * product of linear forms)
# ---------------------------------------------------------------------------

def _normalize_factor(form: LinearForm) -> tuple[Fraction, LinearForm]:
    """Scale a linear form to canonical shape; returns (multiplier, form) with
    multiplier * form == input.  k-forms become monic in k; k-free forms get
    integer-primitive coefficients with positive leading coefficient."""
    kc = form.coeff("k")
    if kc:
        return kc, form.scale(1 / kc)
    nums = [c for _, c in form.coeffs] + ([form.constant] if form.constant else [])
    if not form.coeffs:
        return form.constant, LinearForm.const(1)
    num_gcd = 0
    den_lcm = 1
    for c in nums:
        num_gcd = math.gcd(num_gcd, abs(c.numerator))
        den_lcm = den_lcm * c.denominator // math.gcd(den_lcm, c.denominator)
    content = Fraction(num_gcd, den_lcm)
    lead = form.coeffs[0][1]
    if lead < 0:
        content = -content
    return content, form.scale(1 / content)


@dataclass(frozen=True)
class Factored:
    """content * prod form_i^exp_i with canonical linear factors."""

    content: Fraction
    factors: tuple[tuple[LinearForm, int], ...]

    ONE: "Factored" = None  # set below

    @staticmethod
    def make(content: Fraction | int = 1,
             factors: Iterable[tuple[LinearForm, int]] = ()) -> "Factored":
        cont = Fraction(content)
        merged: dict[LinearForm, int] = {}
        for form, exp in factors:
            if exp == 0:
                continue
            mult, canon = _normalize_factor(form)
            if canon.is_constant():
                cont *= (mult * canon.constant) ** exp
                continue
            cont *= mult ** exp
            merged[canon] = merged.get(canon, 0) + exp
        items = tuple(sorted(((f, e) for f, e in merged.items() if e),
                             key=lambda it: (str(it[0]), it[1])))
        if not cont:
            return Factored(Fraction(0), ())
        return Factored(cont, items)

    def is_zero(self) -> bool:
        return not self.content

    def __mul__(self, other: "Factored") -> "Factored":
        return Factored.make(self.content * other.content,
                             self.factors + other.factors)

    def __truediv__(self, other: "Factored") -> "Factored":
        return self * other.inverse()

    def inverse(self) -> "Factored":
        if not self.content:
            raise ZeroDivisionError("inverse of zero factored expression")
        return Factored.make(1 / self.content,
                             tuple((f, -e) for f, e in self.factors))

    def pow(self, exponent: int) -> "Factored":
        if exponent == 0:
            return Factored.make(1)
        return Factored.make(self.content ** exponent,
                             tuple((f, e * exponent) for f, e in self.factors))

    def scale(self, value: Fraction | int) -> "Factored":
        return Factored.make(self.content * Fraction(value), self.factors)

    def shift(self, symbol: str, offset: Fraction | int) -> "Factored":
        return Factored.make(self.content,
                             tuple((f.shift_symbol(symbol, offset), e)
                                   for f, e in self.factors))

    def subs_params(self, values: Mapping[str, Fraction]) -> "Factored":
        return Factored.make(self.content,
                             tuple((f.subs_params(values), e) for f, e in self.factors))

    def numerator_factors(self) -> tuple[tuple[LinearForm, int], ...]:
        return tuple((f, e) for f, e in self.factors if e > 0)

    def denominator_factors(self) -> tuple[tuple[LinearForm, int], ...]:
        return tuple((f, -e) for f, e in self.factors if e < 0)

    def to_rf(self) -> RationalFunction:
        num = MultiPoly.const(self.content)
        den = MultiPoly.const(1)
        for form, exp in self.factors:
            p = form.to_poly() ** abs(exp)
            if exp > 0:
                num = num * p
            else:
                den = den * p
        # distinct canonical linear factors are pairwise coprime
        return RationalFunction.from_coprime(num, den)

    def eval_frac(self, values: Mapping[str, Fraction]) -> Fraction:
        total = self.content
        for form, exp in self.factors:
            v = form.eval_frac(values)
            if exp < 0 and not v:
                raise ZeroDivisionError(f"factor {form} vanishes")
            total *= v ** exp
        return total


Factored.ONE = Factored.make(1)


def rising_product(base: LinearForm, steps: int) -> Factored:
    """prod_{i=0}^{steps-1} (base + i), with negative steps meaning the
    reciprocal product Gamma(base+steps)/Gamma(base) for steps < 0."""
    if steps >= 0:
        return Factored.make(1, tuple((base + i, 1) for i in range(steps)))
    return Factored.make(1, tuple((base + i, -1) for i in range(steps, 0)))


# ---------------------------------------------------------------------------
# templates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PochFactor:
    """(base)_{k + shift} ** power with linear base and k-free shift."""

    base: LinearForm
    shift: LinearForm
    power: int = 1

    def __post_init__(self):
        if self.power not in (-2, -1, 1, 2):
            raise ValueError(f"unsupported factor power {self.power}")
        if self.shift.coeff("k"):
            raise ValueError("index shift must not involve k")
        for s, c in list(self.base.coeffs) + list(self.shift.coeffs):
            if c.denominator != 1:
                raise ValueError(f"non-integer coefficient {c} on {s}")

    def render(self) -> str:
        idx = "k"
        tail = str(self.shift)
        if tail != "0":
            idx = f"k+{tail}" if not tail.startswith("-") else f"k{tail}"
        body = f"poch({self.base}, {idx})"
        return body


@dataclass(frozen=True)
class HyperTemplate:
    """Input term F(n, k, a[, b]): factors, optional sign, optional prefactor."""

    id: str
    factors: tuple[PochFactor, ...]
    sign_alternating: bool = False
    prefactor: Optional[Factored] = None
    free_symbols: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.factors:
            raise ValueError("template needs at least one factor")
        used = set()
        for fac in self.factors:
            used.update(s for s, _ in fac.base.coeffs)
            used.update(s for s, _ in fac.shift.coeffs)
        if self.prefactor is not None:
            for form, _ in self.prefactor.factors:
                used.update(s for s, _ in form.coeffs)
        used.discard("k")
        free = tuple(s for s in SYMBOLS if s in used)
        object.__setattr__(self, "free_symbols", free)

    def uses(self, symbol: str) -> bool:
        return symbol in self.free_symbols

    # -- exact shift ratios -------------------------------------------------

    def ratio_factored(self, symbol: str) -> Factored:
        """F with symbol+1 over F, as a factored rational expression."""
        if symbol not in RATIO_SYMBOLS:
            raise UnknownSymbol(f"ratio direction must be one of {RATIO_SYMBOLS}")
        out = Factored.make(1)
        for fac in self.factors:
            base_step = fac.base.coeff(symbol)
            idx_step = (Fraction(1) if symbol == "k" else Fraction(0)) + fac.shift.coeff(symbol)
            if base_step.denominator != 1 or idx_step.denominator != 1:
                raise NonIntegerShift(
                    f"factor {fac.render()} shifts by {base_step + idx_step} in {symbol}")
            net = int(base_step + idx_step)
            gamma_arg = fac.base + fac.shift + LinearForm.symbol("k")
            piece = rising_product(gamma_arg, net) / rising_product(fac.base, int(base_step))
            out = out * piece.pow(fac.power)
        if self.prefactor is not None:
            out = out * (self.prefactor.shift(symbol, 1) / self.prefactor)
        if self.sign_alternating and symbol == "k":
            out = out.scale(-1)
        return out

    def render(self) -> str:
        num_parts = []
        den_parts = []
        for fac in self.factors:
            body = fac.render()
            if abs(fac.power) == 2:
                body += "^2"
            (num_parts if fac.power > 0 else den_parts).append(body)
        if self.prefactor is not None:
            for form, exp in self.prefactor.factors:
                body = f"({form})" if abs(exp) == 1 else f"({form})^{abs(exp)}"
                (num_parts if exp > 0 else den_parts).append(body)
            if self.prefactor.content != 1:
                num_parts.insert(0, f"({self.prefactor.content})")
        if self.sign_alternating:
            num_parts.insert(0, "(-1)^k")
        num = " * ".join(num_parts) if num_parts else "1"
        if not den_parts:
            return num
        den = " * ".join(den_parts)
        return f"{num} / ({den})" if len(den_parts) > 1 else f"{num} / {den}"


@dataclass(frozen=True)
class ParamAssignment:
    """Rational values for a template's free symbols."""

    values: tuple[tuple[str, Fraction], ...]

    @staticmethod
    def make(values: Mapping[str, Fraction | int | str]) -> "ParamAssignment":
        items = tuple(sorted(((s, Fraction(v)) for s, v in values.items()),
                             key=lambda it: sym_index(it[0])))
        return ParamAssignment(items)

    def as_dict(self) -> dict[str, Fraction]:
        return dict(self.values)

    def check_covers(self, template: HyperTemplate) -> None:
        have = {s for s, _ in self.values}
        missing = [s for s in template.free_symbols if s not in have]
        if missing:
            raise UnknownSymbol(f"assignment misses template symbols {missing}")


def term_ratio(t: HyperTemplate, symbol: str,
               params: ParamAssignment | None = None) -> RationalFunction:
    """Exact ratio F(..., symbol+1, ...)/F(..., symbol, ...)."""
    ratio = t.ratio_factored(symbol)
    if params is not None:
        ratio = ratio.subs_params(params.as_dict())
    return ratio.to_rf()


# ---------------------------------------------------------------------------
# series in standard bracket form
# ---------------------------------------------------------------------------

def _has_nonneg_integer_root(p: UPoly) -> bool:
    p = u_trim(p)
    if not p:
        return True
    if len(p) == 1:
        return False
    if not p[0]:
        return True  # root at 0
    _, prim = u_primitive(p)
    a0 = abs(prim[0].numerator)
    lc = abs(prim[-1].numerator)
    for q in divisors(lc):
        for pn in divisors(a0):
            cand = Fraction(pn, q)
            if cand.denominator == 1 and u_eval(prim, cand) == 0:
                return True
    return False


@dataclass(frozen=True)
class SeriesSpec:
    """Displayed series: sum_j z^j [upper; lower]_j poly_num(j)/poly_den(j)."""

    z: Fraction
    upper: tuple[Fraction, ...]
    lower: tuple[Fraction, ...]
    poly_num: UPoly
    poly_den: UPoly = (Fraction(1),)

    @staticmethod
    def make(z, upper, lower, poly_num, poly_den=(1,)) -> "SeriesSpec":
        zz = Fraction(z)
        up = tuple(sorted(Fraction(u) for u in upper))
        lo = tuple(sorted(Fraction(l) for l in lower))
        pn = u_trim([Fraction(c) for c in poly_num])
        pd = u_trim([Fraction(c) for c in poly_den])
        spec = SeriesSpec(zz, up, lo, pn, pd)
        spec.validate()
        return spec

    def validate(self) -> None:
        if len(self.upper) != len(self.lower):
            raise ValueError("bracket rows must balance")
        if not self.poly_num:
            raise ValueError("zero polynomial factor")
        if not self.poly_den:
            raise ValueError("zero polynomial denominator")
        for l in self.lower:
            if l <= 0 and l.denominator == 1:
                raise ValueError(f"lower parameter {l} is a nonpositive integer")
        if _has_nonneg_integer_root(self.poly_den):
            raise ValueError("polynomial denominator vanishes at some index")

    # -- term access ----------------------------------------------------------

    def term(self, j: int) -> Fraction:
        value = self.z ** j
        for u in self.upper:
            for i in range(j):
                value *= u + i
        for l in self.lower:
            for i in range(j):
                value /= l + i
        return value * u_eval(self.poly_num, j) / u_eval(self.poly_den, j)

    def term_ratio_uni(self) -> tuple[UPoly, UPoly]:
        """(numerator, denominator) of t_{j+1}/t_j as polynomials in j."""
        from .algebra import u_mul, u_shift_var
        num = u_trim([Fraction(self.z.numerator)])
        den = u_trim([Fraction(self.z.denominator)])
        for u in self.upper:
            num = u_mul(num, (Fraction(u), Fraction(1)))
        for l in self.lower:
            den = u_mul(den, (Fraction(l), Fraction(1)))
        num = u_mul(num, u_shift_var(self.poly_num, 1))
        den = u_mul(den, self.poly_num)
        num = u_mul(num, self.poly_den)
        den = u_mul(den, u_shift_var(self.poly_den, 1))
        return num, den

    def __str__(self) -> str:
        return render_bracket(self)


# -- classification -----------------------------------------------------------

@dataclass(frozen=True)
class Classification:
    ramanujan_type: bool
    regular: bool
    reducible_pairs: tuple[tuple[Fraction, Fraction], ...]
    bracket_size: int


def _block_partition(entries: list[Fraction], wildcard_budget: int,
                     max_block: int) -> Optional[int]:
    """Try to split entries into complete blocks {x + i/m : i=0..m-1}, using
    up to wildcard_budget extra integer entries; returns wildcards used."""
    if not entries:
        return 0
    entries = sorted(entries)
    x = entries[0]
    qden = x.denominator
    best = None
    if qden == 1:
        rest = entries[1:]
        sub = _block_partition(rest, wildcard_budget, max_block)
        if sub is not None:
            best = sub
        # an integer can also open a larger block below
    for m in range(max(2, qden), max_block + 1):
        if m % qden:
            continue
        for i in range(m):
            start = x - Fraction(i, m)
            remaining = list(entries)
            wild = 0
            ok = True
            for step in range(m):
                member = start + Fraction(step, m)
                if member in remaining:
                    remaining.remove(member)
                elif member.denominator == 1:
                    wild += 1
                else:
                    ok = False
                    break
            if not ok or wild > wildcard_budget:
                continue
            sub = _block_partition(remaining, wildcard_budget - wild, max_block)
            if sub is not None:
                total = wild + sub
                if best is None or total < best:
                    best = total
    return best


def classify(s: SeriesSpec) -> Classification:
    """Irreducibility, regularity, and reducible pairs of a bracket series."""
    reducible = []
    for u in s.upper:
        for l in s.lower:
            if (u - l).denominator == 1:
                reducible.append((u, l))
    pn = u_trim(s.poly_num)
    pd = u_trim(s.poly_den)
    ramanujan = (not reducible) and len(pn) == 2 and pd == (Fraction(1),)

    # regularity: complete Gauss-multiplication blocks upstairs, positive
    # integers downstairs, allowing up to 4 added integer entries per row
    max_block = 1
    for v in s.upper + s.lower:
        max_block = max(max_block, v.denominator)
    max_block = min(4 * max_block, 24)
    regular = False
    if all(l.denominator == 1 and l > 0 for l in s.lower):
        used = _block_partition(list(s.upper), 4, max_block)
        regular = used is not None
    return Classification(ramanujan_type=ramanujan, regular=regular,
                          reducible_pairs=tuple(reducible),
                          bracket_size=len(s.upper))


# -- rendering ------------------------------------------------------------------

def poly_to_text(p: UPoly, var: str = "j") -> str:
    p = u_trim(p)
    if not p:
        return "0"
    parts = []
    for power in range(len(p) - 1, -1, -1):
        c = p[power]
        if not c:
            continue
        if power == 0:
            body = str(c)
        else:
            v = var if power == 1 else f"{var}^{power}"
            if c == 1:
                body = v
            elif c == -1:
                body = f"-{v}"
            else:
                body = f"{c}{v}"
        parts.append(body)
    text = parts[0]
    for part in parts[1:]:
        text += part if part.startswith("-") else f"+{part}"
    return text


_POLY_TOKEN = re.compile(r"\s*(?:(?P<num>-?\d+(?:/\d+)?)|(?P<var>[A-Za-z])|"
                         r"(?P<pow>\^)|(?P<mul>\*)|(?P<plus>\+)|(?P<minus>-))")


def poly_from_text(text: str, var: str = "j") -> UPoly:
    """Parse '40j+19' / '90j^3+219j^2+165j+38' / '1' into dense coefficients."""
    coeffs: dict[int, Fraction] = {}
    pos = 0
    sign = 1
    text = text.strip()
    if text.startswith("(") and text.endswith(")"):
        text = text[1:-1]
    while pos < len(text):
        m = _POLY_TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"bad polynomial text {text!r} at {pos}")
        pos = m.end()
        if m.group("plus"):
            sign = 1
            continue
        if m.group("minus"):
            sign = -sign
            continue
        coeff = Fraction(1)
        power = 0
        if m.group("num"):
            coeff = Fraction(m.group("num"))
            m2 = _POLY_TOKEN.match(text, pos)
            if m2 and m2.group("mul"):
                pos = m2.end()
                m2 = _POLY_TOKEN.match(text, pos)
            if m2 and m2.group("var"):
                if m2.group("var") != var:
                    raise ValueError(f"unexpected variable {m2.group('var')!r}")
                pos = m2.end()
                power = 1
        elif m.group("var"):
            if m.group("var") != var:
                raise ValueError(f"unexpected variable {m.group('var')!r}")
            power = 1
        else:
            raise ValueError(f"bad polynomial text {text!r} at {pos}")
        if power == 1:
            m3 = _POLY_TOKEN.match(text, pos)
            if m3 and m3.group("pow"):
                pos = m3.end()
                m4 = _POLY_TOKEN.match(text, pos)
                if not (m4 and m4.group("num")):
                    raise ValueError("exponent expected")
                power = int(m4.group("num"))
                pos = m4.end()
        coeffs[power] = coeffs.get(power, Fraction(0)) + sign * coeff
        sign = 1
    size = max(coeffs) + 1 if coeffs else 0
    return u_trim([coeffs.get(i, Fraction(0)) for i in range(size)])


def render_bracket(s: SeriesSpec) -> str:
    """Canonical one-line display; round-trips through the catalog parser."""
    up = ",".join(str(u) for u in s.upper)
    lo = ",".join(str(l) for l in s.lower)
    text = f"z={s.z} [{up} ; {lo}] ({poly_to_text(s.poly_num)})"
    if u_trim(s.poly_den) != (Fraction(1),):
        text += f"/({poly_to_text(s.poly_den)})"
    return text


# ---------------------------------------------------------------------------
# template DSL parser
# ---------------------------------------------------------------------------

_TOKENS = re.compile(
    r"\s*(?:(?P<signk>\(-1\)\^k)|(?P<poch>poch)|(?P<lpar>\()|(?P<rpar>\))|"
    r"(?P<comma>,)|(?P<caret>\^)|(?P<star>\*)|(?P<slash>/)|(?P<plus>\+)|"
    r"(?P<minus>-)|(?P<number>\d+(?:/\d+)?)|(?P<name>[a-z]))")


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            m = _TOKENS.match(text, pos)
            if not m:
                raise TemplateSyntaxError(f"unexpected character {text[pos]!r}", pos)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.index = 0

    def peek(self, kind: str | None = None):
        if self.index >= len(self.tokens):
            return None
        tok = self.tokens[self.index]
        if kind is not None and tok[0] != kind:
            return None
        return tok

    def take(self, kind: str):
        tok = self.peek(kind)
        if tok is None:
            where = self.tokens[self.index][2] if self.index < len(self.tokens) else len(self.text)
            raise TemplateSyntaxError(f"expected {kind}", where)
        self.index += 1
        return tok

    def at_end(self) -> bool:
        return self.index >= len(self.tokens)

    # linform := ['-'] item (('+'|'-') item)*; item := [int '*'] name | rational
    def parse_linform(self) -> LinearForm:
        form = LinearForm.const(0)
        sign = 1
        first = True
        while True:
            tok = self.peek()
            if tok is None:
                break
            kind = tok[0]
            if kind == "minus":
                self.index += 1
                sign = -sign
                continue
            if kind == "plus":
                self.index += 1
                continue
            if kind == "number":
                self.index += 1
                value = Fraction(tok[1])
                nxt = self.peek()
                if nxt and nxt[0] == "star":
                    self.index += 1
                    name = self.take("name")[1]
                    form = form + LinearForm.make({name: sign * value})
                elif nxt and nxt[0] == "name":
                    self.index += 1
                    form = form + LinearForm.make({nxt[1]: sign * value})
                else:
                    form = form + sign * value
                sign = 1
            elif kind == "name":
                self.index += 1
                form = form + LinearForm.make({tok[1]: sign})
                sign = 1
            else:
                if first:
                    raise TemplateSyntaxError("empty linear form", tok[2])
                break
            first = False
            nxt = self.peek()
            if not nxt or nxt[0] not in ("plus", "minus"):
                break
        return form

    def parse_index(self) -> LinearForm:
        form = self.parse_linform()
        if form.coeff("k") != 1:
            raise TemplateSyntaxError("index must be k plus a k-free shift",
                                      self.tokens[self.index - 1][2])
        return form - LinearForm.symbol("k")

    def parse_exponent(self) -> int:
        if self.peek("caret"):
            self.index += 1
            neg = False
            if self.peek("minus"):
                self.index += 1
                neg = True
            num = self.take("number")[1]
            value = int(num)
            return -value if neg else value
        return 1

    # factor := '(-1)^k' | poch '(' linform ',' index ')' ['^' int]
    #         | '(' group ')' ['^' int]  | rational
    def parse_factor(self) -> list:
        tok = self.peek()
        if tok is None:
            raise TemplateSyntaxError("unexpected end of input", len(self.text))
        if tok[0] == "signk":
            self.index += 1
            return [("sign", 1)]
        if tok[0] == "poch":
            self.index += 1
            self.take("lpar")
            base = self.parse_linform()
            self.take("comma")
            shift = self.parse_index()
            self.take("rpar")
            power = self.parse_exponent()
            return [("poch", PochFactor(base, shift, 1), power)]
        if tok[0] == "lpar":
            self.index += 1
            saved = self.index
            # try a plain linear form in parentheses first
            try:
                form = self.parse_linform()
                if self.peek("rpar"):
                    self.index += 1
                    power = self.parse_exponent()
                    return [("lin", form, power)]
            except TemplateSyntaxError:
                pass
            self.index = saved
            atoms = self.parse_product()
            self.take("rpar")
            power = self.parse_exponent()
            if power != 1:
                atoms = [(a[0], *a[1:-1], a[-1] * power) if a[0] != "sign"
                         else a for a in atoms]
            return atoms
        if tok[0] == "number" or tok[0] == "minus":
            sign = 1
            while self.peek("minus"):
                self.index += 1
                sign = -sign
            num = self.take("number")[1]
            return [("const", sign * Fraction(num), 1)]
        raise TemplateSyntaxError(f"unexpected token {tok[1]!r}", tok[2])

    def parse_product(self) -> list:
        atoms = self.parse_factor()
        while True:
            tok = self.peek()
            if tok is None or tok[0] not in ("star", "slash"):
                break
            op = tok[0]
            self.index += 1
            more = self.parse_factor()
            if op == "slash":
                flipped = []
                for a in more:
                    if a[0] == "sign":
                        flipped.append(a)
                    else:
                        flipped.append((a[0], *a[1:-1], -a[-1]))
                more = flipped
            atoms.extend(more)
        return atoms


def parse_template(text: str, template_id: str = "anonymous") -> HyperTemplate:
    """Parse template DSL text into a HyperTemplate."""
    parser = _Parser(text)
    atoms = parser.parse_product()
    if not parser.at_end():
        tok = parser.tokens[parser.index]
        raise TemplateSyntaxError(f"trailing input {tok[1]!r}", tok[2])
    poch_map: dict[tuple[LinearForm, LinearForm], int] = {}
    prefactors: list[tuple[LinearForm, int]] = []
    content = Fraction(1)
    sign = False
    for atom in atoms:
        if atom[0] == "sign":
            sign = not sign
        elif atom[0] == "poch":
            _, fac, power = atom
            key = (fac.base, fac.shift)
            poch_map[key] = poch_map.get(key, 0) + power
        elif atom[0] == "lin":
            _, form, power = atom
            prefactors.append((form, power))
        elif atom[0] == "const":
            _, value, power = atom
            content *= Fraction(value) ** power
    factors = tuple(PochFactor(base, shift, power)
                    for (base, shift), power in poch_map.items() if power)
    prefactor = None
    if prefactors or content != 1:
        prefactor = Factored.make(content, prefactors)
    return HyperTemplate(id=template_id, factors=factors,
                         sign_alternating=sign, prefactor=prefactor)
