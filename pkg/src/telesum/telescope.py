"""Order-1 creative telescoping over the parameter field.

For a template F and a direction s, finds k-free polynomials p_plus, p_zero
and a rational certificate R with

    p_plus * F(s+1) + p_zero * F(s) = G(k+1) - G(k),      G = R * F,

by solving the associated Gosper equation with the direction coefficients as
extra unknowns.  Everything is exact: the coefficient field is the rational
functions in the inactive parameters, and the linear systems are eliminated
fraction-free.  The same core powers indefinite summation of a single
hypergeometric term and rational-ratio equivalence of two displayed series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .algebra import (
    MultiPoly,
    ONE,
    RationalFunction,
    ZERO,
    factor_linear_rational,
    poly_gcd,
    u_trim,
)
from .errors import NoOrderOneRecurrence, NotSummable, TelesumError
from .hyperterm import Factored, HyperTemplate, LinearForm, SeriesSpec

_K = MultiPoly.symbol("k")


@dataclass(frozen=True)
class Certificate:
    """Rational function R with G = R * F witnessing a telescoped identity."""

    R: RationalFunction


@dataclass(frozen=True)
class TwoTermRecurrence:
    direction: str
    p_plus: MultiPoly
    p_zero: MultiPoly
    cert: Certificate


class NotEquivalent(TelesumError):
    """No rational combination of the two series telescopes."""


class NotComparable(TelesumError):
    """Termwise ratio of the two series is not a rational function."""


# ---------------------------------------------------------------------------
# Gosper-Petkovsek style splitting of a factored ratio
# ---------------------------------------------------------------------------

def _split_k_factors(ratio: Factored):
    """Separate k-bearing monic factors from the k-free remainder."""
    k_num: list[LinearForm] = []
    k_den: list[LinearForm] = []
    free = Factored.make(ratio.content)
    for form, exp in ratio.factors:
        if form.coeff("k"):
            target = k_num if exp > 0 else k_den
            for _ in range(abs(exp)):
                target.append(form)
        else:
            free = free * Factored.make(1, ((form, exp),))
    return k_num, k_den, free


def _integer_gap(u: LinearForm, v: LinearForm) -> Optional[int]:
    """h with u == v + h when the symbol parts agree and h is an integer."""
    if u.coeffs != v.coeffs:
        return None
    gap = u.constant - v.constant
    return int(gap) if gap.denominator == 1 else None


def _gp_decompose(ratio: Factored) -> tuple[MultiPoly, MultiPoly, MultiPoly, Factored]:
    """ratio = Z * (A(k)/B(k)) * (C(k+1)/C(k)) with gcd(A(k), B(k+h)) = 1
    for every integer h >= 0 and Z free of k."""
    k_num, k_den, free = _split_k_factors(ratio)
    c_poly = ONE
    while True:
        best = None
        for i, u in enumerate(k_num):
            for j, v in enumerate(k_den):
                h = _integer_gap(u, v)
                if h is not None and h >= 0 and (best is None or h > best[0]):
                    best = (h, i, j)
        if best is None:
            break
        h, i, j = best
        v = k_den[j]
        for step in range(h):
            c_poly = c_poly * (v + step).to_poly()
        del k_num[i]
        del k_den[j]
    a_poly = ONE
    for u in k_num:
        a_poly = a_poly * u.to_poly()
    b_poly = ONE
    for v in k_den:
        b_poly = b_poly * v.to_poly()
    return a_poly, b_poly, c_poly, free


# ---------------------------------------------------------------------------
# fraction-free linear algebra
# ---------------------------------------------------------------------------

def _kernel_basis(rows: list[list[MultiPoly]], ncols: int) -> list[list[MultiPoly]]:
    """Kernel basis of a polynomial matrix, as polynomial vectors.

    One-step fraction-free Gauss-Jordan: after elimination every pivot entry
    equals the final pivot determinant and pivot columns vanish elsewhere, so
    kernel vectors read off without any field arithmetic.
    """
    mat = [row[:] for row in rows]
    pivots: list[tuple[int, int]] = []
    rank = 0
    prev = ONE
    for col in range(ncols):
        piv = None
        for i in range(rank, len(mat)):
            if not mat[i][col].is_zero():
                piv = i
                break
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        pivot_entry = mat[rank][col]
        for i in range(len(mat)):
            if i == rank:
                continue
            row_i = mat[i]
            row_p = mat[rank]
            factor = row_i[col]
            for j in range(ncols):
                if j == col:
                    continue
                num = pivot_entry * row_i[j] - factor * row_p[j]
                row_i[j] = num.exact_div(prev)
            row_i[col] = ZERO
        prev = pivot_entry
        pivots.append((rank, col))
        rank += 1
        if rank == len(mat):
            break
    delta = prev
    pivot_cols = {pc for _, pc in pivots}
    basis = []
    for fc in [c for c in range(ncols) if c not in pivot_cols]:
        vec = [ZERO] * ncols
        vec[fc] = delta
        for pr, pc in pivots:
            vec[pc] = -mat[pr][fc]
        basis.append(vec)
    return basis


def _gcd_frac(x: Fraction, y: Fraction) -> Fraction:
    return Fraction(math.gcd(x.numerator * y.denominator, y.numerator * x.denominator),
                    x.denominator * y.denominator)


def _clear_vector(vec: Sequence[MultiPoly]) -> list[MultiPoly]:
    """Divide a polynomial vector by its common polynomial and numeric content."""
    cleared = list(vec)
    content = ZERO
    for p in cleared:
        content = poly_gcd(content, p)
        if content == ONE:
            break
    if not (content.is_zero() or content == ONE):
        cleared = [p if p.is_zero() else p.exact_div(content) for p in cleared]
    num_content = Fraction(0)
    for p in cleared:
        if not p.is_zero():
            c = p.content()
            num_content = c if not num_content else _gcd_frac(num_content, c)
    if num_content and num_content != 1:
        cleared = [p.scale(1 / num_content) for p in cleared]
    return cleared


# ---------------------------------------------------------------------------
# the parameterized Gosper core
# ---------------------------------------------------------------------------

def _degree_bound(alpha: MultiPoly, beta: MultiPoly, rhs_deg: int) -> int:
    """Degree bound for x in alpha(k) x(k+1) - beta(k) x(k) = rhs(k)."""
    da, db = alpha.degree_in("k"), beta.degree_in("k")
    if da != db or alpha.coeff_of("k", da) != beta.coeff_of("k", db):
        return rhs_deg - max(da, db)
    d = da
    lc = alpha.coeff_of("k", d)
    cand = rhs_deg - d + 1
    if d >= 1:
        diff = beta.coeff_of("k", d - 1) - alpha.coeff_of("k", d - 1)
        lam = RationalFunction(diff, lc)
        if lam.is_constant():
            val = lam.constant_value()
            if val.denominator == 1 and val >= 0:
                cand = max(cand, int(val))
    return cand


def _solve_gosper_system(alpha: MultiPoly, beta: MultiPoly,
                         rhs_cols: list[MultiPoly],
                         xdeg: int) -> list[list[RationalFunction]]:
    """Kernel basis of alpha x(k+1) - beta x(k) - sum_i w_i rhs_i = 0 over the
    parameter field; unknown order (x_0..x_xdeg, w_0..)."""
    ncols = xdeg + 1 + len(rhs_cols)
    columns: list[MultiPoly] = []
    kp1 = _K + 1
    pow_k = ONE
    pow_kp1 = ONE
    for _ in range(xdeg + 1):
        columns.append(alpha * pow_kp1 - beta * pow_k)
        pow_k = pow_k * _K
        pow_kp1 = pow_kp1 * kp1
    for rhs in rhs_cols:
        columns.append(-rhs)
    max_deg = max((c.degree_in("k") for c in columns if not c.is_zero()), default=0)
    rows = [[col.coeff_of("k", i) for col in columns] for i in range(max_deg + 1)]
    return _kernel_basis(rows, ncols)


def _rf_poly_in_k(coeffs: Sequence[RationalFunction]) -> RationalFunction:
    out = RationalFunction.const(0)
    pw = RationalFunction.const(1)
    k_rf = RationalFunction(_K)
    for c in coeffs:
        if not c.is_zero():
            out = out + c * pw
        pw = pw * k_rf
    return out


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def gosper(ratio: RationalFunction | Factored) -> Certificate:
    """Indefinite-summation certificate for a hypergeometric term.

    ratio is t(k+1)/t(k); on success returns R with
    R(k+1) ratio(k) - R(k) = 1, so T = R t satisfies T(k+1) - T(k) = t(k).
    """
    fac = ratio if isinstance(ratio, Factored) else _factor_rf_in_k(ratio)
    a_poly, b_poly, c_poly, free = _gp_decompose(fac)
    zr = free.to_rf()
    alpha = zr.num * a_poly
    beta = (zr.den * b_poly).shift("k", -1)
    rhs = zr.den * c_poly
    xdeg = _degree_bound(alpha, beta, rhs.degree_in("k"))
    if xdeg < 0:
        raise NotSummable("negative degree bound")
    basis = _solve_gosper_system(alpha, beta, [rhs], xdeg)
    chosen = next((vec for vec in basis if not vec[-1].is_zero()), None)
    if chosen is None:
        raise NotSummable("no polynomial solution of the telescoping equation")
    w = chosen[-1]
    x_rf = _rf_poly_in_k([RationalFunction(v, w) for v in chosen[:-1]])
    R = RationalFunction(b_poly.shift("k", -1)) * x_rf / RationalFunction(c_poly)
    return Certificate(R=R)


def _factor_rf_in_k(rf: RationalFunction) -> Factored:
    """Factor a univariate-in-k rational function into linear k-factors."""

    def side(p: MultiPoly) -> tuple[Fraction, list[LinearForm]]:
        if p.degree_in("k") <= 0:
            if not p.is_constant():
                raise NotSummable("expected a univariate ratio in k")
            return p.constant_value(), []
        coeffs = []
        for i in range(p.degree_in("k") + 1):
            ci = p.coeff_of("k", i)
            if not ci.is_constant():
                raise NotSummable("expected a univariate ratio in k")
            coeffs.append(ci.constant_value())
        content, roots = factor_linear_rational(u_trim(coeffs))
        return content, [LinearForm.make({"k": 1}, r) for r in roots]

    cn, fn = side(rf.num)
    cd, fd = side(rf.den)
    return Factored.make(cn / cd,
                         tuple((f, 1) for f in fn) + tuple((f, -1) for f in fd))


def _factored_parts(f: Factored) -> tuple[MultiPoly, MultiPoly]:
    """Value of a Factored as a (numerator, denominator) polynomial pair."""
    rf = f.to_rf()
    return rf.num, rf.den


_ZEILBERGER_CACHE: dict[tuple[str, str], TwoTermRecurrence] = {}


def zeilberger1(t: HyperTemplate, direction: str) -> TwoTermRecurrence:
    """Order-1 telescoped recurrence of F in the given direction.

    Inactive parameters are treated as transcendentals.  Raises
    NoOrderOneRecurrence when the parameterized Gosper equation has no
    solution with nonzero coefficient pair.
    """
    key = (t.render(), direction)
    hit = _ZEILBERGER_CACHE.get(key)
    if hit is not None:
        return hit
    if not t.uses(direction):
        rec = TwoTermRecurrence(direction, ONE, -ONE,
                                Certificate(RationalFunction.const(0)))
        _ZEILBERGER_CACHE[key] = rec
        return rec

    rho_dir = t.ratio_factored(direction)
    rho_k = t.ratio_factored("k")
    s_num, s_den = _factored_parts(rho_dir)

    # u := F / s_den has ratio rho_k * s_den(k) / s_den(k+1); the factored
    # denominator differs from s_den by a constant, which the ratio ignores
    den_fac = Factored.make(1, rho_dir.denominator_factors())
    u_ratio = rho_k * den_fac / den_fac.shift("k", 1)
    a_poly, b_poly, c_poly, free = _gp_decompose(u_ratio)
    zr = free.to_rf()
    alpha = zr.num * a_poly
    beta = (zr.den * b_poly).shift("k", -1)
    rhs0 = zr.den * c_poly * s_num
    rhs1 = zr.den * c_poly * s_den
    xdeg = _degree_bound(alpha, beta, max(rhs0.degree_in("k"), rhs1.degree_in("k")))
    if xdeg < 0:
        raise NoOrderOneRecurrence(f"{t.id}/{direction}: degree bound < 0")
    basis = _solve_gosper_system(alpha, beta, [rhs0, rhs1], xdeg)
    chosen = next((v for v in basis
                   if not v[-1].is_zero() and not v[-2].is_zero()), None)
    if chosen is None:
        chosen = next((v for v in basis
                       if not v[-1].is_zero() or not v[-2].is_zero()), None)
    if chosen is None:
        raise NoOrderOneRecurrence(f"{t.id}/{direction}: no telescoped solution")
    cleared = _clear_vector(chosen)
    x_coeffs, p_plus, p_zero = cleared[:-2], cleared[-2], cleared[-1]
    if p_zero.is_zero():
        raise NoOrderOneRecurrence(f"{t.id}/{direction}: degenerate recurrence")
    dd = p_zero.degree_in(direction)
    lead = p_zero.coeff_of(direction, dd)
    _, lc = lead.leading()
    if lc < 0:
        x_coeffs = [-c for c in x_coeffs]
        p_plus, p_zero = -p_plus, -p_zero
    x_poly = ZERO
    pw = ONE
    for c in x_coeffs:
        x_poly = x_poly + c * pw
        pw = pw * _K
    # G = (b(k-1)/c) x u with u = F/s_den, so R = b(k-1) x / (c * s_den)
    R = RationalFunction(b_poly.shift("k", -1) * x_poly) \
        / RationalFunction(c_poly * s_den)
    rec = TwoTermRecurrence(direction, p_plus, p_zero, Certificate(R))
    if not verify_certificate(t, rec):
        raise NoOrderOneRecurrence(
            f"{t.id}/{direction}: candidate failed exact verification")
    _ZEILBERGER_CACHE[key] = rec
    return rec


def verify_certificate(t: HyperTemplate, rec: TwoTermRecurrence) -> bool:
    """Exact identity check p_plus rho_dir + p_zero = R(k+1) rho_k - R(k)."""
    try:
        rho = t.ratio_factored(rec.direction).to_rf()
    except TelesumError:
        return False
    kk = t.ratio_factored("k").to_rf()
    R = rec.cert.R
    rn, rd = R.num, R.den
    rn1, rd1 = rn.shift("k", 1), rd.shift("k", 1)
    lhs = (rec.p_plus * rho.num + rec.p_zero * rho.den) * (rd1 * kk.den * rd)
    rhs = (rn1 * kk.num * rd - rn * rd1 * kk.den) * rho.den
    return lhs == rhs


def recurrence_from_certificate(t: HyperTemplate, direction: str,
                                R: RationalFunction) -> Optional[TwoTermRecurrence]:
    """Recover the k-free coefficient pair belonging to a printed certificate."""
    rho_dir = t.ratio_factored(direction).to_rf()
    rho_k = t.ratio_factored("k").to_rf()
    rhs = R.shift("k", 1) * rho_k - R
    col1 = rho_dir.num * rhs.den
    col2 = rho_dir.den * rhs.den
    target = rhs.num * rho_dir.den
    max_deg = max(col1.degree_in("k"), col2.degree_in("k"), target.degree_in("k"))
    rows = [[col1.coeff_of("k", i), col2.coeff_of("k", i), -target.coeff_of("k", i)]
            for i in range(max_deg + 1)]
    for vec in _kernel_basis(rows, 3):
        if vec[2].is_zero():
            continue
        cleared = _clear_vector(vec[:2])
        scale = None
        for orig, cl in zip(vec[:2], cleared):
            if not cl.is_zero():
                scale = RationalFunction(orig, vec[2]) / RationalFunction(cl)
                break
        if scale is None:
            continue
        rec = TwoTermRecurrence(direction, cleared[0], cleared[1],
                                Certificate(R / scale))
        if verify_certificate(t, rec):
            return rec
    return None


# ---------------------------------------------------------------------------
# series equivalence by telescoping a rational combination
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class EquivalenceCertificate:
    """lam * sum(A) + mu * sum(B) = const, witnessed by R against B's term."""

    lam: Fraction
    mu: Fraction
    R: RationalFunction
    const: Fraction

    def verify(self, A: SeriesSpec, B: SeriesSpec) -> bool:
        ratio = _spec_ratio(A, B)
        if ratio is None:
            return False
        rho_b = _spec_step_ratio(B)
        lhs = ratio * self.lam + RationalFunction.const(self.mu)
        rhs = self.R.shift("k", 1) * rho_b - self.R
        return lhs == rhs


def _upoly_to_multipoly(p) -> MultiPoly:
    out = ZERO
    pw = ONE
    for c in p:
        out = out + MultiPoly.const(c) * pw
        pw = pw * _K
    return out


def _spec_step_ratio(s: SeriesSpec) -> RationalFunction:
    num, den = s.term_ratio_uni()
    return RationalFunction(_upoly_to_multipoly(num), _upoly_to_multipoly(den))


def _match_rows(row_a: Sequence[Fraction], row_b: Sequence[Fraction]
                ) -> Optional[list[tuple[Fraction, Fraction]]]:
    """Pair each entry of row_a with an entry of row_b at integer distance."""
    if len(row_a) != len(row_b):
        return None
    if not row_a:
        return []
    a0 = row_a[0]
    rest_a = list(row_a[1:])
    for i, b in enumerate(row_b):
        if (a0 - b).denominator != 1:
            continue
        sub = _match_rows(rest_a, list(row_b[:i]) + list(row_b[i + 1:]))
        if sub is not None:
            return [(a0, b)] + sub
    return None


def _spec_ratio(A: SeriesSpec, B: SeriesSpec) -> Optional[RationalFunction]:
    """A_j / B_j as a rational function of the index, or None."""
    if A.z != B.z:
        return None
    upper_pairs = _match_rows(A.upper, B.upper)
    lower_pairs = _match_rows(A.lower, B.lower)
    if upper_pairs is None or lower_pairs is None:
        return None
    ratio = Factored.make(1)
    try:
        for sign, pairs in ((1, upper_pairs), (-1, lower_pairs)):
            for va, vb in pairs:
                gap = int(va - vb)
                if gap >= 0:
                    for step in range(gap):
                        base = vb + step
                        f = LinearForm.make({"k": 1}, base)
                        piece = Factored.make(Fraction(1, 1) / base, ((f, 1),))
                        ratio = ratio * piece.pow(sign)
                else:
                    for step in range(-gap):
                        base = va + step
                        f = LinearForm.make({"k": 1}, base)
                        piece = Factored.make(base, ((f, -1),))
                        ratio = ratio * piece.pow(sign)
    except ZeroDivisionError:
        return None
    rf = ratio.to_rf()
    pa = RationalFunction(_upoly_to_multipoly(A.poly_num),
                          _upoly_to_multipoly(A.poly_den))
    pb = RationalFunction(_upoly_to_multipoly(B.poly_num),
                          _upoly_to_multipoly(B.poly_den))
    return rf * pa / pb


def series_equivalence(A: SeriesSpec, B: SeriesSpec) -> EquivalenceCertificate:
    """Certify lam*sum(A) + mu*sum(B) = const by telescoping lam*A_j + mu*B_j.

    Raises NotComparable when the termwise ratio is not rational in the
    index, NotEquivalent when no rational combination telescopes.
    """
    ratio = _spec_ratio(A, B)
    if ratio is None:
        raise NotComparable("term ratio is not a rational function of the index")
    if ratio == RationalFunction.const(1):
        zero = RationalFunction.const(0)
        return EquivalenceCertificate(Fraction(1), Fraction(-1), zero, Fraction(0))
    rho_b = _spec_step_ratio(B)
    s_num, s_den = ratio.num, ratio.den
    u_ratio_rf = rho_b * RationalFunction(s_den) / RationalFunction(s_den.shift("k", 1))
    fac = _factor_rf_in_k(u_ratio_rf)
    a_poly, b_poly, c_poly, free = _gp_decompose(fac)
    zr = free.to_rf()
    alpha = zr.num * a_poly
    beta = (zr.den * b_poly).shift("k", -1)
    rhs0 = zr.den * c_poly * s_num
    rhs1 = zr.den * c_poly * s_den
    xdeg = _degree_bound(alpha, beta, max(rhs0.degree_in("k"), rhs1.degree_in("k")))
    if xdeg < 0:
        raise NotEquivalent("degree bound < 0")
    basis = _solve_gosper_system(alpha, beta, [rhs0, rhs1], xdeg)
    chosen = next((v for v in basis
                   if not v[-1].is_zero() and not v[-2].is_zero()), None)
    if chosen is None:
        chosen = next((v for v in basis
                       if not v[-1].is_zero() or not v[-2].is_zero()), None)
    if chosen is None:
        raise NotEquivalent("no rational combination telescopes")
    scale = chosen[-2] if not chosen[-2].is_zero() else chosen[-1]
    vec = [RationalFunction(v, scale) for v in chosen]
    if not all(v.is_constant() for v in vec):
        raise NotEquivalent("combination is not constant over Q")
    lam = vec[-2].constant_value()
    mu = vec[-1].constant_value()
    x_rf = _rf_poly_in_k(vec[:-2])
    R = RationalFunction(b_poly.shift("k", -1)) * x_rf / RationalFunction(c_poly * s_den)
    b0 = B.term(0)
    r0 = R.eval_frac({"k": Fraction(0)})
    cert = EquivalenceCertificate(lam, mu, R, -(r0 * b0))
    if not cert.verify(A, B):
        raise NotEquivalent("candidate certificate failed exact verification")
    return cert
