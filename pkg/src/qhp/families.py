"""Polynomial families and exact residuals of their identities.

Every family here is an Appell sequence ``A(D) x^n`` for some amplitude
``A``; the residual functions return the zero polynomial exactly when the
corresponding identity holds at the given parameters.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial, gcd
from typing import Sequence

from .diffops import (
    DiffOp,
    QhpParams,
    binomial_power_op,
    heat_apply,
    multiplicative_apply,
    op_apply,
)
from .polycore import Poly, as_rational, format_rational, poly_derive, poly_scale

X = Poly.x()

FAMILIES = ("hermite2", "lacunary", "qhp", "qbp", "qhp_m", "qhp_multivar", "qhp_two_amp")


def _check_degree(n: int) -> None:
    if n < 0:
        raise ValueError(f"degree n must be >= 0, got {n}")


def _check_order(N: int) -> None:
    if N < 1:
        raise ValueError(f"order parameter N must be >= 1, got {N}")


# --- two-variable and lacunary Hermite ------------------------------------

def hermite2(n: int, y) -> Poly:
    """``H_n(x, y) = n! sum_r x^(n-2r) y^r / ((n-2r)! r!)``."""
    _check_degree(n)
    y = as_rational(y)
    coeffs = [Fraction(0)] * (n + 1)
    for r in range(n // 2 + 1):
        coeffs[n - 2 * r] = Fraction(factorial(n), factorial(n - 2 * r) * factorial(r)) * y**r
    return Poly(tuple(coeffs))


def lacunary(n: int, y, m: int) -> Poly:
    """Higher-order Hermite ``exp(y D^m) x^n``."""
    _check_degree(n)
    return heat_apply(y, m, Poly.monomial(n))


def _truncated_exp(series: Poly, terms: int) -> Poly:
    """``exp(series)`` in the t-variable, kept below t-degree ``terms``.

    ``series`` must have zero constant term.
    """
    if series[0] != 0:
        raise ValueError("series must vanish at t = 0")
    out, power = Poly.const(1), Poly.const(1)
    for j in range(1, terms):
        power = (power * series).truncate(terms - 1)
        if power.is_zero():
            break
        out = out + poly_scale(Fraction(1, factorial(j)), power)
    return out.truncate(terms - 1)


def hermite2_genfun_residual(x0, y, t, terms: int) -> Fraction:
    """``sum_{n<terms} t^n/n! H_n(x0,y)`` minus ``exp(x0 t + y t^2)``, both cut
    below t-degree ``terms``. Zero for every rational input."""
    if terms < 1:
        raise ValueError("terms must be >= 1")
    x0, y, t = as_rational(x0), as_rational(y), as_rational(t)
    lhs = sum((t**n / factorial(n) * hermite2(n, y)(x0) for n in range(terms)), Fraction(0))
    rhs = _truncated_exp(Poly((0, x0, y)), terms)
    return lhs - rhs(t)


def qhp_genfun_residual(x0, y, N: int, t, terms: int) -> Fraction:
    """``sum_{n<terms} t^n/n! H_n(x0,y;N)`` minus ``(1 + y t^2/N)^N exp(x0 t)``,
    both cut below t-degree ``terms``."""
    if terms < 1:
        raise ValueError("terms must be >= 1")
    _check_order(N)
    x0, y, t = as_rational(x0), as_rational(y), as_rational(t)
    lhs = sum((t**n / factorial(n) * qhp_explicit(n, N, y)(x0) for n in range(terms)),
              Fraction(0))
    amplitude = Poly((1, 0, y / N)) ** N
    expo = Poly(tuple(x0**k / factorial(k) for k in range(terms)))
    rhs = (amplitude * expo).truncate(terms - 1)
    return lhs - rhs(t)


def qhp_genfun_coefficient_residual(n: int, N: int, y) -> Poly:
    """Coefficient of ``t^n`` in the generating identity, as a polynomial in x:
    ``H_n(x,y;N)/n! - sum_{2r+k=n} C(N,r) (y/N)^r x^k/k!``."""
    y = as_rational(y)
    rhs = Poly.zero()
    for r in range(min(N, n // 2) + 1):
        k = n - 2 * r
        rhs = rhs + Poly.monomial(k, comb(N, r) * (y / N) ** r / factorial(k))
    return poly_scale(Fraction(1, factorial(n)), qhp_explicit(n, N, y)) - rhs


# --- quasi-Hermite polynomials: three constructions -----------------------

def qhp_explicit(n: int, N: int, y) -> Poly:
    """Closed-form sum ``sum_r C(N,r) (y/N)^r n!/(n-2r)! x^(n-2r)``."""
    _check_degree(n)
    _check_order(N)
    a = as_rational(y) / N
    coeffs = [Fraction(0)] * (n + 1)
    for r in range(min(N, n // 2) + 1):
        coeffs[n - 2 * r] = comb(N, r) * a**r * Fraction(factorial(n), factorial(n - 2 * r))
    return Poly(tuple(coeffs))


def qhp_via_operator(n: int, N: int, y, m: int = 2) -> Poly:
    """``(1 + (y/N) D^m)^N x^n`` through the operator algebra."""
    _check_degree(n)
    _check_order(N)
    return op_apply(binomial_power_op(m, y, N, n), Poly.monomial(n))


def qhp_via_monomiality(n: int, N: int, y, m: int = 2) -> Poly:
    """n-fold raising operator applied to the constant 1."""
    params = QhpParams(n, N, y, m)
    p = Poly.const(1)
    for _ in range(n):
        p = multiplicative_apply(params, p)
    return p


def qbp(n: int, N: int, y) -> Poly:
    """Quasi-binomial ``sum_r C(N,r) (y/N)^r n!/(n-r)! x^(n-r)``."""
    _check_degree(n)
    _check_order(N)
    a = as_rational(y) / N
    coeffs = [Fraction(0)] * (n + 1)
    for r in range(min(N, n) + 1):
        coeffs[n - r] = comb(N, r) * a**r * Fraction(factorial(n), factorial(n - r))
    return Poly(tuple(coeffs))


def qhp_y_derivative(n: int, N: int, y) -> Poly:
    """Exact d/dy of :func:`qhp_explicit`, taken term by term."""
    _check_degree(n)
    _check_order(N)
    y = as_rational(y)
    coeffs = [Fraction(0)] * (n + 1)
    for r in range(1, min(N, n // 2) + 1):
        coeffs[n - 2 * r] = (r * comb(N, r) * y ** (r - 1) / Fraction(N) ** r
                             * Fraction(factorial(n), factorial(n - 2 * r)))
    return Poly(tuple(coeffs))


def qbp_y_derivative(n: int, N: int, y) -> Poly:
    """Exact d/dy of :func:`qbp`, taken term by term."""
    _check_degree(n)
    _check_order(N)
    y = as_rational(y)
    coeffs = [Fraction(0)] * (n + 1)
    for r in range(1, min(N, n) + 1):
        coeffs[n - r] = (r * comb(N, r) * y ** (r - 1) / Fraction(N) ** r
                         * Fraction(factorial(n), factorial(n - r)))
    return Poly(tuple(coeffs))


# --- recurrences and differential equations --------------------------------

def lowering_residual(n: int, N: int, y, m: int = 2) -> Poly:
    """``D H_n - n H_(n-1)``."""
    if n < 1:
        raise ValueError("lowering needs n >= 1")
    return (poly_derive(qhp_via_operator(n, N, y, m), 1)
            - n * qhp_via_operator(n - 1, N, y, m))


def raising_residual(n: int, N: int, y, m: int = 2) -> Poly:
    """``M H_n - H_(n+1)`` with the raising operator of the family."""
    H = qhp_via_operator(n, N, y, m)
    return multiplicative_apply(QhpParams(n, N, y, m), H) - qhp_via_operator(n + 1, N, y, m)


def recurrence3_residual(n: int, N: int, y) -> Poly:
    """``H_(n+1) - x H_n - 2 n y H_(n-1) - (y/N) n (n-1) (x H_(n-2) - H_(n-1))``."""
    if n < 2:
        raise ValueError("three-term recurrence needs n >= 2")
    y = as_rational(y)
    H = {k: qhp_explicit(k, N, y) for k in range(n - 2, n + 2)}
    lhs = H[n + 1] - X * H[n] - 2 * n * y * H[n - 1]
    rhs = (y / N) * n * (n - 1) * (X * H[n - 2] - H[n - 1])
    return lhs - rhs


def eigen_equation_residual(n: int, N: int, y, m: int = 2) -> Poly:
    """``(x + m y D^(m-1) (1 + (y/N) D^m)^(-1)) D H - n H`` for ``H = H_n^(m)``."""
    H = qhp_via_operator(n, N, y, m)
    return multiplicative_apply(QhpParams(n, N, y, m), poly_derive(H, 1)) - n * H


def ode3_residual(n: int, N: int, y) -> Poly:
    """``(y/N) x z''' + y (2 - (n-2)/N) z'' + x z' - n z`` on ``z = H_n(x,y;N)``."""
    y = as_rational(y)
    z = qhp_explicit(n, N, y)
    return ((y / N) * X * z.derive(3)
            + y * (2 - Fraction(n - 2, N)) * z.derive(2)
            + X * z.derive(1) - n * z)


def qbp_ode_residual(n: int, N: int, y) -> Poly:
    """``(y/N) x z'' + ((x + y) - (n-1) y/N) z' - n z`` on the quasi-binomial ``z``."""
    y = as_rational(y)
    z = qbp(n, N, y)
    return ((y / N) * X * z.derive(2)
            + (X + y - (n - 1) * y / N) * z.derive(1) - n * z)


def pde_residual(n: int, N: int, y) -> Poly:
    """``d/dy H_n - D^2 (1 + (y/N) D^2)^(N-1) x^n``.

    For N = 1 the power is the identity.
    """
    _check_order(N)
    xn = Poly.monomial(n)
    if N == 1:
        rhs = poly_derive(xn, 2)
    else:
        # keep the ratio y/N while lowering the exponent to N-1
        y_eff = as_rational(y) * (N - 1) / N
        rhs = poly_derive(op_apply(binomial_power_op(2, y_eff, N - 1, n), xn), 2)
    return qhp_y_derivative(n, N, y) - rhs


def integro_diff_residual_qbp(n: int, N: int, y) -> Poly:
    """``d/dy F - D int_0^inf exp(-s) F(x - (y/N) s, y) ds`` for the quasi-binomial F.

    The shifted polynomial is expanded in powers of s (Taylor in x) and each
    ``s^k`` is integrated with the exact moment ``k!``.
    """
    y = as_rational(y)
    F = qbp(n, N, y)
    shift = -y / N
    integral = Poly.zero()
    for k in range(n + 1):
        # coefficient of s^k in F(x + shift*s) is shift^k F^(k)(x) / k!
        s_coeff = poly_scale(shift**k / factorial(k), poly_derive(F, k))
        integral = integral + poly_scale(factorial(k), s_coeff)
    return qbp_y_derivative(n, N, y) - poly_derive(integral, 1)


# --- composition identities ------------------------------------------------

@dataclass(frozen=True)
class CompositionCheck:
    lhs: Poly
    rhs_compProp: Poly
    rhs_additive: Poly
    rhs_two_amp: Poly
    rhs_two_amp_literal: Poly

    @property
    def additive_gap(self) -> Poly:
        return self.lhs - self.rhs_additive

    def holds(self) -> bool:
        return self.lhs == self.rhs_compProp == self.rhs_two_amp


def composition_check(n: int, N: int, y, z) -> CompositionCheck:
    """Compare ``U_y U_z x^n`` with candidate closed forms.

    The product of the two symbols carries ``yz/N^2`` at D^4, while the
    two-amplitude family divides its second amplitude by N only once, so
    ``rhs_two_amp`` uses amplitudes ``(y+z, yz/N)``. ``rhs_two_amp_literal``
    uses ``(y+z, yz)``; it agrees with ``lhs`` only when N = 1 or the D^4
    term cannot act.
    """
    y, z = as_rational(y), as_rational(z)
    xn = Poly.monomial(n)
    lhs = op_apply(binomial_power_op(2, y, N, n), op_apply(binomial_power_op(2, z, N, n), xn))
    symbol = DiffOp({0: 1, 2: (y + z) / N, 4: y * z / N**2})
    comp = op_apply(symbol.power(N, degree_cap=n), xn)
    additive = qhp_via_operator(n, N, y + z)
    two = two_amp(2, 4, n, N, y + z, y * z / N, coprime=False)
    literal = two_amp(2, 4, n, N, y + z, y * z, coprime=False)
    return CompositionCheck(lhs, comp, additive, two, literal)


@dataclass(frozen=True)
class AntiCompositionCheck:
    lhs: Poly
    rhs: Poly
    rhs_symbol: Poly
    rhs_literal: Poly

    def holds(self) -> bool:
        return self.lhs == self.rhs == self.rhs_symbol


def anti_composition_check(n: int, N: int, y, m: int = 2) -> AntiCompositionCheck:
    """``U^(m)_{-y} U^(m)_{y} x^n`` against closed forms.

    The symbol product is ``(1 - (y^2/N^2) D^(2m))^N`` (``rhs_symbol``), which
    is the order-2m family at amplitude ``-y^2/N`` (``rhs``).
    ``rhs_literal`` is the order-2m family at amplitude ``-y^2``; it agrees
    with ``lhs`` only when N = 1 or D^(2m) cannot act.
    """
    y = as_rational(y)
    xn = Poly.monomial(n)
    lhs = op_apply(binomial_power_op(m, -y, N, n), op_apply(binomial_power_op(m, y, N, n), xn))
    symbol = DiffOp({0: 1, 2 * m: -y * y / N**2})
    return AntiCompositionCheck(
        lhs,
        qhp_via_operator(n, N, -y * y / N, 2 * m),
        op_apply(symbol.power(N, degree_cap=n), xn),
        qhp_via_operator(n, N, -y * y, 2 * m),
    )


# --- multivariable and two-amplitude families -----------------------------

def multivar_qhp(n: int, N: int, ys: Sequence) -> Poly:
    """``prod_s (1 + (y_s/N) D^s)^N x^n``, with ``ys[s-1]`` paired to order s."""
    _check_degree(n)
    _check_order(N)
    if not ys:
        raise ValueError("ys must be nonempty")
    p = Poly.monomial(n)
    for order, ys_val in enumerate(ys, start=1):
        p = op_apply(binomial_power_op(order, ys_val, N, n), p)
    return p


def multivar_qhp_expansion(n: int, N: int, y1, y2) -> Poly:
    """``n! sum_r C(N,r) (y1/N)^r H_(n-r)(x, y2; N)/(n-r)!``."""
    a = as_rational(y1) / N
    out = Poly.zero()
    for r in range(min(N, n) + 1):
        out = out + poly_scale(comb(N, r) * a**r * Fraction(factorial(n), factorial(n - r)),
                               qhp_explicit(n - r, N, y2))
    return out


def two_amp(q: int, p: int, n: int, N: int, y, z, *, coprime: bool = True) -> Poly:
    """``(1 + (y/N) D^q + (z/N) D^p)^N x^n`` by multinomial expansion.

    The family is defined for relatively prime ``q < p``; pass
    ``coprime=False`` to allow pairs such as (2, 4).
    """
    _check_degree(n)
    _check_order(N)
    if not 1 <= q < p:
        raise ValueError(f"need 1 <= q < p, got q={q}, p={p}")
    if coprime and gcd(q, p) != 1:
        raise ValueError(f"q={q} and p={p} are not relatively prime")
    a, b = as_rational(y) / N, as_rational(z) / N
    terms: dict[int, Fraction] = {}
    for j in range(N + 1):
        for k in range(N - j + 1):
            order = q * j + p * k
            if order > n:
                break
            c = Fraction(factorial(N), factorial(N - j - k) * factorial(j) * factorial(k))
            terms[order] = terms.get(order, Fraction(0)) + c * a**j * b**k
    return op_apply(DiffOp(terms), Poly.monomial(n))


def hermite_rescaled(n: int, y, lam) -> Poly:
    """``H_n(lam x, lam^2 y)`` as a polynomial in x."""
    lam = as_rational(lam)
    h = hermite2(n, lam * lam * as_rational(y))
    return Poly(tuple(c * lam**k for k, c in enumerate(h.coeffs)))


# --- family members --------------------------------------------------------

@dataclass(frozen=True)
class FamilyMember:
    family: str
    params: QhpParams
    value: Poly
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        params = {"n": self.params.n, "N": self.params.N,
                  "y": format_rational(self.params.y), "m": self.params.m}
        for key, val in self.extra.items():
            if isinstance(val, (list, tuple)):
                params[key] = [format_rational(as_rational(v)) for v in val]
            elif isinstance(val, Fraction):
                params[key] = format_rational(val)
            else:
                params[key] = val
        return {"family": self.family, "params": params,
                "coefficients": self.value.to_list()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @property
    def even_order(self) -> bool:
        """True when only even derivative orders enter, so parity holds."""
        if self.family in ("hermite2", "qhp"):
            return True
        if self.family in ("lacunary", "qhp_m"):
            return self.params.m % 2 == 0
        if self.family == "qhp_two_amp":
            return self.extra["q"] % 2 == 0 and self.extra["p"] % 2 == 0
        if self.family == "qhp_multivar":
            return all(as_rational(v) == 0 for i, v in enumerate(self.extra["ys"])
                       if (i + 1) % 2)
        return False


def build_member(family: str, n: int, N: int = 1, y=0, m: int = 2, *,
                 ys: Sequence | None = None, q: int | None = None,
                 p: int | None = None, z=0) -> FamilyMember:
    """Construct a :class:`FamilyMember` by family tag."""
    y = as_rational(y)
    extra: dict = {}
    if family == "hermite2":
        value, m = hermite2(n, y), 2
    elif family == "lacunary":
        value = lacunary(n, y, m)
    elif family == "qhp":
        value, m = qhp_explicit(n, N, y), 2
    elif family == "qbp":
        value, m = qbp(n, N, y), 1
    elif family == "qhp_m":
        value = qhp_via_operator(n, N, y, m)
    elif family == "qhp_multivar":
        if not ys:
            raise ValueError("qhp_multivar needs ys")
        ys = [as_rational(v) for v in ys]
        value = multivar_qhp(n, N, ys)
        extra["ys"] = ys
        y = ys[0]
    elif family == "qhp_two_amp":
        if q is None or p is None:
            raise ValueError("qhp_two_amp needs q and p")
        z = as_rational(z)
        value = two_amp(q, p, n, N, y, z)
        extra.update(q=q, p=p, z=z)
    else:
        raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    return FamilyMember(family, QhpParams(n, N, y, m), value, extra)
