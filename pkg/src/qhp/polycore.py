"""Exact rational scalars and dense univariate polynomials.

Scalars are :class:`fractions.Fraction` values. A :class:`Poly` stores its
coefficients lowest power first and is immutable; every operation returns a
new, normalized polynomial.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence, Union

Rational = Fraction
Scalar = Union[int, Fraction]

# degree of the zero polynomial
DEG_ZERO = float("-inf")


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction.

    Floats are refused: every scalar entering the exact layer must be exact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot use {type(value).__name__} as an exact rational")


def format_rational(q: Fraction) -> str:
    """Canonical text form: "p/q", or "p" when the denominator is 1."""
    q = as_rational(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(text: str) -> Fraction:
    return Fraction(text.strip())


@dataclass(frozen=True)
class Poly:
    """Dense polynomial over the rationals; ``coeffs[k]`` multiplies x**k."""

    coeffs: tuple[Fraction, ...] = ()

    def __post_init__(self):
        cs = [as_rational(c) for c in self.coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def zero(cls) -> "Poly":
        return cls(())

    @classmethod
    def const(cls, c: Scalar) -> "Poly":
        return cls((c,))

    @classmethod
    def monomial(cls, n: int, c: Scalar = 1) -> "Poly":
        if n < 0:
            raise ValueError("monomial power must be nonnegative")
        return cls((0,) * n + (c,))

    @classmethod
    def x(cls) -> "Poly":
        return cls.monomial(1)

    @property
    def degree(self):
        """Integer degree, or ``DEG_ZERO`` (minus infinity) for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else DEG_ZERO

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __getitem__(self, k: int) -> Fraction:
        if k < 0:
            raise IndexError("negative power")
        return self.coeffs[k] if k < len(self.coeffs) else Fraction(0)

    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __add__(self, other):
        return poly_add(self, _lift(other))

    __radd__ = __add__

    def __neg__(self):
        return poly_scale(-1, self)

    def __sub__(self, other):
        return poly_add(self, -_lift(other))

    def __rsub__(self, other):
        return poly_add(_lift(other), -self)

    def __mul__(self, other):
        if isinstance(other, Poly):
            return poly_mul(self, other)
        return poly_scale(as_rational(other), self)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result, base = Poly.const(1), self
        while k:
            if k & 1:
                result = poly_mul(result, base)
            base = poly_mul(base, base)
            k >>= 1
        return result

    def __call__(self, x0):
        return poly_eval(self, x0)

    def derive(self, k: int = 1) -> "Poly":
        return poly_derive(self, k)

    def shift(self, a) -> "Poly":
        return poly_shift(self, a)

    def truncate(self, max_degree: int) -> "Poly":
        """Drop every term of degree above ``max_degree``."""
        return Poly(self.coeffs[: max_degree + 1])

    def to_floats(self) -> list[float]:
        return [float(c) for c in self.coeffs]

    def to_json(self) -> str:
        return json.dumps(self.to_list())

    def to_list(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, text: str) -> "Poly":
        return cls.from_list(json.loads(text))

    @classmethod
    def from_list(cls, items: Iterable) -> "Poly":
        return cls(tuple(parse_rational(str(c)) for c in items))

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"Poly({format_poly(self)!r})"


def _lift(value) -> Poly:
    return value if isinstance(value, Poly) else Poly.const(as_rational(value))


def poly_add(a: Poly, b: Poly) -> Poly:
    n = max(len(a.coeffs), len(b.coeffs))
    return Poly(tuple(a[k] + b[k] for k in range(n)))


def poly_scale(c: Scalar, a: Poly) -> Poly:
    c = as_rational(c)
    if c == 0:
        return Poly.zero()
    return Poly(tuple(c * v for v in a.coeffs))


def poly_mul(a: Poly, b: Poly) -> Poly:
    if a.is_zero() or b.is_zero():
        return Poly.zero()
    out = [Fraction(0)] * (len(a.coeffs) + len(b.coeffs) - 1)
    for i, ai in enumerate(a.coeffs):
        if ai == 0:
            continue
        for j, bj in enumerate(b.coeffs):
            out[i + j] += ai * bj
    return Poly(tuple(out))


def falling_factorial(n: int, k: int) -> int:
    """n (n-1) ... (n-k+1); zero when k > n >= 0."""
    out = 1
    for j in range(k):
        out *= n - j
    return out


def poly_derive(p: Poly, k: int = 1) -> Poly:
    """k-fold derivative in x."""
    if k < 0:
        raise ValueError("derivative order must be nonnegative")
    if k == 0:
        return p
    return Poly(tuple(falling_factorial(j, k) * c
                      for j, c in enumerate(p.coeffs) if j >= k))


def poly_eval(p: Poly, x0) -> Fraction:
    """Horner evaluation at an exact point."""
    x0 = as_rational(x0)
    acc = Fraction(0)
    for c in reversed(p.coeffs):
        acc = acc * x0 + c
    return acc


def poly_shift(p: Poly, a) -> Poly:
    """Return q with q(x) = p(x + a), by binomial expansion."""
    a = as_rational(a)
    if a == 0 or p.is_zero():
        return p
    n = len(p.coeffs)
    apow = [Fraction(1)]
    for _ in range(n):
        apow.append(apow[-1] * a)
    out = [Fraction(0)] * n
    for j, c in enumerate(p.coeffs):
        if c == 0:
            continue
        for i in range(j + 1):
            out[i] += c * comb(j, i) * apow[j - i]
    return Poly(tuple(out))


def format_poly(p: Poly, var: str = "x") -> str:
    """Human-readable form, highest power first: ``x^4 + 12 x^2 + 6``."""
    if p.is_zero():
        return "0"
    parts: list[str] = []
    for k in range(len(p.coeffs) - 1, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        mag = -c if c < 0 else c
        if k == 0:
            body = format_rational(mag)
        else:
            mono = var if k == 1 else f"{var}^{k}"
            body = mono if mag == 1 else f"{format_rational(mag)} {mono}"
        if not parts:
            parts.append(body if sign == "+" else f"-{body}")
        else:
            parts.append(f"{sign} {body}")
    return " ".join(parts)


def random_poly(rng, max_degree: int, bound: int = 9) -> Poly:
    """Random polynomial with small rational coefficients (test helper)."""
    deg = rng.randint(0, max_degree)
    return Poly(tuple(Fraction(rng.randint(-bound, bound), rng.randint(1, 4))
                      for _ in range(deg + 1)))


def coefficient_vector(p: Poly, length: int) -> list[Fraction]:
    if len(p.coeffs) > length:
        raise ValueError("polynomial does not fit in requested length")
    return [p[k] for k in range(length)]


def from_coefficients(values: Sequence) -> Poly:
    return Poly(tuple(as_rational(v) for v in values))
