"""Constant-coefficient differential operators acting on polynomials.

A :class:`DiffOp` is a finite sum ``sum_k c_k D^k`` with rational ``c_k``,
where ``D`` is d/dx. Because ``D`` strictly lowers degree, every power
series in ``D`` terminates on a polynomial, so inverses such as
``(1 + a D^m)^(-N)`` are applied exactly by truncation.

The multiplicative (raising) operator ``x + A'(D)/A(D)`` carries an
x-dependence and is therefore not a DiffOp; see :func:`multiplicative_apply`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Mapping

from .polycore import Poly, as_rational, format_rational, poly_derive, poly_scale


@dataclass(frozen=True)
class QhpParams:
    """One family member: degree ``n``, order parameter ``N``, amplitude ``y``,
    derivative order ``m`` (2 for the ordinary quasi-Hermite case)."""

    n: int
    N: int
    y: Fraction = Fraction(0)
    m: int = 2

    def __post_init__(self):
        object.__setattr__(self, "y", as_rational(self.y))
        if self.n < 0:
            raise ValueError(f"degree n must be >= 0, got {self.n}")
        if self.N < 1:
            raise ValueError(f"order parameter N must be >= 1, got {self.N}")
        if self.m < 1:
            raise ValueError(f"operator order m must be >= 1, got {self.m}")


@dataclass(frozen=True, eq=False)
class DiffOp:
    """``sum_k terms[k] * D^k``; zero coefficients are never stored."""

    terms: Mapping[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for k, c in self.terms.items():
            if k < 0:
                raise ValueError("derivative order must be nonnegative")
            c = as_rational(c)
            if c != 0:
                clean[int(k)] = c
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    @classmethod
    def identity(cls) -> "DiffOp":
        return cls({0: 1})

    @classmethod
    def derivative(cls, k: int = 1) -> "DiffOp":
        return cls({k: 1})

    def __eq__(self, other):
        return isinstance(other, DiffOp) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    @property
    def order(self) -> int:
        return max(self.terms, default=-1)

    def __add__(self, other: "DiffOp") -> "DiffOp":
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + c
        return DiffOp(out)

    def __neg__(self):
        return DiffOp({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "DiffOp":
        c = as_rational(c)
        return DiffOp({k: c * v for k, v in self.terms.items()})

    def compose(self, other: "DiffOp", degree_cap: int | None = None) -> "DiffOp":
        """Product of symbols; orders above ``degree_cap`` are dropped."""
        out: dict[int, Fraction] = {}
        for i, a in self.terms.items():
            for j, b in other.terms.items():
                if degree_cap is not None and i + j > degree_cap:
                    continue
                out[i + j] = out.get(i + j, Fraction(0)) + a * b
        return DiffOp(out)

    def __matmul__(self, other: "DiffOp") -> "DiffOp":
        return self.compose(other)

    def power(self, k: int, degree_cap: int | None = None) -> "DiffOp":
        if k < 0:
            raise ValueError("use neumann_inverse_apply for negative powers")
        result = DiffOp.identity()
        for _ in range(k):
            result = result.compose(self, degree_cap)
        return result

    def truncate(self, degree_cap: int) -> "DiffOp":
        return DiffOp({k: c for k, c in self.terms.items() if k <= degree_cap})

    def __call__(self, p: Poly) -> Poly:
        return op_apply(self, p)

    def to_json(self) -> str:
        return json.dumps({str(k): format_rational(c) for k, c in self.terms.items()})

    @classmethod
    def from_json(cls, text: str) -> "DiffOp":
        return cls({int(k): Fraction(v) for k, v in json.loads(text).items()})

    def __repr__(self):
        body = ", ".join(f"{k}: {format_rational(c)}" for k, c in self.terms.items())
        return f"DiffOp({{{body}}})"


def op_apply(A: DiffOp, p: Poly) -> Poly:
    out = Poly.zero()
    for k, c in A.terms.items():
        if k > len(p.coeffs) - 1:
            continue
        out = out + poly_scale(c, poly_derive(p, k))
    return out


def binomial_power_op(m: int, y, N: int, degree_cap: int) -> DiffOp:
    """``(1 + (y/N) D^m)^N`` expanded by the binomial theorem.

    Terms of order above ``degree_cap`` are dropped; they annihilate every
    polynomial of degree <= ``degree_cap``.
    """
    if m < 1 or N < 1:
        raise ValueError("need m >= 1 and N >= 1")
    if degree_cap < 0:
        raise ValueError("degree_cap must be >= 0")
    a = as_rational(y) / N
    return DiffOp({m * r: comb(N, r) * a**r
                   for r in range(N + 1) if m * r <= degree_cap})


def negative_binomial(N: int, r: int) -> int:
    """C(-N, r) = (-1)^r C(N + r - 1, r)."""
    return (-1) ** r * comb(N + r - 1, r)


def neumann_inverse_apply(m: int, y, N: int, p: Poly) -> Poly:
    """Apply ``(1 + (y/N) D^m)^(-N)`` to ``p``.

    The generalized binomial series is cut where ``r*m`` exceeds ``deg p``.
    """
    if m < 1 or N < 1:
        raise ValueError("need m >= 1 and N >= 1")
    if p.is_zero():
        return p
    a = as_rational(y) / N
    out = Poly.zero()
    for r in range(p.degree // m + 1):
        out = out + poly_scale(negative_binomial(N, r) * a**r, poly_derive(p, m * r))
    return out


def multiplicative_apply(params: QhpParams, p: Poly) -> Poly:
    """Raising operator ``x p + m y D^(m-1) (1 + (y/N) D^m)^(-1) p``."""
    m, y, N = params.m, params.y, params.N
    inner = neumann_inverse_apply(m, y / N, 1, p)
    return Poly.x() * p + poly_scale(m * y, poly_derive(inner, m - 1))


def weyl_commutator_residual(params: QhpParams, p: Poly) -> Poly:
    """``D(M p) - M(D p) - p``; identically zero for a Weyl pair."""
    return (poly_derive(multiplicative_apply(params, p), 1)
            - multiplicative_apply(params, poly_derive(p, 1)) - p)


def heat_apply(t, m: int, p: Poly) -> Poly:
    """``exp(t D^m) p = sum_k t^k/k! D^(m k) p``."""
    if m < 1:
        raise ValueError("operator order m must be >= 1")
    t = as_rational(t)
    if t == 0 or p.is_zero():
        return p
    out = Poly.zero()
    for k in range(p.degree // m + 1):
        out = out + poly_scale(t**k / factorial(k), poly_derive(p, m * k))
    return out


def heat_op(t, m: int, degree_cap: int) -> DiffOp:
    t = as_rational(t)
    return DiffOp({m * k: t**k / factorial(k) for k in range(degree_cap // m + 1)})


def quasi_monomials(params: QhpParams, count: int) -> list[Poly]:
    """``[M^0 1, M^1 1, ..., M^(count-1) 1]`` for the raising operator of ``params``."""
    seq = [Poly.const(1)]
    while len(seq) < count:
        seq.append(multiplicative_apply(params, seq[-1]))
    return seq[:count]
