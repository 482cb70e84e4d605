"""Integral-transform machinery evaluated by Gaussian quadrature.

All quadrature runs in ``np.longdouble`` (80-bit on x86 Linux). Rules are
built by Golub-Welsch from the Jacobi matrix of the orthogonal family,
then the nodes are Newton-polished in extended precision and the weights
are taken from the Christoffel function ``1 / sum_k p_k(x)^2`` of the
orthonormal polynomials, which keeps small weights accurate.

Conventions:

* Laguerre rules integrate against ``s^alpha exp(-s)`` on (0, inf).
* Hermite rules integrate against ``exp(-u^2)`` on the real line.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import mpmath
import numpy as np
from scipy.linalg import eigh_tridiagonal

from .diffops import neumann_inverse_apply
from .families import qhp_explicit
from .polycore import Poly, as_rational, poly_derive

LD = np.longdouble
DEFAULT_OUTER_COUNT = 64


class DomainError(ValueError):
    """Input outside the domain where a transform is defined."""


class QuadratureError(RuntimeError):
    """A rule could not be constructed to the required accuracy."""


def default_count() -> int:
    """Node count for outer Laguerre rules; ``QHP_PRECISION`` overrides it."""
    value = os.environ.get("QHP_PRECISION")
    if value is None:
        return DEFAULT_OUTER_COUNT
    count = int(value)
    if count < 1:
        raise ValueError("QHP_PRECISION must be a positive node count")
    return count


def to_ld(q) -> np.longdouble:
    """Exact rational (or int/float) to extended precision."""
    if isinstance(q, (int, Fraction)):
        q = Fraction(q)
        return LD(str(q.numerator)) / LD(str(q.denominator))
    return LD(q)


def _gamma_ld(a: float) -> np.longdouble:
    with mpmath.workdps(30):
        return LD(mpmath.nstr(mpmath.gamma(mpmath.mpf(a)), 25))


# --- quadrature rules ------------------------------------------------------

@dataclass(frozen=True, eq=False)
class QuadratureRule:
    kind: str
    alpha: float
    nodes: np.ndarray
    weights: np.ndarray

    @property
    def count(self) -> int:
        return len(self.nodes)

    @property
    def total_mass(self) -> np.longdouble:
        """Zeroth moment of the weight function."""
        if self.kind == "hermite":
            return np.sqrt(_pi_ld())
        return _gamma_ld(self.alpha + 1.0)

    def integrate(self, values: np.ndarray) -> np.longdouble:
        return np.sum(self.weights * values)


def _pi_ld() -> np.longdouble:
    with mpmath.workdps(30):
        return LD(mpmath.nstr(+mpmath.pi, 25))


def _jacobi_matrix(kind: str, alpha: float, count: int):
    k = np.arange(count, dtype=LD)
    if kind == "laguerre":
        diag = 2 * k + LD(alpha) + 1
        off = np.sqrt(k[1:] * (k[1:] + LD(alpha)))
        mass = _gamma_ld(alpha + 1.0)
    elif kind == "hermite":
        diag = np.zeros(count, dtype=LD)
        off = np.sqrt(k[1:] / 2)
        mass = np.sqrt(_pi_ld())
    else:
        raise ValueError(f"unknown rule kind {kind!r}")
    return diag, off, mass


def _orthonormal_table(x: np.ndarray, diag, off, mass, count: int):
    """Values and derivatives of p_0..p_count at ``x`` via the three-term recurrence."""
    p_prev = np.zeros_like(x)
    p_cur = np.full_like(x, 1 / np.sqrt(mass))
    d_prev = np.zeros_like(x)
    d_cur = np.zeros_like(x)
    sumsq = p_cur * p_cur
    for j in range(count):
        # b_count only rescales p_count, so 1 keeps its zeros
        b_next = off[j] if j < count - 1 else LD(1)
        b_cur = off[j - 1] if j > 0 else LD(0)
        p_next = ((x - diag[j]) * p_cur - b_cur * p_prev) / b_next
        d_next = ((x - diag[j]) * d_cur + p_cur - b_cur * d_prev) / b_next
        p_prev, p_cur = p_cur, p_next
        d_prev, d_cur = d_cur, d_next
        if j < count - 1:
            sumsq = sumsq + p_cur * p_cur
    return p_cur, d_cur, sumsq


def build_rule(kind: str, alpha: float = 0.0, count: int | None = None) -> QuadratureRule:
    """Gauss rule with ``count`` nodes for ``kind`` in {"laguerre", "hermite"}.

    ``alpha`` is the Laguerre exponent and must exceed -1; it is ignored for
    Hermite rules.
    """
    if count is None:
        count = default_count()
    if count < 1:
        raise ValueError("count must be >= 1")
    if kind == "laguerre" and not alpha > -1:
        raise ValueError(f"Laguerre exponent must exceed -1, got {alpha}")
    if kind == "hermite":
        alpha = 0.0
    diag, off, mass = _jacobi_matrix(kind, alpha, count)
    if count == 1:
        nodes = np.array([diag[0]], dtype=LD)
    else:
        try:
            guess = eigh_tridiagonal(diag.astype(float), off.astype(float), eigvals_only=True)
        except np.linalg.LinAlgError as exc:
            raise QuadratureError(f"eigenvalue solve failed: {exc}") from exc
        nodes = np.sort(guess).astype(LD)
        scale = np.maximum(1, np.abs(nodes))
        for _ in range(10):
            p, dp, _ = _orthonormal_table(nodes, diag, off, mass, count)
            step = p / dp
            nodes = nodes - step
            if np.all(np.abs(step) <= 16 * np.finfo(LD).eps * scale):
                break
        # quadratic convergence stalls at rounding level; only a large step is a failure
        if np.any(np.abs(step) > 1e-14 * scale):
            raise QuadratureError(f"Newton polish did not converge for {kind} rule, count={count}")
    _, _, sumsq = _orthonormal_table(nodes, diag, off, mass, count)
    weights = 1 / sumsq
    if kind == "hermite":
        # exact symmetry
        nodes = (nodes - nodes[::-1]) / 2
        weights = (weights + weights[::-1]) / 2
    rule = QuadratureRule(kind, float(alpha), nodes, weights)
    _validate_rule(rule, mass)
    return rule


def _validate_rule(rule: QuadratureRule, mass) -> None:
    if not np.all(np.isfinite(rule.nodes)) or not np.all(np.isfinite(rule.weights)):
        raise QuadratureError("non-finite nodes or weights")
    if np.any(rule.weights <= 0):
        raise QuadratureError("non-positive weight")
    if np.any(np.diff(rule.nodes) <= 0):
        raise QuadratureError("nodes not strictly increasing")
    if abs(np.sum(rule.weights) / mass - 1) > 1e-12:
        raise QuadratureError("weights do not reproduce the zeroth moment")


def _require_laguerre(rule: QuadratureRule, alpha: float, what: str) -> None:
    if rule.kind != "laguerre" or abs(rule.alpha - alpha) > 1e-12:
        raise ValueError(f"{what} needs a Laguerre rule with alpha={alpha}, "
                         f"got {rule.kind} alpha={rule.alpha}")


# --- inverse evolution operator by Laplace transform -----------------------

def laplace_inverse_apply(N: int, y, p: Poly, rule: QuadratureRule | None = None) -> np.ndarray:
    """``(1 + (y/N) D^2)^(-N) p`` as ``Gamma(N)^-1 int s^(N-1) e^(-s) exp(-s (y/N) D^2) p ds``.

    Returns extended-precision coefficients, lowest power first. The
    integrand is a polynomial in s of degree ``deg p // 2``, so a rule with
    at least ``deg p // 2 + 1`` nodes is exact up to rounding.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if rule is None:
        rule = build_rule("laguerre", N - 1, max(default_count(), 1))
    _require_laguerre(rule, N - 1, "laplace_inverse_apply")
    if p.is_zero():
        return np.zeros(0, dtype=LD)
    size = len(p.coeffs)
    # heat series pieces D^(2k) p / k!, each exact
    pieces = []
    for k in range(p.degree // 2 + 1):
        d = poly_derive(p, 2 * k)
        pieces.append(np.array([to_ld(d[j] / math.factorial(k)) for j in range(size)], dtype=LD))
    ratio = -to_ld(as_rational(y)) / N
    out = np.zeros(size, dtype=LD)
    for s, w in zip(rule.nodes, rule.weights):
        tau = ratio * s
        acc = np.zeros(size, dtype=LD)
        for k in range(len(pieces) - 1, -1, -1):
            acc = acc * tau + pieces[k]
        out += w * acc
    return out / _gamma_ld(float(N))


# --- registry of transformable functions ----------------------------------

@dataclass(frozen=True, eq=False)
class RegistryFunction:
    name: str
    evaluator: Callable[[np.ndarray], np.ndarray]
    tag: str
    poly: Poly | None = None

    def __call__(self, x):
        return self.evaluator(np.asarray(x, dtype=LD))


def poly_function(p: Poly, name: str | None = None) -> RegistryFunction:
    coeffs = [to_ld(c) for c in p.coeffs]

    def evaluate(x):
        acc = np.zeros_like(x, dtype=LD)
        for c in reversed(coeffs):
            acc = acc * x + c
        return acc

    return RegistryFunction(name or f"poly:{','.join(p.to_list())}", evaluate,
                            "polynomial-exact", p)


GAUSS = RegistryFunction("gauss", lambda x: np.exp(-x * x), "gaussian")
# grows too fast for any of the transforms; kept to exercise rejection
EXP_SQUARE = RegistryFunction("expsq", lambda x: np.exp(x * x), "other")

REGISTRY = {"gauss": GAUSS, "expsq": EXP_SQUARE}


def resolve_function(spec: str) -> RegistryFunction:
    """``"gauss"``, ``"expsq"`` or ``"poly:c0,c1,..."`` (rational coefficients)."""
    spec = spec.strip()
    if spec.startswith("poly:"):
        body = spec[len("poly:"):]
        items = [s for s in body.split(",") if s.strip()]
        if not items:
            raise ValueError("poly: needs at least one coefficient")
        return poly_function(Poly.from_list(items))
    if spec in REGISTRY:
        return REGISTRY[spec]
    raise ValueError(f"unknown function {spec!r}; use gauss, expsq or poly:c0,c1,...")


# --- Gauss-Weierstrass transform -------------------------------------------

def gw_transform(t, f: RegistryFunction, x0, rule: QuadratureRule | None = None):
    """``exp(t D^2) f`` at ``x0`` as a Gaussian convolution.

    With ``xi = x0 + 2 sqrt(t) u`` the kernel becomes ``exp(-u^2)/sqrt(pi)``.
    """
    t = LD(float(t)) if not isinstance(t, (int, Fraction)) else to_ld(t)
    if not t > 0:
        raise DomainError("Gauss-Weierstrass transform needs t > 0")
    if f.tag == "other":
        raise DomainError(f"{f.name} is outside the supported function class")
    if rule is None:
        count = default_count()
        if f.poly is not None:
            count = max(count, f.poly.degree // 2 + 1)
        rule = build_rule("hermite", count=count)
    if rule.kind != "hermite":
        raise ValueError("gw_transform needs a Hermite rule")
    x0 = to_ld(x0) if isinstance(x0, (int, Fraction)) else LD(x0)
    if f.tag == "gaussian":
        # the integrand is itself Gaussian in u, narrower by sqrt(1+4t) and
        # off-centre; move the rule onto it and divide out the moved weight
        a = 1 + 4 * t
        u = rule.nodes / np.sqrt(a) - 2 * np.sqrt(t) * x0 / a
        values = np.exp(rule.nodes**2 - u**2) * f(x0 + 2 * np.sqrt(t) * u) / np.sqrt(a)
    else:
        values = f(x0 + 2 * np.sqrt(t) * rule.nodes)
    return rule.integrate(values) / np.sqrt(_pi_ld())


def gw_gauss_closed_form(t, x0):
    """``exp(t D^2) exp(-x^2)`` at ``x0``."""
    t, x0 = LD(float(t)), LD(float(x0))
    return np.exp(-x0 * x0 / (1 + 4 * t)) / np.sqrt(1 + 4 * t)


# --- expansion coefficients ------------------------------------------------

@dataclass(frozen=True, eq=False)
class RealSeries:
    values: np.ndarray
    tolerance: float = 0.0
    label: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=LD)
        if not np.all(np.isfinite(arr)):
            raise ValueError("series contains NaN or infinite entries")
        object.__setattr__(self, "values", arr)

    def __len__(self):
        return len(self.values)

    def __getitem__(self, k):
        return self.values[k]

    def as_floats(self) -> list[float]:
        return [float(v) for v in self.values]


def expansion_coeffs_exact(f: Poly, y, N: int, nmax: int) -> list[Fraction]:
    """Coefficients ``a_n`` with ``f = sum_n a_n H_n(x, -|y|; N)``.

    ``(1 - (|y|/N) D^2)^(-N) f = sum_n a_n x^n``.
    """
    if f.degree > nmax:
        raise ValueError(f"deg f = {f.degree} exceeds nmax = {nmax}")
    ay = abs(as_rational(y))
    g = neumann_inverse_apply(2, -ay, N, f)
    return [g[k] for k in range(nmax + 1)]


def reconstruct(coeffs: Sequence, y, N: int) -> Poly:
    """``sum_n a_n H_n(x, -|y|; N)`` for exact coefficients."""
    ay = abs(as_rational(y))
    out = Poly.zero()
    for n, a in enumerate(coeffs):
        if a:
            out = out + as_rational(a) * qhp_explicit(n, N, -ay)
    return out


def reconstruct_float(coeffs: Sequence, y, N: int, x: np.ndarray) -> np.ndarray:
    """Evaluate ``sum_n a_n H_n(x, -|y|; N)`` for floating coefficients."""
    ay = abs(as_rational(y)) if isinstance(y, (int, Fraction, str)) else Fraction(abs(y))
    x = np.asarray(x, dtype=LD)
    total = np.zeros_like(x)
    for n, a in enumerate(coeffs):
        h = qhp_explicit(n, N, -ay)
        acc = np.zeros_like(x)
        for c in reversed(h.coeffs):
            acc = acc * x + to_ld(c)
        total = total + LD(a) * acc
    return total


def _hermite_quarter_table(u: np.ndarray, nmax: int) -> np.ndarray:
    """Rows ``H_n(u, -1/4)`` for n = 0..nmax, via ``H_(n+1) = u H_n - (n/2) H_(n-1)``."""
    table = np.zeros((nmax + 1, len(u)), dtype=LD)
    table[0] = 1
    if nmax >= 1:
        table[1] = u
    for n in range(1, nmax):
        table[n + 1] = u * table[n] - LD(n) / 2 * table[n - 1]
    return table


def expansion_coeffs_quadrature(f: RegistryFunction, y, N: int, nmax: int,
                                outer_rule: QuadratureRule | None = None,
                                inner_rule: QuadratureRule | None = None) -> RealSeries:
    """Coefficients ``a_n`` from the nested Laplace / Gauss-Weierstrass integral.

    With ``t = s |y| / N`` and ``xi = 2 sqrt(t) u``, the homogeneity
    ``H_n(u/sqrt(t), -1/(4t)) = t^(-n/2) H_n(u, -1/4)`` gives

        a_n = 1/(Gamma(N) n! sqrt(pi)) int s^(N-1) e^(-s) t^(-n/2) I_n(t) ds,
        I_n(t) = int H_n(u, -1/4) exp(-u^2) f(2 sqrt(t) u) du.

    For polynomial ``f`` the s-integrand is a polynomial, so the outer rule
    defaults to Laguerre with ``alpha = N - 1``; any other Laguerre exponent
    is accepted and compensated by the factor ``s^(N-1-alpha)``.
    For the Gaussian, ``exp(-u^2) f(2 sqrt(t) u) = exp(-(1+4t) u^2)`` and the
    inner rule is rescaled to that width.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if nmax < 0:
        raise ValueError("nmax must be >= 0")
    ay = abs(float(as_rational(y))) if isinstance(y, (int, Fraction, str)) else abs(float(y))
    if ay == 0:
        raise DomainError("expansion by quadrature needs y != 0")
    if f.tag == "other":
        raise DomainError(f"{f.name} is outside the convergent function class")
    ay_ld = to_ld(abs(as_rational(y))) if isinstance(y, (int, Fraction, str)) else LD(ay)

    if outer_rule is None:
        outer_rule = build_rule("laguerre", N - 1, default_count())
    if outer_rule.kind != "laguerre":
        raise ValueError("outer rule must be a Laguerre rule")
    if inner_rule is None:
        extra = f.poly.degree if f.poly is not None and not f.poly.is_zero() else 0
        inner_rule = build_rule("hermite", count=nmax + extra + 4)
    if inner_rule.kind != "hermite":
        raise ValueError("inner rule must be a Hermite rule")

    u, wu = inner_rule.nodes, inner_rule.weights
    orders = np.arange(nmax + 1, dtype=LD)
    acc = np.zeros(nmax + 1, dtype=LD)
    herm = None if f.tag == "gaussian" else _hermite_quarter_table(u, nmax)
    shift = LD(N - 1) - LD(outer_rule.alpha)
    for s, w in zip(outer_rule.nodes, outer_rule.weights):
        t = s * ay_ld / N
        if f.tag == "gaussian":
            scale = 1 / np.sqrt(1 + 4 * t)
            inner = _hermite_quarter_table(u * scale, nmax) @ wu * scale
        else:
            inner = herm @ (wu * f(2 * np.sqrt(t) * u))
        factor = w * (s ** shift if shift != 0 else LD(1))
        acc += factor * inner * t ** (-orders / 2)
    norm = np.array([_gamma_ld(float(N)) * LD(str(math.factorial(n))) for n in range(nmax + 1)],
                    dtype=LD) * np.sqrt(_pi_ld())
    return RealSeries(acc / norm, label=f"a_n for {f.name}",
                      meta={"y": ay, "N": N, "outer": outer_rule.count,
                            "outer_alpha": outer_rule.alpha, "inner": inner_rule.count})


# --- generalized Glaisher formula ------------------------------------------

def glaisher_F(x0, y, N: int, rule: QuadratureRule | None = None):
    """``(1 - (|y|/N) D^2)^(-N) exp(-x^2)`` at ``x0`` (scalar or array)."""
    if N < 1:
        raise ValueError("N must be >= 1")
    if rule is None:
        rule = _cached_rule("laguerre", N - 1, default_count())
    _require_laguerre(rule, N - 1, "glaisher_F")
    c = LD(abs(float(y))) / N
    x = np.asarray(x0, dtype=LD)
    denom = 1 + 4 * c * rule.nodes
    kernel = np.exp(-np.multiply.outer(x * x, 1 / denom)) / np.sqrt(denom)
    values = kernel @ rule.weights / _gamma_ld(float(N))
    return values if values.ndim else values[()]


def glaisher_limit(x0, y):
    """``exp(-x^2/(1+4y)) / sqrt(1+4y)``, the large-N value."""
    y = LD(float(y))
    if not 1 + 4 * y > 0:
        raise DomainError("glaisher_limit needs 1 + 4y > 0")
    x = np.asarray(x0, dtype=LD)
    out = np.exp(-x * x / (1 + 4 * y)) / np.sqrt(1 + 4 * y)
    return out if out.ndim else out[()]


_RULES: dict = {}


def _cached_rule(kind: str, alpha: float, count: int) -> QuadratureRule:
    key = (kind, float(alpha), count)
    if key not in _RULES:
        _RULES[key] = build_rule(kind, alpha, count)
    return _RULES[key]


@dataclass(frozen=True, eq=False)
class GlaisherTable:
    y: float
    N_list: tuple[int, ...]
    x: np.ndarray
    columns: dict
    limit: np.ndarray

    @property
    def header(self) -> list[str]:
        return ["x"] + [f"F_N{N}" for N in self.N_list] + ["F_limit"]

    def rows(self):
        for i, xv in enumerate(self.x):
            yield [float(xv)] + [float(self.columns[N][i]) for N in self.N_list] + [float(self.limit[i])]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.header)
        for row in self.rows():
            writer.writerow([f"{v:.12g}" for v in row])
        return buf.getvalue()

    def to_json(self) -> str:
        cols = {name: [] for name in self.header}
        for row in self.rows():
            for name, v in zip(self.header, row):
                cols[name].append(float(f"{v:.12g}"))
        return json.dumps({"y": self.y, "N": list(self.N_list), "columns": cols})


def figure1_table(y: float, N_list: Sequence[int], x_grid: Sequence[float]) -> GlaisherTable:
    """Sample ``F(x, y; N)`` for each N plus the limiting curve."""
    x = np.asarray(x_grid, dtype=LD)
    columns = {int(N): glaisher_F(x, y, int(N)) for N in N_list}
    return GlaisherTable(float(y), tuple(int(N) for N in N_list), x, columns,
                         glaisher_limit(x, abs(float(y))))


def parse_grid(text: str) -> np.ndarray:
    """``"lo:hi:count"`` to an evenly spaced grid including both ends."""
    try:
        lo, hi, count = text.split(":")
        lo, hi, count = float(lo), float(hi), int(count)
    except ValueError as exc:
        raise ValueError(f"grid must look like lo:hi:count, got {text!r}") from exc
    if count < 2:
        raise ValueError("grid needs at least 2 samples")
    return np.linspace(lo, hi, count)
