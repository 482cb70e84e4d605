"""Grid-driven verification suites over the exact residual operations.

Each suite walks a deterministic grid of parameters and records, per case,
whether the identity held exactly. Identities in y are polynomial in y, so
the default y-grid has more points than the y-degree of any residual at
small n and N.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Sequence

from . import families as fam
from .diffops import QhpParams, weyl_commutator_residual
from .polycore import Poly, format_rational, random_poly

DEFAULT_Y_SET = (Fraction(-2), Fraction(-1, 2), Fraction(0), Fraction(1, 3),
                 Fraction(1), Fraction(5, 2))

SUITES = ("weyl", "monomiality", "recurrence", "ode3", "qbp-ode", "pde", "eigen",
          "composition", "anti-composition", "integro", "genfun")


@dataclass
class VerifyReport:
    suite: str
    cases: list = field(default_factory=list)
    counterexample: dict | None = None
    notes: list = field(default_factory=list)

    @property
    def total(self) -> int:
        return len(self.cases)

    @property
    def passed(self) -> int:
        return sum(1 for c in self.cases if c["ok"])

    @property
    def ok(self) -> bool:
        return self.passed == self.total

    def record(self, params: dict, ok: bool, payload=None) -> None:
        self.cases.append({"params": params, "ok": ok})
        if not ok and self.counterexample is None:
            self.counterexample = {"params": params, "residual": _show(payload)}

    def to_dict(self) -> dict:
        return {"suite": self.suite, "total": self.total, "passed": self.passed,
                "ok": self.ok, "counterexample": self.counterexample, "notes": self.notes}

    def summary(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        lines = [f"[{status}] {self.suite}: {self.passed}/{self.total} cases"]
        if self.counterexample:
            lines.append(f"  first counterexample: {self.counterexample}")
        lines.extend(f"  note: {n}" for n in self.notes)
        return "\n".join(lines)


def _show(payload):
    if payload is None:
        return None
    if isinstance(payload, Poly):
        return str(payload)
    if isinstance(payload, Fraction):
        return format_rational(payload)
    return str(payload)


def _p(**kw) -> dict:
    return {k: format_rational(v) if isinstance(v, Fraction) else v for k, v in kw.items()}


def _zero_case(report: VerifyReport, params: dict, residual) -> None:
    if isinstance(residual, Poly):
        report.record(params, residual.is_zero(), residual)
    else:
        report.record(params, residual == 0, residual)


def _grid(n_values: Iterable[int], N_max: int, y_set: Sequence):
    return product(n_values, range(1, N_max + 1), y_set)


def suite_weyl(n_max, N_max, y_set, orders=(1, 2, 3), seed=0, per_cell=2) -> VerifyReport:
    rep = VerifyReport("weyl")
    rng = random.Random(seed)
    for m, N, y in product(orders, range(1, N_max + 1), y_set):
        params = QhpParams(0, N, y, m)
        probes = [Poly.monomial(n_max)] + [random_poly(rng, n_max) for _ in range(per_cell)]
        for i, p in enumerate(probes):
            _zero_case(rep, _p(m=m, N=N, y=y, probe=i), weyl_commutator_residual(params, p))
    return rep


def suite_monomiality(n_max, N_max, y_set, orders=(1, 2, 3, 4)) -> VerifyReport:
    rep = VerifyReport("monomiality")
    for (n, N, y), m in product(_grid(range(n_max + 1), N_max, y_set), orders):
        via_op = fam.qhp_via_operator(n, N, y, m)
        parts = [via_op - fam.qhp_via_monomiality(n, N, y, m)]
        if m == 2:
            parts.append(via_op - fam.qhp_explicit(n, N, y))
        if n >= 1:
            parts.append(fam.lowering_residual(n, N, y, m))
        bad = next((r for r in parts if not r.is_zero()), None)
        rep.record(_p(n=n, N=N, y=y, m=m), bad is None, bad)
    return rep


def suite_recurrence(n_max, N_max, y_set) -> VerifyReport:
    rep = VerifyReport("recurrence")
    for n, N, y in _grid(range(2, n_max + 1), N_max, y_set):
        parts = (fam.lowering_residual(n, N, y), fam.raising_residual(n, N, y),
                 fam.recurrence3_residual(n, N, y))
        bad = next((r for r in parts if not r.is_zero()), None)
        rep.record(_p(n=n, N=N, y=y), bad is None, bad)
    return rep


def _simple(name: str, fn: Callable, n_start: int = 0):
    def run(n_max, N_max, y_set) -> VerifyReport:
        rep = VerifyReport(name)
        for n, N, y in _grid(range(n_start, n_max + 1), N_max, y_set):
            _zero_case(rep, _p(n=n, N=N, y=y), fn(n, N, y))
        return rep
    return run


suite_ode3 = _simple("ode3", fam.ode3_residual)
suite_qbp_ode = _simple("qbp-ode", fam.qbp_ode_residual)
suite_pde = _simple("pde", fam.pde_residual)
suite_integro = _simple("integro", fam.integro_diff_residual_qbp)


def suite_eigen(n_max, N_max, y_set, orders=(1, 2, 3, 4)) -> VerifyReport:
    rep = VerifyReport("eigen")
    for (n, N, y), m in product(_grid(range(n_max + 1), N_max, y_set), orders):
        _zero_case(rep, _p(n=n, N=N, y=y, m=m), fam.eigen_equation_residual(n, N, y, m))
    return rep


def suite_composition(n_max, N_max, y_set) -> VerifyReport:
    rep = VerifyReport("composition")
    first_gap = None
    for (n, N, y), z in product(_grid(range(n_max + 1), N_max, y_set), y_set):
        chk = fam.composition_check(n, N, y, z)
        gap = chk.additive_gap
        # additive composition must fail exactly when D^4 survives and yz != 0
        additive_as_expected = gap.is_zero() != (n >= 4 and y * z != 0)
        ok = chk.holds() and additive_as_expected
        rep.record(_p(n=n, N=N, y=y, z=z), ok,
                   chk.lhs - chk.rhs_compProp if not chk.holds() else gap)
        if first_gap is None and not gap.is_zero():
            first_gap = (n, N, y, z, gap)
    canonical = fam.composition_check(4, 1, 1, 1).additive_gap
    rep.notes.append(f"additive composition fails at n=4, N=1, y=z=1 with gap {canonical}")
    literal = fam.composition_check(4, 2, 1, 1)
    rep.notes.append("two-amplitude form with amplitudes (y+z, yz) differs from the product when "
                     f"N > 1, e.g. n=4, N=2, y=z=1: {literal.lhs - literal.rhs_two_amp_literal}")
    if first_gap is not None:
        n, N, y, z, gap = first_gap
        rep.notes.append(f"first additive gap on grid: n={n}, N={N}, y={format_rational(y)}, "
                         f"z={format_rational(z)}: {gap}")
    return rep


def suite_anti_composition(n_max, N_max, y_set, orders=(1, 2, 3)) -> VerifyReport:
    rep = VerifyReport("anti-composition")
    literal_gap = None
    for (n, N, y), m in product(_grid(range(n_max + 1), N_max, y_set), orders):
        chk = fam.anti_composition_check(n, N, y, m)
        rep.record(_p(n=n, N=N, y=y, m=m), chk.holds(), chk.lhs - chk.rhs)
        if literal_gap is None and chk.lhs != chk.rhs_literal:
            literal_gap = (n, N, y, m, chk.lhs - chk.rhs_literal)
    if literal_gap is not None:
        n, N, y, m = literal_gap[:4]
        rep.notes.append(f"order-2m family at amplitude -y^2 (not -y^2/N) differs from the product "
                         f"first at n={n}, N={N}, y={format_rational(y)}, m={m}: {literal_gap[4]}")
    return rep


def suite_genfun(n_max, N_max, y_set, t=Fraction(1, 3)) -> VerifyReport:
    rep = VerifyReport("genfun")
    terms = n_max + 1
    for x0, y in product(y_set, y_set):
        _zero_case(rep, _p(kind="hermite2", x=x0, y=y, t=t, terms=terms),
                   fam.hermite2_genfun_residual(x0, y, t, terms))
    for n, N, y in _grid(range(n_max + 1), N_max, y_set):
        _zero_case(rep, _p(kind="qhp", n=n, N=N, y=y),
                   fam.qhp_genfun_coefficient_residual(n, N, y))
    return rep


RUNNERS = {
    "weyl": suite_weyl,
    "monomiality": suite_monomiality,
    "recurrence": suite_recurrence,
    "ode3": suite_ode3,
    "qbp-ode": suite_qbp_ode,
    "pde": suite_pde,
    "eigen": suite_eigen,
    "composition": suite_composition,
    "anti-composition": suite_anti_composition,
    "integro": suite_integro,
    "genfun": suite_genfun,
}


def run_suite(name: str, n_max: int = 8, N_max: int = 4,
              y_set: Sequence = DEFAULT_Y_SET) -> list[VerifyReport]:
    """Run one suite, or every suite for ``name == "all"``."""
    if name == "all":
        return [RUNNERS[s](n_max, N_max, y_set) for s in SUITES]
    if name not in RUNNERS:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    return [RUNNERS[name](n_max, N_max, y_set)]
