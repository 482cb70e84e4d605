"""Quasi-Hermite polynomials: exact operational calculus and quadrature transforms."""
from .diffops import (
    DiffOp,
    QhpParams,
    binomial_power_op,
    heat_apply,
    multiplicative_apply,
    neumann_inverse_apply,
    op_apply,
    weyl_commutator_residual,
)
from .families import (
    FamilyMember,
    build_member,
    hermite2,
    qbp,
    qhp_explicit,
    qhp_via_monomiality,
    qhp_via_operator,
    two_amp,
)
from .polycore import Poly, format_rational, poly_add, poly_derive, poly_eval, poly_mul, poly_scale, poly_shift

__version__ = "0.1.0"
