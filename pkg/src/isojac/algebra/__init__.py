"""Exact arithmetic: prime fields, quotient algebras, series, polynomials."""

from .rings import (Algebra, Element, PrimeField, ProductAlgebra, QuotientAlgebra,
                    SeriesRing, extension_field, FIELD_EXTENSION, LOCAL_SERIES, GENERIC)
from .poly import (trim, deg, poly_add, poly_sub, poly_mul, poly_neg, poly_scale,
                   poly_divmod, poly_mod, poly_exact_div, poly_eval, poly_deriv,
                   poly_monic, poly_gcd, poly_xgcd, poly_inv_mod, poly_powmod,
                   poly_resultant, poly_roots, poly_compose, poly_shift, poly_map,
                   poly_pow, poly_squarefree, is_irreducible)
from .linalg import (rref, rank, kernel, solve, solve_many, inverse, determinant,
                     mat_vec, mat_mul, echelon_solve)
from .series import (RationalFraction, hensel_root, series_sqrt, pade_reconstruct,
                     pade_fraction, series_from_poly, series_compose_poly)


def field_ops(R, op, a, b=None):
    """Dispatch a named field operation on raw values (add, mul, inv, neg, sqrt, pow)."""
    if op in ("add", "mul", "sub", "div"):
        return getattr(R, op)(a, b)
    if op in ("inv", "neg", "sqrt"):
        return getattr(R, op)(a)
    if op == "pow":
        return R.pow(a, b)
    raise ValueError("unknown operation %r" % op)


def norm_trace(R, x):
    return R.norm(x), R.trace(x)
