"""Verification and numerical reduction toolkit for nonclassical symmetries of
the reaction-diffusion family u_t = u_xx + k(x) u^2 (1 - u)."""

from ._symred import (
    Expr,
    EvalError,
    NotLaurentInU,
    SyntaxError,
    catalog_export,
    catalog_ids,
    determining_system,
    differentiate,
    eval_numeric,
    expand_collect,
    is_zero,
    normalize_u_poly,
    parse,
    reduce_tau0,
    reduce_tau1,
    substitute,
    verify_catalog_json,
    verify_entry,
    __version__,
)

__all__ = [
    "Expr",
    "EvalError",
    "NotLaurentInU",
    "SyntaxError",
    "catalog_export",
    "catalog_ids",
    "determining_system",
    "differentiate",
    "eval_numeric",
    "expand_collect",
    "is_zero",
    "normalize_u_poly",
    "parse",
    "reduce_tau0",
    "reduce_tau1",
    "substitute",
    "verify_catalog_json",
    "verify_entry",
    "__version__",
]
