"""Built-in input templates, keyed by structural names.

Each entry is DSL text for a parametrized bivariate term F(n, k, ...) whose
shift ratios in k and in the recursion directions are rational.  Parsing at
import time doubles as a round-trip exercise for the DSL.
"""

from __future__ import annotations

from .hyperterm import HyperTemplate, parse_template

_TEMPLATE_TEXT: dict[str, str] = {
    # two-term recursions in n and a; mixed lower base n+a
    "mixed_base": "poch(a, k+f) * poch(b, k+e) / (poch(n+a, k+d) * poch(n, k+c))",
    # recursion parameter rides in a lower index instead of a base
    "index_shift": "poch(a, k+f) * poch(b, k+e) / (poch(n, k+d+a) * poch(n, k+c))",
    # recursion parameter in an upper index
    "index_upper": "poch(d, k+a) * poch(b, k+e) / (poch(n+a, k+f) * poch(n, k+c))",
    # doubled base with negated index parameter; positive limit ratio
    "double_base": "poch(b, k+f) * poch(c, k+e) / (poch(2n, k-a) * poch(n, k+d))",
    # single-direction inputs
    "unary_sym": "poch(n-a, k+f) * poch(b, k+e) / (poch(n+a, k+d) * poch(2n, k+c))",
    "unary_mixed": "poch(a-n, k+f) * poch(b, k+e) / (poch(n+a, k+d) * poch(n, k+c))",
    # three-direction input
    "ternary_pair": "poch(a, k+f) * poch(b, k+e) / (poch(n+a, k+d) * poch(n+b, k+c))",
    # twin lower bases; unit-rate accelerations
    "twin_lower": "poch(a, k+f) * poch(b, k+e) / (poch(n, k+d) * poch(n, k+c))",
    # further variants with rational prefactor, mixed signs, squares
    "linear_prefactor": "poch(a+e, k+d) / (poch(n+a+f, k+c) * (n+2*k+b))",
    "index_lower": "poch(a-n, k+f) * poch(b, k+e) / (poch(n+d, k+a) * poch(n, k+c))",
    "negated_upper": "poch(-a, k+f) * poch(b, k+e) / (poch(n+a, k+d) * poch(n, k+c))",
    "twin_mixed": "poch(a, k+f) * poch(b, k+e) / (poch(n+a, k+c) * poch(n+a, k+d))",
    "squared_alternating": "(-1)^k * poch(a+e, k+c)^2 / poch(n+a+d, k+b)^2",
    "zero_index": "poch(d, k+f) * poch(b, k+e) / (poch(n+a, k) * poch(n, k+c))",
}

_PARSED: dict[str, HyperTemplate] = {}


def template_ids() -> tuple[str, ...]:
    return tuple(_TEMPLATE_TEXT)


def get_template(template_id: str) -> HyperTemplate:
    if template_id not in _TEMPLATE_TEXT:
        raise KeyError(f"unknown template {template_id!r}")
    if template_id not in _PARSED:
        _PARSED[template_id] = parse_template(_TEMPLATE_TEXT[template_id], template_id)
    return _PARSED[template_id]


def template_source(template_id: str) -> str:
    return _TEMPLATE_TEXT[template_id]
