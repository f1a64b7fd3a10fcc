"""Ordinal arithmetic, Icard polytopologies and countermodels for GLP.

Frames, valuations and countermodels cross the boundary as JSON text; the
helpers below accept and return Python objects instead.
"""

import json

from . import _core
from ._core import (  # noqa: F401
    GlpError,
    Ordinal,
    SyntaxError,
    big_l,
    derived_set,
    e,
    e_iter,
    ell,
    ell_iter,
    equal_bands,
    eval_topo,
    left_subtract,
    member,
    normalize_bands,
    ordinal,
    parse_formula,
    pounds,
)


def _text(obj):
    return obj if isinstance(obj, str) else json.dumps(obj)


def is_jtree(tree):
    return _core.is_jtree(_text(tree))


def eval_kripke(formula, tree, valuation=None):
    return _core.eval_kripke(formula, _text(tree), "" if valuation is None else _text(valuation))


def gl_embed(tree):
    theta, fmap = _core.gl_embed(_text(tree))
    return theta, json.loads(fmap)


def embed(tree, levels):
    return json.loads(_core.embed(_text(tree), list(levels)))


def verify(countermodel, formula):
    return _core.verify(_text(countermodel), formula)


def apply_map(countermodel, x):
    return _core.apply_map(_text(countermodel), x)


def search(formula, max_nodes=5, budget=50_000_000):
    found = _core.search(formula, max_nodes, budget)
    if found is None:
        return None
    return {key: json.loads(value) for key, value in found.items()}
