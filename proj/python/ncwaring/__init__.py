"""Noncommutative rational functions, pencil realizations and Waring decompositions.

Matrices are nested lists. Exact entries may be ints, fractions.Fraction or
"p/q" strings and come back as Fraction; float entries come back as float or
complex.
"""

import json
from fractions import Fraction

from . import _core
from ._core import NcwError

__all__ = [
    "NcwError",
    "normalize",
    "evaluate",
    "realize",
    "thresholds",
    "find_witness",
    "verify_certificate",
    "decompose",
    "verify",
    "profile",
]


def _entry_out(e):
    if isinstance(e, str):
        return Fraction(e)
    if isinstance(e, list):
        return complex(e[0], e[1])
    return e


def _entry_in(e):
    if isinstance(e, Fraction):
        return str(e)
    if isinstance(e, complex):
        return [e.real, e.imag] if e.imag else e.real
    return e


def _matrix_in(m):
    rows = [[_entry_in(e) for e in row] for row in m]
    return {"n": len(rows), "entries": rows}


def _matrix_out(doc):
    return [[_entry_out(e) for e in row] for row in doc["entries"]]


def _tuple_in(ms):
    return {"m": len(ms), "matrices": [_matrix_in(m) for m in ms]}


def _tuple_out(doc):
    return [_matrix_out(m) for m in doc["matrices"]]


def normalize(expr, m=0):
    """Canonical text of a parsed expression."""
    return _core.normalize(expr, m)


def evaluate(expr, matrices, pencil=False):
    """Value of expr at the tuple `matrices`, directly or through its realization."""
    return _matrix_out(json.loads(_core.eval(expr, json.dumps(_tuple_in(matrices)), len(matrices), pencil)))


def realize(expr, m=0, commutator_inverse=False):
    doc = json.loads(_core.realize(expr, m, commutator_inverse))
    doc["A"] = [[[Fraction(e) for e in row] for row in a] for a in doc["A"]]
    doc["b"] = [Fraction(e) for e in doc["b"]]
    doc["c"] = [Fraction(e) for e in doc["c"]]
    return doc


def thresholds(delta, degree=None):
    return json.loads(_core.thresholds(delta, degree))


def find_witness(expr, n, seed=0, budget=1000, box=5, require_nonzero=True, glue=None):
    """Certificate dict; verify_certificate(expr, cert) rechecks it."""
    doc = json.loads(_core.find_witness(expr, n, seed, budget, box, require_nonzero, glue))
    doc["x"] = _tuple_out(doc["x"])
    doc["value"] = _matrix_out(doc["value"])
    doc["chi"] = [Fraction(c) for c in doc["chi"]]
    return doc


def _certificate_in(cert):
    doc = dict(cert)
    doc["x"] = _tuple_in(cert["x"])
    doc["value"] = _matrix_in(cert["value"])
    doc["chi"] = [str(Fraction(c)) for c in cert["chi"]]
    return doc


def verify_certificate(expr, cert):
    return _core.verify_certificate(expr, json.dumps(_certificate_in(cert)))


def decompose(mode, exprs, target, backend="auto", seed=0, budget=1000, box=5, tol=None, n0=2):
    """Decomposition as a dict with the raw JSON document under "document"."""
    if isinstance(exprs, str):
        exprs = [exprs]
    text = _core.decompose(mode, list(exprs), json.dumps(_matrix_in(target)), backend, seed, budget, box, tol, n0)
    doc = json.loads(text)
    return {
        "kind": doc["kind"],
        "backend": doc["backend"],
        "seed": doc["seed"],
        "residual": doc["residual"],
        "functions": doc["functions"],
        "terms": [
            {
                "coefficient": _entry_out(t["coefficient"]),
                "inverted": t["inverted"],
                "function": t["function"],
                "x": _tuple_out(t["x"]),
            }
            for t in doc["terms"]
        ],
        "document": text,
    }


def verify(decomposition, exprs=None, tol=None):
    """Replays a decomposition from decompose(); returns pass, residual and message."""
    doc = json.loads(decomposition["document"])
    if exprs is None:
        exprs = doc["functions"]
    if tol is None:
        tol = 1e-6 if doc["kind"] == "product12" else 1e-8
    return _core.verify(decomposition["document"], list(exprs), tol)


def profile(expr, n, samples=100, seed=0, box=5):
    return json.loads(_core.profile(expr, n, samples, seed, box))
