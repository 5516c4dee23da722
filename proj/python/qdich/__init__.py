"""Exact circuit-to-QAOA compilation, brute-force oracle and degree-2 sampler.

Circuits and instances are passed as JSON text or as the equivalent dicts.
"""

import json

from . import _qdich
from ._qdich import QdichError

__all__ = [
    "QdichError",
    "compile",
    "cut_width",
    "gadget",
    "instance_circuit",
    "marginal",
    "multiplicative_error",
    "oracle",
    "sample",
]


def _text(doc):
    return doc if isinstance(doc, str) else json.dumps(doc)


def gadget(f, lambda_phase=0.0):
    """Coupling W for the named unitary F ("H", "Htilde", "Tdg", "xrot:<rad>")."""
    return _qdich.gadget(f, lambda_phase)


def compile(circuit, monotone=False, iqp=False):
    """Returns (instance, report) as dicts."""
    instance, report = _qdich.compile(_text(circuit), monotone, iqp)
    return json.loads(instance), json.loads(report)


def oracle(circuit, backend="exact"):
    """Post-selected output distribution of a circuit."""
    return json.loads(_qdich.oracle(_text(circuit), backend))


def instance_circuit(instance):
    """Layered gate expansion of a QAOA instance."""
    return json.loads(_qdich.instance_circuit(_text(instance)))


def marginal(instance, subset, outcome):
    return _qdich.marginal(_text(instance), list(subset), list(outcome))


def sample(instance, seed, count):
    return _qdich.sample(_text(instance), seed, count)


def cut_width(instance):
    return _qdich.cut_width(_text(instance))


def multiplicative_error(d, d2):
    return _qdich.multiplicative_error(list(d), list(d2))
