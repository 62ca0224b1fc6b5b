"""Topologist products of free groups: words, cardinal sequences and the
isomorphism test for reduced suspensions.

Arguments that describe models, words, sequences or groupings may be given as
dicts (the JSON formats of the command line tool) or as JSON strings. Models
may also be named as "builtin:NAME".
"""

import json

from . import _topprod
from ._topprod import NotApplicableError, TopprodError, builtin_names

__all__ = [
    "TopprodError",
    "NotApplicableError",
    "builtin_names",
    "builtin_model",
    "validate",
    "classify",
    "iso",
    "seq_equiv",
    "seq_sum",
    "seq_text",
    "regroup",
    "project",
    "eq_up_to",
    "semidecide_neq",
    "concat",
    "invert_word",
    "phi",
    "kth_root",
    "divisibility_spectrum",
    "run_cli",
]


def _arg(x):
    if isinstance(x, str):
        return x
    return json.dumps(x)


def _model(x):
    if isinstance(x, str) and not x.lstrip().startswith("{"):
        return x if x.startswith("builtin:") else "builtin:" + x
    return _arg(x)


def builtin_model(name):
    return json.loads(_topprod.builtin_model(name))


def validate(model):
    return json.loads(_topprod.validate(_model(model)))


def classify(model):
    return json.loads(_topprod.classify(_model(model)))


def iso(a, b):
    return json.loads(_topprod.iso(_model(a), _model(b)))


def seq_equiv(s, t):
    return json.loads(_topprod.seq_equiv(_arg(s), _arg(t)))


def seq_sum(s, m):
    return json.loads(_topprod.seq_sum(_arg(s), m))


def seq_text(s):
    return _topprod.seq_text(_arg(s))


def regroup(s, grouping):
    return json.loads(_topprod.regroup(_arg(s), _arg(grouping)))


def project(word, n):
    return json.loads(_topprod.project(_arg(word), n))


def eq_up_to(u, v, n=32):
    return _topprod.eq_up_to(_arg(u), _arg(v), n)


def semidecide_neq(u, v, nmax=32):
    return _topprod.semidecide_neq(_arg(u), _arg(v), nmax)


def concat(u, v):
    return json.loads(_topprod.concat(_arg(u), _arg(v)))


def invert_word(word):
    return json.loads(_topprod.invert_word(_arg(word)))


def phi(word):
    return json.loads(_topprod.phi(_arg(word)))


def kth_root(word, k):
    r = _topprod.kth_root(_arg(word), k)
    return None if r is None else json.loads(r)


def divisibility_spectrum(word, kmax):
    return list(_topprod.divisibility_spectrum(_arg(word), kmax))


def run_cli(args):
    """Runs the command line tool in-process; returns (exit code, stdout, stderr)."""
    return _topprod.run_cli([str(a) for a in args])
