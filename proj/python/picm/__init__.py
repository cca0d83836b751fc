"""Exact invariant measures of the p-adic map S_p(x) = p*x mod 1.

Thin python surface over the C++ core: exact rationals, discontinuity
cycles, jump solutions, the transfer operator and its closed-form powers,
Bernoulli singular CDFs, and the three-part decomposition.
"""

try:
    from ._picm import *  # installed package layout
    from ._picm import __doc__ as _core_doc  # noqa: F401
except ImportError:  # build-tree layout: extension on PYTHONPATH next to sources
    from _picm import *  # noqa: F401,F403
