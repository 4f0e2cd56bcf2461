"""Exact verification of Gindikin-Karpelevich data and theta-functional expansions.

Modules: ``rootsys`` (root data), ``weyl`` (Weyl group elements), ``zexpr``
(exact zeta algebra), ``parabolic`` (pairs and triples), ``gk`` (intertwining
factors and constant-term audits), ``decomp`` (identities, transitions and
expansions), ``verify`` (check suite) and ``cli``.
"""

__version__ = "0.1.0"
