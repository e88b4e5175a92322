"""toricgit: exact combinatorics of simplicial projective toric varieties.

Fans, Cox gradings, irrelevant ideals, GIT unstable loci and chamber
decompositions, all in exact integer/rational arithmetic.
"""

__version__ = "0.1.0"
