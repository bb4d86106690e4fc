"""Double quasi-Poisson brackets on Boalch algebras of colored quivers.

The package computes double and triple brackets from generator tables,
decides the quasi-Poisson and moment-map identities exactly, checks the
coefficient conditions for the parametric family on complete graphs, and
cross-checks identities on exact rational matrix representations.
"""

__version__ = "0.1.0"
