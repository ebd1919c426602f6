"""spherelab: a numerical laboratory for discrete spherical averages.

Subjects covered: exact lattice shell counting, Farey interval partitions
of the circle, quadratic Gauss sums, heat-kernel multipliers and their
rational approximants, maximal norms of hermitian matrix families, and
transference of shell averages through commuting unitary automorphisms.
"""

__version__ = "0.1.0"
