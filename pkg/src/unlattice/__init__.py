"""unlattice: exact unbounded-norm convergence machinery on concrete lattices."""

__version__ = "0.1.0"
