"""Verification toolkit for the union-closed sets conjecture on random
bipartite graphs: exact maximal-stable-set statistics, closed-form bound
evaluation, and seeded Monte Carlo campaigns."""

__version__ = "0.1.0"
