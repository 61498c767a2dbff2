"""
Comparing two populations
=========================

Test whether two samples share the same poverty gap, then test three
indices jointly with a Wald statistic.
"""

import numpy as np

from povline import MeanLine, Sample, fgt, proportionality_test, sen, wald_test

rng = np.random.default_rng(11)
north = Sample.from_values(rng.exponential(scale=2.0, size=800))
south = Sample.from_values(rng.exponential(scale=1.7, size=600))
line = MeanLine(1.0)

###############################################################################
# One index: ``J_north = coef * J_south``.
res = proportionality_test(north, south, fgt(1), 1.0, line, line)
print(f"T = {res.statistic:.3f}, p = {res.p_value:.3f}", res.reject_at)

###############################################################################
# Three indices at once. Each population is judged against its own mean,
# so a pure change of scale leaves every index unchanged.
res = wald_test(north, south, [fgt(1), fgt(2), sen()], [1.0, 1.0, 1.0], line, line)
print(f"W = {res.statistic:.3f} on {res.df} df, p = {res.p_value:.3f}")
