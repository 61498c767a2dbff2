"""
Poverty indices at an estimated poverty line
============================================

Draw incomes, set the line at half the median, and compare a few indices
with their standard errors. The extra variance caused by estimating the
line is reported separately.
"""

import numpy as np

from povline import MeanLine, QuantileLine, Sample, fgt, j_relative, sen, watts

rng = np.random.default_rng(7)
incomes = Sample.from_values(rng.lognormal(mean=0.0, sigma=1.0, size=2000))

###############################################################################
# A relative line: 60% of the sample median.
line = QuantileLine(p=0.5, k=0.6)
print("estimated line:", round(line.estimate(incomes), 4))

for m in (fgt(0), fgt(1), fgt(2), sen(), watts()):
    r = j_relative(incomes, m, line)
    print(f"{m.label:>8}  J={r.j_hat:.4f}  se={r.std_error:.4f}  delta={r.delta_hat:+.4f}")

###############################################################################
# Tie the line to the mean instead. The sign of ``delta`` says whether
# estimating the line adds or removes variance.
r = j_relative(incomes, fgt(1), MeanLine(0.5))
print("gap at half the mean:", round(r.j_hat, 4), "+/-", round(1.96 * r.std_error, 4),
      " delta:", round(r.delta_hat, 4))
