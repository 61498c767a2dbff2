"""
How normal is the standardised index?
=====================================

Repeat the estimate on many simulated samples and check the standardised
values against the standard normal. Small samples with a median line fit
worse than larger ones with a mean line.
"""

from povline import Exponential, MeanLine, QuantileLine, StudyConfig, fgt, run_normality_study

dist = Exponential(0.5)

for n, line in ((50, QuantileLine(0.5, 1.0)), (50, MeanLine(1.0)), (500, MeanLine(1.0))):
    cfg = StudyConfig(dist, n=n, reps=500, measure=fgt(1), line=line, seed=2024)
    rep = run_normality_study(cfg)
    print(f"n={n:4d} {line.label:>10}  KS p={rep.ks_p:.3f}  coverage={rep.coverage_95:.3f}")

###############################################################################
# ``jobs`` spreads replications over processes without changing the output.
cfg = StudyConfig(dist, n=200, reps=200, measure=fgt(2), line=MeanLine(1.0), seed=5)
assert run_normality_study(cfg, jobs=2).to_dict() == run_normality_study(cfg).to_dict()
