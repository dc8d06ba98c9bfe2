"""Minimal truncation caps, scheme plans, and the published tables.

The planner finds the smallest cap p with E(p) <= C (T-t)^exponent, checks
the distinct-case dominance hypothesis, and reproduces the published grids,
including the single recorded violation of the hypothesis.
"""

from stochtaylor import Condition, IndexPattern, check_hypothesis, minimal_order, scheme_plan
from stochtaylor.planner import reproduce_table

# Minimal caps for the triple integral under the order-1.5 condition:
cond = Condition(4)
print("triple integral caps, E <= (T-t)^4:")
for h in (0.011, 0.008, 0.0045, 0.0035):
    q = minimal_order((0, 0, 0), IndexPattern.distinct(3), cond, h)
    print(f"  T-t = {h}: q = {q}")

# A full per-scheme plan: every stochastic integral of the order-2.5 scheme.
plan = scheme_plan(2.5, 2**-2.5)
print("\norder-2.5 scheme plan at T-t = 2^-5/2:")
for weights, cap in plan.items():
    print(f"  I_({''.join(map(str, weights))}): cap {cap}")

# The dominance hypothesis: plan every pattern with the distinct-case cap.
# At the finest tabulated step it fails for exactly one case.
rep = check_hypothesis((0, 0, 0), Condition(4), 0.0025)
print(f"\nhypothesis at T-t = 0.0025: distinct q = {rep.distinct_q}, "
      f"dominated = {rep.dominated}")
for c in rep.violations:
    print(f"  violation: case {c.label} needs q = {c.q}")

# Published tables are recomputed from scratch:
print()
print(reproduce_table(23).to_markdown())
print()
print(reproduce_table(2).to_markdown())
