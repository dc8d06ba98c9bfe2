"""Exact mean-square truncation errors and the factorial bound.

One permutation-block rule computes the error for every equality pattern of
the Wiener components: the kernel norm minus the truncated sum of
C_j * sum over within-block permutations of C_(permuted j).  Patterns with
pairwise-distinct components reduce to the plain Parseval defect; the
all-equal pattern with zero weights vanishes identically.
"""

from stochtaylor import IndexPattern, error_bound_kfact, exact_error

h = 0.011

print("triple integral, step 0.011, cap 12:")
for blocks, label in [
    ([(1,), (2,), (3,)], "pairwise distinct"),
    ([(1, 2), (3,)], "first two equal  "),
    ([(2, 3), (1,)], "last two equal   "),
    ([(1, 3), (2,)], "outer pair equal "),
    ([(1, 2, 3)], "all equal        "),
]:
    e = exact_error((0, 0, 0), IndexPattern(3, blocks), 12, h)
    print(f"  {label}: E/(T-t)^3 = {e.normalized:.6f}")

# The distinct case has the telescoped closed form for the zero-weight pair:
print("\npair integral closed form E = (T-t)^2 / (4(2p+1)):")
for p in (0, 2, 8):
    e = exact_error((0, 0), IndexPattern.distinct(2), p, 1.0)
    print(f"  p = {p}: exact {e.value:.8f}  closed {1 / (4 * (2 * p + 1)):.8f}")

# The factorial bound k!(I_k - sum C^2) dominates every pattern: the point
# of computing errors exactly is to avoid paying the k! factor in caps.
print("\nfactorial bound vs worst pattern error, triple integral, T-t = 1:")
for p in (0, 2, 5, 10):
    bound = error_bound_kfact((0, 0, 0), p, 1.0)
    worst = max(
        exact_error((0, 0, 0), IndexPattern(3, blocks), p, 1.0).value
        for blocks in ([(1,), (2,), (3,)], [(1, 2), (3,)], [(1, 3), (2,)],
                       [(2, 3), (1,)], [(1, 2, 3)])
    )
    print(f"  p = {p:2d}: bound {bound:.6f}  worst exact {worst:.6f}  "
          f"ratio {bound / worst:.2f}")

# Patterns are derived from component assignments directly:
pat = IndexPattern.from_indices((2, 7, 2, 7, 5))
print("\npattern of components (2,7,2,7,5):", pat)
print("within-block permutation group size:", pat.group_size())
