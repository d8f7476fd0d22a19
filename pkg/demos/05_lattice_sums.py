"""Number-theoretic floor sums behind the cylinder asymptotics.
===========================================================

The two-term expansions of the cylinder counting functions reduce to three
lattice estimates: a floor sum over a quarter-disk, the lattice-point count
of a disk, and a sum-of-two-squares weighted floor sum.  All three are
computed here in exact integer arithmetic.
"""

from elastic_weyl import floor_sum_checks, r2

print("sum-of-two-squares function (multiplicative fast path):")
for n in (1, 2, 3, 25, 325, 99999):
    print(f"  r2({n}) = {r2(n)}")

report = floor_sum_checks(1, [10**3, 10**4, 10**5, 10**6])
print(f"\nquarter-disk floor sum: residual -> {report.disc_target}")
for row in report.rows:
    print(f"  x={row.x:>8}: sum={row.disc_sum:>9}  residual {row.disc_residual:+.4f}")

print("\ndisk lattice count: residual stays bounded")
for row in report.rows:
    print(f"  x={row.x:>8}: sum={row.circle_sum:>9}  "
          f"residual {row.circle_residual:+.4f}")

print(f"\nweighted floor sum: residual -> {report.weighted_target:+.6f}")
for row in report.rows:
    print(f"  x={row.x:>8}: sum={row.weighted_sum:>12}  "
          f"residual {row.weighted_residual:+.4f}")
