"""Spending the selection gain on a shorter sensing period.

Instead of a lower missed-detection floor, the selection gain can buy
throughput: cut the sensing budget to M' = max(ceil(M / H_Q), Q) samples and
keep roughly the switching-scheme operating curve.  This script compares the
reduced-budget selection scheme against the full-budget cooperative and
single-user benchmarks.

Note: ceil(100 / H_10) evaluates to 35; the reference analysis prints 33 for
the same expression, so both budgets are shown.

Run:  python demos/demo_reduced_sensing.py
"""

import specsense as ss

ALPHA = 0.05
Q, M = 10, 100

m_reduced = ss.reduced_samples(M, Q)
print(f"full budget M={M}, states Q={Q}, H_Q={ss.selection_gain(Q)[0]:.4f}")
print(f"reduced budget M' = max(ceil(M/H_Q), Q) = {m_reduced}")
print(f"sensing-period saving: {100 * (1 - m_reduced / M):.0f}% "
      f"(67% at the printed reference budget of 33)\n")

grid = list(range(-8, 5, 2))
schemes = {
    "noncoop M=100": ss.SchemeConfig.noncoop(100, 1.0, 1.0, alpha=ALPHA),
    "coop N=10": ss.SchemeConfig.coop(10, 1, 10, 1.0, 1.0, alpha=ALPHA),
    f"selection M'={m_reduced}": ss.SchemeConfig.selection(
        Q, m_reduced, ss.calibrate_lambda(m_reduced, ALPHA), 1.0),
    "selection M'=33": ss.SchemeConfig.selection(
        Q, 33, ss.calibrate_lambda(33, ALPHA), 1.0),
}
curves = {name: ss.sweep(cfg, grid, 20_000, seed=88, min_events=50,
                         max_trials=2 * 10 ** 6)
          for name, cfg in schemes.items()}

print("missed detection probability (Monte Carlo, 2e4+ trials/point)")
print(f"{'SNR dB':>7}" + "".join(f"{name:>18}" for name in curves))
for i, s in enumerate(grid):
    print(f"{s:>+7.0f}" + "".join(
        f"{curves[name].points[i].pmd.value:>18.4e}" for name in curves))

print("\neven at a third of the sensing budget, best-state selection stays "
      "below both full-budget benchmarks once their curves drop out of the "
      "high-miss region.")
