"""
Optimizing over theta bodies
============================

Maximize the number of kept edges over the first and second theta bodies
and compare with the brute-force optimum and with the clique LP.
"""

from kicover import (build_context, build_moment_spec, complete_graph, frac_optimize,
                     max_free, theta_optimize, wheel_hole)

instances = {
    "K4": complete_graph(4),
    "K5": complete_graph(5),
    "wheel(3,5)": wheel_hole(3, 5)[0],
}

print(f"{'graph':12s} {'exact':>6s} {'TH1':>9s} {'TH2':>9s} {'FRAC':>9s}")
for name, g in instances.items():
    ctx = build_context(g, 3)
    exact = max_free(ctx).value
    th1 = theta_optimize(build_moment_spec(ctx, 1)).value
    th2 = theta_optimize(build_moment_spec(ctx, 2)).value
    frac = frac_optimize(ctx).value
    print(f"{name:12s} {int(exact):6d} {th1:9.5f} {th2:9.5f} {frac:9.5f}")

###############################################################################
# TH1 is the unit box here because every blocker has three elements.  TH2
# already closes the gap on the odd wheel, where the clique LP does not.
