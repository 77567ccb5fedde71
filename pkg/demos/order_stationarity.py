"""Order stationarity on the worked examples.

For each example we tabulate the action along a family of stationary paths
and look at the order condition. Run with ``python3 demos/order_stationarity.py``.
"""

from fracvar import run_example

n = 1024

# %% primary constraint: I[y*, alpha] = 1/(2c(1 - 2 alpha)) grows with alpha
rep = run_example("ex3_primary_constraint", n)
print("alpha   action    exact")
for r in rep.rows:
    print(f"{r['alpha']:.2f}  {r['action']:.6f}  {r['action_exact']:.6f}")

# %% constant force: the displayed path solves tD(0D y) = c, which is not the
# Euler-Lagrange equation of d^2 - c y; along the true stationary family the
# action is still increasing
rep = run_example("ex2_constant_force", n)
for c in rep.claims:
    print(f"{c.status:9s} {c.name}: {c.measured}")

# %% quadratic f: the reduced order condition stays positive
rep = run_example("ex4a_quadratic", n)
print("smallest reduced condition:", min(r["reduced_condition"] for r in rep.rows))

# %% log f: two candidate order conditions, two different roots
rep = run_example("ex4b_log", n)
for c in rep.claims:
    print(f"{c.status:9s} {c.name}: {c.measured}")
