"""Joint minimization over path and order for L = (D y)^2 + (alpha - 0.3)^2.

The Ritz family starts from t^0.7; the search is free to move the order.
Run with ``python3 demos/joint_minimization.py``.
"""

from fracvar import run_example

rep = run_example("ex1_regularized", 1024)
print("alpha*        :", rep.alpha_star)
print("coefficients  :", rep.diagnostics["coefficients"])
print("action        :", rep.action_value)
print("at (t^0.7,0.3):", rep.diagnostics["action_at_asserted_minimizer"])
print("best path, alpha=0.3:", rep.diagnostics["action_at_alpha0_of_minimizing_path"])

# The pair (t^0.7, 0.3) is beaten already at alpha = 0.3: for alpha <= 1/2 the
# infimum of the integral of (D y)^2 under y(0) = 0, y(1) = 1 is zero and is not
# attained, so each finite basis trades path quality against the order penalty.
