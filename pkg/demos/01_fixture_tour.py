"""Tour of the two reference covariance fixtures.

A three-node covariance can pin down the total causal effect of node 0 on
node 1 under a pair-equal-variance assumption, or fail to: this script
walks one matrix of each kind, reconstructs the second one from both of
its generating models, and shows what the set-valued estimator reports.
"""
import numpy as np

from causalconf import (
    CompleteOrdering,
    LinearScm,
    PDMatrix,
    Regime,
    conditional_block,
    covariance_of,
    estimate_effects,
    invert_pd,
    true_effect,
)

np.set_printoptions(precision=6, suppress=True)

# --- an identifiable covariance --------------------------------------------

cov_unique = np.array([[1.0, 1.0, 2.0], [1.0, 2.0, 3.0], [2.0, 3.0, 5.5]])
sigma = PDMatrix(cov_unique)
print("identifiable covariance:")
print(cov_unique)
print("var(node0) =", cov_unique[0, 0])
print("var(node1 | node0) =", conditional_block(sigma, [1], [1], [0])[0, 0])
print("-> equal, so ordering 0 < 1 fits the pair-equal-variance constraint")

est = estimate_effects(invert_pd(sigma), 100, 0, 1, Regime.partial_ev(0, 1))
print("pair-equal-variance estimate of effect 0 -> 1:", est.values)
print()

# --- an ambiguous covariance ------------------------------------------------

cov_shared = np.array(
    [
        [1.00000000000000, 0.294584930358565, -0.176750958215139],
        [0.294584930358565, 1.08678028119436, 0.648086846788844],
        [-0.176750958215139, 0.648086846788844, 1.52145794696742],
    ]
)

forward = LinearScm(
    weights=np.array(
        [
            [0.0, 0.0, 0.0],
            [0.294584930358565, 0.0, 0.0],
            [-0.383006074698015, 0.700155015505460, 0.0],
        ]
    ),
    variances=np.array([1.0, 1.0, 1.0]),
    order=CompleteOrdering((0, 1, 2)),
)
reverse = LinearScm(
    weights=np.array(
        [
            [0.0, 0.456230601077430, -0.310510067542541],
            [0.0, 0.0, 0.425964350891600],
            [0.0, 0.0, 0.0],
        ]
    ),
    variances=np.array([0.810718388180567, 0.810718388180567, 1.52145794696742]),
    order=CompleteOrdering((2, 1, 0)),
)

print("ambiguous covariance: two models, the same distribution")
for name, scm in (("forward (0<1<2)", forward), ("reverse (2<1<0)", reverse)):
    err = np.abs(covariance_of(scm).entries - cov_shared).max()
    print(f"  {name}: reconstruction error {err:.2e}, "
          f"effect 0->1 = {true_effect(scm, 0, 1):.15f}")

est = estimate_effects(
    invert_pd(PDMatrix(cov_shared)), 100, 0, 1, Regime.partial_ev(0, 1)
)
print("pair-equal-variance estimate reports both candidates:", est.values)
print("(one per tied hypothesis class; direction is not identified here)")
