"""Desk-scale shuffled private SGD under different budget distributions.

Each of m clients holds an equal shard; per epoch the clients are visited in
a fresh random order, each contributing a clipped average gradient plus
Gaussian noise scaled to its own (epsilon, delta).  One epoch is one
shuffled release, so T epochs carry a sqrt(T) * mu central guarantee.

The three budget distributions share every random stream, so accuracy
differences isolate the noise levels the budgets imply.  U(0.5, 1) has the
largest budgets and wins; the constant 0.5 cohort beats U(0.01, 2) despite
its nominally stronger privacy because the latter's near-zero-epsilon
clients inject enormous noise.
"""

import numpy as np

from gspa import Cohort, NoiseSource
from gspa.data import make_blobs
from gspa.experiments import sgd_compare
from gspa.sgd import TrainConfig, train

# A single spelled-out run first.
dataset = make_blobs(1000, 400, dim=20, seed=[0, 101])
config = TrainConfig(cohort=Cohort.uniform(20, 0.5, 1e-5), epochs=10,
                     clients=20, samples=1000)
report = train(dataset, config)
print("single run (constant eps = 0.5):")
print(f"  per-epoch accuracy: {[round(a, 3) for a in report.test_accuracy]}")
print(f"  accounted mu after {config.epochs} epochs: {report.accounted_mu.mu:.4f}")
print(f"  central budget: ({report.central.epsilon:.3f}, {report.central.delta})")

noiseless = train(dataset, config, noise=NoiseSource.zero())
print(f"  noiseless reference accuracy: {noiseless.test_accuracy[-1]:.3f}")

# The three-way comparison over five shared seeds.
table = sgd_compare(("constant", "unif2", "unif3"), seeds=(0, 1, 2, 3, 4),
                    epochs=10)
finals = {}
for row in table.rows:
    r = dict(zip(table.columns, row))
    if r["epoch"] == 10:
        finals.setdefault(r["distribution"], []).append(r["test_accuracy"])

print("\nfinal accuracy, mean over 5 seeds:")
for name in ("unif3", "constant", "unif2"):
    accs = finals[name]
    print(f"  {name:8s}: {np.mean(accs):.3f} (runs: {np.round(accs, 3)})")
