# Rate reports: bracketing the optimal compression rate of an ensemble.
#
# The true optimal qubits/signal is unknown in general; every report carries
# a guaranteed bracket [Holevo quantity, mean-state entropy] plus the rates of
# whichever concrete schemes apply to the ensemble's shape.
#
# Run with: python3 demos/05_rate_reports.py

import numpy as np

from mixcomp import (
    BlockDiagonalEnsemble,
    Ensemble,
    photographic_negative_ensemble,
    rate_report,
)
from mixcomp.qmat import maximally_mixed
from mixcomp.sampling import generator, random_density


def show(label, report):
    print(f"== {label} ==")
    for e in report.entries:
        print(f"  {e.kind:12s} {e.name:45s} {e.rate:10.6f}")
    lo, hi = report.bracket()
    print(f"  optimal rate bracket: [{lo:.6f}, {hi:.6f}]")
    print()


rng = generator(0)

# A single known state needs nothing at all: the bracket floor is zero even
# though the state itself is maximally mixed.
show("single maximally mixed qubit",
     rate_report(Ensemble.from_lists([1.0], [maximally_mixed(2)])))

# Two commuting qubit states: the coin protocol and the purification scheme
# both apply, and the purification scheme wins strictly in the interior.
eps = 0.25
pair = Ensemble.from_lists(
    [0.5, 0.5],
    [np.diag([eps, 1 - eps]).astype(complex), np.diag([1 - eps, eps]).astype(complex)],
)
show("symmetric commuting pair (eps = 0.25)", rate_report(pair))

# Block-diagonal states with a shared lower block: the receiver can rebuild
# the shared part himself, so only the upper block needs qubits.
sigma = [random_density(2, rng) for _ in range(2)]
tau = random_density(2, rng)
block = BlockDiagonalEnsemble.build(0.3, [0.5, 0.5], sigma, [tau, tau])
show("block-diagonal with shared lower block", rate_report(block.as_ensemble()))

# The hole-pattern family: the purification mixture rate appears alongside
# the bounds and visibly hugs the lower bound as d grows.
show("hole-pattern ensemble, d = 6", rate_report(photographic_negative_ensemble(6)))

# A generic random ensemble: no special structure is recognised, so the
# report degrades gracefully to the guaranteed bounds plus identity coding.
show("generic random ensemble (d = 3, 3 states)",
     rate_report(Ensemble.from_lists([0.2, 0.5, 0.3],
                                     [random_density(3, rng) for _ in range(3)])))
