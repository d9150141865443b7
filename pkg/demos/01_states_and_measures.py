# States, entropies, and fidelities: the basic vocabulary of the library.
#
# Run with: python3 demos/01_states_and_measures.py

import numpy as np

from mixcomp import (
    Ensemble,
    Povm,
    classical_fidelity,
    fidelity,
    holevo,
    measured_classical_fidelity,
    shannon_entropy,
    sqrt_fidelity,
    vn_entropy,
)
from mixcomp.qmat import maximally_mixed
from mixcomp.sampling import generator, random_density, random_povm

rng = generator(0)

print("== Entropy basics ==")
print("A pure state carries no entropy:  S(|0><0|) =",
      vn_entropy(np.diag([1.0, 0.0]).astype(complex)))
print("The maximally mixed qubit carries one bit:  S(I/2) =", vn_entropy(maximally_mixed(2)))
print("A biased bit:  H(3/4, 1/4) =", shannon_entropy([0.75, 0.25]))

print()
print("== Fidelity between two biased diagonal states ==")
# For the pair diag(e, 1-e) vs diag(1-e, e) the overlap has the closed form
# 4e(1-e): far apart for small e, identical at e = 1/2.
for eps in (0.05, 0.25, 0.5):
    rho1 = np.diag([eps, 1 - eps]).astype(complex)
    rho2 = np.diag([1 - eps, eps]).astype(complex)
    print(f"  eps = {eps:.2f}:  F = {fidelity(rho1, rho2):.6f}"
          f"   (closed form {4 * eps * (1 - eps):.6f})")

print()
print("== Fidelity generalises the Bhattacharyya overlap ==")
p = np.array([0.6, 0.3, 0.1])
q = np.array([0.2, 0.5, 0.3])
print("  classical overlap        :", classical_fidelity(p, q))
print("  fidelity of diag(p), diag(q):",
      fidelity(np.diag(p).astype(complex), np.diag(q).astype(complex)))

print()
print("== Measurements can only blur the distinction ==")
# Any measurement's outcome statistics are at least as hard to tell apart as
# the underlying states: measured overlap >= state fidelity, with equality for
# commuting states measured in their shared eigenbasis.
r1, r2 = random_density(2, rng), random_density(2, rng)
f = fidelity(r1, r2)
print(f"  state fidelity: {f:.6f}")
for k in (2, 3, 4):
    povm = random_povm(2, k, rng)
    print(f"  {k}-outcome random POVM overlap: "
          f"{measured_classical_fidelity(r1, r2, povm):.6f}")
print("  trivial POVM {I} overlap:",
      measured_classical_fidelity(r1, r2, Povm.from_elements([np.eye(2, dtype=complex)])))

print()
print("== The Holevo quantity of an ensemble ==")
# chi = S(mean) - mean of S: how much classical information the ensemble can
# carry, and the floor for its compression rate.
ens = Ensemble.from_lists(
    [0.5, 0.5],
    [np.diag([0.9, 0.1]).astype(complex), np.diag([0.1, 0.9]).astype(complex)],
)
print("  two overlapping coins: chi =", round(holevo(ens), 6))
orth = Ensemble.from_lists(
    [0.5, 0.5],
    [np.diag([1.0, 0.0]).astype(complex), np.diag([0.0, 1.0]).astype(complex)],
)
print("  two perfectly distinguishable states: chi =", holevo(orth),
      "(= H(1/2, 1/2))")
print("  sqrt-fidelity is doubly concave; see tests for the sampled check:",
      round(sqrt_fidelity(r1, r2), 6))
