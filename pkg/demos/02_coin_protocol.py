# The two-coin compression protocol.
#
# A preparer picks coin 1 or coin 2 (priors p1, p2), tosses it once, and the
# sender sees only the outcome sequence.  The receiver must output a sequence
# whose per-position law matches the chosen coin exactly.  Two obvious rates:
# send compressed outcomes at H(avg coin) bits/toss, or send coin names at
# H(p1, p2) bits/toss.  The three-message protocol can beat both.
#
# Run with: python3 demos/02_coin_protocol.py

from mixcomp.classical import (
    CoinSource,
    analytic_output_law,
    classical_rate_comparison,
    example9_message_distribution,
    example9_simulate,
    xi_rate,
)

print("== Nearly identical coins compress to almost nothing ==")
src = CoinSource(p1=0.5, p2=0.5, alpha1=0.24, alpha2=0.26)
dist = example9_message_distribution(src)
print("  message distribution (shared, coin-1, coin-2):", [round(x, 4) for x in dist])
report = classical_rate_comparison(src)
for entry in report.entries:
    print(f"  {entry.kind:12s} {entry.name:45s} {entry.rate:.6f} bits/toss")
print("  -> the protocol rate sits far below both classical bounds.")

print()
print("== The per-position law is exact, not just asymptotic ==")
# Receiver rules: on the shared message, emit heads with probability
# alpha1 / (1 - alpha2 + alpha1); on a coin-identity message, emit the
# deterministic outcome.  Summing the two branches reproduces each coin.
law = analytic_output_law(src)
print(f"  P(heads | coin 1) = {law[0, 0]} (coin bias {src.alpha1})")
print(f"  P(heads | coin 2) = {law[1, 0]} (coin bias {src.alpha2})")

print()
print("== Seeded simulation agrees with the analytic law ==")
sim_src = CoinSource(0.5, 0.5, 0.25, 0.75)
trace = example9_simulate(sim_src, n_tosses=200_000, seed=0)
emp = trace.empirical_heads_given_coin()
print(f"  200000 tosses, seed 0: empirical heads rates {emp[1]:.4f} / {emp[2]:.4f}")
print(f"  coin biases:                                 {sim_src.alpha1:.4f} / {sim_src.alpha2:.4f}")
print(f"  protocol rate Xi = {xi_rate(sim_src):.4f} bits/toss")

print()
print("== For some parameters the protocol is worse ==")
bad = CoinSource(0.5, 0.5, 0.1, 0.9)
rep = classical_rate_comparison(bad)
rates = {e.name: e.rate for e in rep.entries}
print(f"  alpha = (0.1, 0.9): Xi = {rates['three-message protocol Xi']:.4f}"
      f" vs H(avg coin) = {rates['S(mean state) = H(avg coin)']:.4f}"
      f" and H(priors) = {rates['H(coin priors)']:.4f}")
print("  (sweep `mixcomp classical compare --grid` to map the crossover)")
