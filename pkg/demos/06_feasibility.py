"""How long would a full Bell test on photons 1 and 4 take?

At the calibrated four-fold rate (1/30 per second) only half the events
pass the phi+ identification, so collecting statistically sufficient data
for a CHSH measurement takes over a year of continuous running -- which is
why the swap is verified through the fidelity/visibility route instead.
"""

from fourphoton import RateModel, feasibility_estimate

rates = RateModel()
print(f"desired four-fold rate: {rates.fourfold_rate_desired:.4f}/s")
print(f"usable (phi+-tagged) event rate: {rates.fourfold_rate_desired * 0.5:.4f}/s")

for target in (10_000, 100_000, 600_000):
    seconds = feasibility_estimate(target, rates) / 0.5
    print(f"  {target:>8} events -> {seconds:.3g} s "
          f"({seconds / (30 * 86400):.1f} months)")

print("\nA what-if with brighter sources (10x rate):")
fast = RateModel(fourfold_rate_desired=10 * rates.fourfold_rate_desired)
seconds = feasibility_estimate(600_000, fast) / 0.5
print(f"  600000 events -> {seconds:.3g} s ({seconds / (30 * 86400):.1f} months)")
