"""Interference visibility vs arrival delay at the PBS.

Spectral filtering stretches the photons' coherence time to ~550 fs.
Delaying one photon reduces the wave-packet overlap D(tau) and with it the
(++++ vs +++-) suppression; maximum interference occurs at zero delay.
"""

import numpy as np

from fourphoton import RateModel, default_apparatus, delay_scan, diagonal_setting
from fourphoton.swap import visibility_from_counts

app = default_apparatus()
delays = list(np.linspace(-1200, 1200, 13))
points = delay_scan(
    app, diagonal_setting(app), delays, RateModel(), 24000.0, seed=6
)

print(f"{'delay (fs)':>10}{'++++':>8}{'+++-':>8}{'visibility':>14}")
for tau, table in points:
    v, err = visibility_from_counts(table.counts, ["++++"], ["+++-"])
    bar = "*" * max(int(30 * v), 0)
    print(f"{tau:>10.0f}{table.counts['++++']:>8}{table.counts['+++-']:>8}"
          f"   {v:+.3f} +- {err:.3f}  {bar}")
