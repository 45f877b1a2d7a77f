#!/usr/bin/env python3
"""Sweep the two experimental knobs: bin count and detector efficiency.

Every replica index reuses one derived seed across all cells, so cells with
the same replica share the emission stream and differ only in the knob under
study. Medians across replicas are reported per cell.
"""

import bornrate as br

dist = br.validate(br.gaussian(1.0, 10.0))

cells, results = br.efficiency_sweep(
    dist,
    nbins_list=[8, 32, 128],
    efficiency_list=[1.0, 0.5, 0.1],
    emitted=100_000,
    replicas=5,
    base_seed=314,
)

print("   M      e    median alpha   median C(alpha=1)   median C(alpha=0.5)")
for cell in cells:
    print(f" {cell.nbins:4d}   {cell.efficiency:4.2f}      {cell.median_exponent:6.3f}"
          f"        {cell.median_c_min_inverse:10.2f}          {cell.median_c_min_sqrt:8.3f}")

recorded = {e: [r.recorded for r in results if r.efficiency == e and r.nbins == 8]
            for e in (1.0, 0.5, 0.1)}
print("\nrecorded events per replica (M=8 cells):")
for e, ns in recorded.items():
    print(f"  e={e}: {ns}")
print("\nlower efficiency only shrinks the recorded count; the fitted exponent")
print("stays at the i.i.d. value, and the covering constants move with N.")
