"""Scaled-down parameter sweeps reproducing the headline trends: accuracy
improves with blocker size and with more cooperators, and degrades with
blocker speed.  A few repetitions per point keep the runtime near a
minute; the acceptance suite runs the full 10-seed versions.
"""

import time

from sidesense import RunConfig, SweepSpec, run_sweep, summarize


def show(title, base, spec):
    t0 = time.time()
    results = run_sweep(base, spec)
    rows = summarize(results, spec)
    print(f"\n  {title} ({time.time() - t0:.0f}s, {spec.repetitions} seeds/point)")
    print(f"  {'value':>8} {'central delta [m]':>20} {'covered cells':>14}")
    for r in rows:
        print(f"  {r['value']:>8g} {r['mean_central_delta_m']:>12.2f} "
              f"+- {r['std_central_delta_m']:<5.2f} {r['mean_coverage_cells']:>12.0f}")


if __name__ == "__main__":
    print("=" * 70)
    print("Sweeps over blocker size, speed and neighborhood size (SVD mode)")
    print("=" * 70)
    base = RunConfig(num_cooperators=10, motion_model="raster", duration_s=None, seed=3)
    show("blocker radius sweep (accuracy improves with size)",
         base, SweepSpec(axis="blocker_radius", values=(0.5, 1.0, 2.0), repetitions=3))
    show("blocker speed sweep (slower is more detectable)",
         base, SweepSpec(axis="blocker_speed", values=(0.5, 1.0, 2.0), repetitions=3))
    show("neighborhood sweep (coverage grows with N)",
         base, SweepSpec(axis="neighborhood_n", values=(10, 30, 59), repetitions=3))
