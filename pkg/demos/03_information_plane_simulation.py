# coding: utf-8

# # Training sparse filtering and tracking the information plane
#
# Each simulation draws data, trains W with L-BFGS, and after every accepted
# iterate records I[X;T] and H[T] on held-out samples. Runs are averaged
# per iteration and drawn as a trajectory.

import sys
from pathlib import Path

from sfib import SimulationConfig, aggregate, run_batch
from sfib.report import export_csv, render_dynamics_panels, render_information_plane

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
out.mkdir(parents=True, exist_ok=True)

config = SimulationConfig(sim_id=1, repetitions=10, base_seed=42)
runs = run_batch(config)
agg = aggregate(runs)

for r in runs[:3]:
    first, last = r.records[0], r.records[-1]
    print(f"rep {r.repetition_index}: {len(r.records) - 1} iterations ({r.termination}), "
          f"I {first.mi_xt:.3f} -> {last.mi_xt:.3f}, H {first.entropy_t:.3f} -> {last.entropy_t:.3f}")

print(f"aggregate over {agg.length} iterations: "
      f"I {agg.mean_mi[0]:.3f} -> {agg.mean_mi[-1]:.3f}, "
      f"H {agg.mean_entropy[0]:.3f} -> {agg.mean_entropy[-1]:.3f}")

export_csv(runs, agg, out)
render_information_plane(agg, out / "information_plane_1.svg")
render_dynamics_panels(runs, out / "dynamics_1.svg")
print("wrote", sorted(p.name for p in out.iterdir()))
