"""How far the encoded ABCD state is from its dephased version.

Regenerates both trace-distance curves. Pass a directory to also write the
CSV files (same format as ``entangle-sim sweep``).
"""
import math
import sys
from pathlib import Path

from entangle_sim import analysis
from entangle_sim.cli import FIG2_HEADER, FIG3_HEADER, render_csv

fig3 = analysis.fig3_spec(grid_points=37)
t = analysis.run_sweep(fig3)
print("theta = theta'' = pi/4, T versus theta'")
for tp, value in zip(fig3.grid[::4], t[::4]):
    print(f"  {tp:5.3f}  {value:.4f}  " + "#" * int(60 * value))

fig2 = analysis.fig2_spec(grid_points=19, avg_points=91)
t_avg = analysis.run_sweep(fig2)
print("\ntheta = pi/4, T averaged over theta', versus theta''")
for tpp, value in zip(fig2.grid, t_avg):
    print(f"  {tpp:5.3f}  {value:.4f}  " + "#" * int(60 * value))

# At theta'' = 0 the pair is unentangled yet B is still coherent over j;
# T(theta') = |sin 2theta'| / 2 there, so the average sits near 1/pi.
print(f"\nT_avg(0) = {t_avg[0]:.6f}, 1/pi = {1 / math.pi:.6f}")

if len(sys.argv) > 1:
    out = Path(sys.argv[1])
    out.mkdir(parents=True, exist_ok=True)
    (out / "fig3.csv").write_text(render_csv(FIG3_HEADER, zip(fig3.grid, t)))
    (out / "fig2.csv").write_text(render_csv(FIG2_HEADER, zip(fig2.grid, t_avg)))
    print("wrote", out / "fig2.csv", "and", out / "fig3.csv")
