"""
Sweeping mask ratios and fitting the response curve
===================================================

"""

# How corrupted should a negative be? Too little and it near-copies the
# reference; too much and it stops resembling a summary at all. The
# sweep runs the whole pipeline once per (gamma_a, gamma_s) cell and
# reports validation balanced accuracy next to two properties of the
# generated negatives: distance from the reference and sample diversity.
from negsum import SweepGrid, binarize_all, run_sweep, toy_benchmark, toy_pairs

grid = SweepGrid(gamma_a_values=(0.2, 0.5, 0.8), gamma_s_values=(0.2, 0.5, 0.8))
pairs = toy_pairs(20, seed=2)
validation = binarize_all(toy_benchmark(12, seed=3), "summeval-min")

rows = run_sweep(grid, pairs, validation, seed=2, n_samples=3)
print("gamma_a gamma_s     ba  distance  diversity")
for r in rows:
    print(f"{r.gamma_a:7.1f} {r.gamma_s:7.1f} {r.ba:6.3f} {r.distance:9.3f} "
          f"{r.diversity:10.3f}")

# Rows serialize to CSV with full float precision, so a saved sweep
# reloads bit for bit and reruns byte-identically.
from pathlib import Path
from tempfile import TemporaryDirectory

from negsum import load_sweep_csv, save_sweep_csv

with TemporaryDirectory() as tmp:
    csv_path = Path(tmp) / "sweep.csv"
    save_sweep_csv(rows, csv_path)
    assert load_sweep_csv(csv_path) == rows
    print()
    print("CSV round-trip exact:", csv_path.name)

    # The analysis fits balanced accuracy as a quadratic in distance (or
    # diversity) and reports R^2; emit_plots renders the heatmap and
    # both fit curves alongside the CSV.
    from negsum import emit_plots, fit_analysis

    (a, b, c), r2 = fit_analysis(rows, "distance")
    print(f"ba ~ {a:.2f}*d^2 + {b:.2f}*d + {c:.2f}  (R^2={r2:.3f})")

    outputs = emit_plots(rows, tmp, stem="demo_sweep")
    print("artifacts:", ", ".join(p.name for p in outputs))
