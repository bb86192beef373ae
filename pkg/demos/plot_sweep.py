"""
Plot a sweep CSV
================

Optional helper: renders the entropy surface written by ``cavity-sweep``.
Needs matplotlib, which the package itself does not depend on.

    cavity-sweep --accel 0:0.9:0.1 --mass 0:12:0.25 --threads 0 --output sweep.csv
    python demos/plot_sweep.py sweep.csv sweep.png
"""

import csv
import sys

import numpy as np
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

src, dst = sys.argv[1], sys.argv[2] if len(sys.argv) > 2 else "sweep.png"
with open(src) as fh:
    rows = list(csv.DictReader(fh))
a = sorted({float(r["a"]) for r in rows})
k = sorted({float(r["kappa"]) for r in rows})
S = np.full((len(a), len(k)), np.nan)
for r in rows:
    S[a.index(float(r["a"])), k.index(float(r["kappa"]))] = float(r["entropy_bits"])

fig, ax = plt.subplots(figsize=(6, 4))
mesh = ax.pcolormesh(k, a, S, shading="nearest")
fig.colorbar(mesh, label="entropy (bits)")
ax.set_xlabel("bare mass kappa")
ax.set_ylabel("acceleration a")
fig.tight_layout()
fig.savefig(dst, dpi=150)
print("wrote", dst)
