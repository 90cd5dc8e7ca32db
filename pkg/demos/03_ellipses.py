"""Figure data as plain arrays.

Writes the four CSV files that the ``figures`` subcommand produces and
prints a short inventory. Any plotting tool can draw them, one polyline per
label.
"""

import sys
from pathlib import Path

from commonnoise.figures import figure_data
from commonnoise.matrixio import write_polylines

out = Path(sys.argv[1] if len(sys.argv) > 1 else "figure-data")
data = figure_data(n_samples=50)
for name, lines in data.items():
    write_polylines(out / f"{name}.csv", lines)
    flat = sum(pl.degenerate for pl in lines)
    print(f"{name}: {len(lines):4d} polylines, {flat} degenerate, e.g. {', '.join(pl.label for pl in lines[:3])}")
print("written to", out.resolve())
