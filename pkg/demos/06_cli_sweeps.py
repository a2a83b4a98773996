# %% [markdown]
# Figure recipes through the command line
#
# The same runs from a shell:
#
#     thzrf sweep configs/baseline.cfg configs/fig1.cfg --mc 20000 --seed 3
#     thzrf sweep configs/baseline.cfg configs/fig2.cfg --quadrature
#     thzrf sweep configs/baseline.cfg configs/fig3.cfg --quadrature --jobs 4

# %%
import csv
import io
import sys
from contextlib import redirect_stdout
from pathlib import Path

from thzrf import cli

ROOT = Path(__file__).resolve().parents[1]


def sweep(recipe, *flags):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli.main(["sweep", str(ROOT / "configs/baseline.cfg"), str(ROOT / "configs" / recipe), *flags])
    if code:
        sys.exit(code)
    return list(csv.DictReader(io.StringIO(buf.getvalue())))


# %% Outage vs Es/No1, with a small Monte Carlo check per point
rows = sweep("fig1.cfg", "--mc", "20000", "--seed", "3")
for r in rows[::6]:
    print(f"{r['series']:9s} Es/No1={r['es_over_no1_db']:>5s}  OP={float(r['op']):.4e}  MC={float(r['op_mc']):.4e}")

# %% SER vs jitter
rows = sweep("fig3.cfg")
for r in rows:
    if r["sigma_s_mm"] in ("1", "10", "20"):
        print(f"{r['series']:9s} sigma_s={r['sigma_s_mm']:>2s} mm  SER={float(r['ser']):.4e}")
