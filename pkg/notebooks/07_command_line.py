"""
Command line
============

The same steps through the ``patcirc`` entry point, on a small grid set by a
configuration file.
"""

# %%
import tempfile
from pathlib import Path

from patcirc.cli import main

work = Path(tempfile.mkdtemp())
(work / "small.cfg").write_text("n_polar = 16\nn_az = 32\nn_t = 50\nvolume_n = 24\n")
cfg = str(work / "small.cfg")
phantom = str(Path(__import__("patcirc").__file__).parent / "data" / "fig3.json")

# %%
print(main(["phantom", "validate", phantom]))
print(main(["simulate", "--phantom", phantom, "--config", cfg, "--out", str(work / "fig3.patc")]))
print(main(["add-noise", str(work / "fig3.patc"), "--noise", "0.2", "--seed", "7"]))

# %%
print(main(["rangecheck", str(work / "fig3.patc"), "--threshold", "0.05"]))
print(main(["reconstruct", str(work / "fig3.patc"), "--config", cfg]))
print(main(["metrics", str(work / "fig3.patv"), "--phantom", phantom]))
print(sorted(p.name for p in work.iterdir()))
