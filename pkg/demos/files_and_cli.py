"""
Files and the command line
==========================

Volumes and stacks are stored as float32 MRC2014 files with a tilt file
of Euler triples next to them. The ``resire`` command chains simulation,
reconstruction and evaluation.
"""

import subprocess
import sys
import tempfile
from pathlib import Path

import numpy as np

from resire import read_mrc, read_stack, write_mrc
from resire.io import read_csv, read_mrc_header

work = Path(tempfile.mkdtemp())

v = np.random.default_rng(0).standard_normal((16, 16, 16))
write_mrc(work / "v.mrc", v)
h = read_mrc_header(work / "v.mrc")
print("header dims", int(h["nx"]), int(h["ny"]), int(h["nz"]), "mode", int(h["mode"]))
print("round trip exact at float32:", np.array_equal(read_mrc(work / "v.mrc"), v.astype(np.float32)))


def resire(*args):
    cmd = [sys.executable, "-m", "resire", *map(str, args)]
    print("$ resire", " ".join(map(str, args)), flush=True)
    subprocess.run(cmd, check=True)


resire("simulate", "--phantom", "ball32", "--tilt", "-70,70,3.5", "--out", work)
stack = read_stack(work / "stack.mrc", work / "angles.tlt")
print(len(stack), "projections read back")

resire("reconstruct", "--algo", "resire", "--stack", work / "stack.mrc", "--angles", work / "angles.tlt",
       "--dims", "32,32,32", "--iters", "50", "--out", work / "recon")
resire("evaluate", "--recon", work / "recon" / "recon.mrc", "--truth", work / "truth.mrc",
       "--stack", work / "stack.mrc", "--angles", work / "angles.tlt", "--out", work / "eval")

header, rows = read_csv(work / "eval" / "fsc.csv")
print(header, rows[:3])
resire("compare", "--dir", work, "--iters", "50")
