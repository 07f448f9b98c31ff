"""Bring your own generator matrix.

The file format is a header line "q n k" followed by n rows of k entries.
Here a ternary [8, 3] code is written out, read back and run through the
same spectral pipeline as the built-in codes.
"""
import json
import subprocess
import sys
import tempfile
from pathlib import Path

from codespectra import read_generator_file

rows = ["100", "010", "001", "111", "112", "121", "211", "012"]
tmp = Path(tempfile.mkdtemp())
matrix = tmp / "ternary8.txt"
matrix.write_text("3 8 3\n" + "\n".join(rows) + "\n")

code = read_generator_file(matrix)
print(code.name, "q =", code.q, "d =", code.d, "d_dual =", code.d_dual)
print("weights:", code.weight_enumerator)

# The same thing through the command line, with output files.
out = tmp / "run"
cmd = [sys.executable, "-m", "codespectra.cli", "spectra", "run", "--matrix-file", str(matrix),
       "--p", "4", "--trials", "20", "--out", str(out)]
subprocess.run(cmd, check=True)
print(json.loads((out / "summary.json").read_text())["mean_sup_distance"])
print(sorted(p.name for p in out.iterdir()))
