"""
Sweeps from the command line
============================

The CLI and the library give the same numbers; here the table command
is driven in-process.
"""

import csv
import io

from shadowprice.cli import run

text, _ = run(["table", "--theta", "0.5", "--sigma", "0.4",
               "--sweep", "lambda:1e-4:1e-1:4:log", "--format", "csv"])
for row in csv.DictReader(io.StringIO(text)):
    print(f"lam={float(row['lambda']):.0e}  width={float(row['width']):.5f} "
          f"(series {float(row['width_asymptotic']):.5f})  delta={float(row['delta']):.6f}")
