"""Box and S-dimension estimates for the built-in generators.

Usage: python scripts/sdim_survey.py [--csv out.csv]
"""
import argparse
import csv
import math
import sys
import time

from peanocurve.analysis import dimension_report
from peanocurve.continuum import interval, sierpinski_carpet, sierpinski_gasket, square

SPACES = [
    (interval(129), 1.0),
    (square(16), 2.0),
    (sierpinski_carpet(2), math.log(8) / math.log(3)),
    (sierpinski_carpet(3), math.log(8) / math.log(3)),
    (sierpinski_gasket(4), math.log(3) / math.log(2)),
    (sierpinski_gasket(5), math.log(3) / math.log(2)),
]


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--csv")
    args = ap.parse_args(argv)
    rows = []
    for X, ref in SPACES:
        t0 = time.perf_counter()
        rep = dimension_report(X)
        rows.append({"space": X.name, "cells": X.n, "reference": round(ref, 4),
                     "box_dim": round(rep.box_dim, 4), "s_dim": round(rep.s_dim, 4),
                     "holder_upper": round(rep.holder_upper, 4),
                     "seconds": round(time.perf_counter() - t0, 2)})
    out = open(args.csv, "w", newline="") if args.csv else sys.stdout
    w = csv.DictWriter(out, fieldnames=list(rows[0]))
    w.writeheader()
    w.writerows(rows)


if __name__ == "__main__":
    main()
