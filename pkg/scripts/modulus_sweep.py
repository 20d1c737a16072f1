"""Assemble curves over a range of exponents and report certificate margins.

For each alpha the curve is checked against Omega(t) = t**(1/alpha); the
printed ratio is max d(f(t), f(t')) / Omega(|t - t'|) over all breakpoints.
"""
import argparse

from peanocurve.analysis import verify_certificate
from peanocurve.assembler import ModulusSpec, assemble, default_N
from peanocurve.continuum import generate


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--shape", default="carpet")
    ap.add_argument("--param", type=int, default=2)
    ap.add_argument("--alphas", type=float, nargs="+", default=[2.5, 3, 4, 6])
    ap.add_argument("--extra-levels", type=int, default=2,
                    help="also assemble with N = default + 1 .. default + k")
    args = ap.parse_args(argv)
    X = generate(args.shape, args.param)
    print("alpha,N,points,s,coverage,passed,worst_ratio")
    N0 = default_N(X)
    for a in args.alphas:
        om = ModulusSpec.power(a)
        for N in range(N0, N0 + args.extra_levels + 1):
            hc = assemble(X, om, N=N)
            rep = verify_certificate(hc.curve, X, om)
            print(f"{a},{hc.N},{len(hc.curve)},{hc.s:.6g},{hc.coverage:.3f},{hc.passed},"
                  f"{rep.worst_ratio:.4f}")


if __name__ == "__main__":
    main()
