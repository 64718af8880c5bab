#!/usr/bin/env python3
"""Convergence study of the lattice model across powers and window sizes.

For each requested power, evaluates the periodic truncation at a sequence of
window sizes, compares against the dispersion integral, and writes one CSV
block per power.  Example:

    python3 scripts/convergence_study.py --a 1 --b 1 \
        --alphas -1,-0.5,0.5 --sizes 9,17,33,65,129 > study.csv
"""

import argparse
import sys

from finpow import (
    LatticeModelParams,
    Window,
    dispersion_integral_element,
    evaluate_window,
    lattice_spec,
    periodic_policy,
)


def fmt(x):
    return format(float(x), ".17g")


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--a", type=float, default=1.0)
    parser.add_argument("--b", type=float, default=1.0)
    parser.add_argument("--alphas", default="-1,-0.5,0.5")
    parser.add_argument("--sizes", default="9,17,33,65,129,257")
    args = parser.parse_args(argv)

    params = LatticeModelParams(args.a, args.b)
    spec = lattice_spec(params)
    policy = periodic_policy(params)
    alphas = [float(tok) for tok in args.alphas.split(",") if tok.strip()]
    sizes = [int(tok) for tok in args.sizes.split(",") if tok.strip()]
    for size in sizes:
        if size < 3 or size % 2 == 0:
            parser.error(f"sizes must be odd and >= 3, got {size}")

    print("alpha,N,value,reference,abs_error,bound,j_pq")
    for alpha in alphas:
        reference = dispersion_integral_element(params, alpha, 0, 0)
        for size in sizes:
            half = (size - 1) // 2
            cert = evaluate_window(spec, policy, alpha, 0, 0, Window(half, half))
            value = cert.value.real
            print(
                f"{fmt(alpha)},{size},{fmt(value)},{fmt(reference)},"
                f"{fmt(abs(value - reference))},{fmt(cert.bound)},{cert.depth.j_pq}"
            )
    return 0


if __name__ == "__main__":
    sys.exit(main())
