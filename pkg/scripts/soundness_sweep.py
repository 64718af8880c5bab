#!/usr/bin/env python3
"""Randomized stress test of certificate soundness.

Draws random banded Hermitian specs whose spectral envelope is derived from
their own Fourier symbol, certifies elements of several powers at a small
window, and measures the actual error against a much larger ambient window.
Reports the worst observed error/bound ratio; any ratio above 1 would mean an
unsound certificate.

    python3 scripts/soundness_sweep.py --trials 200 --seed 1
"""

import argparse
import sys

import numpy as np

from finpow import (
    SpectralEnvelope,
    Window,
    banded_spec,
    certify,
    finite_power,
    truncate,
    truncation_depth,
)

ALPHAS = (-1.0, -0.5, 0.5, 1.5)


def symbol_range(offsets, stencil, samples=8192):
    kappa = np.arange(samples) / samples
    total = np.zeros(samples)
    for o, v in zip(offsets, stencil):
        total += np.real(complex(v) * np.exp(2j * np.pi * o * kappa))
    return float(total.min()), float(total.max())


def random_spec(rng, halfband):
    while True:
        mags = rng.uniform(0.2, 1.0, size=halfband)
        if rng.random() < 0.3:
            couplings = mags * np.exp(1j * rng.uniform(0, 2 * np.pi, size=halfband))
        else:
            couplings = mags * rng.choice([-1.0, 1.0], size=halfband)
        offsets = list(range(-halfband, halfband + 1))
        stencil = [
            0.0 if o == 0 else (couplings[o - 1] if o > 0 else np.conj(couplings[-o - 1]))
            for o in offsets
        ]
        lo, hi = symbol_range(offsets, stencil)
        width = hi - lo
        if width < 1e-2:
            continue
        ratio = rng.uniform(0.1, 0.9)
        shift = (ratio * hi - lo) / (1.0 - ratio)
        stencil[halfband] = shift
        pad = 1e-5 * width
        c, w = lo + shift - pad, hi + shift + pad
        if c <= 0:
            continue
        return banded_spec(offsets, stencil, SpectralEnvelope(c, w, 0.0))


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=200)
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument("--ambient-factor", type=int, default=8)
    args = parser.parse_args(argv)

    rng = np.random.default_rng(args.seed)
    worst = 0.0
    unsound = 0
    for trial in range(args.trials):
        spec = random_spec(rng, int(rng.integers(1, 4)))
        margin = int(rng.integers(4, 13))
        m, n = int(rng.integers(-2, 3)), int(rng.integers(-2, 3))
        window = Window(margin, margin)
        ambient = Window(args.ambient_factor * margin, args.ambient_factor * margin)
        matrix = truncate(spec, window)
        big = truncate(spec, ambient)
        for alpha in ALPHAS:
            value = finite_power(matrix, alpha).element(m, n)
            depth = truncation_depth(spec, window, m, n)
            cert = certify(value, alpha, spec.envelope, depth)
            error = abs(cert.value - finite_power(big, alpha).element(m, n))
            if error > cert.bound:
                unsound += 1
                print(
                    f"UNSOUND trial={trial} alpha={alpha} error={error:.3e} "
                    f"bound={cert.bound:.3e}",
                    file=sys.stderr,
                )
            elif cert.bound > 0:
                worst = max(worst, error / cert.bound)
    total = args.trials * len(ALPHAS)
    print(f"cases: {total}")
    print(f"unsound: {unsound}")
    print(f"worst error/bound ratio: {worst:.6e}")
    return 1 if unsound else 0


if __name__ == "__main__":
    sys.exit(main())
