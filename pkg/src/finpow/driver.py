"""Tolerance-driven window growth and local solves.

The driver evaluates the full pipeline (truncate, validate, spectral power,
depth, certificate) on a deterministic schedule of symmetric windows and
stops at the first certificate meeting the target bound.  Local solutions of
``W x = f`` for finitely supported ``f`` reduce to certified elements of the
inverse.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from .certificates import Certificate, certify
from .core import (
    BoundarySpec,
    InfiniteMatrixSpec,
    Window,
    truncate,
    validate_truncation,
)
from .errors import (
    DivergentSeriesError,
    InvalidBoundaryError,
    NotConvergedError,
    SingularOperatorError,
)
from .powers import finite_power
from .series import truncation_depth

BoundaryPolicy = Callable[[Window], BoundarySpec]


def zero_boundary(window: Window) -> BoundarySpec:
    """Boundary policy that applies no corner correction."""
    return BoundarySpec.zero()


@dataclass(frozen=True)
class DriverLimits:
    """Resource and validation limits for the adaptive driver.

    ``max_dim`` caps the truncation dimension; ``spectrum_tol`` is the
    relative slack allowed when checking truncation eigenvalues against the
    envelope (scaled by the envelope's upper bound).
    """

    max_dim: int = 2049
    spectrum_tol: float = 1e-9


DEFAULT_LIMITS = DriverLimits()


def _check_premises(spec: InfiniteMatrixSpec, alpha: float) -> None:
    if spec.envelope.c == 0.0 and alpha < 0.0:
        raise DivergentSeriesError(
            f"alpha={alpha} < 0 requires a strictly positive lower spectral "
            f"bound, but the envelope has c = 0"
        )


def evaluate_window(
    spec: InfiniteMatrixSpec,
    boundary_policy: BoundaryPolicy,
    alpha: float,
    m: int,
    n: int,
    window: Window,
    limits: DriverLimits = DEFAULT_LIMITS,
) -> Certificate:
    """One-shot pipeline evaluation at a fixed window."""
    _check_premises(spec, alpha)
    envelope = spec.envelope
    boundary = boundary_policy(window)
    matrix = truncate(spec, window, boundary)
    report = validate_truncation(
        matrix, envelope, limits.spectrum_tol * max(envelope.w, 1.0)
    )
    if not report.passed:
        raise InvalidBoundaryError(
            f"truncation at window [-{window.P}, {window.Q}] violates the "
            f"envelope: eigenvalues in [{report.min_eigenvalue:.6g}, "
            f"{report.max_eigenvalue:.6g}], required "
            f"[{report.lower_limit:.6g}, {report.upper_limit:.6g}]"
        )
    value = finite_power(matrix, alpha).element(m, n)
    depth = truncation_depth(spec, window, m, n)
    return certify(value, alpha, envelope, depth)


def growth_windows(m: int, n: int, max_dim: int):
    """Deterministic schedule of symmetric windows around the element."""
    base = max(abs(m), abs(n))
    margin = 2
    while True:
        window = Window(base + margin, base + margin)
        if window.dim > max_dim:
            return
        yield window
        margin *= 2


def approximate_element(
    spec: InfiniteMatrixSpec,
    boundary_policy: BoundaryPolicy,
    alpha: float,
    m: int,
    n: int,
    tol: float,
    limits: DriverLimits = DEFAULT_LIMITS,
) -> Certificate:
    """Grow the window until the certified bound drops below ``tol``.

    Windows follow ``P = Q = max(|m|, |n|) + g`` with the margin ``g``
    doubling from 2.  Returns the first certificate whose bound meets the
    tolerance; the value it carries is exactly the one-shot evaluation at
    that window.

    Raises
    ------
    NotConvergedError
        Dimension limit reached first; carries the best certificate.
    DivergentSeriesError
        ``alpha < 0`` with an envelope touching zero.
    InvalidBoundaryError
        A truncation failed the spectrum validation.
    """
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    _check_premises(spec, alpha)
    best: Certificate | None = None
    for window in growth_windows(m, n, limits.max_dim):
        cert = evaluate_window(spec, boundary_policy, alpha, m, n, window, limits)
        if best is None or cert.bound < best.bound:
            best = cert
        if cert.bound <= tol:
            return cert
    message = (
        f"dimension limit {limits.max_dim} reached before the bound fell "
        f"below tol={tol:g}"
    )
    if best is not None:
        message += f"; best bound {best.bound:g} at window [-{best.window.P}, {best.window.Q}]"
    raise NotConvergedError(message, best_certificate=best)


@dataclass(frozen=True)
class WindowResult:
    """One row of a convergence table; ``error`` records a per-window failure."""

    P: int
    Q: int
    value: complex | None
    j_pq: int | None
    bound: float | None
    error: str | None = None


def convergence_table(
    spec: InfiniteMatrixSpec,
    boundary_policy: BoundaryPolicy,
    alpha: float,
    m: int,
    n: int,
    windows: Sequence[Window],
    limits: DriverLimits = DEFAULT_LIMITS,
) -> list[WindowResult]:
    """Evaluate the pipeline at each requested window, row order preserved."""
    rows = []
    for window in windows:
        try:
            cert = evaluate_window(spec, boundary_policy, alpha, m, n, window, limits)
            rows.append(
                WindowResult(window.P, window.Q, cert.value, cert.depth.j_pq, cert.bound)
            )
        except Exception as exc:  # noqa: BLE001 - row-level error reporting
            rows.append(WindowResult(window.P, window.Q, None, None, None, str(exc)))
    return rows


def local_solve(
    spec: InfiniteMatrixSpec,
    boundary_policy: BoundaryPolicy,
    f: Mapping[int, complex],
    out_indices: Sequence[int],
    tol: float,
    limits: DriverLimits = DEFAULT_LIMITS,
) -> dict[int, tuple[complex, float]]:
    """Certified components of the solution of ``W x = f``.

    Each requested component ``x_m = sum_n (W**-1)_{mn} f_n`` is assembled
    from certified inverse elements, with the tolerance split uniformly in
    the ``|f_n|`` weighting so the accumulated bound stays below ``tol``.

    Raises
    ------
    SingularOperatorError
        The envelope does not bound the spectrum away from zero.
    """
    if spec.envelope.c <= 0.0:
        raise SingularOperatorError(
            f"local solve requires c > 0, envelope has c = {spec.envelope.c}"
        )
    if tol <= 0.0:
        raise ValueError(f"tol must be positive, got {tol}")
    support = {int(k): complex(v) for k, v in f.items() if complex(v) != 0}
    if not support:
        return {int(m): (0.0 + 0.0j, 0.0) for m in out_indices}
    weight = sum(abs(v) for v in support.values())
    per_element_tol = tol / weight
    result: dict[int, tuple[complex, float]] = {}
    for m in out_indices:
        total = 0.0 + 0.0j
        bound = 0.0
        for n, fn in support.items():
            cert = approximate_element(
                spec, boundary_policy, -1.0, m, n, per_element_tol, limits
            )
            total += cert.value * fn
            bound += cert.bound * abs(fn)
        result[int(m)] = (total, bound)
    return result
