"""Exact integer powers of shifted sparse matrices at a single element, and
the depth up to which a window truncation reproduces them.

A matrix element of ``(W - shift*I)**j`` is a finite sum over paths of length
``j`` through the row supports, so it can be evaluated exactly (up to
round-off) without ever forming the matrix.  The same support sets determine,
for a given window, how many leading powers the truncated matrix reproduces
term by term: the truncation depth.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import InfiniteMatrixSpec, Window
from .errors import BudgetExceededError, DomainError

DEFAULT_NODE_BUDGET = 1_000_000


@dataclass(frozen=True)
class TruncationDepth:
    """Number of leading series terms a window reproduces exactly.

    For all ``j < j_pq`` the element ``(m, n)`` of ``(W - w I)**j`` equals the
    corresponding element of the truncated, boundary-corrected power.  When
    ``saturated`` is set, the support set reachable from the element closed
    up strictly inside the window, so equality holds at every order and the
    truncation is exact; ``j_pq`` then records the step at which the frontier
    stopped growing.
    """

    j_pq: int
    window: Window
    m: int
    n: int
    saturated: bool = False


def _shifted_row(spec: InfiniteMatrixSpec, p: int, shift: float) -> dict[int, complex]:
    row = dict(spec.row(p))
    if shift != 0.0:
        row[p] = row.get(p, 0.0) - shift
    return row


def integer_power_element(
    spec: InfiniteMatrixSpec,
    shift: float,
    j: int,
    m: int,
    n: int,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> complex:
    """Element ``(m, n)`` of ``(W - shift*I)**j`` by sparse path expansion.

    Expands breadth first from ``m``, accumulating path coefficients in a map
    keyed by index; ``shift = 0`` gives plain powers of W.  ``j = 0`` returns
    the Kronecker delta, ``j = 1`` the shifted entry itself.

    Raises
    ------
    BudgetExceededError
        If the accumulated frontier exceeds ``node_budget`` indices, which
        signals a sparsity bound too loose for this depth.
    """
    if j < 0:
        raise DomainError(f"power j must be a nonnegative integer, got {j}")
    if j == 0:
        return 1.0 + 0.0j if m == n else 0.0 + 0.0j
    coeffs: dict[int, complex] = {m: 1.0 + 0.0j}
    for _ in range(j):
        expanded: dict[int, complex] = {}
        for p, weight in coeffs.items():
            for q, value in _shifted_row(spec, p, shift).items():
                expanded[q] = expanded.get(q, 0.0 + 0.0j) + weight * complex(value)
        if len(expanded) > node_budget:
            raise BudgetExceededError(
                f"path frontier grew to {len(expanded)} indices, "
                f"exceeding the node budget {node_budget}"
            )
        coeffs = expanded
    return coeffs.get(n, 0.0 + 0.0j)


def truncation_depth(
    spec: InfiniteMatrixSpec,
    window: Window,
    m: int,
    n: int,
) -> TruncationDepth:
    """Depth up to which the window reproduces shifted powers at ``(m, n)``.

    Propagates the support frontier from both ``m`` and ``n`` and returns the
    first depth at which it touches an index outside the strict interior
    ``[-P+1, Q-1]``; all lower powers are then guaranteed to agree element by
    element for any admissible corner correction, because every contributing
    path stays on entries the truncation copies verbatim.

    Out-of-window elements report depth 0, elements on the window boundary
    depth 1 (only the trivial zeroth power is guaranteed there).  Enlarging
    the window never decreases the result.
    """
    if not (window.contains(m) and window.contains(n)):
        return TruncationDepth(0, window, m, n)
    if window.is_corner(m) or window.is_corner(n):
        return TruncationDepth(1, window, m, n)

    lo, hi = -window.P + 1, window.Q - 1
    reach = {m, n}
    frontier = {m, n}
    depth = 0
    while True:
        depth += 1
        fresh: set[int] = set()
        for p in frontier:
            for q in spec.support(p):
                if q not in reach:
                    fresh.add(q)
        if any(q < lo or q > hi for q in fresh):
            return TruncationDepth(depth, window, m, n)
        if not fresh:
            # The reachable support closed inside the window: every power
            # agrees, the truncation is exact for this element.
            return TruncationDepth(depth, window, m, n, saturated=True)
        reach |= fresh
        frontier = fresh


def banded_depth_closed_form(l: int, window: Window, m: int, n: int) -> int:
    """Truncation depth of a fully populated (2l+1)-diagonal matrix.

    Valid only when every band entry is nonzero and both indices lie at least
    one step inside the window; equals ``truncation_depth`` there.
    """
    if l < 1:
        raise DomainError(f"half-bandwidth l must be >= 1, got {l}")
    mi, ma = min(m, n), max(m, n)
    if not (-window.P <= mi - 1 and window.Q >= ma + 1):
        raise DomainError(
            f"closed form requires indices strictly inside the window: "
            f"got (m, n)=({m}, {n}) in [-{window.P}, {window.Q}]"
        )
    return 1 + min(mi + window.P - 1, window.Q - ma - 1) // l
