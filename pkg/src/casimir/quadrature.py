"""Batched adaptive Gauss-Kronrod (7, 15) quadrature.

Many one-dimensional integrals are refined together: every panel of every
integral lives in one flat array, so each refinement sweep is a single
vectorised call of the integrand.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Kronrod abscissae (positive half, descending) and weights; Gauss 7-point
# weights sit on the odd Kronrod abscissae.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], _WGK[::-1]])
GAUSS_WEIGHTS = np.zeros(15)
GAUSS_WEIGHTS[[1, 3, 5]] = _WG[:3]
GAUSS_WEIGHTS[[13, 11, 9]] = _WG[:3]
GAUSS_WEIGHTS[7] = _WG[3]


@dataclass(frozen=True)
class QuadratureSettings:
    """Tolerances and caps shared by the Matsubara sum and the y / x integrals."""

    rel_tol: float = 1e-9
    matsubara_tail_tol: float = 1e-10
    max_terms: int = 10**6
    max_subdivisions: int = 200

    def __post_init__(self):
        for name in ("rel_tol", "matsubara_tail_tol"):
            v = getattr(self, name)
            if not 0 < v < 1:
                raise ValueError(f"{name} must lie in (0, 1), got {v}")
        if self.max_terms < 1 or self.max_subdivisions < 1:
            raise ValueError("max_terms and max_subdivisions must be positive")


class ConvergenceError(RuntimeError):
    """Quadrature or Matsubara sum did not reach the requested tolerance.

    ``partial`` holds the best available estimate, ``diagnostics`` a dict
    describing where the budget ran out.
    """

    def __init__(self, message, partial=None, diagnostics=None):
        super().__init__(message)
        self.partial = partial
        self.diagnostics = diagnostics or {}


def gk15(f, owner, lo, hi):
    """Kronrod estimate and |K15 - G7| for each panel ``[lo, hi]``."""
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    t = mid[:, None] + half[:, None] * NODES[None, :]
    v = f(np.repeat(owner, 15).reshape(-1, 15), t)
    k = half * (v @ KRONROD_WEIGHTS)
    g = half * (v @ GAUSS_WEIGHTS)
    return k, np.abs(k - g)


def batch_quad(f, breaks, *, rel_tol, abs_tol=0.0, max_subdivisions=200):
    """Integrate ``n`` functions at once over their own breakpoint partitions.

    Parameters
    ----------
    f : callable
        ``f(owner, t)`` evaluated on equally shaped arrays, where ``owner``
        holds the index of the integral each node ``t`` belongs to.
    breaks : ndarray, shape (n, m)
        Initial panel boundaries of each integral, ascending along axis 1.
    rel_tol, abs_tol : float
        Integral ``j`` is accepted once its error estimate is below
        ``max(abs_tol, rel_tol * |I_j|)``; panels get a share of that
        tolerance proportional to their width.
    max_subdivisions : int
        Cap on bisection sweeps.

    Returns
    -------
    values, errors : ndarray, shape (n,)
    converged : ndarray of bool, shape (n,)
    """
    breaks = np.asarray(breaks, dtype=float)
    n, m = breaks.shape
    owner = np.repeat(np.arange(n), m - 1)
    lo = breaks[:, :-1].ravel()
    hi = breaks[:, 1:].ravel()
    length = breaks[:, -1] - breaks[:, 0]

    done_val = np.zeros(n)
    done_err = np.zeros(n)
    converged = np.ones(n, dtype=bool)

    for sweep in range(max_subdivisions + 1):
        if owner.size == 0:
            break
        k, err = gk15(f, owner, lo, hi)
        estimate = done_val + np.bincount(owner, weights=k, minlength=n)
        tol = np.maximum(abs_tol, rel_tol * np.abs(estimate))
        share = tol[owner] * (hi - lo) / length[owner]
        ok = err <= share
        if sweep == max_subdivisions:
            ok[:] = True
            converged[np.unique(owner[err > share])] = False
        # accepted panels are final; the rest are bisected
        done_val += np.bincount(owner[ok], weights=k[ok], minlength=n)
        done_err += np.bincount(owner[ok], weights=err[ok], minlength=n)
        bad = ~ok
        owner, lo, hi = owner[bad], lo[bad], hi[bad]
        mid = 0.5 * (lo + hi)
        owner = np.repeat(owner, 2)
        lo, hi = np.column_stack([lo, mid]).ravel(), np.column_stack([mid, hi]).ravel()
    return done_val, done_err, converged


def quad(f, a, b, *, rel_tol=1e-10, abs_tol=0.0, max_subdivisions=200, points=None):
    """Scalar convenience wrapper around :func:`batch_quad` for a vectorised ``f(t)``."""
    edges = [a] + sorted(points or []) + [b]
    val, err, ok = batch_quad(
        lambda owner, t: f(t),
        np.array([edges]),
        rel_tol=rel_tol,
        abs_tol=abs_tol,
        max_subdivisions=max_subdivisions,
    )
    if not ok[0]:
        raise ConvergenceError("quad did not converge", partial=float(val[0]),
                               diagnostics={"error": float(err[0])})
    return float(val[0]), float(err[0])
