"""Which full symmetric powers are contained in the span of products.

The answer is the smallest cocircuit size: the span contains every
degree-d form exactly when d is at most that size.  The containment test
itself is a dimension comparison on the Hilbert series; the h(t) flat sum
from the proof is checked as an exact polynomial identity.
"""

from __future__ import annotations

from math import comb

from . import matroid, prodspan, tutte
from .configs import VectorConfig
from .prodspan import DimTable, PowerSeries


class SpanningError(ValueError):
    pass


def min_cocircuit_size(cfg: VectorConfig, lattice=None) -> int:
    """n minus the largest hyperplane size."""
    if lattice is None:
        lattice = matroid.flats(cfg)
    if lattice.top_rank == 0:
        raise SpanningError("rank zero configuration has no cocircuits")
    return min(cfg.n - len(H) for H in lattice.hyperplanes())


def max_spanned_degree(cfg: VectorConfig, dt: DimTable | None = None) -> int:
    """Largest d with dim(span in degree d) = dim Sym^d, scanning from 0.

    Containment of the full symmetric power is equivalent to the dimension
    match, and the matched degrees form a prefix.
    """
    series = prodspan.hilbert_P(cfg, dt=dt)
    ell = cfg.ell
    d = 0
    while d + 1 <= series.trunc and series[d + 1] == comb(ell + d, d + 1):
        d += 1
    return d


def verify_spanning(cfg: VectorConfig, dt: DimTable | None = None, lattice=None) -> dict:
    """max_spanned_degree must equal the smallest cocircuit size."""
    d = max_spanned_degree(cfg, dt=dt)
    c = min_cocircuit_size(cfg, lattice=lattice)
    return {"holds": d == c, "max_spanned_degree": d, "min_cocircuit_size": c}


def _upoly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def h_polynomial_check(
    cfg: VectorConfig, dt: DimTable | None = None, lattice=None, contractions=None
) -> dict:
    """Exact flat-sum identity for the Hilbert series.

    h(t) = sum over flats X of t^(n-|X|) (-1)^(ell-r(X)) T(M/X; t, 0) must
    equal Hilb(t) * (1-t)^ell, with every M/X realized by iterated
    contraction.  The proof's leading-term claim h = 1 - a t^(n-|X0|+1)+...
    (X0 a largest proper flat, a the number of flats of that size) is
    reported alongside but the polynomial identity is the binding check.
    """
    if lattice is None:
        lattice = matroid.flats(cfg)
    n, ell = cfg.n, cfg.ell
    if contractions is None:
        contractions = matroid.flat_contractions(cfg, lattice)
    h = [0] * (n + ell + 1)
    for X in lattice:
        sign = (-1) ** (ell - lattice.rank[X])
        shift = n - len(X)
        for a, c in tutte.tutte_dc(contractions[X][0]).y_zero_slice().items():
            h[shift + a] += sign * c
    hilb = list(prodspan.hilbert_P(cfg, dt=dt))
    one_minus_t = [1]
    for _ in range(ell):
        one_minus_t = _upoly_mul(one_minus_t, [1, -1])
    lhs = _upoly_mul(hilb, one_minus_t)
    lhs += [0] * (len(h) - len(lhs))
    identity_holds = lhs == h

    proper = [X for X in lattice if X != lattice.top]
    leading = {"claim_holds": None, "a": None, "x0_size": None, "first_index": None}
    if proper and h[0] == 1:
        x0_size = max(len(X) for X in proper)
        a = sum(1 for X in proper if len(X) == x0_size)
        first = next((j for j in range(1, len(h)) if h[j]), None)
        leading = {
            "claim_holds": first == n - x0_size + 1 and h[first] == -a
            if first is not None
            else False,
            "a": a,
            "x0_size": x0_size,
            "first_index": first,
        }
    return {
        "identity_holds": identity_holds,
        "h": tuple(h),
        "lhs": tuple(lhs),
        "leading": leading,
    }
