"""Graded dimensions of the algebra generated by 1/alpha_i.

The degree-k piece supported on a flat X has the same dimension as the
cell (X, k) of the m-fold parallel extension with m = k, so everything
reduces to cell dimensions of extended configurations.  Terao's closed
form for the full Hilbert series, (t/(1-t))^ell times the y-cleared
T(1/y, 0), is computed independently and compared coefficient by
coefficient.
"""

from __future__ import annotations

from math import comb

from . import matroid, prodspan, tutte
from .configs import VectorConfig, parallel_extension, restrict_to_flat
from .prodspan import MultiPoly, PowerSeries, SelfCheckError

LEVEL_CAP = 24  # bound on k * n when growing the configuration


class ReciprocalError(ValueError):
    pass


def _require_loop_free(cfg):
    if any(cfg.is_loop(i) for i in range(1, cfg.n + 1)):
        raise ReciprocalError("reciprocals need every form nonzero")


def _flat_positions(kcfg: VectorConfig, X) -> frozenset:
    """Positions of the extension carrying copies of the members of X."""
    return frozenset(p for p, lab in enumerate(kcfg.labels, 1) if lab in X)


def dim_C(cfg: VectorConfig, X, k: int) -> int:
    """dim of the degree-k reciprocal piece supported on the flat X."""
    _require_loop_free(cfg)
    X = frozenset(X)
    if matroid.closure(cfg, X) != X:
        raise ReciprocalError(f"{sorted(X)} is not a flat")
    if k == 0:
        return 1 if X == matroid.closure(cfg, frozenset()) else 0
    if k * cfg.n > LEVEL_CAP:
        raise ReciprocalError(f"k*n = {k * cfg.n} exceeds cap {LEVEL_CAP}")
    kcfg = parallel_extension(cfg, k)
    return prodspan.cell_dimension(kcfg, _flat_positions(kcfg, X), k)


def level_dims(cfg: VectorConfig, k: int, lattice=None) -> dict:
    """{flat: dim_C(flat, k)} with the extension and product cache shared."""
    _require_loop_free(cfg)
    if lattice is None:
        lattice = matroid.flats(cfg)
    if k == 0:
        bottom = lattice.bottom
        return {X: (1 if X == bottom else 0) for X in lattice}
    if k * cfg.n > LEVEL_CAP:
        raise ReciprocalError(f"k*n = {k * cfg.n} exceeds cap {LEVEL_CAP}")
    kcfg = parallel_extension(cfg, k)
    cache = {0: MultiPoly.one(kcfg.field, kcfg.ell)}
    out = {}
    for X in lattice:
        Xk = _flat_positions(kcfg, X)
        rX = lattice.rank[X]
        out[X] = prodspan._cell(kcfg, Xk, rX, k, cache)
    return out


def dim_C_via_tutte(cfg: VectorConfig, X, k: int) -> int:
    """Independent route: [y^(k - r(X))] T(k Delta_X; 1, y).

    The Tutte polynomial of the k-fold extension of the restriction comes
    from the parallel-extension transform of its Tutte polynomial.
    """
    _require_loop_free(cfg)
    X = frozenset(X)
    if k == 0:
        return 1 if X == matroid.closure(cfg, frozenset()) else 0
    sub = restrict_to_flat(cfg, X)
    rX = sub.ell
    t_ext = tutte.parallel_tutte_formula(tutte.tutte_dc(sub), k, rX)
    return t_ext.x_one_slice().get(k - rX, 0)


class ReciprocalSeries:
    """Per-flat truncated Hilbert series and their total."""

    __slots__ = ("per_flat", "total", "trunc")

    def __init__(self, per_flat, total, trunc):
        self.per_flat = dict(per_flat)
        self.total = total
        self.trunc = trunc

    def __repr__(self):
        return f"ReciprocalSeries(trunc={self.trunc}, total={list(self.total)})"


def terao_series(cfg: VectorConfig, N: int) -> ReciprocalSeries:
    """Truncated reciprocal Hilbert series, per flat and in closed form.

    Each flat contributes (number of nbc sets with that closure) times
    (t/(1-t))^rank; the total must match the closed form
    (t/(1-t))^ell * [y^ell T(1/y,0)](t) / t^ell, and a mismatch raises.
    """
    _require_loop_free(cfg)
    if N < 0:
        raise ReciprocalError("truncation order must be nonnegative")
    lattice = matroid.flats(cfg)
    nbc_by_flat = {}
    for I in matroid.nbc_sets(cfg):
        X = matroid.closure(cfg, I)
        nbc_by_flat[X] = nbc_by_flat.get(X, 0) + 1
    per_flat = {}
    for X in lattice:
        r = lattice.rank[X]
        cnt = nbc_by_flat.get(X, 0)
        if r == 0:
            coeffs = [cnt] + [0] * N
        else:
            # (t/(1-t))^r = sum_{k >= r} C(k-1, r-1) t^k
            coeffs = [cnt * comb(k - 1, r - 1) if k >= r else 0 for k in range(N + 1)]
        per_flat[X] = PowerSeries(coeffs)

    ell = lattice.top_rank
    cleared = [0] * (ell + 1)  # y^ell T(1/y, 0)
    for a, c in tutte.tutte_dc(cfg).y_zero_slice().items():
        cleared[ell - a] += c
    if ell == 0:
        total = [cleared[0]] + [0] * N
    else:
        # multiply by (1-t)^(-ell), truncating at N
        total = [0] * (N + 1)
        for j, c in enumerate(cleared):
            if not c:
                continue
            for k in range(j, N + 1):
                total[k] += c * comb(k - j + ell - 1, ell - 1)
    total = PowerSeries(total)

    summed = PowerSeries([0] * (N + 1))
    for s in per_flat.values():
        summed = summed + s
    if summed != total:
        raise SelfCheckError(
            f"per-flat reciprocal series {list(summed)} != closed form {list(total)}"
        )
    return ReciprocalSeries(per_flat, total, N)


def verify_terao(cfg: VectorConfig, N: int) -> dict:
    """Per degree k <= N: the level dimensions sum to the series coefficient.

    Each per-flat dimension is also cross-checked against the independent
    Tutte-coefficient route.
    """
    _require_loop_free(cfg)
    lattice = matroid.flats(cfg)
    series = terao_series(cfg, N)
    sums = []
    holds = True
    routes_agree = True
    for k in range(N + 1):
        dims = level_dims(cfg, k, lattice)
        for X, d in dims.items():
            if d != dim_C_via_tutte(cfg, X, k):
                routes_agree = False
        s = sum(dims.values())
        sums.append(s)
        if s != series.total[k]:
            holds = False
    return {
        "holds": holds and routes_agree,
        "sums": sums,
        "coefficients": list(series.total),
        "routes_agree": routes_agree,
    }
