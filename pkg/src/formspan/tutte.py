"""Bivariate integer polynomials and three Tutte polynomial algorithms.

tutte_dc is the deletion-contraction recursion pinned down by the defining
axioms; tutte_corank_nullity is the 2^n state sum used as ground truth;
tutte_activities sums x^|in(B)| y^|ex(B)| over bases.  The three must agree
exactly, and the test suite holds them to that.
"""

from __future__ import annotations

from math import comb

from . import matroid
from .configs import VectorConfig
from .exact import Matrix


class TutteError(ValueError):
    pass


class CrapoError(TutteError):
    """A subset failed to decompose uniquely; falsifies the activity lemma."""


class BivariatePoly:
    """Sparse integer polynomial in (x, y): {(xexp, yexp): coeff}, no zeros."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def constant(cls, c: int) -> "BivariatePoly":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, a: int, b: int, c: int = 1) -> "BivariatePoly":
        if a < 0 or b < 0:
            raise TutteError("negative exponent")
        return cls({(a, b): c})

    @classmethod
    def var_x(cls) -> "BivariatePoly":
        return cls({(1, 0): 1})

    @classmethod
    def var_y(cls) -> "BivariatePoly":
        return cls({(0, 1): 1})

    def __add__(self, other):
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0) + v
        return BivariatePoly(terms)

    def __sub__(self, other):
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0) - v
        return BivariatePoly(terms)

    def __mul__(self, other):
        if isinstance(other, int):
            return BivariatePoly({k: v * other for k, v in self.terms.items()})
        terms = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                k = (a1 + a2, b1 + b2)
                terms[k] = terms.get(k, 0) + c1 * c2
        return BivariatePoly(terms)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            raise TutteError("negative power")
        out = BivariatePoly.constant(1)
        for _ in range(e):
            out = out * self
        return out

    def shift(self, a: int, b: int) -> "BivariatePoly":
        """Multiply by the monomial x^a y^b."""
        return BivariatePoly({(i + a, j + b): c for (i, j), c in self.terms.items()})

    def evaluate(self, xv, yv):
        total = 0
        for (a, b), c in self.terms.items():
            total += c * xv**a * yv**b
        return total

    def sub_x_affine(self, c0: int, c1: int) -> "BivariatePoly":
        """Substitute x -> c0 + c1 x, expanded exactly."""
        terms = {}
        for (a, b), c in self.terms.items():
            for k in range(a + 1):
                key = (k, b)
                terms[key] = terms.get(key, 0) + c * comb(a, k) * c0 ** (a - k) * c1**k
        return BivariatePoly(terms)

    def y_zero_slice(self) -> dict[int, int]:
        """{xexp: coeff} of the terms free of y."""
        return {a: c for (a, b), c in self.terms.items() if b == 0}

    def x_one_slice(self) -> dict[int, int]:
        """{yexp: coeff} after setting x = 1."""
        out = {}
        for (a, b), c in self.terms.items():
            out[b] = out.get(b, 0) + c
        return {b: c for b, c in out.items() if c}

    def x_degree(self) -> int:
        return max((a for a, _ in self.terms), default=0)

    def sorted_terms(self):
        return sorted(self.terms.items())

    def __eq__(self, other):
        return isinstance(other, BivariatePoly) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def pretty(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in sorted(self.terms.items(), reverse=True):
            mono = " ".join(
                (f"{v}^{e}" if e > 1 else v)
                for v, e in (("x", a), ("y", b))
                if e
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c} {mono}")
        out = " + ".join(parts)
        return out.replace("+ -", "- ")

    def __repr__(self):
        return f"BivariatePoly({self.pretty()})"


ONE = BivariatePoly.constant(1)


def _zero_mask(cfg: VectorConfig) -> int:
    mask = cfg._cache.get("zero_mask")
    if mask is None:
        mask = 0
        for i, f in enumerate(cfg.forms):
            if not any(f):
                mask |= 1 << i
        cfg._cache["zero_mask"] = mask
    return mask


def _contract_live(cfg: VectorConfig, live: int, ebit: int) -> VectorConfig:
    """Child configuration: the live forms other than e, restricted to ker(e)."""
    i = ebit.bit_length()
    kern = Matrix(cfg.field, 1, cfg.ell, cfg.form(i)).kernel_basis()
    keep = []
    m = live ^ ebit
    while m:
        b = m & -m
        m ^= b
        keep.append(b.bit_length())
    if keep:
        rows = Matrix.from_rows(cfg.field, [cfg.form(j) for j in keep]) * kern
        forms = rows.row_lists()
    else:
        forms = []
    labels = [cfg.labels[j - 1] for j in keep]
    return VectorConfig(cfg.field, cfg.ell - 1, forms, labels)


def _dc(cfg, live, rank, memo):
    res = memo.get(live)
    if res is not None:
        return res
    loops = live & _zero_mask(cfg)
    nl = loops.bit_count()
    live2 = live & ~loops
    r2 = rank(live2)
    isth = 0
    m = live2
    while m:
        b = m & -m
        m ^= b
        if rank(live2 ^ b) < r2:
            isth |= b
    ni = isth.bit_count()
    live3 = live2 & ~isth
    if not live3:
        poly = BivariatePoly.monomial(ni, nl)
    else:
        e = live3 & -live3
        deleted = _dc(cfg, live3 ^ e, rank, memo)
        contracted = tutte_dc(_contract_live(cfg, live3, e))
        poly = (deleted + contracted).shift(ni, nl)
    memo[live] = poly
    return poly


def tutte_dc(cfg: VectorConfig) -> BivariatePoly:
    """Tutte polynomial by the defining axioms.

    Loops and isthmuses are stripped as direct-sum factors (y and x), and
    the recursion T = T(M-e) + T(M/e) pivots on the smallest ordinary
    element.  Memoized on the live index set; contraction spawns a child
    configuration with its own table.
    """
    memo = cfg._cache.setdefault("tutte_dc", {})
    return _dc(cfg, (1 << cfg.n) - 1, matroid._ranker(cfg), memo)


def tutte_corank_nullity(cfg: VectorConfig) -> BivariatePoly:
    """State-sum oracle: sum over subsets of (x-1)^corank (y-1)^nullity."""
    if cfg.n > matroid.GROUND_SET_CAP:
        raise TutteError(f"state sum capped at n <= {matroid.GROUND_SET_CAP}")
    rank = matroid._ranker(cfg)
    rtotal = rank((1 << cfg.n) - 1)
    counts = {}

    # DFS over subsets carrying an incremental echelon, so each inclusion
    # costs one row reduction instead of a fresh rank computation.
    from .exact import GF, BitSpan, RowSpan

    gf2 = cfg.field == GF(2)
    vecs = cfg.bit_forms() if gf2 else cfg.forms
    span = BitSpan() if gf2 else RowSpan(cfg.field, cfg.ell)

    def rec(i: int, size: int):
        if i > cfg.n:
            key = (rtotal - span.rank, size - span.rank)
            counts[key] = counts.get(key, 0) + 1
            return
        rec(i + 1, size)
        before = set(span.pivots)
        grew = span.add(vecs[i - 1])
        rec(i + 1, size + 1)
        if grew:
            (added,) = set(span.pivots) - before
            del span.pivots[added]

    rec(1, 0)

    terms = {}
    for (a, b), cnt in counts.items():
        for i in range(a + 1):
            ci = comb(a, i) * (-1) ** (a - i)
            for j in range(b + 1):
                cj = comb(b, j) * (-1) ** (b - j)
                key = (i, j)
                terms[key] = terms.get(key, 0) + cnt * ci * cj
    return BivariatePoly(terms)


def tutte_activities(cfg: VectorConfig) -> BivariatePoly:
    """Sum of x^|in(B)| y^|ex(B)| over bases."""
    terms = {}
    for B in matroid.bases(cfg):
        key = (
            len(matroid.internal_activity(cfg, B)),
            len(matroid.external_activity(cfg, B)),
        )
        terms[key] = terms.get(key, 0) + 1
    return BivariatePoly(terms)


def char_poly(cfg: VectorConfig) -> tuple[int, ...]:
    """Characteristic polynomial (-1)^r T(1 - t, 0), coefficients ascending.

    The zero polynomial is the empty tuple (any configuration with a loop).
    """
    r = matroid.rank_of(cfg, cfg.ground_set())
    sign = (-1) ** r
    coeffs = {}
    for a, c in tutte_dc(cfg).y_zero_slice().items():
        # (1 - t)^a
        for k in range(a + 1):
            coeffs[k] = coeffs.get(k, 0) + sign * c * comb(a, k) * (-1) ** k
    deg = max((k for k, v in coeffs.items() if v), default=-1)
    return tuple(coeffs.get(k, 0) for k in range(deg + 1))


def _divide_y_minus_1(p: BivariatePoly) -> BivariatePoly:
    """Exact division by (y - 1); raises if the remainder is nonzero."""
    by_x = {}
    for (a, b), c in p.terms.items():
        by_x.setdefault(a, {})[b] = c
    terms = {}
    for a, col in by_x.items():
        deg = max(col)
        q = {}
        carry = 0
        for j in range(deg, 0, -1):
            carry = col.get(j, 0) + carry
            q[j - 1] = carry
        if col.get(0, 0) + carry != 0:
            raise TutteError("nonzero remainder dividing by (y - 1)")
        for j, c in q.items():
            if c:
                terms[(a, j)] = c
    return BivariatePoly(terms)


def parallel_tutte_formula(t: BivariatePoly, m: int, r: int) -> BivariatePoly:
    """Tutte polynomial after replacing every element by m parallel copies.

    Computes ((1-y^m)/(1-y))^r * t((xy-x-y+y^m)/(y^m-1), y^m) entirely in
    integer polynomials: denominators are cleared using x-degree <= r, and
    the trailing division by (y-1)^r must be exact or the input is rejected.
    """
    if m < 1:
        raise TutteError("parallel extension needs m >= 1")
    if t.x_degree() > r:
        raise TutteError("x-degree of t exceeds the stated rank")
    x, y = BivariatePoly.var_x(), BivariatePoly.var_y()
    ym = BivariatePoly.monomial(0, m)
    base = x * y - x - y + ym
    ym1 = ym - ONE
    base_pows = [ONE]
    ym1_pows = [ONE]
    for _ in range(r):
        base_pows.append(base_pows[-1] * base)
        ym1_pows.append(ym1_pows[-1] * ym1)
    num = BivariatePoly()
    for (a, b), c in t.terms.items():
        num = num + (base_pows[a] * ym1_pows[r - a] * c).shift(0, m * b)
    for _ in range(r):
        num = _divide_y_minus_1(num)
    return num


def basis_activities(cfg: VectorConfig) -> list[tuple[frozenset, frozenset, frozenset]]:
    """(B, in(B), ex(B)) for every basis, cached on the configuration."""
    cached = cfg._cache.get("basis_activities")
    if cached is None:
        cached = [
            (
                B,
                matroid.internal_activity(cfg, B),
                matroid.external_activity(cfg, B),
            )
            for B in matroid.bases(cfg)
        ]
        cfg._cache["basis_activities"] = cached
    return cached


def crapo_decompose(cfg: VectorConfig, S) -> tuple[frozenset, frozenset, frozenset]:
    """The unique (B, I, J) with S = (B - I) | J, I <= in(B), J <= ex(B).

    Existence and uniqueness is a theorem; finding zero or several
    decompositions is an internal-consistency failure and raises.
    """
    S = frozenset(S)
    matches = []
    for B, inB, exB in basis_activities(cfg):
        I = B - S
        J = S - B
        if I <= inB and J <= exB:
            matches.append((B, I, J))
    if len(matches) != 1:
        raise CrapoError(
            f"subset {sorted(S)} admits {len(matches)} decompositions"
        )
    B, I, J = matches[0]
    if matroid.external_activity(cfg, B - I) != matroid.external_activity(cfg, B):
        raise CrapoError(f"ex(B - I) != ex(B) for basis {sorted(B)}, I={sorted(I)}")
    return matches[0]


def independent_expansion(cfg: VectorConfig) -> BivariatePoly:
    """T(M; 1+x, y) written as sum over independent sets of x^(r-r(I)) y^|ex(I)|."""
    r = matroid.rank_of(cfg, cfg.ground_set())
    terms = {}
    for I in matroid.independent_sets(cfg):
        key = (r - len(I), len(matroid.external_activity(cfg, I)))
        terms[key] = terms.get(key, 0) + 1
    return BivariatePoly(terms)


def coboundary_check(cfg: VectorConfig, lattice=None, contractions=None) -> dict:
    """Flat-sum identity (y-1)^r T(x,y) = sum_X y^|X| chi(M/X; (x-1)(y-1)).

    Every M/X is realized by iterated contraction of a basis of X.
    """
    if lattice is None:
        lattice = matroid.flats(cfg)
    if contractions is None:
        contractions = matroid.flat_contractions(cfg, lattice)
    r = lattice.top_rank
    x, y = BivariatePoly.var_x(), BivariatePoly.var_y()
    lhs = ((y - ONE) ** r) * tutte_dc(cfg)
    acc = {}  # (|X|, lambda power) -> int
    for X in lattice:
        chi = char_poly(contractions[X][0])
        for j, c in enumerate(chi):
            if c:
                key = (len(X), j)
                acc[key] = acc.get(key, 0) + c
    lam = (x - ONE) * (y - ONE)
    maxj = max((j for _, j in acc), default=0)
    lam_pows = [ONE]
    for _ in range(maxj):
        lam_pows.append(lam_pows[-1] * lam)
    rhs = BivariatePoly()
    for (s, j), c in acc.items():
        rhs = rhs + (lam_pows[j] * c).shift(0, s)
    return {"holds": lhs == rhs, "lhs": lhs, "rhs": rhs}
