"""The matroid realized by a vector configuration.

Everything here is driven by exact rank computations on subsets of the
forms.  Subsets are frozensets of 1-based indices in the public API;
bitmasks internally.  Ground-set order matters for the activity notions
and is always the input order 1..n.
"""

from __future__ import annotations

from itertools import combinations

from .configs import VectorConfig, contract, delete
from .exact import GF, BitSpan, RowSpan

GROUND_SET_CAP = 24


class MatroidError(ValueError):
    pass


class DependentSetError(MatroidError):
    pass


class NotABasisError(MatroidError):
    pass


def _bits(subset) -> int:
    b = 0
    for i in subset:
        b |= 1 << (i - 1)
    return b


def _members(bits: int) -> frozenset:
    out = []
    i = 1
    while bits:
        if bits & 1:
            out.append(i)
        bits >>= 1
        i += 1
    return frozenset(out)


def _ranker(cfg: VectorConfig):
    """Cached rank-of-bitmask function for one configuration."""
    cache = cfg._cache.setdefault("rank_bits", {})
    if cfg.field == GF(2):
        bitforms = cfg._cache.setdefault("bit_forms", cfg.bit_forms())

        def rank(bits: int) -> int:
            r = cache.get(bits)
            if r is None:
                span = BitSpan()
                m = bits
                while m:
                    b = m & -m
                    m ^= b
                    span.add(bitforms[b.bit_length() - 1])
                r = cache[bits] = span.rank
            return r

    else:

        def rank(bits: int) -> int:
            r = cache.get(bits)
            if r is None:
                span = RowSpan(cfg.field, cfg.ell)
                m = bits
                while m:
                    b = m & -m
                    m ^= b
                    span.add(cfg.forms[b.bit_length() - 1])
                r = cache[bits] = span.rank
            return r

    return rank


def rank_of(cfg: VectorConfig, subset) -> int:
    """Rank of the forms indexed by the subset; loops contribute nothing."""
    return _ranker(cfg)(_bits(subset))


def closure(cfg: VectorConfig, subset) -> frozenset:
    """Smallest flat containing the subset."""
    rank = _ranker(cfg)
    bits = _bits(subset)
    r = rank(bits)
    return frozenset(
        i for i in range(1, cfg.n + 1) if rank(bits | (1 << (i - 1))) == r
    )


class FlatLattice:
    """All flats with their ranks, ordered by (rank, size, members)."""

    def __init__(self, pairs):
        self.rank = dict(pairs)
        self.flats = sorted(self.rank, key=lambda X: (self.rank[X], len(X), sorted(X)))

    def __iter__(self):
        return iter(self.flats)

    def __len__(self):
        return len(self.flats)

    def __contains__(self, X):
        return frozenset(X) in self.rank

    @property
    def bottom(self) -> frozenset:
        return self.flats[0]

    @property
    def top(self) -> frozenset:
        return self.flats[-1]

    @property
    def top_rank(self) -> int:
        return self.rank[self.top]

    def of_rank(self, r: int) -> list[frozenset]:
        return [X for X in self.flats if self.rank[X] == r]

    def hyperplanes(self) -> list[frozenset]:
        return self.of_rank(self.top_rank - 1)


def _independent_dfs(cfg: VectorConfig):
    """Yield (members_tuple, span) for every independent set, in lex order."""
    gf2 = cfg.field == GF(2)
    vecs = cfg.bit_forms() if gf2 else cfg.forms
    span = BitSpan() if gf2 else RowSpan(cfg.field, cfg.ell)

    def grow(prefix, start):
        yield prefix, span
        for i in range(start, cfg.n + 1):
            v = vecs[i - 1]
            before = set(span.pivots)
            if span.add(v):
                yield from grow(prefix + (i,), i + 1)
                (added,) = set(span.pivots) - before
                del span.pivots[added]

    yield from grow((), 1)


def independent_sets(cfg: VectorConfig) -> list[frozenset]:
    """All independent sets, in lexicographic order (empty set first)."""
    return [frozenset(t) for t, _ in _independent_dfs(cfg)]


def bases(cfg: VectorConfig) -> list[frozenset]:
    r = rank_of(cfg, cfg.ground_set())
    return [I for I in independent_sets(cfg) if len(I) == r]


def flats(cfg: VectorConfig) -> FlatLattice:
    """Every flat, found as the closure of an independent set."""
    gf2 = cfg.field == GF(2)
    vecs = cfg.bit_forms() if gf2 else cfg.forms
    seen = {}
    for members, span in _independent_dfs(cfg):
        flat = frozenset(
            i for i in range(1, cfg.n + 1) if span.contains(vecs[i - 1])
        )
        seen.setdefault(flat, len(members))
    return FlatLattice(seen.items())


def element_status(cfg: VectorConfig, i: int) -> str:
    """'loop', 'isthmus', or 'ordinary'."""
    if cfg.is_loop(i):
        return "loop"
    rank = _ranker(cfg)
    full = (1 << cfg.n) - 1
    if rank(full & ~(1 << (i - 1))) < rank(full):
        return "isthmus"
    return "ordinary"


def circuits(cfg: VectorConfig) -> list[frozenset]:
    """Minimal dependent sets, exhaustively over subset sizes <= rank + 1."""
    if cfg.n > GROUND_SET_CAP:
        raise MatroidError(f"circuit enumeration capped at n <= {GROUND_SET_CAP}")
    rank = _ranker(cfg)
    r = rank((1 << cfg.n) - 1)
    found = []
    for k in range(1, min(r + 1, cfg.n) + 1):
        for combo in combinations(range(1, cfg.n + 1), k):
            bits = _bits(combo)
            if rank(bits) == k:
                continue
            if all(
                rank(bits & ~(1 << (e - 1))) == k - 1 for e in combo
            ):
                found.append(frozenset(combo))
    return sorted(found, key=lambda C: (len(C), sorted(C)))


def cocircuits(cfg: VectorConfig) -> list[frozenset]:
    """Complements of the hyperplane flats."""
    E = cfg.ground_set()
    out = [E - H for H in flats(cfg).hyperplanes()]
    return sorted(out, key=lambda C: (len(C), sorted(C)))


def external_activity(cfg: VectorConfig, I) -> frozenset:
    """Elements e outside I that are the minimum of the circuit in I + e."""
    I = frozenset(I)
    rank = _ranker(cfg)
    bits = _bits(I)
    if rank(bits) != len(I):
        raise DependentSetError(f"{sorted(I)} is dependent")
    active = []
    for e in range(1, cfg.n + 1):
        if e in I:
            continue
        ebit = 1 << (e - 1)
        if rank(bits | ebit) == len(I) + 1:
            continue  # I + e still independent, no circuit
        # Fundamental circuit: members whose removal leaves an independent set.
        cmin = e
        union = bits | ebit
        for f in I:
            if f >= cmin:
                continue
            if rank(union & ~(1 << (f - 1))) == len(I):
                cmin = f
                break
        if cmin == e:
            active.append(e)
    return frozenset(active)


def internal_activity(cfg: VectorConfig, B) -> frozenset:
    """Elements of a basis that are minimal in their fundamental cocircuit.

    The fundamental cocircuit of e in B is E - closure(B - e), the unique
    cocircuit avoiding B - e.
    """
    B = frozenset(B)
    r = rank_of(cfg, cfg.ground_set())
    if len(B) != r or rank_of(cfg, B) != r:
        raise NotABasisError(f"{sorted(B)} is not a basis")
    active = []
    for e in B:
        hyper = closure(cfg, B - {e})
        cocirc = cfg.ground_set() - hyper
        if min(cocirc) == e:
            active.append(e)
    return frozenset(active)


def nbc_sets(cfg: VectorConfig) -> list[frozenset]:
    """Independent sets with no externally active element.

    A loop e has fundamental circuit {e} and broken circuit {}, so any
    configuration with a loop has no nbc sets at all.
    """
    return [I for I in independent_sets(cfg) if not external_activity(cfg, I)]


def activity_cell_counts(cfg: VectorConfig) -> dict:
    """(closure(I), |I + ex(I)|) -> number of independent sets I."""
    counts = {}
    for I in independent_sets(cfg):
        key = (closure(cfg, I), len(I | external_activity(cfg, I)))
        counts[key] = counts.get(key, 0) + 1
    return counts


def contract_by_flat(cfg: VectorConfig, X):
    """Configuration realizing M / X on ground set E - X.

    Contracts a basis of X one element at a time, deleting the members of
    X that become loops along the way.  Returns (config, origin) where
    origin maps the result's positions to cfg's positions.
    """
    child = cfg
    origin = list(range(1, cfg.n + 1))
    members = set(X)
    while True:
        pos = next(
            (
                p
                for p in range(1, child.n + 1)
                if origin[p - 1] in members and not child.is_loop(p)
            ),
            None,
        )
        if pos is None:
            break
        child = contract(child, pos)
        origin.pop(pos - 1)
    for p in range(child.n, 0, -1):
        if origin[p - 1] in members:
            child = delete(child, p)
            origin.pop(p - 1)
    return child, tuple(origin)


def flat_contractions(cfg: VectorConfig, lattice: FlatLattice | None = None) -> dict:
    """M / X for every flat X, sharing contraction chains down the lattice.

    Returns {flat: (config, origin)} with origin mapping result positions
    back to cfg positions.
    """
    if lattice is None:
        lattice = flats(cfg)
    out = {}
    by_rank = {}
    for X in lattice:
        by_rank.setdefault(lattice.rank[X], []).append(X)
    for r in sorted(by_rank):
        for X in by_rank[r]:
            if r == 0:
                out[X] = contract_by_flat(cfg, X)
                continue
            Y = next(W for W in by_rank[r - 1] if W <= X)
            base, base_origin = out[Y]
            child = base
            origin = list(base_origin)
            extra = X - Y
            pos = next(
                p for p in range(1, child.n + 1) if origin[p - 1] in extra
            )
            child = contract(child, pos)
            origin.pop(pos - 1)
            for p in range(child.n, 0, -1):
                if origin[p - 1] in extra:
                    child = delete(child, p)
                    origin.pop(p - 1)
            out[X] = (child, tuple(origin))
    return out
