"""Vector configurations and the four constructions on them.

A configuration is an ordered sequence of n linear forms on K^ell,
indexed 1..n.  Zero forms (loops) and repeated forms are allowed.  After
normalization the forms always span K^ell; non-spanning input is reduced
to coordinates on its row space, which leaves the matroid and all graded
span data unchanged.
"""

from __future__ import annotations

import json

from .exact import GF, QQ, BitSpan, FieldSpec, Matrix, RowSpan


class ConfigError(ValueError):
    pass


class IsthmusDeletionError(ConfigError):
    """Deleting an isthmus would leave a non-spanning sequence."""


class LoopContractionError(ConfigError):
    """Contraction is only defined for non-loops."""


class VectorConfig:
    """Ordered forms over an exact field, with labels back to the root.

    labels[j-1] is the index that position j carried in the configuration
    this one was derived from (deletion, contraction, restriction and
    parallel extension all keep the map); freshly built configurations are
    their own root with identity labels.
    """

    __slots__ = ("field", "ell", "forms", "labels", "_cache")

    def __init__(self, field, ell, forms, labels=None):
        self.field = field
        self.ell = ell
        self.forms = tuple(tuple(f) for f in forms)
        for f in self.forms:
            if len(f) != ell:
                raise ConfigError("form length does not match ambient dimension")
        self.labels = tuple(labels) if labels else tuple(range(1, len(self.forms) + 1))
        if len(self.labels) != len(self.forms):
            raise ConfigError("label count does not match form count")
        self._cache = {}

    @property
    def n(self) -> int:
        return len(self.forms)

    def ground_set(self) -> frozenset:
        return frozenset(range(1, self.n + 1))

    def form(self, i: int) -> tuple:
        """The i-th form, 1-based."""
        return self.forms[i - 1]

    def is_loop(self, i: int) -> bool:
        return not any(self.forms[i - 1])

    def to_root(self, subset) -> frozenset:
        """Map a subset of positions to the root configuration's indices."""
        return frozenset(self.labels[i - 1] for i in subset)

    def bit_forms(self) -> list[int]:
        """GF(2) forms packed as ints, bit c = coordinate c."""
        if self.field != GF(2):
            raise ConfigError("bit_forms is a GF(2) accessor")
        return [sum(1 << c for c, v in enumerate(f) if v) for f in self.forms]

    def __eq__(self, other):
        return (
            isinstance(other, VectorConfig)
            and self.field == other.field
            and self.ell == other.ell
            and self.forms == other.forms
            and self.labels == other.labels
        )

    def __hash__(self):
        return hash((self.field, self.ell, self.forms, self.labels))

    def __repr__(self):
        return f"VectorConfig({self.field}, ell={self.ell}, n={self.n})"


def _reduce_coordinates(field, forms):
    """Rewrite forms on a basis of their row space (rref pivot coordinates)."""
    if not forms:
        return 0, []
    mat = Matrix.from_rows(field, forms)
    red, pivots = mat.rref()
    # In rref, a row vector's coefficients on the nonzero rref rows are just
    # its pivot-column entries.
    return len(pivots), [tuple(f[c] for c in pivots) for f in forms]


def make_config(field, vectors, ell=None) -> VectorConfig:
    """Validated configuration from raw coefficient rows.

    Rows are coerced into the field.  If the rows only span a rank-r
    subspace with r < ell, coordinates are canonically reduced to r
    dimensions.
    """
    rows = [list(r) for r in vectors]
    if rows:
        widths = {len(r) for r in rows}
        if len(widths) != 1:
            raise ConfigError("ragged rows")
        inferred = widths.pop()
    else:
        inferred = 0
    if ell is None:
        ell = inferred
    elif rows and ell != inferred:
        raise ConfigError(f"explicit ell={ell} does not match row length {inferred}")
    if not rows and ell > 0:
        raise ConfigError("no forms given but ambient dimension is positive")
    forms = [tuple(field.coerce(v) for v in r) for r in rows]
    rank = Matrix.from_rows(field, forms).rank() if forms else 0
    if rank < ell:
        ell, forms = _reduce_coordinates(field, forms)
    return VectorConfig(field, ell, forms)


def parse_field(obj) -> FieldSpec:
    if not isinstance(obj, dict) or "type" not in obj:
        raise ConfigError("field must be an object with a 'type' key")
    if obj["type"] == "GF":
        try:
            return GF(obj.get("p", 0))
        except ValueError as e:
            raise ConfigError(str(e)) from None
    if obj["type"] == "Q":
        return QQ
    raise ConfigError(f"unknown field type {obj['type']!r}")


def parse_config(text: str) -> VectorConfig:
    """Configuration from the JSON wire format.

    {"field": {"type": "GF", "p": 2} | {"type": "Q"},
     "vectors": [[...], ...], "ell": optional int for empty vectors}
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON: {e}") from None
    if not isinstance(data, dict):
        raise ConfigError("top-level JSON value must be an object")
    field = parse_field(data.get("field"))
    vectors = data.get("vectors")
    if not isinstance(vectors, list):
        raise ConfigError("'vectors' must be a list of rows")
    return make_config(field, vectors, ell=data.get("ell"))


def config_to_json(cfg: VectorConfig) -> str:
    field = {"type": "GF", "p": cfg.field.p} if cfg.field.kind == "GF" else {"type": "Q"}
    vectors = [[str(v) if cfg.field.kind == "Q" else v for v in f] for f in cfg.forms]
    data = {"field": field, "vectors": vectors}
    if not vectors:
        data["ell"] = cfg.ell
    return json.dumps(data, sort_keys=True)


# -- constructions ---------------------------------------------------------


def _check_index(cfg, i):
    if not 1 <= i <= cfg.n:
        raise ConfigError(f"index {i} outside ground set 1..{cfg.n}")


def _rank_without(cfg, i) -> int:
    rows = [f for j, f in enumerate(cfg.forms, 1) if j != i]
    if not rows:
        return 0
    return Matrix.from_rows(cfg.field, rows).rank()


def delete(cfg: VectorConfig, i: int, allow_nonspanning: bool = False) -> VectorConfig:
    """Remove the form in position i; the matroid becomes M - i.

    Deleting an isthmus leaves forms that no longer span K^ell; that is
    rejected unless allow_nonspanning is set, in which case coordinates are
    reduced exactly as for non-spanning input.
    """
    _check_index(cfg, i)
    forms = [f for j, f in enumerate(cfg.forms, 1) if j != i]
    labels = [l for j, l in enumerate(cfg.labels, 1) if j != i]
    ell = cfg.ell
    if _rank_without(cfg, i) < cfg.ell:
        if not allow_nonspanning:
            raise IsthmusDeletionError(
                f"element {i} is an isthmus; deletion would not span"
            )
        ell, forms = _reduce_coordinates(cfg.field, forms)
    return VectorConfig(cfg.field, ell, forms, labels)


def contract(cfg: VectorConfig, i: int) -> VectorConfig:
    """Restrict the other forms to ker(alpha_i); the matroid becomes M / i."""
    _check_index(cfg, i)
    if cfg.is_loop(i):
        raise LoopContractionError(f"element {i} is a loop; cannot contract")
    kern = Matrix(cfg.field, 1, cfg.ell, cfg.form(i)).kernel_basis()
    rest = [f for j, f in enumerate(cfg.forms, 1) if j != i]
    labels = [l for j, l in enumerate(cfg.labels, 1) if j != i]
    if rest:
        mapped = Matrix.from_rows(cfg.field, rest) * kern
        forms = mapped.row_lists()
    else:
        forms = []
    return VectorConfig(cfg.field, cfg.ell - 1, forms, labels)


def parallel_extension(cfg: VectorConfig, m: int) -> VectorConfig:
    """The sequence repeated m times; copy c of position i sits at (c-1)n + i."""
    if m < 1:
        raise ConfigError("parallel extension needs m >= 1")
    return VectorConfig(cfg.field, cfg.ell, cfg.forms * m, cfg.labels * m)


def direct_sum(a: VectorConfig, b: VectorConfig) -> VectorConfig:
    """Concatenate the sequences in K^(ell+ell'); the matroid is M + M'."""
    if a.field != b.field:
        raise ConfigError("direct sum needs matching fields")
    z = a.field.zero
    forms = [f + (z,) * b.ell for f in a.forms]
    forms += [(z,) * a.ell + f for f in b.forms]
    return VectorConfig(a.field, a.ell + b.ell, forms)


def _closure_bits(cfg: VectorConfig, members) -> frozenset:
    """Closure of a subset, computed locally to avoid a matroid import."""
    if cfg.field == GF(2):
        span = BitSpan()
        bits = cfg.bit_forms()
        for i in members:
            span.add(bits[i - 1])
        return frozenset(i for i in range(1, cfg.n + 1) if span.contains(bits[i - 1]))
    span = RowSpan(cfg.field, cfg.ell)
    for i in members:
        span.add(cfg.form(i))
    return frozenset(
        i for i in range(1, cfg.n + 1) if span.contains(cfg.form(i))
    )


def restrict_to_flat(cfg: VectorConfig, flat) -> VectorConfig:
    """Keep only the forms indexed by a flat, on rank(flat) coordinates."""
    members = sorted(flat)
    if any(not 1 <= i <= cfg.n for i in members):
        raise ConfigError("flat contains indices outside the ground set")
    if _closure_bits(cfg, members) != frozenset(members):
        raise ConfigError(f"{sorted(flat)} is not a flat")
    forms = [cfg.form(i) for i in members]
    labels = [cfg.labels[i - 1] for i in members]
    ell, forms = _reduce_coordinates(cfg.field, forms)
    return VectorConfig(cfg.field, ell, forms, labels)
