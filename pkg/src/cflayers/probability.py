"""Product-form joint distributions for relay networks and entropy queries.

The network has a source (node 1), relays 2..d-1, and a destination (node d).
The modeled variables are the source input X1, per-relay inputs Xi,
observations Yi and compressions Yhi, and the destination observation Yd.
The joint factors as

    p(x1) * prod_i p(xi) * p(y2..yd | x1..x_{d-1}) * prod_i p(yhi | xi, yi)

and is stored as one dense table.  The source observation y1 and the
destination input x_d never enter any computed quantity and are marginalized
away at construction.

All entropies are in bits.  Queries are pure and cached per variable set, so
a `JointPmf` can be shared freely across threads once built.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import (
    InvalidSpecError,
    TableTooLargeError,
    UnknownVariableError,
)

NORMALIZATION_TOL = 1e-12
MAX_TABLE_CELLS = 1 << 24
ZERO_MASS = 1e-15  # probabilities at or below this count as exact zeros


@dataclass(frozen=True)
class Variable:
    """One random variable of the network: kind in {x, y, yhat} plus a node id.

    X1 is ("x", 1); the destination observation is ("y", d); relays own the
    ("x", i), ("y", i), ("yhat", i) triples.
    """

    kind: str
    node: int
    size: int

    @property
    def label(self) -> str:
        prefix = {"x": "X", "y": "Y", "yhat": "Yh"}[self.kind]
        return f"{prefix}{self.node}"

    def __repr__(self):
        return f"Variable({self.label}, size={self.size})"


@dataclass(frozen=True)
class RelaySpec:
    """Per-relay alphabets, input distribution, and compression kernel."""

    node: int
    x_alphabet: int
    y_alphabet: int
    yhat_alphabet: int
    p_x: np.ndarray  # shape (x_alphabet,)
    p_yhat: np.ndarray  # shape (x_alphabet, y_alphabet, yhat_alphabet)


@dataclass(frozen=True)
class ChannelSpec:
    """Factored description of the network distribution.

    ``channel`` is indexed by the inputs (x1, x2, ..., x_{d-1}) and then the
    outputs (y2, ..., y_{d-1}, yd), row-major with the last index fastest.
    """

    d: int
    source_alphabet: int
    p_x1: np.ndarray
    relays: tuple[RelaySpec, ...]
    dest_alphabet: int
    channel: np.ndarray

    @property
    def relay_nodes(self) -> tuple[int, ...]:
        return tuple(r.node for r in self.relays)

    def to_json_obj(self) -> dict:
        return {
            "d": self.d,
            "source": {
                "alphabet": self.source_alphabet,
                "p_x1": self.p_x1.tolist(),
            },
            "relays": [
                {
                    "node": r.node,
                    "x_alphabet": r.x_alphabet,
                    "y_alphabet": r.y_alphabet,
                    "yhat_alphabet": r.yhat_alphabet,
                    "p_x": r.p_x.tolist(),
                    "p_yhat_given_x_y": r.p_yhat.tolist(),
                }
                for r in self.relays
            ],
            "destination": {"y_alphabet": self.dest_alphabet},
            "channel": self.channel.tolist(),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2, sort_keys=True) + "\n"

    def save(self, path) -> None:
        with open(path, "w") as fh:
            fh.write(self.dumps())


def _as_table(raw, name: str) -> np.ndarray:
    try:
        arr = np.asarray(raw, dtype=float)
    except (ValueError, TypeError) as exc:
        raise InvalidSpecError(f"table {name} is not rectangular: {exc}") from exc
    if arr.dtype == object:
        raise InvalidSpecError(f"table {name} is not rectangular")
    return arr


def spec_from_json_obj(obj: dict) -> ChannelSpec:
    """Build a ChannelSpec from the documented JSON structure.

    Structural problems (missing keys, ragged arrays) raise InvalidSpecError;
    normalization and shape checks are deferred to `validate_spec`.
    """
    try:
        d = int(obj["d"])
        source = obj["source"]
        relays_raw = obj["relays"]
        dest = obj["destination"]
        channel_raw = obj["channel"]
    except (KeyError, TypeError) as exc:
        raise InvalidSpecError(f"channel spec is missing field {exc}") from exc

    relays = []
    for entry in relays_raw:
        try:
            relays.append(
                RelaySpec(
                    node=int(entry["node"]),
                    x_alphabet=int(entry["x_alphabet"]),
                    y_alphabet=int(entry["y_alphabet"]),
                    yhat_alphabet=int(entry["yhat_alphabet"]),
                    p_x=_as_table(entry["p_x"], f"p_x{entry.get('node', '?')}"),
                    p_yhat=_as_table(
                        entry["p_yhat_given_x_y"],
                        f"p_yhat{entry.get('node', '?')}",
                    ),
                )
            )
        except (KeyError, TypeError) as exc:
            raise InvalidSpecError(f"relay entry is missing field {exc}") from exc

    return ChannelSpec(
        d=d,
        source_alphabet=int(source["alphabet"]),
        p_x1=_as_table(source["p_x1"], "p_x1"),
        relays=tuple(relays),
        dest_alphabet=int(dest["y_alphabet"]),
        channel=_as_table(channel_raw, "channel"),
    )


def load_spec(path) -> ChannelSpec:
    with open(path) as fh:
        obj = json.load(fh)
    return spec_from_json_obj(obj)


@dataclass(frozen=True)
class ValidationIssue:
    kind: str  # "structure" | "shape" | "range" | "normalization"
    table: str
    message: str

    def __str__(self):
        return f"[{self.kind}] {self.table}: {self.message}"


def _check_distribution(arr: np.ndarray, name: str, length: int, issues: list) -> None:
    if arr.shape != (length,):
        issues.append(
            ValidationIssue("shape", name, f"expected {length} entries, got shape {arr.shape}")
        )
        return
    _check_range(arr, name, issues)
    total = float(arr.sum())
    if abs(total - 1.0) > NORMALIZATION_TOL:
        issues.append(ValidationIssue("normalization", name, f"sums to {total!r}, not 1"))


def _check_range(arr: np.ndarray, name: str, issues: list) -> None:
    if np.any(arr < -NORMALIZATION_TOL) or np.any(arr > 1.0 + NORMALIZATION_TOL):
        issues.append(ValidationIssue("range", name, "entries outside [0, 1]"))


def _check_conditional(arr: np.ndarray, name: str, shape: tuple, n_cond: int, issues: list) -> None:
    """Rows over the trailing axes beyond the first n_cond must each sum to 1."""
    if arr.shape != shape:
        issues.append(
            ValidationIssue("shape", name, f"expected shape {shape}, got {arr.shape}")
        )
        return
    _check_range(arr, name, issues)
    sums = arr.sum(axis=tuple(range(n_cond, arr.ndim)))
    bad = np.argwhere(np.abs(sums - 1.0) > NORMALIZATION_TOL)
    for idx in bad[:8]:  # cap the noise from a single broken table
        key = tuple(int(v) for v in idx)
        issues.append(
            ValidationIssue(
                "normalization", name, f"row {key} sums to {float(sums[tuple(idx)])!r}, not 1"
            )
        )


def validate_spec(spec: ChannelSpec) -> list[ValidationIssue]:
    """Check shapes, ranges, and normalization; an empty list means well-formed."""
    issues: list[ValidationIssue] = []
    if spec.d < 3:
        issues.append(ValidationIssue("structure", "d", "need at least one relay (d >= 3)"))
        return issues
    expected_nodes = tuple(range(2, spec.d))
    if spec.relay_nodes != expected_nodes:
        issues.append(
            ValidationIssue(
                "structure",
                "relays",
                f"relay nodes {spec.relay_nodes} do not match 2..d-1 = {expected_nodes}",
            )
        )
        return issues

    _check_distribution(spec.p_x1, "p_x1", spec.source_alphabet, issues)
    for r in spec.relays:
        _check_distribution(r.p_x, f"p_x{r.node}", r.x_alphabet, issues)
        _check_conditional(
            r.p_yhat,
            f"p_yhat{r.node}",
            (r.x_alphabet, r.y_alphabet, r.yhat_alphabet),
            2,
            issues,
        )

    in_shape = (spec.source_alphabet,) + tuple(r.x_alphabet for r in spec.relays)
    out_shape = tuple(r.y_alphabet for r in spec.relays) + (spec.dest_alphabet,)
    _check_conditional(spec.channel, "channel", in_shape + out_shape, len(in_shape), issues)
    return issues


class JointPmf:
    """Dense joint pmf over (X1, {Xi, Yi, Yhi} per relay, Yd).  Immutable.

    Axes follow that canonical order with the last index fastest.  Entropy
    queries marginalize the table and are memoized by variable-set mask;
    concurrent reads are safe (worst case a value is computed twice).
    """

    def __init__(self, variables: tuple[Variable, ...], table: np.ndarray):
        table = np.asarray(table, dtype=float)
        if table.shape != tuple(v.size for v in variables):
            raise InvalidSpecError("joint table shape does not match its variables")
        if np.any(table < -NORMALIZATION_TOL):
            raise InvalidSpecError("joint table has negative entries")
        mass = float(table.sum())
        if abs(mass - 1.0) > NORMALIZATION_TOL:
            raise InvalidSpecError(f"joint table mass is {mass!r}, not 1")
        table = table.copy()
        table.setflags(write=False)
        self._table = table
        self._variables = tuple(variables)
        self._axis = {v: i for i, v in enumerate(self._variables)}
        self._relays = tuple(
            v.node for v in self._variables if v.kind == "x" and v.node != 1
        )
        self._cache: dict[int, float] = {}

    # -- structure ----------------------------------------------------------
    @property
    def table(self) -> np.ndarray:
        return self._table

    @property
    def variables(self) -> tuple[Variable, ...]:
        return self._variables

    @property
    def relays(self) -> tuple[int, ...]:
        return self._relays

    @property
    def relay_set(self) -> frozenset[int]:
        return frozenset(self._relays)

    @property
    def d(self) -> int:
        return self._relays[-1] + 1 if self._relays else 3

    def _var(self, kind: str, node: int) -> Variable:
        for v in self._variables:
            if v.kind == kind and v.node == node:
                return v
        raise UnknownVariableError(f"no variable {kind}{node} in this joint")

    @property
    def x1(self) -> Variable:
        return self._var("x", 1)

    @property
    def yd(self) -> Variable:
        return self._var("y", self.d)

    def x(self, node: int) -> Variable:
        return self._var("x", node)

    def y(self, node: int) -> Variable:
        return self._var("y", node)

    def yhat(self, node: int) -> Variable:
        return self._var("yhat", node)

    def xs(self, nodes) -> frozenset[Variable]:
        return frozenset(self.x(i) for i in nodes)

    def ys(self, nodes) -> frozenset[Variable]:
        return frozenset(self.y(i) for i in nodes)

    def yhats(self, nodes) -> frozenset[Variable]:
        return frozenset(self.yhat(i) for i in nodes)

    # -- queries --------------------------------------------------------------
    def _mask(self, variables) -> int:
        mask = 0
        for v in variables:
            axis = self._axis.get(v)
            if axis is None:
                raise UnknownVariableError(f"{v!r} does not belong to this joint")
            mask |= 1 << axis
        return mask

    def marginal(self, variables) -> np.ndarray:
        """Marginal table over `variables`, axes in canonical order."""
        mask = self._mask(variables)
        drop = tuple(i for i in range(len(self._variables)) if not (mask >> i) & 1)
        return self._table.sum(axis=drop)

    def entropy(self, variables) -> float:
        """Joint Shannon entropy H(variables) in bits; H(empty) = 0."""
        mask = self._mask(variables)
        cached = self._cache.get(mask)
        if cached is not None:
            return cached
        marg = self.marginal(variables).ravel()
        probs = marg[marg > ZERO_MASS]
        value = float(max(-np.sum(probs * np.log2(probs)), 0.0))
        self._cache[mask] = value
        return value

    def cond_entropy(self, a, b) -> float:
        """H(a | b) = H(a u b) - H(b), in bits."""
        a = frozenset(a)
        b = frozenset(b)
        return self.entropy(a | b) - self.entropy(b)

    def mutual_info(self, a, b, c=frozenset()) -> float:
        """I(a ; b | c) in bits; tiny negatives from rounding are clamped to 0."""
        a = frozenset(a)
        b = frozenset(b)
        c = frozenset(c)
        value = self.cond_entropy(a, c) - self.cond_entropy(a, b | c)
        if -1e-9 < value < 0.0:
            return 0.0
        return value

    def pair_entropy_sum(self, nodes) -> float:
        """Sum over the given relays of H(Xi, Yhi); 0 for the empty set."""
        return sum(self.entropy({self.x(i), self.yhat(i)}) for i in nodes)


def build_joint(spec: ChannelSpec, max_cells: int = MAX_TABLE_CELLS) -> JointPmf:
    """Multiply the spec's factors into the dense joint table.

    Raises InvalidSpecError when validation fails and TableTooLargeError when
    the table would exceed `max_cells` entries.
    """
    issues = validate_spec(spec)
    if issues:
        raise InvalidSpecError(
            "channel spec failed validation: " + "; ".join(str(i) for i in issues),
            issues,
        )

    variables = [Variable("x", 1, spec.source_alphabet)]
    for r in spec.relays:
        variables.append(Variable("x", r.node, r.x_alphabet))
        variables.append(Variable("y", r.node, r.y_alphabet))
        variables.append(Variable("yhat", r.node, r.yhat_alphabet))
    variables.append(Variable("y", spec.d, spec.dest_alphabet))

    cells = 1
    for v in variables:
        cells *= v.size
    if cells > max_cells:
        raise TableTooLargeError(
            f"joint table needs {cells} cells, above the cap of {max_cells}"
        )

    # One einsum over all factors; subscript letters assigned per variable.
    letters = {}

    def letter(kind, node):
        if (kind, node) not in letters:
            letters[(kind, node)] = chr(ord("a") + len(letters))
        return letters[(kind, node)]

    operands = []
    subs = []
    subs.append(letter("x", 1))
    operands.append(spec.p_x1)
    for r in spec.relays:
        subs.append(letter("x", r.node))
        operands.append(r.p_x)
    chan_sub = letter("x", 1)
    for r in spec.relays:
        chan_sub += letter("x", r.node)
    for r in spec.relays:
        chan_sub += letter("y", r.node)
    chan_sub += letter("y", spec.d)
    subs.append(chan_sub)
    operands.append(spec.channel)
    for r in spec.relays:
        subs.append(letter("x", r.node) + letter("y", r.node) + letter("yhat", r.node))
        operands.append(r.p_yhat)

    out = letter("x", 1)
    for r in spec.relays:
        out += letter("x", r.node) + letter("y", r.node) + letter("yhat", r.node)
    out += letter("y", spec.d)

    table = np.einsum(",".join(subs) + "->" + out, *operands)
    return JointPmf(tuple(variables), table)
