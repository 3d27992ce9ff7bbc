"""Ordered partitions of the relay set and the shift operator.

A layering assigns every relay a layer index; the index is the extra number
of blocks the destination waits before decoding that relay's compression
(shallow layers are decoded first, deeper layers lean on them).  Layers other
than the last may be empty.  `shift` moves a chosen subset one layer deeper,
which is the single move the region-repair iteration uses.

Two layerings that differ only by leading empty layers describe the same
rate region (their staged constraints coincide term by term), so
`canonicalize` strips leading empties; their decode schedules still differ
by a constant delay offset, which is why stripping is not done implicitly.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from .errors import (
    IndexOutOfRangeError,
    InvalidSubsetError,
    TooManyRelaysError,
)

MAX_ENUM_RELAYS = 6


@dataclass(frozen=True)
class Layering:
    """Ordered tuple of disjoint relay subsets covering the relay set."""

    layers: tuple[frozenset[int], ...]

    @property
    def depth(self) -> int:
        return len(self.layers)

    @property
    def relays(self) -> frozenset[int]:
        out: frozenset[int] = frozenset()
        for layer in self.layers:
            out |= layer
        return out

    def layer_of(self, node: int) -> int:
        for l, layer in enumerate(self.layers):
            if node in layer:
                return l
        raise KeyError(f"node {node} is in no layer")

    def to_text(self) -> str:
        return "|".join(",".join(str(i) for i in sorted(layer)) for layer in self.layers)

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"Layering({self.to_text()!r})"


def make_layering(layers) -> Layering:
    return Layering(tuple(frozenset(layer) for layer in layers))


def parse_layering(text: str) -> Layering:
    """Parse the `2,4|3` syntax (shallowest layer first, empty segments allowed)."""
    layers = []
    for segment in text.split("|"):
        segment = segment.strip()
        if not segment:
            layers.append(frozenset())
            continue
        layers.append(frozenset(int(tok) for tok in segment.split(",")))
    return Layering(tuple(layers))


def validate_layering(layering: Layering, relays) -> list[str]:
    """List every violated structural condition; empty means valid.

    Layers must be relay subsets, pairwise disjoint, cover all relays, and
    the last layer must be nonempty (interior empty layers are fine).
    """
    relays = frozenset(relays)
    problems = []
    seen: set[int] = set()
    for l, layer in enumerate(layering.layers):
        foreign = layer - relays
        if foreign:
            problems.append(f"layer {l} has nodes outside the relay set: {sorted(foreign)}")
        overlap = layer & seen
        if overlap:
            problems.append(f"layer {l} repeats nodes already placed: {sorted(overlap)}")
        seen |= layer
    missing = relays - seen
    if missing:
        problems.append(f"nodes in no layer: {sorted(missing)}")
    if not layering.layers or not layering.layers[-1]:
        problems.append("last layer is empty")
    return problems


def canonicalize(layering: Layering) -> Layering:
    """Strip leading empty layers; interior empties are meaningful and kept."""
    layers = list(layering.layers)
    while len(layers) > 1 and not layers[0]:
        layers.pop(0)
    return Layering(tuple(layers))


def compact(layering: Layering) -> Layering:
    """Drop every empty layer, interior ones included.

    Unlike `canonicalize` this changes the region in general (the staged
    pairing tightens), but only ever outward: closing a gap conditions each
    stage on at least as much, so every subset's rate cap weakly grows.
    """
    layers = [layer for layer in layering.layers if layer]
    return Layering(tuple(layers) if layers else (frozenset(),))


def enumerate_layerings(relays, cap: int = MAX_ENUM_RELAYS) -> list[Layering]:
    """All ordered set partitions of `relays`, no empty layers.

    Ordered by layer count, then lexicographically on the layer bitmasks
    (bit j of a mask = j-th smallest relay).  The count is the ordered Bell
    number of |relays|.
    """
    nodes = sorted(relays)
    n = len(nodes)
    if n > cap:
        raise TooManyRelaysError(f"{n} relays exceeds the enumeration cap of {cap}")
    out = []
    for k in range(1, n + 1):
        found = []
        for assignment in product(range(k), repeat=n):
            if len(set(assignment)) != k:
                continue
            masks = [0] * k
            for j, l in enumerate(assignment):
                masks[l] |= 1 << j
            found.append(tuple(masks))
        found.sort()
        for masks in found:
            layers = tuple(
                frozenset(nodes[j] for j in range(n) if (mask >> j) & 1) for mask in masks
            )
            out.append(Layering(layers))
    return out


def _check_extended_index(layering: Layering, l: int) -> None:
    if not -1 <= l <= layering.depth:
        raise IndexOutOfRangeError(
            f"layer index {l} outside -1..{layering.depth} for depth-{layering.depth} layering"
        )


def _check_subset(layering: Layering, s) -> frozenset[int]:
    s = frozenset(s)
    foreign = s - layering.relays
    if foreign:
        raise InvalidSubsetError(f"nodes {sorted(foreign)} are not relays of this layering")
    return s


def active(layering: Layering, s, l: int) -> frozenset[int]:
    """Members of `s` sitting in layer l; empty at the extended indices -1 and depth."""
    _check_extended_index(layering, l)
    s = _check_subset(layering, s)
    if l < 0 or l >= layering.depth:
        return frozenset()
    return s & layering.layers[l]


def prefix_union(layering: Layering, l: int) -> frozenset[int]:
    """Union of layers 0..l; empty at l = -1, the whole relay set at l = depth."""
    _check_extended_index(layering, l)
    out: frozenset[int] = frozenset()
    for layer in layering.layers[: max(l + 1, 0)]:
        out |= layer
    return out


def cumulative_complement(layering: Layering, s, l: int) -> frozenset[int]:
    """Everything decoded up to layer l except the members of `s` active there."""
    return prefix_union(layering, l) - active(layering, s, l)


def shift(layering: Layering, u) -> Layering:
    """Move every node of `u` one layer deeper; everyone else stays put.

    Returns the raw result: the first layer may become empty (canonicalize to
    strip it) and interior empty layers can appear.  The depth grows by one
    exactly when `u` touches the last layer, and never shrinks.
    """
    u = frozenset(u)
    foreign = u - layering.relays
    if foreign:
        raise InvalidSubsetError(f"nodes {sorted(foreign)} are not relays of this layering")
    new_depth = layering.depth + (1 if (layering.layers[-1] & u) else 0)
    new_layers = [set() for _ in range(new_depth)]
    for l, layer in enumerate(layering.layers):
        for node in layer:
            new_layers[l + 1 if node in u else l].add(node)
    return Layering(tuple(frozenset(layer) for layer in new_layers))


def decoding_schedule(layering: Layering) -> dict[int, int]:
    """Per-relay decode delay in blocks: a relay in layer l is decoded l+1 blocks late."""
    return {node: layering.layer_of(node) + 1 for node in sorted(layering.relays)}
