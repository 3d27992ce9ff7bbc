"""H-representations of the rate regions and low-dimension vertex enumeration.

Every region here is an intersection of strict half-spaces of the form
sum_{i in S} R_i < rhs_S (one per nonempty relay subset) with the nonnegative
orthant.  Geometry works on the closures: vertices are intersections of
constraint and coordinate hyperplanes that satisfy every closed constraint.
The singleton constraints already bound each coordinate, so the regions are
bounded and no artificial box is needed.

An atlas bundles the outer region with every canonical layering's region for
one channel; exporting the same channel twice yields byte-identical JSON.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import DimensionTooHighError, TooManyRelaysError
from .layering import Layering, enumerate_layerings
from .probability import JointPmf
from .region import (
    boundary_rhs,
    fmt12,
    layered_rhs,
    require_valid_layering,
    subsets_by_mask,
)

VERTEX_TOL = 1e-9
MAX_VERTEX_DIM = 3


@dataclass(frozen=True)
class HalfSpace:
    """Strict constraint sum_{i in subset} R_i < rhs over the relay coordinates."""

    subset: frozenset[int]
    rhs: float

    def indicator(self, relays) -> np.ndarray:
        nodes = sorted(relays)
        row = np.zeros(len(nodes))
        for i in self.subset:
            row[nodes.index(i)] = 1.0
        return row

    def to_json_obj(self) -> dict:
        return {"subset": sorted(self.subset), "rhs": fmt12(self.rhs)}


def h_rep(joint: JointPmf, layering: Layering) -> tuple[HalfSpace, ...]:
    """Half-spaces of one layering's region, in subset-bitmask order."""
    require_valid_layering(joint, layering)
    return tuple(
        HalfSpace(s, layered_rhs(joint, layering, s))
        for s in subsets_by_mask(joint.relay_set)
    )


def outer_h_rep(joint: JointPmf) -> tuple[HalfSpace, ...]:
    """Half-spaces of the outer region, in subset-bitmask order."""
    return tuple(
        HalfSpace(s, boundary_rhs(joint, s)) for s in subsets_by_mask(joint.relay_set)
    )


def enumerate_vertices(halfspaces, relays) -> list[tuple[float, ...]]:
    """Vertices of the closed region, for up to three relays.

    Brute force: solve every choice of `dim` hyperplanes drawn from the
    constraint planes and the coordinate planes, keep solutions satisfying
    all closed constraints within tolerance, deduplicate, sort.
    """
    nodes = sorted(relays)
    dim = len(nodes)
    if dim > MAX_VERTEX_DIM:
        raise DimensionTooHighError(
            f"vertex enumeration supports up to {MAX_VERTEX_DIM} relays, got {dim}"
        )

    rows = [(hs.indicator(nodes), hs.rhs) for hs in halfspaces]
    planes = rows + [(np.eye(dim)[j], 0.0) for j in range(dim)]

    a_all = np.array([r for r, _ in rows])
    b_all = np.array([b for _, b in rows])

    found: list[np.ndarray] = []
    for combo in combinations(planes, dim):
        a = np.array([r for r, _ in combo])
        b = np.array([v for _, v in combo])
        try:
            point = np.linalg.solve(a, b)
        except np.linalg.LinAlgError:
            continue
        if not np.all(np.isfinite(point)):
            continue
        if np.any(point < -VERTEX_TOL):
            continue
        if np.any(a_all @ point > b_all + VERTEX_TOL):
            continue
        point = np.where(np.abs(point) < 1e-12, 0.0, point)
        if not any(np.max(np.abs(point - q)) <= VERTEX_TOL for q in found):
            found.append(point)
    return sorted(tuple(float(v) for v in p) for p in found)


@dataclass(frozen=True)
class AtlasEntry:
    layering: Layering
    halfspaces: tuple[HalfSpace, ...]
    vertices: tuple[tuple[float, ...], ...] | None


@dataclass(frozen=True)
class Atlas:
    """Outer region plus every canonical layering's region for one channel."""

    channel_digest: str
    relays: tuple[int, ...]
    outer: tuple[HalfSpace, ...]
    outer_vertices: tuple[tuple[float, ...], ...] | None
    entries: tuple[AtlasEntry, ...]

    def to_json_obj(self) -> dict:
        outer: dict = {"halfspaces": [hs.to_json_obj() for hs in self.outer]}
        if self.outer_vertices is not None:
            outer["vertices"] = [[fmt12(v) for v in p] for p in self.outer_vertices]
        layerings = []
        for e in self.entries:
            obj: dict = {
                "layers": [sorted(layer) for layer in e.layering.layers],
                "halfspaces": [hs.to_json_obj() for hs in e.halfspaces],
            }
            if e.vertices is not None:
                obj["vertices"] = [[fmt12(v) for v in p] for p in e.vertices]
            layerings.append(obj)
        return {
            "channel_digest": self.channel_digest,
            "dimension": len(self.relays),
            "outer": outer,
            "layerings": layerings,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2, sort_keys=True) + "\n"


def channel_digest(joint: JointPmf) -> str:
    """Hash of the joint table and its variable layout."""
    h = hashlib.sha256()
    h.update(repr([(v.kind, v.node, v.size) for v in joint.variables]).encode())
    h.update(np.ascontiguousarray(joint.table).tobytes())
    return h.hexdigest()


def export_atlas(joint: JointPmf, with_vertices: bool = False, cap: int = 6) -> Atlas:
    """Build the full atlas; vertex lists require at most three relays."""
    relays = joint.relays
    if len(relays) > cap:
        raise TooManyRelaysError(f"{len(relays)} relays exceeds the cap of {cap}")
    if with_vertices and len(relays) > MAX_VERTEX_DIM:
        raise DimensionTooHighError(
            f"vertices are available for up to {MAX_VERTEX_DIM} relays, got {len(relays)}"
        )

    outer = outer_h_rep(joint)
    outer_vertices = (
        tuple(enumerate_vertices(outer, relays)) if with_vertices else None
    )
    entries = []
    for layering in enumerate_layerings(relays):
        halfspaces = h_rep(joint, layering)
        vertices = (
            tuple(enumerate_vertices(halfspaces, relays)) if with_vertices else None
        )
        entries.append(AtlasEntry(layering, halfspaces, vertices))
    return Atlas(
        channel_digest=channel_digest(joint),
        relays=relays,
        outer=outer,
        outer_vertices=outer_vertices,
        entries=tuple(entries),
    )
