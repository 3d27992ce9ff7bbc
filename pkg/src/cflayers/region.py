"""Compression-rate regions: staged constraints, the outer region, and floors.

For a relay subset S the outer region requires

    R_S < sum_{i in S} H(Xi, Yhi) - H(X_S Yh_S | X_G Yh_G Yd),   G = R \\ S,

while a fixed layering imposes the staged form obtained from its sequence of
typicality checks: stage l pairs the inputs active in layer l with the
compressions active in layer l-1, conditioned on everything decoded earlier.
Both right-hand sides are in bits and all inequalities are strict, so a
subset "satisfies" its constraint when slack = rhs - R_S exceeds the working
epsilon and "violates" it otherwise; the two outcomes partition all cases.

The per-relay compression floor I(Yhi; Yi | Xi) is the rate below which
relay i cannot find a jointly typical compression codeword, so the usable
window for subset S is [sum of floors, boundary rhs).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import EmptySubsetError, InvalidRatesError, InvalidSubsetError
from .layering import Layering, active, cumulative_complement, validate_layering
from .probability import JointPmf

DEFAULT_EPSILON = 1e-9


def fmt12(x: float) -> float:
    """Round to 12 significant digits for stable text/JSON output."""
    return float(f"{x:.12g}")


# -- rate vectors -------------------------------------------------------------


class RateVector:
    """Per-relay compression rates in bits, nonnegative."""

    def __init__(self, rates):
        self._rates = {int(k): float(v) for k, v in dict(rates).items()}

    @property
    def nodes(self) -> frozenset[int]:
        return frozenset(self._rates)

    def of(self, node: int) -> float:
        return self._rates[node]

    def subset_sum(self, nodes) -> float:
        return sum(self._rates[i] for i in nodes)

    def check_for(self, relays) -> None:
        relays = frozenset(relays)
        if self.nodes != relays:
            raise InvalidRatesError(
                f"rates cover nodes {sorted(self.nodes)} but the relays are {sorted(relays)}"
            )
        negative = [i for i, r in self._rates.items() if r < 0.0]
        if negative:
            raise InvalidRatesError(f"negative rates for nodes {sorted(negative)}")

    def to_json_obj(self) -> dict:
        return {"rates": {str(i): self._rates[i] for i in sorted(self._rates)}}

    def __repr__(self):
        inner = ", ".join(f"{i}: {self._rates[i]:.6g}" for i in sorted(self._rates))
        return f"RateVector({{{inner}}})"


def load_rates(path) -> RateVector:
    with open(path) as fh:
        obj = json.load(fh)
    return RateVector(obj["rates"])


# -- subset bookkeeping --------------------------------------------------------


def subset_mask(subset, relays) -> int:
    nodes = sorted(relays)
    return sum(1 << nodes.index(i) for i in subset)


def subsets_by_mask(relays):
    """All nonempty relay subsets, ordered by bitmask (bit j = j-th smallest relay)."""
    nodes = sorted(relays)
    for mask in range(1, 1 << len(nodes)):
        yield frozenset(nodes[j] for j in range(len(nodes)) if (mask >> j) & 1)


# -- right-hand sides -----------------------------------------------------------


def block_cond_entropy(joint: JointPmf, s, given) -> float:
    """H(X_s Yh_s | X_given Yh_given Yd)."""
    s = frozenset(s)
    given = frozenset(given)
    front = joint.xs(s) | joint.yhats(s)
    back = joint.xs(given) | joint.yhats(given) | {joint.yd}
    return joint.cond_entropy(front, back)


def h_term(joint: JointPmf, layering: Layering, s, l: int) -> float:
    """Stage-l conditional entropy of layering `layering` for subset `s`.

    Pairs the subset's inputs active in layer l with its compressions active
    in layer l-1, conditioned on all other decoded inputs/compressions and Yd.
    Valid for l in 0..depth (the stage past the last layer conditions on every
    relay input).
    """
    front = joint.xs(active(layering, s, l)) | joint.yhats(active(layering, s, l - 1))
    back = (
        joint.xs(cumulative_complement(layering, s, l))
        | joint.yhats(cumulative_complement(layering, s, l - 1))
        | {joint.yd}
    )
    return joint.cond_entropy(front, back)


def layered_rhs(joint: JointPmf, layering: Layering, s) -> float:
    """Rate cap for subset `s` under the staged decode of `layering`."""
    s = frozenset(s)
    if not s:
        raise EmptySubsetError("layered rate cap is defined for nonempty subsets")
    total = joint.pair_entropy_sum(s)
    for l in range(layering.depth + 1):
        total -= h_term(joint, layering, s, l)
    return total


def boundary_rhs(joint: JointPmf, s) -> float:
    """Rate cap for subset `s` in the layering-free outer region."""
    s = frozenset(s)
    if not s:
        raise EmptySubsetError("outer rate cap is defined for nonempty subsets")
    rest = joint.relay_set - s
    return joint.pair_entropy_sum(s) - block_cond_entropy(joint, s, rest)


# -- membership reports ----------------------------------------------------------


@dataclass(frozen=True)
class SubsetConstraint:
    subset: frozenset[int]
    mask: int
    rhs: float
    rate_sum: float
    satisfied: bool

    @property
    def slack(self) -> float:
        return self.rhs - self.rate_sum

    def to_json_obj(self) -> dict:
        return {
            "subset": sorted(self.subset),
            "rhs": fmt12(self.rhs),
            "rate_sum": fmt12(self.rate_sum),
            "slack": fmt12(self.slack),
            "satisfied": self.satisfied,
        }


@dataclass(frozen=True)
class ConstraintReport:
    """One entry per nonempty relay subset, in bitmask order."""

    kind: str  # "layered" or "outer"
    epsilon: float
    entries: tuple[SubsetConstraint, ...]

    @property
    def is_member(self) -> bool:
        return all(e.satisfied for e in self.entries)

    @property
    def violators(self) -> tuple[frozenset[int], ...]:
        return tuple(e.subset for e in self.entries if not e.satisfied)

    @property
    def min_slack(self) -> float:
        return min(e.slack for e in self.entries)

    def entry(self, subset) -> SubsetConstraint:
        subset = frozenset(subset)
        for e in self.entries:
            if e.subset == subset:
                return e
        raise KeyError(f"no entry for subset {sorted(subset)}")

    def to_json_obj(self) -> dict:
        return {
            "kind": self.kind,
            "epsilon": self.epsilon,
            "member": self.is_member,
            "subsets": [e.to_json_obj() for e in self.entries],
        }


def _build_report(kind, joint, rates, rhs_of, epsilon) -> ConstraintReport:
    rates.check_for(joint.relay_set)
    if epsilon < 0:
        raise ValueError("epsilon must be nonnegative")
    entries = []
    for s in subsets_by_mask(joint.relay_set):
        rhs = rhs_of(s)
        rate_sum = rates.subset_sum(s)
        entries.append(
            SubsetConstraint(
                subset=s,
                mask=subset_mask(s, joint.relay_set),
                rhs=rhs,
                rate_sum=rate_sum,
                satisfied=(rhs - rate_sum) > epsilon,
            )
        )
    return ConstraintReport(kind=kind, epsilon=epsilon, entries=tuple(entries))


def require_valid_layering(joint: JointPmf, layering: Layering) -> None:
    problems = validate_layering(layering, joint.relay_set)
    if problems:
        raise InvalidSubsetError(
            "layering does not partition this joint's relays: " + "; ".join(problems)
        )


def check_layered(
    joint: JointPmf, layering: Layering, rates: RateVector, epsilon: float = DEFAULT_EPSILON
) -> ConstraintReport:
    """Membership report for the region of one layering."""
    require_valid_layering(joint, layering)
    return _build_report(
        "layered", joint, rates, lambda s: layered_rhs(joint, layering, s), epsilon
    )


def check_outer(
    joint: JointPmf, rates: RateVector, epsilon: float = DEFAULT_EPSILON
) -> ConstraintReport:
    """Membership report for the layering-free outer region."""
    return _build_report("outer", joint, rates, lambda s: boundary_rhs(joint, s), epsilon)


def pick_violator(report: ConstraintReport):
    """Largest violating subset from a report: the union of all violators.

    Returns (subset, degenerate).  The union itself violating is asserted;
    if a numerical edge breaks that, fall back to a maximum-cardinality
    violator with the smallest bitmask and flag the pick as degenerate.
    Returns (None, False) for a member.
    """
    violators = report.violators
    if not violators:
        return None, False
    union: frozenset[int] = frozenset()
    for s in violators:
        union |= s
    if not report.entry(union).satisfied:
        return union, False
    best = max(violators, key=lambda s: (len(s), -report.entry(s).mask))
    return best, True


def largest_violator(
    joint: JointPmf, layering: Layering, rates: RateVector, epsilon: float = DEFAULT_EPSILON
):
    """Union of the subsets violating the layered constraints, or None for a member."""
    subset, _ = pick_violator(check_layered(joint, layering, rates, epsilon))
    return subset


# -- floors, source rate, and the window identities -------------------------------


def compression_floor(joint: JointPmf) -> dict[int, float]:
    """Per-relay minimum workable compression rate I(Yhi; Yi | Xi), in bits."""
    return {
        i: joint.mutual_info({joint.yhat(i)}, {joint.y(i)}, {joint.x(i)})
        for i in joint.relays
    }


def floor_sum(floors: dict[int, float], s) -> float:
    return sum(floors[i] for i in s)


def source_rate(joint: JointPmf) -> float:
    """Source rate supported by the compressions: I(X1; Yh_R Yd | X_R)."""
    relays = joint.relay_set
    return joint.mutual_info(
        {joint.x1}, joint.yhats(relays) | {joint.yd}, joint.xs(relays)
    )


def mi_gap(joint: JointPmf, s, variant: str = "with_dest") -> float:
    """Slack of the mutual-information form of subset `s`'s window condition.

    Both variants share the left side I(Yh_s; Y_s | X_R Yh_G Yd).  The right
    side either keeps the destination observation inside the information term
    ("with_dest", the form matching the outer region) or conditions on it
    ("given_dest"); the two differ by I(X_s; Yd | X_G) >= 0.
    """
    s = frozenset(s)
    if not s:
        raise EmptySubsetError("the window condition is defined for nonempty subsets")
    rest = joint.relay_set - s
    lhs = joint.mutual_info(
        joint.yhats(s),
        joint.ys(s),
        joint.xs(joint.relay_set) | joint.yhats(rest) | {joint.yd},
    )
    if variant == "with_dest":
        rhs = joint.mutual_info(
            joint.xs(s), joint.yhats(rest) | {joint.yd}, joint.xs(rest)
        )
    elif variant == "given_dest":
        rhs = joint.mutual_info(
            joint.xs(s), joint.yhats(rest), joint.xs(rest) | {joint.yd}
        )
    else:
        raise ValueError(f"unknown variant {variant!r}")
    return rhs - lhs


def window_gap_forms(joint: JointPmf, s) -> tuple[float, ...]:
    """Nine rewritings of boundary_rhs(s) minus the floor sum of s.

    The first form subtracts the floors from the outer rate cap directly; the
    last is the pure mutual-information form of `mi_gap(..., "with_dest")`.
    The rewriting steps are either entropy identities or uses of the factored
    structure (inputs mutually independent, each compression depending only on
    its own input and observation), so all nine agree for any joint built by
    `build_joint`.
    """
    s = frozenset(s)
    if not s:
        raise EmptySubsetError("window gaps are defined for nonempty subsets")
    rest = joint.relay_set - s
    h = joint.entropy
    hc = joint.cond_entropy
    xs, ys, yhs = joint.xs, joint.ys, joint.yhats
    yd = joint.yd

    pair = joint.pair_entropy_sum(s)
    bound_block = block_cond_entropy(joint, s, rest)  # H(X_s Yh_s | X_G Yh_G Yd)
    floors = compression_floor(joint)

    sum_h_yh_given_x = sum(hc({joint.yhat(i)}, {joint.x(i)}) for i in s)
    sum_h_yh_given_xy = sum(hc({joint.yhat(i)}, {joint.x(i), joint.y(i)}) for i in s)
    sum_h_x = sum(h({joint.x(i)}) for i in s)

    g1 = (pair - bound_block) - floor_sum(floors, s)
    g2 = (pair - bound_block) - (sum_h_yh_given_x - sum_h_yh_given_xy)
    g3 = (pair - sum_h_yh_given_x) - (bound_block - sum_h_yh_given_xy)
    g4 = sum_h_x - (bound_block - sum_h_yh_given_xy)
    g5 = h(xs(s)) - (bound_block - hc(yhs(s), xs(s) | ys(s)))
    g6 = h(xs(s)) - (
        hc(yhs(s), xs(joint.relay_set) | yhs(rest) | {yd})
        + hc(xs(s), xs(rest) | yhs(rest) | {yd})
        - hc(yhs(s), xs(s) | ys(s))
    )
    g7 = (h(xs(s)) - hc(xs(s), xs(rest) | yhs(rest) | {yd})) - (
        hc(yhs(s), xs(joint.relay_set) | yhs(rest) | {yd}) - hc(yhs(s), xs(s) | ys(s))
    )
    g8 = (hc(xs(s), xs(rest)) - hc(xs(s), xs(rest) | yhs(rest) | {yd})) - (
        hc(yhs(s), xs(joint.relay_set) | yhs(rest) | {yd})
        - hc(yhs(s), xs(joint.relay_set) | ys(s) | yhs(rest) | {yd})
    )
    g9 = mi_gap(joint, s, "with_dest")
    return (g1, g2, g3, g4, g5, g6, g7, g8, g9)
