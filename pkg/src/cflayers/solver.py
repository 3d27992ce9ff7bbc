"""Find a layering whose region contains a target compression rate vector.

The search starts from any valid layering (single-layer by default), asks
which relay subsets exceed their staged rate caps, and shifts the union of
the violators one layer deeper.  Each shift certifies a growing core of
relays: after shifting U, every subset of (R \\ U) union the previous core
provably satisfies the new layering's constraints, so the core only grows
and the iteration stops once it is all of R.  For any target strictly inside
the outer region the iteration terminates; `max_iter` is a guard for targets
outside it, not a correctness bound.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidSubsetError, NotConvergedError, TooManyRelaysError
from .layering import Layering, canonicalize, compact, enumerate_layerings, shift
from .probability import JointPmf
from .region import (
    DEFAULT_EPSILON,
    ConstraintReport,
    RateVector,
    check_layered,
    fmt12,
    pick_violator,
    require_valid_layering,
    subsets_by_mask,
)


def default_max_iter(n_relays: int) -> int:
    return 16 * (1 << n_relays)


@dataclass(frozen=True)
class SolveStep:
    """One iteration: the layering tried, its report, and the chosen move."""

    index: int
    raw_layers: Layering  # as produced by the previous shift, pre-canonicalization
    layering: Layering  # canonical form actually evaluated
    report: ConstraintReport
    chosen: frozenset[int] | None  # subset shifted next; None on the terminal step
    core: frozenset[int]  # relays certified before this step's shift
    degenerate: bool  # violator union failed to violate; fallback pick used

    def to_json_obj(self) -> dict:
        return {
            "iteration": self.index,
            "layering": [sorted(layer) for layer in self.layering.layers],
            "violators": [sorted(s) for s in self.report.violators],
            "U": sorted(self.chosen) if self.chosen is not None else None,
            "Z": sorted(self.core),
            "min_slack": fmt12(self.report.min_slack),
        }


@dataclass
class SolveTrace:
    """Every iteration of one solve call plus the terminal status.

    `final` is the layering actually returned; it differs from the last
    step's layering only when the accepted layering carried interior empty
    layers and its compaction also accepts.
    """

    steps: list[SolveStep]
    status: str  # "achieved" or "not_converged"
    final: Layering | None = None

    @property
    def layering(self) -> Layering:
        return self.final if self.final is not None else self.steps[-1].layering

    @property
    def shifts(self) -> int:
        # every non-terminal step applied one shift; the terminal step did not
        return len(self.steps) - 1

    @property
    def degenerate(self) -> bool:
        return any(s.degenerate for s in self.steps)

    def to_json_obj(self) -> list:
        records = [s.to_json_obj() for s in self.steps]
        if records:
            records[-1]["status"] = self.status
        return records


def solve(
    joint: JointPmf,
    rates: RateVector,
    initial: Layering | None = None,
    epsilon: float = DEFAULT_EPSILON,
    max_iter: int | None = None,
) -> tuple[Layering, SolveTrace]:
    """Iterate largest-violator shifts until `rates` fits some layering.

    Returns the accepting layering and the full trace; when the iteration
    lands on a layering with interior empty layers, the returned layering is
    its compaction provided that also accepts (it widens every cap, so it
    does, up to rounding at the epsilon boundary).  Raises NotConvergedError
    (with the trace attached) after `max_iter` shifts, which for rate vectors
    outside the outer region is the expected outcome.
    """
    relays = joint.relay_set
    rates.check_for(relays)
    if max_iter is None:
        max_iter = default_max_iter(len(relays))
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")

    raw = initial if initial is not None else Layering((relays,))
    require_valid_layering(joint, raw)

    current = canonicalize(raw)
    core: frozenset[int] = frozenset()
    steps: list[SolveStep] = []
    for n in range(max_iter + 1):
        report = check_layered(joint, current, rates, epsilon)
        chosen, degenerate = pick_violator(report)
        steps.append(
            SolveStep(
                index=n,
                raw_layers=raw,
                layering=current,
                report=report,
                chosen=chosen,
                core=core,
                degenerate=degenerate,
            )
        )
        if chosen is None:
            result = current
            if any(not layer for layer in current.layers):
                # shifts can park the accepted layering on interior empty
                # layers; compaction only widens the caps, so it accepts too
                # (checked anyway) and gives the shorter decode schedule
                packed = compact(current)
                if check_layered(joint, packed, rates, epsilon).is_member:
                    result = packed
            return result, SolveTrace(steps=steps, status="achieved", final=result)
        if n == max_iter:
            break
        core = (relays - chosen) | core
        raw = shift(current, chosen)
        current = canonicalize(raw)

    trace = SolveTrace(steps=steps, status="not_converged")
    raise NotConvergedError(
        f"no accepting layering within {max_iter} shifts", trace
    )


def brute_force_layering(
    joint: JointPmf,
    rates: RateVector,
    epsilon: float = DEFAULT_EPSILON,
    cap: int = 6,
) -> list[Layering]:
    """All canonical layerings whose region contains `rates`, in enumeration order."""
    relays = joint.relay_set
    rates.check_for(relays)
    if len(relays) > cap:
        raise TooManyRelaysError(f"{len(relays)} relays exceeds the cap of {cap}")
    return [
        layering
        for layering in enumerate_layerings(relays)
        if check_layered(joint, layering, rates, epsilon).is_member
    ]


@dataclass(frozen=True)
class CoreReport:
    """Violating subsets of a claimed core; empty means the core is certified."""

    core: frozenset[int]
    violations: tuple[frozenset[int], ...]

    @property
    def certified(self) -> bool:
        return not self.violations


def verify_core(
    joint: JointPmf,
    layering: Layering,
    core,
    rates: RateVector,
    epsilon: float = DEFAULT_EPSILON,
) -> CoreReport:
    """Check that every nonempty subset of `core` meets the layered constraints."""
    core = frozenset(core)
    foreign = core - joint.relay_set
    if foreign:
        raise InvalidSubsetError(f"core nodes {sorted(foreign)} are not relays")
    rates.check_for(joint.relay_set)
    report = check_layered(joint, layering, rates, epsilon)
    violations = tuple(s for s in subsets_by_mask(core) if not report.entry(s).satisfied)
    return CoreReport(core=core, violations=violations)
