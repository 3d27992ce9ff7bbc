"""Watch the shift search walk from one layering to an accepting one.

The target below sits strictly inside the outer region of a three-relay
channel but outside the single-layer region, so the search must move twice:
each iteration finds the union of the violating subsets and pushes it one
layer deeper, certifying an ever-growing core of relays along the way.
"""

import cflayers as cf

joint = cf.build_joint(cf.demo_spec(3, seed=3))
rates = cf.RateVector({2: 0.001247, 3: 0.004811, 4: 0.001462})

outer = cf.check_outer(joint, rates)
print(f"target {rates}")
print(f"inside outer region: {outer.is_member} (min slack {outer.min_slack:.6f})\n")

layering, trace = cf.solve(joint, rates)
for step in trace.steps:
    violators = [sorted(s) for s in step.report.violators]
    print(f"iteration {step.index}: layering {step.layering.to_text()}")
    print(f"  certified core Z = {sorted(step.core)}")
    print(f"  violating subsets: {violators or 'none'}")
    if step.chosen is not None:
        print(f"  shift U = {sorted(step.chosen)} one layer deeper")
        core_next = (joint.relay_set - step.chosen) | step.core
        check = cf.verify_core(joint, cf.canonicalize(cf.shift(step.layering, step.chosen)),
                               core_next, rates)
        print(f"  new core {sorted(core_next)} certified: {check.certified}")

print(f"\naccepting layering: {layering.to_text()} after {trace.shifts} shifts")

# Exhaustive cross-check over all 13 layerings.
accepting = cf.brute_force_layering(joint, rates)
print("brute-force accepting layerings:", [lay.to_text() for lay in accepting])
assert layering in accepting
