"""Is a compression rate vector achievable?  Check regions and windows.

The outer region caps every relay subset's total rate by what the destination
could ever absorb; each layering carves out the part of it reachable with
that particular decode order.  The window report combines the caps with the
per-relay floors: a subset is workable only if its floors sum below its cap.
"""

import cflayers as cf

joint = cf.build_joint(cf.demo_spec(2, seed=7))

rates = cf.RateVector({2: 0.010, 3: 0.005})
outer = cf.check_outer(joint, rates)
print(f"rate vector {rates}")
print(f"outer region member: {outer.is_member} (min slack {outer.min_slack:.6f})\n")

for lay in cf.enumerate_layerings(joint.relay_set):
    report = cf.check_layered(joint, lay, rates)
    flag = "member" if report.is_member else "not a member"
    print(f"layering {lay.to_text():5s}: {flag:12s} min slack {report.min_slack:+.6f}")

print("\nper-subset caps of the outer region:")
for entry in outer.entries:
    print(
        f"  S={sorted(entry.subset)}: rate {entry.rate_sum:.6f} "
        f"< cap {entry.rhs:.6f}? {entry.satisfied}"
    )

# Floors vs caps: the window for each subset, in two algebraic forms that
# must agree (the second is the pure mutual-information form).
floors = cf.compression_floor(joint)
print("\nwindows (cap minus floor sum):")
for s in cf.region.subsets_by_mask(joint.relay_set):
    gaps = cf.window_gap_forms(joint, s)
    state = "nonempty" if gaps[0] > 0 else "empty"
    print(
        f"  S={sorted(s)}: window {gaps[0]:+.6f} ({state}), "
        f"mutual-information form {gaps[-1]:+.6f}"
    )
