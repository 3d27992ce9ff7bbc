"""Build a small relay network and ask it entropy questions.

The network: source (node 1) -> two relays (2, 3) -> destination (node 4).
Each relay observes a noisy version of the inputs, compresses what it heard,
and the destination eventually decodes every compression.  Everything below
is driven by one dense joint table over the eight binary variables.
"""

import cflayers as cf

spec = cf.demo_spec(2, seed=7)
print(f"channel: d={spec.d}, relays {spec.relay_nodes}, all alphabets binary")
print("validation issues:", cf.validate_spec(spec) or "none")

joint = cf.build_joint(spec)
print("joint variables:", ", ".join(v.label for v in joint.variables))
print(f"table cells: {joint.table.size}, total mass {joint.table.sum():.12f}")

# A few classical quantities, all in bits.
print(f"\nH(X2)          = {joint.entropy({joint.x(2)}):.6f}")
print(f"H(Y2 | X2)     = {joint.cond_entropy({joint.y(2)}, {joint.x(2)}):.6f}")
print(f"I(Yh2; Y2|X2)  = {joint.mutual_info({joint.yhat(2)}, {joint.y(2)}, {joint.x(2)}):.6f}")

# The source rate this compression setup can carry, and the per-relay
# compression floors (below the floor a relay cannot even find a jointly
# typical compression codeword).
print(f"\nsupported source rate I(X1; Yh2 Yh3 Y4 | X2 X3) = {cf.source_rate(joint):.6f}")
for node, floor in cf.compression_floor(joint).items():
    print(f"compression floor of relay {node}: {floor:.6f}")
