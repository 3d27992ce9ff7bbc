"""Layerings: ordered partitions of the relays and what they mean for decoding.

A layering tells the destination in which order to decode relay compressions:
a relay in layer l is decoded l+1 blocks after transmission, with the already
decoded (shallower) compressions helping.  Shifting a subset one layer deeper
produces the neighboring decode schedule.
"""

import cflayers as cf

relays = {2, 3, 4}
layerings = cf.enumerate_layerings(relays)
print(f"{len(layerings)} layerings of three relays (ordered Bell number):")
for lay in layerings:
    print("  ", lay.to_text())

lay = cf.parse_layering("2,4|3")
print(f"\ndecode delays of {lay}: {cf.decoding_schedule(lay)}")

# The shift operator moves chosen relays one layer deeper.  Moving the whole
# shallow layer collapses the split (after stripping the leading empty layer).
shifted = cf.shift(lay, {2, 4})
print(f"shift({lay}, {{2,4}}) raw = {shifted.layers}")
print(f"                canonical = {cf.canonicalize(shifted)}")

# Shifting only part of a layer splits it instead.
print(f"shift(2,3,4, {{4}}) = {cf.shift(cf.parse_layering('2,3,4'), {4})}")

# Active sets drive every staged rate constraint: active(L, S, l) is the part
# of S decoded at stage l, and the cumulative complement is everything
# already decoded by then except those nodes.
s = {2, 3}
for l in range(lay.depth):
    print(
        f"stage {l}: active({sorted(s)}) = {sorted(cf.active(lay, s, l))}, "
        f"decoded-others = {sorted(cf.cumulative_complement(lay, s, l))}"
    )
