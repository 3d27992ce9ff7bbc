"""Seeded generator of small binary demo channels.

Every alphabet is binary, so a three-relay network stays at 2048 joint cells
and everything downstream runs in well under a second.  Tables are dithered
uniform draws (0.1 + U[0,1), then normalized), which keeps every entry bounded
away from zero and the resulting regions nondegenerate.

The draw order below is part of the seed contract: p(x1), then per relay
p(xi) and p(yhi|xi,yi) row by row, then the channel rows in row-major input
order.  The same seed therefore always yields byte-identical spec files.
"""

from __future__ import annotations

import numpy as np

from .probability import ChannelSpec, RelaySpec


def _dithered_row(rng: np.random.Generator, k: int) -> np.ndarray:
    row = 0.1 + rng.random(k)
    return row / row.sum()


def _dithered_table(rng: np.random.Generator, cond_shape: tuple, k: int) -> np.ndarray:
    rows = [_dithered_row(rng, k) for _ in range(int(np.prod(cond_shape, dtype=int)))]
    return np.array(rows).reshape(cond_shape + (k,))


def demo_spec(n_relays: int, seed: int) -> ChannelSpec:
    """Deterministic all-binary channel spec with `n_relays` relays."""
    if n_relays < 1:
        raise ValueError("need at least one relay")
    d = n_relays + 2
    rng = np.random.default_rng(seed)

    p_x1 = _dithered_row(rng, 2)
    relays = []
    for node in range(2, d):
        p_x = _dithered_row(rng, 2)
        p_yhat = _dithered_table(rng, (2, 2), 2)
        relays.append(
            RelaySpec(
                node=node,
                x_alphabet=2,
                y_alphabet=2,
                yhat_alphabet=2,
                p_x=p_x,
                p_yhat=p_yhat,
            )
        )

    n_outputs = 2 ** n_relays * 2  # y2..y_{d-1} and yd
    in_shape = (2,) * (1 + n_relays)
    out_shape = (2,) * n_relays + (2,)
    channel = _dithered_table(rng, in_shape, n_outputs).reshape(in_shape + out_shape)

    return ChannelSpec(
        d=d,
        source_alphabet=2,
        p_x1=p_x1,
        relays=tuple(relays),
        dest_alphabet=2,
        channel=channel,
    )
