"""Shared fixtures and random-instance helpers."""

import numpy as np
import pytest

import cflayers as cf


@pytest.fixture(scope="session")
def demo2():
    """Two-relay binary demo channel, seed 7."""
    return cf.build_joint(cf.demo_spec(2, 7))


@pytest.fixture(scope="session")
def demo3():
    """Three-relay binary demo channel, seed 3 (the multi-shift instance lives here)."""
    return cf.build_joint(cf.demo_spec(3, 3))


def random_spec(rng, n_relays=2, max_size=3):
    """Random spec with mixed alphabet sizes in 2..max_size (Dirichlet rows)."""

    def size():
        return int(rng.integers(2, max_size + 1))

    def row(k):
        return rng.dirichlet(np.ones(k))

    d = n_relays + 2
    src = size()
    relays = []
    for node in range(2, d):
        xa, ya, ha = size(), size(), size()
        p_yhat = np.array([[row(ha) for _ in range(ya)] for _ in range(xa)])
        relays.append(cf.RelaySpec(node, xa, ya, ha, row(xa), p_yhat))
    dest = size()
    in_shape = (src,) + tuple(r.x_alphabet for r in relays)
    out_shape = tuple(r.y_alphabet for r in relays) + (dest,)
    n_rows = int(np.prod(in_shape))
    n_out = int(np.prod(out_shape))
    channel = np.array([row(n_out) for _ in range(n_rows)]).reshape(in_shape + out_shape)
    return cf.ChannelSpec(
        d=d,
        source_alphabet=src,
        p_x1=row(src),
        relays=tuple(relays),
        dest_alphabet=dest,
        channel=channel,
    )


def random_layering(rng, relays):
    """Random valid layering; interior (and leading) empty layers can occur."""
    nodes = sorted(relays)
    depth_cap = len(nodes) + 2
    assign = rng.integers(0, depth_cap, size=len(nodes))
    depth = int(assign.max()) + 1
    layers = [set() for _ in range(depth)]
    for node, l in zip(nodes, assign):
        layers[int(l)].add(node)
    return cf.make_layering(layers)


def random_subset(rng, pool):
    return frozenset(i for i in pool if rng.random() < 0.5)


def sample_outer_point(joint, rng, delta=1e-3, tries=5000):
    """Uniform rejection sample with boundary slack >= delta, or None."""
    caps = {i: cf.boundary_rhs(joint, frozenset({i})) for i in joint.relays}
    for _ in range(tries):
        cand = cf.RateVector({i: rng.uniform(0, caps[i]) for i in joint.relays})
        if cf.check_outer(joint, cand).min_slack >= delta:
            return cand
    return None


def usable_demo_channels(n_channels, relay_of_trial, first_seed=201, min_cap=3e-3):
    """Stream of (seed, joint) demo channels whose outer region is not too thin.

    Channels with any subset cap below `min_cap` cannot hold a point with
    1e-3 boundary slack, so they are skipped deterministically.
    """
    out = []
    seed = first_seed - 1
    while len(out) < n_channels:
        seed += 1
        joint = cf.build_joint(cf.demo_spec(relay_of_trial(len(out)), seed))
        caps = [cf.boundary_rhs(joint, s) for s in cf.region.subsets_by_mask(joint.relay_set)]
        if min(caps) < min_cap:
            continue
        out.append((seed, joint))
    return out
