"""Shared samplers for the test suite."""

import numpy as np

from qwass import ChannelSpec, RngStream


def random_channel(dim: int, kraus_count: int, rng: RngStream) -> ChannelSpec:
    """Random CPTP map from a Haar-ish Stinespring isometry."""
    gen = rng.generator()
    g = gen.normal(size=(dim * kraus_count, dim)) + 1j * gen.normal(size=(dim * kraus_count, dim))
    q, _ = np.linalg.qr(g)
    blocks = q.reshape(kraus_count, dim, dim)
    return ChannelSpec(kraus=tuple(blocks))
