"""Named, counter-based random number streams.

Every stochastic component draws from its own Philox stream derived from a
single master seed.  Stream identity is a tuple (replica, role, index), so a
particle's noise sequence does not depend on how many other streams exist,
and ensemble replicas can run in parallel without coordination.
"""
from __future__ import annotations

import numpy as np

# role ids; keep stable, they are part of the reproducibility contract
_ROLES = {
    "particle": 0,   # one stream per gas particle (index = particle slot)
    "bernoulli": 1,  # switching schedule
    "free": 2,       # dense symmetric matrix increments
    "spectrum": 3,   # eigenvalue-space increments of commuting steps
    "init": 4,       # initial conditions, when randomised
}


def stream(seed: int, role: str, index: int = 0, replica: int = 0) -> np.random.Generator:
    """Return the generator for one named stream of the given master seed."""
    if role not in _ROLES:
        raise ValueError(f"unknown stream role {role!r}")
    key = (np.uint32(replica), np.uint32(_ROLES[role]), np.uint32(index))
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=key)))


class ParticleNoise:
    """Per-particle standard-normal streams served as vectors.

    normals() returns one draw per particle, particle i always consuming
    from stream (seed, "particle", i, replica).  Draws are buffered per
    particle in blocks; the buffer size does not affect the sequence.
    """

    def __init__(self, seed: int, n_particles: int, replica: int = 0, block: int = 256):
        self._gens = [stream(seed, "particle", i, replica) for i in range(n_particles)]
        self._block = int(block)
        self._buf = np.empty((n_particles, 0))
        self._pos = 0

    def normals(self) -> np.ndarray:
        if self._pos >= self._buf.shape[1]:
            self._buf = np.stack([g.standard_normal(self._block) for g in self._gens])
            self._pos = 0
        out = self._buf[:, self._pos].copy()
        self._pos += 1
        return out


class SwitchSchedule:
    """Bernoulli(p) value per interval [k/n, (k+1)/n), drawn lazily in order.

    Values are cached so repeated queries for the same interval agree.
    """

    def __init__(self, seed: int, p: float, n_rate: int, replica: int = 0):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"p={p} outside [0, 1]")
        self._gen = stream(seed, "bernoulli", 0, replica)
        self.p = float(p)
        self.n_rate = int(n_rate)
        self._values: list[int] = []

    def value(self, interval: int) -> int:
        if interval < 0:
            raise ValueError("interval index must be >= 0")
        while len(self._values) <= interval:
            self._values.append(int(self._gen.random() < self.p))
        return self._values[interval]

    def interval_of(self, t: float) -> int:
        # guard against t sitting a rounding error below a boundary
        return int(np.floor(t * self.n_rate + 1e-9))
