"""Deterministic seam for every randomized draw in the pipelines.

All stochastic operations take a :class:`NoiseSource` so tests can force
exact zero noise or replay fixed values, while production code uses a seeded
generator.  Draws made as vectors in user order are independent of any later
shuffling, which keeps estimates reproducible across permutation seeds.
"""

from __future__ import annotations

import numpy as np

__all__ = ["NoiseSource"]


class NoiseSource:
    """One of three draw strategies: seeded generator, zero, or injected values.

    ``zero`` returns 0.0 from every draw: additive mechanisms add nothing and
    uniform draws always select the modal branch.  ``injected`` replays the
    given values verbatim (no scaling is applied) and raises when exhausted.
    """

    def __init__(self, kind: str, *, seed=None, values=None):
        if kind not in ("seeded", "zero", "injected"):
            raise ValueError(f"unknown noise source kind {kind!r}")
        self.kind = kind
        self._seed = seed
        self._rng = np.random.default_rng(seed) if kind == "seeded" else None
        self._values = None if values is None else np.asarray(values, dtype=float).ravel()
        self._cursor = 0
        if kind == "injected" and self._values is None:
            raise ValueError("injected source needs a value sequence")

    @classmethod
    def seeded(cls, seed) -> "NoiseSource":
        return cls("seeded", seed=seed)

    @classmethod
    def zero(cls) -> "NoiseSource":
        return cls("zero")

    @classmethod
    def injected(cls, values) -> "NoiseSource":
        return cls("injected", values=values)

    def _take(self, size):
        count = 1 if size is None else int(np.prod(size))
        if self._cursor + count > self._values.size:
            raise ValueError("injected noise sequence exhausted")
        chunk = self._values[self._cursor: self._cursor + count]
        self._cursor += count
        return float(chunk[0]) if size is None else chunk.reshape(size).copy()

    def _zeros(self, size):
        return 0.0 if size is None else np.zeros(size)

    def laplace(self, scale, size=None):
        """Centered Laplace draw(s) with the given scale (scalar or per-draw array)."""
        if self.kind == "zero":
            return self._zeros(size)
        if self.kind == "injected":
            return self._take(size)
        return self._rng.laplace(0.0, scale, size=size)

    def normal(self, sigma, size=None):
        """Centered Gaussian draw(s) with standard deviation sigma."""
        if self.kind == "zero":
            return self._zeros(size)
        if self.kind == "injected":
            return self._take(size)
        return self._rng.normal(0.0, sigma, size=size)

    def uniform(self, size=None):
        """Uniform draw(s) on [0, 1); the zero source always returns 0."""
        if self.kind == "zero":
            return self._zeros(size)
        if self.kind == "injected":
            return self._take(size)
        return self._rng.uniform(size=size)

    def substream(self, index: int) -> "NoiseSource":
        """Independent per-index stream; deterministic given the parent seed."""
        if self.kind == "zero":
            return self
        if self.kind != "seeded":
            raise ValueError("substreams are only defined for seeded sources")
        seq = np.random.SeedSequence(entropy=self._seed, spawn_key=(int(index),))
        return NoiseSource("seeded", seed=seq)
