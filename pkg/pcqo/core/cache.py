"""Bounded cache for constructed gate matrices."""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Hashable

import numpy as np

from pcqo.exceptions import ContractViolationError


class GateCache:
    """``functools.lru_cache`` over a matrix builder; cached matrices are read-only.

    ``resize`` swaps in a fresh cache of the new size and drops the current entries.
    """

    def __init__(self, builder: Callable[..., np.ndarray], maxsize: int = 4096):
        self._builder = builder
        self.resize(maxsize)

    def _build(self, *key: Hashable) -> np.ndarray:
        matrix = self._builder(*key)
        matrix.setflags(write=False)
        return matrix

    def __call__(self, *key: Hashable) -> np.ndarray:
        return self._cached(*key)

    def resize(self, maxsize: int):
        if maxsize < 1:
            raise ContractViolationError(f"Gate cache size must be positive, got {maxsize}")
        self.maxsize = maxsize
        self._cached = lru_cache(maxsize=maxsize)(self._build)

    def clear(self):
        self._cached.cache_clear()

    @property
    def hits(self) -> int:
        return self._cached.cache_info().hits

    @property
    def misses(self) -> int:
        return self._cached.cache_info().misses

    def __len__(self) -> int:
        return self._cached.cache_info().currsize


__all__ = ["GateCache"]
