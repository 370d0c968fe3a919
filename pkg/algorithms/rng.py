"""
Counter-based random streams keyed by (master_seed, run_index)
"""

import numpy as np

_MASK64 = (1 << 64) - 1
INDEX_STREAM = 0
AUX_STREAM = 1
_BLOCK = 1024


class RunRng:
    """Two independent Philox streams for one run.

    The index stream drives the component draws i_k, the auxiliary stream
    drives everything else (SVRP's xi_s, L-SVRP's Bernoulli coins). Two runs
    with the same (master_seed, run_index) see the same component sequence,
    whatever method consumes it.
    """

    def __init__(self, master_seed: int, run_index: int):
        self.master_seed = int(master_seed)
        self.run_index = int(run_index)
        self._indices = self._generator(INDEX_STREAM)
        self._aux = self._generator(AUX_STREAM)
        self._block = np.empty(0, dtype=np.int64)
        self._block_n = None
        self._pos = 0

    def _generator(self, stream: int) -> np.random.Generator:
        key = (self.master_seed & _MASK64) | ((self.run_index & _MASK64) << 64)
        key ^= stream << 126
        return np.random.Generator(np.random.Philox(key=key))

    def index(self, n: int) -> int:
        """Uniform component index in [0, n); Generator.integers rejects, so no modulo bias"""
        if self._pos >= self._block.shape[0] or self._block_n != n:
            self._block = self._indices.integers(0, n, size=_BLOCK)
            self._block_n = n
            self._pos = 0
        i = int(self._block[self._pos])
        self._pos += 1
        return i

    def inner_index(self, m: int) -> int:
        """Uniform draw on {0, ..., m-1} from the auxiliary stream"""
        return int(self._aux.integers(0, m))

    def bernoulli(self, p: float) -> bool:
        return bool(self._aux.random() < p)

    def normal(self, size) -> np.ndarray:
        return self._aux.standard_normal(size)
