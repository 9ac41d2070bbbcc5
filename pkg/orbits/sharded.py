import threading
from typing import Dict, Generic, Hashable, Iterable, List, Optional, Tuple, TypeVar

from errors import ContractViolation

K = TypeVar("K", bound=Hashable)
V = TypeVar("V")

DEFAULT_SHARDS = 997


class ShardedMap(Generic[K, V]):
    """Dict split into lock-guarded shards.

    Writers take the shard lock and never overwrite an existing key; readers go
    straight to the shard dict.
    """

    def __init__(self, shard_count: int = DEFAULT_SHARDS):
        if shard_count < 1:
            raise ContractViolation(f"shard_count must be >= 1, got {shard_count}")
        self._shards: List[Dict[K, V]] = [{} for _ in range(shard_count)]
        self._locks = [threading.Lock() for _ in range(shard_count)]
        self._count = 0
        self._count_lock = threading.Lock()

    def _index(self, key: K) -> int:
        return hash(key) % len(self._shards)

    def insert_if_absent(self, key: K, value: V) -> Tuple[bool, V]:
        """Insert unless present. Returns (inserted, value now stored)."""
        index = self._index(key)
        shard = self._shards[index]
        with self._locks[index]:
            if key in shard:
                return False, shard[key]
            shard[key] = value
        with self._count_lock:
            self._count += 1
        return True, value

    def get(self, key: K, default: Optional[V] = None) -> Optional[V]:
        return self._shards[hash(key) % len(self._shards)].get(key, default)

    def first_hit(self, keys: Iterable[K]) -> Tuple[int, Optional[V]]:
        """Position and value of the first key present, or (-1, None)."""
        shards = self._shards
        size = len(shards)
        for position, key in enumerate(keys):
            value = shards[hash(key) % size].get(key)
            if value is not None:
                return position, value
        return -1, None

    def __contains__(self, key: K) -> bool:
        return self.get(key) is not None

    def __len__(self) -> int:
        return self._count

    @property
    def shard_count(self) -> int:
        return len(self._shards)
