"""Collision-free interning of encoding strings to dense integer ids."""
from __future__ import annotations

import itertools
import threading
from collections.abc import Callable, Sequence


_TOKENS = itertools.count(1)


class FeatureInterner:
    """Bijection between encoding strings and ids ``0, 1, 2, ...`` in insertion order.

    Safe to share between threads. ``token`` identifies the instance so that
    feature spaces built against different interners can be told apart.
    """

    def __init__(self) -> None:
        self._ids: dict[str, int] = {}
        self._strings: list[str] = []
        self._lock = threading.Lock()
        self.token = next(_TOKENS)

    def intern(self, encoding: str) -> int:
        found = self._ids.get(encoding)
        if found is not None:
            return found
        with self._lock:
            found = self._ids.get(encoding)
            if found is None:
                found = len(self._strings)
                self._strings.append(encoding)
                self._ids[encoding] = found
            return found

    def lookup(self, feature_id: int) -> str:
        return self._strings[feature_id]

    def get(self, encoding: str) -> int | None:
        return self._ids.get(encoding)

    def __len__(self) -> int:
        return len(self._strings)

    def __contains__(self, encoding: str) -> bool:
        return encoding in self._ids

    def strings(self) -> list[str]:
        return list(self._strings)

    def absorb(self, strings: Sequence[str], translate: Callable[[str, Callable[[int], int]], str]) -> list[int]:
        """Intern the strings of another interner, in that interner's id order.

        ``translate(encoding, id_map)`` rewrites the ids embedded in an
        encoding. An encoding only references ids smaller than its own, so
        the map is complete whenever it is consulted.

        Returns:
            ``remap`` with ``remap[local_id] == global_id``.
        """
        remap: list[int] = []
        for encoding in strings:
            remap.append(self.intern(translate(encoding, remap.__getitem__)))
        return remap
