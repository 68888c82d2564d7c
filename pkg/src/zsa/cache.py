"""Persistent zero cache with atomic JSON storage.

Entries are keyed by (family, n, rectangle, tol, code version) so a
cache built by one version of the numerics is never served to another.
Merging rectangles deduplicates zeros by position within 10 * tol.
"""

from __future__ import annotations

import json
import os
import tempfile
import time
from dataclasses import dataclass

from zsa import __version__
from zsa.zerofinder import ComplexZero, Rectangle

CACHE_ENV = "ZSA_CACHE_DIR"


def cache_dir(explicit: str | None = None) -> str:
    if explicit:
        return explicit
    return os.environ.get(CACHE_ENV, os.path.join(os.path.expanduser("~"),
                                                  ".cache", "zsa"))


def _key_string(family: str, n: int, rect: Rectangle, tol: float) -> str:
    return (f"{family}-{n}-{rect.x_min!r}-{rect.x_max!r}"
            f"-{rect.y_min!r}-{rect.y_max!r}-{tol!r}-{__version__}")


def atomic_write(path: str, text: str) -> None:
    """Write via a temp file in the same directory, then rename."""
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


@dataclass
class ZeroCacheEntry:
    key: str
    zeros: list[ComplexZero]
    created: float

    def to_json_dict(self) -> dict:
        return {
            "key": self.key,
            "created": self.created,
            "zeros": [
                {"re": z.position.real, "im": z.position.imag,
                 "residual": z.residual, "certified": z.certified,
                 "multiplicity": z.multiplicity}
                for z in self.zeros],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "ZeroCacheEntry":
        zeros = [ComplexZero(position=complex(e["re"], e["im"]),
                             residual=float(e["residual"]),
                             certified=bool(e["certified"]),
                             multiplicity=int(e["multiplicity"]))
                 for e in obj["zeros"]]
        return cls(key=obj["key"], zeros=zeros, created=float(obj["created"]))


class ZeroCache:
    """File-backed map from search keys to certified zero lists."""

    def __init__(self, directory: str | None = None):
        self.directory = cache_dir(directory)
        self.path = os.path.join(self.directory, "zeros.json")
        self._entries: dict[str, ZeroCacheEntry] = {}
        self._load()

    def _load(self) -> None:
        if not os.path.exists(self.path):
            return
        try:
            with open(self.path, encoding="utf-8") as fh:
                data = json.load(fh)
            for obj in data.get("entries", []):
                e = ZeroCacheEntry.from_json_dict(obj)
                self._entries[e.key] = e
        except (json.JSONDecodeError, KeyError, ValueError):
            # Corrupt cache: start fresh, the caller rebuilds.
            self._entries = {}

    def save(self) -> None:
        payload = {"version": __version__,
                   "entries": [self._entries[k].to_json_dict()
                               for k in sorted(self._entries)]}
        atomic_write(self.path, json.dumps(payload, sort_keys=True))

    def get(self, family: str, n: int, rect: Rectangle,
            tol: float) -> list[ComplexZero] | None:
        e = self._entries.get(_key_string(family, n, rect, tol))
        return list(e.zeros) if e is not None else None

    def put(self, family: str, n: int, rect: Rectangle, tol: float,
            zeros: list[ComplexZero]) -> None:
        key = _key_string(family, n, rect, tol)
        merged: list[ComplexZero] = []
        for z in sorted(zeros, key=lambda w: (w.position.imag,
                                              w.position.real)):
            if merged and abs(z.position - merged[-1].position) <= 10 * tol:
                continue
            merged.append(z)
        self._entries[key] = ZeroCacheEntry(key=key, zeros=merged,
                                            created=time.time())
