"""Parsers for follower networks and cascade event logs.

Canonical file formats (UTF-8, one record per line, ``#`` comments allowed):

* follow edges:  ``follower<TAB>followee``
* cascade events: ``cascade_id<TAB>user_id<TAB>timestamp``

Timestamps are integer time units (epoch seconds for the bundled adapters).
Fields may in practice be separated by any whitespace run, which lets the
publicly distributed follower edge lists (space-separated) load unchanged.

Heterogeneous upstream dumps are normalised to these two formats at the
boundary; :func:`load_higgs_activity` is the adapter for the one public
activity log that ships in a four-column layout.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable

from .errors import InputError, ParseError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CascadeLog:
    """Events of one cascade: who participated and when.

    Holds at most one event per user (earliest timestamp wins) and keeps
    events sorted by (timestamp, user id).
    """

    cascade_id: str
    events: tuple[tuple[str, int], ...]

    @classmethod
    def from_events(cls, cascade_id: str, events: Iterable[tuple[str, int]]) -> "CascadeLog":
        """Canonicalise raw (user, timestamp) pairs into a CascadeLog."""
        earliest: dict[str, int] = {}
        for user, ts in events:
            if user not in earliest or ts < earliest[user]:
                earliest[user] = ts
        ordered = tuple(sorted(earliest.items(), key=lambda item: (item[1], item[0])))
        return cls(cascade_id, tuple((u, t) for u, t in ordered))

    @property
    def size(self) -> int:
        return len(self.events)

    def users(self) -> list[str]:
        return [user for user, _ in self.events]

    def timestamps(self) -> dict[str, int]:
        return dict(self.events)


@dataclass(frozen=True)
class DatasetStats:
    """Headline counts for one dataset."""

    user_count: int
    link_count: int
    cascade_count: int
    mean_cascade_size: float


def load_follow_edges(stream: Iterable[str], strict: bool = False) -> list[tuple[str, str]]:
    """Read follower->followee pairs, in file order, duplicates preserved.

    Malformed lines (wrong field count) are skipped and counted; with
    ``strict`` they raise :class:`ParseError` naming the first offender.
    """
    edges: list[tuple[str, str]] = []
    malformed = 0
    first_bad = ""
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 2:
            if strict:
                raise ParseError(f"line {lineno}: expected 2 fields, got {len(fields)}: {line!r}")
            malformed += 1
            if not first_bad:
                first_bad = f"line {lineno}: {line!r}"
            continue
        edges.append((fields[0], fields[1]))
    if malformed:
        logger.warning("skipped %d malformed edge line(s); first: %s", malformed, first_bad)
    return edges


def load_cascades(stream: Iterable[str], strict: bool = False) -> list[CascadeLog]:
    """Read cascade events grouped by cascade id (first-appearance order).

    Duplicate events for a user within a cascade keep the earliest
    timestamp.  A non-integer timestamp is always a :class:`ParseError`;
    lines with the wrong field count follow the strict/skip rule of
    :func:`load_follow_edges`.
    """
    grouped: dict[str, list[tuple[str, int]]] = {}
    malformed = 0
    first_bad = ""
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 3:
            if strict:
                raise ParseError(f"line {lineno}: expected 3 fields, got {len(fields)}: {line!r}")
            malformed += 1
            if not first_bad:
                first_bad = f"line {lineno}: {line!r}"
            continue
        cascade_id, user, ts_text = fields
        try:
            ts = int(ts_text)
        except ValueError:
            raise ParseError(f"line {lineno}: invalid timestamp {ts_text!r}") from None
        grouped.setdefault(cascade_id, []).append((user, ts))
    if malformed:
        logger.warning("skipped %d malformed event line(s); first: %s", malformed, first_bad)
    return [CascadeLog.from_events(cid, events) for cid, events in grouped.items()]


def load_higgs_activity(
    stream: Iterable[str],
    cascade_id: str = "higgs",
    interactions: frozenset[str] = frozenset({"RT"}),
    strict: bool = False,
) -> list[CascadeLog]:
    """Adapter for the public four-column activity log.

    Lines read ``acting_user source_user timestamp kind``; every selected
    row becomes an event for the acting user, and the whole file is one
    cascade.  ``interactions`` picks the row kinds to keep (retweets by
    default); pass ``frozenset()`` to keep everything.
    """
    events: list[tuple[str, int]] = []
    malformed = 0
    first_bad = ""
    for lineno, raw in enumerate(stream, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 4:
            if strict:
                raise ParseError(f"line {lineno}: expected 4 fields, got {len(fields)}: {line!r}")
            malformed += 1
            if not first_bad:
                first_bad = f"line {lineno}: {line!r}"
            continue
        user, _, ts_text, kind = fields
        if interactions and kind not in interactions:
            continue
        try:
            ts = int(ts_text)
        except ValueError:
            raise ParseError(f"line {lineno}: invalid timestamp {ts_text!r}") from None
        events.append((user, ts))
    if malformed:
        logger.warning("skipped %d malformed activity line(s); first: %s", malformed, first_bad)
    if not events:
        return []
    return [CascadeLog.from_events(cascade_id, events)]


def filter_cascades(logs: list[CascadeLog], min_size: int) -> list[CascadeLog]:
    """Keep cascades with at least ``min_size`` participants, order preserved."""
    if min_size < 0:
        raise InputError("min_size must be >= 0")
    return [log for log in logs if log.size >= min_size]


def compute_stats(edges: list[tuple[str, str]], logs: list[CascadeLog]) -> DatasetStats:
    """Dataset-level counts over a raw edge list and cascade logs.

    ``user_count`` covers every user mentioned in either input (the follow
    network's nodes plus all event users); ``link_count`` is the number of
    distinct non-self-loop follow edges.
    """
    users: set[str] = set()
    links: set[tuple[str, str]] = set()
    for src, dst in edges:
        users.add(src)
        users.add(dst)
        if src != dst:
            links.add((src, dst))
    total_size = 0
    for log in logs:
        users.update(log.users())
        total_size += log.size
    count = len(logs)
    mean = total_size / count if count else 0.0
    return DatasetStats(
        user_count=len(users),
        link_count=len(links),
        cascade_count=count,
        mean_cascade_size=mean,
    )


def dump_follow_edges(edges: list[tuple[str, str]]) -> str:
    """Serialise edges back to the canonical tab-separated text."""
    return "".join(f"{src}\t{dst}\n" for src, dst in edges)


def dump_cascades(logs: list[CascadeLog]) -> str:
    """Serialise cascade logs back to the canonical tab-separated text."""
    lines: list[str] = []
    for log in logs:
        for user, ts in log.events:
            lines.append(f"{log.cascade_id}\t{user}\t{ts}\n")
    return "".join(lines)
