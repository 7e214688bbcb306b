"""Set partitions in restricted-growth-string order."""

from __future__ import annotations

from typing import Iterator, Sequence


def restricted_growth_strings(n: int) -> Iterator[tuple[int, ...]]:
    """All strings a with a[0] = 0 and a[i] <= 1 + max(a[:i]), lexicographically."""
    if n == 0:
        yield ()
        return
    a = [0] * n
    m = [0] * n  # m[i] = max(a[:i+1])
    while True:
        yield tuple(a)
        i = n - 1
        while i > 0 and a[i] > m[i - 1]:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        m[i] = max(m[i - 1], a[i])
        for j in range(i + 1, n):
            a[j] = 0
            m[j] = m[i]


def set_partitions(items: Sequence) -> Iterator[list[list]]:
    """Partitions of ``items`` as lists of blocks, blocks ordered by first member."""
    items = list(items)
    for rgs in restricted_growth_strings(len(items)):
        blocks: list[list] = [[] for _ in range(max(rgs, default=-1) + 1)]
        for item, b in zip(items, rgs):
            blocks[b].append(item)
        yield blocks


def bell(n: int) -> int:
    row = [1]
    for _ in range(n):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]
