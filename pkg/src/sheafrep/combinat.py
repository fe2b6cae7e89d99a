"""Partitions, Young diagram calculus, horizontal strips, uniform padding."""

from __future__ import annotations

from functools import lru_cache
from math import factorial, prod
from typing import Iterator


class Partition:
    """Weakly decreasing sequence of positive integers.

    The empty sequence is the unique partition of 0.  Instances are
    immutable and hashable; ``parts`` never carries trailing zeros.
    """

    __slots__ = ("parts",)

    def __init__(self, parts=()):
        parts = tuple(int(p) for p in parts if p != 0)
        for a, b in zip(parts, parts[1:]):
            if a < b:
                raise ValueError(f"not weakly decreasing: {parts}")
        if any(p < 0 for p in parts):
            raise ValueError(f"negative part: {parts}")
        object.__setattr__(self, "parts", parts)

    def __setattr__(self, *a):
        raise AttributeError("Partition is immutable")

    @property
    def size(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def __eq__(self, other):
        if isinstance(other, Partition):
            return self.parts == other.parts
        return NotImplemented

    def __hash__(self):
        return hash(self.parts)

    def __repr__(self):
        return f"Partition({list(self.parts)})"

    def __str__(self):
        return ",".join(str(p) for p in self.parts) if self.parts else "0"

    @staticmethod
    def parse(text: str) -> "Partition":
        """Inverse of str(): comma-separated parts, '0' or '' for the empty one."""
        text = text.strip()
        if text in ("", "0"):
            return Partition()
        return Partition(int(p) for p in text.split(","))

    def conjugate(self) -> "Partition":
        if not self.parts:
            return Partition()
        return Partition(
            sum(1 for p in self.parts if p > i) for i in range(self.parts[0])
        )

    def contains(self, other: "Partition") -> bool:
        o = other.parts
        return len(o) <= len(self.parts) and all(
            self.parts[i] >= o[i] for i in range(len(o))
        )


@lru_cache(maxsize=None)
def partitions_of(n: int) -> tuple[Partition, ...]:
    """All partitions of n in reverse-lexicographic order."""
    if n < 0:
        raise ValueError("n must be nonnegative")

    def gen(remaining: int, maxpart: int, prefix: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        if remaining == 0:
            yield prefix
            return
        for p in range(min(maxpart, remaining), 0, -1):
            yield from gen(remaining - p, p, prefix + (p,))

    return tuple(Partition(t) for t in gen(n, n, ()))


def hook_dimension(lam: Partition) -> int:
    """Number of standard Young tableaux of the given shape."""
    n = lam.size
    if n == 0:
        return 1
    conj = lam.conjugate().parts
    hooks = prod(
        lam.parts[i] - j + conj[j] - i - 1
        for i in range(len(lam.parts))
        for j in range(lam.parts[i])
    )
    return factorial(n) // hooks


def add_boxes_distinct_columns(lam: Partition, k: int) -> set[Partition]:
    """Partitions of |lam|+k adding a horizontal strip of k boxes."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    rows = list(lam.parts)
    results: set[Partition] = set()

    # Row i of the result can take between lam_i and lam_{i-1} boxes; a new
    # bottom row may hold any leftover.  Enumerate row-extension vectors.
    def rec(i: int, remaining: int, new_rows: list[int]):
        if i == len(rows):
            if remaining == 0:
                results.add(Partition(new_rows))
            elif not rows or remaining <= rows[-1]:
                cand = new_rows + [remaining]
                if not new_rows or new_rows[-1] >= remaining:
                    results.add(Partition(cand))
            return
        upper = rows[i - 1] if i > 0 else rows[i] + remaining
        for add in range(0, min(remaining, upper - rows[i]) + 1):
            rec(i + 1, remaining - add, new_rows + [rows[i] + add])

    if not rows:
        return {Partition([k])} if k > 0 else {Partition()}
    rec(0, k, [])
    return results


def remove_one_box(lam: Partition) -> set[Partition]:
    """Branching rule: delete one removable corner box."""
    if lam.size == 0:
        raise ValueError("cannot remove a box from the empty partition")
    out = set()
    parts = lam.parts
    for i in range(len(parts)):
        if i == len(parts) - 1 or parts[i] > parts[i + 1]:
            reduced = list(parts)
            reduced[i] -= 1
            out.add(Partition(reduced))
    return out


def pad_uniform(lam: Partition, n: int) -> Partition | None:
    """Pad lam with a long first row to a partition of n.

    Returns (n - |lam|, lam_1, lam_2, ...) when n >= |lam| + lam_1, else
    None (the below-threshold degrees carry the zero module).
    """
    m = lam.size
    first = lam.parts[0] if lam.parts else 0
    if n < m + first:
        return None
    return Partition((n - m,) + lam.parts)


def lambda_tilde(lam: Partition) -> Partition:
    """The doubled-first-row partition (lam_1, lam_1, lam_2, ...) of |lam|+lam_1."""
    if not lam.parts:
        return Partition()
    return Partition((lam.parts[0],) + lam.parts)


def standard_tableaux(lam: Partition) -> list[tuple[tuple[int, ...], ...]]:
    """All standard Young tableaux of shape lam, entries 1..n.

    A tableau is a tuple of row tuples.  Ordered by last-letter order:
    tableaux compared by the row index of n, then of n-1, and so on
    (smaller row index first).
    """
    n = lam.size
    if n == 0:
        return [()]

    shapes: list[list[int]] = []

    def build(current: list[list[int]], next_entry: int, acc: list):
        if next_entry > n:
            acc.append(tuple(tuple(r) for r in current))
            return
        for i in range(len(current) + 1):
            cur_len = len(current[i]) if i < len(current) else 0
            cap = lam.parts[i] if i < len(lam.parts) else 0
            if cur_len >= cap:
                continue
            if i > 0 and len(current[i - 1]) <= cur_len:
                continue
            if i < len(current):
                current[i].append(next_entry)
                build(current, next_entry + 1, acc)
                current[i].pop()
            else:
                current.append([next_entry])
                build(current, next_entry + 1, acc)
                current.pop()

    acc: list = []
    build([], 1, acc)

    def row_of(t, entry):
        for i, row in enumerate(t):
            if entry in row:
                return i
        raise AssertionError

    acc.sort(key=lambda t: tuple(row_of(t, k) for k in range(n, 0, -1)))
    return acc
