"""Brute-force reference answers, computed straight from the definitions.

Positions are 1-based. PSV/NSV/PLV/NLV use the sentinels 0 and n+1 when no
qualifying position exists. RMinQ/RMaxQ resolve ties to the rightmost
position, like RRMinQ/RRMaxQ.
"""
from __future__ import annotations

from dataclasses import dataclass, field

RANGE_KINDS = ("RMINQ", "RLMINQ", "RRMINQ", "RKMINQ", "RMAXQ", "RLMAXQ", "RRMAXQ", "RKMAXQ")
POINT_KINDS = ("PSV", "NSV", "PLV", "NLV")
KINDS = RANGE_KINDS + POINT_KINDS


@dataclass(frozen=True)
class QuerySpec:
    kind: str
    i: int
    j: int | None = None
    k: int | None = None

    def __post_init__(self):
        kind = self.kind.upper()
        object.__setattr__(self, "kind", kind)
        if kind not in KINDS:
            raise ValueError(f"unknown query kind {self.kind!r}")
        if kind in POINT_KINDS:
            if self.j is not None or self.k is not None:
                raise ValueError(f"{kind} takes a single position")
        else:
            if self.j is None:
                raise ValueError(f"{kind} needs a range i j")
            if kind in ("RKMINQ", "RKMAXQ"):
                if self.k is None or self.k < 1:
                    raise ValueError(f"{kind} needs k >= 1")
            elif self.k is not None:
                raise ValueError(f"{kind} takes no k")

    def validate(self, n: int):
        if self.kind in POINT_KINDS:
            ok = 1 <= self.i <= n
        else:
            ok = 1 <= self.i <= self.j <= n
        if not ok:
            raise ValueError(f"{self} out of range for n={n}")

    def __str__(self):
        return " ".join(str(x) for x in (self.kind, self.i, self.j, self.k) if x is not None)


def oracle_answer(a, q: QuerySpec):
    a = list(a)
    n = len(a)
    q.validate(n)
    i, j = q.i, q.j
    kind = q.kind
    if kind == "PSV":
        return max((p for p in range(1, i) if a[p - 1] < a[i - 1]), default=0)
    if kind == "PLV":
        return max((p for p in range(1, i) if a[p - 1] > a[i - 1]), default=0)
    if kind == "NSV":
        return min((p for p in range(i + 1, n + 1) if a[p - 1] < a[i - 1]), default=n + 1)
    if kind == "NLV":
        return min((p for p in range(i + 1, n + 1) if a[p - 1] > a[i - 1]), default=n + 1)
    window = a[i - 1:j]
    best = min(window) if "MIN" in kind else max(window)
    hits = [p for p in range(i, j + 1) if a[p - 1] == best]
    if kind in ("RLMINQ", "RLMAXQ"):
        return hits[0]
    if kind in ("RKMINQ", "RKMAXQ"):
        return hits[q.k - 1] if q.k <= len(hits) else None
    return hits[-1]


@dataclass
class OracleTree:
    parent: list
    children: list
    red: dict = field(default_factory=dict)  # non-leftmost child -> True when red

    def dfuds(self) -> str:
        def rec(x):
            return "(" * len(self.children[x]) + ")" + "".join(rec(c) for c in self.children[x])
        return "(" + rec(0)

    def colors(self) -> str:
        """V as a 0/1 string: the sentinel, then siblings right to left per parent in preorder."""
        out = ["1"]
        stack = [0]
        while stack:
            x = stack.pop()
            out.extend("0" if self.red[c] else "1" for c in reversed(self.children[x][1:]))
            stack.extend(reversed(self.children[x]))
        return "".join(out)


def oracle_min_tree(a, side="min") -> OracleTree:
    a = list(a)
    n = len(a)
    if side == "min":
        better = lambda u, v: u < v  # noqa: E731
    else:
        better = lambda u, v: u > v  # noqa: E731
    parent = [-1] + [max((p for p in range(1, i) if better(a[p - 1], a[i - 1])), default=0)
                     for i in range(1, n + 1)]
    children = [[] for _ in range(n + 1)]
    for i in range(1, n + 1):
        children[parent[i]].append(i)
    red = {}
    for kids in children:
        for left, c in zip(kids, kids[1:]):
            red[c] = better(a[c - 1], a[left - 1])
    return OracleTree(parent, children, red)
