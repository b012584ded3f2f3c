"""Divisor combinatorics on an abstract curve.

Points are opaque string labels; only incidence and multiplicity matter.
Divisors keep their entries sorted by label so equal divisors compare equal.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

_LABEL_RE = re.compile(r"^[A-Za-z0-9_.\-]+$")


@dataclass(frozen=True)
class PartitionType:
    """A partition n1 >= n2 >= ... >= nr of a positive integer."""

    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(p) for p in self.parts)
        object.__setattr__(self, "parts", parts)
        if not parts:
            raise ValueError("a partition needs at least one part")
        if any(p < 1 for p in parts):
            raise ValueError("partition parts must be positive")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise ValueError("partition parts must be weakly decreasing")

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    def __str__(self):
        return "(" + ",".join(str(p) for p in self.parts) + ")"


@dataclass(frozen=True)
class BranchDivisor:
    """An effective divisor: pairwise-distinct labels with multiplicities >= 1."""

    entries: tuple[tuple[str, int], ...]

    def __post_init__(self):
        entries = tuple(sorted((str(lbl), int(m)) for lbl, m in self.entries))
        object.__setattr__(self, "entries", entries)
        labels = [lbl for lbl, _ in entries]
        if len(set(labels)) != len(labels):
            raise ValueError("divisor labels must be pairwise distinct")
        for lbl, m in entries:
            if not _LABEL_RE.match(lbl):
                raise ValueError(f"bad point label {lbl!r}")
            if m < 1:
                raise ValueError(f"multiplicity of {lbl!r} must be >= 1")

    @classmethod
    def simple(cls, labels) -> "BranchDivisor":
        """Multiplicity-free divisor on the given labels."""
        return cls(tuple((lbl, 1) for lbl in labels))

    @classmethod
    def parse(cls, text: str) -> "BranchDivisor":
        """Parse "a:1,b:2,c:3"; simple points may omit ":1"."""
        entries = []
        for chunk in text.split(","):
            chunk = chunk.strip()
            if not chunk:
                raise ValueError(f"empty divisor entry in {text!r}")
            if ":" in chunk:
                lbl, _, mult = chunk.partition(":")
                try:
                    m = int(mult)
                except ValueError:
                    raise ValueError(f"bad multiplicity in {chunk!r}") from None
                entries.append((lbl.strip(), m))
            else:
                entries.append((chunk, 1))
        return cls(tuple(entries))

    @property
    def degree(self) -> int:
        return sum(m for _, m in self.entries)

    def support(self) -> tuple[str, ...]:
        return tuple(lbl for lbl, _ in self.entries)

    def multiplicity(self, label: str) -> int:
        for lbl, m in self.entries:
            if lbl == label:
                return m
        return 0

    @property
    def is_simple(self) -> bool:
        return all(m == 1 for _, m in self.entries)

    def text(self) -> str:
        return ",".join(lbl if m == 1 else f"{lbl}:{m}" for lbl, m in self.entries)

    def __str__(self):
        return self.text() if self.entries else "0"


def partition_of(divisor: BranchDivisor) -> PartitionType:
    """Multiplicity partition of a divisor, sorted weakly decreasing."""
    if not divisor.entries:
        raise ValueError("the zero divisor has no partition type")
    return PartitionType(tuple(sorted((m for _, m in divisor.entries), reverse=True)))


def stratum_dimension(nu: PartitionType) -> int:
    """Dimension of the stratum of divisors with multiplicity partition nu."""
    return nu.length


def decompose(divisor: BranchDivisor) -> tuple[BranchDivisor, ...]:
    """Split D as D1 + 2*D2 + ... + s*Ds with each Di multiplicity-free.

    Di collects the points of multiplicity exactly i; intermediate Di may be
    empty.  The tuple has length s = max multiplicity (empty for degree 0).
    """
    if not divisor.entries:
        return ()
    s = max(m for _, m in divisor.entries)
    layers = []
    for i in range(1, s + 1):
        layers.append(
            BranchDivisor(tuple((lbl, 1) for lbl, m in divisor.entries if m == i))
        )
    return tuple(layers)


def compose(*layers: BranchDivisor) -> BranchDivisor:
    """Inverse of decompose: assemble D1 + 2*D2 + ... + s*Ds.

    Every layer must be multiplicity-free and their supports pairwise
    disjoint.
    """
    entries: list[tuple[str, int]] = []
    seen: set[str] = set()
    for i, layer in enumerate(layers, start=1):
        if not layer.is_simple:
            raise ValueError(f"layer {i} is not multiplicity-free")
        for lbl in layer.support():
            if lbl in seen:
                raise ValueError(f"overlapping support at label {lbl!r}")
            seen.add(lbl)
            entries.append((lbl, i))
    return BranchDivisor(tuple(entries))


def in_universal_divisor(label: str, divisor: BranchDivisor) -> bool:
    """Incidence test: is the labelled point in the support of the divisor?"""
    return divisor.multiplicity(label) > 0
