"""Finite groups as dense multiplication tables over 0-based element indices.

Element 0 is always the identity.  Groups built from permutation generators
list their elements in BFS discovery order from the generators, which makes
every downstream enumeration deterministic.  Permutation products compose
left to right: (p * q) sends x to q(p(x)).
"""

from __future__ import annotations

import random
import re
from array import array
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import CapExceeded

DEFAULT_CLOSURE_CAP = 10_080

Perm = tuple[int, ...]

_CYCLE_RE = re.compile(r"\(([^()]*)\)")
_CATALOG_RE = re.compile(r"^([CcDdSsAa])(\d+)$")


def compose(p: Perm, q: Perm) -> Perm:
    """Product of permutations: apply p first, then q."""
    return tuple(q[i] for i in p)


def invert(p: Perm) -> Perm:
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def identity_perm(degree: int) -> Perm:
    return tuple(range(degree))


def cycle_type(p: Perm) -> tuple[int, ...]:
    """Cycle lengths of p in weakly decreasing order, fixed points included."""
    seen = [False] * len(p)
    lengths = []
    for start in range(len(p)):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = p[x]
            length += 1
        lengths.append(length)
    return tuple(sorted(lengths, reverse=True))


def cycle_string(p: Perm) -> str:
    """Cycle notation with 1-based letters; the identity prints as "()"."""
    seen = [False] * len(p)
    parts = []
    for start in range(len(p)):
        if seen[start] or p[start] == start:
            seen[start] = True
            continue
        cyc = []
        x = start
        while not seen[x]:
            seen[x] = True
            cyc.append(str(x + 1))
            x = p[x]
        parts.append("(" + " ".join(cyc) + ")")
    return "".join(parts) if parts else "()"


def parse_cycles(text: str, degree: int | None = None) -> Perm:
    """Parse cycle notation with 1-based letters, e.g. "(1 2)(3 4)" or "()".

    Multiple cycles in one string compose left to right.  The degree defaults
    to the largest letter mentioned.
    """
    text = text.strip()
    if not text:
        raise ValueError("empty permutation string")
    stripped = "".join(text.split())
    if _CYCLE_RE.sub("", stripped):
        raise ValueError(f"malformed cycle notation: {text!r}")
    cycles = []
    max_letter = 0
    for body in _CYCLE_RE.findall(text):
        letters = [tok for tok in re.split(r"[,\s]+", body.strip()) if tok]
        if not letters:
            cycles.append([])
            continue
        try:
            nums = [int(tok) for tok in letters]
        except ValueError:
            raise ValueError(f"non-integer letter in cycle: {body!r}") from None
        if any(x < 1 for x in nums):
            raise ValueError(f"cycle letters must be >= 1: {body!r}")
        if len(set(nums)) != len(nums):
            raise ValueError(f"repeated letter within a cycle: {body!r}")
        max_letter = max(max_letter, max(nums))
        cycles.append([x - 1 for x in nums])
    if degree is None:
        degree = max_letter
    elif max_letter > degree:
        raise ValueError(f"cycle letter {max_letter} exceeds degree {degree}")
    perm = identity_perm(degree)
    for cyc in cycles:
        if len(cyc) < 2:
            continue
        step = list(range(degree))
        for i, x in enumerate(cyc):
            step[x] = cyc[(i + 1) % len(cyc)]
        perm = compose(perm, tuple(step))
    return perm


def parse_generator_list(text: str) -> list[str]:
    """Split a generator string into per-generator cycle strings.

    Generators are separated by commas or whitespace occurring outside
    parentheses; adjacent parenthesized cycles with no separator belong to
    the same generator, e.g. "(1 2)(3 4), (1 2 3)" has two generators.
    """
    gens = []
    current = []
    depth = 0
    for ch in text:
        if ch == "(":
            depth += 1
            current.append(ch)
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise ValueError(f"unbalanced parentheses in {text!r}")
            current.append(ch)
        elif depth == 0 and (ch == "," or ch.isspace()):
            if current:
                gens.append("".join(current))
                current = []
        else:
            current.append(ch)
    if depth != 0:
        raise ValueError(f"unbalanced parentheses in {text!r}")
    if current:
        gens.append("".join(current))
    return gens


class FiniteGroup:
    """A finite group stored as a dense multiplication table.

    Rows and columns are element indices; ``mul_table[a][b]`` is the index of
    the product a*b.  Optional ``perms`` holds a permutation image for every
    element (for groups built from permutation generators) and ``names``
    holds printable element names.
    """

    def __init__(
        self,
        mul_table: Sequence[Sequence[int]],
        *,
        name: str = "G",
        perms: tuple[Perm, ...] | None = None,
        names: tuple[str, ...] | None = None,
    ):
        n = len(mul_table)
        if n == 0:
            raise ValueError("a group needs at least the identity element")
        rows = []
        for row in mul_table:
            if len(row) != n:
                raise ValueError("multiplication table must be square")
            rows.append(array("H", row) if n > 512 else list(row))
        if any(rows[0][j] != j for j in range(n)) or any(rows[i][0] != i for i in range(n)):
            raise ValueError("element 0 must be the identity")
        self.order = n
        self.mul_table = rows
        self.identity = 0
        self.name = name
        self.perms = perms
        self.names = names
        inv = [-1] * n
        for a in range(n):
            row = rows[a]
            for b in range(n):
                if row[b] == 0:
                    inv[a] = b
                    break
            if inv[a] < 0:
                raise ValueError(f"element {a} has no inverse")
        self.inv_table = inv
        self._orders: list[int] | None = None
        self._classes: tuple[ConjugacyClass, ...] | None = None
        self._class_ids: list[int] | None = None
        self._center: frozenset[int] | None = None
        self._name_to_index: dict[str, int] | None = None
        self._closure_cache: dict[tuple[int, int], int] = {}
        self._fiber_cache: dict = {}
        self.full_mask = (1 << n) - 1
        self.identity_mask = 1

    def __repr__(self):
        return f"<FiniteGroup {self.name} of order {self.order}>"

    # element arithmetic -----------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def inv(self, a: int) -> int:
        return self.inv_table[a]

    def conj(self, h: int, x: int) -> int:
        """h * x * h^-1."""
        return self.mul_table[self.mul_table[h][x]][self.inv_table[h]]

    def commutator(self, a: int, b: int) -> int:
        """a * b * a^-1 * b^-1."""
        t = self.mul_table
        return t[t[t[a][b]][self.inv_table[a]]][self.inv_table[b]]

    def elements(self) -> range:
        return range(self.order)

    def element(self, index: int) -> "GroupElement":
        return GroupElement(self, index)

    def element_order(self, a: int) -> int:
        if self._orders is None:
            self._orders = [self._order_of(x) for x in range(self.order)]
        return self._orders[a]

    def _order_of(self, a: int) -> int:
        k = 1
        x = a
        while x != 0:
            x = self.mul_table[x][a]
            k += 1
        return k

    @property
    def is_abelian(self) -> bool:
        return len(self.center()) == self.order

    # element naming -----------------------------------------------------

    def element_name(self, a: int) -> str:
        if self.names is not None:
            return self.names[a]
        if self.perms is not None:
            return cycle_string(self.perms[a])
        return str(a)

    def parse_element(self, token: str) -> int:
        """Resolve an element from its printed name, cycle notation, or index."""
        token = token.strip()
        if not token:
            raise ValueError("empty element token")
        if self._name_to_index is None:
            self._name_to_index = {self.element_name(a): a for a in self.elements()}
        if token in self._name_to_index:
            return self._name_to_index[token]
        if token.startswith("("):
            if self.perms is None:
                raise ValueError(f"{self.name} is not a permutation group: {token!r}")
            p = parse_cycles(token, degree=len(self.perms[0]))
            for a in self.elements():
                if self.perms[a] == p:
                    return a
            raise ValueError(f"permutation {token!r} is not an element of {self.name}")
        try:
            idx = int(token)
        except ValueError:
            raise ValueError(f"unknown element {token!r} of {self.name}") from None
        if not 0 <= idx < self.order:
            raise ValueError(f"element index {idx} out of range for {self.name}")
        return idx

    # subgroup machinery -------------------------------------------------

    def generated_subgroup(self, seed: Iterable[int]) -> frozenset[int]:
        """BFS closure of the seed set together with the identity."""
        gens = [self._check_index(x) for x in seed]
        seen = {0}
        queue = [0]
        mul = self.mul_table
        while queue:
            x = queue.pop()
            row = mul[x]
            for g in gens:
                y = row[g]
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        return frozenset(seen)

    def is_generating(self, seed: Iterable[int]) -> bool:
        return len(self.generated_subgroup(seed)) == self.order

    def mask_of(self, members: Iterable[int]) -> int:
        m = 0
        for x in members:
            m |= 1 << self._check_index(x)
        return m

    def closure_update(self, subgroup_mask: int, x: int) -> int:
        """Closure mask of <H, x> where ``subgroup_mask`` encodes a subgroup H.

        Cached on (mask, x); the enumeration paths hit this cache heavily.
        """
        if (subgroup_mask >> x) & 1:
            return subgroup_mask
        key = (subgroup_mask, x)
        cached = self._closure_cache.get(key)
        if cached is not None:
            return cached
        mul = self.mul_table
        m = subgroup_mask | (1 << x)
        prev = 0
        while m != prev:
            prev = m
            elems = [i for i in range(self.order) if (m >> i) & 1]
            for a in elems:
                row = mul[a]
                for b in elems:
                    m |= 1 << row[b]
        self._closure_cache[key] = m
        return m

    # conjugation structure ------------------------------------------------

    def center(self) -> frozenset[int]:
        if self._center is None:
            mul = self.mul_table
            n = self.order
            self._center = frozenset(
                z for z in range(n) if all(mul[z][x] == mul[x][z] for x in range(n))
            )
        return self._center

    def centralizer(self, members: Iterable[int]) -> frozenset[int]:
        """Elements commuting with every member; the empty set centralizes to G."""
        ms = [self._check_index(x) for x in members]
        mul = self.mul_table
        return frozenset(
            h for h in range(self.order) if all(mul[h][x] == mul[x][h] for x in ms)
        )

    def conjugacy_classes(self) -> tuple["ConjugacyClass", ...]:
        if self._classes is None:
            self._build_classes()
        return self._classes

    def class_id(self, a: int) -> int:
        if self._class_ids is None:
            self._build_classes()
        return self._class_ids[a]

    def _build_classes(self):
        n = self.order
        ids = [-1] * n
        classes = []
        for start in range(n):
            if ids[start] >= 0:
                continue
            cid = len(classes)
            members = {self.conj(h, start) for h in range(n)}
            for x in members:
                ids[x] = cid
            classes.append((start, frozenset(members)))
        named = []
        used_names: set[str] = set()
        for cid, (rep, members) in enumerate(classes):
            if self.perms is not None:
                base = "+".join(str(k) for k in cycle_type(self.perms[rep]))
            else:
                base = str(cid)
            name = base if base not in used_names else f"{base}#{cid}"
            used_names.add(name)
            named.append(
                ConjugacyClass(
                    id=cid,
                    representative=GroupElement(self, rep),
                    members=members,
                    order=self.element_order(rep),
                    name=name,
                )
            )
        self._classes = tuple(named)
        self._class_ids = ids

    def class_by_selector(self, selector: str) -> "ConjugacyClass":
        """Resolve a conjugacy-class selector.

        Tries, in order: exact class-name match ("2+1", "3", ...), the
        shortcuts "T" (single transposition) and "C<k>" (single k-cycle) for
        permutation groups, then a bare integer class id.  Ambiguity is an
        error, never a silent pick.
        """
        classes = self.conjugacy_classes()
        token = selector.strip()
        if not token:
            raise ValueError("empty class selector")
        hits = [c for c in classes if c.name == token]
        if not hits and self.perms is not None:
            want = None
            if token in ("T", "t"):
                want = lambda ct: sorted(ct, reverse=True)[0] == 2 and ct.count(2) == 1
            else:
                m = re.fullmatch(r"[Cc](\d+)", token)
                if m:
                    k = int(m.group(1))
                    want = lambda ct: ct.count(k) == 1 and all(x in (1, k) for x in ct)
            if want is not None:
                hits = [
                    c
                    for c in classes
                    if c.representative.index != 0
                    and want(cycle_type(self.perms[c.representative.index]))
                ]
        if not hits:
            try:
                cid = int(token)
            except ValueError:
                raise ValueError(f"unknown class selector {token!r} for {self.name}") from None
            if not 0 <= cid < len(classes):
                raise ValueError(f"class id {cid} out of range for {self.name}")
            hits = [classes[cid]]
        if len(hits) > 1:
            ids = ", ".join(str(c.id) for c in hits)
            raise ValueError(
                f"ambiguous class selector {token!r} for {self.name}; matches ids {ids}"
            )
        return hits[0]

    # validation ---------------------------------------------------------

    def validate(self, full: bool | None = None, trials: int = 2000, seed: int = 0):
        """Check the group axioms on the table.

        Latin-square and identity/inverse laws are always checked exactly.
        Associativity is exact when the order is at most 64 (or ``full`` is
        set), otherwise verified on ``trials`` sampled triples.
        """
        n = self.order
        mul = self.mul_table
        all_idx = set(range(n))
        for a in range(n):
            if set(mul[a]) != all_idx:
                raise ValueError(f"row {a} is not a permutation of the elements")
            if {mul[b][a] for b in range(n)} != all_idx:
                raise ValueError(f"column {a} is not a permutation of the elements")
            if mul[a][0] != a or mul[0][a] != a:
                raise ValueError("identity law fails")
            if mul[a][self.inv_table[a]] != 0:
                raise ValueError("inverse law fails")
        if full is None:
            full = n <= 64
        if full:
            for a in range(n):
                for b in range(n):
                    ab = mul[a][b]
                    row_b = mul[b]
                    row_ab = mul[ab]
                    for c in range(n):
                        if row_ab[c] != mul[a][row_b[c]]:
                            raise ValueError(f"associativity fails at ({a},{b},{c})")
        else:
            rng = random.Random(seed)
            for _ in range(trials):
                a, b, c = rng.randrange(n), rng.randrange(n), rng.randrange(n)
                if mul[mul[a][b]][c] != mul[a][mul[b][c]]:
                    raise ValueError(f"associativity fails at ({a},{b},{c})")

    def _check_index(self, x: int) -> int:
        if isinstance(x, GroupElement):
            if x.group is not self:
                raise ValueError("element belongs to a different group")
            return x.index
        x = int(x)
        if not 0 <= x < self.order:
            raise ValueError(f"element index {x} out of range")
        return x


@dataclass(frozen=True)
class GroupElement:
    """An element of a specific FiniteGroup, identified by its index."""

    group: FiniteGroup
    index: int

    def __post_init__(self):
        if not 0 <= self.index < self.group.order:
            raise ValueError(f"element index {self.index} out of range")

    def _same_group(self, other: "GroupElement"):
        if self.group is not other.group:
            raise ValueError("cannot combine elements of different groups")

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        self._same_group(other)
        return GroupElement(self.group, self.group.mul(self.index, other.index))

    def inverse(self) -> "GroupElement":
        return GroupElement(self.group, self.group.inv(self.index))

    def order(self) -> int:
        return self.group.element_order(self.index)

    @property
    def is_identity(self) -> bool:
        return self.index == 0

    def __str__(self):
        return self.group.element_name(self.index)

    def __repr__(self):
        return f"{self.group.name}:{self.group.element_name(self.index)}"


@dataclass(frozen=True)
class ConjugacyClass:
    """One conjugacy class: id, representative, member set, element order."""

    id: int
    representative: GroupElement
    members: frozenset[int]
    order: int
    name: str

    @property
    def size(self) -> int:
        return len(self.members)


# constructors -----------------------------------------------------------


def group_from_permutations(
    generators: Sequence, *, cap: int = DEFAULT_CLOSURE_CAP, name: str | None = None
) -> FiniteGroup:
    """Closure of permutation generators under composition.

    Generators may be cycle-notation strings or 0-based image tuples; image
    tuples must all have the same length, while cycle strings are padded to
    the common degree.  Element 0 is the identity and the remaining elements
    appear in BFS discovery order.
    """
    if not generators:
        raise ValueError("empty generator list")
    explicit_degree = None
    max_letter = 0
    for g in generators:
        if isinstance(g, str):
            tmp = parse_cycles(g)
            max_letter = max(max_letter, len(tmp))
        else:
            d = len(tuple(g))
            if explicit_degree is None:
                explicit_degree = d
            elif explicit_degree != d:
                raise ValueError("degree mismatch among generators")
    degree = explicit_degree if explicit_degree is not None else max(max_letter, 1)
    if max_letter > degree:
        raise ValueError("degree mismatch among generators")
    gens: list[Perm] = []
    for g in generators:
        if isinstance(g, str):
            gens.append(parse_cycles(g, degree=degree))
        else:
            p = tuple(int(x) for x in g)
            if sorted(p) != list(range(degree)):
                raise ValueError(f"not a permutation: {g!r}")
            gens.append(p)

    ident = identity_perm(degree)
    elems: list[Perm] = [ident]
    index: dict[Perm, int] = {ident: 0}
    head = 0
    while head < len(elems):
        x = elems[head]
        head += 1
        for g in gens:
            y = compose(x, g)
            if y not in index:
                if len(elems) >= cap:
                    raise CapExceeded(
                        f"closure exceeds cap of {cap} elements (degree {degree})"
                    )
                index[y] = len(elems)
                elems.append(y)
    n = len(elems)
    rows = [[index[compose(a, b)] for b in elems] for a in elems]
    return FiniteGroup(
        rows,
        name=name or f"perm{degree}.{n}",
        perms=tuple(elems),
    )


def _cyclic_group(k: int, name: str) -> FiniteGroup:
    rows = [[(i + j) % k for j in range(k)] for i in range(k)]
    return FiniteGroup(rows, name=name, names=tuple(str(i) for i in range(k)))


def _quaternion_group() -> FiniteGroup:
    # elements (sign, axis) with axis in 1,i,j,k; index order 1,-1,i,-i,j,-j,k,-k
    axes = ["1", "i", "j", "k"]
    table = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }
    elems = [(s, a) for a in axes for s in (1, -1)]
    index = {e: i for i, e in enumerate(elems)}
    rows = []
    for s1, a1 in elems:
        row = []
        for s2, a2 in elems:
            s3, a3 = table[(a1, a2)]
            row.append(index[(s1 * s2 * s3, a3)])
        rows.append(row)
    names = tuple(("" if s == 1 else "-") + a for s, a in elems)
    return FiniteGroup(rows, name="Q8", names=names)


def catalog_group(name: str, *, cap: int = DEFAULT_CLOSURE_CAP) -> FiniteGroup:
    """Deterministic construction of a named small group.

    Supported names: C<k>, D<k> (order 2k), S<k>, A<k>, Q8.
    """
    token = name.strip()
    if token.upper() == "Q8":
        return _quaternion_group()
    m = _CATALOG_RE.match(token)
    if not m:
        raise ValueError(f"unknown catalog group {name!r}")
    kind = m.group(1).upper()
    k = int(m.group(2))
    if k < 1:
        raise ValueError(f"catalog parameter must be positive: {name!r}")
    expected = {
        "C": k,
        "D": 2 * k,
        "S": _factorial(k),
        "A": max(1, _factorial(k) // 2),
    }[kind]
    if expected > cap:
        raise CapExceeded(f"{kind}{k} has order {expected}, over the cap of {cap}")
    std = f"{kind}{k}"
    if kind == "C":
        return _cyclic_group(k, std)
    if kind == "D":
        if k == 1:
            gens = ["(1 2)"]
        elif k == 2:
            gens = ["(1 2)", "(3 4)"]
        else:
            rot = "(" + " ".join(str(i) for i in range(1, k + 1)) + ")"
            refl = "".join(f"({i} {k + 2 - i})" for i in range(2, k // 2 + 2) if i != k + 2 - i)
            gens = [rot, refl]
        return group_from_permutations(gens, cap=cap, name=std)
    if kind == "S":
        if k == 1:
            return _cyclic_group(1, std)
        cyc = "(" + " ".join(str(i) for i in range(1, k + 1)) + ")"
        gens = ["(1 2)"] if k == 2 else ["(1 2)", cyc]
        return group_from_permutations(gens, cap=cap, name=std)
    # alternating
    if k <= 2:
        return _cyclic_group(1, std)
    if k == 3:
        gens = ["(1 2 3)"]
    elif k % 2 == 1:
        gens = ["(1 2 3)", "(" + " ".join(str(i) for i in range(1, k + 1)) + ")"]
    else:
        gens = ["(1 2 3)", "(" + " ".join(str(i) for i in range(2, k + 1)) + ")"]
    return group_from_permutations(gens, cap=cap, name=std)


def _factorial(k: int) -> int:
    out = 1
    for i in range(2, k + 1):
        out *= i
    return out
