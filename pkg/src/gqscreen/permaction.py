"""Permutation groups given by generators, and the actions the screening needs.

Permutations are numpy integer arrays ``g`` with ``x^g = g[x]``.  Products act
left to right, so ``mul(g, h)`` means "apply g, then h" and equals ``h[g]``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Hashable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .errors import IntransitiveError, NotSelfPairedError, ResourceLimitError

MAX_GROUP_DEGREE = 10_000
MAX_ACTION_DEGREE = 10_000
MAX_PAIR_ORBIT_DEGREE = 3_000

PROVENANCES = ("computed", "transcribed-from-paper", "transcribed-from-atlas")


# ---------------------------------------------------------------------------
# permutations

def perm(images: Sequence[int]) -> np.ndarray:
    g = np.asarray(images, dtype=np.int64)
    if g.ndim != 1 or not np.array_equal(np.sort(g), np.arange(len(g))):
        raise ValueError("not a permutation")
    return g


def identity(n: int) -> np.ndarray:
    return np.arange(n, dtype=np.int64)


def mul(g: np.ndarray, h: np.ndarray) -> np.ndarray:
    return h[g]


def inverse(g: np.ndarray) -> np.ndarray:
    inv = np.empty_like(g)
    inv[g] = np.arange(len(g), dtype=g.dtype)
    return inv


def is_identity(g: np.ndarray) -> bool:
    return bool((g == np.arange(len(g))).all())


def from_cycles(n: int, *cycles: Sequence[int]) -> np.ndarray:
    g = identity(n)
    for c in cycles:
        for a, b in zip(c, tuple(c[1:]) + (c[0],)):
            g[a] = b
    return perm(g)


def is_even(g: np.ndarray) -> bool:
    seen = np.zeros(len(g), dtype=bool)
    transpositions = 0
    for start in range(len(g)):
        if seen[start]:
            continue
        length = 0
        x = start
        while not seen[x]:
            seen[x] = True
            x = g[x]
            length += 1
        transpositions += length - 1
    return transpositions % 2 == 0


# ---------------------------------------------------------------------------
# groups

@dataclass(frozen=True, eq=False)
class PermGroup:
    degree: int
    generators: tuple[np.ndarray, ...]
    name: str = ""

    def __post_init__(self):
        gens = tuple(perm(g) for g in self.generators)
        for g in gens:
            if len(g) != self.degree:
                raise ValueError(f"generator of degree {len(g)} in a group of degree {self.degree}")
        object.__setattr__(self, "generators", gens)

    @property
    def is_even(self) -> bool:
        """Whether every generator, hence the whole group, lies in the alternating group."""
        return all(is_even(g) for g in self.generators)

    def to_json(self) -> str:
        return json.dumps({"degree": self.degree, "generators": [g.tolist() for g in self.generators]})

    @classmethod
    def from_json(cls, text: str, name: str = "") -> "PermGroup":
        data = json.loads(text)
        return cls(int(data["degree"]), tuple(np.array(g) for g in data["generators"]), name)


def symmetric_group(n: int) -> PermGroup:
    if n < 1:
        raise ValueError("degree must be positive")
    if n == 1:
        return PermGroup(1, (), "S1")
    if n == 2:
        return PermGroup(2, (from_cycles(2, (0, 1)),), "S2")
    return PermGroup(n, (from_cycles(n, (0, 1)), from_cycles(n, tuple(range(n)))), f"S{n}")


def alternating_group(n: int) -> PermGroup:
    if n < 3:
        return PermGroup(max(n, 1), (), f"A{n}")
    three = from_cycles(n, (0, 1, 2))
    if n == 3:
        return PermGroup(3, (three,), "A3")
    # (0 1 2) with an (n or n-1)-cycle of even parity generates A_n
    long = from_cycles(n, tuple(range(n))) if n % 2 else from_cycles(n, tuple(range(1, n)))
    return PermGroup(n, (three, long), f"A{n}")


def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % p for p in range(2, math.isqrt(q) + 1))


def _primitive_root(q: int) -> int:
    factors = [p for p in range(2, q) if (q - 1) % p == 0 and _is_prime(p)]
    for g in range(2, q):
        if all(pow(g, (q - 1) // p, q) != 1 for p in factors):
            return g
    return 1  # q = 2


def projective_line_group(q: int, extended: bool = False) -> PermGroup:
    """PSL(2,q), or PGL(2,q) when ``extended``, on the q+1 points of the projective line.

    Only prime q is supported.  Points ``0..q-1`` are field elements and ``q`` is infinity.
    """
    if not _is_prime(q):
        raise ValueError(f"q={q} must be prime (prime-power fields are not implemented)")
    if q > MAX_GROUP_DEGREE:
        raise ResourceLimitError(f"q={q} exceeds the supported range")
    inf = q
    g = _primitive_root(q)
    mult = g if extended else g * g % q

    def make(f):
        return perm([f(x) for x in range(q + 1)])

    translate = make(lambda x: inf if x == inf else (x + 1) % q)
    scale = make(lambda x: inf if x == inf else x * mult % q)
    invert = make(lambda x: 0 if x == inf else (inf if x == 0 else (-pow(x, -1, q)) % q))
    gens = [translate, invert] + ([] if is_identity(scale) else [scale])
    label = f"{'PGL' if extended else 'PSL'}(2,{q})"
    return PermGroup(q + 1, tuple(gens), label)


def parse_group(spec: str) -> PermGroup:
    """Parse ``An``, ``Sn``, ``PSL2:q`` or ``PGL2:q``."""
    spec = spec.strip()
    try:
        if spec.upper().startswith("PSL2:"):
            return projective_line_group(int(spec[5:]))
        if spec.upper().startswith("PGL2:"):
            return projective_line_group(int(spec[5:]), extended=True)
        if spec[:1] in "AS" and spec[1:].isdigit():
            n = int(spec[1:])
            if n > MAX_GROUP_DEGREE:
                raise ResourceLimitError(f"degree {n} exceeds {MAX_GROUP_DEGREE}")
            return alternating_group(n) if spec[0] == "A" else symmetric_group(n)
    except ValueError as exc:
        raise ValueError(f"bad group spec {spec!r}: {exc}") from None
    raise ValueError(f"bad group spec {spec!r}; expected An, Sn, PSL2:q or PGL2:q")


# ---------------------------------------------------------------------------
# Schreier-Sims

class StabiliserChain:
    """Deterministic Schreier-Sims: base, strong generators and transversals."""

    def __init__(self, group: PermGroup):
        if group.degree > MAX_GROUP_DEGREE:
            raise ResourceLimitError(f"degree {group.degree} exceeds {MAX_GROUP_DEGREE}")
        self.n = group.degree
        self.base: list[int] = []
        self.strong: list[list[np.ndarray]] = []
        self.trans: list[dict[int, tuple[np.ndarray, np.ndarray]]] = []
        gens = [g for g in group.generators if not is_identity(g)]
        for g in gens:
            if all(g[b] == b for b in self.base):
                self._new_level(int(np.flatnonzero(g != np.arange(self.n))[0]))
        for i in range(len(self.base)):
            self.strong[i] = [g for g in gens if all(g[b] == b for b in self.base[:i])]
            self._orbit(i)
        self._complete()

    def _new_level(self, point):
        self.base.append(point)
        self.strong.append([])
        self.trans.append({})

    def _orbit(self, i):
        b = self.base[i]
        e = identity(self.n)
        trans = {b: (e, e)}
        todo = [b]
        while todo:
            x = todo.pop()
            u = trans[x][0]
            for s in self.strong[i]:
                y = int(s[x])
                if y not in trans:
                    w = mul(u, s)
                    trans[y] = (w, inverse(w))
                    todo.append(y)
        self.trans[i] = trans

    def strip(self, g, start=0):
        for level in range(start, len(self.base)):
            x = int(g[self.base[level]])
            if x not in self.trans[level]:
                return g, level
            g = mul(g, self.trans[level][x][1])
        return g, len(self.base)

    def _complete(self):
        i = len(self.base) - 1
        while i >= 0:
            restart = False
            for x, (u, _) in list(self.trans[i].items()):
                for s in self.strong[i]:
                    y = int(s[x])
                    h = mul(mul(u, s), self.trans[i][y][1])
                    residue, j = self.strip(h, i + 1)
                    if j == len(self.base) and is_identity(residue):
                        continue
                    if j == len(self.base):
                        self._new_level(int(np.flatnonzero(residue != np.arange(self.n))[0]))
                    for level in range(i + 1, j + 1):
                        self.strong[level].append(residue)
                        self._orbit(level)
                    i = j
                    restart = True
                    break
                if restart:
                    break
            if not restart:
                i -= 1

    def order(self) -> int:
        return math.prod(len(t) for t in self.trans)

    def contains(self, g) -> bool:
        residue, j = self.strip(perm(g))
        return j == len(self.base) and is_identity(residue)


def group_order(group: PermGroup) -> int:
    return StabiliserChain(group).order()


# ---------------------------------------------------------------------------
# actions

@dataclass(frozen=True)
class Natural:
    n: int


@dataclass(frozen=True)
class KSubsets:
    n: int
    k: int


@dataclass(frozen=True)
class UniformPartitions:
    n: int
    a: int  # part size
    b: int  # number of parts

    def __post_init__(self):
        if self.a * self.b != self.n or self.a < 1 or self.b < 1:
            raise ValueError(f"{self.n} is not {self.a} x {self.b}")


@dataclass(frozen=True)
class ProjectiveLine:
    q: int


@dataclass(frozen=True)
class ExplicitPoints:
    """Points are nested tuples/frozensets over ``0..n-1``; the action is closed under the group."""

    seeds: tuple


ActionSpec = Natural | KSubsets | UniformPartitions | ProjectiveLine | ExplicitPoints


def expected_degree(spec: ActionSpec) -> int | None:
    if isinstance(spec, Natural):
        return spec.n
    if isinstance(spec, KSubsets):
        return math.comb(spec.n, spec.k)
    if isinstance(spec, UniformPartitions):
        return math.factorial(spec.n) // (math.factorial(spec.a) ** spec.b * math.factorial(spec.b))
    if isinstance(spec, ProjectiveLine):
        return spec.q + 1
    return None


def parse_action(text: str) -> ActionSpec:
    """Parse ``natural``, ``subsets:k``, ``partitions:axb`` or ``projline`` (degree filled in by :func:`act`)."""
    text = text.strip().lower()
    if text == "natural":
        return Natural(-1)
    if text == "projline":
        return ProjectiveLine(-1)
    if text.startswith("subsets:"):
        return KSubsets(-1, int(text[8:]))
    if text.startswith("partitions:"):
        a, _, b = text[11:].partition("x")
        return _PartitionShape(int(a), int(b))
    raise ValueError(f"bad action spec {text!r}")


@dataclass(frozen=True)
class _PartitionShape:
    a: int
    b: int


def _bind(spec, n: int):
    if isinstance(spec, Natural) and spec.n < 0:
        return Natural(n)
    if isinstance(spec, ProjectiveLine) and spec.q < 0:
        return ProjectiveLine(n - 1)
    if isinstance(spec, KSubsets) and spec.n < 0:
        return KSubsets(n, spec.k)
    if isinstance(spec, _PartitionShape):
        return UniformPartitions(n, spec.a, spec.b)
    return spec


def colex_subsets(n: int, k: int) -> list[tuple[int, ...]]:
    return sorted(combinations(range(n), k), key=lambda c: c[::-1])


def uniform_partitions(n: int, a: int) -> list[tuple[tuple[int, ...], ...]]:
    """Partitions of range(n) into parts of size a, as sorted tuples of sorted parts, in lex order."""
    out = []

    def rec(remaining, parts):
        if not remaining:
            out.append(tuple(parts))
            return
        first, rest = remaining[0], remaining[1:]
        for others in combinations(rest, a - 1):
            part = (first,) + others
            left = tuple(x for x in rest if x not in others)
            parts.append(part)
            rec(left, parts)
            parts.pop()

    rec(tuple(range(n)), [])
    return out


def _apply(g, obj):
    if isinstance(obj, (int, np.integer)):
        return int(g[obj])
    if isinstance(obj, frozenset):
        return frozenset(_apply(g, x) for x in obj)
    if isinstance(obj, tuple):
        return tuple(_apply(g, x) for x in obj)
    raise TypeError(f"cannot act on {type(obj).__name__}")


@dataclass(eq=False)
class Action:
    """A group acting on an explicitly indexed point set."""

    group: PermGroup
    spec: Any
    points: list[Hashable]
    generators: tuple[np.ndarray, ...]
    _transversal: np.ndarray | None = field(default=None, repr=False)

    @property
    def degree(self) -> int:
        return len(self.points)

    @property
    def induced(self) -> PermGroup:
        return PermGroup(self.degree, self.generators, f"{self.group.name} on {self.degree} points")


def act(spec, group: PermGroup) -> Action:
    spec = _bind(spec, group.degree)
    n = group.degree
    if isinstance(spec, Natural):
        if spec.n != n:
            raise ValueError(f"natural action of degree {spec.n} for a group of degree {n}")
        return Action(group, spec, list(range(n)), group.generators)
    if isinstance(spec, ProjectiveLine):
        if spec.q + 1 != n:
            raise ValueError(f"projective line over {spec.q} has {spec.q + 1} points, group degree is {n}")
        return Action(group, spec, list(range(n)), group.generators)
    if isinstance(spec, (KSubsets, UniformPartitions)):
        if spec.n != n:
            raise ValueError(f"action on {spec.n} letters for a group of degree {n}")
        degree = expected_degree(spec)
        if degree > MAX_ACTION_DEGREE * 100:
            raise ResourceLimitError(f"action degree {degree} is too large")
        if isinstance(spec, KSubsets):
            pts = colex_subsets(n, spec.k)
            canon = lambda p: tuple(sorted(p))
        else:
            pts = uniform_partitions(n, spec.a)
            canon = lambda p: tuple(sorted(tuple(sorted(part)) for part in p))
        index = {p: i for i, p in enumerate(pts)}
        gens = tuple(
            np.fromiter((index[canon(_apply(g, p))] for p in pts), dtype=np.int64, count=len(pts))
            for g in group.generators
        )
        return Action(group, spec, pts, gens)
    if isinstance(spec, ExplicitPoints):
        pts = list(spec.seeds)
        index = {p: i for i, p in enumerate(pts)}
        images: list[list[int]] = [[] for _ in group.generators]
        i = 0
        while i < len(pts):
            for j, g in enumerate(group.generators):
                q = _apply(g, pts[i])
                if q not in index:
                    if len(pts) >= MAX_ACTION_DEGREE * 100:
                        raise ResourceLimitError("explicit orbit too large")
                    index[q] = len(pts)
                    pts.append(q)
                images[j].append(index[q])
            i += 1
        return Action(group, spec, pts, tuple(np.array(im, dtype=np.int64) for im in images))
    raise TypeError(f"unknown action spec {spec!r}")


# ---------------------------------------------------------------------------
# orbits, stabilisers, subdegrees

def orbits(degree: int, gens: Sequence[np.ndarray]) -> np.ndarray:
    """Orbit label per point (labels are the smallest point of each orbit)."""
    labels = np.arange(degree)
    return _merge(labels, gens)


def _merge(labels: np.ndarray, gens, chunk: int = 64) -> np.ndarray:
    n = len(labels)
    gens = list(gens)
    for start in range(0, len(gens), chunk):
        block = gens[start : start + chunk]
        # skip generators that already preserve every current orbit
        block = [g for g in block if not np.array_equal(labels[g], labels)]
        if not block:
            continue
        rows = np.concatenate([labels] * len(block))
        cols = np.concatenate([labels[g] for g in block])
        graph = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(n, n))
        _, comp = connected_components(graph, directed=False)
        # relabel each component by its smallest point
        first = np.full(comp.max() + 1, n)
        np.minimum.at(first, comp, np.arange(n))
        labels = first[comp[labels]]
    return labels


def orbit_sizes(labels: np.ndarray) -> list[int]:
    return sorted(np.unique(labels, return_counts=True)[1].tolist())


def _transversal(action: Action, root: int = 0) -> np.ndarray:
    """Row x is an element of the action mapping ``root`` to x (BFS Schreier tree)."""
    n = action.degree
    if n > MAX_ACTION_DEGREE:
        raise ResourceLimitError(f"action degree {n} exceeds {MAX_ACTION_DEGREE}")
    dtype = np.int16 if n < 2 ** 15 else np.int32
    trans = np.full((n, n), -1, dtype=dtype)
    trans[root] = np.arange(n)
    frontier = [root]
    while frontier:
        nxt = []
        for x in frontier:
            for s in action.generators:
                y = int(s[x])
                if trans[y, 0] < 0:
                    trans[y] = s[trans[x]]
                    nxt.append(y)
        frontier = nxt
    if (trans[:, 0] < 0).any():
        raise IntransitiveError(f"action is not transitive (orbit of {root} has {(trans[:, 0] >= 0).sum()} points)")
    return trans


def schreier_generators(action: Action, root: int = 0) -> np.ndarray:
    """Deduplicated non-identity Schreier generators of the stabiliser of ``root``, one per row."""
    trans = _transversal(action, root)
    n = action.degree
    inv = np.empty_like(trans)
    rows = np.arange(n)[:, None]
    inv[rows, trans] = np.arange(n, dtype=trans.dtype)[None, :]
    found = []
    for s in action.generators:
        # u_x * s * u_{x^s}^{-1}, computed for all x at once in row blocks
        for lo in range(0, n, 512):
            xs = np.arange(lo, min(n, lo + 512))
            h = np.take_along_axis(inv[s[xs]], s[trans[xs]].astype(np.int64), axis=1)
            found.append(h)
    allgens = np.unique(np.concatenate(found), axis=0)
    keep = ~(allgens == np.arange(n)).all(axis=1)
    return allgens[keep].astype(np.int64)


@dataclass(frozen=True)
class OrbitalProfile:
    degree: int
    subdegrees: tuple[int, ...]
    provenance: str
    source: str = ""

    def __post_init__(self):
        if self.provenance not in PROVENANCES:
            raise ValueError(f"unknown provenance {self.provenance!r}")
        object.__setattr__(self, "subdegrees", tuple(sorted(int(x) for x in self.subdegrees)))

    @property
    def is_computed(self) -> bool:
        return self.provenance == "computed"

    @property
    def balanced(self) -> bool:
        return 1 + sum(self.subdegrees) == self.degree

    def to_json(self) -> str:
        return json.dumps(
            {"degree": self.degree, "subdegrees": list(self.subdegrees), "provenance": self.provenance, "source": self.source},
            sort_keys=True,
        )

    @classmethod
    def from_json(cls, text: str) -> "OrbitalProfile":
        d = json.loads(text)
        return cls(int(d["degree"]), tuple(int(x) for x in d["subdegrees"]), d["provenance"], d.get("source", ""))


@dataclass(frozen=True, eq=False)
class Suborbits:
    """Orbits of a point stabiliser, with the labels needed to build orbital graphs."""

    root: int
    labels: np.ndarray

    def members(self) -> dict[int, np.ndarray]:
        out = {}
        for lab in np.unique(self.labels):
            out[int(lab)] = np.flatnonzero(self.labels == lab)
        return out

    def nontrivial(self) -> list[np.ndarray]:
        return [m for lab, m in sorted(self.members().items()) if not (len(m) == 1 and m[0] == self.root)]


def suborbits(action: Action, root: int = 0) -> Suborbits:
    gens = schreier_generators(action, root)
    return Suborbits(root, orbits(action.degree, list(gens)))


def subdegrees(action: Action, root: int = 0) -> OrbitalProfile:
    sub = suborbits(action, root)
    sizes = [len(m) for m in sub.nontrivial()]
    prof = OrbitalProfile(action.degree, tuple(sizes), "computed", _describe(action))
    assert prof.balanced
    return prof


def subdegrees_by_pairs(action: Action, root: int = 0) -> OrbitalProfile:
    """Same multiset via the orbits of the group on ordered pairs (no stabiliser needed)."""
    n = action.degree
    if n > MAX_PAIR_ORBIT_DEGREE:
        raise ResourceLimitError(f"pair-orbit route is limited to {MAX_PAIR_ORBIT_DEGREE} points")
    if orbit_sizes(orbits(n, action.generators)) != [n]:
        raise IntransitiveError("action is not transitive")
    idx = np.arange(n * n, dtype=np.int64).reshape(n, n)
    rows, cols = [], []
    for g in action.generators:
        rows.append(idx.ravel())
        cols.append(idx[np.ix_(g, g)].ravel())
    graph = coo_matrix(
        (np.ones(sum(map(len, rows)), dtype=np.int8), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n * n, n * n),
    )
    _, comp = connected_components(graph, directed=False)
    row = comp[idx[root]]
    sizes = np.unique(row[np.arange(n) != root], return_counts=True)[1]
    return OrbitalProfile(n, tuple(sizes.tolist()), "computed", _describe(action))


def _describe(action: Action) -> str:
    return f"{action.group.name} {action.spec}"


def orbital_graph(action: Action, representative: int, root: int = 0) -> np.ndarray:
    """Adjacency matrix of the orbital containing (root, representative); must be self-paired."""
    sub = suborbits(action, root)
    lab = sub.labels[representative]
    if representative == root:
        raise ValueError("the trivial orbital gives no graph")
    nbrs = np.flatnonzero(sub.labels == lab)
    trans = _transversal(action, root)
    n = action.degree
    adj = np.zeros((n, n), dtype=bool)
    for x in range(n):
        adj[x, trans[x][nbrs]] = True
    if not (adj == adj.T).all():
        raise NotSelfPairedError(f"orbital of ({root},{representative}) is not self-paired")
    return adj


def union_orbital_graph(action: Action, suborbit_reps: Sequence[int], root: int = 0) -> np.ndarray:
    adj = np.zeros((action.degree, action.degree), dtype=bool)
    for r in suborbit_reps:
        adj |= orbital_graph(action, r, root)
    return adj


def stabiliser_generators(degree: int, gens: Sequence[np.ndarray], point: int) -> list[np.ndarray]:
    """Deduplicated Schreier generators of the stabiliser of ``point`` in <gens>."""
    e = identity(degree)
    reps = {point: e}
    todo = [point]
    while todo:
        x = todo.pop()
        for s in gens:
            y = int(s[x])
            if y not in reps:
                reps[y] = mul(reps[x], s)
                todo.append(y)
    inv = {x: inverse(u) for x, u in reps.items()}
    seen = set()
    out = []
    for x, u in reps.items():
        for s in gens:
            h = mul(mul(u, s), inv[int(s[x])])
            key = h.tobytes()
            if key in seen or is_identity(h):
                continue
            seen.add(key)
            out.append(h)
    return out


def two_point_stabiliser_orbits(action: Action, p1: int, p2: int) -> list[int]:
    """Orbit lengths of the stabiliser of p1 and p2 on the remaining points."""
    if p1 == p2:
        raise ValueError("the two points must differ")
    n = action.degree
    if orbit_sizes(orbits(n, action.generators)) != [n]:
        raise IntransitiveError("action is not transitive")
    h1 = stabiliser_generators(n, action.generators, p1)
    h12 = stabiliser_generators(n, h1, p2)
    labels = orbits(n, h12)
    rest = np.array([x for x in range(n) if x not in (p1, p2)])
    return sorted(np.unique(labels[rest], return_counts=True)[1].tolist())
