"""Explicit finite point-line geometries.

Points are ``0..n-1``; a line is the sorted tuple of its points and incidence
is membership.  The module checks the generalised-quadrangle axioms (in two
independent ways), builds the 15-point quadrangle of order (2,2), classifies
the fixed substructure of an automorphism, and runs a small backtracking
automorphism search that is fine for a few hundred points.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterator

import numpy as np

from .errors import GqscreenError, ResourceLimitError
from .gq import GqOrder, SubGqOrder, subgq_admissible

MAX_SEARCH_POINTS = 200


@dataclass(frozen=True)
class IncidenceStructure:
    n_points: int
    lines: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        lines = tuple(tuple(sorted(L)) for L in self.lines)
        object.__setattr__(self, "lines", lines)
        seen = set()
        for L in lines:
            if len(L) < 2:
                raise ValueError(f"line {L} has fewer than two points")
            if len(set(L)) != len(L):
                raise ValueError(f"line {L} repeats a point")
            if L[0] < 0 or L[-1] >= self.n_points:
                raise ValueError(f"line {L} has a point index out of range")
            if L in seen:
                raise ValueError(f"line {L} is repeated")
            seen.add(L)

    @property
    def n_lines(self) -> int:
        return len(self.lines)

    def point_lines(self) -> list[list[int]]:
        out = [[] for _ in range(self.n_points)]
        for i, L in enumerate(self.lines):
            for p in L:
                out[p].append(i)
        return out

    def line_index(self) -> dict[tuple[int, ...], int]:
        return {L: i for i, L in enumerate(self.lines)}

    def to_json(self) -> str:
        return json.dumps({"points": self.n_points, "lines": [list(L) for L in self.lines]})

    @classmethod
    def from_json(cls, text: str) -> "IncidenceStructure":
        data = json.loads(text)
        return cls(int(data["points"]), tuple(tuple(int(p) for p in L) for L in data["lines"]))


def build_w2() -> IncidenceStructure:
    """GQ(2,2): points are the 15 pairs from a 6-set, lines the 15 perfect matchings."""
    duads = sorted(combinations(range(6), 2), key=lambda d: (d[1], d[0]))  # colex
    index = {d: i for i, d in enumerate(duads)}
    lines = []
    for m in _perfect_matchings(tuple(range(6))):
        lines.append(tuple(sorted(index[d] for d in m)))
    return IncidenceStructure(15, tuple(sorted(lines)))


def _perfect_matchings(elems):
    if not elems:
        yield ()
        return
    first, rest = elems[0], elems[1:]
    for i, other in enumerate(rest):
        remaining = rest[:i] + rest[i + 1 :]
        for m in _perfect_matchings(remaining):
            yield ((first, other),) + m


def grid(rows: int, cols: int) -> IncidenceStructure:
    """The rows x cols grid: points (i,j), one line per row and per column."""
    pt = lambda i, j: i * cols + j
    lines = [tuple(pt(i, j) for j in range(cols)) for i in range(rows)]
    lines += [tuple(pt(i, j) for i in range(rows)) for j in range(cols)]
    return IncidenceStructure(rows * cols, tuple(lines))


def single_line(k: int) -> IncidenceStructure:
    return IncidenceStructure(k, (tuple(range(k)),))


def dual(structure: IncidenceStructure) -> IncidenceStructure:
    """Swap the roles of points and lines; point ``i`` of the dual is line ``i``."""
    pl = structure.point_lines()
    for p, ls in enumerate(pl):
        if len(ls) < 2:
            raise ValueError(f"point {p} lies on fewer than two lines; its dual line would be degenerate")
    return IncidenceStructure(structure.n_lines, tuple(tuple(ls) for ls in pl))


# ---------------------------------------------------------------------------
# axiom checking

@dataclass(frozen=True)
class GqCheck:
    is_gq: bool
    order: GqOrder | None
    reason: str | None
    witness: tuple = ()
    axiom_form: bool = False
    graph_form: bool = False

    @property
    def ok(self) -> bool:
        return self.order is not None and self.order.is_thick and self.reason is None


class GqValidationError(GqscreenError, ValueError):
    def __init__(self, check: GqCheck):
        super().__init__(f"not a thick GQ: {check.reason} (witness {check.witness})")
        self.check = check


def _axiom_form(structure: IncidenceStructure) -> tuple[bool, str | None, tuple]:
    """Two points on at most one line, unique collinear point per anti-flag, point degree >= 2."""
    n = structure.n_points
    pl = structure.point_lines()
    for p in range(n):
        if len(pl[p]) < 2:
            return False, "point-degree-lt-2", (p, len(pl[p]))
    pair_line: dict[tuple[int, int], int] = {}
    for i, L in enumerate(structure.lines):
        for p, q in combinations(L, 2):
            if (p, q) in pair_line:
                return False, "two-lines-share-points", (p, q, pair_line[(p, q)], i)
            pair_line[(p, q)] = i
    collinear = [set() for _ in range(n)]
    for L in structure.lines:
        for p in L:
            collinear[p].update(L)
    for p in range(n):
        collinear[p].discard(p)
    for i, L in enumerate(structure.lines):
        members = set(L)
        for p in range(n):
            if p in members:
                continue
            hits = [q for q in L if q in collinear[p]]
            if len(hits) == 0:
                return False, "no-collinear-point", (p, i)
            if len(hits) > 1:
                return False, "triangle", (p, i, hits[0], hits[1])
    return True, None, ()


def incidence_graph(structure: IncidenceStructure) -> list[list[int]]:
    """Bipartite incidence graph as adjacency lists; line ``i`` is vertex ``n_points + i``."""
    n = structure.n_points
    adj = [[] for _ in range(n + structure.n_lines)]
    for i, L in enumerate(structure.lines):
        for p in L:
            adj[p].append(n + i)
            adj[n + i].append(p)
    return adj


def _bfs(adj, root):
    dist = [-1] * len(adj)
    parent = [-1] * len(adj)
    dist[root] = 0
    dq = deque([root])
    girth = None
    while dq:
        u = dq.popleft()
        for w in adj[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                parent[w] = u
                dq.append(w)
            elif w != parent[u]:
                c = dist[u] + dist[w] + 1
                if girth is None or c < girth:
                    girth = c
    return dist, girth


def graph_diameter_girth(adj) -> tuple[float, float]:
    diam = 0
    girth = float("inf")
    for v in range(len(adj)):
        dist, g = _bfs(adj, v)
        if min(dist) < 0:
            diam = float("inf")
        else:
            diam = max(diam, max(dist))
        if g is not None:
            girth = min(girth, g)
    return diam, girth


def _graph_form(structure: IncidenceStructure) -> tuple[bool, tuple]:
    diam, girth = graph_diameter_girth(incidence_graph(structure))
    return diam == 4 and girth == 8, (diam, girth)


def check_gq(structure: IncidenceStructure) -> GqCheck:
    """Run both formulations of the GQ axioms and derive the order when there is one."""
    ax_ok, reason, witness = _axiom_form(structure)
    gr_ok, dg = _graph_form(structure)
    if ax_ok != gr_ok:
        raise AssertionError(
            f"axiom form ({ax_ok}, {reason}) and incidence-graph form "
            f"(diameter, girth = {dg}) disagree"
        )
    if not ax_ok:
        return GqCheck(False, None, reason, witness, ax_ok, gr_ok)
    sizes = {len(L) for L in structure.lines}
    degrees = {len(ls) for ls in structure.point_lines()}
    if len(sizes) != 1 or len(degrees) != 1:
        return GqCheck(True, None, "no-order", (tuple(sorted(sizes)), tuple(sorted(degrees))), True, True)
    order = GqOrder(sizes.pop() - 1, degrees.pop() - 1)
    if not order.is_thick:
        return GqCheck(True, order, "not-thick", (order.s, order.t), True, True)
    return GqCheck(True, order, None, (), True, True)


def validate_gq(structure: IncidenceStructure) -> GqOrder:
    check = check_gq(structure)
    if not check.ok:
        raise GqValidationError(check)
    return check.order


def collinearity_graph(structure: IncidenceStructure) -> np.ndarray:
    n = structure.n_points
    adj = np.zeros((n, n), dtype=bool)
    for L in structure.lines:
        idx = np.array(L)
        adj[np.ix_(idx, idx)] = True
    np.fill_diagonal(adj, False)
    return adj


# ---------------------------------------------------------------------------
# automorphisms

@dataclass(frozen=True)
class GeometryAutomorphism:
    point_map: tuple[int, ...]
    line_map: tuple[int, ...]

    def is_identity(self) -> bool:
        return all(i == p for i, p in enumerate(self.point_map))


def induced_automorphism(structure: IncidenceStructure, point_map) -> GeometryAutomorphism:
    """Wrap a point permutation, computing the line permutation it induces."""
    point_map = tuple(int(x) for x in point_map)
    if sorted(point_map) != list(range(structure.n_points)):
        raise ValueError("point map is not a permutation")
    index = structure.line_index()
    line_map = []
    for L in structure.lines:
        image = tuple(sorted(point_map[p] for p in L))
        if image not in index:
            raise ValueError(f"point map sends line {L} to non-line {image}")
        line_map.append(index[image])
    return GeometryAutomorphism(point_map, tuple(line_map))


class _Matcher:
    """Backtracking search for incidence-preserving bijections src -> dst."""

    def __init__(self, src: IncidenceStructure, dst: IncidenceStructure):
        if src.n_points > MAX_SEARCH_POINTS or dst.n_points > MAX_SEARCH_POINTS:
            raise ResourceLimitError(
                f"automorphism search is limited to {MAX_SEARCH_POINTS} points"
            )
        self.src, self.dst = src, dst
        self.n = src.n_points
        self.compatible = (
            src.n_points == dst.n_points
            and src.n_lines == dst.n_lines
            and sorted(map(len, src.lines)) == sorted(map(len, dst.lines))
        )
        self.src_pair = self._pair_lines(src)
        self.dst_pair = self._pair_lines(dst)
        self.linear = self.src_pair is not None and self.dst_pair is not None
        self.src_deg = [len(x) for x in src.point_lines()]
        self.dst_deg = [len(x) for x in dst.point_lines()]
        self.dst_index = dst.line_index()
        self.order = self._branch_order()

    @staticmethod
    def _pair_lines(s: IncidenceStructure):
        m = np.full((s.n_points, s.n_points), -1, dtype=np.int64)
        for i, L in enumerate(s.lines):
            for p, q in combinations(L, 2):
                if m[p, q] >= 0:
                    return None  # not a partial linear space
                m[p, q] = m[q, p] = i
        return m

    def _branch_order(self) -> list[int]:
        # highest degree first, then grow through collinearity so that each new
        # point is pinned down by lines through already-mapped points
        pl = self.src.point_lines()
        remaining = set(range(self.n))
        order = []
        while remaining:
            start = max(remaining, key=lambda p: (self.src_deg[p], -p))
            dq = deque([start])
            remaining.discard(start)
            while dq:
                p = dq.popleft()
                order.append(p)
                nbrs = sorted({q for i in pl[p] for q in self.src.lines[i]} & remaining)
                for q in nbrs:
                    remaining.discard(q)
                    dq.append(q)
        return order

    def search(self, fixed: dict[int, int] | None = None) -> Iterator[tuple[int, ...]]:
        """Yield every full bijection extending ``fixed``."""
        if not self.compatible:
            return
        fmap = [-1] * self.n
        used = [False] * self.n
        line_map: dict[int, int] = {}
        prefix = []
        for p, q in (fixed or {}).items():
            prefix.append((p, q))
        order = [p for p, _ in prefix] + [p for p in self.order if p not in dict(prefix)]
        targets = dict(prefix)
        yield from self._extend(0, order, targets, fmap, used, line_map)

    def _assign(self, p, q, fmap, used, line_map):
        """Try p -> q; return the list of line keys added, or None on conflict."""
        if used[q] or self.src_deg[p] != self.dst_deg[q]:
            return None
        added = []
        if self.linear:
            for r in range(self.n):
                rq = fmap[r]
                if rq < 0:
                    continue
                L = self.src_pair[p, r]
                M = self.dst_pair[q, rq]
                if (L < 0) != (M < 0):
                    break
                if L < 0:
                    continue
                L, M = int(L), int(M)
                have = line_map.get(L)
                if have is None:
                    if len(self.src.lines[L]) != len(self.dst.lines[M]):
                        break
                    line_map[L] = M
                    added.append(L)
                elif have != M:
                    break
            else:
                fmap[p] = q
                used[q] = True
                return added
            for L in added:
                del line_map[L]
            return None
        fmap[p] = q
        used[q] = True
        return added

    def _extend(self, depth, order, targets, fmap, used, line_map):
        if depth == self.n:
            if self.linear or self._full_check(fmap):
                yield tuple(fmap)
            return
        p = order[depth]
        candidates = [targets[p]] if p in targets else range(self.n)
        for q in candidates:
            added = self._assign(p, q, fmap, used, line_map)
            if added is None:
                continue
            yield from self._extend(depth + 1, order, targets, fmap, used, line_map)
            fmap[p] = -1
            used[q] = False
            for L in added:
                del line_map[L]

    def _full_check(self, fmap) -> bool:
        return all(tuple(sorted(fmap[p] for p in L)) in self.dst_index for L in self.src.lines)


def iter_automorphisms(structure: IncidenceStructure) -> Iterator[GeometryAutomorphism]:
    """Every automorphism, identity included, in search order."""
    for pm in _Matcher(structure, structure).search():
        yield induced_automorphism(structure, pm)


def find_isomorphism(a: IncidenceStructure, b: IncidenceStructure) -> tuple[int, ...] | None:
    """A point bijection from ``a`` to ``b`` mapping lines onto lines, if one exists."""
    return next(_Matcher(a, b).search(), None)


def automorphism_group_order(structure: IncidenceStructure) -> tuple[int, list[GeometryAutomorphism]]:
    """Exact order of the automorphism group, with a strong generating set.

    Walks a chain of point stabilisers: at each level the orbit of the next
    base point is found by searching for one automorphism per candidate image,
    skipping candidates already reached through known generators.
    """
    m = _Matcher(structure, structure)
    n = structure.n_points
    base: dict[int, int] = {}
    gens: list[tuple[int, ...]] = []
    order = 1
    for b in m.order:
        # generators found so far that fix the current base pointwise
        stab = [g for g in gens if all(g[x] == x for x in base)]
        orbit = _orbit(b, stab)
        for c in range(n):
            if c in orbit or m.src_deg[c] != m.src_deg[b]:
                continue
            found = next(m.search({**base, b: c}), None)
            if found is None:
                continue
            gens.append(found)
            stab.append(found)
            orbit = _orbit(b, stab)
        order *= len(orbit)
        base[b] = b
    return order, [induced_automorphism(structure, g) for g in gens]


def _orbit(x, perms) -> set[int]:
    seen = {x}
    todo = [x]
    while todo:
        y = todo.pop()
        for g in perms:
            z = g[y]
            if z not in seen:
                seen.add(z)
                todo.append(z)
    return seen


# ---------------------------------------------------------------------------
# fixed substructures

FIXED_TAGS = ("NoLines", "NoPoints", "AllLinesThroughPoint", "AllPointsOnLine", "Grid", "DualGrid", "Subquadrangle")


@dataclass(frozen=True)
class FixedSubstructureClass:
    tag: str
    sub_order: GqOrder | None = None
    proper: bool = True
    fixed_points: tuple[int, ...] = field(default=(), compare=False)
    fixed_lines: tuple[int, ...] = field(default=(), compare=False)


class UnclassifiedSubstructure(GqscreenError):
    """The fixed elements of an automorphism fit none of the seven possible shapes."""


def fixed_elements(structure: IncidenceStructure, aut: GeometryAutomorphism):
    pts = tuple(p for p, q in enumerate(aut.point_map) if p == q)
    lns = tuple(i for i, j in enumerate(aut.line_map) if i == j)
    return pts, lns


def classify_fixed(structure: IncidenceStructure, aut: GeometryAutomorphism) -> FixedSubstructureClass:
    ambient = validate_gq(structure)
    pts, lns = fixed_elements(structure, aut)
    kw = dict(fixed_points=pts, fixed_lines=lns)
    if not lns:
        return FixedSubstructureClass("NoLines", **kw)
    if not pts:
        return FixedSubstructureClass("NoPoints", **kw)
    fixed_pts = set(pts)
    sub_lines = {i: tuple(p for p in structure.lines[i] if p in fixed_pts) for i in lns}
    degree = {p: sum(1 for i in lns if p in sub_lines[i]) for p in pts}

    if all(len(L) >= 2 for L in sub_lines.values()) and all(d >= 2 for d in degree.values()):
        relabel = {p: k for k, p in enumerate(pts)}
        sub = IncidenceStructure(len(pts), tuple(tuple(relabel[p] for p in sub_lines[i]) for i in lns))
        chk = check_gq(sub)
        if chk.is_gq:
            if all(d == 2 for d in degree.values()):
                return FixedSubstructureClass("Grid", **kw)
            if all(len(L) == 2 for L in sub_lines.values()):
                return FixedSubstructureClass("DualGrid", **kw)
            if chk.order is None or not chk.order.is_thick:
                raise UnclassifiedSubstructure(f"fixed substructure is a GQ without thick order: {chk}")
            proper = len(pts) < structure.n_points or len(lns) < structure.n_lines
            if proper and not subgq_admissible(ambient, SubGqOrder(chk.order.s, chk.order.t)):
                raise UnclassifiedSubstructure(f"subquadrangle {chk.order} is inadmissible in {ambient}")
            return FixedSubstructureClass("Subquadrangle", chk.order, proper, **kw)

    for i in lns:
        on_line = set(sub_lines[i])
        if fixed_pts <= on_line and all(on_line & set(sub_lines[j]) for j in lns):
            return FixedSubstructureClass("AllPointsOnLine", **kw)
    for p in pts:
        through = [i for i in lns if p in sub_lines[i]]
        if len(through) == len(lns):
            reach = {p}.union(*(sub_lines[i] for i in through))
            if fixed_pts <= reach:
                return FixedSubstructureClass("AllLinesThroughPoint", **kw)
    raise UnclassifiedSubstructure(f"fixed points {pts} and lines {lns} match no admissible shape")


def benson_counts(structure: IncidenceStructure, aut: GeometryAutomorphism) -> tuple[int, int]:
    """(f, g): fixed points, and non-fixed points collinear with their image."""
    coll = collinearity_graph(structure)
    f = g = 0
    for p, q in enumerate(aut.point_map):
        if p == q:
            f += 1
        elif coll[p, q]:
            g += 1
    return f, g
