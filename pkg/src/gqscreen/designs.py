"""Small Steiner systems whose automorphism groups are the stabilisers in the
small-degree screening table.

A design is a frozenset of frozenset blocks on ``0..n-1``.  Its orbit under
A_n or S_n is the coset space of its automorphism group, which gives an
independently computed subdegree profile for rows that would otherwise rely
only on transcribed data.
"""

from __future__ import annotations

from itertools import combinations

from .permaction import ExplicitPoints, PermGroup, act, alternating_group, subdegrees, symmetric_group

Design = frozenset


def is_steiner(design: Design, n: int, t: int, k: int) -> bool:
    if any(len(B) != k for B in design):
        return False
    counts = {}
    for B in design:
        for T in combinations(sorted(B), t):
            counts[T] = counts.get(T, 0) + 1
    return len(counts) == sum(1 for _ in combinations(range(n), t)) and set(counts.values()) == {1}


def fano_plane() -> Design:
    return frozenset(frozenset(((i) % 7, (i + 1) % 7, (i + 3) % 7)) for i in range(7))


def affine_space_planes() -> Design:
    """S(3,4,8): the affine planes of AG(3,2), points are 3-bit vectors."""
    blocks = set()
    for quad in combinations(range(8), 4):
        if quad[0] ^ quad[1] ^ quad[2] ^ quad[3] == 0:
            blocks.add(frozenset(quad))
    return frozenset(blocks)


def witt_12() -> Design:
    """S(5,6,12) as the PSL(2,11)-orbit of {inf,1,3,4,5,9}; infinity is point 11."""
    q, inf = 11, 11

    def image(x, a, b, c, d):
        if x == inf:
            return inf if c == 0 else a * pow(c, -1, q) % q
        den = (c * x + d) % q
        if den == 0:
            return inf
        return (a * x + b) * pow(den, -1, q) % q

    start = frozenset({inf, 1, 3, 4, 5, 9})
    blocks = set()
    for a in range(q):
        for b in range(q):
            for c in range(q):
                for d in range(q):
                    if (a * d - b * c) % q == 1:
                        blocks.add(frozenset(image(x, a, b, c, d) for x in start))
    return frozenset(blocks)


def derived(design: Design, point: int) -> Design:
    """Blocks through ``point`` with it removed, relabelled onto ``0..n-2``."""
    relabel = lambda x: x if x < point else x - 1
    return frozenset(frozenset(relabel(x) for x in B if x != point) for B in design if point in B)


def design_action(design: Design, group: PermGroup):
    return act(ExplicitPoints((design,)), group)


def cross_check_designs() -> dict[str, tuple[Design, PermGroup, tuple[int, int, int, int]]]:
    """Design and overgroup for each small-degree row with a computable profile.

    Values are (design, group, (n, t, k, expected orbit size)).
    """
    w12 = witt_12()
    w11 = derived(w12, 11)
    w10 = derived(w11, 10)
    return {
        "PSL(3,2)<=A7": (fano_plane(), alternating_group(7), (7, 2, 3, 15)),
        "ASL(3,2)<=A8": (affine_space_planes(), alternating_group(8), (8, 3, 4, 15)),
        "M10<=A10": (w10, alternating_group(10), (10, 3, 4, 2520)),
        "PGammaL(2,9)<=S10": (w10, symmetric_group(10), (10, 3, 4, 2520)),
        "M11<=A11": (w11, alternating_group(11), (11, 4, 5, 2520)),
        "M12<=A12": (w12, alternating_group(12), (12, 5, 6, 2520)),
    }


def computed_profile(key: str):
    design, group, (n, t, k, size) = cross_check_designs()[key]
    if not is_steiner(design, n, t, k):
        raise AssertionError(f"{key}: construction is not an S({t},{k},{n})")
    action = design_action(design, group)
    if action.degree != size:
        raise AssertionError(f"{key}: orbit has {action.degree} designs, expected {size}")
    return action, subdegrees(action)
