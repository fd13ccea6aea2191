"""Benson's congruence for automorphisms of a generalised quadrangle.

For an automorphism with ``f`` fixed points and ``g`` points x with x^theta != x
collinear with x, a GQ of order (s,t) satisfies

    (1+t) f + g  ==  st + 1   (mod s+t).

Fixed points are *not* counted in ``g``; the explicit GQ(2,2) model in
:mod:`gqscreen.incidence` is used to check that convention end to end.
"""

from __future__ import annotations

from dataclasses import dataclass

from .gq import GqOrder, _require_thick, point_count


@dataclass(frozen=True)
class BensonData:
    order: GqOrder
    f: int
    g: int

    def __post_init__(self):
        v = point_count(self.order)
        if not (0 <= self.f <= v and 0 <= self.g <= v):
            raise ValueError(f"f and g must lie in [0, {v}], got f={self.f}, g={self.g}")


def benson_residue(data: BensonData) -> tuple[int, int]:
    """Return ``((1+t)f + g mod (s+t), (st+1) mod (s+t))``."""
    order = data.order
    _require_thick(order)
    s, t = order.s, order.t
    m = s + t
    return ((1 + t) * data.f + data.g) % m, (s * t + 1) % m


def benson_consistent(data: BensonData) -> bool:
    residue, target = benson_residue(data)
    return residue == target


def fpf_min_g(order: GqOrder) -> int:
    """Smallest g allowed by the congruence for a fixed-point-free automorphism."""
    _require_thick(order)
    return (order.s * order.t + 1) % (order.s + order.t)


def fpf_forces_collinear_pair(order: GqOrder) -> bool:
    """True when every fixed-point-free automorphism maps some point to a collinear one.

    This is the case exactly when s+t does not divide st+1, which holds in
    particular whenever gcd(s, t) > 1.
    """
    return fpf_min_g(order) != 0
