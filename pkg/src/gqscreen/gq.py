"""Exact arithmetic on generalised-quadrangle parameters.

Everything here works on Python integers, so no input is too large and no
inequality is decided by floating point.  Fractional exponents are always
rewritten as comparisons between integer powers (``v**2 > s**5`` instead of
``v > s**2.5``).
"""

from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple

from sympy import divisors as _sympy_divisors

from .errors import InfeasibleError, NotThickError


@dataclass(frozen=True, order=True)
class GqOrder:
    """A candidate order ``(s, t)``: lines carry s+1 points, points lie on t+1 lines."""

    s: int
    t: int

    def __post_init__(self):
        if self.s < 1 or self.t < 1:
            raise ValueError(f"order entries must be positive, got ({self.s},{self.t})")

    @property
    def is_thick(self) -> bool:
        return self.s >= 2 and self.t >= 2

    @property
    def point_count(self) -> int:
        return point_count(self)

    @property
    def line_count(self) -> int:
        return line_count(self)

    def dual(self) -> "GqOrder":
        return GqOrder(self.t, self.s)

    def __str__(self):
        return f"({self.s},{self.t})"


@dataclass(frozen=True)
class SrgParams:
    v: int
    k: int
    lam: int
    mu: int
    m_plus: Fraction | None = None
    m_minus: Fraction | None = None

    @property
    def params(self) -> tuple[int, int, int, int]:
        return (self.v, self.k, self.lam, self.mu)

    @property
    def multiplicities_integral(self) -> bool:
        ms = (self.m_plus, self.m_minus)
        return all(m is not None and m.denominator == 1 and m >= 0 for m in ms)


@dataclass(frozen=True)
class SubGqOrder:
    s_sub: int
    t_sub: int


class UsefulBounds(NamedTuple):
    """Margins of the three point-count bounds; each is positive when the bound holds."""

    t_plus1_pow5: int  # (t+1)^5 - v
    s_plus1_pow4: int  # (s+1)^4 - v
    s_pow_5_2_bound: int  # v^2 - s^5


def _require_thick(order: GqOrder) -> None:
    if not order.is_thick:
        raise NotThickError(order.s, order.t)


def point_count(order: GqOrder) -> int:
    s, t = order.s, order.t
    return (s + 1) * (s * t + 1)


def line_count(order: GqOrder) -> int:
    s, t = order.s, order.t
    return (t + 1) * (s * t + 1)


def higman_ok(order: GqOrder) -> bool:
    _require_thick(order)
    s, t = order.s, order.t
    return s <= t * t and t <= s * s


def divisibility_ok(order: GqOrder) -> bool:
    """(s+t) divides st(s+1)(t+1)."""
    _require_thick(order)
    s, t = order.s, order.t
    return (s * t * (s + 1) * (t + 1)) % (s + t) == 0


def divisibility_ok_alt(order: GqOrder) -> bool:
    """The same condition written as (s+t) divides st(st+1).

    Equivalent to :func:`divisibility_ok` because (s+1)(t+1) = st+1 + (s+t).
    """
    _require_thick(order)
    s, t = order.s, order.t
    return (s * t * (s * t + 1)) % (s + t) == 0


def is_feasible(order: GqOrder) -> bool:
    """Thick, Higman's inequality, and the divisibility condition."""
    if not order.is_thick:
        return False
    return higman_ok(order) and divisibility_ok(order)


def infeasibility_reason(order: GqOrder) -> str | None:
    """Name of the first failed condition, or None when feasible."""
    if not order.is_thick:
        return "not-thick"
    if not higman_ok(order):
        return "higman"
    if not divisibility_ok(order):
        return "divisibility"
    return None


def divisors(v: int) -> list[int]:
    return _sympy_divisors(v)


def enumerate_orders(v: int) -> list[GqOrder]:
    """All feasible thick orders with exactly ``v`` points, ascending in s.

    Works by letting s+1 run over the divisors of v; then st+1 = v/(s+1) fixes t.
    """
    if v < 1:
        raise ValueError("v must be positive")
    found = []
    for d in _sympy_divisors(v, generator=True):
        if d < 3:
            continue
        s = d - 1
        q = v // d
        if (q - 1) % s:
            continue
        t = (q - 1) // s
        if t < 2:
            continue
        order = GqOrder(s, t)
        if is_feasible(order):
            found.append(order)
    found.sort()
    return found


def integer_root(v: int, k: int) -> int:
    """floor(v ** (1/k)) for v >= 0, exactly."""
    if v < 0 or k < 1:
        raise ValueError("need v >= 0 and k >= 1")
    if k == 1 or v < 2:
        return v
    if k == 2:
        return math.isqrt(v)
    # Newton from above converges monotonically to the floor root; a float
    # seed only speeds things up and is discarded unless it is an overestimate
    x = 1 << (-(-v.bit_length() // k))
    try:
        seed = int(v ** (1.0 / k)) + 2
        if seed ** k > v:
            x = min(x, seed)
    except OverflowError:
        pass
    while True:
        y = ((k - 1) * x + v // x ** (k - 1)) // k
        if y >= x:
            return x
        x = y


def perfect_powers(v: int) -> list[tuple[int, int]]:
    """Every way to write v = delta**k with delta >= 2 and k >= 2, as (delta, k)."""
    out = []
    for k in range(2, v.bit_length() + 1):
        d = integer_root(v, k)
        if d < 2:
            break
        if d ** k == v:
            out.append((d, k))
    return out


def _is_perfect_power(v: int) -> bool:
    # a perfect power is a p-th power for some prime p, so prime exponents suffice
    for k in _primes_upto(v.bit_length()):
        d = integer_root(v, k)
        if d < 2:
            return False
        if d ** k == v:
            return True
    return False


@lru_cache(maxsize=None)
def _primes_upto(n: int) -> tuple[int, ...]:
    sieve = bytearray([1]) * (n + 1)
    sieve[:2] = b"\x00\x00"[: min(2, n + 1)]
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, n + 1, p)))
    return tuple(p for p in range(2, n + 1) if sieve[p])


def nagell_ljunggren_scan(s_max: int) -> list[tuple[int, int, int]]:
    """All s in [2, s_max] where (s+1)(s^2+1) is a perfect power delta^k, k >= 2.

    Each hit is reported once per exponent k that works.
    """
    if s_max < 2:
        raise ValueError("s_max must be at least 2")
    hits = []
    for s in range(2, s_max + 1):
        v = (s + 1) * (s * s + 1)
        if _is_perfect_power(v):
            hits.extend((s, d, k) for d, k in perfect_powers(v))
    return hits


def iter_feasible_orders(limit: int) -> Iterator[GqOrder]:
    for s in range(2, limit + 1):
        for t in range(2, limit + 1):
            o = GqOrder(s, t)
            if is_feasible(o):
                yield o


def coprime_sweep(limit: int) -> list[GqOrder]:
    """Feasible orders with s,t <= limit, (s+1)|(t+1) or (t+1)|(s+1), and gcd(s,t)=1.

    The result is expected to be empty.
    """
    if limit < 2:
        raise ValueError("limit must be at least 2")
    bad = []
    for o in iter_feasible_orders(limit):
        s, t = o.s, o.t
        if (t + 1) % (s + 1) == 0 or (s + 1) % (t + 1) == 0:
            if math.gcd(s, t) == 1:
                bad.append(o)
    return bad


def subgq_admissible(ambient: GqOrder, sub: SubGqOrder) -> bool:
    """Either s' = s, or s't' <= s, for a proper subquadrangle of order (s',t')."""
    _require_thick(ambient)
    if sub.s_sub < 1 or sub.t_sub < 1:
        raise ValueError("subquadrangle order entries must be positive")
    if (sub.s_sub, sub.t_sub) == (ambient.s, ambient.t):
        raise ValueError("subquadrangle equals the ambient quadrangle; not proper")
    return sub.s_sub == ambient.s or sub.s_sub * sub.t_sub <= ambient.s


def subgq_chain_forces(s: int, t_mid: int) -> tuple[int, int]:
    """For a chain Q'' < Q' < Q of orders (s,t''), (s,t'), (s,t): return (t'', t).

    The chain forces t' = s; any other ``t_mid`` raises InfeasibleError.
    """
    if s <= 1:
        raise ValueError("s must exceed 1")
    if t_mid != s:
        raise InfeasibleError(f"a chain of subquadrangles with s={s} forces t'={s}, got {t_mid}")
    return (1, s * s)


def useful_bounds(order: GqOrder) -> UsefulBounds:
    _require_thick(order)
    s, t = order.s, order.t
    v = point_count(order)
    margins = UsefulBounds((t + 1) ** 5 - v, (s + 1) ** 4 - v, v * v - s ** 5)
    if min(margins) <= 0:
        raise InfeasibleError(f"point-count bound violated for {order}: {margins}")
    return margins


def srg_multiplicities(v: int, k: int, lam: int, mu: int) -> tuple[Fraction, Fraction]:
    """Eigenvalue multiplicities (of the larger and the smaller restricted eigenvalue)."""
    disc = (lam - mu) ** 2 + 4 * (k - mu)
    root = math.isqrt(disc)
    if root * root != disc:
        # conference-graph case: both multiplicities are (v-1)/2 if anything
        half = Fraction(v - 1, 2)
        return half, half
    # m(r) - m(s) = -(2k + (v-1)(lam-mu)) / (r - s), with r - s = root
    diff = Fraction(-(2 * k + (v - 1) * (lam - mu)), root)
    m_plus = (Fraction(v - 1) + diff) / 2
    return m_plus, Fraction(v - 1) - m_plus


def srg_params(order: GqOrder) -> SrgParams:
    """Parameters of the collinearity graph; raises if the multiplicities are not integral."""
    _require_thick(order)
    s, t = order.s, order.t
    v, k, lam, mu = point_count(order), s * (t + 1), s - 1, t + 1
    m_plus, m_minus = srg_multiplicities(v, k, lam, mu)
    params = SrgParams(v, k, lam, mu, m_plus, m_minus)
    if not params.multiplicities_integral:
        raise InfeasibleError(f"non-integral eigenvalue multiplicities for {order}: {m_plus}, {m_minus}")
    return params
