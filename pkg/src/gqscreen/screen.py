"""Elimination of candidate (group, stabiliser, order) rows by their subdegrees.

Stages, in order:

1. the order itself must be feasible (thick, Higman, divisibility);
2. some sub-multiset of the subdegrees must sum to the neighbourhood size s(t+1);
3. for computed profiles only, some such union of orbitals must give a
   strongly regular graph with the collinearity-graph parameters.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Iterator, Sequence

import numpy as np

from .errors import ResourceLimitError
from .gq import GqOrder, _require_thick, infeasibility_reason, point_count, srg_params
from .graphs import strong_regularity
from .permaction import Action, OrbitalProfile, act, parse_action, parse_group, subdegrees, suborbits, union_orbital_graph

ELIMINATED, SURVIVES, UNRESOLVED = "Eliminated", "Survives", "Unresolved"
MAX_WITNESS_SETS = 10_000


@dataclass(frozen=True)
class Verdict:
    status: str
    reason: str = ""
    detail: str = ""


@dataclass(frozen=True)
class CandidateRow:
    group: str
    stabiliser: str
    index: int
    order: GqOrder
    profile: OrbitalProfile | None = None
    profile_ref: str = ""
    action: Action | None = field(default=None, compare=False, repr=False)
    verdict: Verdict | None = None

    @property
    def target(self) -> int | None:
        return neighbourhood_target(self.order) if self.order.is_thick else None


def neighbourhood_target(order: GqOrder) -> int:
    _require_thick(order)
    return order.s * (order.t + 1)


def subset_sum_feasible(profile: OrbitalProfile | Sequence[int], target: int) -> tuple[int, ...] | None:
    """A sub-multiset of the subdegrees summing to ``target`` (each entry used once), or None.

    The witness returned uses as few subdegrees as possible.
    """
    if target < 0:
        raise ValueError("target must be non-negative")
    values = [int(d) for d in (profile.subdegrees if isinstance(profile, OrbitalProfile) else profile)]
    big = len(values) + 1
    fewest = np.full(target + 1, big, dtype=np.int64)
    fewest[0] = 0
    taken = []  # taken[i][x]: item i improved the count for sum x
    for d in values:
        row = np.zeros(target + 1, dtype=bool)
        if 0 < d <= target:
            cand = fewest[:-d] + 1
            row[d:] = cand < fewest[d:]
            fewest[d:] = np.minimum(fewest[d:], cand)
        taken.append(row)
    if fewest[target] >= big:
        return None
    witness, x = [], target
    for i in range(len(values) - 1, -1, -1):
        if x and taken[i][x]:
            witness.append(values[i])
            x -= values[i]
    assert x == 0
    return tuple(sorted(witness))


def subset_sum_exhaustive(values: Sequence[int], target: int) -> bool:
    """Reference oracle: try all 2^m subsets."""
    m = len(values)
    for mask in range(1 << m):
        if sum(values[i] for i in range(m) if mask >> i & 1) == target:
            return True
    return False


def subsets_hitting(sizes: Sequence[int], target: int) -> Iterator[tuple[int, ...]]:
    """Every set of positions whose sizes sum to ``target``."""
    order = sorted(range(len(sizes)), key=lambda i: -sizes[i])
    suffix = [0] * (len(order) + 1)
    for j in range(len(order) - 1, -1, -1):
        suffix[j] = suffix[j + 1] + sizes[order[j]]

    def rec(j, remaining, chosen):
        if remaining == 0:
            yield tuple(sorted(chosen))
            return
        if j == len(order) or suffix[j] < remaining:
            return
        i = order[j]
        if sizes[i] <= remaining:
            chosen.append(i)
            yield from rec(j + 1, remaining - sizes[i], chosen)
            chosen.pop()
        yield from rec(j + 1, remaining, chosen)

    yield from rec(0, target, [])


def _srg_stage(row: CandidateRow) -> Verdict:
    expected = srg_params(row.order)
    sub = suborbits(row.action)
    parts = sub.nontrivial()
    sizes = [len(p) for p in parts]
    tried = 0
    failures = []
    for chosen in subsets_hitting(sizes, neighbourhood_target(row.order)):
        tried += 1
        if tried > MAX_WITNESS_SETS:
            raise ResourceLimitError("too many candidate unions of suborbits")
        adj = union_orbital_graph(row.action, [int(parts[i][0]) for i in chosen])
        got = strong_regularity(adj)
        label = "+".join(str(sizes[i]) for i in chosen)
        if hasattr(got, "params") and got.params == expected.params:
            return Verdict(SURVIVES, "srg", f"union {label} is SRG{expected.params}")
        failures.append(f"{label}: {got.params if hasattr(got, 'params') else got.kind}")
    return Verdict(ELIMINATED, "not-srg", "; ".join(failures))


def screen_candidate(row: CandidateRow) -> CandidateRow:
    order = row.order
    reason = infeasibility_reason(order)
    if reason is not None:
        return replace(row, verdict=Verdict(ELIMINATED, reason, f"order {order}"))
    if row.index != point_count(order):
        return replace(row, verdict=Verdict(ELIMINATED, "index-mismatch", f"{row.index} != {point_count(order)}"))
    if row.profile is None:
        return replace(row, verdict=Verdict(UNRESOLVED, "missing-profile", row.profile_ref or "no profile"))
    if row.profile.degree != row.index:
        return replace(row, verdict=Verdict(ELIMINATED, "index-mismatch", f"profile degree {row.profile.degree}"))
    target = neighbourhood_target(order)
    witness = subset_sum_feasible(row.profile, target)
    if witness is None:
        return replace(row, verdict=Verdict(ELIMINATED, "subset-sum", f"no subset sums to {target}"))
    if not row.profile.is_computed or row.action is None:
        detail = f"witness {'+'.join(map(str, witness))}; profile is {row.profile.provenance}"
        return replace(row, verdict=Verdict(SURVIVES, "pending-srg", detail))
    return replace(row, verdict=_srg_stage(row))


# ---------------------------------------------------------------------------
# table input/output

INPUT_COLUMNS = ["group", "stabiliser", "index", "s", "t", "profile_ref"]
OUTPUT_COLUMNS = INPUT_COLUMNS + ["provenance", "target", "verdict", "reason", "detail"]


def resolve_profile(ref: str) -> tuple[OrbitalProfile | None, Action | None]:
    """``file:<name>`` (bundled profile), ``action:<group>/<action>``, or empty/``-``."""
    from .data import load_profile

    ref = ref.strip()
    if ref in ("", "-"):
        return None, None
    kind, _, arg = ref.partition(":")
    if kind == "file":
        return load_profile(arg), None
    if kind == "action":
        group_spec, _, action_spec = arg.partition("/")
        action = act(parse_action(action_spec), parse_group(group_spec))
        return subdegrees(action), action
    raise ValueError(f"unknown profile reference {ref!r}")


def rows_from_records(records: list[dict[str, str]]) -> list[CandidateRow]:
    rows = []
    for rec in records:
        ref = rec.get("profile_ref", "")
        try:
            profile, action = resolve_profile(ref)
        except FileNotFoundError:
            profile, action = None, None
        rows.append(
            CandidateRow(
                rec["group"], rec["stabiliser"], int(rec["index"]), GqOrder(int(rec["s"]), int(rec["t"])),
                profile, ref, action,
            )
        )
    return rows


def row_record(row: CandidateRow) -> dict[str, str]:
    v = row.verdict or Verdict("", "", "")
    return {
        "group": row.group,
        "stabiliser": row.stabiliser,
        "index": str(row.index),
        "s": str(row.order.s),
        "t": str(row.order.t),
        "profile_ref": row.profile_ref,
        "provenance": row.profile.provenance if row.profile else "",
        "target": str(row.target) if row.target is not None else "",
        "verdict": v.status,
        "reason": v.reason,
        "detail": v.detail,
    }


def verdicts_json(rows: list[CandidateRow]) -> str:
    return json.dumps([row_record(r) for r in rows], indent=2, sort_keys=True) + "\n"
