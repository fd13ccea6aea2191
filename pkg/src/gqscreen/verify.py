"""Regenerate every reproduced table and number, compare with the bundled
expectations, and collect the outcome in a report.

The manifest is static: checks always run and report in the order listed in
``MANIFEST`` regardless of how long each one takes.
"""

from __future__ import annotations

import difflib
import functools
import json
import time
from dataclasses import dataclass, field
from math import comb
from typing import Callable

from . import casework
from .benson import BensonData, benson_consistent
from .data import data_path, load_profile, read_tsv, verify_checksums, write_tsv
from .errors import GqscreenError
from .gq import (
    GqOrder,
    coprime_sweep,
    divisibility_ok,
    divisibility_ok_alt,
    enumerate_orders,
    infeasibility_reason,
    nagell_ljunggren_scan,
    point_count,
    srg_params,
)
from .graphs import diameter, strong_regularity
from .incidence import (
    FIXED_TAGS,
    automorphism_group_order,
    benson_counts,
    build_w2,
    classify_fixed,
    collinearity_graph,
    iter_automorphisms,
    validate_gq,
)
from .permaction import act, orbital_graph, parse_action, parse_group, subdegrees, subdegrees_by_pairs, suborbits
from .screen import ELIMINATED, rows_from_records, screen_candidate

PASS, FAIL, DISCREPANCY = "pass", "fail", "discrepancy"


@dataclass
class CheckResult:
    name: str
    status: str
    detail: str = ""
    produced: str | None = None
    expected: str | None = None
    diff: list[str] = field(default_factory=list)
    note: str = ""

    def record(self) -> dict:
        d = {"name": self.name, "status": self.status, "detail": self.detail}
        if self.note:
            d["note"] = self.note
        if self.diff:
            d["diff"] = self.diff
        if self.produced is not None:
            d["produced"] = self.produced
        if self.expected is not None:
            d["expected"] = self.expected
        return d


def _ok(name, cond, detail="") -> CheckResult:
    return CheckResult(name, PASS if cond else FAIL, detail)


def _table_check(name: str, produced: str, expected_file: str) -> CheckResult:
    try:
        expected = data_path(expected_file).read_text(encoding="utf-8")
    except OSError as exc:
        return CheckResult(name, FAIL, f"cannot read {expected_file}: {exc}", produced)
    diff = list(
        difflib.unified_diff(
            expected.splitlines(), produced.splitlines(), f"expected/{expected_file}", f"produced/{expected_file}", lineterm=""
        )
    )
    rows = max(produced.count("\n") - 1, 0)
    return CheckResult(name, PASS if not diff else FAIL, f"{rows} rows", produced, expected, diff)


# ---------------------------------------------------------------------------
# individual checks

def check_gq_core() -> list[CheckResult]:
    o = GqOrder(57, 57)
    out = [
        _ok(
            "gq-core/params-57-57",
            infeasibility_reason(o) is None and point_count(o) == 188500 and srg_params(o).k == 3306,
            f"v={point_count(o)} k={srg_params(o).k}",
        ),
        _ok("gq-core/enumerate-2520", enumerate_orders(2520) == [GqOrder(11, 19)], str(enumerate_orders(2520))),
        _ok("gq-core/higman-2-7", infeasibility_reason(GqOrder(2, 7)) == "higman"),
        _ok("gq-core/enumerate-75075", enumerate_orders(75075) == []),
    ]
    nag = nagell_ljunggren_scan(10**5)
    out.append(_ok("gq-core/nagell-ljunggren", nag == [(7, 20, 2)], str(nag)))
    sweep = coprime_sweep(200)
    out.append(_ok("gq-core/coprime-sweep", sweep == [], f"{len(sweep)} survivors up to 200"))
    bad = [(s, t) for s in range(2, 301) for t in range(2, 301) if divisibility_ok(GqOrder(s, t)) != divisibility_ok_alt(GqOrder(s, t))]
    out.append(_ok("gq-core/divisibility-forms", not bad, f"{len(bad)} disagreements for 2 <= s,t <= 300"))
    return out


@functools.lru_cache(maxsize=1)
def _w2_automorphisms():
    w2 = build_w2()
    return w2, list(iter_automorphisms(w2))


def check_incidence() -> list[CheckResult]:
    w2 = build_w2()
    order = validate_gq(w2)
    srg = strong_regularity(collinearity_graph(w2))
    size, _ = automorphism_group_order(w2)
    return [
        _ok("incidence/w2-order", order == GqOrder(2, 2), str(order)),
        _ok("incidence/w2-collinearity-srg", getattr(srg, "params", None) == (15, 6, 1, 3), f"SRG{getattr(srg, 'params', srg)}"),
        _ok("incidence/w2-automorphisms", size == 720, f"|Aut| = {size}"),
    ]


def check_benson() -> list[CheckResult]:
    w2, auts = _w2_automorphisms()
    order = GqOrder(2, 2)
    bad_benson, tags = 0, {}
    for a in auts:
        f, g = benson_counts(w2, a)
        if not benson_consistent(BensonData(order, f, g)):
            bad_benson += 1
        tag = classify_fixed(w2, a).tag
        tags[tag] = tags.get(tag, 0) + 1
    summary = ", ".join(f"{k}={tags[k]}" for k in FIXED_TAGS if k in tags)
    return [
        _ok("benson/w2-congruence", len(auts) == 720 and bad_benson == 0, f"{len(auts)} automorphisms, {bad_benson} violations"),
        _ok("benson/w2-fixed-classes", sum(tags.values()) == 720 and set(tags) <= set(FIXED_TAGS), summary),
    ]


def check_permaction() -> list[CheckResult]:
    out = []
    want = (20, 60, 80, 160, 240, 384)
    for g in ("A10", "S10"):
        action = act(parse_action("partitions:2x5"), parse_group(g))
        a, b = subdegrees(action), subdegrees_by_pairs(action)
        out.append(
            _ok(f"permaction/{g}-945", a.subdegrees == want and b.subdegrees == want, ",".join(map(str, a.subdegrees)))
        )
    action = act(parse_action("partitions:3x3"), parse_group("A9"))
    prof = subdegrees(action)
    sub = suborbits(action)
    rep = next(int(m[0]) for m in sub.nontrivial() if len(m) == 36)
    adj = orbital_graph(action, rep)
    srg = strong_regularity(adj)
    out.append(
        _ok(
            "permaction/A9-280-orbital-36",
            36 in prof.subdegrees and diameter(adj) == 2 and not hasattr(srg, "params"),
            f"subdegrees {','.join(map(str, prof.subdegrees))}; diameter {diameter(adj)}; {getattr(srg, 'kind', srg)}",
        )
    )
    d20 = casework.degree20_two_point()
    out.append(
        _ok(
            "permaction/degree20-two-point",
            d20 == {"PSL2:19": [9, 9], "PGL2:19": [18], "A20": [18], "S20": [18]},
            "; ".join(f"{k}: {v}" for k, v in d20.items()),
        )
    )
    return out


def check_steiner() -> list[CheckResult]:
    from .designs import computed_profile

    out = []
    for key, name in casework.SMALLDEGREE_PROFILES.items():
        label = f"{key[1]}<={key[0]}"
        action, computed = computed_profile(label)
        pairs = subdegrees_by_pairs(action)
        transcribed = load_profile(name)
        out.append(
            _ok(
                f"steiner/{label}",
                computed.subdegrees == transcribed.subdegrees == pairs.subdegrees and computed.balanced,
                ",".join(map(str, computed.subdegrees)),
            )
        )
    return out


def check_screen() -> list[CheckResult]:
    rows = casework.smalldegree_table()
    produced = write_tsv(casework.smalldegree_records(rows), casework.SMALLDEGREE_COLUMNS)
    out = [_table_check("screen/smalldegree-table", produced, "expected_smalldegree.tsv")]
    hits, _ = casework.sporadic_table()
    ru = casework.rudvalis_elimination(hits, load_profile("ru-188500"))
    out.append(
        _ok(
            "screen/rudvalis",
            ru.verdict.status == ELIMINATED and ru.verdict.reason == "subset-sum" and ru.target == 3306 and ru.profile.balanced,
            f"{ru.verdict.status} {ru.verdict.reason}: {ru.verdict.detail}",
        )
    )
    rows = [screen_candidate(r) for r in rows_from_records(read_tsv(data_path("screen_imprimitive.tsv")))]
    summary = "; ".join(f"{r.group} {r.verdict.status} {r.verdict.reason}" for r in rows)
    out.append(_ok("screen/imprimitive", all(r.verdict.status == ELIMINATED for r in rows), summary))
    return out


def check_enumeration() -> list[CheckResult]:
    rows = casework.imprim_enumeration(36)
    got = {(r.n, r.s, r.t, r.a, r.b) for r in rows}
    want = {(6, 2, 2, 2, 3), (9, 9, 3, 3, 3), (10, 8, 13, 2, 5), (16, 76, 449, 4, 4)}
    hits, unresolved = casework.sporadic_table()
    produced = write_tsv(casework.table5_records(hits), casework.TABLE5_COLUMNS)
    t5 = _table_check("casework/sporadic-table", produced, "expected_table5.tsv")
    t5.note = casework.SPORADIC_COVERAGE + (f"; unresolved rows: {unresolved}" if unresolved else "")
    pairs = casework.dual_pairs(hits)
    return [
        _ok("casework/imprim-enumeration", got == want and len(rows) == 4, str(sorted(got))),
        _ok("casework/75075", enumerate_orders(75075) == []),
        t5,
        _ok("casework/dual-pairs", [(g, o.s, o.t) for g, o in pairs] == [("Ru", 57, 57)], str(pairs)),
        _ok("casework/strange6", casework.strange6_check() == (45, GqOrder(4, 2)), str(casework.strange6_check())),
        _ok("casework/intransitive", casework.intransitive_final_check() == [2] and comb(6, 2) == 15),
    ]


def check_thresholds() -> list[CheckResult]:
    out = []
    for r in casework.all_thresholds(200):
        detail = f"computed {r.computed}, published {r.paper}"
        out.append(CheckResult(f"thresholds/{r.name}", r.status, detail, note=r.note()))
    stable = casework.threshold_stability(200)
    out.append(_ok("thresholds/stability", not stable, str(stable) if stable else "unchanged on 200 -> 300"))
    w = casework.wreath_check()
    out.append(_ok("thresholds/wreath", w == [(5, 2)], str(w)))
    m, m12 = casework.maroti_bound_check(), casework.maroti_bound_check(300, 12)
    out.append(_ok("thresholds/maroti", m == 48 and m12 == 107, f"exponent 6: {m}; exponent 12: {m12}"))
    return out


def check_properties() -> list[CheckResult]:
    bad = casework.bound_n_verify(200)
    pa = casework.pa_survey(100)
    big_k = [e for e in pa if e.k >= 4]
    has_77 = casework.PaEntry(20, 2, 7, 7) in pa
    return [
        _ok("properties/bound-n", not bad, f"{len(bad)} violations for 16 <= n <= 200"),
        _ok("properties/pa-survey", not big_k and has_77, f"{len(pa)} entries, {len(big_k)} with k >= 4"),
    ]


def check_data() -> list[CheckResult]:
    try:
        bad = verify_checksums()
    except OSError as exc:
        return [CheckResult("data/checksums", FAIL, str(exc))]
    return [_ok("data/checksums", not bad, ", ".join(bad) if bad else "all bundled files match")]


MANIFEST: list[tuple[str, Callable[[], list[CheckResult]]]] = [
    ("data", check_data),
    ("gq-core", check_gq_core),
    ("incidence", check_incidence),
    ("benson", check_benson),
    ("permaction", check_permaction),
    ("steiner", check_steiner),
    ("screen", check_screen),
    ("casework", check_enumeration),
    ("thresholds", check_thresholds),
    ("properties", check_properties),
]
GROUPS = [g for g, _ in MANIFEST]


@dataclass
class ReportBundle:
    results: list[CheckResult]
    runtimes: dict[str, float]

    @property
    def failed(self) -> list[CheckResult]:
        return [r for r in self.results if r.status == FAIL]

    @property
    def discrepancies(self) -> list[CheckResult]:
        return [r for r in self.results if r.status == DISCREPANCY]

    @property
    def ok(self) -> bool:
        return not self.failed

    def to_json(self, timings: bool = True) -> str:
        d = {
            "ok": self.ok,
            "counts": {s: str(sum(r.status == s for r in self.results)) for s in (PASS, FAIL, DISCREPANCY)},
            "checks": [r.record() for r in self.results],
            "discrepancies": [r.name for r in self.discrepancies],
        }
        if timings:
            d["runtime_seconds"] = {k: f"{v:.2f}" for k, v in self.runtimes.items()}
        return json.dumps(d, indent=2, sort_keys=True) + "\n"

    def to_text(self, timings: bool = True) -> str:
        lines = [f"{r.status.upper():12} {r.name}  {r.detail}".rstrip() for r in self.results]
        notes = [r for r in self.results if r.note]
        if notes:
            lines.append("")
            lines.append("notes:")
            lines += [f"  {r.name}: {r.note}" for r in notes]
        for r in self.failed:
            if r.diff:
                lines.append("")
                lines += r.diff
        lines.append("")
        n_pass = sum(r.status == PASS for r in self.results)
        lines.append(f"{n_pass} passed, {len(self.failed)} failed, {len(self.discrepancies)} discrepancies")
        if timings:
            lines.append("runtime: " + ", ".join(f"{k} {v:.1f}s" for k, v in self.runtimes.items()))
        return "\n".join(lines) + "\n"


def run(only: list[str] | None = None) -> ReportBundle:
    unknown = set(only or []) - set(GROUPS)
    if unknown:
        raise ValueError(f"unknown check groups: {sorted(unknown)}; choose from {GROUPS}")
    results, runtimes = [], {}
    for group, fn in MANIFEST:
        if only and group not in only:
            continue
        t0 = time.perf_counter()
        try:
            results.extend(fn())
        except GqscreenError as exc:
            results.append(CheckResult(f"{group}/error", FAIL, f"{type(exc).__name__}: {exc}"))
        runtimes[group] = time.perf_counter() - t0
    return ReportBundle(results, runtimes)
