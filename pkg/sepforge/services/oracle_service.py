"""Brute-force oracles and property suites run by the ``oracle`` command.

The oracles recompute separations, kappa and efficient sets without the
separator-first enumeration so the engine can be cross-checked against them.
"""

import itertools
import logging
import random
from typing import Dict, List, Optional, Sequence, Tuple

from sepforge.exceptions import CapacityError, LemmaViolationError, PreconditionError, SepforgeError, UsageError
from sepforge.models import Corners, Graph, NestedSeparationSet, Profile, Separation, SeparationSet
from sepforge.schemas import OracleReport
from sepforge.services.profile_service import (
    efficient_set,
    kappa,
    opposite_corner_pair,
    relevant_set,
)
from sepforge.services.separation_service import corners, crossing_set, enumerate_separations
from sepforge.services.tree_service import build_td_from_nested, induced_separations

logger = logging.getLogger(__name__)

BRUTE_FORCE_CAP = 10
SUITES = ("corners", "crossing-inequality", "opposite-corners", "roundtrip", "efficient")
MAX_VIOLATIONS = 10


def brute_force_separations(g: Graph, max_order: Optional[int] = None) -> SeparationSet:
    """All separations of order at most ``max_order``, by placing each vertex in A, B or both."""
    if g.n > BRUTE_FORCE_CAP:
        raise CapacityError(f"brute-force oracle handles at most {BRUTE_FORCE_CAP} vertices, got {g.n}")
    found = []
    for placement in itertools.product((0, 1, 2), repeat=g.n):
        a = frozenset(v for v, side in enumerate(placement) if side != 1)
        b = frozenset(v for v, side in enumerate(placement) if side != 0)
        if max_order is not None and len(a & b) > max_order:
            continue
        if any(placement[u] + placement[v] == 1 for u, v in g.sorted_edges):
            continue
        found.append(Separation(a, b))
    return SeparationSet(found)


def brute_force_kappa(g: Graph, profiles: Sequence[Profile]) -> Tuple[Optional[int], SeparationSet]:
    """Kappa and the efficient set from a double loop over all separations and profile pairs."""
    bound = max((p.bound for p in profiles), default=0)
    universe = brute_force_separations(g, max(bound - 1, 0))
    lam: Dict[Tuple[int, int], int] = {}
    for s in universe:
        r = s.reverse()
        for i, p in enumerate(profiles):
            if s not in p:
                continue
            for j, q in enumerate(profiles):
                if i != j and r in q:
                    key = (min(i, j), max(i, j))
                    lam[key] = min(lam.get(key, s.order), s.order)
    if not lam:
        return None, SeparationSet()
    k = min(lam.values())
    efficient = set()
    for s in universe:
        if s.order != k:
            continue
        for (i, j), order in lam.items():
            if order != k:
                continue
            p, q = profiles[i], profiles[j]
            if (s in p and s.reverse() in q) or (s in q and s.reverse() in p):
                efficient.add(s)
                efficient.add(s.reverse())
    return k, SeparationSet(efficient)


def _crossing_pairs(g: Graph, max_order: int) -> Tuple[SeparationSet, List[Tuple[Separation, Separation]]]:
    universe = enumerate_separations(g, max_order, "proper")
    pairs = [
        (s, t) for s, t in itertools.combinations(universe, 2) if not s.is_nested_with(t)
    ]
    return universe, pairs


def corner_suite(g: Graph, max_order: int = 3) -> OracleReport:
    """Nestedness of corners with separations nested with one or both crossing separations."""
    universe, pairs = _crossing_pairs(g, max_order)
    report = OracleReport(suite="corners", graph=repr(g))
    for s1, s2 in pairs:
        cs = corners(s1, s2)
        for e in universe:
            report.checked += 1
            with_first, with_second = e.is_nested_with(s1), e.is_nested_with(s2)
            if with_first and with_second:
                bad = [label for label, c in cs.separations.items() if not e.is_nested_with(c)]
                if bad:
                    report.violations.append(f"{e!r} nested with {s1!r}, {s2!r} but crosses corner {bad[0]}")
            if with_first or with_second:
                if not any(
                    e.is_nested_with(cs[x]) and e.is_nested_with(cs[y]) for x, y in Corners.ADJACENT
                ):
                    report.violations.append(f"{e!r} is nested with no two adjacent corners of {s1!r}, {s2!r}")
            if len(report.violations) >= MAX_VIOLATIONS:
                return report
    return report


def crossing_inequality_suite(g: Graph, max_order: int = 3) -> OracleReport:
    """Crossing sets of opposite corners against those of the crossing pair."""
    universe, pairs = _crossing_pairs(g, max_order)
    report = OracleReport(suite="crossing-inequality", graph=repr(g))
    for s1, s2 in pairs:
        cs = corners(s1, s2)
        outer1, outer2 = crossing_set(s1, universe).members, crossing_set(s2, universe).members
        for x, y in Corners.OPPOSITE:
            report.checked += 1
            inner1, inner2 = crossing_set(cs[x], universe).members, crossing_set(cs[y], universe).members
            if not (inner1 & inner2) <= (outer1 & outer2):
                report.violations.append(f"corners {x}, {y} of {s1!r}, {s2!r}: intersection not contained")
            if not (inner1 | inner2) < (outer1 | outer2):
                report.violations.append(f"corners {x}, {y} of {s1!r}, {s2!r}: union not strictly contained")
            if not len(inner1) + len(inner2) < len(outer1) + len(outer2):
                report.violations.append(f"corners {x}, {y} of {s1!r}, {s2!r}: crossing numbers do not drop")
        if len(report.violations) >= MAX_VIOLATIONS:
            break
    return report


def opposite_corners_suite(g: Graph, profiles: Sequence[Profile]) -> OracleReport:
    """Every pair of relevant order-kappa separations has a relevant opposite corner pair."""
    report = OracleReport(suite="opposite-corners", graph=repr(g))
    if len(profiles) < 2:
        return report
    try:
        k = kappa(g, profiles)
    except PreconditionError:
        return report
    if any(p.bound <= k for p in profiles):
        return report
    relevant = [s for s in relevant_set(g, k, profiles) if s.order == k]
    for s1, s2 in itertools.combinations(relevant, 2):
        report.checked += 1
        try:
            opposite_corner_pair(g, profiles, s1, s2)
        except LemmaViolationError as exc:
            report.violations.append(exc.message)
            if len(report.violations) >= MAX_VIOLATIONS:
                break
    return report


def random_nested_set(g: Graph, max_order: int, rng: random.Random) -> NestedSeparationSet:
    """Greedy nested set: proper separations in shuffled order, kept when nested with all kept ones."""
    candidates = list(enumerate_separations(g, max_order, "proper"))
    rng.shuffle(candidates)
    kept: List[Separation] = []
    for s in candidates:
        if rng.random() < 0.5 and all(s.is_nested_with(t) for t in kept):
            kept.append(s)
    return NestedSeparationSet(kept)


def roundtrip_suite(g: Graph, seed: int = 0, trials: int = 20, max_order: int = 2) -> OracleReport:
    """Decompositions built from random nested sets induce exactly those sets."""
    rng = random.Random(seed)
    report = OracleReport(suite="roundtrip", graph=repr(g))
    for _ in range(trials):
        nested = random_nested_set(g, min(max_order, g.n), rng)
        report.checked += 1
        try:
            td = build_td_from_nested(g, nested)
        except SepforgeError as exc:
            report.violations.append(f"{list(nested)!r}: {exc.message}")
            continue
        if induced_separations(g, td) != nested:
            report.violations.append(f"{list(nested)!r}: induced separations differ")
    return report


def efficient_suite(g: Graph, profiles: Sequence[Profile]) -> OracleReport:
    """Engine kappa and efficient set against the brute-force double loop."""
    report = OracleReport(suite="efficient", graph=repr(g))
    expected_k, expected = brute_force_kappa(g, profiles)
    report.checked += 1
    try:
        k = kappa(g, profiles)
    except PreconditionError:
        if expected_k is not None:
            report.violations.append(f"engine finds no kappa, brute force finds {expected_k}")
        return report
    if k != expected_k:
        report.violations.append(f"engine kappa {k} differs from brute-force kappa {expected_k}")
        return report
    engine = efficient_set(g, profiles)
    if engine != expected:
        extra = sorted(engine.members - expected.members, key=lambda s: s.key)
        missing = sorted(expected.members - engine.members, key=lambda s: s.key)
        report.violations.append(f"efficient sets differ: extra {extra!r}, missing {missing!r}")
    return report


def run_suite(
    name: str,
    g: Graph,
    profiles: Sequence[Profile] = (),
    seed: int = 0,
    max_order: int = 3,
) -> OracleReport:
    """Run one named suite on ``g``."""
    if name == "corners":
        return corner_suite(g, max_order)
    if name == "crossing-inequality":
        return crossing_inequality_suite(g, max_order)
    if name == "opposite-corners":
        return opposite_corners_suite(g, profiles)
    if name == "roundtrip":
        return roundtrip_suite(g, seed=seed, max_order=max_order)
    if name == "efficient":
        return efficient_suite(g, profiles)
    raise UsageError(f"unknown oracle suite {name!r}; expected one of {', '.join(SUITES)}")
