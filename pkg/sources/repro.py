"""
Batch reproduction suites. Each criterion is an experiment with an exact expected outcome.
"""

from math import comb
from typing import Callable, Dict, List, Tuple

import numpy as np
from tqdm import tqdm

from sources.bounds import bounds_report
from sources.constructions import (construction_formula, fixed_r_construction, lift_uniformity,
                                   simple_F_construction, simple_f_construction,
                                   t2_complete_construction, t2_partite_construction)
from sources.core import Instance, edge_mask
from sources.errors import ParameterDomainError
from sources.finder import find_rainbow_constructive
from sources.logger import Logger
from sources.multilinear import (multilinear_rainbow_find, rainbow_via_multilinear, random_family,
                                 tensor_phi, tightness_family)
from sources.probfield import (behrend_from_base_set, behrend_system, build_partite_family,
                               counting_probe, probability_probe, sample_functional, span_suite)
from sources.schemas import CriterionResult, ReproResult
from sources.search import (SearchStatus, StrongStatus, check_strong_property, enumerate_matchings,
                            exact_value_search, find_rainbow, naive_rainbow_exists)

logger = Logger("repro.log")

def random_instance(rng: np.random.Generator, r: int, t: int, num_vertices: int, N: int,
                    partite: bool = False) -> Instance:
    """N random size-t matchings; partite instances split the vertices into r equal parts."""
    matchings = []
    partition = None
    if partite:
        size = num_vertices // r
        partition = [list(range(p * size, (p + 1) * size)) for p in range(r)]
    for _ in range(N):
        if partite:
            picks = [rng.permutation(part)[:t] for part in partition]
            matchings.append([edge_mask(int(picks[p][i]) for p in range(r)) for i in range(t)])
        else:
            order = rng.permutation(num_vertices)
            matchings.append([edge_mask(int(v) for v in order[i * r:(i + 1) * r]) for i in range(t)])
    return Instance.create(r, t, r * (num_vertices // r) if partite else num_vertices,
                           matchings, partition, {"generator": "random"})

def random_distinct_family(rng: np.random.Generator, r: int, t: int, universe: int, N: int,
                           partite: bool = False) -> Instance:
    """N distinct matchings sampled from every size-t matching on the universe."""
    pool, partition = enumerate_matchings(r, t, universe, partite)
    if N > len(pool):
        raise ParameterDomainError(f"only {len(pool)} distinct matchings on {universe} vertices")
    chosen = sorted(rng.choice(len(pool), size=N, replace=False).tolist())
    return Instance.create(r, t, universe, [pool[i] for i in chosen], partition, {"generator": "random-distinct"})

def _criterion(name: str, passed: bool, detail: str) -> CriterionResult:
    logger.info(f"{name}: {'pass' if passed else 'FAIL'} ({detail})")
    return CriterionResult(name=name, passed=bool(passed), detail=detail)

def construction_counts() -> CriterionResult:
    checks = [
        (fixed_r_construction(3, 12).N, 27),
        (simple_F_construction(2, 3).N, 4),
        (simple_F_construction(4, 2).N, 8),
        (simple_f_construction(3, 3).N, 6),
    ]
    checks += [(t2_complete_construction(r).N, comb(2 * r, r) // 2) for r in range(2, 7)]
    checks += [(t2_partite_construction(r).N, 2 ** (r - 1)) for r in range(2, 9)]
    checks += [(simple_F_construction(3, 2).N, construction_formula("simple-F", 3, 2))]
    bad = [(got, want) for got, want in checks if got != want]
    return _criterion("construction counts", not bad, f"{len(checks)} counts, mismatches {bad}")

def no_rainbow_on_constructions() -> CriterionResult:
    instances = {
        "simple-F(2,3)": simple_F_construction(2, 3),
        "simple-F(4,2)": simple_F_construction(4, 2),
        "simple-f(3,3)": simple_f_construction(3, 3),
        "simple-f(3,2)": simple_f_construction(3, 2),
        "lifted simple-F(2,3)": lift_uniformity(simple_F_construction(2, 3), 3),
        "fixed-r(3,12)": fixed_r_construction(3, 12),
    }
    statuses = {name: find_rainbow(inst, inst.t).status.value for name, inst in instances.items()}
    ok = all(status == SearchStatus.NONE_EXISTS.value for status in statuses.values())
    return _criterion("no rainbow on constructions", ok, str(statuses))

def strong_property_t2() -> CriterionResult:
    results = {f"t2-complete({r})": check_strong_property(t2_complete_construction(r)).status.value
               for r in range(2, 5)}
    results.update({f"t2-partite({r})": check_strong_property(t2_partite_construction(r)).status.value
                    for r in range(2, 6)})
    ok = all(status == StrongStatus.HOLDS.value for status in results.values())
    return _criterion("strong property on t=2 families", ok, str(results))

def exact_small_value() -> CriterionResult:
    n_max, witness = exact_value_search(2, 2, 4, True)
    return _criterion("exact f(2,2) on K_{2,2}", n_max == 2 and witness.N == 2, f"N_max={n_max}")

def oracle_completeness(count: int = 500, seed: int = 0) -> CriterionResult:
    rng = np.random.default_rng(seed)
    disagreements = 0
    for _ in tqdm(range(count), desc="oracle", leave=False):
        r = int(rng.integers(2, 4))
        t = int(rng.integers(1, 4))
        if r * t > 12:
            t = 12 // r
        n = int(rng.integers(r * t, 13))
        N = int(rng.integers(1, 7))
        inst = random_instance(rng, r, t, n, N)
        s = int(rng.integers(1, t + 1))
        fast = find_rainbow(inst, s).status == SearchStatus.FOUND
        slow = naive_rainbow_exists(inst, s) is not None
        disagreements += fast != slow
    return _criterion("oracle agrees with naive enumeration", disagreements == 0,
                      f"{count} instances, {disagreements} disagreements")

def bounds_table() -> CriterionResult:
    small = bounds_report(2, 3)
    upper = {row.name: row.value for row in small.upper}
    big = bounds_report(10, 10)
    big_upper = {row.name: row.value for row in big.upper}
    ok = (upper["(t-1)C(tr,r)"] == "30" and upper["(t-1)t^r"] == "18"
          and small.best_lower_F.value == "4"
          and big_upper["(t-1)C(tr,r)"] == str(9 * comb(100, 10)))
    return _criterion("bounds table", ok, f"(2,3) upper {upper}, lower {small.best_lower_F.value}")

def prob_family_strong(seeds: int = 50) -> CriterionResult:
    system = behrend_system(7, 3, "exhaustive")
    failures, sizes = [], []
    for seed in tqdm(range(seeds), desc="prob-f seeds", leave=False):
        inst = build_partite_family(3, 3, system, sample_functional(7, 9, seed))
        sizes.append(inst.N)
        if check_strong_property(inst).status != StrongStatus.HOLDS:
            failures.append(seed)
    return _criterion("prob-f strong property", not failures,
                      f"{seeds} seeds at P=7, N range [{min(sizes)}, {max(sizes)}], failing seeds {failures}")

def finder_threshold(count: int = 100, seed: int = 0) -> CriterionResult:
    rng = np.random.default_rng(seed)
    misses = 0
    for _ in tqdm(range(count), desc="finder", leave=False):
        inst = random_distinct_family(rng, 2, 2, 6, 36)
        outcome = find_rainbow_constructive(inst)
        misses += not (outcome.found and outcome.path == "constructive")
    return _criterion("constructive finder at N=(tr+t)^r", misses == 0, f"{count} instances, {misses} misses")

def finder_never_false() -> CriterionResult:
    instances = [simple_F_construction(2, 3), simple_F_construction(4, 2), simple_f_construction(3, 3),
                 simple_f_construction(3, 2), t2_complete_construction(3), t2_partite_construction(4)]
    wrong = [inst.metadata.get("generator") for inst in instances
             if find_rainbow_constructive(inst).status != SearchStatus.NONE_EXISTS]
    return _criterion("constructive finder on constructions", not wrong, f"wrong answers on {wrong}")

def multilinear_tightness() -> CriterionResult:
    wrong = []
    for t in (2, 3):
        for dim in (2, 3, 4):
            fam, phi = tightness_family(t, dim)
            if multilinear_rainbow_find(fam, phi).found:
                wrong.append((t, dim))
    return _criterion("tightness families exhausted", not wrong, f"found on {wrong}")

def multilinear_guarantee(seeds: int = 100) -> CriterionResult:
    misses = []
    for seed in tqdm(range(seeds), desc="multilinear", leave=False):
        t, dim = 2 + seed % 2, 2 + seed % 3
        phi = tensor_phi(dim, t, seed)
        fam = random_family((t - 1) * dim + 1, t, dim, phi, seed)
        if not multilinear_rainbow_find(fam, phi).found:
            misses.append(seed)
    return _criterion("random families above (t-1)dim", not misses, f"{seeds} seeds, misses {misses}")

def algebraic_partite(seed: int = 0) -> CriterionResult:
    rng = np.random.default_rng(seed)
    inst = random_distinct_family(rng, 2, 2, 6, 9, partite=True)
    outcome = rainbow_via_multilinear(inst, seed=seed)
    return _criterion("algebraic path at N=9 > (t-1)t^r", outcome.found, str(outcome.status.value))

def probability_equality() -> CriterionResult:
    report = probability_probe(2, 3, 7, behrend_from_base_set(7, 3, [0, 1]))
    trivial = probability_probe(2, 3, 7, behrend_from_base_set(7, 3, [0]))
    ok = (report.candidate_count == 686 and report.isolated_count >= 343
          and trivial.candidate_count == 343 and report.passed() and trivial.passed())
    return _criterion("exact candidate probability", ok, str(report))

def span_and_counting() -> CriterionResult:
    suite = span_suite(3, 3)
    counting = counting_probe(3, 3)
    ok = suite.passed() and set(suite.d_histogram) <= {"4", "5"} and counting.passed()
    return _criterion("span dimension and counting bounds", ok, f"{suite}; {counting}")

SUITES: Dict[str, List[Callable[[], CriterionResult]]] = {
    "constructions": [construction_counts, no_rainbow_on_constructions, strong_property_t2,
                      exact_small_value, oracle_completeness, bounds_table],
    "prob": [prob_family_strong],
    "finder": [finder_threshold, finder_never_false],
    "algebraic": [multilinear_tightness, multilinear_guarantee, algebraic_partite],
    "probes": [probability_equality, span_and_counting],
}

def run_suite(name: str, progress: bool = True) -> ReproResult:
    """
    Raises:
        ParameterDomainError: unknown suite name
    """
    if name == "all":
        criteria = [c for suite in SUITES.values() for c in suite]
    elif name in SUITES:
        criteria = SUITES[name]
    else:
        raise ParameterDomainError(f"unknown suite '{name}', expected one of {sorted(SUITES) + ['all']}")
    results = [criterion() for criterion in tqdm(criteria, desc=f"repro {name}", disable=not progress)]
    return ReproResult(suite=name, criteria=results)

if __name__ == "__main__":
    run_suite("probes").show()
