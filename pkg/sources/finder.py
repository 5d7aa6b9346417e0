"""
Constructive rainbow finder: spread decomposition of the edge family, the one-dollar color
selection, a Hall assignment of the residual edges and greedy augmentation through the
extracted petal families. Falls back to the exhaustive search when the best effort fails.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_bipartite_matching

from sources.core import Edge, Instance, RainbowCertificate, check_certificate, edge_vertices
from sources.errors import BestEffortFailed, InternalInvariantError
from sources.logger import Logger
from sources.search import SearchBudget, SearchOutcome, SearchStatus, find_rainbow
from sources.utility import exact_str

logger = Logger("finder.log")

@dataclass(frozen=True)
class SpreadStep:
    core: int
    petals: Tuple[Edge, ...]
    family_size: int

    @property
    def core_size(self) -> int:
        return self.core.bit_count()

@dataclass(frozen=True)
class SpreadDecomposition:
    steps: Tuple[SpreadStep, ...]
    residual: Tuple[Edge, ...]
    base: int
    r: int

    @property
    def threshold(self) -> int:
        return self.base ** self.r

    def step_of(self) -> Dict[Edge, int]:
        """Index of the step whose petal family holds each extracted edge."""
        return {e: k for k, step in enumerate(self.steps) for e in step.petals}

    def stats(self) -> Dict[str, int]:
        return {
            "steps": len(self.steps),
            "residual": len(self.residual),
            "extracted": sum(len(s.petals) for s in self.steps),
            "max_core": max((s.core_size for s in self.steps), default=0),
        }

def is_spread(petal_count: int, family_size: int, base: int, core_size: int) -> bool:
    """|F(S)| >= |F| / base^|S| in integers."""
    return petal_count * base ** core_size >= family_size

def _containing(family: Sequence[Edge], core: int) -> List[Edge]:
    return [e for e in family if e & core == core]

def _maximal_core(family: Sequence[Edge], base: int) -> int:
    """Greedy extension from the empty core; each step takes the largest spread-preserving petal, lowest vertex on ties."""
    core, size = 0, 0
    petals = list(family)
    while True:
        counts: Dict[int, int] = {}
        for e in petals:
            for v in edge_vertices(e & ~core):
                counts[v] = counts.get(v, 0) + 1
        best: Optional[int] = None
        for v in sorted(counts):
            if not is_spread(counts[v], len(family), base, size + 1):
                continue
            if best is None or counts[v] > counts[best]:
                best = v
        if best is None:
            return core
        core |= 1 << best
        size += 1
        petals = _containing(petals, core)

def spread_decompose(inst: Instance) -> SpreadDecomposition:
    """
    Peel spread petal families off the edge family until at most (tr+t)^r edges remain.
    """
    base = inst.t * inst.r + inst.t
    threshold = base ** inst.r
    family = inst.distinct_edges()
    steps: List[SpreadStep] = []
    while len(family) > threshold:
        core = _maximal_core(family, base)
        petals = _containing(family, core)
        if not petals:
            raise InternalInvariantError(f"empty petal family for core {list(edge_vertices(core))}")
        steps.append(SpreadStep(core=core, petals=tuple(petals), family_size=len(family)))
        family = [e for e in family if e & core != core]
    logger.info(f"spread_decompose: {len(steps)} steps, residual {len(family)} of threshold {threshold}")
    return SpreadDecomposition(steps=tuple(steps), residual=tuple(family), base=base, r=inst.r)

@dataclass(frozen=True)
class DollarReport:
    """
    Money received by each color, the chosen color and the edges of its matching with
    the residual ones first.
    """
    money: Tuple[Fraction, ...]
    color: int
    m: int
    edges: Tuple[Edge, ...]

    def jsonify(self) -> dict:
        return {
            "color": self.color,
            "m": self.m,
            "money": [exact_str(x) for x in self.money],
            "edges": [list(edge_vertices(e)) for e in self.edges],
        }

def dollar_select(residual: Sequence[Edge], inst: Instance) -> DollarReport:
    """
    Every residual edge pays one dollar in equal shares to the colors holding it.
    Returns the first color receiving at most one dollar.
    Raises:
        BestEffortFailed: every color received more than a dollar (only possible when |residual| > N)
    """
    colors_of = inst.colors_of_edge()
    money = [Fraction(0)] * inst.N
    for e in residual:
        share = Fraction(1, len(colors_of[e]))
        for j in colors_of[e]:
            money[j] += share
    if sum(money, Fraction(0)) != len(residual):
        raise InternalInvariantError("dollar total differs from the residual size")
    color = next((j for j, amount in enumerate(money) if amount <= 1), None)
    if color is None:
        raise BestEffortFailed(0, stage="dollar")
    in_residual = set(residual)
    matching = inst.matchings[color]
    head = [e for e in matching if e in in_residual]
    tail = [e for e in matching if e not in in_residual]
    return DollarReport(money=tuple(money), color=color, m=len(head), edges=tuple(head + tail))

def hall_assign(report: DollarReport, inst: Instance) -> List[int]:
    """
    Distinct colors i_1..i_m with e*_h in M_{i_h}, by maximum bipartite matching on the
    edge-color incidence graph.
    """
    if report.m == 0:
        return []
    colors_of = inst.colors_of_edge()
    rows, cols = [], []
    for h, e in enumerate(report.edges[:report.m]):
        for j in colors_of[e]:
            rows.append(h)
            cols.append(j)
    graph = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(report.m, inst.N))
    matched = maximum_bipartite_matching(graph, perm_type='column')
    if (matched < 0).any():
        raise InternalInvariantError(f"no Hall assignment for color {report.color} "
                                     f"with money {exact_str(report.money[report.color])}")
    return [int(j) for j in matched]

def augment(report: DollarReport, assignment: Sequence[int], decomposition: SpreadDecomposition,
            inst: Instance) -> RainbowCertificate:
    """
    Replace e*_{m+1}..e*_t one at a time by a petal edge of the step that extracted it,
    disjoint from everything else chosen and carrying an unused color. First fit.
    Raises:
        BestEffortFailed: step h found no replacement edge
    """
    colors_of = inst.colors_of_edge()
    step_of = decomposition.step_of()
    picks: List[Tuple[int, Edge]] = list(zip(assignment, report.edges[:report.m]))
    used_colors = set(assignment)
    chosen = 0
    for _, e in picks:
        chosen |= e
    for h in range(report.m, inst.t):
        target = report.edges[h]
        ahead = 0
        for e in report.edges[h + 1:]:
            ahead |= e
        if target not in step_of:
            raise InternalInvariantError(f"edge {list(edge_vertices(target))} is neither residual nor extracted")
        replacement = None
        for f in decomposition.steps[step_of[target]].petals:
            if f & (chosen | ahead):
                continue
            color = next((c for c in colors_of[f] if c not in used_colors), None)
            if color is not None:
                replacement = (color, f)
                break
        if replacement is None:
            raise BestEffortFailed(h + 1)
        picks.append(replacement)
        used_colors.add(replacement[0])
        chosen |= replacement[1]
    cert = RainbowCertificate(tuple(picks))
    if not check_certificate(inst, cert):
        raise InternalInvariantError(f"augmentation produced an invalid certificate {cert}")
    return cert

def find_rainbow_constructive(inst: Instance, budget: SearchBudget = None) -> SearchOutcome:
    """
    Run the constructive pipeline, falling back to the exhaustive search on best-effort failure.
    The outcome path is "constructive" or "fallback".
    """
    base = inst.t * inst.r + inst.t
    stats = {"threshold": base ** inst.r, "N": inst.N, "meets_threshold": int(inst.N >= base ** inst.r)}
    if inst.N < inst.t:
        outcome = find_rainbow(inst, inst.t, budget)
        outcome.path = "fallback"
        outcome.stats = stats
        return outcome
    decomposition = spread_decompose(inst)
    stats.update(decomposition.stats())
    try:
        report = dollar_select(decomposition.residual, inst)
        stats.update({"color": report.color, "m": report.m})
        assignment = hall_assign(report, inst)
        cert = augment(report, assignment, decomposition, inst)
    except BestEffortFailed as e:
        logger.info(f"constructive path failed at {e.stage} step {e.h} (N={inst.N}, threshold {stats['threshold']})")
        stats["failed_step"] = e.h
        outcome = find_rainbow(inst, inst.t, budget)
        outcome.path = "fallback"
        outcome.stats = stats
        return outcome
    logger.info(f"constructive path found {cert}")
    return SearchOutcome(SearchStatus.FOUND, cert, 0, path="constructive", stats=stats)

if __name__ == "__main__":
    from sources.constructions import simple_F_construction
    print(find_rainbow_constructive(simple_F_construction(2, 3)))
