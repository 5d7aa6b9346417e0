"""
Exhaustive rainbow-matching search, the strong-property check and exact small-value search.

Two DFS regimes:
    - perfect regime (num_vertices == r*t and s == t): branch on the lowest uncovered vertex,
      colors are attached by an incrementally maintained system of distinct representatives.
    - otherwise: branch on the open color group with the fewest compatible edges.
Identical matchings are grouped so permutations of equal colors are never explored twice.
"""

import json
import time
import threading
import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from typing import Dict, List, Optional, Tuple

from sources.config import config
from sources.core import (Edge, Instance, RainbowCertificate, check_certificate,
                          edge_mask, edge_vertices, encode, lowest_vertex)
from sources.errors import BudgetExceeded, InternalInvariantError, ParameterDomainError
from sources.logger import Logger
from sources.schemas import ExactValueReport, SearchReport

logger = Logger("search.log")

class SearchStatus(str, Enum):
    FOUND = "Found"
    NONE_EXISTS = "NoneExists"
    INDETERMINATE = "Indeterminate"

class StrongStatus(str, Enum):
    HOLDS = "Holds"
    FAILS = "Fails"
    INDETERMINATE = "Indeterminate"

@dataclass(frozen=True)
class SearchBudget:
    max_nodes: int
    max_millis: int
    threads: int = 1

    def __post_init__(self):
        if self.max_nodes <= 0 or self.max_millis <= 0 or self.threads <= 0:
            raise ParameterDomainError(f"budget caps must be positive: {self}")

    @classmethod
    def default(cls) -> "SearchBudget":
        return cls(max_nodes=config.getint('SEARCH', 'max_nodes'),
                   max_millis=config.getint('SEARCH', 'max_millis'),
                   threads=config.getint('SEARCH', 'threads'))

    def override(self, max_nodes: int = None, max_millis: int = None, threads: int = None) -> "SearchBudget":
        return replace(self,
                       max_nodes=max_nodes or self.max_nodes,
                       max_millis=max_millis or self.max_millis,
                       threads=threads or self.threads)

class SearchOutcome:
    """
    Result of a rainbow search.
    """
    def __init__(self, status: SearchStatus, certificate: Optional[RainbowCertificate] = None,
                 nodes_visited: int = 0, path: str = None, stats: Dict[str, int] = None):
        """
        Args:
            status: Found, NoneExists or Indeterminate
            certificate: the witness when status is Found
            nodes_visited: DFS nodes charged to the budget
            path: which engine produced the answer, if several were tried
            stats: engine specific counters for reports
        """
        self.status = status
        self.certificate = certificate
        self.nodes_visited = nodes_visited
        self.path = path
        self.stats = stats

    @property
    def found(self) -> bool:
        return self.status == SearchStatus.FOUND

    def report(self) -> SearchReport:
        return SearchReport(status=self.status.value,
                            certificate=self.certificate.jsonify() if self.certificate else None,
                            nodes_visited=self.nodes_visited,
                            path=self.path,
                            decomposition_stats=self.stats)

    def jsonify(self):
        return self.report().jsonify()

    def __str__(self):
        return str(self.report())

class StrongOutcome:
    def __init__(self, status: StrongStatus, witness: Optional[List[Tuple[int, Edge]]] = None,
                 nodes_visited: int = 0):
        self.status = status
        self.witness = witness
        self.nodes_visited = nodes_visited

    def jsonify(self):
        data = {"status": self.status.value, "nodes_visited": self.nodes_visited}
        if self.witness is not None:
            data["witness"] = [{"color": c, "edge": list(edge_vertices(e))} for c, e in self.witness]
        return data

    def __str__(self):
        text = f"Strong property: {self.status.value} ({self.nodes_visited} nodes)"
        if self.witness:
            text += "\nWitness: " + " ".join(f"{c}:{list(edge_vertices(e))}" for c, e in self.witness)
        return text

class _Cancelled(Exception):
    pass

class BudgetClock:
    """Node and wall-clock budget shared by every worker of one search."""
    def __init__(self, budget: SearchBudget):
        self.budget = budget
        self.deadline = time.monotonic() + budget.max_millis / 1000.0
        self.nodes = 0
        self.lock = threading.Lock()
        self.stop = threading.Event()
        self.batch = 1 if budget.max_nodes < 100000 else 256

    def charge(self, n: int) -> None:
        with self.lock:
            self.nodes += n
            total = self.nodes
        if total > self.budget.max_nodes or time.monotonic() > self.deadline:
            raise BudgetExceeded(f"budget exhausted after {total} nodes")
        if self.stop.is_set():
            raise _Cancelled()

class _Ticker:
    """Per-worker node counter flushed into the shared clock."""
    def __init__(self, clock: BudgetClock):
        self.clock = clock
        self.pending = 0

    def tick(self) -> None:
        self.pending += 1
        if self.pending >= self.clock.batch:
            self.flush()

    def flush(self) -> None:
        pending, self.pending = self.pending, 0
        self.clock.charge(pending)

class RainbowSearch:
    """
    Precomputed view of an instance for repeated rainbow searches.
    """
    def __init__(self, inst: Instance):
        self.inst = inst
        self.groups = inst.color_groups()
        self.group_edges = [inst.matchings[members[0]] for members in self.groups]
        self.caps = [len(members) for members in self.groups]
        self.edge_groups: Dict[Edge, List[int]] = {}
        for g, edges in enumerate(self.group_edges):
            for e in edges:
                self.edge_groups.setdefault(e, []).append(g)
        self.by_vertex: List[List[Edge]] = [[] for _ in range(max(inst.num_vertices, 0))]
        for e in self.edge_groups:
            for v in edge_vertices(e):
                self.by_vertex[v].append(e)

    def _place(self, edges: List[Edge], assign: List[int]) -> Optional[List[int]]:
        """Extend the color assignment of edges[:-1] to edges by one augmenting path."""
        assign = assign + [-1]
        holders: Dict[int, List[int]] = {}
        for i, g in enumerate(assign[:-1]):
            holders.setdefault(g, []).append(i)

        def try_place(i: int, visited: set) -> bool:
            for g in self.edge_groups[edges[i]]:
                if g in visited:
                    continue
                visited.add(g)
                held = holders.setdefault(g, [])
                if len(held) < self.caps[g]:
                    held.append(i)
                    assign[i] = g
                    return True
                for k in list(held):
                    if try_place(k, visited):
                        held.remove(k)
                        held.append(i)
                        assign[i] = g
                        return True
            return False

        if try_place(len(edges) - 1, set()):
            return assign
        return None

    def _certificate(self, picks: List[Tuple[int, Edge]]) -> RainbowCertificate:
        """Map (group, edge) picks to concrete colors, lowest members first."""
        used = [0] * len(self.groups)
        out = []
        for g, e in picks:
            out.append((self.groups[g][used[g]], e))
            used[g] += 1
        return RainbowCertificate(tuple(sorted(out)))

    def _vertex_dfs(self, s: int, covered: int, edges: List[Edge], assign: List[int],
                    ticker: _Ticker) -> Optional[List[Tuple[int, Edge]]]:
        if len(edges) == s:
            return list(zip(assign, edges))
        free = self.inst.full_mask & ~covered
        if not free:
            return None
        v = lowest_vertex(free)
        for e in self.by_vertex[v]:
            if e & covered:
                continue
            ticker.tick()
            extended = self._place(edges + [e], assign)
            if extended is None:
                continue
            found = self._vertex_dfs(s, covered | e, edges + [e], extended, ticker)
            if found:
                return found
        return None

    def _color_dfs(self, s: int, used: int, caps: List[int], last: List[int], closed: List[bool],
                   picks: List[Tuple[int, Edge]], ticker: _Ticker) -> Optional[List[Tuple[int, Edge]]]:
        if len(picks) == s:
            return list(picks)
        need = s - len(picks)
        free_vertices = (self.inst.full_mask & ~used).bit_count()
        if free_vertices // max(self.inst.r, 1) < need:
            return None
        closed_here = []
        try:
            while True:
                best, best_compat, total = None, None, 0
                for g, edges in enumerate(self.group_edges):
                    if closed[g] or caps[g] == 0:
                        continue
                    compat = [i for i in range(last[g] + 1, len(edges)) if not edges[i] & used]
                    if not compat:
                        continue
                    total += min(caps[g], len(compat))
                    if best is None or len(compat) < len(best_compat):
                        best, best_compat = g, compat
                if best is None or total < need:
                    return None
                g = best
                for i in best_compat:
                    ticker.tick()
                    e = self.group_edges[g][i]
                    prev = last[g]
                    caps[g] -= 1
                    last[g] = i
                    picks.append((g, e))
                    found = self._color_dfs(s, used | e, caps, last, closed, picks, ticker)
                    picks.pop()
                    last[g] = prev
                    caps[g] += 1
                    if found:
                        return found
                closed[g] = True
                closed_here.append(g)
        finally:
            for g in closed_here:
                closed[g] = False

    def _root_tasks(self, s: int) -> List[Tuple[str, tuple]]:
        """Split the search into independent top-level subtrees."""
        if self.inst.perfect_regime() and s == self.inst.t and self.inst.num_vertices > 0:
            tasks = []
            for e in self.by_vertex[0]:
                assign = self._place([e], [])
                if assign is not None:
                    tasks.append(("vertex", (e, [e], assign)))
            return tasks
        G = len(self.groups)
        caps, last, closed = list(self.caps), [-1] * G, [False] * G
        best, best_compat = None, None
        for g, edges in enumerate(self.group_edges):
            if len(edges) and (best is None or len(edges) < len(best_compat)):
                best, best_compat = g, list(range(len(edges)))
        if best is None:
            return []
        tasks = []
        for i in best_compat:
            c, l = list(caps), list(last)
            c[best] -= 1
            l[best] = i
            tasks.append(("color", (self.group_edges[best][i], c, l, list(closed),
                                    [(best, self.group_edges[best][i])])))
        cl = list(closed)
        cl[best] = True
        tasks.append(("color", (0, list(caps), list(last), cl, [])))
        return tasks

    def _run_task(self, s: int, task: Tuple[str, tuple], clock: BudgetClock):
        ticker = _Ticker(clock)
        kind, state = task
        try:
            if kind == "vertex":
                covered, edges, assign = state
                return self._vertex_dfs(s, covered, edges, assign, ticker)
            used, caps, last, closed, picks = state
            return self._color_dfs(s, used, caps, last, closed, picks, ticker)
        finally:
            try:
                ticker.flush()
            except (BudgetExceeded, _Cancelled):
                pass

    def run(self, s: int, clock: BudgetClock) -> Tuple[SearchStatus, Optional[RainbowCertificate]]:
        """Search with an existing clock. Raises BudgetExceeded."""
        inst = self.inst
        if s < 1 or s > inst.t:
            raise ParameterDomainError(f"rainbow size must lie in [1, {inst.t}], got {s}")
        if inst.N < s:
            return SearchStatus.NONE_EXISTS, None
        ticker = _Ticker(clock)
        if clock.budget.threads <= 1:
            try:
                if inst.perfect_regime() and s == inst.t:
                    picks = self._vertex_dfs(s, 0, [], [], ticker)
                else:
                    G = len(self.groups)
                    picks = self._color_dfs(s, 0, list(self.caps), [-1] * G, [False] * G, [], ticker)
            finally:
                ticker.flush()
        else:
            picks = self._run_parallel(s, clock)
        if picks is None:
            return SearchStatus.NONE_EXISTS, None
        return SearchStatus.FOUND, self._certificate(picks)

    def _run_parallel(self, s: int, clock: BudgetClock):
        tasks = self._root_tasks(s)
        found, exhausted = None, False
        with ThreadPoolExecutor(max_workers=clock.budget.threads) as pool:
            futures = [pool.submit(self._run_task, s, task, clock) for task in tasks]
            for future in futures:
                try:
                    result = future.result()
                except BudgetExceeded:
                    exhausted = True
                    clock.stop.set()
                    continue
                except _Cancelled:
                    continue
                if result and found is None:
                    found = result
                    clock.stop.set()
        if found is not None:
            return found
        if exhausted:
            raise BudgetExceeded("budget exhausted in a parallel worker")
        return None

def find_rainbow(inst: Instance, s: int, budget: SearchBudget = None) -> SearchOutcome:
    """
    Exhaustive search for a rainbow matching of size s.
    Args:
        inst: a valid instance
        s: rainbow size, 1 <= s <= t
        budget: node/time caps and worker count
    Returns:
        SearchOutcome: Found with a verified certificate, NoneExists, or Indeterminate
    """
    budget = budget or SearchBudget.default()
    clock = BudgetClock(budget)
    try:
        status, cert = RainbowSearch(inst).run(s, clock)
    except BudgetExceeded as e:
        logger.warning(f"find_rainbow(s={s}) on N={inst.N}: {e}")
        return SearchOutcome(SearchStatus.INDETERMINATE, nodes_visited=clock.nodes, path="exhaustive")
    if cert is not None and not check_certificate(inst, cert):
        raise InternalInvariantError(f"search produced an invalid certificate {cert}")
    logger.info(f"find_rainbow(s={s}) on N={inst.N}: {status.value} after {clock.nodes} nodes")
    return SearchOutcome(status, cert, clock.nodes, path="exhaustive")

def naive_rainbow_exists(inst: Instance, s: int) -> Optional[RainbowCertificate]:
    """Reference enumerator over every color subset and edge choice."""
    for colors in itertools.combinations(range(inst.N), s):
        for edges in itertools.product(*(inst.matchings[c] for c in colors)):
            used = 0
            ok = True
            for e in edges:
                if e & used:
                    ok = False
                    break
                used |= e
            if ok:
                return RainbowCertificate(tuple(zip(colors, edges)))
    return None

def max_rainbow_size(inst: Instance, budget: SearchBudget = None) -> Tuple[int, Optional[RainbowCertificate], bool]:
    """
    Largest s admitting a rainbow matching.
    Returns:
        tuple: (size, certificate of that size, exact) where exact is False if the budget ran out
    """
    best, best_cert = 0, None
    for s in range(1, inst.t + 1):
        outcome = find_rainbow(inst, s, budget)
        if outcome.status == SearchStatus.FOUND:
            best, best_cert = s, outcome.certificate
        elif outcome.status == SearchStatus.NONE_EXISTS:
            return best, best_cert, True
        else:
            return best, best_cert, False
    return best, best_cert, True

def _strong_witness(edges: List[Edge], colors_of: Dict[Edge, List[int]]) -> Optional[List[Tuple[int, Edge]]]:
    """Color choice that is not constant, if one exists for these disjoint edges."""
    choice = [colors_of[e][0] for e in edges]
    if len(set(choice)) > 1:
        return list(zip(choice, edges))
    for i, e in enumerate(edges):
        for c in colors_of[e]:
            if c != choice[0]:
                choice[i] = c
                return list(zip(choice, edges))
    return None

def check_strong_property(inst: Instance, budget: SearchBudget = None) -> StrongOutcome:
    """
    Decide whether every t pairwise disjoint edges of the union come from one single matching.
    """
    budget = budget or SearchBudget.default()
    clock = BudgetClock(budget)
    ticker = _Ticker(clock)
    colors_of = inst.colors_of_edge()
    edges = list(colors_of)
    t = inst.t

    by_vertex: List[List[Edge]] = [[] for _ in range(max(inst.num_vertices, 0))]
    for e in edges:
        for v in edge_vertices(e):
            by_vertex[v].append(e)

    def vertex_dfs(covered: int, chosen: List[Edge]):
        if len(chosen) == t:
            return _strong_witness(chosen, colors_of)
        free = inst.full_mask & ~covered
        if not free:
            return None
        v = lowest_vertex(free)
        for e in by_vertex[v]:
            if e & covered:
                continue
            ticker.tick()
            chosen.append(e)
            found = vertex_dfs(covered | e, chosen)
            chosen.pop()
            if found:
                return found
        return None

    def combination_dfs(start: int, covered: int, chosen: List[Edge]):
        if len(chosen) == t:
            return _strong_witness(chosen, colors_of)
        need = t - len(chosen)
        for i in range(start, len(edges) - need + 1):
            e = edges[i]
            if e & covered:
                continue
            ticker.tick()
            chosen.append(e)
            found = combination_dfs(i + 1, covered | e, chosen)
            chosen.pop()
            if found:
                return found
        return None

    try:
        if inst.perfect_regime() and inst.num_vertices > 0:
            witness = vertex_dfs(0, [])
        else:
            witness = combination_dfs(0, 0, [])
        ticker.flush()
    except BudgetExceeded as e:
        logger.warning(f"check_strong_property on N={inst.N}: {e}")
        return StrongOutcome(StrongStatus.INDETERMINATE, nodes_visited=clock.nodes)
    if witness is None:
        return StrongOutcome(StrongStatus.HOLDS, nodes_visited=clock.nodes)
    return StrongOutcome(StrongStatus.FAILS, witness=witness, nodes_visited=clock.nodes)

def enumerate_matchings(r: int, t: int, universe: int, partite: bool) -> Tuple[List[Tuple[Edge, ...]], Optional[List[List[int]]]]:
    """
    All size-t matchings on [0, universe), canonical and in lexicographic order.
    Partite universes are split into r consecutive parts of equal size.
    """
    partition = None
    if partite:
        if universe % r:
            raise ParameterDomainError(f"partite universe {universe} is not divisible by r={r}")
        size = universe // r
        partition = [list(range(p * size, (p + 1) * size)) for p in range(r)]
        edges = [edge_mask(vs) for vs in itertools.product(*partition)]
    else:
        edges = [edge_mask(vs) for vs in itertools.combinations(range(universe), r)]
    edges.sort(key=edge_vertices)
    matchings = []

    def extend(start: int, used: int, chosen: List[Edge]):
        if len(chosen) == t:
            matchings.append(tuple(chosen))
            return
        for i in range(start, len(edges)):
            if not edges[i] & used:
                chosen.append(edges[i])
                extend(i + 1, used | edges[i], chosen)
                chosen.pop()

    extend(0, 0, [])
    return matchings, partition

class ExactValueResult:
    """
    Outcome of exact_value_search.
    """
    def __init__(self, complete: bool, n_max: int, witness: Instance, nodes_visited: int, distinct: int,
                 r: int, t: int, universe: int, partite: bool, multiplicity_cap: int):
        self.complete = complete
        self.n_max = n_max
        self.witness = witness
        self.nodes_visited = nodes_visited
        self.distinct = distinct
        self.params = (r, t, universe, partite, multiplicity_cap)

    def report(self) -> ExactValueReport:
        r, t, universe, partite, cap = self.params
        return ExactValueReport(r=r, t=t, universe=universe, partite=partite, multiplicity_cap=cap,
                                status="Complete" if self.complete else "Indeterminate",
                                n_max=self.n_max, distinct_matchings=self.distinct,
                                nodes_visited=self.nodes_visited,
                                witness=json.loads(encode(self.witness)))

    def __iter__(self):
        return iter((self.n_max, self.witness))

    def __str__(self):
        return str(self.report())

def exact_value_search(r: int, t: int, universe: int, partite: bool, multiplicity_cap: int = 1,
                       budget: SearchBudget = None) -> ExactValueResult:
    """
    Largest multiset of size-t matchings on a fixed universe with no rainbow matching of size t.
    Branch and bound over the lexicographically ordered pool; adding a matching can only create
    rainbows, so a family that already has one is never extended.
    """
    if universe < r * t:
        raise ParameterDomainError(f"universe {universe} is smaller than r*t = {r * t}")
    if not 1 <= multiplicity_cap <= max(t - 1, 1):
        raise ParameterDomainError(f"multiplicity cap must lie in [1, t-1], got {multiplicity_cap}")
    budget = budget or SearchBudget.default()
    budget = replace(budget, threads=1)
    pool, partition = enumerate_matchings(r, t, universe, partite)
    clock = BudgetClock(budget)
    ticker = _Ticker(clock)
    meta = {"generator": "exact-value-search", "r": r, "t": t, "universe": universe,
            "partite": partite, "multiplicity_cap": multiplicity_cap}

    def make(family):
        return Instance.create(r, t, universe, family, partition, meta)

    best = {"n": 0, "family": []}

    def has_rainbow(family) -> bool:
        status, _ = RainbowSearch(make(family)).run(t, clock)
        return status == SearchStatus.FOUND

    def dfs(start: int, family: list):
        if len(family) > best["n"]:
            best["n"], best["family"] = len(family), list(family)
        for i in range(start, len(pool)):
            if len(family) + multiplicity_cap * (len(pool) - i) <= best["n"]:
                return
            for mult in range(1, multiplicity_cap + 1):
                ticker.tick()
                extended = family + [pool[i]] * mult
                if has_rainbow(extended):
                    break
                dfs(i + 1, extended)

    complete = True
    try:
        dfs(0, [])
        ticker.flush()
    except BudgetExceeded as e:
        complete = False
        logger.warning(f"exact_value_search stopped early: {e}; best lower bound {best['n']}")
    logger.info(f"exact_value_search r={r} t={t} universe={universe} partite={partite}: "
                f"N_max={'=' if complete else '>='}{best['n']}")
    return ExactValueResult(complete, best["n"], make(best["family"]), clock.nodes, len(pool),
                            r, t, universe, partite, multiplicity_cap)

if __name__ == "__main__":
    from sources.core import k22_instance
    print(find_rainbow(k22_instance(), 2))
    print(exact_value_search(2, 2, 4, True))
