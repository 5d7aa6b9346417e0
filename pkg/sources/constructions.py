"""
Explicit families of size-t matchings with no rainbow matching of size t.

Vertex layout of the r-partite generators: part p owns vertices p*t .. p*t+t-1 and a label
with local index i in part p is vertex p*t + i.
"""

import time
import itertools
from dataclasses import dataclass
from math import comb
from typing import Dict, List, Sequence, Tuple, Union

from sources.config import config
from sources.core import Edge, Instance, edge_mask, validate_instance
from sources.errors import InvalidTupleSystem, ParameterDomainError
from sources.logger import Logger
from sources.search import SearchBudget

logger = Logger("constructions.log")

Symbol = Union[int, str]

@dataclass(frozen=True)
class ShiftTuple:
    """
    An r-tuple over the alphabet {1..t-r} and a1..ar.
    Numeric symbols are ints, the extra symbols are the strings 'a1'..'ar'.
    """
    entries: Tuple[Symbol, ...]

    def shift(self, j: int = 1) -> "ShiftTuple":
        """Cyclic forward shift applied j times: (x1..xr) -> (x2..xr, x1)."""
        j %= len(self.entries)
        return ShiftTuple(self.entries[j:] + self.entries[:j])

    def local_index(self, symbol: Symbol, t: int, r: int) -> int:
        if isinstance(symbol, str):
            return t - r + int(symbol[1:]) - 1
        return symbol - 1

    def to_edge(self, t: int) -> Edge:
        r = len(self.entries)
        return edge_mask(p * t + self.local_index(s, t, r) for p, s in enumerate(self.entries))

def fixed_r_blocks(r: int, t: int) -> List[List[int]]:
    """X_1..X_r: consecutive blocks of {1..t-r} of size (t-r)//r, remainder to the last block."""
    size = (t - r) // r
    blocks = [list(range(k * size + 1, (k + 1) * size + 1)) for k in range(r - 1)]
    blocks.append(list(range((r - 1) * size + 1, t - r + 1)))
    return blocks

def fixed_r_tuples(x: Sequence[int], r: int, t: int) -> List[ShiftTuple]:
    """The t tuples describing the matching M_x."""
    a = tuple(f"a{k + 1}" for k in range(r))
    tuples = [ShiftTuple(a)]
    for j in range(r):
        entries = [a[j]] * r
        entries[j] = x[j]
        tuples.append(ShiftTuple(tuple(entries)))
    base = ShiftTuple(tuple(x))
    tuples.extend(base.shift(j) for j in range(1, r))
    taken = set(x)
    tuples.extend(ShiftTuple((i,) * r) for i in range(1, t - r + 1) if i not in taken)
    return tuples

def symbol_occurrence_check(tuples: Sequence[ShiftTuple], r: int, t: int) -> bool:
    """Every symbol appears exactly once in each position."""
    alphabet = set(range(1, t - r + 1)) | {f"a{k + 1}" for k in range(r)}
    for p in range(r):
        column = [tup.entries[p] for tup in tuples]
        if len(column) != len(alphabet) or set(column) != alphabet:
            return False
    return True

def _partite_layout(r: int, t: int) -> List[List[int]]:
    return [list(range(p * t, (p + 1) * t)) for p in range(r)]

def fixed_r_construction(r: int, t: int) -> Instance:
    """
    r-partite family on tr vertices indexed by x in X_1 x ... x X_r.
    Raises:
        ParameterDomainError: unless r >= 3 and t >= 2r
    """
    if r < 3 or t < 2 * r:
        raise ParameterDomainError(f"fixed-r needs r >= 3 and t >= 2r, got r={r} t={t}")
    blocks = fixed_r_blocks(r, t)
    matchings = []
    for x in itertools.product(*blocks):
        tuples = fixed_r_tuples(x, r, t)
        matchings.append([tup.to_edge(t) for tup in tuples])
    formula = ((t // r) - 1) ** r
    if len(matchings) < t:
        logger.warning(f"fixed-r({r},{t}) has N={len(matchings)} < t, non-existence is vacuous")
    logger.info(f"fixed-r({r},{t}): N={len(matchings)} (formula {formula})")
    return Instance.create(r, t, r * t, matchings, _partite_layout(r, t),
                           {"generator": "fixed-r", "r": r, "t": t, "formula_N": formula})

def lift_uniformity(inst: Instance, target_r: int) -> Instance:
    """
    Append t new vertices; edge i of every matching gains new vertex i.
    Raises:
        ParameterDomainError: unless the input is a family of perfect matchings on t*(target_r-1) vertices
    """
    if target_r != inst.r + 1:
        raise ParameterDomainError(f"lifting goes from r={inst.r} to r={inst.r + 1}, not {target_r}")
    if inst.num_vertices != inst.t * inst.r:
        raise ParameterDomainError(f"input not perfect: {inst.num_vertices} vertices, expected {inst.t * inst.r}")
    report = validate_instance(inst)
    if not report.ok:
        raise ParameterDomainError(f"input not perfect: {report}")
    n = inst.num_vertices
    matchings = [[e | (1 << (n + i)) for i, e in enumerate(m)] for m in inst.matchings]
    partition = None
    if inst.partition is not None:
        partition = [list(p) for p in inst.partition] + [list(range(n, n + inst.t))]
    meta = dict(inst.metadata)
    meta.update({"lifted_from_r": inst.r, "r": target_r})
    return Instance.create(target_r, inst.t, n + inst.t, matchings, partition, meta)

def simple_F_construction(r: int, t: int) -> Instance:
    """
    Non-partite family. Even r: vertices 1..tr-2 plus a, a' (0-based: label x is x-1,
    a is tr-2, a' is tr-1), one matching per choice of r-1 mirror pairs and a side in each.
    Odd r: the even construction for r-1, lifted.
    """
    if r < 2 or t < 2:
        raise ParameterDomainError(f"simple-F needs r >= 2 and t >= 2, got r={r} t={t}")
    if r % 2:
        lifted = lift_uniformity(simple_F_construction(r - 1, t), r)
        meta = dict(lifted.metadata)
        meta.update({"generator": "simple-F", "formula_N": construction_formula("simple-F", r, t)})
        return Instance.create(r, t, lifted.num_vertices, lifted.matchings, None, meta)
    n = t * r
    a, a_prime = n - 2, n - 1
    pairs = [(x, n - 1 - x) for x in range(1, (n - 2) // 2 + 1)]
    matchings = []
    for chosen in itertools.combinations(range(len(pairs)), r - 1):
        rest = [pairs[k] for k in range(len(pairs)) if k not in chosen]
        groups = [rest[g * (r // 2):(g + 1) * (r // 2)] for g in range(t - 2)]
        group_edges = [edge_mask(label - 1 for pair in group for label in pair) for group in groups]
        for sides in itertools.product((0, 1), repeat=r - 1):
            X = [pairs[k][side] for k, side in zip(chosen, sides)]
            mirror = [n - 1 - x for x in X]
            edges = [edge_mask([x - 1 for x in X] + [a]),
                     edge_mask([y - 1 for y in mirror] + [a_prime])] + group_edges
            matchings.append(edges)
    logger.info(f"simple-F({r},{t}): N={len(matchings)}")
    return Instance.create(r, t, n, matchings, None,
                           {"generator": "simple-F", "r": r, "t": t,
                            "formula_N": construction_formula("simple-F", r, t)})

def simple_f_construction(r: int, t: int) -> Instance:
    """
    r-partite family. Odd r: parts 0..r-2 carry labels 1..t, the last part a1, a2, b1..b_{t-2};
    one matching per tuple (x_1..x_{r-1}) with x_1 != x_2, x_3 != x_4, ...
    Even r: the odd construction for r-1, lifted.
    """
    if r < 3 or t < 2:
        raise ParameterDomainError(f"simple-f needs r >= 3 and t >= 2, got r={r} t={t}")
    if r % 2 == 0:
        lifted = lift_uniformity(simple_f_construction(r - 1, t), r)
        meta = dict(lifted.metadata)
        meta.update({"generator": "simple-f", "formula_N": construction_formula("simple-f", r, t)})
        return Instance.create(r, t, lifted.num_vertices, lifted.matchings, lifted.partition, meta)

    def vertex(part: int, local: int) -> int:
        return part * t + local

    last = r - 1
    pair_count = (r - 1) // 2
    matchings = []
    for choice in itertools.product(itertools.permutations(range(1, t + 1), 2), repeat=pair_count):
        first = [vertex(last, 0)]
        second = [vertex(last, 1)]
        rows = [[vertex(last, i + 2)] for i in range(t - 2)]
        for k, (x, y) in enumerate(choice):
            first += [vertex(2 * k, x - 1), vertex(2 * k + 1, y - 1)]
            second += [vertex(2 * k, y - 1), vertex(2 * k + 1, x - 1)]
            unused = [label for label in range(1, t + 1) if label not in (x, y)]
            for i, label in enumerate(unused):
                rows[i] += [vertex(2 * k, label - 1), vertex(2 * k + 1, label - 1)]
        matchings.append([edge_mask(first), edge_mask(second)] + [edge_mask(row) for row in rows])
    logger.info(f"simple-f({r},{t}): N={len(matchings)}")
    return Instance.create(r, t, r * t, matchings, _partite_layout(r, t),
                           {"generator": "simple-f", "r": r, "t": t,
                            "formula_N": construction_formula("simple-f", r, t)})

def t2_complete_construction(r: int) -> Instance:
    """All splits of 2r vertices into two complementary r-sets."""
    if r < 2:
        raise ParameterDomainError(f"t2-complete needs r >= 2, got {r}")
    full = (1 << (2 * r)) - 1
    matchings = []
    for S in itertools.combinations(range(2 * r), r):
        if S[0] != 0:
            break
        e = edge_mask(S)
        matchings.append([e, full & ~e])
    return Instance.create(r, 2, 2 * r, matchings, None,
                           {"generator": "t2-complete", "r": r, "t": 2,
                            "formula_N": construction_formula("t2-complete", r, 2)})

def t2_partite_construction(r: int) -> Instance:
    """Edge/complement pairs of the complete r-partite hypergraph with parts {2p, 2p+1}."""
    if r < 2:
        raise ParameterDomainError(f"t2-partite needs r >= 2, got {r}")
    matchings = []
    for bits in itertools.product((0, 1), repeat=r - 1):
        sides = (0,) + bits
        e = edge_mask(2 * p + side for p, side in enumerate(sides))
        complement = edge_mask(2 * p + 1 - side for p, side in enumerate(sides))
        matchings.append([e, complement])
    partition = [[2 * p, 2 * p + 1] for p in range(r)]
    return Instance.create(r, 2, 2 * r, matchings, partition,
                           {"generator": "t2-partite", "r": r, "t": 2,
                            "formula_N": construction_formula("t2-partite", r, 2)})

@dataclass(frozen=True)
class SumTupleSystem:
    """
    t-tuples (x_{1,j}..x_{t,j}) of 0/1 vectors of length n stored as bitmasks.
    Each tuple sums to the all-ones vector; mixed index choices never do.
    """
    n: int
    t: int
    tuples: Tuple[Tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.tuples)

def _mixed_sum_witness(tuples: Sequence[Tuple[int, ...]], t: int, full: int, new_index: int = None):
    """
    A non-constant index choice (j_1..j_t) whose vectors sum to all-ones.
    With new_index set, only choices that use new_index and some other index are considered.
    """
    N = len(tuples)

    def dfs(i: int, used: int, chosen: List[int]):
        if i == t:
            if used != full or len(set(chosen)) == 1:
                return None
            if new_index is not None and new_index not in chosen:
                return None
            return list(chosen)
        for j in range(N):
            x = tuples[j][i]
            if x & used:
                continue
            chosen.append(j)
            found = dfs(i + 1, used | x, chosen)
            chosen.pop()
            if found:
                return found
        return None

    return dfs(0, 0, [])

def verify_sum_tuples(system: SumTupleSystem) -> None:
    """
    Raises:
        InvalidTupleSystem: naming the first broken condition
    """
    n, t = system.n, system.t
    if t < 1 or n % t:
        raise InvalidTupleSystem(f"n={n} is not divisible by t={t}")
    weight = n // t
    full = (1 << n) - 1
    for j, tup in enumerate(system.tuples):
        if len(tup) != t:
            raise InvalidTupleSystem(f"tuple {j} has {len(tup)} vectors, expected {t}")
        used = 0
        for i, x in enumerate(tup):
            if x & ~full:
                raise InvalidTupleSystem(f"x[{i},{j}] has a coordinate beyond n={n}")
            if x.bit_count() != weight:
                raise InvalidTupleSystem(f"x[{i},{j}] has {x.bit_count()} ones, expected {weight}")
            if x & used:
                raise InvalidTupleSystem(f"tuple {j} does not sum to the all-ones vector")
            used |= x
    witness = _mixed_sum_witness(system.tuples, t, full)
    if witness is not None:
        raise InvalidTupleSystem(f"mixed indices {witness} sum to the all-ones vector")

def _ordered_partitions(n: int, t: int):
    """Ordered splits of range(n) into t blocks of size n/t, lexicographic."""
    size = n // t

    def rec(remaining: Tuple[int, ...], blocks: List[int]):
        if len(blocks) == t:
            yield tuple(blocks)
            return
        for block in itertools.combinations(remaining, size):
            rest = tuple(v for v in remaining if v not in block)
            yield from rec(rest, blocks + [edge_mask(block)])

    yield from rec(tuple(range(n)), [])

def generate_sum_tuples(t: int, n: int, budget: SearchBudget = None) -> SumTupleSystem:
    """
    Greedy system: scan candidate tuples in lexicographic order and keep each one that
    creates no mixed all-ones sum. The result is re-verified exhaustively.
    Args:
        budget: max_nodes caps the number of candidates scanned, max_millis the run time
    """
    if t < 3:
        raise ParameterDomainError(f"sum tuples need t >= 3, got {t}")
    if n <= 0 or n % t:
        raise ParameterDomainError(f"n={n} must be a positive multiple of t={t}")
    budget = budget or SearchBudget(max_nodes=config.getint('CONSTRUCTIONS', 'sum_tuple_max_candidates'),
                                    max_millis=config.getint('CONSTRUCTIONS', 'sum_tuple_max_millis'))
    deadline = time.monotonic() + budget.max_millis / 1000.0
    full = (1 << n) - 1
    tuples: List[Tuple[int, ...]] = []
    scanned = 0
    for candidate in _ordered_partitions(n, t):
        scanned += 1
        if scanned > budget.max_nodes or time.monotonic() > deadline:
            logger.warning(f"generate_sum_tuples(t={t}, n={n}) stopped after {scanned - 1} candidates")
            break
        trial = tuples + [candidate]
        if _mixed_sum_witness(trial, t, full, new_index=len(tuples)) is None:
            tuples.append(candidate)
    system = SumTupleSystem(n=n, t=t, tuples=tuple(tuples))
    verify_sum_tuples(system)
    logger.info(f"generate_sum_tuples(t={t}, n={n}): {system.size} tuples from {scanned} candidates")
    return system

def tuples_to_matchings_F(system: SumTupleSystem) -> Instance:
    """
    Matching j consists of the edges {a_i} + X_{i,j}; vertices 0..n-1 are the coordinates,
    n..n+t-1 are a_1..a_t.
    """
    verify_sum_tuples(system)
    n, t = system.n, system.t
    r = n // t + 1
    matchings = [[x | (1 << (n + i)) for i, x in enumerate(tup)] for tup in system.tuples]
    return Instance.create(r, t, n + t, matchings, None,
                           {"generator": "sum-tuple-F", "r": r, "t": t, "n": n})

def construction_formula(name: str, r: int, t: int) -> int:
    """Number of matchings each generator is proven to produce."""
    if name == "fixed-r":
        return (t // r - 1) ** r
    if name == "simple-F":
        if r % 2 == 0:
            return comb((t * r - 2) // 2, r - 1) * 2 ** (r - 1)
        return comb((t * (r - 1) - 2) // 2, r - 2) * 2 ** (r - 2)
    if name == "simple-f":
        exponent = (r - 1) // 2 if r % 2 else (r - 2) // 2
        return (t * (t - 1)) ** exponent
    if name == "t2-complete":
        return comb(2 * r, r) // 2
    if name == "t2-partite":
        return 2 ** (r - 1)
    raise ParameterDomainError(f"no formula for generator '{name}'")

GENERATORS: Dict[str, object] = {
    "fixed-r": fixed_r_construction,
    "simple-F": simple_F_construction,
    "simple-f": simple_f_construction,
    "t2-complete": lambda r, t=2: t2_complete_construction(r),
    "t2-partite": lambda r, t=2: t2_partite_construction(r),
}

if __name__ == "__main__":
    print(fixed_r_construction(3, 12).N)
    print(simple_F_construction(2, 3).N, simple_f_construction(3, 3).N)
