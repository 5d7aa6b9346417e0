"""
Multilinear rainbow search: given t-tuples of vectors with phi nonzero on each tuple,
find t distinct tuples and one element from each keeping phi nonzero. Matchings enter
through vertex vectors in general position, phi being the determinant of their union.
"""

import math
import itertools
from dataclasses import dataclass
from typing import Any, Callable, List, Optional, Sequence, Tuple

import numpy as np

from sources.config import config
from sources.core import Instance, RainbowCertificate, check_certificate, edge_vertices
from sources.errors import (GeneralPositionError, InternalInvariantError,
                            ParameterDomainError)
from sources.fieldmath import det_mod_p, in_span_mod_p
from sources.logger import Logger
from sources.search import SearchBudget, SearchOutcome, SearchStatus

logger = Logger("multilinear.log")

FIELD_PRIME = config.getint('MULTILINEAR', 'field_prime')

@dataclass(frozen=True)
class FieldVector:
    coords: Tuple[int, ...]
    q: int = FIELD_PRIME

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) % self.q for c in self.coords))

    @property
    def dim(self) -> int:
        return len(self.coords)

    @classmethod
    def basis(cls, s: int, dim: int, q: int = FIELD_PRIME) -> "FieldVector":
        return cls(tuple(1 if i == s else 0 for i in range(dim)), q)

    def __add__(self, other: "FieldVector") -> "FieldVector":
        return FieldVector(tuple(a + b for a, b in zip(self.coords, other.coords)), self.q)

    def scale(self, alpha: int) -> "FieldVector":
        return FieldVector(tuple(alpha * a for a in self.coords), self.q)

class PhiOracle:
    """
    A multilinear form on t arguments over F_q.
    """
    def __init__(self, fn: Callable[[Sequence[Any]], int], t: int, q: int = FIELD_PRIME, name: str = "phi"):
        self.fn = fn
        self.t = t
        self.q = q
        self.name = name
        self.evaluations = 0

    def __call__(self, elements: Sequence[Any]) -> int:
        self.evaluations += 1
        return self.fn(elements) % self.q

    def spot_check(self, family: "TupleFamily", probes: int = None, seed: int = None) -> bool:
        """
        Check phi(.., a*u + b*v, ..) = a*phi(.., u, ..) + b*phi(.., v, ..) on random probes.
        """
        probes = probes or config.getint('MULTILINEAR', 'spot_check_probes')
        if not family.linear or family.N == 0:
            raise ParameterDomainError("linearity probes need a non-empty family of FieldVectors")
        rng = np.random.default_rng(seed)
        elements = [x for tup in family.tuples for x in tup]
        for _ in range(probes):
            base = list(family.tuples[int(rng.integers(family.N))])
            i = int(rng.integers(self.t))
            u = elements[int(rng.integers(len(elements)))]
            v = elements[int(rng.integers(len(elements)))]
            a, b = (int(x) for x in rng.integers(0, min(self.q, 1 << 62), size=2))
            mixed = base[:i] + [u.scale(a) + v.scale(b)] + base[i + 1:]
            left = self(mixed)
            right = (a * self(base[:i] + [u] + base[i + 1:]) + b * self(base[:i] + [v] + base[i + 1:])) % self.q
            if left != right:
                return False
        return True

@dataclass(frozen=True)
class TupleFamily:
    """N t-tuples of elements with phi nonzero on each; dim is the ambient dimension used for the threshold."""
    tuples: Tuple[Tuple[Any, ...], ...]
    t: int
    dim: int

    @classmethod
    def create(cls, tuples: Sequence[Sequence[Any]], dim: int, phi: PhiOracle) -> "TupleFamily":
        tuples = tuple(tuple(tup) for tup in tuples)
        for j, tup in enumerate(tuples):
            if len(tup) != phi.t:
                raise ParameterDomainError(f"tuple {j} has {len(tup)} elements, phi takes {phi.t}")
            if phi(tup) == 0:
                raise ParameterDomainError(f"phi vanishes on tuple {j}")
        return cls(tuples=tuples, t=phi.t, dim=dim)

    @property
    def N(self) -> int:
        return len(self.tuples)

    @property
    def linear(self) -> bool:
        return all(isinstance(x, FieldVector) for tup in self.tuples for x in tup)

    @property
    def threshold(self) -> int:
        return (self.t - 1) * self.dim

@dataclass(frozen=True)
class MultilinearResult:
    """
    Args:
        status: Found or Exhausted
        indices: distinct tuple indices j_1..j_t
        choices: position k_i of y_i inside tuple j_i
        rounds: number of pools examined
    """
    status: str
    indices: Tuple[int, ...] = ()
    choices: Tuple[int, ...] = ()
    rounds: int = 0
    evaluations: int = 0

    @property
    def found(self) -> bool:
        return self.status == "Found"

    def values(self, family: TupleFamily) -> List[Any]:
        return [family.tuples[j][k] for j, k in zip(self.indices, self.choices)]

class _EvaluationCap(Exception):
    pass

def multilinear_rainbow_find(fam: TupleFamily, phi: PhiOracle, max_evaluations: int = None) -> MultilinearResult:
    """
    Start from the last tuple of the pool repeated t times and lower its repetitions by
    swapping in elements of unused earlier tuples that keep phi nonzero. When no repetition
    can be lowered, continue on the unused earlier tuples alone.
    """
    t = fam.t
    start = phi.evaluations

    def evaluate(elements) -> int:
        if max_evaluations is not None and phi.evaluations - start >= max_evaluations:
            raise _EvaluationCap()
        return phi(elements)

    pool = list(range(fam.N))
    rounds = 0
    try:
        while len(pool) >= t:
            rounds += 1
            top = pool[-1]
            sel_j = [top] * t
            sel_k = list(range(t))
            y = list(fam.tuples[top])
            while True:
                repeats = [i for i in range(t) if sel_j[i] == top]
                used = set(sel_j)
                free = [j for j in pool[:-1] if j not in used]
                if len(repeats) == 1:
                    return _verified(fam, phi, sel_j, sel_k, rounds, phi.evaluations - start)
                swapped = False
                for i in repeats:
                    hit = _replacement(fam, evaluate, y, i, free)
                    if hit is not None:
                        j, k = hit
                        sel_j[i], sel_k[i], y[i] = j, k, fam.tuples[j][k]
                        swapped = True
                        break
                    if fam.linear:
                        rows = [x.coords for j in free for x in fam.tuples[j]]
                        if in_span_mod_p(y[i].coords, rows, phi.q):
                            raise InternalInvariantError(f"y_{i} lies in the span of the free pool but "
                                                         f"no element keeps {phi.name} nonzero")
                if not swapped:
                    break
            logger.debug(f"pool of {len(pool)} stuck at {len(repeats)} repeats, continuing on {len(free)}")
            pool = free
    except _EvaluationCap:
        logger.warning(f"multilinear search stopped after {max_evaluations} evaluations")
        return MultilinearResult("Exhausted", rounds=rounds, evaluations=phi.evaluations - start)
    return MultilinearResult("Exhausted", rounds=rounds, evaluations=phi.evaluations - start)

def _replacement(fam: TupleFamily, evaluate, y: List[Any], i: int, free: Sequence[int]) -> Optional[Tuple[int, int]]:
    for j in free:
        for k, x in enumerate(fam.tuples[j]):
            if evaluate(y[:i] + [x] + y[i + 1:]) != 0:
                return j, k
    return None

def _verified(fam, phi, sel_j, sel_k, rounds, evaluations) -> MultilinearResult:
    result = MultilinearResult("Found", tuple(sel_j), tuple(sel_k), rounds, evaluations)
    if len(set(sel_j)) != fam.t or phi(result.values(fam)) == 0:
        raise InternalInvariantError(f"multilinear result {result} does not verify")
    return result

def diagonal_phi(t: int, q: int = FIELD_PRIME) -> PhiOracle:
    """phi(x_1..x_t) = sum_s prod_i x_i[s]."""
    def fn(vectors):
        return sum(math.prod(v.coords[s] for v in vectors) for s in range(vectors[0].dim))
    return PhiOracle(fn, t, q, name="diagonal")

def tensor_phi(dim: int, t: int, seed: int = None, q: int = FIELD_PRIME) -> PhiOracle:
    """A random multilinear form given by a dense dim^t coefficient tensor."""
    rng = np.random.default_rng(seed)
    coefficients = {idx: int(rng.integers(0, min(q, 1 << 62)))
                    for idx in itertools.product(range(dim), repeat=t)}

    def fn(vectors):
        return sum(c * math.prod(v.coords[s] for v, s in zip(vectors, idx))
                   for idx, c in coefficients.items())
    return PhiOracle(fn, t, q, name="tensor")

def tightness_family(t: int, dim: int, q: int = FIELD_PRIME) -> Tuple[TupleFamily, PhiOracle]:
    """t-1 copies of (e_s, .., e_s) for each basis vector, with the diagonal form: N = (t-1)*dim and no solution."""
    phi = diagonal_phi(t, q)
    tuples = [tuple([FieldVector.basis(s, dim, q)] * t) for s in range(dim) for _ in range(t - 1)]
    return TupleFamily.create(tuples, dim, phi), phi

def random_family(N: int, t: int, dim: int, phi: PhiOracle, seed: int = None) -> TupleFamily:
    """N random tuples of vectors, resampled until phi is nonzero on each."""
    rng = np.random.default_rng(seed)
    tuples = []
    while len(tuples) < N:
        tup = tuple(FieldVector(tuple(int(c) for c in rng.integers(0, min(phi.q, 1 << 62), size=dim)), phi.q)
                    for _ in range(t))
        if phi(tup) != 0:
            tuples.append(tup)
    return TupleFamily(tuples=tuple(tuples), t=t, dim=dim)

def general_position_vectors(count: int, dim: int, seed=None, q: int = None,
                             max_retries: int = None, eager_check_cap: int = None) -> List[FieldVector]:
    """
    Random vectors of F_q^dim. When C(count, dim) is at most the eager cap every dim-subset is
    checked for a nonzero determinant and failures reseed; above the cap callers check lazily.
    Raises:
        GeneralPositionError: retries exhausted
    """
    q = q or FIELD_PRIME
    max_retries = max_retries or config.getint('MULTILINEAR', 'max_retries')
    eager_check_cap = eager_check_cap or config.getint('MULTILINEAR', 'eager_check_cap')
    if count < dim:
        raise ParameterDomainError(f"need at least dim={dim} vectors, got {count}")
    rng = np.random.default_rng(seed)
    eager = math.comb(count, dim) <= eager_check_cap
    for attempt in range(max_retries):
        raw = rng.integers(0, min(q, 1 << 62), size=(count, dim))
        vectors = [FieldVector(tuple(int(c) for c in row), q) for row in raw]
        if not eager:
            return vectors
        if all(det_mod_p([vectors[i].coords for i in subset], q) != 0
               for subset in itertools.combinations(range(count), dim)):
            return vectors
        logger.debug(f"general position attempt {attempt} failed for {count} vectors in dim {dim} over F_{q}")
    raise GeneralPositionError(f"no general position for {count} vectors in dim {dim} over F_{q} "
                               f"after {max_retries} attempts")

class _DegenerateAssignment(Exception):
    pass

class WedgeOracle(PhiOracle):
    """
    phi(e_1..e_t) for edges: zero when two edges meet, otherwise the determinant of the
    rt x rt matrix of their vertex vectors.
    """
    def __init__(self, vertex_vectors: Sequence[FieldVector], t: int, q: int = FIELD_PRIME):
        self.vertex_vectors = list(vertex_vectors)
        super().__init__(self._wedge, t, q, name="wedge")

    def _wedge(self, edges: Sequence[int]) -> int:
        union = 0
        for e in edges:
            if e & union:
                return 0
            union |= e
        rows = [self.vertex_vectors[v].coords for e in edges for v in edge_vertices(e)]
        value = det_mod_p(rows, self.q)
        if value == 0:
            raise _DegenerateAssignment()
        return value

    def spot_check(self, family: TupleFamily, probes: int = None, seed: int = None) -> bool:
        """phi is nonzero exactly on vertex-disjoint selections, on random selections from the family."""
        probes = probes or config.getint('MULTILINEAR', 'spot_check_probes')
        if family.N == 0:
            return True
        rng = np.random.default_rng(seed)
        for _ in range(probes):
            edges = []
            for _ in range(self.t):
                tup = family.tuples[int(rng.integers(family.N))]
                edges.append(tup[int(rng.integers(len(tup)))])
            disjoint = sum(e.bit_count() for e in edges) == _union(edges).bit_count()
            if (self(edges) != 0) != disjoint:
                return False
        return True

def _union(edges: Sequence[int]) -> int:
    out = 0
    for e in edges:
        out |= e
    return out

def ambient_dimension(inst: Instance) -> int:
    """dim V: C(tr, r) in general, t^r for r-partite instances."""
    if inst.is_partite:
        return inst.t ** inst.r
    return math.comb(inst.t * inst.r, inst.r)

def _vertex_vectors(inst: Instance, rng: np.random.Generator, q: int) -> List[FieldVector]:
    rt = inst.r * inst.t
    if not inst.is_partite:
        return general_position_vectors(inst.num_vertices, rt, rng, q)
    vectors: List[Optional[FieldVector]] = [None] * inst.num_vertices
    for p, part in enumerate(inst.partition):
        block = general_position_vectors(len(part), inst.t, rng, q)
        for v, z in zip(part, block):
            coords = [0] * rt
            coords[p * inst.t:(p + 1) * inst.t] = z.coords
            vectors[v] = FieldVector(tuple(coords), q)
    return vectors

def wedge_phi_matching(inst: Instance, seed: int = None, q: int = None) -> Tuple[WedgeOracle, TupleFamily]:
    """
    Vertex vectors in general position (per part blocks for r-partite instances) and the
    family of the instance's matchings as edge tuples.
    """
    q = q or FIELD_PRIME
    max_retries = config.getint('MULTILINEAR', 'max_retries')
    rng = np.random.default_rng(seed)
    for attempt in range(max_retries):
        oracle = WedgeOracle(_vertex_vectors(inst, rng, q), inst.t, q)
        try:
            family = TupleFamily.create(inst.matchings, ambient_dimension(inst), oracle)
            return oracle, family
        except _DegenerateAssignment:
            logger.debug(f"degenerate vertex vectors on attempt {attempt}, reseeding")
    raise GeneralPositionError(f"vertex vectors degenerate after {max_retries} attempts")

def rainbow_via_multilinear(inst: Instance, budget: SearchBudget = None, seed: int = None) -> SearchOutcome:
    """
    Algebraic path: Found results are certificates, Exhausted proves nothing and maps to Indeterminate.
    """
    budget = budget or SearchBudget.default()
    dim = ambient_dimension(inst)
    stats = {"N": inst.N, "threshold": (inst.t - 1) * dim,
             "threshold_general": (inst.t - 1) * math.comb(inst.t * inst.r, inst.r),
             "threshold_partite": (inst.t - 1) * inst.t ** inst.r}
    if inst.N < inst.t:
        return SearchOutcome(SearchStatus.INDETERMINATE, path="algebraic", stats=stats)
    rng = np.random.default_rng(seed)
    max_retries = config.getint('MULTILINEAR', 'max_retries')
    for attempt in range(max_retries):
        oracle, family = wedge_phi_matching(inst, rng)
        try:
            result = multilinear_rainbow_find(family, oracle, budget.max_nodes)
        except _DegenerateAssignment:
            logger.debug(f"degenerate determinant during search on attempt {attempt}, reseeding")
            continue
        stats.update({"rounds": result.rounds, "evaluations": result.evaluations})
        if not result.found:
            logger.info(f"algebraic path exhausted on N={inst.N} (threshold {stats['threshold']})")
            return SearchOutcome(SearchStatus.INDETERMINATE, nodes_visited=result.evaluations,
                                 path="algebraic", stats=stats)
        cert = RainbowCertificate(tuple(zip(result.indices, result.values(family))))
        if not check_certificate(inst, cert):
            raise InternalInvariantError(f"algebraic path produced an invalid certificate {cert}")
        logger.info(f"algebraic path found {cert}")
        return SearchOutcome(SearchStatus.FOUND, cert, result.evaluations, path="algebraic", stats=stats)
    raise GeneralPositionError(f"vertex vectors degenerate after {max_retries} attempts")

if __name__ == "__main__":
    fam, phi = tightness_family(2, 2)
    print(multilinear_rainbow_find(fam, phi))
