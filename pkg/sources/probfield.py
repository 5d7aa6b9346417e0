"""
Probabilistic r-partite construction over F_P and toy-scale diagnostics of its proof.

Vertex layout: part p owns vertices p*t .. p*t+t-1. A transversal z picks one local index l_p
per part and has lattice index sum(l_p * t**p), so z contains vertex i of part 0 iff index % t == i.
"""

import math
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components
from sympy import Expr, Integer, exp, integer_nthroot, isprime, log, nextprime, sqrt, sstr
from tqdm import tqdm

from sources.config import config
from sources.core import Instance, edge_vertices
from sources.errors import (BudgetExceeded, InternalInvariantError,
                            ParameterDomainError, PrimeCapExceeded)
from sources.fieldmath import rank_mod_p
from sources.logger import Logger
from sources.schemas import (BehrendReport, CountEntry, CountingProbeReport, FamilyReport,
                             ProbabilityProbeReport, SpanSuiteReport)
from sources.utility import exact_str

logger = Logger("probfield.log")

@dataclass(frozen=True)
class PrimeModulus:
    P: int
    provenance: str
    lower: Optional[int] = None
    upper: Optional[int] = None

def paper_prime_range(r: int, t: int) -> Tuple[int, int]:
    """
    Integer range [ceil(2 t^(t+1) (t-1)!^((r-1)/(t-2))), floor(4 t^(t+1) (t-1)!^((r-1)/(t-2)))].
    The fractional power is handled by taking exact (t-2)-th roots.
    """
    if t < 3:
        raise ParameterDomainError(f"the prime range needs t >= 3, got {t}")
    k = t - 2
    base = math.factorial(t - 1) ** (r - 1)
    low_power = (2 * t ** (t + 1)) ** k * base
    root, exact = integer_nthroot(low_power, k)
    lower = int(root) if exact else int(root) + 1
    upper = int(integer_nthroot((4 * t ** (t + 1)) ** k * base, k)[0])
    return lower, upper

def choose_prime(r: int, t: int, mode: str = "paper", P: int = None, cap: int = None) -> PrimeModulus:
    """
    Pick the field size.
    Args:
        mode: "paper" for the smallest prime in the admissible range, "relaxed" to accept P
        P: the user prime in relaxed mode
        cap: refuse paper-range primes above this value
    Raises:
        PrimeCapExceeded: the paper-range prime is above the cap
        ParameterDomainError: t < 3, composite P, or P < t
    """
    if t < 3:
        raise ParameterDomainError(f"the field construction needs t >= 3, got {t}")
    cap = cap or config.getint('PROBFIELD', 'prime_cap')
    if mode == "relaxed":
        if P is None or not isprime(P):
            raise ParameterDomainError(f"relaxed modulus {P} is not prime")
        if P < t:
            raise ParameterDomainError(f"relaxed modulus {P} is smaller than t={t}")
        return PrimeModulus(P=P, provenance="user-supplied")
    if mode != "paper":
        raise ParameterDomainError(f"unknown prime mode '{mode}'")
    lower, upper = paper_prime_range(r, t)
    if lower > cap:
        raise PrimeCapExceeded(f"admissible primes start at {lower} > cap {cap}")
    prime = lower if isprime(lower) else int(nextprime(lower))
    if prime > cap:
        raise PrimeCapExceeded(f"smallest admissible prime {prime} > cap {cap}")
    logger.info(f"choose_prime(r={r}, t={t}): P={prime} in [{lower}, {upper}]")
    return PrimeModulus(P=prime, provenance="paper-range", lower=lower, upper=upper)

def _creates_solution(values: Sequence[int], x: int, t: int) -> bool:
    """
    True if adding x to the set creates a solution of a_1+...+a_{t-1} = (t-1)*c
    that is not all-equal.
    """
    pool = sorted(set(values) | {x})
    pool_set = set(pool)
    for c in pool:
        target = (t - 1) * c
        for head in itertools.combinations_with_replacement(pool, t - 2):
            last = target - sum(head)
            if last not in pool_set or (head and last < head[-1]):
                continue
            combo = head + (last,)
            if all(a == c for a in combo):
                continue
            if x == c or x in combo:
                return True
    return False

def is_centroid_free(values: Sequence[int], t: int) -> bool:
    """No non-trivial solution of a_1+...+a_{t-1} = (t-1)*c inside values."""
    chosen: List[int] = []
    for v in sorted(set(values)):
        if _creates_solution(chosen, v, t):
            return False
        chosen.append(v)
    return True

def _greedy_extend(seed: Sequence[int], limit: int, t: int) -> List[int]:
    chosen = sorted(set(seed))
    members = set(chosen)
    for v in range(limit + 1):
        if v in members:
            continue
        if not _creates_solution(chosen, v, t):
            chosen.append(v)
            members.add(v)
    return sorted(chosen)

class _SearchStop(Exception):
    pass

def _exhaustive_base(limit: int, t: int, max_nodes: int) -> Tuple[List[int], bool]:
    """
    Largest centroid-free subset of [0, limit] containing 0, lexicographically first.
    Returns the best set and whether the search completed.
    """
    best: List[int] = []
    nodes = 0

    def dfs(v: int, chosen: List[int]):
        nonlocal best, nodes
        nodes += 1
        if nodes > max_nodes:
            raise _SearchStop()
        if len(chosen) + (limit - v + 1) <= len(best):
            return
        if v > limit:
            best = list(chosen)
            return
        if not _creates_solution(chosen, v, t):
            chosen.append(v)
            dfs(v + 1, chosen)
            chosen.pop()
        dfs(v + 1, chosen)

    try:
        dfs(1, [0])
        return best, True
    except _SearchStop:
        return best or [0], False

def _sphere_parameters(limit: int, t: int) -> Tuple[int, int]:
    digits = max(2, math.isqrt(max(1, limit.bit_length())))
    base = None
    d = t
    while True:
        m = (d - 1) // (t - 1) + 1
        top = (m - 1) * sum(d ** i for i in range(digits))
        if top > limit:
            break
        base = d
        d += 1
    if base is None:
        raise ParameterDomainError(f"no digit base fits below {limit} with {digits} digits")
    return base, digits

def _sphere_base(limit: int, t: int, d: int, k: int) -> List[int]:
    """Largest sphere of digit vectors (digits < d/(t-1)) read in base d, smallest norm on ties."""
    if d < t:
        raise ParameterDomainError(f"sphere base d={d} must be at least t={t}")
    m = (d - 1) // (t - 1) + 1
    spheres: Dict[int, List[int]] = {}
    for digits in itertools.product(range(m), repeat=k):
        value = sum(digit * d ** i for i, digit in enumerate(digits))
        if value <= limit:
            spheres.setdefault(sum(digit * digit for digit in digits), []).append(value)
    if not spheres:
        raise ParameterDomainError(f"no digit vector fits below {limit}")
    norm = max(spheres, key=lambda n: (len(spheres[n]), -n))
    return sorted(spheres[norm])

@dataclass(frozen=True)
class BehrendSystem:
    """
    Tuples y_{i,h} over F_P: y_{i,h} = a_h for i < t and y_{t,h} = -(t-1)*a_h.
    """
    P: int
    t: int
    base_set: Tuple[int, ...]
    method: str = "given"
    verified_by: str = ""

    @property
    def R(self) -> int:
        return len(self.base_set)

    def y(self, i: int, h: int) -> int:
        """Entry y_{i,h} with 0-based i and h."""
        if i < self.t - 1:
            return self.base_set[h] % self.P
        return (-(self.t - 1) * self.base_set[h]) % self.P

    def Y(self, i: int) -> Tuple[int, ...]:
        return tuple(self.y(i, h) for h in range(self.R))

    def rows(self) -> np.ndarray:
        return np.array([self.Y(i) for i in range(self.t)], dtype=np.int64)

    def asymptotic_floor(self) -> Expr:
        """P exp(-12 sqrt(ln P ln t)), kept symbolic."""
        P, t = Integer(self.P), Integer(self.t)
        return P * exp(-12 * sqrt(log(P) * log(t)))

    def asymptotic_floor_text(self) -> str:
        floor = self.asymptotic_floor()
        return f"{sstr(floor)} ≈ {float(floor.evalf()):.6g}"

    def report(self) -> BehrendReport:
        return BehrendReport(P=self.P, t=self.t, method=self.method, base_set=list(self.base_set),
                             R=self.R, asymptotic_floor=self.asymptotic_floor_text(),
                             verified_by=self.verified_by)

def verify_behrend(system: BehrendSystem, verify_cap: int = None) -> str:
    """
    Check that mixed sums y_{1,h_1}+...+y_{t,h_t} vanish mod P exactly on the diagonal.
    Exhaustive over all R^t index choices up to the cap, otherwise by the integer argument.
    Returns:
        str: "exhaustive" or "no-wraparound"
    Raises:
        InternalInvariantError: the property fails
    """
    verify_cap = verify_cap or config.getint('PROBFIELD', 'behrend_verify_cap')
    P, t, A = system.P, system.t, system.base_set
    if len(set(A)) != len(A) or min(A) < 0:
        raise InternalInvariantError(f"base set {A} must be distinct non-negative integers")
    rows = system.rows()
    for i in range(t):
        if len(set(rows[i].tolist())) != system.R:
            raise InternalInvariantError(f"row {i} of the tuple system repeats a value")
    if system.R <= verify_cap and system.R ** t <= 20_000_000:
        sums = rows[0]
        for i in range(1, t):
            sums = (sums[..., None] + rows[i].reshape((1,) * i + (-1,))) % P
        zeros = np.argwhere(sums == 0)
        diagonal = all(len(set(idx.tolist())) == 1 for idx in zeros)
        if not diagonal or len(zeros) != system.R:
            raise InternalInvariantError(f"mixed sum vanishes off the diagonal for A={list(A)} mod {P}")
        return "exhaustive"
    if (t - 1) * max(A) >= P:
        raise InternalInvariantError(f"(t-1)*max(A) = {(t - 1) * max(A)} >= P = {P}")
    if not is_centroid_free(A, t):
        raise InternalInvariantError(f"base set {list(A)} has a non-trivial centroid solution")
    return "no-wraparound"

def behrend_from_base_set(P: int, t: int, base_set: Sequence[int], method: str = "given") -> BehrendSystem:
    """Wrap an explicit base set after checking the wraparound guard and verifying it."""
    base = tuple(sorted(set(int(a) for a in base_set)))
    if not base:
        raise ParameterDomainError("base set is empty")
    if (t - 1) * max(base) >= P:
        raise ParameterDomainError(f"wraparound guard fails: (t-1)*max(A) = {(t - 1) * max(base)} >= P = {P}")
    system = BehrendSystem(P=P, t=t, base_set=base, method=method)
    verified = verify_behrend(system)
    return BehrendSystem(P=P, t=t, base_set=base, method=method, verified_by=verified)

def behrend_system(P: int, t: int, method: str = "auto", d: int = None, k: int = None,
                   max_nodes: int = None) -> BehrendSystem:
    """
    Build a verified Behrend-type system.
    Args:
        P: prime modulus
        method: exhaustive, greedy, sphere or auto
        d, k: digit base and digit count for the sphere method
        max_nodes: node cap of the exhaustive search, the best set found is kept when hit
    """
    if t < 3:
        raise ParameterDomainError(f"Behrend systems need t >= 3, got {t}")
    if not isprime(P) or P < t:
        raise ParameterDomainError(f"modulus {P} must be a prime >= t")
    limit = (P - 1) // (t - 1)
    if method == "auto":
        if P <= config.getint('PROBFIELD', 'exhaustive_prime_limit'):
            method = "exhaustive"
        elif P <= config.getint('PROBFIELD', 'greedy_prime_limit'):
            method = "greedy"
        else:
            method = "sphere"
    if method == "exhaustive":
        max_nodes = max_nodes or config.getint('PROBFIELD', 'behrend_max_nodes')
        base, complete = _exhaustive_base(limit, t, max_nodes)
        if not complete:
            logger.warning(f"exhaustive Behrend search at P={P} hit {max_nodes} nodes, keeping |A|={len(base)}")
    elif method == "greedy":
        base = _greedy_extend([0], limit, t)
    elif method == "sphere":
        if d is None or k is None:
            d, k = _sphere_parameters(limit, t)
        base = _greedy_extend(_sphere_base(limit, t, d, k), limit, t)
        method = f"sphere(d={d},k={k})"
    else:
        raise ParameterDomainError(f"unknown Behrend method '{method}'")
    system = behrend_from_base_set(P, t, base, method)
    logger.info(f"behrend_system(P={P}, t={t}, {method}): R={system.R} via {system.verified_by}")
    return system

@dataclass(frozen=True)
class Functional:
    """Linear map F_P^{tr} -> F_P with coefficients summing to 0."""
    P: int
    coefficients: Tuple[int, ...]
    seed: Optional[int] = None

    def __call__(self, z_mask: int) -> int:
        return sum(self.coefficients[v] for v in edge_vertices(z_mask)) % self.P

def sample_functional(P: int, tr: int, seed: int = None) -> Functional:
    rng = np.random.default_rng(seed)
    head = [int(c) for c in rng.integers(0, P, size=tr - 1)]
    last = (-sum(head)) % P
    return Functional(P=P, coefficients=tuple(head + [last]), seed=seed)

class TupleLattice:
    """
    All transversals z of the complete r-partite hypergraph with t vertices per part, and all
    t-tuples (z_1..z_t) with z_i in Z_i partitioning the vertex set.
    """
    def __init__(self, r: int, t: int, cap: int = None):
        if r < 1 or t < 1:
            raise ParameterDomainError(f"lattice needs r, t >= 1, got r={r} t={t}")
        cap = cap or config.getint('PROBFIELD', 'lattice_cap')
        self.r, self.t = r, t
        self.size = math.factorial(t) ** (r - 1)
        if self.size > cap:
            raise BudgetExceeded(f"lattice has {self.size} tuples, cap is {cap}")
        self.z_count = t ** r
        z_index = np.arange(self.z_count, dtype=np.int64)
        locals_ = (z_index[:, None] // t ** np.arange(r, dtype=np.int64)[None, :]) % t
        self.incidence = np.zeros((self.z_count, t * r), dtype=np.int64)
        for p in range(r):
            self.incidence[np.arange(self.z_count), p * t + locals_[:, p]] = 1
        self.z_masks = [sum(1 << int(v) for v in np.flatnonzero(row)) for row in self.incidence]
        perms = np.array(list(itertools.permutations(range(t))), dtype=np.int64)
        tuples = np.arange(t, dtype=np.int64)[None, :]
        for p in range(1, r):
            tuples = (tuples[:, None, :] + perms[None, :, :] * t ** p).reshape(-1, t)
        self.tuples = tuples

    def slice(self, i: int) -> List[int]:
        """Lattice indices of Z_i."""
        return [z for z in range(self.z_count) if z % self.t == i]

    def tuple_masks(self, k: int) -> Tuple[int, ...]:
        return tuple(self.z_masks[z] for z in self.tuples[k])

    def sharing(self, k: int) -> np.ndarray:
        """Indices of the other tuples that share a coordinate with tuple k."""
        share = (self.tuples == self.tuples[k][None, :]).any(axis=1)
        share[k] = False
        return np.flatnonzero(share)

def _value_positions(values: np.ndarray, Y: Sequence[int]) -> np.ndarray:
    """Position of each value in Y, -1 when absent."""
    Y = np.asarray(Y, dtype=np.int64)
    order = np.argsort(Y)
    sorted_Y = Y[order]
    pos = np.searchsorted(sorted_Y, values)
    pos = np.clip(pos, 0, len(Y) - 1)
    hit = sorted_Y[pos] == values
    return np.where(hit, order[pos], -1)

def build_partite_family(r: int, t: int, system: BehrendSystem, functional: Functional,
                         lattice_cap: int = None) -> Instance:
    """
    Matchings are the isolated candidate tuples of the lattice under the functional.
    Raises:
        ParameterDomainError: mismatched modulus, t < 3 or r < 2
        BudgetExceeded: lattice larger than the cap
    """
    if t < 3 or r < 2:
        raise ParameterDomainError(f"the field family needs t >= 3 and r >= 2, got r={r} t={t}")
    if system.P != functional.P or system.t != t:
        raise ParameterDomainError("tuple system and functional must share P and t")
    if len(functional.coefficients) != t * r:
        raise ParameterDomainError(f"functional has {len(functional.coefficients)} coefficients, expected {t * r}")
    P = system.P
    lattice = TupleLattice(r, t, lattice_cap)
    coeffs = np.array(functional.coefficients, dtype=np.int64)
    fz = (lattice.incidence @ coeffs) % P
    values = fz[lattice.tuples]

    member = np.ones(len(values), dtype=bool)
    positions = []
    for i in range(t):
        member &= np.isin(values[:, i], np.array(system.Y(i), dtype=np.int64))
        positions.append(_value_positions(values[:, i], system.Y(i)))
    positions = np.stack(positions, axis=1)
    by_tuple = (positions[:, 0] >= 0) & (positions == positions[:, [0]]).all(axis=1)
    if not np.array_equal(member, by_tuple):
        raise InternalInvariantError("candidate membership disagrees with the tuple characterization")

    candidates = np.flatnonzero(member)
    counts = np.bincount(lattice.tuples[candidates].ravel(), minlength=lattice.z_count)
    isolated = candidates[(counts[lattice.tuples[candidates]] == 1).all(axis=1)]
    matchings = [[lattice.z_masks[z] for z in lattice.tuples[k]] for k in isolated]
    floor = Fraction(lattice.size * system.R, 2 * P ** (t - 1))
    partition = [list(range(p * t, (p + 1) * t)) for p in range(r)]
    logger.info(f"build_partite_family(r={r}, t={t}, P={P}, R={system.R}, seed={functional.seed}): "
                f"{len(candidates)} candidates, {len(isolated)} isolated, floor {exact_str(floor)}")
    return Instance.create(r, t, r * t, matchings, partition, {
        "generator": "prob-f", "r": r, "t": t, "P": P, "R": system.R,
        "seed": functional.seed, "N": len(isolated), "candidates": len(candidates),
        "expected_floor": exact_str(floor), "behrend_method": system.method,
    })

def family_report(inst: Instance) -> FamilyReport:
    meta = inst.metadata
    seed = meta.get("seed")
    return FamilyReport(r=inst.r, t=inst.t, P=int(meta["P"]), R=int(meta["R"]),
                        seed=None if seed in (None, "None") else int(seed),
                        lattice_size=math.factorial(inst.t) ** (inst.r - 1),
                        candidates=int(meta["candidates"]), N=inst.N,
                        expected_floor=meta["expected_floor"])

def probabilistic_f_construction(r: int, t: int, prime: int = None, method: str = "auto",
                                 seed: int = None) -> Tuple[Instance, BehrendSystem]:
    """End to end: prime, tuple system, random functional, family. prime=None uses the paper-range prime."""
    modulus = choose_prime(r, t, "paper") if prime is None else choose_prime(r, t, "relaxed", prime)
    system = behrend_system(modulus.P, t, method)
    functional = sample_functional(modulus.P, t * r, seed)
    inst = build_partite_family(r, t, system, functional)
    meta = dict(inst.metadata)
    meta["prime_provenance"] = modulus.provenance
    return Instance.create(inst.r, inst.t, inst.num_vertices, inst.matchings, inst.partition, meta), system

def probability_probe(r: int, t: int, P: int, system: BehrendSystem, tuple_index: int = 0,
                      cap: int = None, progress: bool = False) -> ProbabilityProbeReport:
    """
    Enumerate every functional of the hyperplane sum(c) = 0 and count how often a fixed
    lattice tuple is a candidate, and an isolated one.
    """
    if system.P != P or system.t != t:
        raise ParameterDomainError("tuple system must use the probe modulus and t")
    cap = cap or config.getint('PROBFIELD', 'probe_cap')
    tr = t * r
    hyperplane = P ** (tr - 1)
    if hyperplane > cap:
        raise BudgetExceeded(f"hyperplane has {hyperplane} functionals, cap is {cap}")
    lattice = TupleLattice(r, t)
    target = lattice.tuples[tuple_index]
    neighbours = lattice.tuples[lattice.sharing(tuple_index)]
    relevant = np.unique(np.concatenate([target, neighbours.ravel()]))
    column = {int(z): c for c, z in enumerate(relevant)}
    rel_incidence = lattice.incidence[relevant].T
    in_Y = []
    for i in range(t):
        table = np.zeros(P, dtype=bool)
        table[list(system.Y(i))] = True
        in_Y.append(table)
    target_cols = [column[int(z)] for z in target]
    neighbour_cols = np.array([[column[int(z)] for z in row] for row in neighbours], dtype=np.int64).reshape(-1, t)

    powers = P ** np.arange(tr - 1, dtype=np.int64)
    candidate_count = isolated_count = 0
    chunk = 1 << 16
    for start in tqdm(range(0, hyperplane, chunk), disable=not progress, desc="functionals"):
        idx = np.arange(start, min(start + chunk, hyperplane), dtype=np.int64)
        coeffs = np.empty((len(idx), tr), dtype=np.int64)
        coeffs[:, :tr - 1] = (idx[:, None] // powers[None, :]) % P
        coeffs[:, tr - 1] = (-coeffs[:, :tr - 1].sum(axis=1)) % P
        fz = (coeffs @ rel_incidence) % P
        is_candidate = np.ones(len(idx), dtype=bool)
        for i in range(t):
            is_candidate &= in_Y[i][fz[:, target_cols[i]]]
        conflict = np.zeros(len(idx), dtype=bool)
        if len(neighbour_cols):
            other = np.ones((len(idx), len(neighbour_cols)), dtype=bool)
            for i in range(t):
                other &= in_Y[i][fz[:, neighbour_cols[:, i]]]
            conflict = other.any(axis=1)
        candidate_count += int(is_candidate.sum())
        isolated_count += int((is_candidate & ~conflict).sum())

    expected = hyperplane * system.R // P ** (t - 1)
    floor = Fraction(hyperplane * system.R, 2 * P ** (t - 1))
    report = ProbabilityProbeReport(r=r, t=t, P=P, R=system.R, tuple_index=tuple_index,
                                    hyperplane_size=hyperplane, candidate_count=candidate_count,
                                    expected_candidate_count=expected, isolated_count=isolated_count,
                                    isolated_floor=exact_str(floor),
                                    candidate_equality=candidate_count * P ** (t - 1) == hyperplane * system.R,
                                    isolated_floor_holds=isolated_count >= floor)
    logger.info(f"probability_probe: {report}")
    return report

def span_dimension(tuple_a: Sequence[int], tuple_b: Sequence[int], P: int = None) -> int:
    """Rank over F_P of the 2t vectors of two lattice tuples."""
    P = P or config.getint('PROBFIELD', 'span_prime')
    masks = list(tuple_a) + list(tuple_b)
    length = max(m.bit_length() for m in masks)
    rows = [[(m >> s) & 1 for s in range(length)] for m in masks]
    return rank_mod_p(rows, P)

@dataclass(frozen=True)
class ComponentGraph:
    """Bipartite graph on z_1..z_t (left) and z'_1..z'_t (right), adjacent when they share a vertex."""
    t: int
    edges: Tuple[Tuple[int, int], ...]
    components: Tuple[FrozenSet[int], ...]

    @property
    def count(self) -> int:
        return len(self.components)

    def structure(self) -> FrozenSet[FrozenSet[int]]:
        return frozenset(self.components)

def component_graph(tuple_a: Sequence[int], tuple_b: Sequence[int]) -> ComponentGraph:
    t = len(tuple_a)
    edges = tuple((i, j) for i in range(t) for j in range(t) if tuple_a[i] & tuple_b[j])
    rows = [i for i, _ in edges]
    cols = [t + j for _, j in edges]
    adjacency = csr_matrix((np.ones(len(edges), dtype=np.int8), (rows, cols)), shape=(2 * t, 2 * t))
    count, labels = connected_components(adjacency, directed=False)
    components = []
    for label in range(count):
        left = frozenset(i for i in range(t) if labels[i] == label)
        right = frozenset(j for j in range(t) if labels[t + j] == label)
        if left != right:
            raise InternalInvariantError(f"component {sorted(left)} / {sorted(right)} is not diagonal")
        components.append(left)
    components.sort(key=min)
    return ComponentGraph(t=t, edges=edges, components=tuple(components))

def span_suite(t: int, r: int, P: int = None, progress: bool = False) -> SpanSuiteReport:
    """Span dimension and component count over every pair of coordinate-sharing tuples."""
    P = P or config.getint('PROBFIELD', 'span_prime')
    lattice = TupleLattice(r, t)
    histogram: Dict[str, int] = {}
    pairs = equality = 0
    in_range = bound_holds = True
    for a in tqdm(range(lattice.size), disable=not progress, desc="span pairs"):
        for b in lattice.sharing(a):
            if b <= a:
                continue
            za, zb = lattice.tuple_masks(a), lattice.tuple_masks(int(b))
            d = span_dimension(za, zb, P)
            components = component_graph(za, zb).count
            pairs += 1
            histogram[str(d)] = histogram.get(str(d), 0) + 1
            in_range &= t + 1 <= d <= 2 * t - 1
            bound_holds &= components >= 2 * t - d
            equality += components == 2 * t - d
    report = SpanSuiteReport(r=r, t=t, P=P, tuples=lattice.size, pairs_checked=pairs,
                             d_histogram=dict(sorted(histogram.items())),
                             component_equality_pairs=equality, d_in_range=in_range,
                             component_bound_holds=bound_holds)
    logger.info(f"span_suite: {report}")
    return report

def factorial_inequality_holds(limit: int = 12) -> bool:
    """a!^(b-1) <= b!^(a-1) for 1 <= a <= b <= limit."""
    return all(math.factorial(a) ** (b - 1) <= math.factorial(b) ** (a - 1)
               for b in range(1, limit + 1) for a in range(1, b + 1))

def _count_bound(t: int, r: int, d: int) -> Tuple[int, int, str]:
    """
    The per-d bound t^t (t-1)!^((r-1)(d-t)/(t-2)) raised to the power t-2, plus its rendering.
    """
    k = t - 2
    exponent = (r - 1) * (d - t)
    power = (t ** t) ** k * math.factorial(t - 1) ** exponent
    if exponent % k == 0:
        text = str(t ** t * math.factorial(t - 1) ** (exponent // k))
    else:
        text = f"{t ** t}*{math.factorial(t - 1)}^({exponent}/{k})"
    return power, k, text

def counting_probe(t: int, r: int, tuple_index: int = 0, P: int = None) -> CountingProbeReport:
    """
    For a fixed tuple, count the coordinate-sharing tuples per span dimension and per
    component structure and compare with the proven bounds.
    """
    if t < 3:
        raise ParameterDomainError(f"the counting bound needs t >= 3, got {t}")
    P = P or config.getint('PROBFIELD', 'span_prime')
    lattice = TupleLattice(r, t)
    fixed = lattice.tuple_masks(tuple_index)
    per_d: Dict[int, int] = {}
    per_structure: Dict[FrozenSet[FrozenSet[int]], int] = {}
    for b in lattice.sharing(tuple_index):
        other = lattice.tuple_masks(int(b))
        d = span_dimension(fixed, other, P)
        per_d[d] = per_d.get(d, 0) + 1
        structure = component_graph(fixed, other).structure()
        per_structure[structure] = per_structure.get(structure, 0) + 1
    entries = []
    for d in range(t + 1, 2 * t):
        count = per_d.get(d, 0)
        power, k, text = _count_bound(t, r, d)
        entries.append(CountEntry(d=d, count=count, bound=text, holds=count ** k <= power))
    outside = [d for d in per_d if not t + 1 <= d <= 2 * t - 1]
    for d in outside:
        entries.append(CountEntry(d=d, count=per_d[d], bound="out of range", holds=False))
    structure_ok = all(
        count <= math.prod(math.factorial(len(part)) for part in structure) ** (r - 1)
        for structure, count in per_structure.items())
    report = CountingProbeReport(r=r, t=t, tuple_index=tuple_index, per_d=entries,
                                 structure_checks=len(per_structure),
                                 structure_bound_holds=structure_ok,
                                 factorial_inequality_holds=factorial_inequality_holds())
    logger.info(f"counting_probe: {report}")
    return report

if __name__ == "__main__":
    print(choose_prime(5, 3))
    print(behrend_system(7, 3, "exhaustive").report())
