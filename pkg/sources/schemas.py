from typing import Dict, List, Optional
from pydantic import BaseModel
from sources.utility import pretty_print

class Violation(BaseModel):
    rule: str
    message: str
    matching_index: Optional[int] = None
    edge_index: Optional[int] = None

    def __str__(self):
        where = []
        if self.matching_index is not None:
            where.append(f"matching {self.matching_index}")
        if self.edge_index is not None:
            where.append(f"edge {self.edge_index}")
        location = f" ({', '.join(where)})" if where else ""
        return f"{self.rule}{location}: {self.message}"

    def jsonify(self):
        return self.model_dump()

class ValidationReport(BaseModel):
    ok: bool
    violations: List[Violation] = []

    def rules(self) -> List[str]:
        return [v.rule for v in self.violations]

    def __str__(self):
        if self.ok:
            return "instance valid"
        return "instance invalid:\n" + "\n".join(f"  - {v}" for v in self.violations)

    def jsonify(self):
        return {
            "ok": self.ok,
            "violations": [v.jsonify() for v in self.violations],
        }

class SearchReport(BaseModel):
    status: str
    certificate: Optional[List[dict]] = None
    nodes_visited: int = 0
    path: Optional[str] = None
    decomposition_stats: Optional[Dict[str, int]] = None

    def __str__(self):
        text = f"Status: {self.status}, Nodes: {self.nodes_visited}"
        if self.path:
            text += f", Path: {self.path}"
        if self.certificate:
            text += f"\nCertificate: {self.certificate}"
        return text

    def jsonify(self):
        return self.model_dump(exclude_none=True)

class ExactValueReport(BaseModel):
    r: int
    t: int
    universe: int
    partite: bool
    multiplicity_cap: int
    status: str
    n_max: int
    distinct_matchings: int
    nodes_visited: int
    witness: Optional[dict] = None

    def __str__(self):
        bound = "=" if self.status == "Complete" else ">="
        return (f"r={self.r} t={self.t} universe={self.universe} partite={self.partite} "
                f"cap={self.multiplicity_cap}: N_max {bound} {self.n_max} "
                f"({self.distinct_matchings} distinct matchings, {self.nodes_visited} nodes)")

    def jsonify(self):
        return self.model_dump()

class BehrendReport(BaseModel):
    P: int
    t: int
    method: str
    base_set: List[int]
    R: int
    asymptotic_floor: str
    verified_by: str

    def __str__(self):
        return (f"P={self.P} t={self.t} method={self.method} R={self.R} "
                f"A={self.base_set} (floor {self.asymptotic_floor}, verified {self.verified_by})")

    def jsonify(self):
        return self.model_dump()

class FamilyReport(BaseModel):
    r: int
    t: int
    P: int
    R: int
    seed: Optional[int] = None
    lattice_size: int
    candidates: int
    N: int
    expected_floor: str

    def __str__(self):
        return (f"r={self.r} t={self.t} P={self.P} R={self.R} seed={self.seed}: "
                f"{self.candidates} candidates, N={self.N} isolated (expected floor {self.expected_floor})")

    def jsonify(self):
        return self.model_dump()

class ProbabilityProbeReport(BaseModel):
    r: int
    t: int
    P: int
    R: int
    tuple_index: int
    hyperplane_size: int
    candidate_count: int
    expected_candidate_count: int
    isolated_count: int
    isolated_floor: str
    candidate_equality: bool
    isolated_floor_holds: bool

    def passed(self) -> bool:
        return self.candidate_equality and self.isolated_floor_holds

    def __str__(self):
        return (f"hyperplane {self.hyperplane_size}: candidates {self.candidate_count} "
                f"(expected {self.expected_candidate_count}), isolated {self.isolated_count} "
                f"(floor {self.isolated_floor})")

    def jsonify(self):
        return self.model_dump()

class SpanSuiteReport(BaseModel):
    r: int
    t: int
    P: int
    tuples: int
    pairs_checked: int
    d_histogram: Dict[str, int]
    component_equality_pairs: int
    d_in_range: bool
    component_bound_holds: bool

    def passed(self) -> bool:
        return self.d_in_range and self.component_bound_holds

    def __str__(self):
        return (f"{self.pairs_checked} coordinate-sharing pairs over {self.tuples} tuples, "
                f"d histogram {self.d_histogram}, l = 2t-d on {self.component_equality_pairs} pairs")

    def jsonify(self):
        return self.model_dump()

class CountEntry(BaseModel):
    d: int
    count: int
    bound: str
    holds: bool

class CountingProbeReport(BaseModel):
    r: int
    t: int
    tuple_index: int
    per_d: List[CountEntry]
    structure_checks: int
    structure_bound_holds: bool
    factorial_inequality_holds: bool

    def passed(self) -> bool:
        return (all(entry.holds for entry in self.per_d)
                and self.structure_bound_holds and self.factorial_inequality_holds)

    def __str__(self):
        rows = ", ".join(f"d={e.d}: {e.count} <= {e.bound}" for e in self.per_d)
        return f"{rows}; component structures {self.structure_checks}; factorials ok={self.factorial_inequality_holds}"

    def jsonify(self):
        return self.model_dump()

class BoundEntry(BaseModel):
    name: str
    value: str
    provenance: str

class BoundsReport(BaseModel):
    r: int
    t: int
    lower: List[BoundEntry]
    upper: List[BoundEntry]
    constants: List[BoundEntry]
    exact: List[BoundEntry]
    best_lower_F: BoundEntry
    best_lower_f: Optional[BoundEntry] = None

    def __str__(self):
        lines = [f"bounds for r={self.r}, t={self.t}"]
        for title, rows in (("lower", self.lower), ("upper", self.upper),
                            ("constants", self.constants), ("exact", self.exact)):
            for row in rows:
                lines.append(f"  {title:<9} {row.name:<24} {row.value:>24}  [{row.provenance}]")
        lines.append(f"  best lower F(r,t) >= {self.best_lower_F.value} via {self.best_lower_F.name}")
        if self.best_lower_f is not None:
            lines.append(f"  best lower f(r,t) >= {self.best_lower_f.value} via {self.best_lower_f.name}")
        return "\n".join(lines)

    def jsonify(self):
        return self.model_dump()

class CriterionResult(BaseModel):
    name: str
    passed: bool
    detail: str

class ReproResult(BaseModel):
    suite: str
    criteria: List[CriterionResult]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.criteria)

    def failing(self) -> List[str]:
        return [c.name for c in self.criteria if not c.passed]

    def jsonify(self):
        return {"suite": self.suite, "all_passed": self.all_passed,
                "criteria": [c.model_dump() for c in self.criteria]}

    def show(self):
        pretty_print('▂'*64, color="status")
        for c in self.criteria:
            mark = "PASS" if c.passed else "FAIL"
            pretty_print(f"[{mark}] {c.name}: {c.detail}", color="success" if c.passed else "failure")
        pretty_print('▂'*64, color="status")
