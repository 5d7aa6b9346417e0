"""
Instance data model: edges as vertex bitmasks, matchings as ordered tuples of edges,
colors as matching positions. Validation, certificate checking and the JSON file format.
"""

import json
from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sources.errors import InstanceFormatError
from sources.schemas import ValidationReport, Violation

Edge = int
Matching = Tuple[Edge, ...]

def edge_mask(vertices: Iterable[int]) -> Edge:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask

def edge_vertices(mask: Edge) -> Tuple[int, ...]:
    """Vertices of an edge mask, ascending."""
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)

def lowest_vertex(mask: Edge) -> int:
    return (mask & -mask).bit_length() - 1

def canonical_matching(matching: Iterable[Edge]) -> Matching:
    return tuple(sorted(matching, key=edge_vertices))

@dataclass(frozen=True)
class Instance:
    """
    A family of N matchings of size t in an r-uniform hypergraph on num_vertices vertices.
    Color j is the position of the matching in `matchings`; repeated matchings are legal.
    """
    r: int
    t: int
    num_vertices: int
    matchings: Tuple[Matching, ...]
    partition: Optional[Tuple[Tuple[int, ...], ...]] = None
    metadata: Dict[str, str] = field(default_factory=dict, hash=False)

    @classmethod
    def create(cls, r: int, t: int, num_vertices: int,
               matchings: Iterable[Iterable[Edge]],
               partition: Optional[Iterable[Iterable[int]]] = None,
               metadata: Optional[Dict[str, object]] = None) -> "Instance":
        """Build a canonical instance from edge masks."""
        parts = None
        if partition is not None:
            parts = tuple(tuple(sorted(part)) for part in partition)
        meta = {str(k): str(v) for k, v in (metadata or {}).items()}
        return cls(r=r, t=t, num_vertices=num_vertices,
                   matchings=tuple(canonical_matching(m) for m in matchings),
                   partition=parts, metadata=meta)

    @classmethod
    def from_vertex_lists(cls, r: int, t: int, num_vertices: int,
                          matchings: Iterable[Iterable[Iterable[int]]],
                          partition: Optional[Iterable[Iterable[int]]] = None,
                          metadata: Optional[Dict[str, object]] = None) -> "Instance":
        masks = [[edge_mask(e) for e in m] for m in matchings]
        return cls.create(r, t, num_vertices, masks, partition, metadata)

    @property
    def N(self) -> int:
        return len(self.matchings)

    @property
    def is_partite(self) -> bool:
        return self.partition is not None

    @property
    def full_mask(self) -> int:
        return (1 << self.num_vertices) - 1

    def canonical(self) -> "Instance":
        return replace(self,
                       matchings=tuple(canonical_matching(m) for m in self.matchings),
                       partition=None if self.partition is None
                       else tuple(tuple(sorted(p)) for p in self.partition))

    def with_matchings(self, matchings: Iterable[Iterable[Edge]], **metadata) -> "Instance":
        meta = dict(self.metadata)
        meta.update({str(k): str(v) for k, v in metadata.items()})
        return replace(self, matchings=tuple(canonical_matching(m) for m in matchings), metadata=meta)

    def part_masks(self) -> List[int]:
        if self.partition is None:
            return []
        return [edge_mask(part) for part in self.partition]

    def perfect_regime(self) -> bool:
        """Every size-t matching covers all vertices."""
        return self.num_vertices == self.r * self.t

    def color_groups(self) -> List[Tuple[int, ...]]:
        """Colors grouped by identical matching, groups ordered by their lowest color."""
        groups: Dict[Matching, List[int]] = {}
        for j, m in enumerate(self.matchings):
            groups.setdefault(canonical_matching(m), []).append(j)
        return [tuple(members) for members in groups.values()]

    def distinct_edges(self) -> List[Edge]:
        """Union of all matchings, deduplicated, in order of first appearance."""
        seen = {}
        for m in self.matchings:
            for e in m:
                seen.setdefault(e, None)
        return list(seen)

    def colors_of_edge(self) -> Dict[Edge, List[int]]:
        colors: Dict[Edge, List[int]] = {}
        for j, m in enumerate(self.matchings):
            for e in m:
                colors.setdefault(e, []).append(j)
        return colors

@dataclass(frozen=True)
class RainbowCertificate:
    """Pairs (color, edge mask); colors distinct, edges pairwise disjoint."""
    picks: Tuple[Tuple[int, Edge], ...]

    @property
    def size(self) -> int:
        return len(self.picks)

    def colors(self) -> List[int]:
        return [c for c, _ in self.picks]

    def jsonify(self) -> list:
        return [{"color": c, "edge": list(edge_vertices(e))} for c, e in self.picks]

    @classmethod
    def from_json(cls, data: list) -> "RainbowCertificate":
        return cls(tuple((int(item["color"]), edge_mask(item["edge"])) for item in data))

    def __str__(self):
        return " ".join(f"{c}:{list(edge_vertices(e))}" for c, e in self.picks)

def validate_instance(inst: Instance) -> ValidationReport:
    """
    Check every structural rule of an instance.
    Violations are collected, never raised.
    """
    violations: List[Violation] = []

    def add(rule: str, message: str, matching: int = None, edge: int = None):
        violations.append(Violation(rule=rule, message=message,
                                    matching_index=matching, edge_index=edge))

    if inst.r < 1 or inst.t < 1:
        add("parameters", f"r and t must be positive, got r={inst.r} t={inst.t}")
    if inst.num_vertices < 0:
        add("parameters", f"negative vertex count {inst.num_vertices}")
    full = inst.full_mask if inst.num_vertices >= 0 else 0

    part_masks = []
    if inst.partition is not None:
        if len(inst.partition) != inst.r:
            add("partition size", f"expected {inst.r} parts, got {len(inst.partition)}")
        covered = 0
        for p, part in enumerate(inst.partition):
            mask = edge_mask(part)
            if len(set(part)) != len(part):
                add("partition overlap", f"part {p} repeats a vertex")
            if mask & ~full:
                add("vertex out of range", f"part {p} has a vertex outside [0, {inst.num_vertices})")
            if mask & covered:
                add("partition overlap", f"part {p} intersects an earlier part")
            covered |= mask
            part_masks.append(mask)

    for j, matching in enumerate(inst.matchings):
        if len(matching) != inst.t:
            add("matching size", f"matching has {len(matching)} edges, expected {inst.t}", j)
        used = 0
        for k, e in enumerate(matching):
            if e.bit_count() != inst.r:
                add("edge arity", f"edge has {e.bit_count()} vertices, expected {inst.r}", j, k)
            if e & ~full:
                add("vertex out of range", f"edge {list(edge_vertices(e))} leaves [0, {inst.num_vertices})", j, k)
            if e & used:
                add("edges not disjoint", f"edge {list(edge_vertices(e))} meets an earlier edge", j, k)
            used |= e
            for p, mask in enumerate(part_masks):
                if (e & mask).bit_count() != 1:
                    add("edge not transversal", f"edge {list(edge_vertices(e))} meets part {p} "
                        f"{(e & mask).bit_count()} times", j, k)
                    break
    return ValidationReport(ok=not violations, violations=violations)

def explain_certificate(inst: Instance, cert: RainbowCertificate) -> List[str]:
    """Reasons a certificate fails against inst, empty when it is valid."""
    problems = []
    seen_colors = set()
    used = 0
    for i, (color, e) in enumerate(cert.picks):
        if not 0 <= color < inst.N:
            problems.append(f"pick {i}: color {color} out of range [0, {inst.N})")
            continue
        if color in seen_colors:
            problems.append(f"pick {i}: color {color} repeated")
        seen_colors.add(color)
        if e not in inst.matchings[color]:
            problems.append(f"pick {i}: edge {list(edge_vertices(e))} is not in matching {color}")
        if e & used:
            problems.append(f"pick {i}: edge {list(edge_vertices(e))} meets an earlier pick")
        used |= e
    return problems

def check_certificate(inst: Instance, cert: RainbowCertificate) -> bool:
    return not explain_certificate(inst, cert)

def naive_check_certificate(inst: Instance, cert: RainbowCertificate) -> bool:
    """Set-based re-check sharing no code with the mask path."""
    n = inst.num_vertices
    matchings = [[[v for v in range(n) if e >> v & 1] for e in m] for m in inst.matchings]
    colors = [c for c, _ in cert.picks]
    if len(colors) != len(set(colors)):
        return False
    vertex_sets = []
    for color, e in cert.picks:
        if color < 0 or color >= len(matchings):
            return False
        vertices = [v for v in range(n) if e >> v & 1]
        if e >> n or vertices not in matchings[color]:
            return False
        vertex_sets.append(set(vertices))
    for a in range(len(vertex_sets)):
        for b in range(a + 1, len(vertex_sets)):
            if vertex_sets[a] & vertex_sets[b]:
                return False
    return True

def encode(inst: Instance) -> str:
    """Canonical JSON document of an instance."""
    inst = inst.canonical()
    doc = {
        "r": inst.r,
        "t": inst.t,
        "num_vertices": inst.num_vertices,
        "partition": None if inst.partition is None else [list(p) for p in inst.partition],
        "matchings": [[list(edge_vertices(e)) for e in m] for m in inst.matchings],
        "metadata": {str(k): str(v) for k, v in inst.metadata.items()},
    }
    return json.dumps(doc, ensure_ascii=False) + "\n"

def _expect_int(value, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise InstanceFormatError(f"expected an integer, got {type(value).__name__}", field=path)
    return value

def _expect_list(value, path: str) -> list:
    if not isinstance(value, list):
        raise InstanceFormatError(f"expected an array, got {type(value).__name__}", field=path)
    return value

def _decode_vertex_list(value, path: str, num_vertices: int) -> List[int]:
    vertices = []
    for v_idx, v in enumerate(_expect_list(value, path)):
        v = _expect_int(v, f"{path}[{v_idx}]")
        if not 0 <= v < num_vertices:
            raise InstanceFormatError(f"index out of range: {v} not in [0, {num_vertices})",
                                      field=f"{path}[{v_idx}]")
        vertices.append(v)
    if len(set(vertices)) != len(vertices):
        raise InstanceFormatError("duplicate vertex", field=path)
    return vertices

def decode(text: str) -> Instance:
    """
    Parse an instance document.
    Raises:
        InstanceFormatError: with the JSON line or the offending field path
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise InstanceFormatError(f"{e.msg} (column {e.colno})", line=e.lineno) from e
    if not isinstance(doc, dict):
        raise InstanceFormatError("top level must be an object")
    for key in ("r", "t", "num_vertices", "partition", "matchings"):
        if key not in doc:
            raise InstanceFormatError("missing field", field=key)
    r = _expect_int(doc["r"], "r")
    t = _expect_int(doc["t"], "t")
    num_vertices = _expect_int(doc["num_vertices"], "num_vertices")
    if num_vertices < 0:
        raise InstanceFormatError("negative vertex count", field="num_vertices")
    partition = None
    if doc["partition"] is not None:
        partition = [_decode_vertex_list(part, f"partition[{p}]", num_vertices)
                     for p, part in enumerate(_expect_list(doc["partition"], "partition"))]
    matchings = []
    for j, m in enumerate(_expect_list(doc["matchings"], "matchings")):
        edges = [_decode_vertex_list(e, f"matchings[{j}][{k}]", num_vertices)
                 for k, e in enumerate(_expect_list(m, f"matchings[{j}]"))]
        matchings.append(edges)
    metadata = doc.get("metadata") or {}
    if not isinstance(metadata, dict):
        raise InstanceFormatError("expected an object", field="metadata")
    for key, value in metadata.items():
        if not isinstance(value, str):
            raise InstanceFormatError("metadata values must be strings", field=f"metadata.{key}")
    return Instance.from_vertex_lists(r, t, num_vertices, matchings, partition, metadata)

def save_instance(inst: Instance, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        f.write(encode(inst))

def load_instance(path: str) -> Instance:
    with open(path, "r", encoding="utf-8") as f:
        return decode(f.read())

def k4_instance() -> Instance:
    """The three perfect matchings of K_4."""
    return Instance.from_vertex_lists(2, 2, 4, [[[0, 1], [2, 3]], [[0, 2], [1, 3]], [[0, 3], [1, 2]]],
                                      metadata={"generator": "k4"})

def k22_instance() -> Instance:
    """The two perfect matchings of K_{2,2} with parts {0,1} and {2,3}."""
    return Instance.from_vertex_lists(2, 2, 4, [[[0, 2], [1, 3]], [[0, 3], [1, 2]]],
                                      partition=[[0, 1], [2, 3]], metadata={"generator": "k22"})

if __name__ == "__main__":
    inst = k4_instance()
    print(validate_instance(inst))
    print(encode(inst))
