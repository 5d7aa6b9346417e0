"""
Exact bounds table for f(r, t) and F(r, t).
"""

from fractions import Fraction
from math import comb
from typing import List, Optional

from sources.constructions import construction_formula
from sources.errors import ParameterDomainError
from sources.schemas import BoundEntry, BoundsReport
from sources.utility import exact_str

# order breaks ties in the best lower bound
LOWER_ORDER = ["fixed-r", "simple-F", "simple-f", "t2-complete", "t2-partite", "exact f(2,t)"]
PARTITE = {"fixed-r", "simple-f", "t2-partite", "exact f(2,t)"}

def _applicable(name: str, r: int, t: int) -> bool:
    if name == "fixed-r":
        return r >= 3 and t >= 2 * r
    if name == "simple-F":
        return True
    if name == "simple-f":
        return r >= 3
    if name in ("t2-complete", "t2-partite"):
        return t == 2
    return r == 2

def lower_bounds(r: int, t: int) -> List[BoundEntry]:
    rows = []
    for name in LOWER_ORDER:
        if not _applicable(name, r, t):
            continue
        if name == "exact f(2,t)":
            value, provenance = 2 * t - 2, "exact value 2t-2 (r=2)"
        else:
            value = construction_formula(name, r, t)
            kind = "r-partite" if name in PARTITE else "general"
            provenance = f"{name} construction ({kind})"
        rows.append(BoundEntry(name=name, value=str(value), provenance=provenance))
    return rows

def upper_bounds(r: int, t: int) -> List[BoundEntry]:
    return [
        BoundEntry(name="(t-1)C(tr,r)", value=str((t - 1) * comb(t * r, r)),
                   provenance="multilinear, general F(r,t)"),
        BoundEntry(name="(t-1)t^r", value=str((t - 1) * t ** r),
                   provenance="multilinear, r-partite f(r,t)"),
        BoundEntry(name="(tr+t)^r", value=str((t * r + t) ** r),
                   provenance="spread threshold, general F(r,t)"),
    ]

def constants(r: int, t: int) -> List[BoundEntry]:
    C_r = (r + 1) ** r
    c_r = Fraction(1, (3 * r) ** r)
    return [
        BoundEntry(name="C_r", value=str(C_r), provenance="(r+1)^r"),
        BoundEntry(name="c_r", value=exact_str(c_r), provenance="(3r)^-r"),
        BoundEntry(name="C_r t^r", value=str(C_r * t ** r), provenance="upper, fixed r"),
        BoundEntry(name="c_r t^r", value=exact_str(c_r * t ** r), provenance="lower, fixed r"),
    ]

def _best(rows: List[BoundEntry]) -> Optional[BoundEntry]:
    best = None
    for row in rows:
        if best is None or int(row.value) > int(best.value):
            best = row
    return best

def bounds_report(r: int, t: int) -> BoundsReport:
    """
    Every bound as an exact integer or p/q string.
    Raises:
        ParameterDomainError: r < 2 or t < 2
    """
    if r < 2 or t < 2:
        raise ParameterDomainError(f"bounds need r >= 2 and t >= 2, got r={r} t={t}")
    lower = lower_bounds(r, t)
    exact = []
    if r == 2:
        exact.append(BoundEntry(name="f(2,t)", value=str(2 * t - 2), provenance="exact value 2t-2"))
    return BoundsReport(r=r, t=t, lower=lower, upper=upper_bounds(r, t), constants=constants(r, t),
                        exact=exact, best_lower_F=_best(lower),
                        best_lower_f=_best([row for row in lower if row.name in PARTITE]))

if __name__ == "__main__":
    print(bounds_report(2, 3))
