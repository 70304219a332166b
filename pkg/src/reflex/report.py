"""Report documents written by the command line tool.

Every value is exact and every key sorted, so two runs over the same inputs
produce byte-identical payloads apart from the optional timestamp.
"""
import dataclasses
import hashlib
from datetime import datetime
from datetime import timezone
from fractions import Fraction
from typing import Any
from typing import Dict
from typing import List
from typing import Optional
from typing import Sequence

from ._version import __version__
from .catalog import Catalog
from .catalog import canonical_json
from .exactnum import FieldElem
from .exactnum import format_elem
from .exactnum import format_rational
from .types import BranchReport
from .types import CuspReport
from .types import CuspRow
from .types import DivisorKind
from .types import LatticeInvariants
from .types import SlopeVerdict

Payload = Dict[str, Any]


@dataclasses.dataclass
class Report:
    command: str
    inputs: Dict[str, str]
    result: Payload
    notes: List[str] = dataclasses.field(default_factory=list)
    exhaustive: bool = True
    version: str = __version__
    timestamp: Optional[str] = None
    negative: bool = False

    def to_dict(self) -> Payload:
        data = {
            "version": self.version,
            "command": self.command,
            "inputs": dict(self.inputs),
            "result": self.result,
            "notes": list(self.notes),
            "exhaustive": self.exhaustive,
        }
        if self.timestamp is not None:
            data["timestamp"] = self.timestamp
        return data

    def to_json(self) -> str:
        return canonical_json(self.to_dict(), indent=2) + "\n"

    def result_digest(self) -> str:
        return hashlib.sha256(canonical_json(self.result).encode()).hexdigest()


def now() -> str:
    return datetime.now(timezone.utc).replace(microsecond=0).isoformat()


def entry_digest(entry: Payload) -> str:
    return hashlib.sha256(canonical_json(entry).encode()).hexdigest()


def input_hashes(catalog: Catalog, entries: Sequence[Sequence[str]]) -> Dict[str, str]:
    """sha256 of the canonical JSON of each (kind, name) catalog entry used."""
    return {
        f"{kind}:{name}": entry_digest(catalog.entry(kind, name)) for kind, name in entries
    }


def exact(value: Any) -> Any:
    """Convert numbers, field elements and vectors into their JSON form."""
    if isinstance(value, bool) or value is None or isinstance(value, (str, int)):
        return value
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, FieldElem):
        return format_elem(value)
    if isinstance(value, (list, tuple)):
        return [exact(x) for x in value]
    if isinstance(value, dict):
        return {str(key): exact(x) for key, x in value.items()}
    raise TypeError(f"Cannot serialize {value!r}")


def invariants_payload(name: str, invariants: LatticeInvariants) -> Payload:
    return {
        "lattice": name,
        "rank": invariants.rank,
        "signature": list(invariants.signature),
        "determinant": invariants.determinant,
        "even": invariants.is_even,
        "unimodular": invariants.is_unimodular,
        "discriminant_group": list(invariants.disc_group),
    }


def _kind_payload(kind: DivisorKind) -> Payload:
    return {"norm": kind.norm, "special_even": kind.special_even, "key": kind.key}


def branch_payload(report: BranchReport) -> Payload:
    return {
        "lattice": report.lattice,
        "group": report.group.value,
        "family": str(report.family),
        "classes": [
            {
                **_kind_payload(branch.kind),
                "degree": branch.degree,
                "witness": exact(branch.witness),
                "units": list(branch.units),
                "exhaustive": branch.exhaustive,
            }
            for branch in report.classes
        ],
        "absent": [
            {**_kind_payload(absent.kind), "exhaustive": absent.exhaustive,
             "reason": absent.reason}
            for absent in report.absent
        ],
        "exhaustive": report.exhaustive,
    }


def slope_payload(verdict: SlopeVerdict) -> Payload:
    payload = {
        "assumption": verdict.assumption.value,
        "verdict": verdict.verdict.value,
        "s": exact(verdict.s),
        "exponents": dict(sorted(verdict.exponents.items())),
        "per_class_slopes": {
            kind.key: format_rational(s)
            for kind, s in sorted(verdict.per_class_slopes.items())
        },
        "weight": exact(verdict.weight),
    }
    if verdict.power is not None:
        payload["power"] = verdict.power
    return payload


def _row_payload(row: CuspRow) -> Payload:
    return {
        "cusp": row.cusp.label,
        "lattice": row.cusp.lattice,
        "dim": row.cusp.dim,
        "quotient_gram": [list(r) for r in row.quotient_gram],
        "incidences": [
            {
                **_kind_payload(incidence.kind),
                "contained": incidence.contained,
                "witness": exact(incidence.witness),
                "exhaustive": incidence.exhaustive,
                "quotient_vectors": incidence.quotient_vectors,
            }
            for incidence in row.incidences
        ],
        "naked": row.naked,
        "inconclusive": row.inconclusive,
    }


def cusp_payload(report: CuspReport) -> Payload:
    return {
        "lattice": report.lattice,
        "cusps": [_row_payload(row) for row in report.rows],
        "naked_count": report.naked_count,
        "exhaustive": report.exhaustive,
    }
