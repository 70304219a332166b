from typing import Any
from typing import Optional
from typing import Sequence
from typing import Tuple

UNSUPPORTED_FIELD_HELP_TEXT = """
Hermitian lattices are only supported over the norm-Euclidean imaginary
quadratic fields Q(sqrt(d)) with d in {-1, -2, -3, -7, -11}. Check the
"field_d" value of the catalog entry.
"""

BUDGET_EXCEEDED_HELP_TEXT = """
The enumeration stopped before the search space was exhausted, so the
result only contains the vectors found so far. Raise the node budget with
'--budget-nodes' (and '--budget-results' if a result cap was set) or use
'--workers' to spread the search over several processes.
"""

SCHEMA_HELP_TEXT = """
Catalog entries are JSON objects (one per file, or a list of them) of the form

    {"kind": "quad_lattice" | "herm_lattice" | "form" | "cusp",
     "name": "...",
     "field_d": -1,                       (herm_lattice only)
     "gram": [[entry, ...], ...],         (lattices)
     "weight": "p/q",                     (form)
     "ambient": "lattice name",           (form)
     "divisor": [{"norm": -2, "special_even": false, "mult": "1"}],
     "lattice": "lattice name",           (cusp)
     "cusp_basis": [[int, ...], ...],     (cusp)
     "source": "..."}

Numbers are integers or "p/q" strings; Hermitian Gram entries are strings
such as "1/2 + -1/2*sqrt(-1)". Floating point values are rejected.
"""

UNKNOWN_ENTRY_HELP_TEXT = """
Use 'reflex ledger list' to see the available forms and 'reflex lattice info'
with one of the built-in lattice names, or point '--catalog' (or the
REFLEX_CATALOG environment variable) at a directory with your own entries.
"""

WRONG_SIGNATURE_HELP_TEXT = """
Branch reports need an orthogonal lattice of signature (2, n) with n > 2 or a
Hermitian lattice of signature (1, n) with n > 1.
"""

INVALID_ARGUMENT_HELP_TEXT = """
Orthogonal branch reports take an even negative '--norm-bound' (such as -4)
and the full_plus or stable group; unitary reports take any negative bound
(such as -2). Leave '--norm-bound' out to use the default.
"""


class ReflexError(Exception):
    ...


class UnsupportedField(ReflexError):
    HELP_TEXT = UNSUPPORTED_FIELD_HELP_TEXT


class NotPositiveDefinite(ReflexError):
    ...


class NotDefinite(ReflexError):
    ...


class BudgetExceeded(ReflexError):
    HELP_TEXT = BUDGET_EXCEEDED_HELP_TEXT

    def __init__(
        self,
        *args: Any,
        partial: Sequence[Tuple[int, ...]] = (),
        nodes: int = 0,
        **kwargs: Any,
    ) -> None:
        self.partial = list(partial)
        self.nodes = nodes
        super().__init__(*args, **kwargs)

    def __str__(self) -> str:
        message, *_ = self.args
        return (
            f"Budget exceeded after {self.nodes} nodes "
            f"({len(self.partial)} partial results): {message}"
        )


class DegenerateLattice(ReflexError):
    ...


class DegenerateForm(ReflexError):
    ...


class ZeroVector(ReflexError, ValueError):
    ...


class IsotropicVector(ReflexError, ValueError):
    ...


class NotPrimitive(ReflexError, ValueError):
    ...


class NonNegativeNorm(ReflexError, ValueError):
    ...


class NonIntegralTraceForm(ReflexError):
    ...


class NotUnit(ReflexError, ValueError):
    ...


class WrongSignature(ReflexError):
    HELP_TEXT = WRONG_SIGNATURE_HELP_TEXT


class InvalidArgument(ReflexError, ValueError):
    HELP_TEXT = INVALID_ARGUMENT_HELP_TEXT


class AmbientMismatch(ReflexError):
    ...


class NotIsotropic(ReflexError):
    ...


class NotSaturated(ReflexError):
    ...


class UnknownEntry(ReflexError, KeyError):
    HELP_TEXT = UNKNOWN_ENTRY_HELP_TEXT

    def __str__(self) -> str:
        message, *_ = self.args
        return str(message)


class SchemaError(ReflexError):
    HELP_TEXT = SCHEMA_HELP_TEXT

    def __init__(
        self,
        *args: Any,
        entry: Optional[str] = None,
        field_path: str = "",
        **kwargs: Any,
    ) -> None:
        self.entry = entry
        self.field_path = field_path
        super().__init__(*args, **kwargs)

    def __str__(self) -> str:
        message, *_ = self.args
        location = self.entry or "<unnamed>"
        if self.field_path:
            location += f":{self.field_path}"
        return f"Schema error in {location}: {message}"
