from ._version import __version__
from .catalog import load_catalog
from .hlat import HermLattice
from .ledger import FormRecord
from .qlat import QuadLattice
from .ramify import branch_report
from .slope import check_assumption_i
from .slope import check_assumption_ii
from .slope import find_assumption_i_combination

__all__ = [
    "__version__",
    "FormRecord",
    "HermLattice",
    "QuadLattice",
    "branch_report",
    "check_assumption_i",
    "check_assumption_ii",
    "find_assumption_i_combination",
    "load_catalog",
]
