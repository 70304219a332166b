import json
import pathlib
import random
from typing import Any
from typing import Dict
from typing import List
from typing import Sequence
from typing import Tuple

from reflex.__main__ import main
from reflex.qlat import QuadLattice
from reflex.types import BranchClass
from reflex.types import BranchReport
from reflex.types import DivisorKind
from reflex.types import GroupChoice
from reflex.types import ModularFamily

SEED = 20240229


def rng(seed: int = SEED) -> random.Random:
    return random.Random(seed)


def random_vector(generator: random.Random, dim: int, bound: int = 3) -> Tuple[int, ...]:
    while True:
        vector = tuple(generator.randint(-bound, bound) for _ in range(dim))
        if any(vector):
            return vector


def mat_apply(matrix: Sequence[Sequence[Any]], vector: Sequence[Any]) -> Tuple[Any, ...]:
    """Image of a vector under a matrix whose j-th column is the image of e_j."""
    return tuple(sum((row[j] * vector[j] for j in range(len(vector))), 0) for row in matrix)


def synthetic_branch(
    lattice: str,
    family: ModularFamily,
    degrees: Dict[DivisorKind, int],
    group: GroupChoice = GroupChoice.FULL_PLUS,
) -> BranchReport:
    return BranchReport(
        lattice=lattice,
        group=group,
        family=family,
        classes=tuple(
            BranchClass(kind, degree, None, exhaustive=True)
            for kind, degree in degrees.items()
        ),
    )


def write_catalog(directory: pathlib.Path, name: str, entries: Any) -> pathlib.Path:
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / name
    path.write_text(json.dumps(entries))
    return path


def quad_entry(name: str, gram: Sequence[Sequence[int]], **extra: Any) -> Dict[str, Any]:
    return {"kind": "quad_lattice", "name": name, "gram": [list(r) for r in gram], **extra}


def run_cli(argv: List[str], capsys: Any) -> Tuple[int, str, str]:
    """Run the command line tool and return (exit code, stdout, stderr)."""
    try:
        main(argv)
        code = 0
    except SystemExit as e:
        code = int(e.code or 0)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def run_cli_json(argv: List[str], capsys: Any) -> Tuple[int, Dict[str, Any]]:
    code, out, _ = run_cli(argv, capsys)
    return code, json.loads(out)


A2 = QuadLattice("A2", ((2, -1), (-1, 2)))
