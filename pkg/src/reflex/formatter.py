import sys
from typing import Any
from typing import Dict
from typing import Iterable

from .colors import colored
from .colors import colored_verdict
from .report import Report
from .types import Verdict

Payload = Dict[str, Any]


def print_summary(report: Report) -> None:
    for line in format_report(report):
        print(line, file=sys.stderr, flush=True)


def _class_label(entry: Payload) -> str:
    return f"H({entry['key']})"


def format_branch(branch: Payload) -> Iterable[str]:
    yield (
        f"Branch classes of {colored(branch['lattice'], 'cyan')} ({branch['family']}, "
        f"group {branch['group']}):"
    )
    if not branch["classes"]:
        yield "    none"
    for entry in branch["classes"]:
        units = f" units {', '.join(entry['units'])}" if entry["units"] else ""
        yield (
            f"    {colored(_class_label(entry), 'yellow')} degree {entry['degree']}"
            f"{units}, witness {entry['witness']}"
        )
    for entry in branch["absent"]:
        status = "absent" if entry["exhaustive"] else colored("not found", "red")
        yield f"    {_class_label(entry)} {status}: {entry['reason']}"


def format_slope(slope: Payload) -> Iterable[str]:
    verdict = colored_verdict(Verdict(slope["verdict"]))
    s = slope["s"] if slope["s"] is not None else "-"
    yield f"Assumption ({slope['assumption']}): s = {colored(s, attrs=['bold'])}, {verdict}"
    if slope["exponents"]:
        product = " * ".join(f"{name}^{a}" for name, a in slope["exponents"].items())
        yield f"    form: {product} (weight {slope['weight']})"
    for key, value in slope["per_class_slopes"].items():
        yield f"    s on H({key}) = {value}"


def format_cusps(result: Payload) -> Iterable[str]:
    for row in result["cusps"]:
        if row["naked"]:
            status, color = "naked", "green"
        elif row["inconclusive"]:
            status, color = "inconclusive", "red"
        else:
            status, color = "covered", "blue"
        yield (
            f"Cusp {colored(row['cusp'], 'cyan')} on {row['lattice']}: "
            f"{colored(status, color)} (quotient rank {len(row['quotient_gram'])})"
        )
        for incidence in row["incidences"]:
            where = "contained in" if incidence["contained"] else "not in"
            searched = incidence["exhaustive"] or incidence["contained"]
            suffix = "" if searched else " (search box)"
            yield f"    {where} {_class_label(incidence)}{suffix}"
    yield f"Naked cusps: {result['naked_count']}"


def format_report(report: Report) -> Iterable[str]:
    result = report.result
    yield colored(f"reflex {report.command}", attrs=["bold"])
    if "branch" in result:
        yield from format_branch(result["branch"])
    elif report.command == "ramify":
        yield from format_branch(result)
    if "slope" in result:
        yield from format_slope(result["slope"])
    if "cusps" in result:
        yield from format_cusps(result)
    if report.command.startswith("lattice") or report.command.startswith("herm"):
        for key, value in sorted(result.items()):
            if key not in ("gram", "trace_form", "invariants"):
                yield f"    {key}: {value}"
    if report.command.startswith("ledger"):
        forms = result.get("forms") or [result["form"]]
        for form in forms:
            divisor = " + ".join(
                f"{d['mult']}*H({d['norm']}{',se' if d['special_even'] else ''})"
                for d in form["divisor"]
            )
            yield (
                f"    {colored(form['name'], 'cyan')} on {form['ambient']}: "
                f"weight {form['weight']}, div = {divisor}"
            )
    for note in report.notes:
        yield colored(f"note: {note}", "yellow")
    if not report.exhaustive:
        yield colored("Some searches were not exhaustive", "red")
