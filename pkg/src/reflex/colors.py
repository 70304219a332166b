import os
import re
import sys
from typing import Iterable
from typing import Optional
from typing import TextIO

from .types import Verdict

ATTRIBUTES = {"bold": 1, "faint": 2, "italized": 3, "underline": 4}
ATTRIBUTES_RE = r"\033\[(?:%s)m" % "|".join(str(v) for v in ATTRIBUTES.values())

COLORS = dict(zip(["grey", "red", "green", "yellow", "blue", "magenta", "cyan", "white"],
                  range(30, 38)))
COLORS_RE = r"\033\[(?:%s)m" % "|".join(str(v) for v in COLORS.values())

RESET = "\033[0m"
RESET_RE = r"\033\[0m"

VERDICT_COLORS = {
    Verdict.FANO: "green",
    Verdict.CALABI_YAU: "yellow",
    Verdict.CANONICAL_MODEL: "blue",
    Verdict.ANTI_CANONICAL_BIG: "green",
    Verdict.NO_CONCLUSION: "red",
    Verdict.NO_MATCH: "red",
}


def _is_a_tty(stream: TextIO) -> bool:
    return hasattr(stream, "isatty") and stream.isatty()


def colored(
    text: str,
    color: Optional[str] = None,
    attrs: Optional[Iterable[str]] = None,
    stream: Optional[TextIO] = None,
) -> str:
    """Colorize text for the given stream (stderr by default).

    Nothing is added when NO_COLOR is set or the stream is not a terminal.
    Available colors: grey, red, green, yellow, blue, magenta, cyan, white.
    Available attributes: bold, faint, italized, underline.
    """
    if os.getenv("NO_COLOR") is not None or not _is_a_tty(stream or sys.stderr):
        return text
    return format_colored(text, color, attrs)


def format_colored(
    text: str,
    color: Optional[str] = None,
    attrs: Optional[Iterable[str]] = None,
) -> str:
    fmt_str = "\033[%dm%s"
    if color is not None:
        text = re.sub(COLORS_RE + "(.*?)" + RESET_RE, r"\1", text)
        text = fmt_str % (COLORS[color], text)
    if attrs is not None:
        text = re.sub(ATTRIBUTES_RE + "(.*?)" + RESET_RE, r"\1", text)
        for attr in attrs:
            text = fmt_str % (ATTRIBUTES[attr], text)
    return text + RESET


def colored_verdict(verdict: Verdict) -> str:
    return colored(verdict.value, VERDICT_COLORS[verdict], attrs=["bold"])
