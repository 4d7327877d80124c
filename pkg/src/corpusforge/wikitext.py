"""Low-level wikitext scanning helpers.

Everything here is a total function on strings: balanced-delimiter
matching, top-level parameter splitting, and span collection. Malformed
input never raises; unmatched constructs are left in place for later
passes to mop up.
"""

from __future__ import annotations

import re

OPENERS = ("{{", "[[", "{|")
CLOSERS = ("}}", "]]", "|}")


def find_matching(text: str, start: int, open_s: str, close_s: str) -> int | None:
    """Return the index just past the closer matching the opener at start.

    The opener must begin exactly at ``start``. Returns None when the
    span never closes.
    """
    if not text.startswith(open_s, start):
        return None
    depth = 0
    i = start
    n = len(text)
    while i < n:
        if text.startswith(open_s, i):
            depth += 1
            i += len(open_s)
        elif text.startswith(close_s, i):
            depth -= 1
            i += len(close_s)
            if depth == 0:
                return i
        else:
            i += 1
    return None


def outer_spans(text: str, open_s: str, close_s: str) -> list[tuple[int, int]]:
    """Collect (start, end) of outermost balanced spans, left to right.

    Unbalanced openers are skipped and do not appear in the result.
    """
    spans: list[tuple[int, int]] = []
    i = 0
    while True:
        j = text.find(open_s, i)
        if j < 0:
            return spans
        end = find_matching(text, j, open_s, close_s)
        if end is None:
            i = j + len(open_s)
        else:
            spans.append((j, end))
            i = end


def split_top(s: str, sep: str = "|") -> list[str]:
    """Split on sep occurrences that sit at nesting depth zero.

    Depth is tracked across {{ }}, [[ ]] and {| |} pairs so pipes inside
    nested constructs stay attached to their part.
    """
    parts: list[str] = []
    buf: list[str] = []
    depth = 0
    i = 0
    n = len(s)
    while i < n:
        two = s[i:i + 2]
        if two in OPENERS:
            depth += 1
            buf.append(two)
            i += 2
        elif two in CLOSERS and depth > 0:
            depth -= 1
            buf.append(two)
            i += 2
        elif s[i] == sep and depth == 0:
            parts.append("".join(buf))
            buf = []
            i += 1
        else:
            buf.append(s[i])
            i += 1
    parts.append("".join(buf))
    return parts


def strip_braces(text: str) -> str:
    """Remove every balanced {{...}} range, matching nested pairs.

    Unbalanced openers stay put; a later normalization pass collapses
    them.
    """
    spans = outer_spans(text, "{{", "}}")
    if not spans:
        return text
    out: list[str] = []
    pos = 0
    for start, end in spans:
        out.append(text[pos:start])
        pos = end
    out.append(text[pos:])
    return "".join(out)


_ARG_MARKER = re.compile(r"\{\{\{[^{}]*\}\}\}")


def strip_argument_markers(text: str) -> str:
    """Drop {{{...}}} placeholders left by unexpanded template source."""
    prev = None
    while prev != text:
        prev = text
        text = _ARG_MARKER.sub("", text)
    return text


def replace_spans(text: str, spans: list[tuple[int, int]], repls: list[str]) -> str:
    """Rebuild text with each (start, end) span replaced by its string."""
    out: list[str] = []
    pos = 0
    for (start, end), repl in zip(spans, repls):
        out.append(text[pos:start])
        out.append(repl)
        pos = end
    out.append(text[pos:])
    return "".join(out)


def link_target(inner: str) -> str:
    """The target part of a wikilink body (text before the first pipe)."""
    pipe = inner.find("|")
    target = inner if pipe < 0 else inner[:pipe]
    return target.strip()


_INTERWIKI = re.compile(r"[a-z]{2,3}(-[a-z]+)*:\S")


def is_interwiki(target: str) -> bool:
    """True for language-prefixed targets like fr:Page or zh-min:X."""
    return bool(_INTERWIKI.match(target.strip()))


def has_prefix(target: str, prefixes: tuple[str, ...]) -> bool:
    """True when target starts with any prefix plus a colon (case-folded)."""
    folded = target.strip().casefold()
    return any(folded.startswith(p.casefold() + ":") for p in prefixes)
