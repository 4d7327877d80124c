"""Wikitext to plain text transformation.

The stages run in a fixed order: regex pre-pass, category extraction,
template flattening and brace stripping, link simplification, table
flattening, section filtering, heading enumeration, tag policy, and a
final normalization sweep. Each stage is a total function; anything a
stage cannot resolve is left for a later one, and the final sweep
guarantees no markup residue survives.
"""

from __future__ import annotations

import re
import signal
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import wikitext as wt
from .config import (DEFAULT_PRESERVE_TAGS, CleanConfig, SectionPolicy,
                     TagPolicy, load_language_table)
from .records import CleanArticle, DumpDescriptor, RawPage, site_url

DEFAULT_FILE_PREFIXES = ("File", "Image", "Media")
DEFAULT_CATEGORY_PREFIXES = ("Category",)

_COMMENT = re.compile(r"<!--.*?-->", re.S)
_COMMENT_OPEN = re.compile(r"<!--.*\Z", re.S)
_REFERENCES_BLOCK = re.compile(r"<references[^<>]*?/\s*>|<references[^<>]*>.*?</references\s*>",
                               re.I | re.S)
_HORIZONTAL_RULE = re.compile(r"^-{4,}[ \t]*$", re.M)
_QUOTE_MARKS = re.compile(r"'{2,}")
_CONTROL = re.compile(r"[\x00\x01]")


def pre_clean(text: str, file_prefixes: tuple[str, ...] = DEFAULT_FILE_PREFIXES) -> str:
    """Regex pre-pass removing high-frequency noise before node parsing."""
    text = _CONTROL.sub("", text)
    text = _COMMENT.sub("", text)
    text = _COMMENT_OPEN.sub("", text)
    text = _REFERENCES_BLOCK.sub("", text)
    text = remove_file_links(text, file_prefixes)
    text = _HORIZONTAL_RULE.sub("", text)
    text = _QUOTE_MARKS.sub("", text)
    return text


def remove_file_links(text: str, file_prefixes: tuple[str, ...]) -> str:
    """Delete [[File:...]] style links with their captions, nesting-safe."""
    spans = []
    repls = []
    for start, end in wt.outer_spans(text, "[[", "]]"):
        target = wt.link_target(text[start + 2:end - 2])
        if wt.has_prefix(target, file_prefixes):
            spans.append((start, end))
            repls.append("")
    return wt.replace_spans(text, spans, repls) if spans else text


def extract_categories(text: str, category_prefixes: tuple[str, ...] = DEFAULT_CATEGORY_PREFIXES,
                       ) -> tuple[str, list[str]]:
    """Pull category links out of the text.

    Returns the text with all category wikilinks removed and the category
    names in order of first appearance, prefix and sort key stripped.
    """
    spans = []
    repls = []
    names: dict[str, None] = {}
    for start, end in wt.outer_spans(text, "[[", "]]"):
        inner = text[start + 2:end - 2]
        target = wt.link_target(inner)
        if not wt.has_prefix(target, category_prefixes):
            continue
        spans.append((start, end))
        repls.append("")
        name = target.split(":", 1)[1].strip()
        if name:
            names.setdefault(name, None)
    if spans:
        text = wt.replace_spans(text, spans, repls)
    return text, list(names)


_TEMPLATE_NAME_WS = re.compile(r"\s+")
_IDENT_KEY = re.compile(r"\s*[\w\- ]+\s*\Z")


def flatten_templates(text: str, keep: frozenset[str] = frozenset()) -> str:
    """Resolve {{...}} constructs: keep-list templates become their
    parameter values joined by spaces, everything else is dropped whole.

    Larger templates are independent outermost spans, so per-span work is
    order-free; nested markup inside kept values is flattened recursively.
    """
    text = _COMMENT.sub("", text)
    text = wt.strip_argument_markers(text)
    spans = wt.outer_spans(text, "{{", "}}")
    if not spans:
        return text
    repls = []
    for start, end in spans:
        inner = text[start + 2:end - 2]
        parts = wt.split_top(inner)
        name = _TEMPLATE_NAME_WS.sub(" ", parts[0]).strip().casefold()
        if name in keep:
            values = []
            for part in parts[1:]:
                eq = wt.split_top(part, "=")
                if len(eq) >= 2 and _IDENT_KEY.match(eq[0]):
                    value = "=".join(eq[1:])
                else:
                    value = part
                value = flatten_templates(value, keep).strip()
                if value:
                    values.append(value)
            repls.append(" ".join(values))
        else:
            repls.append("")
    return wt.replace_spans(text, spans, repls)


strip_braces = wt.strip_braces

_EXTERNAL_LINK = re.compile(r"\[(?:https?|ftp)s?://[^\s\]]+(?:\s+([^\]]*))?\]", re.I)


def simplify_links(text: str,
                   file_prefixes: tuple[str, ...] = DEFAULT_FILE_PREFIXES,
                   category_prefixes: tuple[str, ...] = DEFAULT_CATEGORY_PREFIXES) -> str:
    """Reduce wikilinks to their visible text.

    File and category links vanish with their content; [[T|V]] keeps V,
    [[T]] keeps T; interwiki links stay intact for the final sweep;
    external [url label] keeps the label, bare [url] is removed.
    """
    out: list[str] = []
    i = 0
    n = len(text)
    while i < n:
        if text.startswith("[[", i):
            end = wt.find_matching(text, i, "[[", "]]")
            if end is None:
                i += 2
                continue
            out.append(_render_link(text[i + 2:end - 2], file_prefixes, category_prefixes))
            i = end
        else:
            out.append(text[i])
            i += 1
    text = "".join(out)
    return _EXTERNAL_LINK.sub(lambda m: m.group(1) or "", text)


def _render_link(inner: str, file_prefixes: tuple[str, ...],
                 category_prefixes: tuple[str, ...]) -> str:
    target = wt.link_target(inner)
    if wt.has_prefix(target, file_prefixes) or wt.has_prefix(target, category_prefixes):
        return ""
    if wt.is_interwiki(target):
        # language link: leave whole for final_clean to drop
        return "[[" + inner + "]]"
    simplified = simplify_links(inner, file_prefixes, category_prefixes)
    head, sep, label = simplified.partition("|")
    if sep and label.strip():
        return label.strip()
    return head.strip().lstrip(":").strip()


_CELL_ATTR_KEYS = (
    "style", "align", "width", "height", "class", "colspan", "rowspan",
    "bgcolor", "border", "cellpadding", "cellspacing", "valign", "scope",
)


def _clean_cell(cell: str) -> str:
    head, sep, rest = cell.partition("|")
    if sep and "=" in head and "[[" not in head:
        cell = rest
    return cell.strip()


def _flatten_one_table(body: str) -> str:
    """Flatten one innermost table body (text between {| and |})."""
    lines = body.split("\n")
    rows: list[list[str]] = [[]]
    for idx, line in enumerate(lines):
        if idx == 0:
            continue  # table attributes live on the {| line
        stripped = line.strip()
        if stripped.startswith("|-"):
            rows.append([])
            continue
        if stripped.startswith("|+"):
            cell = _clean_cell(stripped[2:])
            if cell:
                rows.append([cell])
                rows.append([])
            continue
        if stripped.startswith("!"):
            cells = re.split(r"!!|\|\|", stripped[1:])
            rows[-1].extend(c for c in (_clean_cell(x) for x in cells) if c)
            continue
        if stripped.startswith("|"):
            cells = stripped[1:].split("||")
            rows[-1].extend(c for c in (_clean_cell(x) for x in cells) if c)
            continue
        if stripped:
            rows[-1].append(stripped)
    flat = [" ".join(row) for row in rows if row]
    return "\n".join(flat)


def flatten_tables(text: str) -> str:
    """Replace {| ... |} tables with their cell text.

    Innermost tables are processed first; an unclosed table swallows the
    remainder of the text as its body (auto-balancing); stray closers are
    dropped at the end.
    """
    guard = 0
    while "{|" in text and guard < 10000:
        guard += 1
        start = text.rfind("{|")
        end = text.find("|}", start + 2)
        if end < 0:
            text = text[:start] + _flatten_one_table(text[start + 2:])
        else:
            text = text[:start] + _flatten_one_table(text[start + 2:end]) + text[end + 2:]
    return text.replace("|}", "")


_HEADING = re.compile(r"^(={1,6})[ \t]*(.+?)[ \t]*\1[ \t]*$", re.M)


@dataclass
class _Section:
    level: int
    title: str
    body: str


def _split_sections(text: str) -> tuple[str, list[_Section]]:
    matches = list(_HEADING.finditer(text))
    if not matches:
        return text, []
    lead = text[:matches[0].start()]
    sections = []
    for i, m in enumerate(matches):
        body_end = matches[i + 1].start() if i + 1 < len(matches) else len(text)
        sections.append(_Section(len(m.group(1)), m.group(2), text[m.end():body_end]))
    return lead, sections


def _prune_empty(sections: list[_Section], keep: list[bool]) -> list[bool]:
    # a heading survives only if its own body or any kept descendant has text
    n = len(sections)
    filled = [keep[i] and bool(sections[i].body.strip()) for i in range(n)]
    for i in range(n - 1, -1, -1):
        if not keep[i] or filled[i]:
            continue
        for j in range(i + 1, n):
            if sections[j].level <= sections[i].level:
                break
            if keep[j] and filled[j]:
                filled[i] = True
                break
    return filled


_QUOTE_LINE = re.compile(r"^\s*\*", re.M)


def filter_sections(text: str, policy: SectionPolicy) -> str:
    """Drop or retain sections by heading according to the policy mode."""
    lead, sections = _split_sections(text)
    n = len(sections)
    if policy.mode == "exclude_listed":
        keep = [True] * n
        i = 0
        while i < n:
            if policy.matches(sections[i].title):
                level = sections[i].level
                keep[i] = False
                i += 1
                while i < n and sections[i].level > level:
                    keep[i] = False
                    i += 1
            else:
                i += 1
    else:
        keep = [False] * n
        i = 0
        while i < n:
            if policy.matches(sections[i].title):
                level = sections[i].level
                keep[i] = True
                i += 1
                while i < n and sections[i].level > level:
                    keep[i] = True
                    i += 1
            else:
                i += 1
        if not (policy.keep_lead and _QUOTE_LINE.search(lead)):
            lead = ""
    keep = _prune_empty(sections, keep)
    parts = [lead.strip("\n")] if lead.strip() else []
    for flag, section in zip(keep, sections):
        if flag:
            marker = "=" * section.level
            parts.append(f"{marker} {section.title} {marker}\n{section.body.strip(chr(10))}")
    return "\n".join(parts) + ("\n" if parts else "")


def enumerate_headings(text: str) -> str:
    """Rewrite wikitext headings as outline-numbered plain lines."""
    stack: list[tuple[int, int]] = []  # (level, counter)

    def number(m: re.Match) -> str:
        level = len(m.group(1))
        while stack and stack[-1][0] > level:
            stack.pop()
        if stack and stack[-1][0] == level:
            stack[-1] = (level, stack[-1][1] + 1)
        else:
            stack.append((level, 1))
        label = ".".join(str(c) for _, c in stack)
        return f"{label} {m.group(2)}"

    return _HEADING.sub(number, text)


_PLACEHOLDER = "\x00{}\x01"
_ANY_TAG = re.compile(r"</?([A-Za-z][A-Za-z0-9-]*)(\s[^<>]*?)?/?>", re.S)


def _pair_pattern(tag: str) -> re.Pattern:
    return re.compile(rf"<{tag}(?:\s[^<>]*?)?>.*?</{tag}\s*>", re.I | re.S)


def _selfclosing_pattern(tag: str) -> re.Pattern:
    return re.compile(rf"<{tag}(?:\s[^<>]*?)?/\s*>", re.I)


def apply_tag_policy(text: str, policy: TagPolicy | None = None,
                     trace: list | None = None) -> str:
    """Handle HTML-like tags: destroy with content, preserve verbatim,
    or strip the tag and keep its content."""
    if policy is None:
        policy = TagPolicy()
    kept: list[str] = []

    for tag in sorted(policy.preserve):
        def stash(m: re.Match, _tag: str = tag) -> str:
            kept.append(m.group(0))
            if trace is not None:
                trace.append((_tag, "preserve"))
            return _PLACEHOLDER.format(len(kept) - 1)

        text = _pair_pattern(tag).sub(stash, text)
        text = _selfclosing_pattern(tag).sub(stash, text)
    for tag in sorted(policy.destroy):
        text, n_pair = _pair_pattern(tag).subn("", text)
        text, n_self = _selfclosing_pattern(tag).subn("", text)
        if trace is not None:
            trace.extend((tag, "destroy") for _ in range(n_pair + n_self))

    def strip_tag(m: re.Match) -> str:
        if trace is not None:
            trace.append((m.group(1).lower(), "strip"))
        return ""

    text = _ANY_TAG.sub(strip_tag, text)
    for i, chunk in enumerate(kept):
        text = text.replace(_PLACEHOLDER.format(i), chunk)
    return text


_INTERWIKI_LINK = re.compile(r"\[\[\s*[a-z]{2,3}(?:-[a-z]+)*:[^\[\]]*\]\]")
_HANGING_TEMPLATE = re.compile(r"\{\{[^{}\n]*\|?")
_MAGIC_WORD = re.compile(r"__[A-Za-z0-9]+__")
_PIPE_LINE = re.compile(r"^[ \t]*\|[^\n]*$", re.M)
_ATTR_LINE = re.compile(
    r"^[ \t]*(?:style|align|width|height|class|colspan|rowspan|bgcolor|"
    r"border|cellpadding|cellspacing|valign|scope)[ \t]*=[^\n]*$",
    re.M | re.I)
_SPACES = re.compile(r"[ \t]+")
_SPACED_NEWLINE = re.compile(r"[ \t]*\n[ \t]*")
_MANY_NEWLINES = re.compile(r"\n{3,}")


def final_clean(text: str, table=None,
                preserve: frozenset[str] = DEFAULT_PRESERVE_TAGS) -> str:
    """Final sweep: second parse pass plus normalization.

    Guarantees the no-residue invariant: the output contains none of
    "{{", "}}", "[[", "]]", "{|", "<!--", or magic words.
    """
    if table is None:
        table = load_language_table("default")

    kept: list[str] = []

    def stash(m: re.Match) -> str:
        kept.append(m.group(0))
        return _PLACEHOLDER.format(len(kept) - 1)

    for tag in sorted(preserve):
        text = _pair_pattern(tag).sub(stash, text)
        text = _selfclosing_pattern(tag).sub(stash, text)

    text = _COMMENT.sub("", text)
    text = _COMMENT_OPEN.sub("", text)
    text = _INTERWIKI_LINK.sub("", text)
    text = wt.strip_argument_markers(text)
    text = wt.strip_braces(text)
    text = simplify_links(text, table.file_prefixes if table else DEFAULT_FILE_PREFIXES)
    text = flatten_tables(text)
    text = _HANGING_TEMPLATE.sub("", text)
    text = text.replace("{{", "").replace("}}", "")
    text = text.replace("[[", "").replace("]]", "")
    text = _MAGIC_WORD.sub("", text)
    text = text.replace("__", "")
    text = _ANY_TAG.sub("", text)
    text = _PIPE_LINE.sub("", text)
    text = _ATTR_LINE.sub("", text)
    if table is not None:
        for old, new in table.replacements:
            text = text.replace(old, new)
    text = text.replace("\r\n", "\n").replace("\r", "\n").replace(" ", " ")
    text = _SPACES.sub(" ", text)
    text = _SPACED_NEWLINE.sub("\n", text)
    text = _MANY_NEWLINES.sub("\n\n", text)
    for i, chunk in enumerate(kept):
        text = text.replace(_PLACEHOLDER.format(i), chunk)
    # preserved spans skip the passes above, so unbalanced markup debris
    # inside them (balanced constructs were handled before masking) needs
    # one last literal sweep
    for marker in ("{{", "}}", "[[", "]]", "{|", "|}", "<!--"):
        text = text.replace(marker, "")
    return text.strip()


_CYRILLIC = re.compile(r"[Ѐ-ӿ]")


def compute_metadata(text: str, title: str, descriptor: DumpDescriptor) -> tuple[str, int, float]:
    """Canonical URL, whitespace word count, Cyrillic token ratio."""
    url = site_url(descriptor.language_code, descriptor.project, title)
    tokens = text.split()
    word_count = len(tokens)
    if word_count == 0:
        return url, 0, 0.0
    cyrillic = sum(1 for tok in tokens if _CYRILLIC.search(tok))
    return url, word_count, cyrillic / word_count


def clean_article(page: RawPage, config: CleanConfig | None = None) -> CleanArticle | None:
    """Run the full transformation on one page.

    Returns None when cleaning leaves no text.
    """
    if config is None:
        config = CleanConfig()
    assert config.table is not None and config.section_policy is not None
    text = pre_clean(page.text, config.table.file_prefixes)
    text, categories = extract_categories(text, config.table.category_prefixes)
    text = flatten_templates(text, config.keep_templates_folded)
    text = wt.strip_braces(text)
    text = simplify_links(text, config.table.file_prefixes, config.table.category_prefixes)
    text = flatten_tables(text)
    text = filter_sections(text, config.section_policy)
    text = enumerate_headings(text)
    text = apply_tag_policy(text, config.tag_policy)
    text = final_clean(text, config.table, config.tag_policy.preserve)
    if not text:
        return None
    url, word_count, ratio = compute_metadata(text, page.title, config.descriptor)
    return CleanArticle(
        page_id=page.page_id,
        title=page.title,
        url=url,
        text=text,
        categories=categories,
        word_count=word_count,
        cyrillic_ratio=ratio,
    )


@dataclass
class CleanStats:
    """Counters from one cleaning pass."""

    cleaned: int = 0
    dropped_empty: int = 0
    dropped_timeout: int = 0


class _CleanTimeout(Exception):
    pass


def _raise_timeout(signum, frame):
    raise _CleanTimeout()


def _clean_guarded(page: RawPage, config: CleanConfig) -> tuple[int, CleanArticle | None, str]:
    """Clean one page under the per-article wall-clock budget."""
    use_alarm = hasattr(signal, "SIGALRM") and config.timeout_s > 0
    if not use_alarm:
        article = clean_article(page, config)
        return page.page_id, article, "" if article else "empty"
    old = signal.signal(signal.SIGALRM, _raise_timeout)
    signal.setitimer(signal.ITIMER_REAL, config.timeout_s)
    try:
        article = clean_article(page, config)
        return page.page_id, article, "" if article else "empty"
    except _CleanTimeout:
        return page.page_id, None, "timeout"
    finally:
        signal.setitimer(signal.ITIMER_REAL, 0)
        signal.signal(signal.SIGALRM, old)


_WORKER_CONFIG: CleanConfig | None = None


def _init_worker(config: CleanConfig) -> None:
    global _WORKER_CONFIG
    _WORKER_CONFIG = config


def _clean_in_worker(page: RawPage) -> tuple[int, CleanArticle | None, str]:
    assert _WORKER_CONFIG is not None
    return _clean_guarded(page, _WORKER_CONFIG)


def clean_stream(pages, config: CleanConfig | None = None, workers: int = 1,
                 ) -> tuple[list[CleanArticle], CleanStats]:
    """Clean a page stream, optionally across processes.

    Output is sorted by page_id so the result does not depend on worker
    count or scheduling.
    """
    if config is None:
        config = CleanConfig()
    stats = CleanStats()
    articles: list[CleanArticle] = []

    if workers <= 1:
        results = (_clean_guarded(page, config) for page in pages)
        for _, article, reason in results:
            _tally(article, reason, articles, stats)
    else:
        with ProcessPoolExecutor(max_workers=workers, initializer=_init_worker,
                                 initargs=(config,)) as pool:
            for _, article, reason in pool.map(_clean_in_worker, pages, chunksize=16):
                _tally(article, reason, articles, stats)

    articles.sort(key=lambda a: a.page_id)
    stats.cleaned = len(articles)
    return articles, stats


def _tally(article: CleanArticle | None, reason: str,
           articles: list[CleanArticle], stats: CleanStats) -> None:
    if article is not None:
        articles.append(article)
    elif reason == "timeout":
        stats.dropped_timeout += 1
    else:
        stats.dropped_empty += 1
