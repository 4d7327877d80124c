"""Synthetic fixtures shared across the test suite.

Word pools are built from syllables only. Digit-free words matter: the
tokenizer collapses digit runs, so words with numeric suffixes would all
collapse onto one token and every article would look like every other.
"""

from __future__ import annotations

import bz2
import itertools
import random
from pathlib import Path

import numpy as np

_SYLLABLES = [c + v for c in "bvgdzjklmnprstfch" for v in "aeiou"]
_ALL_WORDS = ["".join(t) for t in itertools.product(_SYLLABLES, repeat=2)]
_rng = random.Random(11)
_rng.shuffle(_ALL_WORDS)

# frequent words: appear across many articles, land in the vocabulary
POOL = _ALL_WORDS[:300]
# rare proper names: one or two uses each, fall below the frequency cutoff
NAMES = [w.capitalize() for w in _ALL_WORDS[300:1300]]

TEMPLATES = [
    "{n} je naselje u opštini {n2} u okrugu broj {d}. Prema popisu iz {d2} "
    "bilo je {d3} stanovnika. Naselje se nalazi na nadmorskoj visini od {d4} "
    "metara a površina iznosi {d5} hektara. Kroz naselje protiče reka i pored "
    "nje prolazi regionalni put koji povezuje opštinski centar sa susednim selima.",
    "{n} je reka koja izvire ispod planine {n2} na visini od {d} metara. "
    "Dužina toka iznosi {d2} kilometara a sliv obuhvata {d3} kvadratnih "
    "kilometara. Reka protiče kroz nekoliko sela i uliva se u veću reku kod "
    "mesta gde je izgrađen stari kameni most tokom {d4} godine.",
    "{n} je fudbalski klub osnovan {d} godine u mestu {n2}. Klub se takmiči "
    "u ligi ranga {d2} i svoje utakmice igra na stadionu kapaciteta {d3} "
    "gledalaca. Najveći uspeh kluba je osvajanje kupa {d4} godine kada je u "
    "finalu pobedio gradskog rivala rezultatom dva prema jedan.",
    "{n} je vrsta biljke iz porodice koju je opisao botaničar {n2} tokom {d} "
    "godine. Biljka raste na visinama do {d2} metara i cveta od maja do "
    "avgusta. Stabljika dostiže visinu od {d3} centimetara a listovi su "
    "duguljasti i nazubljeni po obodu sa sitnim dlačicama.",
    "{n} je železnička stanica otvorena {d} godine na pruzi koja povezuje "
    "{n2} sa glavnim gradom. Stanica se nalazi na kilometru {d2} pruge i ima "
    "{d3} koloseka. Kroz stanicu dnevno prođe oko {d4} vozova a stanična "
    "zgrada je proglašena spomenikom kulture {d5} godine.",
]

N_TEMPLATED = 500
N_DISTINCT = 500
TEMPLATED_IDS = frozenset(range(1, N_TEMPLATED + 1))
DISTINCT_IDS = frozenset(range(N_TEMPLATED + 1, N_TEMPLATED + N_DISTINCT + 1))


def _templated_text(i: int, rng: random.Random) -> str:
    """One article stamped out of a sentence template: only names and numbers vary."""
    skeleton = TEMPLATES[i % len(TEMPLATES)]
    extra = " ".join(rng.choice(POOL) for _ in range(5))
    body = skeleton.format(
        n=NAMES[i],
        n2=NAMES[500 + (i * 7 + 3) % 500],
        d=rng.randint(1, 9999), d2=rng.randint(1, 9999), d3=rng.randint(1, 9999),
        d4=rng.randint(1, 9999), d5=rng.randint(1, 9999),
    )
    return body + " Dodatak " + extra + ". [[Kategorija:Naselja]]"


def _distinct_text(rng: random.Random) -> str:
    words = [rng.choice(POOL) for _ in range(60)]
    return " ".join(words).capitalize() + ". [[Kategorija:Naselja]]"


def _page(pid: int, title: str, text: str, ns: int = 0, redirect: bool = False) -> str:
    flag = '<redirect title="Drugde"/>\n    ' if redirect else ""
    return (
        "  <page>\n"
        f"    <title>{title}</title>\n"
        f"    <ns>{ns}</ns>\n"
        f"    <id>{pid}</id>\n"
        f"    {flag}<revision>\n"
        f"      <id>{pid * 10}</id>\n"
        f"      <text>{text}</text>\n"
        "    </revision>\n"
        "  </page>"
    )


def _wrap(pages: list[str]) -> str:
    return (
        '<mediawiki xmlns="http://www.mediawiki.org/xml/export-0.10/">\n'
        + "\n".join(pages)
        + "\n</mediawiki>\n"
    )


def mini_dump_xml(seed: int = 11) -> str:
    """1000-article dump: 500 template-stamped articles, 500 mutually distinct.

    Every article carries the same category so the whole corpus lands in one
    bucket and the two populations compete on similarity alone.
    """
    rng = random.Random(seed)
    pages = []
    pid = 1
    for i in range(N_TEMPLATED):
        pages.append(_page(pid, f"Templated {i}", _templated_text(i, rng)))
        pid += 1
    for _ in range(N_DISTINCT):
        pages.append(_page(pid, f"Distinct {pid}", _distinct_text(rng)))
        pid += 1
    return _wrap(pages)


def write_mini_dump(path: Path, seed: int = 11) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(bz2.compress(mini_dump_xml(seed).encode("utf-8")))
    return path


def _exact_chars(prefix: str, total: int) -> str:
    """Pad with a repeated word so the text is exactly `total` characters."""
    filler = (" reč" * total)[: total - len(prefix)]
    text = prefix + filler
    assert len(text) == total
    return text


def ingest_dump_xml() -> tuple[str, dict]:
    """20-page dump with known-good ground truth for the ingest filters.

    Mix: 12 valid articles (one exactly at the 80-char floor), 4 redirects
    (2 flagged in XML, 2 by leading keyword), 3 non-article namespace pages,
    1 page one character short of the floor.
    """
    long_text = (
        "Ovo je sasvim običan članak sa dovoljno teksta da pređe donju "
        "granicu od osamdeset znakova i bude zadržan u korpusu."
    )
    pages = [
        _page(1, "Prvi članak", long_text),
        _page(2, "Drugi članak", long_text + " Još malo teksta."),
        _page(3, "Preusmerenje jedan", long_text, redirect=True),
        _page(4, "Projekat strana", long_text, ns=4),
        _page(5, "Treći članak", long_text),
        _page(6, "Prekratak", _exact_chars("Kratak tekst.", 79)),
        _page(7, "Na granici", _exact_chars("Tačno osamdeset znakova ovde.", 80)),
        _page(8, "Preusmerenje dva", "#REDIRECT [[Prvi članak]]"),
        _page(9, "Četvrti članak", long_text),
        _page(10, "Projekat pravila", long_text, ns=4),
        _page(11, "Peti članak", long_text),
        _page(12, "Preusmerenje tri", "#ПРЕУСМЕРИ [[Drugi članak]]"),
        _page(13, "Šesti članak", long_text),
        _page(14, "Sedmi članak", long_text),
        _page(15, "Projekat spisak", long_text, ns=4),
        _page(16, "Osmi članak", long_text),
        _page(17, "Preusmerenje četiri", long_text, redirect=True),
        _page(18, "Deveti članak", long_text),
        _page(19, "Deseti članak", long_text),
        _page(20, "Jedanaesti članak", long_text),
    ]
    truth = {
        "pages_read": 20,
        "retained": 12,
        "skipped_redirect": 4,
        "skipped_namespace": 3,
        "skipped_too_short": 1,
        "valid_ids": [1, 2, 5, 7, 9, 11, 13, 14, 16, 18, 19, 20],
    }
    return _wrap(pages), truth


def planted_pair(rng: np.random.Generator, jaccard: float,
                 size: int = 200) -> tuple[set, set]:
    """Two trigram sets of equal size with an exactly known Jaccard overlap.

    |A| = |B| = size with k shared rows gives J = k / (2*size - k); solving
    for k plants the requested value up to integer rounding.
    """
    k = round(jaccard * 2 * size / (1 + jaccard))
    need = 2 * size - k
    rows: set = set()
    while len(rows) < need:
        batch = rng.integers(0, 1_000_000, size=(need, 3))
        rows.update(tuple(int(x) for x in row) for row in batch)
    ordered = sorted(rows)[:need]
    shared = ordered[:k]
    a = set(shared) | set(ordered[k:size])
    b = set(shared) | set(ordered[size:need])
    return a, b


FUZZ_WORDS = POOL[:80]


def fuzz_article(rng: random.Random, depth: int = 10) -> str:
    """Random wikitext with nested markup, including unbalanced debris."""

    def words(n: int) -> str:
        return " ".join(rng.choice(FUZZ_WORDS) for _ in range(n))

    def node(d: int) -> str:
        roll = rng.random()
        if d <= 0 or roll < 0.35:
            return words(rng.randint(1, 6))
        if roll < 0.50:
            name = rng.choice(["Infobox grad", "cite web", "ppoem", "cquote", "navbox"])
            inner = "|".join(node(d - 1) for _ in range(rng.randint(1, 3)))
            return "{{" + name + "|" + inner + "}}"
        if roll < 0.62:
            label = "|" + words(2) if rng.random() < 0.5 else ""
            return "[[" + node(d - 1) + label + "]]"
        if roll < 0.72:
            rows = "\n".join("| " + node(d - 1) for _ in range(rng.randint(1, 3)))
            return "{|\n" + rows + "\n|}"
        if roll < 0.80:
            tail = " -->" if rng.random() < 0.9 else ""
            return "<!-- " + words(3) + tail
        if roll < 0.88:
            tag = rng.choice(["ref", "div", "math", "gallery", "span", "code"])
            return f"<{tag}>" + node(d - 1) + f"</{tag}>"
        if roll < 0.94:
            return "== " + words(2) + " =="
        return rng.choice(["{{", "[[", "{|", "}}", "]]", "'''", "{{x|"])

    return "\n".join(node(depth) for _ in range(rng.randint(3, 8)))
