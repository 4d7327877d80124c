"""Balanced-delimiter scanning and low-level wikitext helpers."""

import hypothesis.strategies as st
from hypothesis import given

from corpusforge import wikitext as wt


def test_find_matching_simple():
    # returns the index just past the matching closer
    text = "{{abc}}"
    assert wt.find_matching(text, 0, "{{", "}}") == len(text)


def test_find_matching_nested():
    text = "{{a{{b}}c}}"
    assert wt.find_matching(text, 0, "{{", "}}") == len(text)
    assert wt.find_matching(text, 3, "{{", "}}") == 8


def test_find_matching_unclosed():
    assert wt.find_matching("{{a{{b}}", 0, "{{", "}}") is None


def test_outer_spans_disjoint():
    text = "x{{a}}y{{b{{c}}}}z"
    spans = wt.outer_spans(text, "{{", "}}")
    assert [text[s:e] for s, e in spans] == ["{{a}}", "{{b{{c}}}}"]


def test_outer_spans_skips_unbalanced_opener():
    text = "{{open {{closed}}"
    spans = wt.outer_spans(text, "{{", "}}")
    assert [text[s:e] for s, e in spans] == ["{{closed}}"]


def test_split_top_respects_nesting():
    assert wt.split_top("a|{{b|c}}|d") == ["a", "{{b|c}}", "d"]
    assert wt.split_top("a|[[b|c]]|d") == ["a", "[[b|c]]", "d"]
    assert wt.split_top("x") == ["x"]


def test_strip_braces_leaves_unbalanced():
    assert wt.strip_braces("a {{x}} b") == "a  b"
    assert wt.strip_braces("a {{x b") == "a {{x b"


def test_strip_argument_markers():
    assert wt.strip_argument_markers("a {{{1}}} b") == "a  b"
    assert wt.strip_argument_markers("{{{a {{{b}}} c}}}") == ""


def test_link_target():
    assert wt.link_target("Beograd|prestonica") == "Beograd"
    assert wt.link_target("  Novi Sad  ") == "Novi Sad"


def test_is_interwiki():
    assert wt.is_interwiki("fr:Paris")
    assert wt.is_interwiki("zh-min:Page")
    assert not wt.is_interwiki("Beograd")
    assert not wt.is_interwiki("Kategorija:Gradovi")


def test_has_prefix_casefolds():
    assert wt.has_prefix("kategorija:X", ("Kategorija",))
    assert wt.has_prefix("ДАТОТЕКА:x.jpg", ("Датотека",))
    assert not wt.has_prefix("Datoteka na proputovanju", ("Datoteka",))


@st.composite
def nested_braces(draw, depth=4):
    """Balanced {{...}} nests with plain filler between them."""
    filler = st.text(alphabet="abc |=\n", max_size=6)
    if depth == 0:
        return draw(filler)
    parts = draw(st.lists(st.one_of(
        filler,
        st.builds(lambda s: "{{" + s + "}}", nested_braces(depth=depth - 1)),
    ), max_size=4))
    return "".join(parts)


@given(nested_braces())
def test_outer_spans_cover_balanced_text(text):
    spans = wt.outer_spans(text, "{{", "}}")
    # every span is balanced and removal leaves no marker behind
    out = wt.replace_spans(text, spans, [""] * len(spans))
    assert "{{" not in out and "}}" not in out
    for start, end in spans:
        assert text[start:start + 2] == "{{" and text[end - 2:end] == "}}"


@given(st.text(alphabet="{}|[]ab\n", max_size=40))
def test_find_matching_never_crashes(text):
    probe = text.find("{{")
    if probe != -1:
        close = wt.find_matching(text, probe, "{{", "}}")
        if close is not None:
            assert text[close - 2:close] == "}}"
