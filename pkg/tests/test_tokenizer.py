from hypothesis import given, strategies as st

from fuzzyent.tokenizer import TokenizerConfig, strip_trailing_period, tokenize

KEEP = TokenizerConfig(strip_trailing_period=False)
STRIP = TokenizerConfig(strip_trailing_period=True)

text_st = st.text(alphabet=st.sampled_from(list("abAB. \t\n  é")), max_size=40)


def test_legacy_keeps_period():
    assert tokenize("Code of honor.", KEEP).tokens == ["code", "of", "honor."]


def test_strip_removes_period():
    seq = tokenize("Code of honor.", STRIP)
    assert seq.tokens == ["code", "of", "honor"]
    assert seq.spans[-1] == (8, 13)


def test_empty():
    assert tokenize("", KEEP).tokens == []
    assert tokenize("   \n", STRIP).spans == []


def test_case_preserved_when_asked():
    assert tokenize("Code Of", TokenizerConfig(lowercase=False)).tokens == ["Code", "Of"]


def test_strip_trailing_period_examples():
    assert strip_trailing_period("honor.") == "honor"
    assert strip_trailing_period("honor") == "honor"
    assert strip_trailing_period("e.g.") == "e.g"
    assert strip_trailing_period(".") == "."
    assert strip_trailing_period("...") == ".."


def test_unicode_whitespace_splits():
    assert tokenize("a b c", KEEP).tokens == ["a", "b", "c"]


@given(text_st, st.booleans())
def test_spans_well_formed(text, strip):
    seq = tokenize(text, TokenizerConfig(strip_trailing_period=strip, lowercase=False))
    assert len(seq.tokens) == len(seq.spans)
    assert all(seq.tokens)
    for (s0, e0), (s1, _) in zip(seq.spans, seq.spans[1:]):
        assert s0 < e0 <= s1
    for tok, (s, e) in zip(seq.tokens, seq.spans):
        assert text[s:e] == tok


@given(text_st)
def test_strip_equals_post_hoc_strip(text):
    kept = tokenize(text, KEEP).tokens
    assert tokenize(text, STRIP).tokens == [strip_trailing_period(t) for t in kept]


@given(st.text(alphabet="ab", min_size=1, max_size=6), st.booleans())
def test_strip_idempotent(stem, dotted):
    tok = stem + ("." if dotted else "")
    once = strip_trailing_period(tok)
    assert strip_trailing_period(once) == once
