import pytest

from jobtalk.corpus import DataError
from jobtalk.lexicon import load_lexicon, score_category, token_matches

try:
    from importlib.resources import files
except ImportError:  # pragma: no cover
    files = None


@pytest.fixture
def lexicon(tmp_path):
    p = tmp_path / "lex.txt"
    p.write_text(
        "# comment line\n"
        "[PA]\n"
        "happy\nlov*\ngreat, good\n"
        "[NA]\n"
        "hate\nstress*  # inline comment\n"
    )
    return load_lexicon(p)


class TestLoad:
    def test_categories_and_terms(self, lexicon):
        assert lexicon.category_names() == ["NA", "PA"]
        assert lexicon.term_counts() == {"PA": 4, "NA": 2}

    def test_wildcard_split(self, lexicon):
        literals, prefixes = lexicon.categories["PA"]
        assert "happy" in literals
        assert "lov" in prefixes
        assert "great" in literals and "good" in literals

    def test_duplicate_category(self, tmp_path):
        p = tmp_path / "dup.txt"
        p.write_text("[PA]\nhappy\n[PA]\nsad\n")
        with pytest.raises(DataError):
            load_lexicon(p)

    def test_empty_category_warns(self, tmp_path):
        p = tmp_path / "empty.txt"
        p.write_text("[PA]\n[NA]\nhate\n")
        with pytest.warns(UserWarning):
            load_lexicon(p)

    def test_term_outside_category(self, tmp_path):
        p = tmp_path / "bad.txt"
        p.write_text("happy\n[PA]\n")
        with pytest.raises(DataError):
            load_lexicon(p)

    def test_bundled_demo_lexicon(self):
        from importlib.resources import files as f

        path = f("jobtalk") / "data" / "mini_lexicon.txt"
        lex = load_lexicon(path)
        assert {"PA", "NA", "work"} <= set(lex.category_names())


class TestMatching:
    def test_literal_exact_only(self, lexicon):
        literals, prefixes = lexicon.categories["PA"]
        assert token_matches("happy", literals, prefixes)
        assert not token_matches("happyish", literals, prefixes)

    def test_prefix(self, lexicon):
        literals, prefixes = lexicon.categories["PA"]
        for tok in ("love", "loving", "lov"):
            assert token_matches(tok, literals, prefixes)
        assert not token_matches("lo", literals, prefixes)


class TestScore:
    def test_ratio(self, lexicon):
        score = score_category(
            ["i", "love", "my", "happy", "day"], lexicon, "PA"
        )
        assert score.match_count == 2
        assert score.total_tokens == 5
        assert score.ratio == pytest.approx(0.4)

    def test_double_match_counts_once(self, tmp_path):
        p = tmp_path / "lex.txt"
        p.write_text("[X]\nlove\nlov*\n")
        lex = load_lexicon(p)
        assert score_category(["love"], lex, "X").match_count == 1

    def test_empty_tokens(self, lexicon):
        assert score_category([], lexicon, "PA").ratio == 0.0

    def test_case_insensitive(self, lexicon):
        assert score_category(["HAPPY"], lexicon, "PA").match_count == 1

    def test_unknown_category(self, lexicon):
        with pytest.raises(DataError):
            score_category(["x"], lexicon, "nope")

    def test_ratio_bounds(self, lexicon):
        tokens = ["happy", "hate", "love", "tree", "sky"]
        for cat in lexicon.category_names():
            r = score_category(tokens, lexicon, cat).ratio
            assert 0.0 <= r <= 1.0
