import json
from datetime import datetime, timezone

import pytest
from hypothesis import given, strategies as st

from jobtalk.corpus import (
    Corpus,
    DataError,
    FilterRules,
    SlangDictionary,
    Tweet,
    ingest_jsonl,
    job_likely_filter,
    matches_rules,
    normalize_text,
    normalize_corpus,
    tokenize,
)


def make_tweet(tid, text, account="u1"):
    return Tweet(
        id=tid,
        account_id=account,
        created_at_utc=datetime(2013, 7, 1, tzinfo=timezone.utc),
        text=text,
    )


class TestIngest:
    def test_single_line(self, tmp_path):
        p = tmp_path / "in.jsonl"
        p.write_text(
            '{"id":"1","account_id":"u1",'
            '"created_at_utc":"2013-07-01T12:00:00Z","text":"hi"}\n'
        )
        corpus = ingest_jsonl(p)
        assert len(corpus) == 1
        t = corpus.tweets[0]
        assert t.id == "1"
        assert t.account_id == "u1"
        assert t.text == "hi"
        assert t.created_at_utc == datetime(2013, 7, 1, 12,
                                            tzinfo=timezone.utc)

    def test_empty_file(self, tmp_path):
        p = tmp_path / "in.jsonl"
        p.write_text("")
        corpus = ingest_jsonl(p)
        assert len(corpus) == 0
        assert corpus.provenance["skipped_lines"] == 0

    def test_malformed_line_skipped(self, tmp_path):
        p = tmp_path / "in.jsonl"
        lines = [
            json.dumps({"id": "1", "account_id": "a",
                        "created_at_utc": "2013-07-01T00:00:00Z",
                        "text": "x"}),
            json.dumps({"id": "2", "account_id": "a",
                        "created_at_utc": "2013-07-01T00:00:00Z"}),
            json.dumps({"id": "3", "account_id": "a",
                        "created_at_utc": "2013-07-01T00:00:00Z",
                        "text": "y"}),
        ]
        p.write_text("\n".join(lines) + "\n")
        corpus = ingest_jsonl(p)
        assert len(corpus) == 2
        assert corpus.provenance["skipped_lines"] == 1

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError):
            ingest_jsonl(tmp_path / "nope.jsonl")

    def test_deterministic(self, tmp_path):
        p = tmp_path / "in.jsonl"
        recs = [
            {"id": f"t{i}", "account_id": "a",
             "created_at_utc": "2013-07-01T00:00:00Z", "text": f"msg {i}"}
            for i in (3, 1, 2)
        ]
        p.write_text("\n".join(json.dumps(r) for r in recs))
        c1 = ingest_jsonl(p)
        c2 = ingest_jsonl(p)
        assert [t.id for t in c1] == [t.id for t in c2]
        assert [t.id for t in c1] == sorted(t.id for t in c1)

    def test_duplicate_ids_rejected(self):
        with pytest.raises(DataError):
            Corpus([make_tweet("a", "x"), make_tweet("a", "y")])


class TestNormalize:
    def test_punctuation_removed(self):
        assert normalize_text("I really hate my job!!") == \
            "i really hate my job"

    def test_empty(self):
        assert normalize_text("") == ""

    def test_slang_substitution(self):
        slang = SlangDictionary({"gr8": "great"})
        assert normalize_text("gr8 job", slang) == "great job"

    def test_mentions_and_urls(self):
        out = normalize_text("@bob check http://example.com/x now")
        assert out == "@SOMEONE check URL now"

    def test_hashtag_keeps_prefix(self):
        assert normalize_text("#Job hunting!") == "#job hunting"

    def test_emoticons_dropped(self):
        assert normalize_text("so tired :( :-/ today") == "so tired today"

    @given(st.text(max_size=80))
    def test_idempotent(self, text):
        once = normalize_text(text)
        assert normalize_text(once) == once

    def test_idempotent_with_slang(self):
        slang = SlangDictionary({"gr8": "great", "thx": "thanks"})
        text = "thx boss gr8 day http://a.b @sam"
        once = normalize_text(text, slang)
        assert normalize_text(once, slang) == once


class TestTokenize:
    def test_basic(self):
        assert tokenize("i really hate my job") == \
            ["i", "really", "hate", "my", "job"]

    def test_empty(self):
        assert tokenize("") == []

    def test_placeholders(self):
        assert tokenize("#job URL") == ["#job", "URL"]


class TestFilter:
    def setup_method(self):
        self.rules = FilterRules.default()

    def check(self, text):
        return matches_rules(tokenize(normalize_text(text)), self.rules)

    def test_include_term_retained(self):
        assert self.check(
            "@SOMEONE @SOMEONE shit manager shit players shit everything"
        )

    def test_exclude_phrase_rejected(self):
        assert not self.check("great job team")

    def test_exclude_overrides_include(self):
        assert not self.check("my boss said our class starts now")

    def test_min_tokens(self):
        assert not self.check("hate my job")
        assert self.check("i really hate my job")

    def test_phrase_adjacency(self):
        assert self.check("long day at work again today")
        assert not self.check("the artwork at that museum is stunning ok")

    def test_filter_subset_and_properties(self):
        tweets = [
            make_tweet(f"t{i}", text)
            for i, text in enumerate(
                [
                    "i really hate my job",
                    "great job team you did it",
                    "my manager is the best ever",
                    "school starts tomorrow for my job",
                    "short job",
                    "nothing relevant here at all",
                ]
            )
        ]
        corpus = Corpus(tweets)
        kept = job_likely_filter(corpus, self.rules)
        kept_ids = {t.id for t in kept}
        assert kept_ids <= {t.id for t in corpus}
        for t in kept:
            tokens = tokenize(normalize_text(t.text))
            assert len(tokens) >= self.rules.min_tokens
            assert matches_rules(tokens, self.rules)
        for t in corpus:
            if t.id not in kept_ids:
                assert not matches_rules(
                    tokenize(normalize_text(t.text)), self.rules
                )

    def test_rules_file_roundtrip(self, tmp_path):
        path = tmp_path / "rules.txt"
        path.write_text(
            "[include_terms]\njob\nboss\n"
            "[include_phrases]\n{my|at} work\n"
            "[exclude_terms]\nschool\n"
            "[exclude_phrases]\n{good|great} job\n"
            "[min_tokens]\n3\n"
        )
        rules = FilterRules.from_file(path)
        assert rules.min_tokens == 3
        assert "boss" in rules.include_terms
        assert matches_rules("late at work again".split(), rules)
        assert not matches_rules("good job out there".split(), rules)

    def test_normalize_corpus(self):
        corpus = Corpus([make_tweet("a", "Hate My JOB!!")])
        out = normalize_corpus(corpus)
        assert out.tweets[0].text == "hate my job"
