"""Acceptance suite: one test per release criterion.

Each test records an `ACCEPTANCE PASS` line on success, re-emitted in the
terminal summary, so a run doubles as a checklist.
"""

import math
import random
import threading
import time
from collections import Counter
from datetime import datetime, timedelta, timezone

import numpy as np
import pytest

import conftest

from jobtalk.analytics import (
    affect_matrix,
    kendall_tau,
    lexical_stats,
    to_local,
    volume_series,
)
from jobtalk.annotation import fleiss_kappa, krippendorff_alpha, make_batches
from jobtalk.corpus import Tweet
from jobtalk.features import build_vocab, extract_ngrams, vectorize
from jobtalk.lexicon import load_lexicon
from jobtalk.model import (
    evaluate,
    grid_search_cv,
    nearest_rank_percentile,
    select_round2_samples,
    train_linear_svm,
)
from jobtalk.pipeline import RoundRecipe, SimulatedAnnotator, run_round
from jobtalk.service import AnnotationService
from jobtalk.synthetic import job_corpus, planted_topic_docs, separable_corpus
from jobtalk.topics import (
    LdaConfig,
    UserDocument,
    check_count_invariants,
    fit_lda,
    top_words,
)


def _ok(name):
    line = f"ACCEPTANCE PASS: {name}"
    print(line)
    conftest.acceptance_lines.append(line)


def make_tweet(tid, text, when=None, account="u1"):
    return Tweet(
        tid, account,
        when or datetime(2013, 7, 1, 12, tzinfo=timezone.utc), text,
    )


def test_ngram_fidelity():
    expected = {
        "i", "really", "hate", "my", "job",
        "i really", "really hate", "hate my", "my job",
        "i really hate", "really hate my", "hate my job",
    }
    assert extract_ngrams(["i", "really", "hate", "my", "job"]) == expected
    _ok("n-gram fidelity (12-feature example)")


def test_agreement_oracles():
    assert fleiss_kappa([(5, 0), (0, 5), (5, 0)]) == 1.0
    assert krippendorff_alpha([["Y"] * 5, ["N"] * 5]) == 1.0
    assert fleiss_kappa([(5, 0), (3, 2)]) == pytest.approx(0.0625, abs=1e-9)
    assert krippendorff_alpha([["Y", "Y"], ["Y", "N"]]) == pytest.approx(
        0.0, abs=1e-9
    )
    rng = random.Random(21)
    for _ in range(100):
        n_items = rng.randrange(2, 15)
        votes = [
            (y, 5 - y) for y in (rng.randrange(0, 6) for _ in range(n_items))
        ]
        grid = [
            ["Y"] * y + ["N"] * (5 - y) for y, _ in votes
        ]
        shuffled_votes = list(votes)
        rng.shuffle(shuffled_votes)
        if not (all(v == (5, 0) for v in votes)
                or all(v == (0, 5) for v in votes)):
            assert fleiss_kappa(votes) == pytest.approx(
                fleiss_kappa(shuffled_votes), abs=1e-12
            )
        rows = list(grid)
        rng.shuffle(rows)
        cols = list(range(5))
        rng.shuffle(cols)
        permuted = [[row[c] for c in cols] for row in rows]
        assert krippendorff_alpha(grid) == pytest.approx(
            krippendorff_alpha(permuted), abs=1e-12
        )
    _ok("agreement oracles (kappa / alpha)")


def _tau_bruteforce(x, y):
    n = len(x)
    c = d = tx = ty = txy = 0
    for i in range(n):
        for j in range(i + 1, n):
            a = (x[i] > x[j]) - (x[i] < x[j])
            b = (y[i] > y[j]) - (y[i] < y[j])
            if a == 0 and b == 0:
                txy += 1
            elif a == 0:
                tx += 1
            elif b == 0:
                ty += 1
            elif a == b:
                c += 1
            else:
                d += 1
    n0 = n * (n - 1) // 2
    return (c - d) / math.sqrt((n0 - tx - txy) * (n0 - ty - txy))


def test_kendall_tau_bruteforce():
    rng = random.Random(33)
    checked = 0
    while checked < 200:
        n = rng.randrange(2, 201)
        x = [rng.randrange(0, 20) for _ in range(n)]
        y = [rng.randrange(0, 20) for _ in range(n)]
        if len(set(x)) < 2 or len(set(y)) < 2:
            continue
        ids = [f"i{k}" for k in range(n)]
        got = kendall_tau(dict(zip(ids, x)), dict(zip(ids, y))).tau
        assert got == pytest.approx(_tau_bruteforce(x, y), abs=1e-12)
        checked += 1
    ids = [f"i{k}" for k in range(50)]
    r = {i: float(k) for k, i in enumerate(ids)}
    rev = {i: -v for i, v in r.items()}
    assert kendall_tau(r, r).tau == pytest.approx(1.0)
    assert kendall_tau(r, rev).tau == pytest.approx(-1.0)
    _ok("Kendall tau-b vs brute force (200 lists)")


def test_svm_suite():
    start = time.monotonic()
    docs = separable_corpus(500, seed=42)
    train_docs, heldout_docs = docs[:350], docs[350:]
    vocab = build_vocab((t for t, _ in train_docs))
    train = [(vectorize(t, vocab), lab) for t, lab in train_docs]
    heldout = [(vectorize(t, vocab), lab) for t, lab in heldout_docs]
    best, model, table = grid_search_cv(
        train, seed=0, vocab=vocab
    )  # default grid
    _, _, f1 = evaluate(model, heldout).positive
    assert f1 >= 0.95
    hist = model.objective_history
    assert all(b <= a + 1e-12 for a, b in zip(hist, hist[1:]))
    means = {}
    for cell in table:
        means.setdefault((cell.C, cell.ratio), []).append(cell.f1)
    means = {k: sum(v) / len(v) for k, v in means.items()}
    assert means[(best.C, best.class_weight_ratio)] == max(means.values())
    m2 = train_linear_svm(train, model.train_config, vocab=vocab)
    assert np.array_equal(m2.weights, model.weights) and m2.bias == model.bias
    elapsed = time.monotonic() - start
    assert elapsed < 30, f"SVM suite took {elapsed:.1f}s"
    _ok(f"SVM suite (held-out F1={f1:.3f}, {elapsed:.1f}s)")


def test_sampling_examples():
    scores = [0.1 * i for i in range(1, 11)]
    assert nearest_rank_percentile(scores, 80) == pytest.approx(0.8)
    _, type2 = select_round2_samples(
        [("a", -0.01), ("b", 0.5), ("c", 0.02), ("d", -0.9)], 0, 2
    )
    assert sorted(type2) == ["a", "c"]
    _ok("sampling (nearest-rank percentile, Type-2 minimal |score|)")


def test_end_to_end_loop():
    start = time.monotonic()
    corpus, truth = job_corpus(2000, seed=10)
    heldout_corpus, heldout_truth = job_corpus(400, seed=11)
    heldout = [(t, heldout_truth[t.id]) for t in heldout_corpus]
    annotator = SimulatedAnnotator(truth, flip_probability=0.1, seed=10)

    def recipe(round_index):
        return RoundRecipe(
            round_index=round_index,
            annotator=annotator,
            heldout=heldout,
            seed=10,
            annotation_budget=500,
            type1_count=80,
            type2_count=80,
            C_grid=[0.1, 1.0],
            ratio_grid=[1.0, 2.0],
            cv_folds=5,
            max_epochs=150,
        )

    import tempfile

    with tempfile.TemporaryDirectory() as out:
        r1 = run_round(recipe(1), corpus, out)
        r2 = run_round(recipe(2), corpus, out, previous=r1)
    f1_1 = r1.manifest["metrics"]["heldout_f1"]
    f1_2 = r2.manifest["metrics"]["heldout_f1"]
    assert f1_2 >= f1_1 - 1e-9, (f1_1, f1_2)
    elapsed = time.monotonic() - start
    assert elapsed < 180, f"two rounds took {elapsed:.1f}s"
    _ok(
        f"end-to-end loop (F1 {f1_1:.3f} -> {f1_2:.3f}, {elapsed:.1f}s)"
    )


def test_lda_planted_topics():
    start = time.monotonic()
    raw_docs, vocabularies = planted_topic_docs(
        n_topics=4, docs_per_topic=50, seed=8
    )
    assert len(raw_docs) == 200
    docs = [UserDocument(f"u{i}", t) for i, t in enumerate(raw_docs)]
    model = fit_lda(
        docs,
        LdaConfig(num_topics=4, iterations=80, seed=8),
        check_invariants_every=1,
    )
    check_count_invariants(model)
    assert np.allclose(model.phi().sum(axis=1), 1.0, atol=1e-9)
    assert np.allclose(model.theta().sum(axis=1), 1.0, atol=1e-9)
    recovered = set()
    for k in range(4):
        words = top_words(model, k, 10)
        for v_idx, vocab in enumerate(vocabularies):
            if sum(1 for w in words if w in vocab) >= 6:
                recovered.add(v_idx)
    assert len(recovered) >= 3, recovered
    elapsed = time.monotonic() - start
    assert elapsed < 60, f"LDA took {elapsed:.1f}s"
    _ok(f"LDA planted topics ({len(recovered)}/4 recovered, {elapsed:.1f}s)")


def test_lexical_stats_consistency():
    assert 103089 / 119376 == pytest.approx(0.864, abs=1e-3)
    assert 69542 / 119376 == pytest.approx(0.583, abs=1e-3)
    tweets = [
        make_tweet("1", "a b a", account="u1"),
        make_tweet("2", "b c", account="u2"),
    ]
    stats = lexical_stats(tweets)
    assert (stats.token_count, stats.unique_token_count,
            stats.hapax_count) == (5, 3, 1)
    assert stats.unique_to_total_ratio == pytest.approx(0.6)
    _ok("lexical stats (published-row arithmetic + hand counts)")


def test_time_series_recount_and_dst():
    lt = to_local(datetime(2013, 11, 3, 6, 30, tzinfo=timezone.utc),
                  "America/New_York")
    assert (lt.hour, lt.is_dst, lt.utc_offset_seconds) == (1, False, -18000)
    lt = to_local(datetime(2014, 3, 9, 7, 30, tzinfo=timezone.utc),
                  "America/New_York")
    assert (lt.hour, lt.is_dst, lt.utc_offset_seconds) == (3, True, -14400)

    rng = random.Random(55)
    start = datetime(2013, 7, 1, tzinfo=timezone.utc)
    tweets = [
        make_tweet(f"t{i}", "x",
                   start + timedelta(minutes=rng.randrange(0, 300 * 24 * 60)))
        for i in range(1000)
    ]
    zone = "America/New_York"
    locals_ = [to_local(t.created_at_utc, zone) for t in tweets]
    dates = [lt.local_date for lt in locals_]
    first, last = min(dates), max(dates)

    months = Counter(f"{lt.local_date.year:04d}-{lt.local_date.month:02d}"
                     for lt in locals_)
    got = {b.key: b.total for b in volume_series(tweets, "month", zone)}
    assert all(got[m] == c for m, c in months.items())
    assert sum(got.values()) == 1000

    wd_counts = Counter(lt.weekday for lt in locals_)
    wd_days = [0] * 7
    d = first
    while d <= last:
        wd_days[d.weekday()] += 1
        d += timedelta(days=1)
    for b in volume_series(tweets, "weekday", zone):
        assert b.total == wd_counts.get(b.key, 0)
        assert b.value == pytest.approx(b.total / wd_days[b.key])

    hour_counts = Counter(lt.hour for lt in locals_)
    n_days = (last - first).days + 1
    for b in volume_series(tweets, "hour", zone):
        assert b.total == hour_counts.get(b.key, 0)
        assert b.value == pytest.approx(b.total / n_days)
    _ok("time series (naive recount x3 granularities, DST oracles)")


def test_affect_matrix_recount(tmp_path):
    lex_path = tmp_path / "lex.txt"
    lex_path.write_text("[PA]\nhappy\nlove\ngood\n[NA]\nhate\ntired\nbad\n")
    lexicon = load_lexicon(lex_path)
    rng = random.Random(77)
    words = ["happy", "love", "good", "hate", "tired", "bad",
             "work", "day", "the", "a"]
    start = datetime(2013, 7, 1, tzinfo=timezone.utc)
    tweets = [
        make_tweet(
            f"t{i}",
            " ".join(rng.choice(words) for _ in range(rng.randrange(3, 12))),
            start + timedelta(minutes=rng.randrange(0, 30 * 24 * 60)),
        )
        for i in range(400)
    ]
    grid = affect_matrix(tweets, lexicon, zone="UTC")
    naive = {}
    pa_set = {"happy", "love", "good"}
    na_set = {"hate", "tired", "bad"}
    for t in tweets:
        lt = to_local(t.created_at_utc, "UTC")
        toks = t.text.split()
        pa = sum(1 for w in toks if w in pa_set) / len(toks)
        na = sum(1 for w in toks if w in na_set) / len(toks)
        naive.setdefault((lt.weekday, lt.hour), []).append((pa, na))
    for cell in grid:
        vals = naive.get((cell.weekday, cell.hour), [])
        assert cell.n == len(vals)
        if vals:
            assert cell.mean_pa == pytest.approx(
                sum(v[0] for v in vals) / len(vals), abs=1e-12
            )
            assert cell.mean_na == pytest.approx(
                sum(v[1] for v in vals) / len(vals), abs=1e-12
            )
    # zero-variance cell: identical ratios -> zero CI width
    same = [make_tweet(f"s{i}", "happy day",
                       datetime(2013, 7, 1, 9, tzinfo=timezone.utc))
            for i in range(5)]
    cell = next(
        c for c in affect_matrix(same, lexicon, zone="UTC") if c.n == 5
    )
    assert cell.ci95_pa == pytest.approx(0.0, abs=1e-12)
    assert cell.ci95_na == pytest.approx(0.0, abs=1e-12)
    _ok("affect matrix (cell recount + zero-variance CI)")


def test_service_stress_and_replay():
    svc = AnnotationService(
        clock=lambda: datetime(2014, 1, 1, tzinfo=timezone.utc)
    )
    ids = [f"t{i}" for i in range(400)]
    batches = make_batches(ids, 40, 5, seed=0)
    svc.create_project("p1", batches, {t: t for t in ids})
    errors = []

    def client(w):
        try:
            view = svc.next_batch("p1", f"w{w}")
            if view is None:
                return
            answers = {i["position"]: "Y" for i in view["items"]}
            svc.submit_labels("p1", f"w{w}", view["batch_id"], answers)
        except Exception as exc:  # pragma: no cover
            errors.append(exc)

    threads = [threading.Thread(target=client, args=(w,)) for w in range(50)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert errors == []
    labels = svc.counted_labels("p1")
    keys = Counter((r.batch_id, r.worker_id, r.position) for r in labels)
    assert all(c == 1 for c in keys.values())  # no duplicate counted labels
    per_batch = Counter()
    for e in svc.events:
        if e["type"] == "submitted":
            per_batch[e["batch_id"]] += 1
    assert all(c <= 5 for c in per_batch.values())  # never double-assigned
    replayed = AnnotationService.replay(svc.events)
    assert replayed.snapshot("p1") == svc.snapshot("p1")
    assert replayed.status("p1") == svc.status("p1")
    _ok("service stress (50 clients) + audit-log replay")
