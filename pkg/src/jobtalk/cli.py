"""Command-line interface for the full pipeline."""

from __future__ import annotations

import csv
import json
import sys
from pathlib import Path

import click

from . import analytics, annotation, lexicon as lexicon_mod, model as model_mod
from . import pipeline, topics as topics_mod
from .corpus import (
    DataError,
    FilterRules,
    SlangDictionary,
    ingest_jsonl,
    job_likely_filter,
    normalize_corpus,
    normalize_text,
    tokenize,
    write_jsonl,
)
from .features import NgramConfig, build_vocab, vectorize

click.UsageError.exit_code = 1

EXIT_DATA_ERROR = 2
EXIT_INTERNAL = 3


def _load_config(path):
    """Key-value text config: one 'key value' or 'key=value' per line."""
    settings = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" in line:
            key, value = line.split("=", 1)
        else:
            parts = line.split(None, 1)
            if len(parts) != 2:
                raise DataError(f"bad config line: {raw!r}")
            key, value = parts
        settings[key.strip()] = value.strip()
    return settings


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True),
              default=None, help="Key-value config file with defaults.")
@click.option("--seed", type=int, default=None)
@click.option("--zone", default=None, help="IANA timezone id.")
@click.option("--data-dir", type=click.Path(), default=None)
@click.pass_context
def main(ctx, config_path, seed, zone, data_dir):
    """Detect and analyze job-related short messages."""
    settings = _load_config(config_path) if config_path else {}
    ctx.obj = {
        "seed": seed if seed is not None else int(settings.get("seed", 0)),
        "zone": zone or settings.get("zone", "UTC"),
        "data_dir": data_dir or settings.get("data_dir", "."),
    }


def _run(fn):
    try:
        fn()
    except DataError as exc:
        click.echo(f"data error: {exc}", err=True)
        sys.exit(EXIT_DATA_ERROR)
    except (click.ClickException, click.Abort):
        raise
    except Exception as exc:  # pragma: no cover - defensive
        click.echo(f"internal error: {exc}", err=True)
        sys.exit(EXIT_INTERNAL)


def _load_rules(rules_path):
    return FilterRules.from_file(rules_path) if rules_path \
        else FilterRules.default()


def _load_slang(slang_path):
    return SlangDictionary.from_file(slang_path) if slang_path else None


def _read_gold_csv(path) -> dict[str, bool]:
    gold = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            gold[row["tweet_id"]] = row["label"] == "Y"
    return gold


def _read_truth(path) -> dict[str, bool]:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return {str(k): bool(v) for k, v in data.items()}


def _examples_from_gold(corpus, gold, vocab=None, config=NgramConfig()):
    by_id = {t.id: t for t in corpus}
    missing = [tid for tid in gold if tid not in by_id]
    if missing:
        raise DataError(f"gold ids missing from corpus: {missing[:5]}...")
    token_lists = {
        tid: tokenize(normalize_text(by_id[tid].text)) for tid in gold
    }
    if vocab is None:
        vocab = build_vocab(token_lists.values(), config)
    examples = [
        (vectorize(token_lists[tid], vocab, config), label)
        for tid, label in sorted(gold.items())
    ]
    return examples, vocab


@main.command()
@click.argument("input_path", type=click.Path(exists=True))
@click.option("-o", "--output", required=True, type=click.Path())
@click.option("--slang", "slang_path", type=click.Path(exists=True),
              default=None)
@click.option("--normalize/--no-normalize", default=True)
def ingest(input_path, output, slang_path, normalize):
    """Read raw JSONL tweets, normalize, and write canonical JSONL."""

    def go():
        corpus = ingest_jsonl(input_path)
        if normalize:
            corpus = normalize_corpus(corpus, _load_slang(slang_path))
        write_jsonl(corpus, output)
        click.echo(
            f"ingested {len(corpus)} tweets "
            f"({corpus.provenance.get('skipped_lines', 0)} lines skipped)"
        )

    _run(go)


@main.command("filter")
@click.argument("input_path", type=click.Path(exists=True))
@click.option("-o", "--output", required=True, type=click.Path())
@click.option("--rules", "rules_path", type=click.Path(exists=True),
              default=None)
@click.option("--slang", "slang_path", type=click.Path(exists=True),
              default=None)
def filter_cmd(input_path, output, rules_path, slang_path):
    """Apply the Job-Likely inclusion/exclusion filter."""

    def go():
        corpus = ingest_jsonl(input_path)
        kept = job_likely_filter(corpus, _load_rules(rules_path),
                                 _load_slang(slang_path))
        write_jsonl(kept, output, extra={"job_likely": True})
        click.echo(f"retained {len(kept)} of {len(corpus)} tweets")

    _run(go)


@main.command()
@click.argument("input_path", type=click.Path(exists=True))
@click.option("-o", "--output", required=True, type=click.Path())
@click.option("--base-size", default=40, show_default=True)
@click.option("--dup-count", default=5, show_default=True)
@click.pass_context
def batch(ctx, input_path, output, base_size, dup_count):
    """Split a corpus into annotation batches with duplicate probes."""

    def go():
        corpus = ingest_jsonl(input_path)
        batches = annotation.make_batches(
            [t.id for t in corpus], base_size, dup_count,
            seed=ctx.obj["seed"],
        )
        payload = [
            {"id": b.id, "item_list": b.item_list,
             "dup_pairs": [list(p) for p in b.dup_pairs]}
            for b in batches
        ]
        Path(output).write_text(json.dumps(payload, indent=2),
                                encoding="utf-8")
        click.echo(f"wrote {len(batches)} batches")

    _run(go)


def _load_batches(path) -> list[annotation.Batch]:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    return [
        annotation.Batch(
            id=b["id"], item_list=b["item_list"],
            dup_pairs=[tuple(p) for p in b["dup_pairs"]],
        )
        for b in payload
    ]


@main.command()
@click.option("--corpus", "corpus_path", required=True,
              type=click.Path(exists=True))
@click.option("--batches", "batches_path", required=True,
              type=click.Path(exists=True))
@click.option("--project", "project_id", default="default")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.option("--token", default=None, help="Shared auth token.")
@click.option("--static-dir", type=click.Path(exists=True), default=None,
              help="Directory with the browser UI to serve at /.")
@click.pass_context
def serve(ctx, corpus_path, batches_path, project_id, host, port, token,
          static_dir):
    """Run the local annotation HTTP service."""

    def go():
        import uvicorn

        from .service import AnnotationService, create_app

        corpus = ingest_jsonl(corpus_path)
        batches = _load_batches(batches_path)
        log_path = Path(ctx.obj["data_dir"]) / f"{project_id}.events.jsonl"
        svc = AnnotationService(event_log_path=str(log_path), token=token)
        svc.create_project(
            project_id, batches, {t.id: t.text for t in corpus}
        )
        app = create_app(svc)
        if static_dir:
            from fastapi.staticfiles import StaticFiles

            app.mount("/", StaticFiles(directory=static_dir, html=True),
                      name="ui")
        uvicorn.run(app, host=host, port=port)

    _run(go)


@main.command()
@click.option("--batches", "batches_path", required=True,
              type=click.Path(exists=True))
@click.option("--truth", "truth_path", required=True,
              type=click.Path(exists=True))
@click.option("-o", "--output", required=True, type=click.Path())
@click.option("--flip", default=0.1, show_default=True)
@click.option("--workers", default=5, show_default=True)
@click.pass_context
def simulate(ctx, batches_path, truth_path, output, flip, workers):
    """Produce simulated crowdworker labels from a ground-truth oracle."""

    def go():
        batches = _load_batches(batches_path)
        annotator = pipeline.SimulatedAnnotator(
            truth=_read_truth(truth_path), flip_probability=flip,
            seed=ctx.obj["seed"],
        )
        labels = pipeline.simulate_annotations(batches, annotator, workers)
        annotation.write_labels_csv(labels, output)
        click.echo(f"wrote {len(labels)} labels")

    _run(go)


@main.command()
@click.argument("labels_path", type=click.Path(exists=True))
@click.option("-o", "--output", required=True, type=click.Path())
@click.option("--report", "report_path", type=click.Path(), default=None,
              help="Also write the agreement report JSON here.")
@click.option("--batches", "batches_path", type=click.Path(exists=True),
              default=None)
def aggregate(labels_path, output, report_path, batches_path):
    """Aggregate label CSV into per-tweet vote tiers."""

    def go():
        labels = annotation.read_labels_csv(labels_path)
        aggregates, deficient = annotation.aggregate_labels(labels)
        with open(output, "w", encoding="utf-8") as fh:
            fh.write("tweet_id,yes_count,no_count,tier\n")
            for agg in aggregates:
                fh.write(
                    f"{agg.tweet_id},{agg.yes_count},{agg.no_count},"
                    f"{agg.tier}\n"
                )
        if deficient:
            click.echo(
                f"warning: {len(deficient)} tweets lack exactly 5 answers",
                err=True,
            )
        if report_path:
            batches = _load_batches(batches_path) if batches_path else []
            report = annotation.pooled_agreement(labels, batches)
            Path(report_path).write_text(
                json.dumps(
                    {
                        "fleiss_kappa": report.fleiss_kappa,
                        "krippendorff_alpha": report.krippendorff_alpha,
                        "per_worker_consistency":
                            report.per_worker_consistency,
                    },
                    indent=2,
                ),
                encoding="utf-8",
            )
        click.echo(f"aggregated {len(aggregates)} tweets")

    _run(go)


@main.command()
@click.option("--aggregates", "agg_path", required=True,
              type=click.Path(exists=True))
@click.option("--adjudications", "adj_path", required=True,
              type=click.Path(exists=True),
              help="JSON map tweet_id -> true/false.")
@click.option("-o", "--output", required=True, type=click.Path())
def gold(agg_path, adj_path, output):
    """Combine unanimous crowd labels with community adjudications."""

    def go():
        aggregates = []
        with open(agg_path, newline="", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                aggregates.append(
                    annotation.AggregatedLabel(
                        row["tweet_id"], int(row["yes_count"]),
                        int(row["no_count"]), row["tier"],
                    )
                )
        gold_set = annotation.build_gold_set(aggregates,
                                             _read_truth(adj_path))
        pipeline._write_gold_csv(gold_set, Path(output))
        click.echo(f"wrote {len(gold_set)} gold labels")

    _run(go)


@main.command()
@click.option("--corpus", "corpus_path", required=True,
              type=click.Path(exists=True))
@click.option("--gold", "gold_path", required=True,
              type=click.Path(exists=True))
@click.option("-o", "--output", required=True, type=click.Path())
@click.option("--cv-table", "cv_table_path", type=click.Path(), default=None)
@click.option("--c-grid", default="0.01,0.1,1,10", show_default=True)
@click.option("--ratio-grid", default="0.25,0.5,1,2,4", show_default=True)
@click.option("--folds", default=10, show_default=True)
@click.pass_context
def train(ctx, corpus_path, gold_path, output, cv_table_path, c_grid,
          ratio_grid, folds):
    """Grid-search and train the class-weighted linear SVM."""

    def go():
        corpus = ingest_jsonl(corpus_path)
        gold_map = _read_gold_csv(gold_path)
        examples, vocab = _examples_from_gold(corpus, gold_map)
        best, trained, table = model_mod.grid_search_cv(
            examples,
            [float(c) for c in c_grid.split(",")],
            [float(r) for r in ratio_grid.split(",")],
            k=folds,
            seed=ctx.obj["seed"],
            vocab=vocab,
        )
        model_mod.save_model(trained, output)
        if cv_table_path:
            model_mod.write_cv_table(table, cv_table_path)
        click.echo(
            f"best C={best.C} ratio={best.class_weight_ratio} "
            f"(vocab {len(vocab)})"
        )

    _run(go)


@main.command()
@click.option("--model", "model_path", required=True,
              type=click.Path(exists=True))
@click.option("--corpus", "corpus_path", required=True,
              type=click.Path(exists=True))
@click.option("-o", "--output", required=True, type=click.Path())
def classify(model_path, corpus_path, output):
    """Score a corpus with a trained model (confidence = hyperplane
    distance)."""

    def go():
        trained = model_mod.load_model(model_path)
        corpus = ingest_jsonl(corpus_path)
        vectors = [
            vectorize(tokenize(normalize_text(t.text)), trained.vocab)
            for t in corpus
        ]
        scores = model_mod.decision_scores(trained, vectors)
        with open(output, "w", encoding="utf-8") as fh:
            fh.write("tweet_id,score,label\n")
            for t, s in zip(corpus, scores):
                fh.write(f"{t.id},{float(s)!r},{'Y' if s >= 0 else 'N'}\n")
        click.echo(f"scored {len(corpus)} tweets")

    _run(go)


@main.command()
@click.option("--scores", "scores_path", required=True,
              type=click.Path(exists=True))
@click.option("--type1", "type1_count", default=300, show_default=True)
@click.option("--type2", "type2_count", default=300, show_default=True)
@click.option("--percentile", default=80.0, show_default=True)
@click.option("-o", "--output", required=True, type=click.Path())
@click.pass_context
def sample(ctx, scores_path, type1_count, type2_count, percentile, output):
    """Select Type-1 (high-confidence) and Type-2 (near-zero) tweets."""

    def go():
        scored = []
        with open(scores_path, newline="", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                scored.append((row["tweet_id"], float(row["score"])))
        type1, type2 = model_mod.select_round2_samples(
            scored, type1_count, type2_count, percentile,
            seed=ctx.obj["seed"],
        )
        Path(output).write_text(
            json.dumps({"type1": type1, "type2": type2}, indent=2),
            encoding="utf-8",
        )
        click.echo(f"type1={len(type1)} type2={len(type2)}")

    _run(go)


@main.command()
@click.option("--model", "model_path", required=True,
              type=click.Path(exists=True))
@click.option("--corpus", "corpus_path", required=True,
              type=click.Path(exists=True))
@click.option("--gold", "gold_path", required=True,
              type=click.Path(exists=True))
@click.option("-o", "--output", required=True, type=click.Path())
def evaluate(model_path, corpus_path, gold_path, output):
    """Held-out precision/recall/F1 against gold labels."""

    def go():
        trained = model_mod.load_model(model_path)
        corpus = ingest_jsonl(corpus_path)
        gold_map = _read_gold_csv(gold_path)
        examples, _ = _examples_from_gold(corpus, gold_map,
                                          vocab=trained.vocab)
        report = model_mod.evaluate(trained, examples)
        Path(output).write_text(
            json.dumps(report.as_dict(), indent=2, sort_keys=True),
            encoding="utf-8",
        )
        p, r, f1 = report.positive
        click.echo(f"precision={p:.3f} recall={r:.3f} f1={f1:.3f}")

    _run(go)


@main.command()
@click.option("--corpus", "corpus_path", required=True,
              type=click.Path(exists=True))
@click.option("-o", "--output", required=True, type=click.Path())
@click.option("--num-topics", default=20, show_default=True)
@click.option("--iterations", default=1000, show_default=True)
@click.option("--min-doc-length", default=5, show_default=True)
@click.option("--stoplist-top", default=50, show_default=True)
@click.option("--dump", "dump_path", type=click.Path(), default=None)
@click.pass_context
def topics(ctx, corpus_path, output, num_topics, iterations, min_doc_length,
           stoplist_top, dump_path):
    """Fit per-user LDA topics and write the topic report."""

    def go():
        corpus = normalize_corpus(ingest_jsonl(corpus_path))
        docs, dropped = topics_mod.build_user_documents(corpus,
                                                        min_doc_length)
        docs = topics_mod.remove_stopwords(docs, top_n=stoplist_top)
        model = topics_mod.fit_lda(
            docs,
            topics_mod.LdaConfig(
                num_topics=num_topics, iterations=iterations,
                seed=ctx.obj["seed"],
            ),
        )
        topics_mod.write_topic_report(model, output)
        if dump_path:
            topics_mod.save_topic_model(model, dump_path)
        click.echo(
            f"fit {num_topics} topics over {len(docs)} documents "
            f"({dropped} dropped)"
        )

    _run(go)


@main.command()
@click.option("--corpus", "corpus_path", required=True,
              type=click.Path(exists=True))
@click.option("--lexicon", "lexicon_path", required=True,
              type=click.Path(exists=True))
@click.option("-o", "--output", required=True, type=click.Path())
@click.pass_context
def affect(ctx, corpus_path, lexicon_path, output):
    """7x24 weekday-hour PA/NA matrix with 95% confidence intervals."""

    def go():
        corpus = normalize_corpus(ingest_jsonl(corpus_path))
        lex = lexicon_mod.load_lexicon(lexicon_path)
        grid = analytics.affect_matrix(corpus, lex, ctx.obj["zone"])
        analytics.write_affect_csv(grid, output)
        click.echo(f"wrote {len(grid)} cells")

    _run(go)


@main.command()
@click.option("--corpus", "corpus_path", required=True,
              type=click.Path(exists=True))
@click.option("--granularity", type=click.Choice(["month", "weekday",
                                                  "hour"]), required=True)
@click.option("-o", "--output", required=True, type=click.Path())
@click.pass_context
def timeseries(ctx, corpus_path, granularity, output):
    """Volume series by month, weekday, or hour in local time."""

    def go():
        corpus = ingest_jsonl(corpus_path)
        series = analytics.volume_series(corpus, granularity,
                                         ctx.obj["zone"])
        analytics.write_series_csv(series, output)
        click.echo(f"wrote {len(series)} buckets")

    _run(go)


@main.command()
@click.option("--corpus", "corpus_path", required=True,
              type=click.Path(exists=True))
@click.option("-o", "--output", required=True, type=click.Path())
@click.option("--theta", default=0.5, show_default=True,
              help="Ad-like fraction threshold for commercial accounts.")
def accounts(corpus_path, output, theta):
    """Classify accounts as individual or commercial."""

    def go():
        corpus = ingest_jsonl(corpus_path)
        by_account: dict[str, list] = {}
        for t in corpus:
            by_account.setdefault(t.account_id, []).append(t)
        params = analytics.AccountParams(ad_fraction_threshold=theta)
        with open(output, "w", encoding="utf-8") as fh:
            fh.write("account_id,kind,tweet_count\n")
            for account_id in sorted(by_account):
                kind = analytics.classify_account(by_account[account_id],
                                                  params)
                fh.write(f"{account_id},{kind},{len(by_account[account_id])}\n")
        click.echo(f"classified {len(by_account)} accounts")

    _run(go)


@main.command()
@click.option("--corpus", "corpus_path", required=True,
              type=click.Path(exists=True))
@click.option("-o", "--output", required=True, type=click.Path())
def stats(corpus_path, output):
    """Corpus-level lexical statistics."""

    def go():
        corpus = normalize_corpus(ingest_jsonl(corpus_path))
        st = analytics.lexical_stats(list(corpus))
        Path(output).write_text(
            json.dumps(st.__dict__, indent=2, sort_keys=True),
            encoding="utf-8",
        )
        click.echo(f"{st.tweet_count} tweets, {st.token_count} tokens")

    _run(go)


@main.command()
@click.option("--first", "first_path", required=True,
              type=click.Path(exists=True))
@click.option("--second", "second_path", required=True,
              type=click.Path(exists=True))
@click.option("-o", "--output", type=click.Path(), default=None)
def kendall(first_path, second_path, output):
    """Kendall tau-b between two id,score CSV rankings."""

    def go():
        def read_scores(path):
            out = {}
            with open(path, newline="", encoding="utf-8") as fh:
                for row in csv.DictReader(fh):
                    key = row.get("tweet_id") or row.get("id")
                    out[key] = float(row["score"])
            return out

        result = analytics.kendall_tau(read_scores(first_path),
                                       read_scores(second_path))
        payload = result.__dict__
        if output:
            Path(output).write_text(json.dumps(payload, indent=2),
                                    encoding="utf-8")
        click.echo(f"tau={result.tau:.4f} over n={result.n}")

    _run(go)


@main.command()
@click.option("--tagged", "tagged_path", required=True,
              type=click.Path(exists=True),
              help="JSONL: {\"tagged\": [[token, tag], ...]} per tweet.")
@click.option("-o", "--output", required=True, type=click.Path())
def pos(tagged_path, output):
    """Mean normalized POS-tag profile from externally tagged tweets."""

    def go():
        tweets = []
        for line in Path(tagged_path).read_text(
            encoding="utf-8"
        ).splitlines():
            if line.strip():
                rec = json.loads(line)
                tweets.append([tuple(pair) for pair in rec["tagged"]])
        profile = analytics.pos_profile(tweets)
        Path(output).write_text(
            json.dumps(profile, indent=2, sort_keys=True), encoding="utf-8"
        )
        click.echo(f"profiled {len(tweets)} tweets")

    _run(go)


@main.command("round")
@click.option("--corpus", "corpus_path", required=True,
              type=click.Path(exists=True))
@click.option("--truth", "truth_path", required=True,
              type=click.Path(exists=True))
@click.option("--heldout", "heldout_path", required=True,
              type=click.Path(exists=True))
@click.option("--round-index", default=1, show_default=True)
@click.option("--prev-dir", type=click.Path(exists=True), default=None,
              help="Previous round directory (required for round >= 2).")
@click.option("-o", "--output", "out_dir", required=True,
              type=click.Path())
@click.option("--flip", default=0.1, show_default=True)
@click.option("--budget", default=2000, show_default=True)
@click.option("--type1", "type1_count", default=300, show_default=True)
@click.option("--type2", "type2_count", default=300, show_default=True)
@click.pass_context
def round_cmd(ctx, corpus_path, truth_path, heldout_path, round_index,
              prev_dir, out_dir, flip, budget, type1_count, type2_count):
    """Run one full annotate/train/sample round with simulated workers."""

    def go():
        corpus = ingest_jsonl(corpus_path)
        truth = _read_truth(truth_path)
        heldout_corpus = ingest_jsonl(heldout_path)
        heldout = [(t, truth[t.id]) for t in heldout_corpus]
        annotator = pipeline.SimulatedAnnotator(
            truth=truth, flip_probability=flip, seed=ctx.obj["seed"]
        )
        recipe = pipeline.RoundRecipe(
            round_index=round_index,
            annotator=annotator,
            heldout=heldout,
            seed=ctx.obj["seed"],
            annotation_budget=budget,
            type1_count=type1_count,
            type2_count=type2_count,
        )
        previous = None
        if round_index >= 2:
            if prev_dir is None:
                raise DataError("round >= 2 requires --prev-dir")
            previous = _load_round_artifacts(prev_dir)
        artifacts = pipeline.run_round(recipe, corpus, out_dir, previous)
        p, r, f1 = artifacts.eval_report.positive
        click.echo(
            f"round {round_index}: gold={len(artifacts.gold)} "
            f"P={p:.3f} R={r:.3f} F1={f1:.3f}"
        )

    _run(go)


def _load_round_artifacts(round_dir) -> pipeline.RoundArtifacts:
    """Reload the pieces of a finished round that the next round needs."""
    round_dir = Path(round_dir)
    gold = [
        annotation.GoldLabel(tid, label, "unknown")
        for tid, label in _read_gold_csv(round_dir / "gold.csv").items()
    ]
    scores = {}
    with open(round_dir / "classified.csv", newline="",
              encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            scores[row["tweet_id"]] = float(row["score"])
    manifest = json.loads(
        (round_dir / "manifest.json").read_text(encoding="utf-8")
    )
    trained = model_mod.load_model(round_dir / "model.bin")
    return pipeline.RoundArtifacts(
        round_dir=round_dir, gold=gold, model=trained, eval_report=None,
        type1=[], type2=[], cutoff=manifest["metrics"]["sampling_cutoff"],
        manifest=manifest, scores=scores,
    )


@main.command()
@click.option("--round-dir", required=True, type=click.Path(exists=True))
@click.option("--corpus", "corpus_path", required=True,
              type=click.Path(exists=True))
@click.option("-o", "--output", "out_dir", required=True,
              type=click.Path())
@click.pass_context
def export(ctx, round_dir, corpus_path, out_dir):
    """Bundle round reports and volume series CSVs into one directory."""

    def go():
        corpus = ingest_jsonl(corpus_path)
        files = pipeline.export_reports(round_dir, out_dir, corpus,
                                        ctx.obj["zone"])
        click.echo(f"exported {len(files)} files to {out_dir}")

    _run(go)


if __name__ == "__main__":
    main()
