"""Synthetic corpora with known ground truth for desk-scale testing.

The generated tweets exercise the whole loop: most positives and some
tricky negatives pass the Job-Likely filter, ambiguous wording creates
mid-confidence tweets, and accounts split into individual/commercial
posting styles.
"""

from __future__ import annotations

import random
from datetime import datetime, timedelta, timezone

from .corpus import Corpus, Tweet

JOB_TEMPLATES = [
    "i really hate my job some days honestly",
    "my boss made me stay late at work again tonight",
    "long shift at work today but finally got paid",
    "my manager keeps changing the schedule every single week",
    "so tired of this job i need a vacation soon",
    "love my job even when the hours are long",
    "another double shift at work this weekend ugh",
    "my boss actually thanked me at work today feeling good",
    "job interview tomorrow morning wish me luck everyone",
    "overtime at work again but the money is nice",
    "my coworkers make this job actually fun most days",
    "quitting this job was the best decision ever made",
    "working the early shift at my job again tomorrow",
    "my manager said i might get a raise soon",
    "being jobless for two months has been really stressful",
]

# pass the Job-Likely filter yet are not about employment
TRICKY_NEGATIVE_TEMPLATES = [
    "the final boss in this game is way too hard",
    "that team has a shit manager shit players shit everything",
    "my fantasy league manager traded away our best player",
    "beat the secret boss after like twenty tries tonight",
    "the gym manager gave us free passes for the month",
    "anytime for you boss lol see you this weekend",
    "this raid boss keeps wiping our whole party lol",
    "the stage manager forgot all the props again tonight",
]

PLAIN_NEGATIVE_TEMPLATES = [
    "what a beautiful sunny morning for a long walk",
    "that movie last night was honestly pretty amazing",
    "pizza with friends is the best way to end friday",
    "my dog learned a new trick today so proud",
    "cannot believe how good that concert was last night",
    "this coffee shop has the best muffins in town",
    "rainy days are perfect for reading on the couch",
    "finally finished that puzzle after three long weeks",
    "the sunset over the lake was incredible this evening",
    "road trip playlist ready for the long weekend drive",
]

# contain filter words but are excluded by the school/praise rules
EXCLUDED_NEGATIVE_TEMPLATES = [
    "great job team that was an awesome game tonight",
    "my homework for history class is due tomorrow morning",
    "student council meeting ran late after class again",
    "nice job on the quiz everyone in our course",
]

COMMERCIAL_TEMPLATES = [
    "Panera Bread: Baker - Night (#Rochester, NY) http://jobs.example/1 "
    "#Hospitality #VeteranJob #Job #Jobs #TweetMyJobs",
    "Acme Corp: Sales Associate (#Rochester, NY) http://jobs.example/2 "
    "#Job #Jobs #Hiring",
    "CareTeam: Registered Nurse - Day (#Henrietta, NY) "
    "http://jobs.example/3 #Jobs #Hiring #TweetMyJobs",
    "QuickMart: Cashier - Evenings (#Greece, NY) http://jobs.example/4 "
    "#Job #Hiring",
]

FILLER_WORDS = [
    "today", "honestly", "really", "again", "maybe", "still", "always",
    "never", "right", "now", "though", "seriously", "literally", "just",
]


def _vary(template: str, rng: random.Random) -> str:
    words = template.split()
    if rng.random() < 0.5:
        words.insert(rng.randrange(len(words) + 1), rng.choice(FILLER_WORDS))
    return " ".join(words)


def job_corpus(
    n: int,
    seed: int = 0,
    start: datetime = datetime(2013, 7, 1, tzinfo=timezone.utc),
    days: int = 365,
    positive_fraction: float = 0.35,
    commercial_fraction: float = 0.05,
) -> tuple[Corpus, dict[str, bool]]:
    """Generate n tweets and their job-related ground truth."""
    rng = random.Random(seed)
    tweets = []
    truth = {}
    n_accounts = max(4, n // 10)
    commercial_accounts = {
        f"biz{i:03d}" for i in range(max(1, int(n_accounts * 0.05)))
    }
    individual_accounts = [f"user{i:04d}" for i in range(n_accounts)]
    for i in range(n):
        tid = f"t{seed}-{i:06d}"
        roll = rng.random()
        if roll < commercial_fraction:
            text = rng.choice(COMMERCIAL_TEMPLATES)
            account = rng.choice(sorted(commercial_accounts))
            label = True
        elif roll < commercial_fraction + positive_fraction:
            text = _vary(rng.choice(JOB_TEMPLATES), rng)
            account = rng.choice(individual_accounts)
            label = True
        elif roll < commercial_fraction + positive_fraction + 0.2:
            text = _vary(rng.choice(TRICKY_NEGATIVE_TEMPLATES), rng)
            account = rng.choice(individual_accounts)
            label = False
        elif roll < commercial_fraction + positive_fraction + 0.25:
            text = _vary(rng.choice(EXCLUDED_NEGATIVE_TEMPLATES), rng)
            account = rng.choice(individual_accounts)
            label = False
        else:
            text = _vary(rng.choice(PLAIN_NEGATIVE_TEMPLATES), rng)
            account = rng.choice(individual_accounts)
            label = False
        created = start + timedelta(seconds=rng.randrange(days * 86400))
        tweets.append(
            Tweet(id=tid, account_id=account, created_at_utc=created,
                  text=text)
        )
        truth[tid] = label
    return Corpus(tweets), truth


def separable_corpus(
    n: int = 500, seed: int = 0
) -> list[tuple[list[str], bool]]:
    """Documents with disjoint class vocabularies; linearly separable."""
    rng = random.Random(seed)
    pos_vocab = [f"pos{i}" for i in range(40)]
    neg_vocab = [f"neg{i}" for i in range(40)]
    docs = []
    for i in range(n):
        label = i % 2 == 0
        vocab = pos_vocab if label else neg_vocab
        tokens = [rng.choice(vocab) for _ in range(rng.randrange(5, 15))]
        docs.append((tokens, label))
    return docs


def planted_topic_docs(
    n_topics: int = 4,
    docs_per_topic: int = 50,
    words_per_topic: int = 25,
    doc_length: int = 40,
    seed: int = 0,
) -> tuple[list[list[str]], list[list[str]]]:
    """Documents drawn purely from one of n_topics disjoint vocabularies.
    Returns (documents, per-topic vocabularies)."""
    rng = random.Random(seed)
    vocabularies = [
        [f"topic{k}word{i}" for i in range(words_per_topic)]
        for k in range(n_topics)
    ]
    docs = []
    for k in range(n_topics):
        for _ in range(docs_per_topic):
            docs.append(
                [rng.choice(vocabularies[k]) for _ in range(doc_length)]
            )
    return docs, vocabularies
