"""Local annotation service: batch assignment, label collection, agreement
reporting, and community adjudication.

State is derived from an append-only event log guarded by a single lock per
service (assignments and submissions are linearizable). Replaying the log
reconstructs the same state exactly.
"""

from __future__ import annotations

import csv
import io
import json
import threading
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Callable, Iterable, Optional

from .annotation import (
    Batch,
    CONSISTENCY_THRESHOLD,
    LabelRecord,
    RATERS_PER_TWEET,
    aggregate_labels,
    needs_adjudication,
    pooled_agreement,
    tier_histogram,
)
from .corpus import DataError

QUESTION_TEXT = "Is this tweet about employment or job?"
DEFAULT_ASSIGNMENT_TTL = timedelta(minutes=30)


class ConflictError(Exception):
    """Worker already holds an open assignment."""

    def __init__(self, message: str, assignment: dict):
        super().__init__(message)
        self.assignment = assignment


class NotFoundError(Exception):
    pass


@dataclass
class Assignment:
    batch_id: str
    worker_id: str
    issued_at: datetime
    expires_at: datetime


@dataclass
class ProjectState:
    id: str
    batches: dict[str, Batch]
    texts: dict[str, str]
    round_number: int = 1
    submissions_per_batch: dict[str, int] = field(default_factory=dict)
    completed_by: dict[str, set[str]] = field(default_factory=dict)
    assignments: dict[str, Assignment] = field(default_factory=dict)  # by batch
    worker_assignment: dict[str, str] = field(default_factory=dict)
    counted_labels: list[LabelRecord] = field(default_factory=list)
    adjudications: dict[str, bool] = field(default_factory=dict)

    def batch_state(self, batch_id: str) -> str:
        if self.submissions_per_batch.get(batch_id, 0) >= RATERS_PER_TWEET:
            return "complete"
        if batch_id in self.assignments:
            return "assigned"
        return "open"


class AnnotationService:
    def __init__(
        self,
        event_log_path: Optional[str] = None,
        assignment_ttl: timedelta = DEFAULT_ASSIGNMENT_TTL,
        clock: Callable[[], datetime] = lambda: datetime.now(timezone.utc),
        token: Optional[str] = None,
    ):
        self._lock = threading.Lock()
        self._projects: dict[str, ProjectState] = {}
        self.events: list[dict] = []
        self._event_log_path = Path(event_log_path) if event_log_path else None
        self.assignment_ttl = assignment_ttl
        self.clock = clock
        self.token = token

    # -- event handling -----------------------------------------------------

    def _record(self, event: dict) -> None:
        self.events.append(event)
        if self._event_log_path:
            with open(self._event_log_path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(event) + "\n")

    @classmethod
    def replay(cls, events: Iterable[dict]) -> "AnnotationService":
        """Rebuild service state by applying an audit log."""
        svc = cls()
        for event in events:
            svc._apply(event, record=True)
        return svc

    @classmethod
    def from_log_file(cls, path) -> "AnnotationService":
        events = [
            json.loads(line)
            for line in Path(path).read_text(encoding="utf-8").splitlines()
            if line.strip()
        ]
        return cls.replay(events)

    def _apply(self, event: dict, record: bool) -> None:
        kind = event["type"]
        if kind == "project_created":
            batches = {
                b["id"]: Batch(
                    id=b["id"],
                    item_list=b["item_list"],
                    dup_pairs=[tuple(p) for p in b["dup_pairs"]],
                )
                for b in event["batches"]
            }
            self._projects[event["project_id"]] = ProjectState(
                id=event["project_id"],
                batches=batches,
                texts=event["texts"],
                round_number=event.get("round", 1),
            )
            self._projects[event["project_id"]].submissions_per_batch = {
                bid: 0 for bid in batches
            }
            self._projects[event["project_id"]].completed_by = {
                bid: set() for bid in batches
            }
        elif kind == "assigned":
            proj = self._projects[event["project_id"]]
            assignment = Assignment(
                batch_id=event["batch_id"],
                worker_id=event["worker_id"],
                issued_at=datetime.fromisoformat(event["issued_at"]),
                expires_at=datetime.fromisoformat(event["expires_at"]),
            )
            proj.assignments[event["batch_id"]] = assignment
            proj.worker_assignment[event["worker_id"]] = event["batch_id"]
        elif kind == "assignment_released":
            proj = self._projects[event["project_id"]]
            proj.assignments.pop(event["batch_id"], None)
            proj.worker_assignment.pop(event["worker_id"], None)
        elif kind == "submitted":
            proj = self._projects[event["project_id"]]
            proj.assignments.pop(event["batch_id"], None)
            proj.worker_assignment.pop(event["worker_id"], None)
            proj.completed_by[event["batch_id"]].add(event["worker_id"])
            if event["qualified"]:
                proj.submissions_per_batch[event["batch_id"]] += 1
                batch = proj.batches[event["batch_id"]]
                submitted_at = datetime.fromisoformat(event["submitted_at"])
                for pos_str, answer in event["answers"].items():
                    pos = int(pos_str)
                    proj.counted_labels.append(
                        LabelRecord(
                            batch_id=event["batch_id"],
                            worker_id=event["worker_id"],
                            position=pos,
                            tweet_id=batch.item_list[pos],
                            answer=answer,
                            submitted_at=submitted_at,
                        )
                    )
        elif kind == "adjudicated":
            proj = self._projects[event["project_id"]]
            proj.adjudications[event["tweet_id"]] = event["label"]
        else:
            raise DataError(f"unknown event type: {kind!r}")
        if record:
            self.events.append(event)

    def _emit(self, event: dict) -> None:
        self._apply(event, record=False)
        self._record(event)

    # -- queries and commands ----------------------------------------------

    def _project(self, project_id: str) -> ProjectState:
        proj = self._projects.get(project_id)
        if proj is None:
            raise NotFoundError(f"unknown project: {project_id!r}")
        return proj

    def create_project(
        self,
        project_id: str,
        batches: list[Batch],
        texts: dict[str, str],
        round_number: int = 1,
    ) -> None:
        with self._lock:
            if project_id in self._projects:
                raise DataError(f"project exists: {project_id!r}")
            self._emit(
                {
                    "type": "project_created",
                    "project_id": project_id,
                    "round": round_number,
                    "batches": [
                        {
                            "id": b.id,
                            "item_list": b.item_list,
                            "dup_pairs": [list(p) for p in b.dup_pairs],
                        }
                        for b in batches
                    ],
                    "texts": texts,
                }
            )

    def _expire_stale(self, proj: ProjectState, now: datetime) -> None:
        for batch_id, assignment in list(proj.assignments.items()):
            if assignment.expires_at <= now:
                self._emit(
                    {
                        "type": "assignment_released",
                        "project_id": proj.id,
                        "batch_id": batch_id,
                        "worker_id": assignment.worker_id,
                        "reason": "expired",
                    }
                )

    def _batch_view(self, proj: ProjectState, batch_id: str) -> dict:
        batch = proj.batches[batch_id]
        # duplicate probes are served as ordinary items, never marked
        return {
            "batch_id": batch_id,
            "question": QUESTION_TEXT,
            "items": [
                {"position": pos, "text": proj.texts.get(tid, "")}
                for pos, tid in enumerate(batch.item_list)
            ],
        }

    def next_batch(self, project_id: str, worker_id: str) -> Optional[dict]:
        """Assign the least-served open batch; None when nothing is open."""
        with self._lock:
            proj = self._project(project_id)
            now = self.clock()
            self._expire_stale(proj, now)
            existing = proj.worker_assignment.get(worker_id)
            if existing is not None:
                raise ConflictError(
                    f"worker {worker_id!r} already holds batch {existing!r}",
                    self._batch_view(proj, existing),
                )
            candidates = [
                bid
                for bid in proj.batches
                if proj.batch_state(bid) == "open"
                and worker_id not in proj.completed_by[bid]
            ]
            if not candidates:
                return None
            batch_id = min(
                candidates,
                key=lambda bid: (proj.submissions_per_batch[bid], bid),
            )
            self._emit(
                {
                    "type": "assigned",
                    "project_id": project_id,
                    "batch_id": batch_id,
                    "worker_id": worker_id,
                    "issued_at": now.isoformat(),
                    "expires_at": (now + self.assignment_ttl).isoformat(),
                }
            )
            return self._batch_view(proj, batch_id)

    def submit_labels(
        self,
        project_id: str,
        worker_id: str,
        batch_id: str,
        answers: dict[int, str],
    ) -> dict:
        """Atomically persist a full answer set; returns the duplicate
        consistency receipt. Disqualified submissions (consistency below
        threshold) are audited but not counted, re-queuing the batch."""
        with self._lock:
            proj = self._project(project_id)
            now = self.clock()
            self._expire_stale(proj, now)
            assignment = proj.assignments.get(batch_id)
            if assignment is None or assignment.worker_id != worker_id:
                raise DataError(
                    f"no open assignment of batch {batch_id!r} "
                    f"to worker {worker_id!r}"
                )
            batch = proj.batches[batch_id]
            answers = {int(k): v for k, v in answers.items()}
            expected = set(range(len(batch.item_list)))
            if set(answers) != expected:
                raise DataError(
                    "partial submission rejected: answers must cover "
                    f"all {len(expected)} positions"
                )
            bad = {a for a in answers.values() if a not in ("Y", "N")}
            if bad:
                raise DataError(f"invalid answers: {sorted(bad)}")
            if batch.dup_pairs:
                same = sum(
                    1 for a, b in batch.dup_pairs if answers[a] == answers[b]
                )
                consistency = same / len(batch.dup_pairs)
            else:
                consistency = 1.0
            qualified = consistency >= CONSISTENCY_THRESHOLD
            self._emit(
                {
                    "type": "submitted",
                    "project_id": project_id,
                    "batch_id": batch_id,
                    "worker_id": worker_id,
                    "answers": {str(k): v for k, v in sorted(answers.items())},
                    "consistency": consistency,
                    "qualified": qualified,
                    "submitted_at": now.isoformat(),
                }
            )
            return {
                "batch_id": batch_id,
                "consistency": consistency,
                "qualified": qualified,
            }

    def _complete_labels(self, proj: ProjectState) -> list[LabelRecord]:
        complete = {
            bid for bid in proj.batches if proj.batch_state(bid) == "complete"
        }
        return [r for r in proj.counted_labels if r.batch_id in complete]

    def status(self, project_id: str) -> dict:
        with self._lock:
            proj = self._project(project_id)
            states = {
                bid: proj.batch_state(bid) for bid in proj.batches
            }
            complete = sum(1 for s in states.values() if s == "complete")
            labels = self._complete_labels(proj)
            aggregates, _ = aggregate_labels(labels)
            report = pooled_agreement(labels, proj.batches.values())
            return {
                "project_id": project_id,
                "round": proj.round_number,
                "batches_total": len(proj.batches),
                "batches_complete": complete,
                "batches_assigned": sum(
                    1 for s in states.values() if s == "assigned"
                ),
                "batches_open": sum(
                    1 for s in states.values() if s == "open"
                ),
                "agreement": {
                    "fleiss_kappa": report.fleiss_kappa,
                    "krippendorff_alpha": report.krippendorff_alpha,
                    "per_worker_consistency": report.per_worker_consistency,
                },
                "tier_histogram": tier_histogram(aggregates),
            }

    def adjudication_queue(self, project_id: str) -> list[dict]:
        with self._lock:
            proj = self._project(project_id)
            aggregates, _ = aggregate_labels(self._complete_labels(proj))
            return [
                {
                    "tweet_id": agg.tweet_id,
                    "text": proj.texts.get(agg.tweet_id, ""),
                    "yes_count": agg.yes_count,
                    "no_count": agg.no_count,
                    "tier": agg.tier,
                    "gold_label": proj.adjudications.get(agg.tweet_id),
                }
                for agg in aggregates
                if needs_adjudication(agg)
            ]

    def adjudicate(
        self, project_id: str, tweet_id: str, label: bool, expert_id: str
    ) -> dict:
        """Latest-wins gold label for a 3/5 or 4/5 tweet; every decision
        stays in the audit log."""
        with self._lock:
            proj = self._project(project_id)
            aggregates, _ = aggregate_labels(self._complete_labels(proj))
            eligible = {
                a.tweet_id for a in aggregates if needs_adjudication(a)
            }
            if tweet_id not in eligible:
                raise DataError(
                    f"tweet {tweet_id!r} is not in the adjudication queue"
                )
            self._emit(
                {
                    "type": "adjudicated",
                    "project_id": project_id,
                    "tweet_id": tweet_id,
                    "label": bool(label),
                    "expert_id": expert_id,
                    "at": self.clock().isoformat(),
                }
            )
            return {"tweet_id": tweet_id, "label": bool(label)}

    def adjudications(self, project_id: str) -> dict[str, bool]:
        with self._lock:
            return dict(self._project(project_id).adjudications)

    def counted_labels(self, project_id: str) -> list[LabelRecord]:
        with self._lock:
            return list(self._project(project_id).counted_labels)

    def export_labels_csv(self, project_id: str) -> str:
        with self._lock:
            proj = self._project(project_id)
            buf = io.StringIO()
            writer = csv.writer(buf)
            writer.writerow(
                ["batch_id", "worker_id", "position", "tweet_id", "answer",
                 "submitted_at"]
            )
            for r in proj.counted_labels:
                writer.writerow(
                    [r.batch_id, r.worker_id, r.position, r.tweet_id,
                     r.answer, r.submitted_at.isoformat()]
                )
            return buf.getvalue()

    def snapshot(self, project_id: str) -> dict:
        """Comparable snapshot of derived project state (for replay tests)."""
        with self._lock:
            proj = self._project(project_id)
            return {
                "states": {
                    bid: proj.batch_state(bid) for bid in proj.batches
                },
                "submissions": dict(proj.submissions_per_batch),
                "labels": [
                    (r.batch_id, r.worker_id, r.position, r.tweet_id,
                     r.answer)
                    for r in proj.counted_labels
                ],
                "adjudications": dict(proj.adjudications),
            }


try:  # request models resolve at import time for the HTTP layer
    from pydantic import BaseModel as _BaseModel

    class LabelSubmission(_BaseModel):
        worker: str
        answers: dict[int, str]

    class AdjudicationRequest(_BaseModel):
        tweet_id: str
        label: bool
        expert: str
except ImportError:  # pragma: no cover - service core works without pydantic
    LabelSubmission = AdjudicationRequest = None


def create_app(service: AnnotationService):
    """FastAPI wrapper exposing the /v1 JSON API."""
    from fastapi import FastAPI, Header, HTTPException, Response
    from fastapi.responses import PlainTextResponse

    app = FastAPI(title="jobtalk annotation service")

    def check_token(x_auth_token: Optional[str]) -> None:
        if service.token is not None and x_auth_token != service.token:
            raise HTTPException(status_code=401, detail="bad token")

    @app.get("/v1/projects/{project_id}/next-batch")
    def next_batch(
        project_id: str, worker: str,
        x_auth_token: Optional[str] = Header(default=None),
    ):
        check_token(x_auth_token)
        try:
            view = service.next_batch(project_id, worker)
        except NotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except ConflictError as exc:
            return Response(
                content=json.dumps(
                    {"detail": str(exc), "assignment": exc.assignment}
                ),
                status_code=409,
                media_type="application/json",
            )
        if view is None:
            return Response(status_code=204)
        return view

    @app.post("/v1/projects/{project_id}/batches/{batch_id}/labels")
    def submit(
        project_id: str, batch_id: str, body: LabelSubmission,
        x_auth_token: Optional[str] = Header(default=None),
    ):
        check_token(x_auth_token)
        try:
            return service.submit_labels(
                project_id, body.worker, batch_id, body.answers
            )
        except NotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except DataError as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    @app.get("/v1/projects/{project_id}/status")
    def status(
        project_id: str,
        x_auth_token: Optional[str] = Header(default=None),
    ):
        check_token(x_auth_token)
        try:
            return service.status(project_id)
        except NotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc))

    @app.get("/v1/projects/{project_id}/adjudication-queue")
    def queue(
        project_id: str,
        x_auth_token: Optional[str] = Header(default=None),
    ):
        check_token(x_auth_token)
        try:
            return service.adjudication_queue(project_id)
        except NotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc))

    @app.post("/v1/projects/{project_id}/adjudications")
    def adjudicate(
        project_id: str, body: AdjudicationRequest,
        x_auth_token: Optional[str] = Header(default=None),
    ):
        check_token(x_auth_token)
        try:
            return service.adjudicate(
                project_id, body.tweet_id, body.label, body.expert
            )
        except NotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc))
        except DataError as exc:
            raise HTTPException(status_code=422, detail=str(exc))

    @app.get("/v1/projects/{project_id}/export/labels.csv")
    def export_csv(
        project_id: str,
        x_auth_token: Optional[str] = Header(default=None),
    ):
        check_token(x_auth_token)
        try:
            return PlainTextResponse(
                service.export_labels_csv(project_id), media_type="text/csv"
            )
        except NotFoundError as exc:
            raise HTTPException(status_code=404, detail=str(exc))

    return app
