import { describe, expect, it } from "vitest";

import { AnnotationSession, DraftStore } from "../src/annotation.js";
import { ApiClient } from "../src/api.js";
import { BatchView } from "../src/types.js";
import { demoStub } from "./stub.js";

function memoryStore(): DraftStore & { map: Map<string, string> } {
  const map = new Map<string, string>();
  return {
    map,
    getItem: (k) => map.get(k) ?? null,
    setItem: (k, v) => void map.set(k, v),
    removeItem: (k) => void map.delete(k),
  };
}

function smallBatch(): BatchView {
  return {
    batch_id: "b1",
    question: "Is this tweet about employment or job?",
    items: [
      { position: 0, text: "new job starts monday" },
      { position: 1, text: "lovely weather today" },
      { position: 2, text: "overtime again this week" },
    ],
  };
}

describe("submission gate", () => {
  it("blocks submission until every card is answered", () => {
    const session = new AnnotationSession(smallBatch());
    expect(session.canSubmit).toBe(false);
    session.answer(0, "Y");
    session.answer(2, "N");
    expect(session.canSubmit).toBe(false);
    expect(() => session.buildSubmission()).toThrowError(
      "cannot submit: 2 of 3 answered",
    );
    session.answer(1, "N");
    expect(session.canSubmit).toBe(true);
    expect(session.buildSubmission()).toEqual({ 0: "Y", 1: "N", 2: "N" });
  });

  it("stays blocked on an empty batch", () => {
    const session = new AnnotationSession({
      batch_id: "b0",
      question: "q",
      items: [],
    });
    expect(session.canSubmit).toBe(false);
  });

  it("server stub also rejects a partial body that bypasses the client gate", async () => {
    const stub = demoStub();
    const client = new ApiClient("p1", { fetchImpl: stub.fetch });
    const view = await client.nextBatch("w1");
    expect(view).not.toBeNull();
    // only 3 of 6 positions answered
    await expect(
      client.submitLabels("w1", view!.batch_id, { 0: "Y", 1: "N", 2: "Y" }),
    ).rejects.toMatchObject({ status: 422 });
    expect(stub.submissions).toHaveLength(0);
    // the assignment is still held: a complete submission then succeeds
    const receipt = await client.submitLabels("w1", view!.batch_id, {
      0: "Y", 1: "N", 2: "Y", 3: "N", 4: "Y", 5: "Y",
    });
    expect(receipt.batch_id).toBe("b1");
    expect(stub.submissions).toHaveLength(1);
  });
});

describe("keyboard shortcuts", () => {
  it("y/n answer the current card and advance; arrows navigate", () => {
    const session = new AnnotationSession(smallBatch());
    expect(session.handleKey("y")).toBe(true);
    expect(session.currentCard().position).toBe(1);
    expect(session.card(0).selected).toBe("Y");
    expect(session.handleKey("N")).toBe(true); // case-insensitive
    expect(session.card(1).selected).toBe("N");
    expect(session.handleKey("ArrowLeft")).toBe(true);
    expect(session.currentCard().position).toBe(1);
    expect(session.handleKey("ArrowRight")).toBe(true);
    expect(session.currentCard().position).toBe(2);
    expect(session.handleKey("x")).toBe(false);
  });

  it("does not advance past either end", () => {
    const session = new AnnotationSession(smallBatch());
    session.handleKey("arrowleft");
    expect(session.currentCard().position).toBe(0);
    session.handleKey("y");
    session.handleKey("y");
    session.handleKey("y"); // at the last card already
    expect(session.currentCard().position).toBe(2);
    expect(session.canSubmit).toBe(true);
  });
});

describe("draft persistence", () => {
  it("restores answers and cursor after a simulated refresh", () => {
    const store = memoryStore();
    const first = new AnnotationSession(smallBatch(), store);
    first.handleKey("y");
    first.handleKey("n");
    const resumed = new AnnotationSession(smallBatch(), store);
    expect(resumed.card(0).selected).toBe("Y");
    expect(resumed.card(1).selected).toBe("N");
    expect(resumed.currentCard().position).toBe(2);
    expect(resumed.answeredCount).toBe(2);
  });

  it("ignores drafts for a different batch and discards corrupt ones", () => {
    const store = memoryStore();
    store.setItem("jobtalk-draft:b1", JSON.stringify({
      batch_id: "other", answers: { 0: "Y" }, cursor: 1,
    }));
    const session = new AnnotationSession(smallBatch(), store);
    expect(session.answeredCount).toBe(0);

    store.setItem("jobtalk-draft:b1", "{not json");
    const fromCorrupt = new AnnotationSession(smallBatch(), store);
    expect(fromCorrupt.answeredCount).toBe(0);
    expect(store.getItem("jobtalk-draft:b1")).toBeNull();
  });

  it("clearDraft removes the stored draft after submission", () => {
    const store = memoryStore();
    const session = new AnnotationSession(smallBatch(), store);
    session.handleKey("y");
    expect(store.getItem("jobtalk-draft:b1")).not.toBeNull();
    session.clearDraft();
    expect(store.getItem("jobtalk-draft:b1")).toBeNull();
  });
});

describe("duplicate probes", () => {
  it("renders repeated tweets as ordinary cards with no distinguishing field", async () => {
    const stub = demoStub();
    const client = new ApiClient("p1", { fetchImpl: stub.fetch });
    const view = (await client.nextBatch("w1"))!;
    // positions 2 and 5 carry the same tweet; the payload must not say so
    for (const item of view.items) {
      expect(Object.keys(item).sort()).toEqual(["position", "text"]);
    }
    const session = new AnnotationSession(view);
    const original = session.card(2);
    const probe = session.card(5);
    expect(probe.text).toBe(original.text);
    const strip = ({ position: _p, ...rest }: typeof probe) => rest;
    expect(strip(probe)).toEqual(strip(original));
  });
});
