import { describe, expect, it } from "vitest";

import {
  TIER_TABS,
  cardsForTab,
  crowdMajority,
  pendingCards,
  tabCounts,
  toCard,
} from "../src/adjudication.js";
import { ApiClient } from "../src/api.js";
import { AdjudicationItem } from "../src/types.js";
import { demoStub } from "./stub.js";

describe("tier tabs", () => {
  it("exposes exactly the four majority-but-not-unanimous vote splits", () => {
    expect(TIER_TABS.map((t) => t.id)).toEqual([
      "job-3", "not-job-3", "job-4", "not-job-4",
    ]);
    expect(TIER_TABS.map((t) => t.tier)).toEqual([
      "3/5-Y", "3/5-N", "4/5-Y", "4/5-N",
    ]);
  });

  it("routes every queue item to the tab matching its vote split", async () => {
    const stub = demoStub();
    const client = new ApiClient("p1", { fetchImpl: stub.fetch });
    const queue = await client.adjudicationQueue();
    const byTab: Record<string, string[]> = {};
    for (const tab of TIER_TABS) {
      byTab[tab.id] = cardsForTab(queue, tab.id).map((c) => c.tweetId);
    }
    expect(byTab).toEqual({
      "job-3": ["a1", "a5"],
      "not-job-3": ["a2"],
      "job-4": ["a3"],
      "not-job-4": ["a4"],
    });
    // tabs partition the queue: nothing dropped, nothing duplicated
    const routed = Object.values(byTab).flat().sort();
    expect(routed).toEqual(queue.map((q) => q.tweet_id).sort());
    expect(tabCounts(queue)).toEqual({
      "job-3": 2, "not-job-3": 1, "job-4": 1, "not-job-4": 1,
    });
  });

  it("rejects unknown tabs and unanimous vote splits", () => {
    expect(() => cardsForTab([], "job-5")).toThrowError(
      "unknown adjudication tab: job-5",
    );
    const unanimous: AdjudicationItem = {
      tweet_id: "u", text: "t", yes_count: 5, no_count: 0,
      tier: "5/5-Y", gold_label: null,
    };
    expect(() => toCard(unanimous)).not.toThrow(); // 5 votes, still a card
    const short: AdjudicationItem = { ...unanimous, yes_count: 3 };
    expect(() => toCard(short)).toThrowError(/must sum to 5/);
  });
});

describe("adjudication flow", () => {
  it("pending cards shrink as experts label; latest decision wins", async () => {
    const stub = demoStub();
    const client = new ApiClient("p1", { fetchImpl: stub.fetch });

    let queue = await client.adjudicationQueue();
    expect(pendingCards(queue, "job-3").map((c) => c.tweetId)).toEqual(
      ["a1", "a5"],
    );

    await client.adjudicate("a1", true, "expert-1");
    queue = await client.adjudicationQueue();
    expect(pendingCards(queue, "job-3").map((c) => c.tweetId)).toEqual(["a5"]);
    expect(queue.find((q) => q.tweet_id === "a1")!.gold_label).toBe(true);

    await client.adjudicate("a1", false, "expert-2");
    queue = await client.adjudicationQueue();
    expect(queue.find((q) => q.tweet_id === "a1")!.gold_label).toBe(false);
  });

  it("refuses tweets outside the queue", async () => {
    const stub = demoStub();
    const client = new ApiClient("p1", { fetchImpl: stub.fetch });
    await expect(
      client.adjudicate("nope", true, "expert-1"),
    ).rejects.toMatchObject({ status: 422 });
  });

  it("preselects the crowd majority", async () => {
    const stub = demoStub();
    const client = new ApiClient("p1", { fetchImpl: stub.fetch });
    const queue = await client.adjudicationQueue();
    expect(crowdMajority(cardsForTab(queue, "job-3")[0])).toBe(true);
    expect(crowdMajority(cardsForTab(queue, "not-job-4")[0])).toBe(false);
  });
});
