// Adjudication queue model: the four majority-but-not-unanimous tiers as
// filterable tabs, and cards exposing the crowd vote split.

import { AdjudicationItem } from "./types.js";

export interface AdjudicationCard {
  tweetId: string;
  text: string;
  yesCount: number;
  noCount: number;
  tier: string;
  goldLabel: boolean | null;
}

export interface TierTab {
  id: string;
  label: string;
  tier: string;
}

/** Tab order mirrors the published vote-split breakdown: 3/5 then 4/5,
 *  job before not-job. Unanimous tweets never reach this queue. */
export const TIER_TABS: readonly TierTab[] = [
  { id: "job-3", label: "Job 3/5", tier: "3/5-Y" },
  { id: "not-job-3", label: "Not job 3/5", tier: "3/5-N" },
  { id: "job-4", label: "Job 4/5", tier: "4/5-Y" },
  { id: "not-job-4", label: "Not job 4/5", tier: "4/5-N" },
];

export function toCard(item: AdjudicationItem): AdjudicationCard {
  if (item.yes_count + item.no_count !== 5) {
    throw new Error(
      `vote split must sum to 5, got ${item.yes_count}+${item.no_count} ` +
        `for ${item.tweet_id}`,
    );
  }
  return {
    tweetId: item.tweet_id,
    text: item.text,
    yesCount: item.yes_count,
    noCount: item.no_count,
    tier: item.tier,
    goldLabel: item.gold_label,
  };
}

export function cardsForTab(
  queue: AdjudicationItem[],
  tabId: string,
): AdjudicationCard[] {
  const tab = TIER_TABS.find((t) => t.id === tabId);
  if (!tab) throw new Error(`unknown adjudication tab: ${tabId}`);
  return queue.filter((item) => item.tier === tab.tier).map(toCard);
}

export function tabCounts(queue: AdjudicationItem[]): Record<string, number> {
  const counts: Record<string, number> = {};
  for (const tab of TIER_TABS) {
    counts[tab.id] = queue.filter((item) => item.tier === tab.tier).length;
  }
  return counts;
}

/** Pending cards are those no expert has labeled yet. */
export function pendingCards(
  queue: AdjudicationItem[],
  tabId: string,
): AdjudicationCard[] {
  return cardsForTab(queue, tabId).filter((c) => c.goldLabel === null);
}

/** The crowd's majority answer, used to preselect the confirm control. */
export function crowdMajority(card: AdjudicationCard): boolean {
  return card.yesCount > card.noCount;
}
