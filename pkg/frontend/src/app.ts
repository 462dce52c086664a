// Single-page app entry: wires the annotation flow, adjudication tabs,
// and dashboard to the DOM. Served statically by the annotation service
// (jobtalk serve --static-dir); all state lives server-side.

import { ApiClient } from "./api.js";
import { AnnotationSession } from "./annotation.js";
import {
  TIER_TABS,
  crowdMajority,
  pendingCards,
  tabCounts,
} from "./adjudication.js";
import { buildTiles } from "./dashboard.js";
import { ConflictResponse } from "./types.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function workerId(): string {
  const key = "jobtalk-worker-id";
  let id = localStorage.getItem(key);
  if (!id) {
    id = `w-${Math.random().toString(36).slice(2, 10)}`;
    localStorage.setItem(key, id);
  }
  return id;
}

class App {
  private readonly client: ApiClient;
  private readonly worker = workerId();
  private session: AnnotationSession | null = null;

  constructor() {
    const params = new URLSearchParams(location.search);
    this.client = new ApiClient(params.get("project") ?? "default", {
      token: params.get("token") ?? undefined,
    });
  }

  async start(): Promise<void> {
    document.addEventListener("keydown", (ev) => this.onKey(ev));
    el("next-batch").addEventListener("click", () => this.loadBatch());
    el("submit").addEventListener("click", () => this.submit());
    el("answer-y").addEventListener("click", () => this.onKey(
      new KeyboardEvent("keydown", { key: "y" })));
    el("answer-n").addEventListener("click", () => this.onKey(
      new KeyboardEvent("keydown", { key: "n" })));
    for (const tab of TIER_TABS) {
      el(`tab-${tab.id}`).addEventListener("click", () =>
        this.renderQueue(tab.id));
    }
    await this.refreshDashboard();
    await this.renderQueue(TIER_TABS[0].id);
  }

  private onKey(ev: KeyboardEvent): void {
    if (!this.session) return;
    if (this.session.handleKey(ev.key)) {
      ev.preventDefault();
      this.renderCard();
    }
  }

  private async loadBatch(): Promise<void> {
    try {
      const view = await this.client.nextBatch(this.worker);
      if (view === null) {
        el("card-text").textContent = "No open batches right now.";
        this.session = null;
        return;
      }
      this.session = new AnnotationSession(view, localStorage);
      this.renderCard();
    } catch (err) {
      if (err instanceof ConflictResponse) {
        // resume the batch this worker already holds
        this.session = new AnnotationSession(err.assignment, localStorage);
        this.renderCard();
        return;
      }
      throw err;
    }
  }

  private renderCard(): void {
    if (!this.session) return;
    const card = this.session.currentCard();
    el("question").textContent = this.session.question;
    el("card-text").textContent = card.text;
    el("progress").textContent =
      `${card.progress.answered} / ${card.progress.total}`;
    el("selected").textContent = card.selected ?? "—";
    const submit = el<HTMLButtonElement>("submit");
    submit.disabled = !this.session.canSubmit;
  }

  private async submit(): Promise<void> {
    if (!this.session || !this.session.canSubmit) return;
    const receipt = await this.client.submitLabels(
      this.worker,
      this.session.batch.batch_id,
      this.session.buildSubmission(),
    );
    this.session.clearDraft();
    this.session = null;
    el("card-text").textContent = receipt.qualified
      ? "Batch submitted. Thank you!"
      : "Batch submitted, but your duplicate answers disagreed too often;" +
        " it will be re-served to another worker.";
    await this.refreshDashboard();
  }

  private async renderQueue(tabId: string): Promise<void> {
    const queue = await this.client.adjudicationQueue();
    const counts = tabCounts(queue);
    for (const tab of TIER_TABS) {
      el(`tab-${tab.id}`).textContent = `${tab.label} (${counts[tab.id]})`;
    }
    const list = el("queue");
    list.innerHTML = "";
    for (const card of pendingCards(queue, tabId)) {
      const row = document.createElement("li");
      row.textContent =
        `${card.text} — ${card.yesCount}Y/${card.noCount}N `;
      for (const label of [true, false]) {
        const btn = document.createElement("button");
        btn.textContent = label ? "job" : "not job";
        if (label === crowdMajority(card)) btn.classList.add("majority");
        btn.addEventListener("click", async () => {
          await this.client.adjudicate(card.tweetId, label, this.worker);
          await this.renderQueue(tabId);
          await this.refreshDashboard();
        });
        row.appendChild(btn);
      }
      list.appendChild(row);
    }
  }

  private async refreshDashboard(): Promise<void> {
    const { parsed } = await this.client.status();
    const dash = el("dashboard");
    dash.innerHTML = "";
    for (const tile of buildTiles(parsed)) {
      const node = document.createElement("div");
      node.className = "tile";
      node.id = `tile-${tile.id}`;
      node.textContent = `${tile.label}: ${tile.value}`;
      dash.appendChild(node);
    }
  }
}

new App().start().catch((err) => {
  console.error(err);
  const banner = document.getElementById("error");
  if (banner) banner.textContent = String(err);
});
