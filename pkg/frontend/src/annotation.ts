// Annotation session state: one card at a time, Y/N answers, a strict
// all-answered submission gate, and a local draft so a refreshed tab
// resumes with nothing lost.

import { Answer, BatchView } from "./types.js";

export interface AnnotationCard {
  position: number;
  text: string;
  progress: { answered: number; total: number };
  selected: Answer | null;
}

/** Minimal slice of window.localStorage so tests can inject a map. */
export interface DraftStore {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

interface Draft {
  batch_id: string;
  answers: Record<number, Answer>;
  cursor: number;
}

export class AnnotationSession {
  private answers = new Map<number, Answer>();
  private cursor = 0;

  constructor(
    readonly batch: BatchView,
    private readonly store?: DraftStore,
    private readonly draftKey = `jobtalk-draft:${batch.batch_id}`,
  ) {
    this.restoreDraft();
  }

  get question(): string {
    return this.batch.question;
  }

  get total(): number {
    return this.batch.items.length;
  }

  get answeredCount(): number {
    return this.answers.size;
  }

  /** Submission is only possible once every position has an answer. */
  get canSubmit(): boolean {
    return this.answers.size === this.total && this.total > 0;
  }

  card(position: number): AnnotationCard {
    const item = this.batch.items[position];
    if (item === undefined) {
      throw new RangeError(`no card at position ${position}`);
    }
    return {
      position: item.position,
      text: item.text,
      progress: { answered: this.answeredCount, total: this.total },
      selected: this.answers.get(item.position) ?? null,
    };
  }

  currentCard(): AnnotationCard {
    return this.card(this.cursor);
  }

  answer(position: number, value: Answer): void {
    if (position < 0 || position >= this.total) {
      throw new RangeError(`no card at position ${position}`);
    }
    this.answers.set(position, value);
    this.saveDraft();
  }

  next(): void {
    if (this.cursor < this.total - 1) this.cursor += 1;
    this.saveDraft();
  }

  previous(): void {
    if (this.cursor > 0) this.cursor -= 1;
    this.saveDraft();
  }

  /** Keyboard shortcuts: y/n answer the current card and advance,
   *  arrows move between cards. Returns true when the key was handled. */
  handleKey(key: string): boolean {
    switch (key.toLowerCase()) {
      case "y":
        this.answer(this.cursor, "Y");
        this.next();
        return true;
      case "n":
        this.answer(this.cursor, "N");
        this.next();
        return true;
      case "arrowright":
        this.next();
        return true;
      case "arrowleft":
        this.previous();
        return true;
      default:
        return false;
    }
  }

  /** The POST body for submit_labels; throws while any card is blank so
   *  a partial submission can never leave the client. */
  buildSubmission(): Record<number, Answer> {
    if (!this.canSubmit) {
      throw new Error(
        `cannot submit: ${this.answeredCount} of ${this.total} answered`,
      );
    }
    const body: Record<number, Answer> = {};
    for (const [position, value] of this.answers) body[position] = value;
    return body;
  }

  clearDraft(): void {
    this.store?.removeItem(this.draftKey);
  }

  private saveDraft(): void {
    if (!this.store) return;
    const draft: Draft = {
      batch_id: this.batch.batch_id,
      answers: Object.fromEntries(this.answers) as Record<number, Answer>,
      cursor: this.cursor,
    };
    this.store.setItem(this.draftKey, JSON.stringify(draft));
  }

  private restoreDraft(): void {
    const raw = this.store?.getItem(this.draftKey);
    if (!raw) return;
    try {
      const draft = JSON.parse(raw) as Draft;
      if (draft.batch_id !== this.batch.batch_id) return;
      for (const [pos, value] of Object.entries(draft.answers)) {
        const position = Number(pos);
        if (position >= 0 && position < this.total &&
            (value === "Y" || value === "N")) {
          this.answers.set(position, value);
        }
      }
      this.cursor = Math.min(Math.max(draft.cursor, 0), this.total - 1);
    } catch {
      // a corrupt draft is discarded, never fatal
      this.store?.removeItem(this.draftKey);
    }
  }
}
