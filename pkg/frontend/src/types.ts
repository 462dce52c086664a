// Wire types for the /v1 JSON API. These mirror the service payloads
// exactly; the UI never adds derived statistics of its own.

export type Answer = "Y" | "N";

export interface BatchItem {
  position: number;
  text: string;
}

export interface BatchView {
  batch_id: string;
  question: string;
  items: BatchItem[];
}

export interface SubmitReceipt {
  batch_id: string;
  consistency: number;
  qualified: boolean;
}

export interface AgreementReport {
  fleiss_kappa: number | null;
  krippendorff_alpha: number | null;
  per_worker_consistency: Record<string, number>;
}

export interface ProjectStatus {
  project_id: string;
  round: number;
  batches_total: number;
  batches_complete: number;
  batches_assigned: number;
  batches_open: number;
  agreement: AgreementReport;
  tier_histogram: Record<string, number>;
}

export interface AdjudicationItem {
  tweet_id: string;
  text: string;
  yes_count: number;
  no_count: number;
  tier: string;
  gold_label: boolean | null;
}

export interface ConflictBody {
  detail: string;
  assignment: BatchView;
}

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
  }
}

export class ConflictResponse extends Error {
  constructor(public readonly assignment: BatchView) {
    super("worker already holds an assignment");
  }
}
