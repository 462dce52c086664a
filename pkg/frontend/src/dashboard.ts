// Dashboard view model. Every tile carries the exact fetched value; the
// client never recomputes a statistic the server already reports.

import { ProjectStatus } from "./types.js";

export interface DashboardTile {
  id: string;
  label: string;
  /** JSON-serialized fetched value, byte-for-byte from the API payload. */
  value: string;
}

function verbatim(value: unknown): string {
  return JSON.stringify(value);
}

export function buildTiles(status: ProjectStatus): DashboardTile[] {
  return [
    { id: "round", label: "Round", value: verbatim(status.round) },
    {
      id: "batches-complete",
      label: "Batches complete",
      value: verbatim(status.batches_complete),
    },
    {
      id: "batches-assigned",
      label: "Batches assigned",
      value: verbatim(status.batches_assigned),
    },
    {
      id: "batches-open",
      label: "Batches open",
      value: verbatim(status.batches_open),
    },
    {
      id: "batches-total",
      label: "Batches total",
      value: verbatim(status.batches_total),
    },
    {
      id: "fleiss-kappa",
      label: "Fleiss kappa",
      value: verbatim(status.agreement.fleiss_kappa),
    },
    {
      id: "krippendorff-alpha",
      label: "Krippendorff alpha",
      value: verbatim(status.agreement.krippendorff_alpha),
    },
    {
      id: "tier-histogram",
      label: "Agreement tiers",
      value: verbatim(status.tier_histogram),
    },
  ];
}

export function tileById(
  tiles: DashboardTile[],
  id: string,
): DashboardTile {
  const tile = tiles.find((t) => t.id === id);
  if (!tile) throw new Error(`no dashboard tile: ${id}`);
  return tile;
}
