/** View state and the pure transitions the page runs on. */

import type { AskPayload, DatasetSummary } from "./api.js";

export type StageBadge = "Exact" | "Approximate" | "LLM";

const BADGES: Record<string, StageBadge> = {
  exact: "Exact",
  approximate: "Approximate",
  llm: "LLM",
};

export function stageBadge(stage: string): StageBadge {
  const badge = BADGES[stage];
  if (!badge) {
    throw new Error(`unknown answer stage: ${stage}`);
  }
  return badge;
}

/** Anything the pipeline could not verify against the knowledge base gets
 * the marker — which is every answer that fell through to the model. */
export function needsUnverifiedMarker(payload: AskPayload): boolean {
  return !payload.verified;
}

export interface HistoryEntry {
  question: string;
  badge: StageBadge;
}

export interface ViewState {
  datasets: DatasetSummary[];
  selected: string | null;
  pending: boolean;
  response: AskPayload | null;
  error: { code: string; message: string } | null;
  history: HistoryEntry[];
}

export function initialState(): ViewState {
  return {
    datasets: [],
    selected: null,
    pending: false,
    response: null,
    error: null,
    history: [],
  };
}

export function withDatasets(
  state: ViewState,
  datasets: DatasetSummary[],
): ViewState {
  const stillThere =
    state.selected !== null &&
    datasets.some((d) => d.dataset_id === state.selected);
  const selected = stillThere
    ? state.selected
    : datasets.length
      ? datasets[0].dataset_id
      : null;
  return { ...state, datasets, selected };
}

export function withSelection(state: ViewState, datasetId: string): ViewState {
  return { ...state, selected: datasetId };
}

export function withPending(state: ViewState): ViewState {
  return { ...state, pending: true };
}

export function withResponse(
  state: ViewState,
  question: string,
  response: AskPayload,
): ViewState {
  return {
    ...state,
    pending: false,
    response,
    error: null,
    history: [
      ...state.history,
      { question, badge: stageBadge(response.stage) },
    ],
  };
}

export function withError(
  state: ViewState,
  code: string,
  message: string,
): ViewState {
  return { ...state, pending: false, response: null, error: { code, message } };
}
