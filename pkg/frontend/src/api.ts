/** Typed client for the question-answering gateway.
 *
 * The console is a pure consumer of the HTTP API: these interfaces mirror
 * the gateway's payloads field for field, and nothing downstream recomputes
 * scores, stages, or ordering.
 */

export interface LinkPayload {
  iri: string;
  score: number;
}

export interface MentionPayload {
  span: [number, number];
  surface: string;
  kind: string;
  links: LinkPayload[];
}

export interface GraphNodePayload extends MentionPayload {
  id: string;
  anchor: number;
  is_target: boolean;
}

export interface EdgeCandidatePayload {
  predicate: string;
  score: number;
}

export interface GraphEdgePayload {
  id: string;
  nodes: [string, string];
  phrase_tokens: number[];
  candidates: EdgeCandidatePayload[];
}

export interface GraphPayload {
  nodes: GraphNodePayload[];
  edges: GraphEdgePayload[];
  target: string;
}

export interface CandidatePayload {
  sparql: string;
  score: number;
  verified: boolean;
}

export interface Cell {
  kind: string;
  text: string;
}

export interface AttemptPayload {
  sparql: string;
  empty: boolean;
  rows?: Cell[][];
  truth?: boolean;
}

export interface StagePayload {
  stage: string;
  attempts: AttemptPayload[];
}

export interface TracePayload {
  question: string;
  dataset_id: string;
  mentions: MentionPayload[];
  candidates: CandidatePayload[];
  stages: StagePayload[];
  timings: Record<string, number>;
  graph?: GraphPayload;
  graph_with_candidates?: GraphPayload;
  llm?: { attempted: boolean; endpoint?: string; prompt?: string };
  structure?: unknown;
}

export interface AskPayload {
  stage: string;
  verified: boolean;
  columns?: string[];
  rows?: Cell[][];
  truth?: boolean;
  llm_text?: string;
  sparql?: string;
  score?: number;
  trace?: TracePayload;
}

export interface DatasetStats {
  triples: number;
  entities: number;
  predicates: number;
}

export interface DatasetSummary {
  dataset_id: string;
  name: string;
  language: string;
  stats: DatasetStats;
}

/** Error envelope ({"error": {"code", "message"}}) surfaced as an
 * exception; transport failures get the UNREACHABLE pseudo-code. */
export class GatewayError extends Error {
  constructor(readonly code: string, message: string) {
    super(message);
    this.name = "GatewayError";
  }
}

async function request<T>(url: string, init?: RequestInit): Promise<T> {
  let response: Response;
  try {
    response = await fetch(url, init);
  } catch (exc) {
    throw new GatewayError("UNREACHABLE", `cannot reach ${url}: ${exc}`);
  }
  let body: unknown = null;
  try {
    body = await response.json();
  } catch {
    body = null;
  }
  if (!response.ok) {
    const envelope = (body as { error?: { code?: string; message?: string } })
      ?.error;
    throw new GatewayError(
      envelope?.code ?? "INTERNAL",
      envelope?.message ?? `${url} returned status ${response.status}`,
    );
  }
  if (body === null) {
    throw new GatewayError("INTERNAL", `${url} returned a non-JSON body`);
  }
  return body as T;
}

export function fetchDatasets(base = ""): Promise<DatasetSummary[]> {
  return request<DatasetSummary[]>(`${base}/datasets`);
}

export function ask(
  dataset: string,
  question: string,
  base = "",
): Promise<AskPayload> {
  return request<AskPayload>(`${base}/ask`, {
    method: "POST",
    headers: { "Content-Type": "application/json" },
    body: JSON.stringify({ dataset, question, trace: true }),
  });
}
