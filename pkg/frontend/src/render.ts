/** DOM rendering for the console's sections.
 *
 * Every renderer paints only payload data — ordering, scores, and stage
 * names come from the gateway untouched.
 */

import type {
  AskPayload,
  DatasetSummary,
  TracePayload,
} from "./api.js";
import { renderDiagram } from "./diagram.js";
import type { HistoryEntry } from "./state.js";
import { needsUnverifiedMarker, stageBadge } from "./state.js";

function el(
  doc: Document,
  tag: string,
  className?: string,
  text?: string,
): HTMLElement {
  const node = doc.createElement(tag);
  if (className) {
    node.className = className;
  }
  if (text !== undefined) {
    node.textContent = text;
  }
  return node;
}

export function statsLine(dataset: DatasetSummary): string {
  const { triples, entities, predicates } = dataset.stats;
  return `${triples} triples · ${entities} entities · ${predicates} predicates`;
}

export function renderSwitcher(
  container: HTMLElement,
  datasets: DatasetSummary[],
  selected: string | null,
  onSelect: (datasetId: string) => void,
): void {
  const doc = container.ownerDocument;
  container.replaceChildren();
  if (!datasets.length) {
    container.append(
      el(doc, "p", "empty-state", "No datasets are registered."),
    );
    return;
  }
  const select = doc.createElement("select");
  select.id = "dataset-switcher";
  for (const dataset of datasets) {
    const option = doc.createElement("option");
    option.value = dataset.dataset_id;
    option.textContent = dataset.name;
    select.append(option);
  }
  if (selected) {
    select.value = selected;
  }
  select.addEventListener("change", () => onSelect(select.value));
  container.append(select);
  const current = datasets.find((d) => d.dataset_id === (selected ?? ""));
  if (current) {
    container.append(el(doc, "span", "dataset-stats", statsLine(current)));
  }
}

function badgeElement(doc: Document, payload: AskPayload): HTMLElement {
  return el(
    doc,
    "span",
    `badge badge-${payload.stage}`,
    stageBadge(payload.stage),
  );
}

export function renderAnswer(
  container: HTMLElement,
  payload: AskPayload,
): void {
  const doc = container.ownerDocument;
  container.replaceChildren();

  const header = el(doc, "div", "answer-header");
  header.append(badgeElement(doc, payload));
  if (needsUnverifiedMarker(payload)) {
    header.append(el(doc, "span", "unverified", "unverified"));
  }
  container.append(header);

  if (payload.columns && payload.rows) {
    const table = doc.createElement("table");
    table.className = "results";
    const head = doc.createElement("tr");
    for (const column of payload.columns) {
      head.append(el(doc, "th", undefined, column));
    }
    table.append(head);
    for (const row of payload.rows) {
      const tr = doc.createElement("tr");
      for (const cell of row) {
        const td = el(doc, "td", undefined, cell.text);
        td.dataset.kind = cell.kind;
        tr.append(td);
      }
      table.append(tr);
    }
    container.append(table);
  } else if (typeof payload.truth === "boolean") {
    container.append(
      el(doc, "p", "truth", payload.truth ? "yes" : "no"),
    );
  }

  if (payload.llm_text) {
    container.append(el(doc, "blockquote", "llm-text", payload.llm_text));
  }
  if (payload.sparql) {
    container.append(el(doc, "pre", "sparql", payload.sparql));
  }
  if (typeof payload.score === "number") {
    container.append(
      el(doc, "p", "score", `log score ${payload.score.toFixed(4)}`),
    );
  }
}

export function renderError(
  container: HTMLElement,
  code: string,
  message: string,
): void {
  const doc = container.ownerDocument;
  container.replaceChildren();
  const banner = el(doc, "div", "error-banner");
  banner.append(el(doc, "strong", "error-code", code));
  banner.append(el(doc, "span", undefined, ` ${message}`));
  container.append(banner);
}

function attemptOutcome(attempt: {
  empty: boolean;
  rows?: unknown[];
  truth?: boolean;
}): string {
  if (attempt.empty) {
    return "no results";
  }
  if (attempt.rows) {
    return `${attempt.rows.length} row(s)`;
  }
  return attempt.truth ? "true" : "false";
}

export function renderTrace(
  container: HTMLElement,
  trace: TracePayload | undefined | null,
): void {
  const doc = container.ownerDocument;
  container.replaceChildren();
  if (!trace) {
    return;
  }

  const mentions = el(doc, "section", "trace-mentions");
  mentions.append(el(doc, "h3", undefined, "Mentions"));
  const mentionList = doc.createElement("ul");
  for (const mention of trace.mentions) {
    const item = doc.createElement("li");
    item.append(el(doc, "span", "kind-chip", mention.kind));
    item.append(el(doc, "span", undefined, ` ${mention.surface}`));
    if (mention.links.length) {
      const top = mention.links[0];
      item.append(
        el(
          doc,
          "span",
          "mention-link",
          ` → ${top.iri} (${top.score.toFixed(2)})`,
        ),
      );
    }
    mentionList.append(item);
  }
  mentions.append(mentionList);
  container.append(mentions);

  const graph = trace.graph_with_candidates ?? trace.graph;
  if (graph) {
    const section = el(doc, "section", "trace-graph");
    section.append(el(doc, "h3", undefined, "Query graph"));
    section.append(renderDiagram(graph, doc));
    container.append(section);
  }

  const candidates = el(doc, "section", "trace-candidates");
  candidates.append(el(doc, "h3", undefined, "Candidate queries"));
  const list = doc.createElement("ol");
  for (const candidate of trace.candidates) {
    const item = doc.createElement("li");
    const meta = el(doc, "div", "candidate-meta");
    meta.append(
      el(doc, "span", "candidate-score", candidate.score.toFixed(4)),
    );
    if (candidate.verified) {
      meta.append(el(doc, "span", "candidate-verified", "✓ verified"));
    }
    item.append(meta);
    item.append(el(doc, "pre", "sparql", candidate.sparql));
    list.append(item);
  }
  candidates.append(list);
  container.append(candidates);

  const stages = el(doc, "section", "trace-stages");
  stages.append(el(doc, "h3", undefined, "Stages"));
  for (const stage of trace.stages) {
    const block = el(doc, "div", `stage stage-${stage.stage}`);
    block.append(el(doc, "h4", undefined, stageBadge(stage.stage)));
    const attempts = doc.createElement("ul");
    for (const attempt of stage.attempts) {
      const item = doc.createElement("li");
      item.append(el(doc, "pre", "sparql", attempt.sparql));
      item.append(
        el(doc, "span", "attempt-outcome", attemptOutcome(attempt)),
      );
      attempts.append(item);
    }
    if (!stage.attempts.length) {
      attempts.append(el(doc, "li", "attempt-outcome", "nothing executed"));
    }
    block.append(attempts);
    stages.append(block);
  }
  container.append(stages);
}

export function renderHistory(
  container: HTMLElement,
  history: HistoryEntry[],
): void {
  const doc = container.ownerDocument;
  container.replaceChildren();
  for (const entry of history) {
    const item = doc.createElement("li");
    item.append(
      el(
        doc,
        "span",
        `badge badge-${entry.badge.toLowerCase()}`,
        entry.badge,
      ),
    );
    item.append(el(doc, "span", undefined, ` ${entry.question}`));
    container.append(item);
  }
}
