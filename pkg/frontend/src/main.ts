/** Console bootstrap: wires state transitions to the DOM and the gateway. */

import { ask, fetchDatasets, GatewayError } from "./api.js";
import {
  renderAnswer,
  renderError,
  renderHistory,
  renderSwitcher,
  renderTrace,
} from "./render.js";
import type { ViewState } from "./state.js";
import {
  initialState,
  withDatasets,
  withError,
  withPending,
  withResponse,
  withSelection,
} from "./state.js";

export interface AppHandle {
  /** Current immutable view state (for tests and debugging). */
  state: () => ViewState;
  /** Resolves once the initial dataset listing has been painted. */
  ready: Promise<void>;
  /** Programmatic equivalent of submitting the ask form. */
  submit: () => Promise<void>;
}

export function startApp(root: HTMLElement, base = ""): AppHandle {
  const doc = root.ownerDocument;
  const switcher = root.querySelector<HTMLElement>("#switcher");
  const form = root.querySelector<HTMLFormElement>("#ask-form");
  const question = root.querySelector<HTMLInputElement>("#question");
  const button = root.querySelector<HTMLButtonElement>("#ask-button");
  const answer = root.querySelector<HTMLElement>("#answer");
  const trace = root.querySelector<HTMLElement>("#trace");
  const history = root.querySelector<HTMLOListElement>("#history");
  if (!switcher || !form || !question || !button || !answer || !trace || !history) {
    throw new Error("console markup is missing a required element");
  }

  let state = initialState();

  function paint(): void {
    renderSwitcher(switcher!, state.datasets, state.selected, (datasetId) => {
      state = withSelection(state, datasetId);
      paint();
    });
    question!.disabled = state.pending;
    button!.disabled = state.pending;
    answer!.replaceChildren();
    if (state.error) {
      renderError(answer!, state.error.code, state.error.message);
    } else if (state.response) {
      renderAnswer(answer!, state.response);
    }
    trace!.replaceChildren();
    if (!state.error && state.response?.trace) {
      renderTrace(trace!, state.response.trace);
    }
    renderHistory(history!, state.history);
    if (state.pending) {
      answer!.append(
        (() => {
          const note = doc.createElement("p");
          note.className = "pending-note";
          note.textContent = "asking…";
          return note;
        })(),
      );
    }
  }

  async function submit(): Promise<void> {
    if (state.pending || state.selected === null) {
      return;
    }
    const dataset = state.selected;
    const text = question!.value.trim();
    if (!text) {
      return;
    }
    state = withPending(state);
    paint();
    try {
      const payload = await ask(dataset, text, base);
      state = withResponse(state, text, payload);
    } catch (exc) {
      if (exc instanceof GatewayError) {
        state = withError(state, exc.code, exc.message);
      } else {
        state = withError(state, "INTERNAL", String(exc));
      }
    }
    paint();
  }

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    void submit();
  });

  const ready = (async () => {
    try {
      const datasets = await fetchDatasets(base);
      state = withDatasets(state, datasets);
    } catch (exc) {
      if (exc instanceof GatewayError) {
        state = withError(state, exc.code, exc.message);
      } else {
        state = withError(state, "INTERNAL", String(exc));
      }
    }
    paint();
  })();

  return { state: () => state, ready, submit };
}

const bootRoot =
  typeof document !== "undefined" ? document.getElementById("app") : null;
if (bootRoot) {
  startApp(bootRoot);
}
