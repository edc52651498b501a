/** DOM wiring: every panel renders from the last server snapshot only.
 *
 * The UI never updates optimistically and never ranks anything itself;
 * user clicks turn into observation deltas, and the panel re-renders
 * from the snapshot the server returns.
 */

import { ApiClient, ApiError } from "./api.js";
import type {
  CueCatalog,
  CueStatus,
  ObservationDelta,
  Snapshot,
} from "./types.js";
import {
  buildCuePicker,
  buildSessionView,
  defaultFilters,
  emptySessionView,
  exportSession,
  type SessionView,
} from "./viewmodel.js";

interface AppState {
  client: ApiClient;
  catalog: CueCatalog | null;
  sessionId: string | null;
  frameworkHash: string;
  view: SessionView;
  deltas: ObservationDelta[];
  snapshots: Snapshot[];
  filters: ReturnType<typeof defaultFilters>;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  cls?: string,
  text?: string
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (cls) node.className = cls;
  if (text !== undefined) node.textContent = text;
  return node;
}

function badge(text: string): HTMLElement {
  return el("span", "badge", text);
}

function renderBanner(root: HTMLElement, message: string, retry: () => void) {
  const banner = el("div", "error-banner");
  banner.append(el("span", undefined, message));
  const button = el("button", undefined, "Retry");
  button.addEventListener("click", retry);
  banner.append(button);
  root.prepend(banner);
}

function renderCandidates(state: AppState, panel: HTMLElement) {
  panel.replaceChildren();
  if (state.view.mixedState) {
    const mixed = el("div", "mixed-banner", state.view.mixedState.label);
    panel.append(mixed);
  }
  for (const c of state.view.candidates) {
    const row = el("div", "candidate");
    row.append(el("strong", undefined, c.state));
    row.append(badge(c.confidence));
    row.append(badge(c.bestTier));
    row.append(el("span", "score", `score ${c.score}`));
    const cues = el("ul", "matched");
    for (const m of c.matchedCues) {
      cues.append(el("li", undefined, `${m.cue} (${m.papers} papers, ${m.tier})`));
    }
    row.append(cues);
    panel.append(row);
  }
}

function renderChecklist(state: AppState, panel: HTMLElement, send: SendFn) {
  panel.replaceChildren();
  const checklist = state.view.checklist;
  if (!checklist) {
    panel.hidden = true;
    return;
  }
  panel.hidden = false;
  panel.append(
    el("h3", undefined, `${checklist.stateA} vs ${checklist.stateB}`)
  );
  for (const row of checklist.rows) {
    const node = el("div", `check ${row.status}`);
    node.append(el("span", undefined, row.cue));
    if (row.papers > 0) {
      node.append(badge(`${row.papers} papers`));
      node.append(badge(row.tier));
    }
    node.append(el("em", undefined, row.owningCandidate));
    for (const status of ["observed", "absent"] as CueStatus[]) {
      const button = el("button", undefined, status);
      button.disabled = row.status !== "unchecked";
      button.addEventListener("click", () =>
        send(
          status === "observed"
            ? { observed: [row.cue], absent: [] }
            : { observed: [], absent: [row.cue] }
        )
      );
      node.append(button);
    }
    panel.append(node);
  }
}

function renderPicker(state: AppState, panel: HTMLElement, send: SendFn) {
  panel.replaceChildren();
  if (!state.catalog) return;
  const picker = buildCuePicker(state.catalog, state.filters);
  const facets = el("div", "facets");
  for (const channel of picker.channelFacets) {
    const button = el("button", undefined, channel);
    button.addEventListener("click", () => {
      state.filters.channel =
        state.filters.channel === channel ? null : channel;
      renderPicker(state, panel, send);
    });
    facets.append(button);
  }
  panel.append(facets);
  const search = el("input");
  search.placeholder = "search cues";
  search.value = state.filters.search;
  search.addEventListener("input", () => {
    state.filters.search = search.value;
    renderPicker(state, panel, send);
  });
  panel.append(search);
  const list = el("ul", "cue-list");
  for (const entry of picker.cues.slice(0, 200)) {
    const item = el("li");
    item.append(el("span", undefined, entry.cue));
    item.append(badge(entry.channel));
    const observe = el("button", undefined, "observed");
    observe.addEventListener("click", () =>
      send({ observed: [entry.cue], absent: [] })
    );
    const absent = el("button", undefined, "absent");
    absent.addEventListener("click", () =>
      send({ observed: [], absent: [entry.cue] })
    );
    item.append(observe, absent);
    list.append(item);
  }
  panel.append(list);
}

type SendFn = (delta: ObservationDelta) => Promise<void>;

export async function startApp(root: HTMLElement, baseUrl: string) {
  const state: AppState = {
    client: new ApiClient(baseUrl),
    catalog: null,
    sessionId: null,
    frameworkHash: "",
    view: emptySessionView("", ""),
    deltas: [],
    snapshots: [],
    filters: defaultFilters(),
  };

  const header = el("header");
  const candidatePanel = el("section", "candidates");
  const checklistPanel = el("section", "checklist");
  const pickerPanel = el("section", "picker");
  const exportButton = el("button", undefined, "Export session JSON");
  root.replaceChildren(header, candidatePanel, checklistPanel, pickerPanel, exportButton);

  const send: SendFn = async (delta) => {
    if (!state.sessionId) return;
    try {
      const snapshot = await state.client.addObservation(state.sessionId, delta);
      state.deltas.push(delta);
      state.snapshots.push(snapshot);
      state.view = buildSessionView(
        state.sessionId,
        state.frameworkHash,
        snapshot,
        state.snapshots.length
      );
      renderCandidates(state, candidatePanel);
      renderChecklist(state, checklistPanel, send);
      renderPicker(state, pickerPanel, send);
    } catch (err) {
      const message =
        err instanceof ApiError ? `${err.code}: ${err.message}` : String(err);
      renderBanner(root, message, () => send(delta));
    }
  };

  exportButton.addEventListener("click", async () => {
    if (!state.sessionId) return;
    const doc = await state.client.getSession(state.sessionId);
    const blob = new Blob([exportSession(doc, state.deltas)], {
      type: "application/json",
    });
    const link = el("a");
    link.href = URL.createObjectURL(blob);
    link.download = `session-${state.sessionId}.json`;
    link.click();
  });

  const boot = async () => {
    try {
      const created = await state.client.createSession();
      state.sessionId = created.session_id;
      state.frameworkHash = created.framework_hash;
      state.catalog = await state.client.listCues();
      state.view = emptySessionView(created.session_id, created.framework_hash);
      header.textContent = `session ${created.session_id} — framework ${created.framework_hash.slice(0, 12)}`;
      renderCandidates(state, candidatePanel);
      renderChecklist(state, checklistPanel, send);
      renderPicker(state, pickerPanel, send);
    } catch (err) {
      renderBanner(root, `cannot reach API at ${baseUrl}: ${String(err)}`, boot);
    }
  };
  await boot();
}
