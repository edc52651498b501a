/** Pure projections from API snapshots to render-ready view state.
 *
 * Nothing here computes inference: every ranking, count, and tier badge
 * comes verbatim from the last server snapshot. The functions are pure
 * so they can be unit-tested against recorded fixtures.
 */

import type {
  Candidate,
  CueCatalog,
  CueCatalogEntry,
  CueStatus,
  MixedState,
  ObservationDelta,
  SessionDocument,
  Snapshot,
  TierCode,
} from "./types.js";

export interface CandidateRow {
  state: string;
  score: number;
  confidence: string;
  bestTier: TierCode;
  matchedCues: { cue: string; papers: number; tier: TierCode }[];
}

export interface ChecklistRow {
  cue: string;
  papers: number;
  tier: TierCode;
  owningCandidate: string;
  status: CueStatus;
}

export interface ChecklistPanel {
  stateA: string;
  stateB: string;
  rows: ChecklistRow[];
}

export interface SessionView {
  sessionId: string;
  frameworkHash: string;
  observed: string[];
  absent: string[];
  candidates: CandidateRow[];
  checklist: ChecklistPanel | null;
  mixedState: MixedState | null;
  historyLength: number;
}

function candidateRow(c: Candidate): CandidateRow {
  return {
    state: c.state,
    score: c.score,
    confidence: c.confidence,
    bestTier: c.best_tier,
    matchedCues: c.matched_cues.map((m) => ({
      cue: m.cue,
      papers: m.papers,
      tier: m.tier,
    })),
  };
}

export function cueStatus(
  cue: string,
  observed: string[],
  absent: string[]
): CueStatus {
  if (observed.includes(cue)) return "observed";
  if (absent.includes(cue)) return "absent";
  return "unchecked";
}

/** The two-column discriminator checklist for the top candidate pair.
 *
 * Rows come straight from the snapshot's suggested cues plus the already
 * checked discriminators; order is preserved as the API returned it.
 * Hidden when fewer than two candidates remain.
 */
export function buildChecklist(snapshot: Snapshot): ChecklistPanel | null {
  if (snapshot.candidates.length < 2) return null;
  const stateA = snapshot.candidates[0].state;
  const stateB = snapshot.candidates[1].state;
  const rows: ChecklistRow[] = [];
  const seen = new Set<string>();

  const report = snapshot.discriminators.find(
    (d) =>
      (d.state_a === stateA && d.state_b === stateB) ||
      (d.state_a === stateB && d.state_b === stateA)
  );
  if (report) {
    const sides: [string[], string[], string][] = [
      [report.observed_a, report.absent_a, report.state_a],
      [report.observed_b, report.absent_b, report.state_b],
    ];
    for (const [observedSide, absentSide, owner] of sides) {
      for (const cue of [...observedSide, ...absentSide]) {
        if (seen.has(cue)) continue;
        seen.add(cue);
        rows.push({
          cue,
          papers: 0,
          tier: "R6",
          owningCandidate: owner,
          status: cueStatus(cue, snapshot.observed, snapshot.absent),
        });
      }
    }
  }
  for (const s of snapshot.suggested_next_cues) {
    if (seen.has(s.cue)) continue;
    seen.add(s.cue);
    rows.push({
      cue: s.cue,
      papers: s.papers,
      tier: s.tier,
      owningCandidate: s.discriminates_for,
      status: cueStatus(s.cue, snapshot.observed, snapshot.absent),
    });
  }
  return { stateA, stateB, rows };
}

export function buildSessionView(
  sessionId: string,
  frameworkHash: string,
  snapshot: Snapshot,
  historyLength: number
): SessionView {
  return {
    sessionId,
    frameworkHash,
    observed: [...snapshot.observed],
    absent: [...snapshot.absent],
    candidates: snapshot.candidates.map(candidateRow),
    checklist: buildChecklist(snapshot),
    mixedState: snapshot.mixed_state,
    historyLength,
  };
}

export function emptySessionView(
  sessionId: string,
  frameworkHash: string
): SessionView {
  return {
    sessionId,
    frameworkHash,
    observed: [],
    absent: [],
    candidates: [],
    checklist: null,
    mixedState: null,
    historyLength: 0,
  };
}

export interface CuePickerFilters {
  channel: string | null;
  observability: Set<string>;
  actionability: Set<string>;
  minTier: TierCode;
  search: string;
}

/** Defaults: only cues a human observer can check and act on. */
export function defaultFilters(): CuePickerFilters {
  return {
    channel: null,
    observability: new Set(["Observable", "Mixed"]),
    actionability: new Set(["HighlyActionable", "ModeratelyActionable"]),
    minTier: "R6",
    search: "",
  };
}

const TIER_ORDER: TierCode[] = ["R1", "R2", "R3", "R4", "R5", "R6"];

function bestStateTier(entry: CueCatalogEntry): TierCode {
  let best: TierCode = "R6";
  for (const s of entry.states) {
    if (TIER_ORDER.indexOf(s.tier) < TIER_ORDER.indexOf(best)) best = s.tier;
  }
  return best;
}

export interface CuePickerView {
  channelFacets: string[];
  cues: CueCatalogEntry[];
}

export function buildCuePicker(
  catalog: CueCatalog,
  filters: CuePickerFilters
): CuePickerView {
  const channelFacets = [...new Set(catalog.cues.map((c) => c.channel))].sort();
  const needle = filters.search.trim().toLowerCase();
  const maxTier = TIER_ORDER.indexOf(filters.minTier);
  const cues = catalog.cues.filter((entry) => {
    if (!filters.observability.has(entry.observability)) return false;
    if (!filters.actionability.has(entry.actionability)) return false;
    if (filters.channel !== null && entry.channel !== filters.channel)
      return false;
    if (TIER_ORDER.indexOf(bestStateTier(entry)) > maxTier) return false;
    if (needle && !entry.cue.toLowerCase().includes(needle)) return false;
    return true;
  });
  return { channelFacets, cues };
}

/** Session export: the delta log, replayable by `nvsyn session replay`. */
export function exportSession(
  session: SessionDocument,
  deltas: ObservationDelta[]
): string {
  return JSON.stringify(
    {
      session_id: session.session_id,
      framework_hash: session.framework_hash,
      deltas,
    },
    null,
    2
  );
}
