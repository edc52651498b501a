/** Wire types of the /v1 HTTP JSON API. */

export type TierCode = "R1" | "R2" | "R3" | "R4" | "R5" | "R6";

export interface MatchedCue {
  cue: string;
  papers: number;
  tier: TierCode;
}

export interface Candidate {
  state: string;
  score: number;
  coverage: number;
  best_tier: TierCode;
  confidence: string;
  matched_cues: MatchedCue[];
}

export interface Discriminator {
  state_a: string;
  state_b: string;
  observed_a: string[];
  observed_b: string[];
  absent_a: string[];
  absent_b: string[];
  checkable_a: MatchedCue[];
  checkable_b: MatchedCue[];
  promoted: string | null;
}

export interface SuggestedCue {
  cue: string;
  papers: number;
  tier: TierCode;
  discriminates_for: string;
}

export interface MixedState {
  label: string;
  contributing_states: string[];
}

/** One inference snapshot as returned by POST observations or /v1/infer. */
export interface Snapshot {
  observed: string[];
  absent: string[];
  candidates: Candidate[];
  discriminators: Discriminator[];
  mixed_state: MixedState | null;
  suggested_next_cues: SuggestedCue[];
}

export interface SessionDocument {
  session_id: string;
  framework_hash: string;
  observed: string[];
  absent: string[];
  snapshots: Snapshot[];
}

export interface CueCatalogEntry {
  cue: string;
  channel: string;
  observability: "Observable" | "Mixed" | "Instrumental";
  component_tier: string;
  papers: number;
  actionability:
    | "HighlyActionable"
    | "ModeratelyActionable"
    | "WeaklyActionable"
    | "NonActionable";
  states: { state: string; papers: number; tier: TierCode }[];
}

export interface CueCatalog {
  framework_hash: string;
  cues: CueCatalogEntry[];
}

/** A delta sent to the server; also the unit of session export/replay. */
export interface ObservationDelta {
  observed: string[];
  absent: string[];
}

export type CueStatus = "observed" | "absent" | "unchecked";
