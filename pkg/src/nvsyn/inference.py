"""Four-step state inference: candidates, scoring, disambiguation, mixed
states; plus incremental diagnostic sessions.

Scoring is a tier-weight sum (the replication tiers are ordinal, so small
integer weights are the least-committal choice). Confidence labels derive
from relationship tiers, never from component tiers: a well-studied cue
paired with a well-studied state still counts as exploratory when the
specific link rests on one paper. Explicitly absent cues are reported in
the discriminator analysis but never subtract score.
"""

from __future__ import annotations

import itertools
import json
import uuid
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

from nvsyn.corpus import CHANNEL_OBSERVABILITY, ObservabilityMode
from nvsyn.evidence import RelationshipTier
from nvsyn.framework import ConfusablePair, Framework, build_confusable_pair
from nvsyn.normalization import ExcludedCue, NormalizationDictionary, normalize_cue_label


class NoKnownCues(Exception):
    """No observed cue exists in the evidence index."""


class InconsistentObservation(Exception):
    """The same cue was asserted both observed and absent in one delta."""


DEFAULT_WEIGHTS: dict[RelationshipTier, int] = {
    RelationshipTier.R1: 6,
    RelationshipTier.R2: 5,
    RelationshipTier.R3: 4,
    RelationshipTier.R4: 3,
    RelationshipTier.R5: 2,
    RelationshipTier.R6: 1,
}

# Minimum-tier presets mirroring the recommended calibration thresholds.
TIER_PRESETS = {
    "high-stakes": RelationshipTier.R2,
    "general": RelationshipTier.R4,
    "exploratory": RelationshipTier.R6,
}


@dataclass(frozen=True)
class Observation:
    observed_cues: frozenset[str]
    absent_cues: frozenset[str] = frozenset()
    timestamp: Optional[str] = None

    def __post_init__(self):
        overlap = self.observed_cues & self.absent_cues
        if overlap:
            raise InconsistentObservation(
                f"cues asserted both observed and absent: {sorted(overlap)}"
            )

    @classmethod
    def from_raw(
        cls,
        observed: Sequence[str],
        d: NormalizationDictionary,
        absent: Sequence[str] = (),
        timestamp: Optional[str] = None,
    ) -> "Observation":
        """Normalize raw cue labels on entry; excluded cues are dropped."""

        def norm(labels: Sequence[str]) -> frozenset[str]:
            out = set()
            for label in labels:
                if not label.strip():
                    continue
                try:
                    cue, _, _ = normalize_cue_label(label, d)
                except ExcludedCue:
                    continue
                out.add(cue)
            return frozenset(out)

        return cls(observed_cues=norm(observed), absent_cues=norm(absent), timestamp=timestamp)


@dataclass
class CandidateState:
    state: str
    matched_cues: list[tuple[str, int, RelationshipTier]]
    score: int
    coverage: float
    best_tier: RelationshipTier
    confidence_label: str

    @property
    def matched_papers(self) -> int:
        return sum(n for _, n, _ in self.matched_cues)

    def to_dict(self) -> dict:
        return {
            "state": self.state,
            "score": self.score,
            "coverage": round(self.coverage, 6),
            "best_tier": self.best_tier.code,
            "confidence": self.confidence_label,
            "matched_cues": [
                {"cue": c, "papers": n, "tier": t.code} for c, n, t in self.matched_cues
            ],
        }


@dataclass
class DiscriminatorReport:
    state_a: str
    state_b: str
    observed_a: list[str]
    observed_b: list[str]
    absent_a: list[str]
    absent_b: list[str]
    checkable_a: list[tuple[str, int, RelationshipTier]]
    checkable_b: list[tuple[str, int, RelationshipTier]]
    promoted: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "state_a": self.state_a,
            "state_b": self.state_b,
            "observed_a": self.observed_a,
            "observed_b": self.observed_b,
            "absent_a": self.absent_a,
            "absent_b": self.absent_b,
            "checkable_a": [
                {"cue": c, "papers": n, "tier": t.code} for c, n, t in self.checkable_a
            ],
            "checkable_b": [
                {"cue": c, "papers": n, "tier": t.code} for c, n, t in self.checkable_b
            ],
            "promoted": self.promoted,
        }


@dataclass
class InferenceResult:
    candidates: list[CandidateState]
    discriminator_report: list[DiscriminatorReport]
    mixed_state: Optional[dict]
    suggested_next_cues: list[dict]
    observed: list[str]
    absent: list[str]

    def to_dict(self) -> dict:
        return {
            "observed": self.observed,
            "absent": self.absent,
            "candidates": [c.to_dict() for c in self.candidates],
            "discriminators": [r.to_dict() for r in self.discriminator_report],
            "mixed_state": self.mixed_state,
            "suggested_next_cues": self.suggested_next_cues,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def candidate_states(
    obs: Observation, fw: Framework, min_tier: RelationshipTier = RelationshipTier.R6
) -> dict[str, list[tuple[str, int, RelationshipTier]]]:
    """States linked to at least one observed cue, with per-cue evidence."""
    idx = fw.index
    known = obs.observed_cues & set(idx.cue_papers)
    if not known:
        raise NoKnownCues(f"no observed cue exists in the index: {sorted(obs.observed_cues)}")
    matches: dict[str, list[tuple[str, int, RelationshipTier]]] = {}
    for cue in sorted(known):
        for state in sorted(idx.states_of_cue(cue)):
            tier = idx.rel_tier[(state, cue)]
            if tier > min_tier:
                continue
            matches.setdefault(state, []).append(
                (cue, idx.relationship_papers[(state, cue)], tier)
            )
    return matches


def _confidence_label(matched: list[tuple[str, int, RelationshipTier]], coverage: float) -> str:
    actionable = [m for m in matched if m[2].actionable]
    if len(actionable) >= 2 and coverage >= 2 / 3:
        return "High"
    if actionable:
        return "Moderate"
    best = min(t for _, _, t in matched)
    if best is RelationshipTier.R5:
        return "Low"
    return "Exploratory"


def score_candidates(
    matches: dict[str, list[tuple[str, int, RelationshipTier]]],
    obs: Observation,
    fw: Framework,
    weights: Optional[dict[RelationshipTier, int]] = None,
) -> list[CandidateState]:
    """Rank candidates by tier-weight sum.

    Ties break by total matched paper count descending, then state label
    ascending, so identically scored and identically evidenced states come
    out in stable alphabetical order.
    """
    weights = weights or DEFAULT_WEIGHTS
    observed_known = obs.observed_cues & set(fw.index.cue_papers)
    candidates = []
    for state, matched in matches.items():
        matched = sorted(matched, key=lambda m: (-m[1], m[0]))
        score = sum(weights[t] for _, _, t in matched)
        coverage = len(matched) / len(observed_known) if observed_known else 0.0
        best = min(t for _, _, t in matched)
        candidates.append(
            CandidateState(
                state=state,
                matched_cues=matched,
                score=score,
                coverage=coverage,
                best_tier=best,
                confidence_label=_confidence_label(matched, coverage),
            )
        )
    candidates.sort(key=lambda c: (-c.score, -c.matched_papers, c.state))
    return candidates


def _pair_oriented(pair: ConfusablePair, a: str) -> ConfusablePair:
    """Orient a pair so state_a == a."""
    if pair.state_a == a:
        return pair
    return ConfusablePair(
        state_a=pair.state_b,
        state_b=pair.state_a,
        shared_cues=pair.shared_cues,
        specific_a=pair.specific_b,
        specific_b=pair.specific_a,
        jaccard=pair.jaccard,
    )


def disambiguate(
    candidates: list[CandidateState],
    obs: Observation,
    fw: Framework,
    top_n: int = 3,
) -> tuple[list[CandidateState], list[DiscriminatorReport]]:
    """Check discriminative cues for confusable pairs among top candidates.

    Ranking is adjusted only when one side has at least one observed
    discriminator and the other has none: the winner is promoted directly
    above the loser. Absent discriminators are reported, never scored.
    """
    ranking = list(candidates)
    reports = []
    top = [c.state for c in ranking[:top_n]]
    for a, b in itertools.combinations(top, 2):
        pair = fw.pair_for(a, b)
        if pair is None:
            continue
        pair = _pair_oriented(pair, a)
        spec_a = {c for c, _, _ in pair.specific_a}
        spec_b = {c for c, _, _ in pair.specific_b}
        observed_a = sorted(obs.observed_cues & spec_a)
        observed_b = sorted(obs.observed_cues & spec_b)
        checked = obs.observed_cues | obs.absent_cues
        report = DiscriminatorReport(
            state_a=a,
            state_b=b,
            observed_a=observed_a,
            observed_b=observed_b,
            absent_a=sorted(obs.absent_cues & spec_a),
            absent_b=sorted(obs.absent_cues & spec_b),
            checkable_a=[m for m in pair.specific_a if m[0] not in checked],
            checkable_b=[m for m in pair.specific_b if m[0] not in checked],
        )
        winner = loser = None
        if observed_a and not observed_b:
            winner, loser = a, b
        elif observed_b and not observed_a:
            winner, loser = b, a
        if winner is not None:
            report.promoted = winner
            pos = {c.state: i for i, c in enumerate(ranking)}
            if pos[winner] > pos[loser]:
                cand = ranking.pop(pos[winner])
                ranking.insert(pos[loser], cand)
        reports.append(report)
    return ranking, reports


def detect_mixed_state(
    candidates: list[CandidateState], obs: Observation, fw: Framework
) -> Optional[dict]:
    """Composite-state detection.

    Emits "<A> + <B>" when the top candidate has at least two matched cues
    at R1-R4 and some other candidate also has at least two such matches
    and contributes evidence the leader does not subsume (a matched cue
    the leader lacks, or a strictly stronger link to a shared cue).
    """
    if len(candidates) < 2:
        return None
    a = candidates[0]
    strong_a = {c: n for c, n, t in a.matched_cues if t.actionable}
    if len(strong_a) < 2:
        return None
    a_counts = {c: n for c, n, _ in a.matched_cues}
    for b in candidates[1:]:
        strong_b = [(c, n) for c, n, t in b.matched_cues if t.actionable]
        if len(strong_b) < 2:
            continue
        contributes = any(c not in a_counts or n > a_counts[c] for c, n in strong_b)
        if contributes:
            return {
                "label": f"{a.state} + {b.state}",
                "contributing_states": [a.state, b.state],
            }
    return None


def suggest_next_cues(
    candidates: list[CandidateState],
    obs: Observation,
    fw: Framework,
    k: int = 10,
) -> list[dict]:
    """Unchecked discriminators of the top pair, strongest first.

    Only cues a human observer could check (Observable or Mixed channels)
    are suggested.
    """
    if len(candidates) < 2:
        return []
    a, b = candidates[0].state, candidates[1].state
    pair = fw.pair_for(a, b) or build_confusable_pair(fw.index, a, b)
    pair = _pair_oriented(pair, a)
    checked = obs.observed_cues | obs.absent_cues
    pool = []
    for side, rows in ((a, pair.specific_a), (b, pair.specific_b)):
        for cue, n, tier in rows:
            if cue in checked:
                continue
            mode = CHANNEL_OBSERVABILITY[fw.index.cue_channel[cue]]
            if mode is ObservabilityMode.Instrumental:
                continue
            pool.append({"cue": cue, "papers": n, "tier": tier.code, "discriminates_for": side})
    pool.sort(key=lambda r: (-r["papers"], r["cue"]))
    return pool[:k]


def run_inference(
    obs: Observation,
    fw: Framework,
    weights: Optional[dict[RelationshipTier, int]] = None,
    min_tier: RelationshipTier = RelationshipTier.R6,
    top_n: int = 3,
    suggest_k: int = 10,
) -> InferenceResult:
    """Compose the four steps into one deterministic result."""
    matches = candidate_states(obs, fw, min_tier=min_tier)
    ranked = score_candidates(matches, obs, fw, weights=weights)
    ranked, reports = disambiguate(ranked, obs, fw, top_n=top_n)
    mixed = detect_mixed_state(ranked, obs, fw)
    suggestions = suggest_next_cues(ranked, obs, fw, k=suggest_k)
    return InferenceResult(
        candidates=ranked,
        discriminator_report=reports,
        mixed_state=mixed,
        suggested_next_cues=suggestions,
        observed=sorted(obs.observed_cues),
        absent=sorted(obs.absent_cues),
    )


@dataclass
class DiagnosticSession:
    """Accumulates observation deltas; every snapshot is replayable from
    the accumulated observation alone."""

    framework: Framework
    session_id: str = field(default_factory=lambda: uuid.uuid4().hex)
    observed: frozenset[str] = frozenset()
    absent: frozenset[str] = frozenset()
    history: list[InferenceResult] = field(default_factory=list)
    min_tier: RelationshipTier = RelationshipTier.R6

    def accumulated(self) -> Observation:
        return Observation(observed_cues=self.observed, absent_cues=self.absent)

    def update(self, delta: Observation) -> InferenceResult:
        """Merge a delta and append a fresh snapshot.

        A cue moved from absent to observed is removed from the absent set.
        """
        observed = self.observed | delta.observed_cues
        absent = (self.absent | delta.absent_cues) - observed
        self.observed = observed
        self.absent = absent
        result = run_inference(self.accumulated(), self.framework, min_tier=self.min_tier)
        self.history.append(result)
        return result

    def to_dict(self) -> dict:
        return {
            "session_id": self.session_id,
            "framework_hash": self.framework.document_hash(),
            "observed": sorted(self.observed),
            "absent": sorted(self.absent),
            "snapshots": [r.to_dict() for r in self.history],
        }


def replay_session(
    fw: Framework, deltas: Sequence[Observation], min_tier: RelationshipTier = RelationshipTier.R6
) -> DiagnosticSession:
    session = DiagnosticSession(framework=fw, min_tier=min_tier)
    for delta in deltas:
        session.update(delta)
    return session
