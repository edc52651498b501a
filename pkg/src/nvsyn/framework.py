"""The four framework levels materialized from an evidence index.

Level 1: cue vocabulary. Level 2: state clusters. Level 3: state profiles
(multimodal signatures). Level 4: discriminative analysis of confusable
state pairs. All rankings use the same deterministic tie-break: paper
count descending, then canonical label ascending.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Optional

from nvsyn.corpus import CHANNEL_OBSERVABILITY, Channel, ObservabilityMode
from nvsyn.evidence import (
    ActionabilityLevel,
    ComponentTier,
    EvidenceIndex,
    RelationshipTier,
)

SCHEMA_VERSION = 1

VERBAL_PREFIX = "verbal:"


class UnknownState(Exception):
    pass


class UnknownCue(Exception):
    pass


def rank_key(item: tuple[str, int]) -> tuple[int, str]:
    """Sort key for (label, papers): count desc, then label ascending."""
    label, papers = item
    return (-papers, label)


@dataclass
class CueVocabularyEntry:
    canonical_cue: str
    channel: Channel
    observability: ObservabilityMode
    component_tier: ComponentTier
    paper_count: int
    associated_states: list[tuple[str, int, RelationshipTier]]
    actionability: ActionabilityLevel

    def to_dict(self) -> dict:
        return {
            "cue": self.canonical_cue,
            "channel": self.channel.value,
            "observability": self.observability.value,
            "component_tier": self.component_tier.code,
            "papers": self.paper_count,
            "actionability": self.actionability.name,
            "states": [
                {"state": s, "papers": n, "tier": t.code}
                for s, n, t in self.associated_states
            ],
        }


@dataclass
class StateCluster:
    canonical_state: str
    component_tier: ComponentTier
    paper_count: int
    total_cue_relationships: int
    channel_breakdown: dict[Channel, int]
    top_cues: list[tuple[str, int, RelationshipTier]]

    def to_dict(self) -> dict:
        return {
            "state": self.canonical_state,
            "component_tier": self.component_tier.code,
            "papers": self.paper_count,
            "total_cue_relationships": self.total_cue_relationships,
            "channels": len(self.channel_breakdown),
            "channel_breakdown": {
                ch.value: n for ch, n in self.channel_breakdown.items()
            },
            "top_cues": [
                {"cue": c, "papers": n, "tier": t.code} for c, n, t in self.top_cues
            ],
        }

    def render(self) -> str:
        lines = [
            f"State: {self.canonical_state}",
            f"Component Evidence: Tier {self.component_tier.code[1]} "
            f"({self.component_tier.display}) - {self.paper_count} papers",
            f"Total Cue Relationships: {self.total_cue_relationships}",
            f"Channels: {len(self.channel_breakdown)} of 9",
            "Channel Breakdown:",
        ]
        for ch, n in sorted(self.channel_breakdown.items(), key=lambda kv: (-kv[1], kv[0].value)):
            lines.append(f"  {ch.value}: {n} cues")
        lines.append("Top R1-R4 Cues (>= 3 papers):")
        for cue, n, tier in self.top_cues:
            if tier.actionable:
                lines.append(f"  {cue}  {n} papers  {tier.code}")
        return "\n".join(lines)


@dataclass
class StateProfile:
    canonical_state: str
    definition_text: Optional[str]
    signature: dict[Channel, list[tuple[str, int, RelationshipTier]]]
    actionable_indicators: list[str]
    verbal_indicators: list[str]

    def to_dict(self) -> dict:
        return {
            "state": self.canonical_state,
            "definition": self.definition_text,
            "signature": {
                ch.value: [{"cue": c, "papers": n, "tier": t.code} for c, n, t in cues]
                for ch, cues in self.signature.items()
            },
            "actionable_indicators": self.actionable_indicators,
            "verbal_indicators": self.verbal_indicators,
        }


@dataclass
class ConfusablePair:
    state_a: str
    state_b: str
    shared_cues: set[str]
    specific_a: list[tuple[str, int, RelationshipTier]]
    specific_b: list[tuple[str, int, RelationshipTier]]
    jaccard: float

    def to_dict(self) -> dict:
        return {
            "state_a": self.state_a,
            "state_b": self.state_b,
            "shared_cues": sorted(self.shared_cues),
            "jaccard": self.jaccard,
            "specific_a": [
                {"cue": c, "papers": n, "tier": t.code} for c, n, t in self.specific_a
            ],
            "specific_b": [
                {"cue": c, "papers": n, "tier": t.code} for c, n, t in self.specific_b
            ],
        }

    def render(self, top: Optional[int] = None) -> str:
        a_rows = self.specific_a[:top] if top else self.specific_a
        b_rows = self.specific_b[:top] if top else self.specific_b
        width = max([len(f"{c} {n} papers ({t.code})") for c, n, t in a_rows] + [30])
        header_a = f"{self.state_a}-specific cues"
        header_b = f"{self.state_b}-specific cues"
        lines = [
            f"{self.state_a} vs {self.state_b}: shared cues {len(self.shared_cues)}, "
            f"Jaccard {self.jaccard:.3f}",
            f"{header_a:<{width}}  {header_b}",
        ]
        for i in range(max(len(a_rows), len(b_rows))):
            left = ""
            right = ""
            if i < len(a_rows):
                c, n, t = a_rows[i]
                left = f"{c} {n} papers ({t.code})"
            if i < len(b_rows):
                c, n, t = b_rows[i]
                right = f"{c} {n} papers ({t.code})"
            lines.append(f"{left:<{width}}  {right}")
        return "\n".join(lines)


def jaccard_similarity(a: set[str], b: set[str]) -> float:
    """|a & b| / |a | b|, defined as 0.0 when both sets are empty."""
    union = a | b
    if not union:
        return 0.0
    return len(a & b) / len(union)


def _ranked_cues(
    idx: EvidenceIndex, state: str, cues: set[str]
) -> list[tuple[str, int, RelationshipTier]]:
    pairs = [(c, idx.relationship_papers[(state, c)]) for c in cues]
    pairs.sort(key=rank_key)
    return [(c, n, idx.rel_tier[(state, c)]) for c, n in pairs]


def build_cue_vocabulary(idx: EvidenceIndex) -> list[CueVocabularyEntry]:
    """Level 1: one entry per canonical cue, states ranked by evidence."""
    entries = []
    for cue in idx.cues():
        states = [(s, idx.relationship_papers[(s, cue)]) for s in idx.states_of_cue(cue)]
        states.sort(key=rank_key)
        channel = idx.cue_channel[cue]
        entries.append(
            CueVocabularyEntry(
                canonical_cue=cue,
                channel=channel,
                observability=CHANNEL_OBSERVABILITY[channel],
                component_tier=idx.cue_tier[cue],
                paper_count=idx.cue_papers[cue],
                associated_states=[
                    (s, n, idx.rel_tier[(s, cue)]) for s, n in states
                ],
                actionability=idx.actionability[cue],
            )
        )
    return entries


def build_state_cluster(idx: EvidenceIndex, state: str, top_n: int = 10) -> StateCluster:
    """Level 2: channel breakdown and top cues for one state."""
    if state not in idx.state_papers:
        raise UnknownState(state)
    cues = idx.cues_of_state(state)
    breakdown: dict[Channel, int] = {}
    for c in cues:
        ch = idx.cue_channel[c]
        breakdown[ch] = breakdown.get(ch, 0) + 1
    ranked = _ranked_cues(idx, state, cues)
    return StateCluster(
        canonical_state=state,
        component_tier=idx.state_tier[state],
        paper_count=idx.state_papers[state],
        total_cue_relationships=len(cues),
        channel_breakdown=breakdown,
        top_cues=ranked[:top_n],
    )


def build_state_profile(
    idx: EvidenceIndex,
    state: str,
    top_k_per_channel: int = 4,
    definition_text: Optional[str] = None,
) -> StateProfile:
    """Level 3: per-channel ranked signature plus actionable/verbal lists."""
    if state not in idx.state_papers:
        raise UnknownState(state)
    if top_k_per_channel < 1:
        raise ValueError("top_k_per_channel must be >= 1")
    cues = idx.cues_of_state(state)
    by_channel: dict[Channel, set[str]] = {}
    for c in cues:
        by_channel.setdefault(idx.cue_channel[c], set()).add(c)
    signature = {
        ch: _ranked_cues(idx, state, chan_cues)[:top_k_per_channel]
        for ch, chan_cues in sorted(by_channel.items(), key=lambda kv: kv[0].value)
    }
    actionable = [
        c
        for c, n, t in _ranked_cues(idx, state, cues)
        if t.actionable
        and idx.actionability[c]
        in (ActionabilityLevel.HighlyActionable, ActionabilityLevel.ModeratelyActionable)
    ]
    verbal = sorted(c for c in cues if c.startswith(VERBAL_PREFIX))
    return StateProfile(
        canonical_state=state,
        definition_text=definition_text,
        signature=signature,
        actionable_indicators=actionable,
        verbal_indicators=verbal,
    )


def build_confusable_pair(idx: EvidenceIndex, state_a: str, state_b: str) -> ConfusablePair:
    """Shared cues, Jaccard, and ranked discriminative sets for two states."""
    for s in (state_a, state_b):
        if s not in idx.state_papers:
            raise UnknownState(s)
    cues_a = idx.cues_of_state(state_a)
    cues_b = idx.cues_of_state(state_b)
    shared = cues_a & cues_b
    return ConfusablePair(
        state_a=state_a,
        state_b=state_b,
        shared_cues=shared,
        specific_a=_ranked_cues(idx, state_a, cues_a - cues_b),
        specific_b=_ranked_cues(idx, state_b, cues_b - cues_a),
        jaccard=jaccard_similarity(cues_a, cues_b),
    )


def find_confusable_pairs(idx: EvidenceIndex, min_shared: int = 3) -> list[ConfusablePair]:
    """All unordered state pairs sharing at least min_shared cues.

    Sorted by Jaccard descending; ties by (state_a, state_b) ascending.
    """
    if min_shared < 1:
        raise ValueError("min_shared must be >= 1")
    cue_sets = {s: idx.cues_of_state(s) for s in idx.states()}
    pairs = []
    for a, b in combinations(sorted(cue_sets), 2):
        if len(cue_sets[a] & cue_sets[b]) >= min_shared:
            pairs.append(build_confusable_pair(idx, a, b))
    pairs.sort(key=lambda p: (-p.jaccard, p.state_a, p.state_b))
    return pairs


def discriminative_cues(
    pair: ConfusablePair, idx: EvidenceIndex
) -> tuple[list[tuple[str, int, RelationshipTier]], list[tuple[str, int, RelationshipTier]]]:
    """Both discriminative sets, ranked; disjoint from the shared set."""
    return pair.specific_a, pair.specific_b


@dataclass
class Framework:
    """All four levels plus the evidence index they were built from."""

    index: EvidenceIndex
    vocabulary: list[CueVocabularyEntry]
    clusters: dict[str, StateCluster]
    profiles: dict[str, StateProfile]
    pairs: list[ConfusablePair]
    min_shared: int = 3
    profile_top_k: int = 4
    definitions: dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "min_shared": self.min_shared,
            "profile_top_k": self.profile_top_k,
            "definitions": self.definitions,
            "index": self.index.to_dict(),
            "levels": {
                "cue_vocabulary": [e.to_dict() for e in self.vocabulary],
                "state_clusters": {s: c.to_dict() for s, c in sorted(self.clusters.items())},
                "state_profiles": {s: p.to_dict() for s, p in sorted(self.profiles.items())},
                "confusable_pairs": [p.to_dict() for p in self.pairs],
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def document_hash(self) -> str:
        return hashlib.sha256(self.to_json().encode("utf-8")).hexdigest()

    def pair_for(self, a: str, b: str) -> Optional[ConfusablePair]:
        for p in self.pairs:
            if {p.state_a, p.state_b} == {a, b}:
                return p
        return None


def build_framework(
    idx: EvidenceIndex,
    min_shared: int = 3,
    profile_top_k: int = 4,
    definitions: Optional[dict[str, str]] = None,
) -> Framework:
    """Materialize all four levels from an evidence index."""
    definitions = definitions or {}
    return Framework(
        index=idx,
        vocabulary=build_cue_vocabulary(idx),
        clusters={s: build_state_cluster(idx, s) for s in idx.states()},
        profiles={
            s: build_state_profile(idx, s, profile_top_k, definitions.get(s))
            for s in idx.states()
        },
        pairs=find_confusable_pairs(idx, min_shared),
        min_shared=min_shared,
        profile_top_k=profile_top_k,
        definitions=definitions,
    )


def export_framework(fw: Framework, path: str | Path) -> None:
    Path(path).write_text(fw.to_json(), encoding="utf-8")


def load_framework(path: str | Path) -> Framework:
    """Reload an exported framework document losslessly."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported framework schema version {data.get('schema_version')!r}")
    idx = EvidenceIndex.from_dict(data["index"])
    return build_framework(
        idx,
        min_shared=data.get("min_shared", 3),
        profile_top_k=data.get("profile_top_k", 4),
        definitions=data.get("definitions", {}),
    )
