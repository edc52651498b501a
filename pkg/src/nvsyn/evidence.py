"""Dual-evidence system: component tiers, relationship tiers, combined
confidence, actionability, and the confidence-vs-replication cross-tab.

Counting unit is the distinct paper per key: a paper reporting the same
relationship twice counts once. Tier thresholds are configuration-visible
constants so users can run sensitivity analyses; the defaults are the
published cut-offs.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from functools import total_ordering
from typing import Iterable, Optional, Sequence

from nvsyn.corpus import Channel
from nvsyn.normalization import NormalizationDictionary, NormalizedMapping
from nvsyn.corpus import CHANNEL_OBSERVABILITY, ObservabilityMode


class DomainError(Exception):
    """Argument outside the operation's domain (e.g. paper count < 1)."""


@total_ordering
class ComponentTier(Enum):
    T1 = ("T1", "Strong")
    T2 = ("T2", "Moderate")
    T3 = ("T3", "Supported")
    T4 = ("T4", "Emerging")
    T5 = ("T5", "Exploratory")

    def __init__(self, code: str, display: str):
        self.code = code
        self.display = display

    def __lt__(self, other: "ComponentTier") -> bool:
        # T1 is strongest; "less than" means stronger.
        return self.code < other.code


@total_ordering
class RelationshipTier(Enum):
    R1 = ("R1", "Strong")
    R2 = ("R2", "Substantial")
    R3 = ("R3", "Moderate")
    R4 = ("R4", "Supported")
    R5 = ("R5", "Emerging")
    R6 = ("R6", "Exploratory")

    def __init__(self, code: str, display: str):
        self.code = code
        self.display = display

    def __lt__(self, other: "RelationshipTier") -> bool:
        return self.code < other.code

    @property
    def actionable(self) -> bool:
        return self <= RelationshipTier.R4


@total_ordering
class CombinedConfidence(Enum):
    VeryHigh = 0
    High = 1
    Moderate = 2
    Low = 3
    VeryLow = 4

    def __lt__(self, other: "CombinedConfidence") -> bool:
        return self.value < other.value


@total_ordering
class ActionabilityLevel(Enum):
    HighlyActionable = 0
    ModeratelyActionable = 1
    WeaklyActionable = 2
    NonActionable = 3

    def __lt__(self, other: "ActionabilityLevel") -> bool:
        return self.value < other.value


@dataclass(frozen=True)
class TierThresholds:
    """Lower bounds (inclusive) for each tier, strongest first."""

    state_component: tuple[int, ...] = (20, 10, 5, 2, 1)
    cue_component: tuple[int, ...] = (10, 5, 3, 2, 1)
    relationship: tuple[int, ...] = (20, 10, 5, 3, 2, 1)


DEFAULT_THRESHOLDS = TierThresholds()


def _tier_from_count(n: int, bounds: Sequence[int], tiers: Sequence) -> object:
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"paper count must be an integer >= 1, got {n!r}")
    for bound, tier in zip(bounds, tiers):
        if n >= bound:
            return tier
    raise AssertionError("threshold table must end at 1")


def component_tier_state(
    n: int, thresholds: TierThresholds = DEFAULT_THRESHOLDS
) -> ComponentTier:
    """State component tier: >=20 T1, 10-19 T2, 5-9 T3, 2-4 T4, 1 T5."""
    return _tier_from_count(n, thresholds.state_component, list(ComponentTier))


def component_tier_cue(
    n: int, thresholds: TierThresholds = DEFAULT_THRESHOLDS
) -> ComponentTier:
    """Cue component tier: >=10 T1, 5-9 T2, 3-4 T3, 2 T4, 1 T5."""
    return _tier_from_count(n, thresholds.cue_component, list(ComponentTier))


def relationship_tier(
    n: int, thresholds: TierThresholds = DEFAULT_THRESHOLDS
) -> RelationshipTier:
    """Relationship tier: >=20 R1, 10-19 R2, 5-9 R3, 3-4 R4, 2 R5, 1 R6."""
    return _tier_from_count(n, thresholds.relationship, list(RelationshipTier))


def combined_confidence(s: ComponentTier, c: ComponentTier) -> CombinedConfidence:
    """Combine two component tiers by first-match over the published rules.

    The rule table is evaluated in printed row order; the (T1-2, T5) pair
    matches no rule before Low because the Moderate rule names Tier 4
    specifically. Symmetric in its arguments.
    """
    strong = {ComponentTier.T1, ComponentTier.T2}
    pair = {s, c} if s != c else {s}
    if pair <= strong:
        return CombinedConfidence.VeryHigh
    if pair & strong and ComponentTier.T3 in pair:
        return CombinedConfidence.High
    if pair == {ComponentTier.T3}:
        return CombinedConfidence.Moderate
    if pair & strong and ComponentTier.T4 in pair:
        return CombinedConfidence.Moderate
    weak = {ComponentTier.T4, ComponentTier.T5}
    if pair & weak and (pair - weak):
        return CombinedConfidence.Low
    return CombinedConfidence.VeryLow


def classify_actionability(
    cue: str,
    channel: Optional[Channel],
    d: NormalizationDictionary,
    specificity: str = "specific",
) -> ActionabilityLevel:
    """Actionability of a canonical cue: explicit table first, then rules.

    Fallback rules: general-specificity cues are weakly actionable,
    instrumental-channel cues are non-actionable, everything else defaults
    to moderately actionable.
    """
    explicit = d.actionability.get(cue)
    if explicit is not None:
        return ActionabilityLevel[explicit]
    if specificity == "general":
        return ActionabilityLevel.WeaklyActionable
    if channel is not None and CHANNEL_OBSERVABILITY[channel] is ObservabilityMode.Instrumental:
        return ActionabilityLevel.NonActionable
    return ActionabilityLevel.ModeratelyActionable


@dataclass
class EvidenceIndex:
    """Per-state, per-cue, and per-relationship distinct-paper counts plus
    everything derived from them."""

    state_papers: dict[str, int]
    cue_papers: dict[str, int]
    relationship_papers: dict[tuple[str, str], int]
    state_tier: dict[str, ComponentTier]
    cue_tier: dict[str, ComponentTier]
    rel_tier: dict[tuple[str, str], RelationshipTier]
    combined: dict[tuple[str, str], CombinedConfidence]
    actionability: dict[str, ActionabilityLevel]
    cue_channel: dict[str, Channel]
    cue_specificity: dict[str, str]
    thresholds: TierThresholds = field(default_factory=TierThresholds)

    def states(self) -> list[str]:
        return sorted(self.state_papers)

    def cues(self) -> list[str]:
        return sorted(self.cue_papers)

    def cues_of_state(self, state: str) -> set[str]:
        return {c for (s, c) in self.relationship_papers if s == state}

    def states_of_cue(self, cue: str) -> set[str]:
        return {s for (s, c) in self.relationship_papers if c == cue}

    def to_dict(self) -> dict:
        return {
            "state_papers": self.state_papers,
            "cue_papers": self.cue_papers,
            "relationships": [
                {
                    "state": s,
                    "cue": c,
                    "papers": n,
                    "tier": self.rel_tier[(s, c)].code,
                    "combined": self.combined[(s, c)].name,
                }
                for (s, c), n in sorted(self.relationship_papers.items())
            ],
            "cue_channel": {c: ch.value for c, ch in self.cue_channel.items()},
            "cue_specificity": self.cue_specificity,
            "actionability": {c: a.name for c, a in self.actionability.items()},
            "thresholds": {
                "state_component": list(self.thresholds.state_component),
                "cue_component": list(self.thresholds.cue_component),
                "relationship": list(self.thresholds.relationship),
            },
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EvidenceIndex":
        thresholds = TierThresholds(
            state_component=tuple(data["thresholds"]["state_component"]),
            cue_component=tuple(data["thresholds"]["cue_component"]),
            relationship=tuple(data["thresholds"]["relationship"]),
        )
        state_papers = dict(data["state_papers"])
        cue_papers = dict(data["cue_papers"])
        relationship_papers = {
            (r["state"], r["cue"]): r["papers"] for r in data["relationships"]
        }
        idx = cls(
            state_papers=state_papers,
            cue_papers=cue_papers,
            relationship_papers=relationship_papers,
            state_tier={
                s: component_tier_state(n, thresholds) for s, n in state_papers.items()
            },
            cue_tier={
                c: component_tier_cue(n, thresholds) for c, n in cue_papers.items()
            },
            rel_tier={
                k: relationship_tier(n, thresholds)
                for k, n in relationship_papers.items()
            },
            combined={},
            actionability={
                c: ActionabilityLevel[a] for c, a in data["actionability"].items()
            },
            cue_channel={c: Channel(ch) for c, ch in data["cue_channel"].items()},
            cue_specificity=dict(data["cue_specificity"]),
            thresholds=thresholds,
        )
        idx.combined = {
            (s, c): combined_confidence(idx.state_tier[s], idx.cue_tier[c])
            for (s, c) in relationship_papers
        }
        return idx


def build_evidence_index(
    mappings: Iterable[NormalizedMapping],
    d: Optional[NormalizationDictionary] = None,
    thresholds: TierThresholds = DEFAULT_THRESHOLDS,
) -> EvidenceIndex:
    """Count distinct papers per state, cue and relationship, derive tiers.

    A relationship's papers are a subset of each component's papers, so
    relationship counts never exceed the component counts.
    """
    d = d or NormalizationDictionary()
    state_set: dict[str, set[str]] = defaultdict(set)
    cue_set: dict[str, set[str]] = defaultdict(set)
    rel_set: dict[tuple[str, str], set[str]] = defaultdict(set)
    cue_channel: dict[str, Channel] = {}
    cue_specificity: dict[str, str] = {}

    for m in mappings:
        state_set[m.canonical_state].add(m.paper_id)
        cue_set[m.canonical_cue].add(m.paper_id)
        rel_set[(m.canonical_state, m.canonical_cue)].add(m.paper_id)
        cue_channel.setdefault(m.canonical_cue, m.channel)
        cue_specificity.setdefault(m.canonical_cue, m.cue_specificity)

    state_papers = {s: len(p) for s, p in state_set.items()}
    cue_papers = {c: len(p) for c, p in cue_set.items()}
    relationship_papers = {k: len(p) for k, p in rel_set.items()}
    state_tier = {s: component_tier_state(n, thresholds) for s, n in state_papers.items()}
    cue_tier = {c: component_tier_cue(n, thresholds) for c, n in cue_papers.items()}
    rel_tier = {k: relationship_tier(n, thresholds) for k, n in relationship_papers.items()}
    combined = {
        (s, c): combined_confidence(state_tier[s], cue_tier[c])
        for (s, c) in relationship_papers
    }
    actionability = {
        c: classify_actionability(c, cue_channel.get(c), d, cue_specificity.get(c, "specific"))
        for c in cue_papers
    }
    return EvidenceIndex(
        state_papers=state_papers,
        cue_papers=cue_papers,
        relationship_papers=relationship_papers,
        state_tier=state_tier,
        cue_tier=cue_tier,
        rel_tier=rel_tier,
        combined=combined,
        actionability=actionability,
        cue_channel=cue_channel,
        cue_specificity=cue_specificity,
        thresholds=thresholds,
    )


@dataclass
class CrossTab:
    """Combined confidence vs single-paper relationships."""

    rows: dict[CombinedConfidence, tuple[int, int, float]]

    @property
    def total_relationships(self) -> int:
        return sum(total for total, _, _ in self.rows.values())

    def to_dict(self) -> dict:
        return {
            level.name: {
                "total": total,
                "single_paper": single,
                "pct_single_paper": pct,
            }
            for level, (total, single, pct) in self.rows.items()
        }

    def render(self) -> str:
        header = f"{'Combined Confidence':<20} {'Total':>8} {'Single Paper (R6)':>18} {'% Single Paper':>15}"
        lines = [header, "-" * len(header)]
        for level in CombinedConfidence:
            total, single, pct = self.rows.get(level, (0, 0, 0.0))
            lines.append(f"{level.name:<20} {total:>8,} {single:>18,} {pct:>14.1f}%")
        return "\n".join(lines)


def cross_tab_confidence_vs_replication(idx: EvidenceIndex) -> CrossTab:
    """For each combined-confidence level: relationships, R6 count, share."""
    rows: dict[CombinedConfidence, tuple[int, int, float]] = {}
    for level in CombinedConfidence:
        keys = [k for k, v in idx.combined.items() if v is level]
        total = len(keys)
        single = sum(1 for k in keys if idx.rel_tier[k] is RelationshipTier.R6)
        pct = round(100.0 * single / total, 1) if total else 0.0
        rows[level] = (total, single, pct)
    return CrossTab(rows=rows)


@dataclass
class ActionableCoreReport:
    relationships: list[tuple[str, str]]
    unique_pair_fraction: float
    mapping_coverage: float
    state_count: int
    cue_count: int
    channel_count: int

    def to_dict(self) -> dict:
        return {
            "relationship_count": len(self.relationships),
            "unique_pair_fraction": self.unique_pair_fraction,
            "mapping_coverage": self.mapping_coverage,
            "state_count": self.state_count,
            "cue_count": self.cue_count,
            "channel_count": self.channel_count,
        }


def actionable_core(
    idx: EvidenceIndex, mappings: Sequence[NormalizedMapping]
) -> ActionableCoreReport:
    """The R1-R4 subset: which relationships, how much of the corpus they cover."""
    core = sorted(k for k, t in idx.rel_tier.items() if t.actionable)
    core_set = set(core)
    total_pairs = len(idx.relationship_papers)
    covered = sum(
        1 for m in mappings if (m.canonical_state, m.canonical_cue) in core_set
    )
    states = {s for s, _ in core}
    cues = {c for _, c in core}
    channels = {idx.cue_channel[c] for c in cues if c in idx.cue_channel}
    return ActionableCoreReport(
        relationships=core,
        unique_pair_fraction=(len(core) / total_pairs) if total_pairs else 0.0,
        mapping_coverage=(covered / len(mappings)) if mappings else 0.0,
        state_count=len(states),
        cue_count=len(cues),
        channel_count=len(channels),
    )


def index_to_json(idx: EvidenceIndex) -> str:
    return json.dumps(idx.to_dict(), indent=2)
