"""Hierarchical label normalization: synonyms, AU decoding, specificity.

Raw state and cue labels are folded (case, whitespace, trailing
punctuation) and then looked up in curated dictionaries. Lookup is exact
match after folding; unknown labels pass through as self-canonical, so the
long tail of single-study labels survives untouched. Cue normalization
applies, in precedence order: exclusion check, facial Action Unit
decoding, synonym map, pass-through.
"""

from __future__ import annotations

import json
import re
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from nvsyn.corpus import Channel, Corpus, RawMapping, resolve_channel


class ExcludedCue(Exception):
    """Raw cue matches an exclusion pattern (out of nonverbal scope)."""

    def __init__(self, raw: str, pattern: str):
        self.raw = raw
        self.pattern = pattern
        super().__init__(f"cue {raw!r} excluded by pattern {pattern!r}")


class MalformedAuCode(Exception):
    """String fails the Action Unit code grammar."""


_AU_GRAMMAR = re.compile(r"^au\d+(\s*\+\s*(au)?\d+)*$", re.IGNORECASE)
_TRAILING_PUNCT = re.compile(r"[\s\.,;:!]+$")


def fold_label(raw: str) -> str:
    """Case-fold, trim, collapse internal whitespace, strip trailing punctuation."""
    s = unicodedata.normalize("NFKC", raw).casefold().strip()
    s = re.sub(r"\s+", " ", s)
    s = _TRAILING_PUNCT.sub("", s)
    return s


def canonicalize_au_code(code: str) -> list[int]:
    """Parse an AU code string into a sorted, deduplicated list of AU numbers."""
    folded = fold_label(code)
    if not _AU_GRAMMAR.match(folded):
        raise MalformedAuCode(f"not a valid AU code: {code!r}")
    numbers = sorted({int(n) for n in re.findall(r"\d+", folded)})
    return numbers


def au_key(numbers: list[int]) -> str:
    """Normalized dictionary key for an AU code set, e.g. 'AU1+AU2'."""
    return "+".join(f"AU{n}" for n in numbers)


@dataclass
class NormalizationDictionary:
    """The five normalization sections plus the actionability rule set.

    Canonical targets are fixed points: normalizing a canonical label
    returns it unchanged. ``au_decodings`` keys are normalized AU code
    sets (sorted, uppercase, 'AU1+AU2' style).
    """

    state_synonyms: dict[str, str] = field(default_factory=dict)
    cue_synonyms: dict[str, str] = field(default_factory=dict)
    au_decodings: dict[str, str] = field(default_factory=dict)
    specificity: dict[str, str] = field(default_factory=dict)
    exclusions: list[str] = field(default_factory=list)
    # Optional sections used downstream of normalization.
    actionability: dict[str, str] = field(default_factory=dict)
    cue_channels: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        self.state_synonyms = {fold_label(k): fold_label(v) for k, v in self.state_synonyms.items()}
        self.cue_synonyms = {fold_label(k): fold_label(v) for k, v in self.cue_synonyms.items()}
        self.au_decodings = {k.upper(): fold_label(v) for k, v in self.au_decodings.items()}
        self.specificity = {fold_label(k): v.lower() for k, v in self.specificity.items()}
        self.exclusions = [fold_label(p) for p in self.exclusions]

    @classmethod
    def from_json(cls, path: str | Path) -> "NormalizationDictionary":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(
            state_synonyms=data.get("state_synonyms", {}),
            cue_synonyms=data.get("cue_synonyms", {}),
            au_decodings=data.get("au_decodings", {}),
            specificity=data.get("specificity", {}),
            exclusions=data.get("exclusions", []),
            actionability=data.get("actionability", {}),
            cue_channels=data.get("cue_channels", {}),
        )

    def excluded_by(self, folded: str) -> Optional[str]:
        for pattern in self.exclusions:
            if pattern and pattern in folded:
                return pattern
        return None


@dataclass(frozen=True)
class NormalizedMapping:
    paper_id: str
    raw_state: str
    raw_cue: str
    canonical_state: str
    canonical_cue: str
    cue_specificity: str  # "specific" | "general"
    channel: Channel
    year: Optional[int] = None
    context: Optional[str] = None
    normalization_trace: tuple[str, ...] = ("pass-through",)


@dataclass
class ReductionReport:
    raw_state_count: int
    canonical_state_count: int
    state_reduction_pct: float
    raw_cue_count: int
    canonical_cue_count: int
    cue_reduction_pct: float
    largest_consolidation: tuple[str, int]
    excluded_count: int
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(
            {
                "raw_state_count": self.raw_state_count,
                "canonical_state_count": self.canonical_state_count,
                "state_reduction_pct": self.state_reduction_pct,
                "raw_cue_count": self.raw_cue_count,
                "canonical_cue_count": self.canonical_cue_count,
                "cue_reduction_pct": self.cue_reduction_pct,
                "largest_consolidation": list(self.largest_consolidation),
                "excluded_count": self.excluded_count,
                "warnings": self.warnings,
            },
            indent=2,
        )


def _reduction_pct(raw: int, canonical: int) -> float:
    if raw == 0:
        return 0.0
    return round(100.0 * (1.0 - canonical / raw), 1)


def normalize_state_label(raw: str, d: NormalizationDictionary) -> str:
    """Canonical state for a raw label; unknown labels are self-canonical."""
    folded = fold_label(raw)
    return d.state_synonyms.get(folded, folded)


def decode_action_units(code: str, d: NormalizationDictionary) -> tuple[str, bool]:
    """Decode an AU code string to an observable description.

    Returns (description, undecoded_flag). Unknown single AUs come back as
    'au<n> (undecoded)' with the flag set; unknown combinations decode
    component-wise and join with '+'. The description is always folded so
    normalization stays idempotent.
    """
    numbers = canonicalize_au_code(code)
    key = au_key(numbers)
    if key in d.au_decodings:
        return d.au_decodings[key], False
    parts = []
    any_unknown = False
    for n in numbers:
        single = f"AU{n}"
        if single in d.au_decodings:
            parts.append(d.au_decodings[single])
        else:
            parts.append(f"au{n} (undecoded)")
            any_unknown = True
    return "+".join(parts), any_unknown


def normalize_cue_label(
    raw: str, d: NormalizationDictionary
) -> tuple[str, str, tuple[str, ...]]:
    """Canonical cue, specificity class, and the trace of applied rules.

    Precedence: exclusion check, AU decoding, synonym map, pass-through.
    Raises ExcludedCue when the raw label matches an exclusion pattern.
    """
    folded = fold_label(raw)
    if not folded:
        raise ValueError("cue label is empty after folding")
    pattern = d.excluded_by(folded)
    if pattern is not None:
        raise ExcludedCue(raw, pattern)

    trace: list[str] = ["fold"]
    label = folded
    if _AU_GRAMMAR.match(label):
        decoded, undecoded = decode_action_units(label, d)
        trace.append("au-decode" + (":undecoded" if undecoded else ""))
        label = decoded
    if label in d.cue_synonyms:
        label = d.cue_synonyms[label]
        trace.append("cue-synonym")
    if len(trace) == 1:
        trace.append("pass-through")
    specificity = d.specificity.get(label, "specific")
    return label, specificity, tuple(trace)


def resolve_mapping_channel(
    raw_channel: Optional[str], canonical_cue: str, d: NormalizationDictionary
) -> tuple[Optional[Channel], Optional[str]]:
    """Channel for a normalized mapping, with an optional warning string."""
    if raw_channel is not None:
        ch = resolve_channel(raw_channel)
        if ch is not None:
            return ch, None
        hint = d.cue_channels.get(canonical_cue)
        if hint is not None:
            return Channel(hint), f"unknown channel token {raw_channel!r}; used dictionary hint"
        return None, f"unknown channel token {raw_channel!r} and no dictionary hint"
    hint = d.cue_channels.get(canonical_cue)
    if hint is not None:
        return Channel(hint), None
    return None, f"no channel for cue {canonical_cue!r}"


def normalize_mapping(
    m: RawMapping, d: NormalizationDictionary
) -> tuple[Optional[NormalizedMapping], Optional[str]]:
    """Normalize one mapping. Returns (mapping-or-None, warning-or-None).

    None mapping means the row was excluded (exclusion pattern or
    unresolvable channel); the reason comes back as the warning.
    """
    state = normalize_state_label(m.raw_state, d)
    try:
        cue, specificity, trace = normalize_cue_label(m.raw_cue, d)
    except ExcludedCue as exc:
        return None, f"excluded: {exc}"
    channel, warning = resolve_mapping_channel(m.channel, cue, d)
    if channel is None:
        # No way to place the cue in a channel; fall back to Behavioral so
        # the row is not lost, but keep the warning.
        channel = Channel.Behavioral
    full_trace = trace
    if state != fold_label(m.raw_state):
        full_trace = ("state-synonym",) + trace
    return (
        NormalizedMapping(
            paper_id=m.paper_id,
            raw_state=m.raw_state,
            raw_cue=m.raw_cue,
            canonical_state=state,
            canonical_cue=cue,
            cue_specificity=specificity,
            channel=channel,
            year=m.year,
            context=m.context,
            normalization_trace=full_trace,
        ),
        warning,
    )


def normalize_corpus(
    corpus: Corpus, d: NormalizationDictionary
) -> tuple[list[NormalizedMapping], ReductionReport]:
    """Normalize every non-excluded mapping and report label reduction.

    Deterministic and idempotent: feeding the canonical labels back through
    changes nothing. Per-row issues are collected into the report, never
    raised.
    """
    normalized: list[NormalizedMapping] = []
    warnings: list[str] = []
    excluded = 0
    raw_states: set[str] = set()
    raw_cues: set[str] = set()
    variants: dict[str, set[str]] = {}

    for i, m in enumerate(corpus.mappings, start=1):
        raw_states.add(fold_label(m.raw_state))
        raw_cues.add(fold_label(m.raw_cue))
        nm, warning = normalize_mapping(m, d)
        if warning is not None:
            warnings.append(f"row {i}: {warning}")
        if nm is None:
            excluded += 1
            continue
        normalized.append(nm)
        variants.setdefault(nm.canonical_state, set()).add(fold_label(m.raw_state))

    canonical_states = {nm.canonical_state for nm in normalized}
    canonical_cues = {nm.canonical_cue for nm in normalized}
    if variants:
        largest = max(sorted(variants.items()), key=lambda kv: len(kv[1]))
        largest_consolidation = (largest[0], len(largest[1]))
    else:
        largest_consolidation = ("", 0)

    report = ReductionReport(
        raw_state_count=len(raw_states),
        canonical_state_count=len(canonical_states),
        state_reduction_pct=_reduction_pct(len(raw_states), len(canonical_states)),
        raw_cue_count=len(raw_cues),
        canonical_cue_count=len(canonical_cues),
        cue_reduction_pct=_reduction_pct(len(raw_cues), len(canonical_cues)),
        largest_consolidation=largest_consolidation,
        excluded_count=excluded,
        warnings=warnings,
    )
    return normalized, report
