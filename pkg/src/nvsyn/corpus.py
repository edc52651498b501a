"""Mapping record data model, corpus ingestion and validation.

A corpus is an ordered list of raw cue-state mappings, one per row of a
JSONL or CSV file. Ingestion is lossless and order-preserving; duplicate
rows are permitted here (dedup semantics live in evidence counting).
"""

from __future__ import annotations

import csv
import difflib
import json
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Iterable, Optional


class Channel(Enum):
    """The nine behavioral channels grouping cues."""

    FacialExpressions = "FacialExpressions"
    EyeMovements = "EyeMovements"
    BodyPosture = "BodyPosture"
    Behavioral = "Behavioral"
    VoiceParalinguistic = "VoiceParalinguistic"
    HeadMovements = "HeadMovements"
    HandArmGestures = "HandArmGestures"
    Physiology = "Physiology"
    Multimodal = "Multimodal"


class ObservabilityMode(Enum):
    Observable = "Observable"
    Instrumental = "Instrumental"
    Mixed = "Mixed"


# Fixed channel -> detection mode assignment. Eye movements are mixed:
# gaze direction is observable, saccade-level detail is not.
CHANNEL_OBSERVABILITY: dict[Channel, ObservabilityMode] = {
    Channel.FacialExpressions: ObservabilityMode.Observable,
    Channel.EyeMovements: ObservabilityMode.Mixed,
    Channel.BodyPosture: ObservabilityMode.Observable,
    Channel.Behavioral: ObservabilityMode.Instrumental,
    Channel.VoiceParalinguistic: ObservabilityMode.Observable,
    Channel.HeadMovements: ObservabilityMode.Observable,
    Channel.HandArmGestures: ObservabilityMode.Observable,
    Channel.Physiology: ObservabilityMode.Instrumental,
    Channel.Multimodal: ObservabilityMode.Instrumental,
}

# Accepted spellings for channel tokens, matched case-insensitively after
# trimming. Unknown tokens are parse errors, never guesses.
_CHANNEL_ALIASES: dict[str, Channel] = {
    "facial": Channel.FacialExpressions,
    "facialexpressions": Channel.FacialExpressions,
    "facial expressions": Channel.FacialExpressions,
    "face": Channel.FacialExpressions,
    "eyemovements": Channel.EyeMovements,
    "eye movements": Channel.EyeMovements,
    "bodyposture": Channel.BodyPosture,
    "body posture": Channel.BodyPosture,
    "body posture/movement": Channel.BodyPosture,
    "body postures/movements": Channel.BodyPosture,
    "body": Channel.BodyPosture,
    "behavioral": Channel.Behavioral,
    "voiceparalinguistic": Channel.VoiceParalinguistic,
    "voice/paralinguistic": Channel.VoiceParalinguistic,
    "voice": Channel.VoiceParalinguistic,
    "headmovements": Channel.HeadMovements,
    "head movements": Channel.HeadMovements,
    "head": Channel.HeadMovements,
    "handarmgestures": Channel.HandArmGestures,
    "hand/arm gestures": Channel.HandArmGestures,
    "gesture": Channel.HandArmGestures,
    "gestures": Channel.HandArmGestures,
    "physiology": Channel.Physiology,
    "physiological": Channel.Physiology,
    "multimodal": Channel.Multimodal,
}
for _ch in Channel:
    _CHANNEL_ALIASES[_ch.value.lower()] = _ch


class IoError(Exception):
    """Corpus file unreadable or missing."""


class ParseError(Exception):
    """A corpus row failed to parse."""

    def __init__(self, row: int, reason: str):
        self.row = row
        self.reason = reason
        super().__init__(f"row {row}: {reason}")


def resolve_channel(token: str) -> Optional[Channel]:
    """Resolve a channel token to a Channel, or None if unknown."""
    return _CHANNEL_ALIASES.get(token.strip().lower())


def channel_suggestion(token: str) -> Optional[str]:
    """Closest canonical channel name for an unknown token, if any."""
    names = [c.value for c in Channel]
    matches = difflib.get_close_matches(token.strip(), names, n=1, cutoff=0.3)
    return matches[0] if matches else None


@dataclass(frozen=True)
class RawMapping:
    """One documented cue-state association from one paper.

    ``channel`` holds the raw token from the input file; it is resolved to
    a Channel during normalization.
    """

    paper_id: str
    raw_state: str
    raw_cue: str
    year: Optional[int] = None
    channel: Optional[str] = None
    context: Optional[str] = None

    def resolved_channel(self) -> Optional[Channel]:
        if self.channel is None:
            return None
        return resolve_channel(self.channel)


@dataclass
class Corpus:
    """An ordered, immutable-by-convention list of raw mappings."""

    mappings: list[RawMapping]
    source_manifest: list[dict] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.mappings)


@dataclass
class ValidationReport:
    errors: list[dict] = field(default_factory=list)
    warnings: list[dict] = field(default_factory=list)

    @property
    def well_formed(self) -> bool:
        return not self.errors

    def to_json(self) -> str:
        return json.dumps(
            {
                "well_formed": self.well_formed,
                "errors": self.errors,
                "warnings": self.warnings,
            },
            indent=2,
        )


@dataclass
class CorpusStats:
    paper_count: int
    mapping_count: int
    year_histogram: dict[int, int]
    window_fraction: Optional[float]
    window: Optional[tuple[int, int]]


_FIELDS = ("paper_id", "year", "raw_state", "raw_cue", "channel", "context")
_REQUIRED = ("paper_id", "raw_state", "raw_cue")


def _mapping_from_record(record: dict, row: int, check_channel: bool) -> RawMapping:
    for key in _REQUIRED:
        value = record.get(key)
        if value is None or str(value).strip() == "":
            raise ParseError(row, f"missing required field {key!r}")
    year = record.get("year")
    if year is not None and str(year).strip() != "":
        try:
            year = int(year)
        except (TypeError, ValueError):
            raise ParseError(row, f"year {year!r} is not an integer") from None
    else:
        year = None
    channel = record.get("channel")
    if channel is not None and str(channel).strip() == "":
        channel = None
    if channel is not None:
        channel = str(channel)
        if check_channel and resolve_channel(channel) is None:
            raise ParseError(row, f"unknown channel token {channel!r}")
    context = record.get("context")
    if context is not None and str(context).strip() == "":
        context = None
    return RawMapping(
        paper_id=str(record["paper_id"]),
        raw_state=str(record["raw_state"]),
        raw_cue=str(record["raw_cue"]),
        year=year,
        channel=channel,
        context=context,
    )


def load_corpus(path: str | Path, format: Optional[str] = None) -> Corpus:
    """Load a corpus from a JSONL or CSV file.

    One RawMapping per input row, in file order. Malformed rows raise
    ParseError naming the row (1-based); they are never silently dropped.
    """
    path = Path(path)
    if format is None:
        format = "csv" if path.suffix.lower() == ".csv" else "jsonl"
    if format not in ("jsonl", "csv"):
        raise ValueError(f"unsupported corpus format {format!r}")
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read corpus file {path}: {exc}") from exc

    mappings: list[RawMapping] = []
    if format == "jsonl":
        for row, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(row, f"invalid JSON: {exc}") from None
            if not isinstance(record, dict):
                raise ParseError(row, "row is not a JSON object")
            mappings.append(_mapping_from_record(record, row, check_channel=True))
    else:
        reader = csv.DictReader(text.splitlines())
        if reader.fieldnames is None or "paper_id" not in reader.fieldnames:
            raise ParseError(1, "CSV header must include the corpus field names")
        for row, record in enumerate(reader, start=2):
            mappings.append(_mapping_from_record(record, row, check_channel=True))

    manifest = [{"path": str(path), "format": format, "rows": len(mappings)}]
    return Corpus(mappings=mappings, source_manifest=manifest)


def dump_corpus(corpus: Corpus, path: str | Path) -> None:
    """Re-serialize a corpus as JSONL (row order preserved)."""
    with open(path, "w", encoding="utf-8") as fh:
        for m in corpus.mappings:
            record = {
                "paper_id": m.paper_id,
                "year": m.year,
                "raw_state": m.raw_state,
                "raw_cue": m.raw_cue,
                "channel": m.channel,
                "context": m.context,
            }
            fh.write(json.dumps({k: v for k, v in record.items() if v is not None}))
            fh.write("\n")


def validate_corpus(corpus: Corpus) -> ValidationReport:
    """Report-only validation: empty fields, unknown channels, duplicates."""
    report = ValidationReport()
    seen: Counter[tuple[str, str, str]] = Counter()
    for i, m in enumerate(corpus.mappings, start=1):
        for key in _REQUIRED:
            if not str(getattr(m, key.replace("raw_", "raw_"))).strip():
                report.errors.append({"row": i, "kind": "empty-field", "field": key})
        if m.channel is not None and resolve_channel(m.channel) is None:
            warning = {"row": i, "kind": "unknown-channel", "token": m.channel}
            suggestion = channel_suggestion(m.channel)
            if suggestion:
                warning["suggestion"] = suggestion
            report.warnings.append(warning)
        seen[(m.paper_id, m.raw_state, m.raw_cue)] += 1
    for triple, count in sorted(seen.items()):
        if count > 1:
            report.warnings.append(
                {
                    "kind": "duplicate-triple",
                    "paper_id": triple[0],
                    "raw_state": triple[1],
                    "raw_cue": triple[2],
                    "occurrences": count,
                }
            )
    return report


def corpus_stats(
    corpus: Corpus, window: Optional[tuple[int, int]] = None
) -> CorpusStats:
    """Distinct papers, mapping count, year histogram, window fraction."""
    papers = {m.paper_id for m in corpus.mappings}
    years: Counter[int] = Counter(m.year for m in corpus.mappings if m.year is not None)
    window_fraction = None
    if window is not None:
        lo, hi = window
        dated = {m.paper_id: m.year for m in corpus.mappings if m.year is not None}
        if dated:
            in_window = sum(1 for y in dated.values() if lo <= y <= hi)
            window_fraction = in_window / len(dated)
    return CorpusStats(
        paper_count=len(papers),
        mapping_count=len(corpus.mappings),
        year_histogram=dict(sorted(years.items())),
        window_fraction=window_fraction,
        window=window,
    )


def iter_rows(corpus: Corpus) -> Iterable[RawMapping]:
    return iter(corpus.mappings)
