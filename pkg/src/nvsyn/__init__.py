"""nvsyn: evidence-graded knowledge base for nonverbal cue-state mappings.

Builds a four-level framework (cue vocabulary, state clusters, state
profiles, discriminative analysis) from a corpus of documented cue-state
associations, serves evidence-calibrated state inference, and fits a
discrete power law to the relationship replication distribution.
"""

from nvsyn.corpus import Channel, Corpus, ObservabilityMode, RawMapping, load_corpus
from nvsyn.normalization import NormalizationDictionary, normalize_corpus
from nvsyn.evidence import EvidenceIndex, build_evidence_index
from nvsyn.framework import Framework, build_framework

__all__ = [
    "Channel",
    "Corpus",
    "ObservabilityMode",
    "RawMapping",
    "load_corpus",
    "NormalizationDictionary",
    "normalize_corpus",
    "EvidenceIndex",
    "build_evidence_index",
    "Framework",
    "build_framework",
]

__version__ = "0.1.0"
