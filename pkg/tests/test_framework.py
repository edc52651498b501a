import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nvsyn.corpus import CHANNEL_OBSERVABILITY, Channel
from nvsyn.evidence import build_evidence_index
from nvsyn.framework import (
    UnknownState,
    build_confusable_pair,
    build_cue_vocabulary,
    build_framework,
    build_state_cluster,
    build_state_profile,
    export_framework,
    find_confusable_pairs,
    jaccard_similarity,
    load_framework,
    rank_key,
)
from nvsyn.normalization import NormalizedMapping


def mapping(paper, state, cue, channel=Channel.FacialExpressions):
    return NormalizedMapping(
        paper_id=paper,
        raw_state=state,
        raw_cue=cue,
        canonical_state=state,
        canonical_cue=cue,
        cue_specificity="specific",
        channel=channel,
    )


sets = st.sets(st.text(max_size=6), max_size=12)


class TestJaccard:
    @given(sets, sets)
    @settings(max_examples=300)
    def test_bounds_and_symmetry(self, a, b):
        j = jaccard_similarity(a, b)
        assert 0.0 <= j <= 1.0
        assert j == jaccard_similarity(b, a)

    @given(sets)
    def test_identity(self, a):
        assert jaccard_similarity(a, a) == (1.0 if a else 0.0)

    @given(sets, sets)
    def test_zero_iff_disjoint(self, a, b):
        j = jaccard_similarity(a, b)
        assert (j == 0.0) == (not (a & b))


class TestRanking:
    def test_count_desc_then_label_asc(self):
        items = [("b", 3), ("a", 3), ("c", 9)]
        assert sorted(items, key=rank_key) == [("c", 9), ("a", 3), ("b", 3)]


def random_corpus(seed: int):
    rng = random.Random(seed)
    states = [f"s{i}" for i in range(rng.randint(2, 5))]
    cues = [f"c{i}" for i in range(rng.randint(3, 10))]
    channels = list(Channel)
    chan_of = {c: rng.choice(channels) for c in cues}
    mappings = []
    for p in range(rng.randint(5, 40)):
        s = rng.choice(states)
        c = rng.choice(cues)
        mappings.append(mapping(f"P{p}", s, c, chan_of[c]))
    return mappings


class TestConfusablePairsOracle:
    """Compare find_confusable_pairs against a direct set-arithmetic oracle
    on randomized synthetic corpora."""

    @pytest.mark.parametrize("seed", range(25))
    def test_matches_brute_force(self, seed):
        mappings = random_corpus(seed)
        idx = build_evidence_index(mappings)
        cue_sets = {}
        for m in mappings:
            cue_sets.setdefault(m.canonical_state, set()).add(m.canonical_cue)
        min_shared = 1 + seed % 3
        expected = []
        for a, b in itertools.combinations(sorted(cue_sets), 2):
            shared = cue_sets[a] & cue_sets[b]
            if len(shared) >= min_shared:
                union = cue_sets[a] | cue_sets[b]
                expected.append(
                    (
                        a,
                        b,
                        frozenset(shared),
                        frozenset(cue_sets[a] - cue_sets[b]),
                        frozenset(cue_sets[b] - cue_sets[a]),
                        len(shared) / len(union),
                    )
                )
        expected.sort(key=lambda t: (-t[5], t[0], t[1]))

        pairs = find_confusable_pairs(idx, min_shared=min_shared)
        got = [
            (
                p.state_a,
                p.state_b,
                frozenset(p.shared_cues),
                frozenset(c for c, _, _ in p.specific_a),
                frozenset(c for c, _, _ in p.specific_b),
                p.jaccard,
            )
            for p in pairs
        ]
        assert got == expected

    @pytest.mark.parametrize("seed", range(10))
    def test_specific_sets_ranked(self, seed):
        idx = build_evidence_index(random_corpus(seed))
        for p in find_confusable_pairs(idx, min_shared=1):
            for side in (p.specific_a, p.specific_b):
                keys = [rank_key((c, n)) for c, n, _ in side]
                assert keys == sorted(keys)


class TestLevels:
    def build_index(self):
        mappings = [
            mapping("P1", "confusion", "frown"),
            mapping("P2", "confusion", "frown"),
            mapping("P3", "confusion", "frown"),
            mapping("P2", "confusion", "sighing", Channel.VoiceParalinguistic),
            mapping("P3", "frustration", "sighing", Channel.VoiceParalinguistic),
            mapping("P4", "frustration", "frown"),
            mapping("P5", "confusion", 'verbal: "i don\'t understand"', Channel.VoiceParalinguistic),
        ]
        return build_evidence_index(mappings)

    def test_vocabulary_states_ranked(self):
        entries = {e.canonical_cue: e for e in build_cue_vocabulary(self.build_index())}
        frown = entries["frown"]
        assert [s for s, _, _ in frown.associated_states] == ["confusion", "frustration"]
        assert frown.paper_count == 4
        assert frown.observability is CHANNEL_OBSERVABILITY[frown.channel]

    def test_cluster_breakdown(self):
        cluster = build_state_cluster(self.build_index(), "confusion")
        assert cluster.paper_count == 4
        assert cluster.total_cue_relationships == 3
        assert cluster.channel_breakdown[Channel.VoiceParalinguistic] == 2
        assert cluster.top_cues[0][0] == "frown"
        assert "State: confusion" in cluster.render()

    def test_cluster_unknown_state(self):
        with pytest.raises(UnknownState):
            build_state_cluster(self.build_index(), "nostalgia")

    def test_profile_signature_and_verbal(self):
        profile = build_state_profile(
            self.build_index(), "confusion", definition_text="a definition"
        )
        assert profile.definition_text == "a definition"
        voice = profile.signature[Channel.VoiceParalinguistic]
        assert [c for c, _, _ in voice] == ["sighing", 'verbal: "i don\'t understand"']
        assert profile.verbal_indicators == ['verbal: "i don\'t understand"']
        assert "frown" in profile.actionable_indicators

    def test_pair_orientation_and_render(self):
        pair = build_confusable_pair(self.build_index(), "confusion", "frustration")
        assert pair.shared_cues == {"frown", "sighing"}
        assert pair.jaccard == pytest.approx(2 / 3)
        text = pair.render()
        assert "confusion vs frustration" in text


class TestFrameworkDocument:
    def test_export_load_roundtrip(self, tmp_path, seed_framework):
        path = tmp_path / "fw.json"
        export_framework(seed_framework, path)
        again = load_framework(path)
        assert again.to_json() == seed_framework.to_json()
        assert again.document_hash() == seed_framework.document_hash()

    def test_hash_changes_with_content(self):
        idx = TestLevels().build_index()
        fw = build_framework(idx, min_shared=1)
        fw2 = build_framework(idx, min_shared=2)
        assert fw.document_hash() != fw2.document_hash()

    def test_pair_for_unordered(self, seed_framework):
        p = seed_framework.pair_for("frustration", "confusion")
        assert p is not None
        assert {p.state_a, p.state_b} == {"confusion", "frustration"}

    def test_schema_version_check(self, tmp_path, seed_framework):
        path = tmp_path / "fw.json"
        doc = seed_framework.to_dict()
        doc["schema_version"] = 99
        import json

        path.write_text(json.dumps(doc))
        with pytest.raises(ValueError):
            load_framework(path)
