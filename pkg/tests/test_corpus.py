import json

import pytest

from nvsyn.corpus import (
    CHANNEL_OBSERVABILITY,
    Channel,
    Corpus,
    ObservabilityMode,
    ParseError,
    RawMapping,
    channel_suggestion,
    corpus_stats,
    dump_corpus,
    load_corpus,
    resolve_channel,
    validate_corpus,
)


def write_jsonl(path, rows):
    path.write_text("\n".join(json.dumps(r) for r in rows) + "\n", encoding="utf-8")


GOOD_ROW = {
    "paper_id": "P1",
    "year": 2019,
    "raw_state": "confusion",
    "raw_cue": "furrowed brow",
    "channel": "FacialExpressions",
}


class TestLoadCorpus:
    def test_jsonl_roundtrip(self, tmp_path):
        rows = [GOOD_ROW, {**GOOD_ROW, "paper_id": "P2", "raw_cue": "frown"}]
        src = tmp_path / "c.jsonl"
        write_jsonl(src, rows)
        corpus = load_corpus(src)
        assert len(corpus) == 2
        assert corpus.mappings[0] == RawMapping(
            paper_id="P1",
            raw_state="confusion",
            raw_cue="furrowed brow",
            year=2019,
            channel="FacialExpressions",
        )
        out = tmp_path / "out.jsonl"
        dump_corpus(corpus, out)
        assert load_corpus(out).mappings == corpus.mappings

    def test_csv(self, tmp_path):
        src = tmp_path / "c.csv"
        src.write_text(
            "paper_id,year,raw_state,raw_cue,channel\n"
            "P1,2019,confusion,furrowed brow,FacialExpressions\n"
            "P2,,frustration,sighing,VoiceParalinguistic\n"
        )
        corpus = load_corpus(src)
        assert len(corpus) == 2
        assert corpus.mappings[1].year is None

    def test_missing_field_reports_row(self, tmp_path):
        src = tmp_path / "c.jsonl"
        write_jsonl(src, [GOOD_ROW, {"paper_id": "P2", "raw_state": "x"}])
        with pytest.raises(ParseError) as exc:
            load_corpus(src)
        assert exc.value.row == 2
        assert "raw_cue" in exc.value.reason

    def test_bad_json_line(self, tmp_path):
        src = tmp_path / "c.jsonl"
        src.write_text(json.dumps(GOOD_ROW) + "\nnot json\n")
        with pytest.raises(ParseError) as exc:
            load_corpus(src)
        assert exc.value.row == 2

    def test_unknown_channel_token_rejected(self, tmp_path):
        src = tmp_path / "c.jsonl"
        write_jsonl(src, [{**GOOD_ROW, "channel": "Telepathy"}])
        with pytest.raises(ParseError):
            load_corpus(src)

    def test_non_integer_year(self, tmp_path):
        src = tmp_path / "c.jsonl"
        write_jsonl(src, [{**GOOD_ROW, "year": "twenty"}])
        with pytest.raises(ParseError):
            load_corpus(src)


class TestChannels:
    def test_nine_channels(self):
        assert len(Channel) == 9
        assert set(CHANNEL_OBSERVABILITY) == set(Channel)

    def test_observability_assignment(self):
        assert CHANNEL_OBSERVABILITY[Channel.FacialExpressions] is ObservabilityMode.Observable
        assert CHANNEL_OBSERVABILITY[Channel.EyeMovements] is ObservabilityMode.Mixed
        assert CHANNEL_OBSERVABILITY[Channel.Physiology] is ObservabilityMode.Instrumental
        assert CHANNEL_OBSERVABILITY[Channel.Behavioral] is ObservabilityMode.Instrumental
        assert CHANNEL_OBSERVABILITY[Channel.Multimodal] is ObservabilityMode.Instrumental

    def test_alias_resolution(self):
        assert resolve_channel("Body Posture/Movement") is Channel.BodyPosture
        assert resolve_channel("voice") is Channel.VoiceParalinguistic
        assert resolve_channel("HEAD") is Channel.HeadMovements
        assert resolve_channel("Telepathy") is None

    def test_suggestion_for_typo(self):
        assert channel_suggestion("Eye") == "EyeMovements"
        assert channel_suggestion("Facial Expresions") == "FacialExpressions"


class TestValidation:
    def test_unknown_channel_warning_with_suggestion(self):
        corpus = Corpus(
            mappings=[
                RawMapping(paper_id="P1", raw_state="s", raw_cue="c", channel="Eye")
            ]
        )
        report = validate_corpus(corpus)
        assert report.well_formed
        assert report.warnings[0]["kind"] == "unknown-channel"
        assert report.warnings[0]["suggestion"] == "EyeMovements"

    def test_empty_field_error(self):
        corpus = Corpus(mappings=[RawMapping(paper_id=" ", raw_state="s", raw_cue="c")])
        report = validate_corpus(corpus)
        assert not report.well_formed

    def test_duplicate_triple_warning(self):
        m = RawMapping(paper_id="P1", raw_state="s", raw_cue="c")
        report = validate_corpus(Corpus(mappings=[m, m]))
        assert any(w["kind"] == "duplicate-triple" for w in report.warnings)


class TestStats:
    def test_counts_and_window(self):
        mappings = [
            RawMapping(paper_id="P1", raw_state="s", raw_cue="a", year=2010),
            RawMapping(paper_id="P1", raw_state="s", raw_cue="b", year=2010),
            RawMapping(paper_id="P2", raw_state="s", raw_cue="a", year=2020),
        ]
        stats = corpus_stats(Corpus(mappings=mappings), window=(2015, 2025))
        assert stats.paper_count == 2
        assert stats.mapping_count == 3
        assert stats.year_histogram == {2010: 2, 2020: 1}
        assert stats.window_fraction == 0.5

    def test_seed_corpus_loads(self, seed_corpus):
        assert len(seed_corpus) > 7000
        report = validate_corpus(seed_corpus)
        assert report.well_formed
