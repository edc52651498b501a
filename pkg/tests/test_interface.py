import json

import pytest
from click.testing import CliRunner
from fastapi.testclient import TestClient

from nvsyn.cli import default_dictionary, main
from nvsyn.framework import export_framework
from nvsyn.server import create_app


@pytest.fixture(scope="module")
def framework_file(tmp_path_factory, seed_framework):
    path = tmp_path_factory.mktemp("fw") / "framework.json"
    export_framework(seed_framework, path)
    return str(path)


@pytest.fixture(scope="module")
def client(seed_framework):
    app = create_app(seed_framework, default_dictionary())
    return TestClient(app)


def run_cli(*args, **kwargs):
    return CliRunner().invoke(main, list(args), **kwargs)


SMALL_CORPUS = [
    {"paper_id": "P1", "raw_state": "Confused", "raw_cue": "furrowed brow", "channel": "FacialExpressions"},
    {"paper_id": "P2", "raw_state": "confusion", "raw_cue": "AU4", "channel": "FacialExpressions"},
    {"paper_id": "P3", "raw_state": "frustration", "raw_cue": "sighing", "channel": "VoiceParalinguistic"},
]


def write_corpus(tmp_path, rows=None):
    path = tmp_path / "corpus.jsonl"
    path.write_text("\n".join(json.dumps(r) for r in (rows or SMALL_CORPUS)) + "\n")
    return str(path)


class TestCliPipeline:
    def test_ingest_valid(self, tmp_path):
        result = run_cli("ingest", write_corpus(tmp_path))
        assert result.exit_code == 0
        assert json.loads(result.output)["well_formed"] is True

    def test_ingest_malformed_exits_1(self, tmp_path):
        path = tmp_path / "bad.jsonl"
        path.write_text("not json\n")
        result = run_cli("ingest", str(path))
        assert result.exit_code == 1

    def test_normalize_report(self, tmp_path):
        dict_path = tmp_path / "dict.json"
        dict_path.write_text(
            json.dumps({"state_synonyms": {"confused": "confusion"}})
        )
        result = run_cli("normalize", write_corpus(tmp_path), str(dict_path))
        assert result.exit_code == 0
        report = json.loads(result.output)
        assert report["raw_state_count"] == 3
        assert report["canonical_state_count"] == 2

    def test_build_seed_and_query(self, tmp_path):
        out = tmp_path / "fw.json"
        result = run_cli("build", "--seed", "-o", str(out))
        assert result.exit_code == 0
        assert "wrote framework" in result.output
        assert out.exists()

    def test_build_requires_inputs(self, tmp_path):
        result = run_cli("build", "-o", str(tmp_path / "fw.json"))
        assert result.exit_code == 1


class TestCliQueries:
    def test_query_state_render(self, framework_file):
        result = run_cli("query", "state", "confusion", "--framework", framework_file)
        assert result.exit_code == 0
        assert "State: confusion" in result.output
        assert "292 papers" in result.output

    def test_query_state_unknown_exit_1(self, framework_file):
        result = run_cli("query", "state", "nostalgia", "--framework", framework_file)
        assert result.exit_code == 1
        assert "error" in result.output

    def test_query_cue_json(self, framework_file):
        result = run_cli("query", "cue", "sighing / deep sighing", "--framework", framework_file)
        assert result.exit_code == 0
        doc = json.loads(result.output)
        assert doc["channel"] == "VoiceParalinguistic"
        assert doc["states"][0]["state"] == "frustration"

    def test_discriminate(self, framework_file):
        result = run_cli(
            "discriminate", "confusion", "frustration", "--top", "5",
            "--framework", framework_file,
        )
        assert result.exit_code == 0
        assert "confusion vs frustration" in result.output

    def test_env_var_framework(self, framework_file):
        result = CliRunner().invoke(
            main,
            ["query", "state", "boredom"],
            env={"NVSYN_FRAMEWORK": framework_file},
        )
        assert result.exit_code == 0
        assert "State: boredom" in result.output


class TestCliInfer:
    def test_infer_json(self, framework_file):
        result = run_cli(
            "infer", "--cues", "furrowed brow; scratching head",
            "--framework", framework_file,
        )
        assert result.exit_code == 0
        doc = json.loads(result.output)
        assert doc["candidates"][0]["state"] == "confusion"

    def test_infer_unknown_cues_exit_1(self, framework_file):
        result = run_cli("infer", "--cues", "levitating", "--framework", framework_file)
        assert result.exit_code == 1

    def test_infer_bad_min_tier_exit_1(self, framework_file):
        result = run_cli(
            "infer", "--cues", "furrowed brow", "--min-tier", "R9",
            "--framework", framework_file,
        )
        assert result.exit_code == 1

    def test_min_tier_preset(self, framework_file):
        result = run_cli(
            "infer", "--cues", "furrowed brow", "--min-tier", "high-stakes",
            "--framework", framework_file,
        )
        assert result.exit_code == 0
        doc = json.loads(result.output)
        for c in doc["candidates"]:
            for m in c["matched_cues"]:
                assert m["tier"] in ("R1", "R2")

    def test_session_replay(self, framework_file, tmp_path):
        session_file = tmp_path / "session.json"
        session_file.write_text(
            json.dumps(
                {
                    "deltas": [
                        {"observed": ["furrowed brow"]},
                        {"observed": ["sighing"], "absent": ["smile"]},
                    ]
                }
            )
        )
        result = run_cli(
            "session", "replay", str(session_file), "--framework", framework_file
        )
        assert result.exit_code == 0
        doc = json.loads(result.output)
        assert doc["candidates"][0]["state"] == "frustration"
        assert doc["absent"] == ["smile"]


class TestCliPowerlaw:
    def test_counts_file_fit(self, tmp_path):
        import numpy as np

        from nvsyn.powerlaw import generate_powerlaw_sample

        rng = np.random.default_rng(0)
        counts = generate_powerlaw_sample(2000, 2.5, 2, rng)
        path = tmp_path / "counts.txt"
        path.write_text("\n".join(str(int(c)) for c in counts))
        plot_path = tmp_path / "plot.tsv"
        result = run_cli(
            "fit-powerlaw", "--counts-file", str(path), "--xmin", "2",
            "--compare", "exponential", "--plot-out", str(plot_path),
        )
        assert result.exit_code == 0
        # stderr (the plot-out notice) is mixed into output by CliRunner;
        # the JSON report ends at the closing brace on its own line.
        json_text = result.output[: result.output.rindex("}") + 1]
        doc = json.loads(json_text)
        assert 2.2 < doc["fit"]["alpha"] < 2.8
        assert doc["comparisons"][0]["alternative"] == "exponential"
        assert plot_path.read_text().startswith("x\tempirical_ccdf")

    def test_bad_counts_exit_1(self, tmp_path):
        path = tmp_path / "counts.txt"
        path.write_text("1\n-3\n")
        result = run_cli("fit-powerlaw", "--counts-file", str(path))
        assert result.exit_code == 1


class TestHttpRead:
    def test_states_list_and_hash_header(self, client, seed_framework):
        resp = client.get("/v1/states")
        assert resp.status_code == 200
        assert resp.headers["X-Framework-Hash"] == seed_framework.document_hash()
        states = {s["state"]: s for s in resp.json()["states"]}
        assert states["confusion"]["papers"] == 292
        assert states["confusion"]["tier"] == "T1"

    def test_state_detail_with_profile(self, client):
        resp = client.get("/v1/states/confusion")
        assert resp.status_code == 200
        doc = resp.json()
        assert doc["total_cue_relationships"] == 542
        assert "FacialExpressions" in doc["profile"]["signature"]

    def test_unknown_state_404(self, client, seed_framework):
        resp = client.get("/v1/states/nostalgia")
        assert resp.status_code == 404
        assert resp.json()["code"] == "unknown-state"
        assert resp.headers["X-Framework-Hash"] == seed_framework.document_hash()

    def test_cue_detail(self, client):
        resp = client.get("/v1/cues/scratching head")
        assert resp.status_code == 200
        assert resp.json()["actionability"] == "HighlyActionable"

    def test_pairs(self, client):
        resp = client.get("/v1/pairs", params={"a": "confusion", "b": "frustration"})
        assert resp.status_code == 200
        doc = resp.json()
        assert len(doc["shared_cues"]) >= 3

    def test_powerlaw(self, client):
        resp = client.get("/v1/powerlaw")
        assert resp.status_code == 200
        assert resp.json()["fit"]["alpha"] > 1.01


class TestHttpInfer:
    def test_infer_matches_cli(self, client, framework_file):
        body = {"observed": ["furrowed brow", "forward lean", "head nodding"]}
        resp = client.post("/v1/infer", json=body)
        assert resp.status_code == 200
        cli = run_cli(
            "infer", "--cues", "furrowed brow; forward lean; head nodding",
            "--framework", framework_file,
        )
        assert resp.json() == json.loads(cli.output)

    def test_no_known_cues_400(self, client):
        resp = client.post("/v1/infer", json={"observed": ["levitating"]})
        assert resp.status_code == 400
        assert resp.json()["code"] == "no-known-cues"

    def test_bad_min_tier_400(self, client):
        resp = client.post(
            "/v1/infer", json={"observed": ["furrowed brow"], "min_tier": "R9"}
        )
        assert resp.status_code == 400
        assert resp.json()["code"] == "bad-min-tier"

    def test_inconsistent_observation_409(self, client):
        resp = client.post(
            "/v1/infer", json={"observed": ["smile"], "absent": ["smile"]}
        )
        assert resp.status_code == 409
        assert resp.json()["code"] == "inconsistent-observation"


class TestHttpSessions:
    def test_full_session_flow(self, client, seed_framework):
        created = client.post("/v1/sessions")
        assert created.status_code == 201
        sid = created.json()["session_id"]

        first = client.post(
            f"/v1/sessions/{sid}/observations", json={"observed": ["furrowed brow"]}
        )
        assert first.status_code == 200
        assert first.json()["candidates"][0]["state"] == "confusion"

        second = client.post(
            f"/v1/sessions/{sid}/observations", json={"observed": ["sighing"]}
        )
        assert second.json()["candidates"][0]["state"] == "frustration"

        state = client.get(f"/v1/sessions/{sid}")
        doc = state.json()
        assert doc["observed"] == ["au4 brow lowerer", "sighing / deep sighing"]
        assert len(doc["snapshots"]) == 2
        assert doc["framework_hash"] == seed_framework.document_hash()

    def test_unknown_session_404(self, client):
        resp = client.get("/v1/sessions/doesnotexist")
        assert resp.status_code == 404
        assert resp.json()["code"] == "unknown-session"

    def test_session_replayable_via_cli(self, client, framework_file, tmp_path):
        created = client.post("/v1/sessions")
        sid = created.json()["session_id"]
        deltas = [
            {"observed": ["furrowed brow"], "absent": []},
            {"observed": ["scratching head"], "absent": ["sighing"]},
        ]
        for d in deltas:
            client.post(f"/v1/sessions/{sid}/observations", json=d)
        final = client.get(f"/v1/sessions/{sid}").json()["snapshots"][-1]

        session_file = tmp_path / "exported.json"
        session_file.write_text(json.dumps({"deltas": deltas}))
        result = run_cli(
            "session", "replay", str(session_file), "--framework", framework_file
        )
        assert result.exit_code == 0
        assert json.loads(result.output) == final
