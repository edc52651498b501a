#!/usr/bin/env python3
"""Generate the bundled seed corpus (src/nvsyn/data/seed_corpus.jsonl).

The seed expands a curated table of (state, cue, channel, paper-count)
relationships into one JSONL row per supporting paper, using disjoint
per-state synthetic paper pools assigned cyclically so that each state's
distinct-paper count hits its target exactly. Filler cues (single-study
and a block of 3-paper replicated ones per state) pad each state out to its
target cue and channel totals. Running the script twice produces
byte-identical output.
"""

from __future__ import annotations

import json
import zlib
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "nvsyn" / "data" / "seed_corpus.jsonl"

F = "FacialExpressions"
E = "EyeMovements"
B = "BodyPosture"
BE = "Behavioral"
V = "VoiceParalinguistic"
H = "HeadMovements"
G = "HandArmGestures"
P = "Physiology"
M = "Multimodal"

ALL9 = [F, E, B, BE, V, H, G, P, M]
NO_MM = [F, E, B, BE, V, H, G, P]

# Raw-label variants cycled across a relationship's rows; each normalizes
# to the same canonical cue.
VARIANTS = {
    "au4 brow lowerer": ["AU4", "furrowed brow", "brow lowerer", "AU4 brow lowerer"],
    "au7 lid tightener": ["AU7", "lid tightener", "au7 lid tightener"],
    "au12 lip corner puller": ["AU12", "lip corner puller", "au12 lip corner puller"],
    "au1 inner brow raiser": ["AU1", "inner brow raiser", "au1 inner brow raiser"],
    "au23 lip tightener": ["AU23", "lip tightener", "au23 lip tightener"],
    "forward lean": ["forward lean", "leaning forward", "leaning toward screen"],
    "repeated fixation on same elements": [
        "repeated fixation on same elements",
        "repeated fixation",
        "repeated looks at the same interface element",
    ],
    "sighing / deep sighing": ["sighing", "deep sighing", "sighing / deep sighing"],
    "head nodding": ["head nodding", "head nod", "nodding"],
    "head shake": ["head shake", "head shake (negative)"],
    "clenched jaw / raised voice": ["raised voice", "clenched jaw"],
    "self-touch": ["self-touch", "increased self-touch"],
    "verbal: \"i don't understand\"": ["verbal: \"i don't understand\"", "i don't understand"],
    "verbal: \"why didn't it work?\"": ["verbal: \"why didn't it work?\"", "why didn't it work?"],
    "verbal: \"this is stupid\"": ["verbal: \"this is stupid\"", "this is stupid"],
    "verbal: \"this is boring\"": ["verbal: \"this is boring\"", "this is boring"],
    "neutral/flat expression": ["neutral/flat expression", "neutral expression", "flat expression"],
    "gaze toward material": ["gaze toward material", "gaze fixed on material"],
}

STATE_VARIANTS = {
    "engagement": ["engagement", "engaged concentration", "flow", "student engagement"],
    "confusion": ["confusion", "confused"],
    "frustration": ["frustration", "frustrated"],
    "boredom": ["boredom", "bored"],
    "affective states (general)": ["affective states (general)", "affective state", "affect"],
    "happiness": ["happiness", "happy"],
}

# state -> (paper target or None, cue total or None, allowed channels,
#           named cues, replicated-filler count, exact channel filler totals or None)
# Named cue: (canonical label, channel, papers).
SPEC = {
    "confusion": dict(
        papers=292,
        cue_total=542,
        channels=NO_MM,
        named=[
            ("au4 brow lowerer", F, 35),
            ("au7 lid tightener", F, 14),
            ("au12 lip corner puller", F, 11),
            ("frown", F, 8),
            ("au1 inner brow raiser", F, 7),
            ("tightened jaw", F, 1),
            ("au23 lip tightener", F, 1),
            ("repeated fixation on same elements", E, 6),
            ("increased blink rate", E, 4),
            ("gaze toward material", E, 3),
            ("reduced eye contact", E, 3),
            ("looking at classmate's work", E, 3),
            ("gaze away from task", E, 1),
            ("head tilt (questioning)", H, 4),
            ("head shake", H, 3),
            ("forward lean", B, 3),
            ("stillness/pause", B, 3),
            ("scratching head", G, 5),
            ("self-touch", G, 3),
            ("hand to chin", G, 3),
            ("verbal: \"i don't understand\"", V, 4),
            ("questioning intonation", V, 3),
            ("verbal: \"why didn't it work?\"", V, 3),
        ],
        replicated=14,
        channel_totals={F: 168, E: 88, B: 72, V: 45, BE: 74, H: 42, G: 35, P: 18},
    ),
    "frustration": dict(
        papers=261,
        cue_total=401,
        channels=ALL9,
        named=[
            ("au4 brow lowerer", F, 15),
            ("frown", F, 12),
            ("tightened jaw", F, 8),
            ("au23 lip tightener", F, 6),
            ("gaze away from task", E, 7),
            ("eye rolling", E, 3),
            ("reduced eye contact", E, 3),
            ("increased blink rate", E, 3),
            ("head shake", H, 4),
            ("head drop", H, 3),
            ("tense posture", B, 5),
            ("restlessness", B, 4),
            ("leaning back", B, 3),
            ("banging on keyboard", G, 5),
            ("pulling hair", G, 4),
            ("banging on mouse", G, 4),
            ("clenched fists", G, 3),
            ("sighing / deep sighing", V, 6),
            ("clenched jaw / raised voice", V, 4),
            ("groaning", V, 3),
            ("verbal: \"this is stupid\"", V, 3),
        ],
        replicated=12,
    ),
    "engagement": dict(
        papers=471,
        cue_total=1307,
        channels=ALL9,
        named=[
            ("smile", F, 18),
            ("au4 brow lowerer", F, 13),
            ("raised eyebrows (interest)", F, 9),
            ("attentive expression", F, 7),
            ("eye contact with material", E, 12),
            ("focused gaze", E, 10),
            ("reduced blinking", E, 6),
            ("head nodding", H, 16),
            ("upright head position", H, 5),
            ("head orientation toward task", H, 4),
            ("forward lean", B, 9),
            ("upright posture", B, 7),
            ("oriented toward task", B, 6),
            ("taking notes", G, 8),
            ("hand raising", G, 6),
            ("gesturing while explaining", G, 4),
            ("asking questions", G, 3),
            ("active verbal participation", V, 8),
            ("questions", V, 5),
            ("discussion", V, 4),
        ],
        replicated=61,
    ),
    "attention": dict(
        papers=281,
        cue_total=500,
        channels=ALL9,
        named=[
            ("eye gaze", E, 120),
            ("head pose", H, 100),
            ("fixation", E, 83),
            ("blink", E, 43),
            ("leaning backward", B, 6),
            ("head nodding", H, 4),
            ("forward lean", B, 3),
            ("supporting head", H, 3),
            ("passive gaze", E, 3),
        ],
        replicated=24,
    ),
    "boredom": dict(
        papers=242,
        cue_total=335,
        channels=NO_MM,
        named=[
            ("neutral/flat expression", F, 12),
            ("yawning", F, 8),
            ("drooping eyelids", F, 5),
            ("gaze wandering away", E, 9),
            ("looking at clock/door", E, 4),
            ("reduced fixation", E, 4),
            ("head resting on hand/palm", H, 4),
            ("head propping", H, 3),
            ("slouching", B, 10),
            ("slumped posture", B, 6),
            ("resting chin on palm", B, 4),
            ("decreased activity", BE, 4),
            ("fidgeting", G, 7),
            ("doodling", G, 3),
            ("playing with objects", G, 3),
            ("verbal: \"this is boring\"", V, 4),
            ("monotone voice", V, 3),
        ],
        replicated=13,
    ),
    "affective states (general)": dict(
        papers=360,
        cue_total=606,
        channels=ALL9,
        named=[
            ("body posture", B, 150),
            ("voice", V, 123),
            ("gestures", G, 100),
            ("head pose", H, 71),
            ("eye gaze", E, 69),
            ("speech", V, 68),
            ("eeg", P, 67),
            ("skin conductance", P, 60),
            ("facial expressions", F, 50),
            ("heart rate", P, 50),
            ("pitch", V, 46),
            ("head tilt", H, 17),
        ],
        replicated=33,
    ),
    "learning": dict(
        papers=199,
        cue_total=406,
        channels=ALL9,
        named=[
            ("body posture", B, 101),
            ("speech", V, 80),
            ("pointing", G, 70),
            ("gestures", G, 56),
            ("blink", E, 40),
            ("head nodding", H, 35),
            ("hand raising", G, 8),
        ],
        replicated=21,
    ),
    "happiness": dict(
        papers=202,
        cue_total=134,
        channels=ALL9,
        named=[
            ("smile", F, 90),
            ("laughter", V, 12),
            ("au12 lip corner puller", F, 10),
        ],
        replicated=12,
    ),
    "surprise": dict(
        papers=150,
        cue_total=100,
        channels=NO_MM,
        named=[("head tilt", H, 20)],
        replicated=10,
    ),
    "anger": dict(
        papers=148,
        cue_total=116,
        channels=ALL9,
        named=[
            ("frown", F, 25),
            ("skin conductance", P, 55),
            ("heart rate", P, 48),
        ],
        replicated=9,
    ),
    # Small auxiliary states used by the diagnostic scenarios.
    "delight": dict(
        papers=None,
        cue_total=None,
        channels=ALL9,
        named=[("smile", F, 17), ("laughing", V, 5)],
        replicated=0,
    ),
    "concentration": dict(
        papers=None,
        cue_total=None,
        channels=ALL9,
        named=[("au4 brow lowerer", F, 6)],
        replicated=0,
    ),
    "interest": dict(
        papers=None,
        cue_total=None,
        channels=ALL9,
        named=[("forward lean", B, 8)],
        replicated=0,
    ),
    "fatigue": dict(
        papers=None,
        cue_total=None,
        channels=ALL9,
        named=[
            ("yawning", F, 3),
            ("decreased activity", BE, 3),
            ("eye rubbing", G, 3),
            ("stretching", B, 3),
        ],
        replicated=0,
    ),
}

CHANNEL_WORD = {
    F: "facial",
    E: "eye",
    B: "posture",
    BE: "activity",
    V: "vocal",
    H: "head",
    G: "gesture",
    P: "physiological",
    M: "multimodal",
}


def slug(state: str) -> str:
    return "".join(ch for ch in state if ch.isalnum() or ch == " ").replace(" ", "-")


def paper_year(paper_id: str) -> int:
    return 1985 + zlib.crc32(paper_id.encode()) % 40


def build_state_rows(state: str, cfg: dict) -> list[dict]:
    named = list(cfg["named"])
    channels = cfg["channels"]
    relationships: list[tuple[str, str, int]] = [(c, ch, n) for c, ch, n in named]

    # Replicated (3-paper) fillers live in the Behavioral channel so they
    # never perturb the observable-channel profile rows.
    for i in range(cfg["replicated"]):
        relationships.append((f"{state} interaction pattern {i + 1:02d}", BE, 3))

    # Single-study fillers pad out the cue and channel totals.
    if cfg["cue_total"] is not None:
        need = cfg["cue_total"] - len(relationships)
        if cfg.get("channel_totals"):
            counts = {ch: 0 for ch in channels}
            for _, ch, _ in relationships:
                counts[ch] += 1
            fill_plan = []
            for ch in channels:
                fill_plan.extend([ch] * (cfg["channel_totals"][ch] - counts[ch]))
            assert len(fill_plan) == need, (state, len(fill_plan), need)
        else:
            fill_plan = [channels[i % len(channels)] for i in range(need)]
        seq = {ch: 0 for ch in channels}
        for ch in fill_plan:
            seq[ch] += 1
            relationships.append((f"{state} {CHANNEL_WORD[ch]} pattern {seq[ch]:03d}", ch, 1))

    total = sum(n for _, _, n in relationships)
    papers = cfg["papers"] if cfg["papers"] is not None else total
    # Bump single-study fillers to two papers until the paper pool is
    # covered by the cyclic assignment below.
    deficit = papers - total
    for i in range(len(relationships)):
        if deficit <= 0:
            break
        cue, ch, n = relationships[i]
        if n == 1:
            relationships[i] = (cue, ch, 2)
            deficit -= 1
    assert sum(n for _, _, n in relationships) >= papers, state

    pool = [f"seed-{slug(state)}-{i + 1:04d}" for i in range(papers)]
    rows = []
    counter = 0
    for cue, ch, n in relationships:
        assert n <= len(pool), (state, cue, n)
        variants = VARIANTS.get(cue, [cue])
        svariants = STATE_VARIANTS.get(state, [state])
        for j in range(n):
            pid = pool[(counter + j) % len(pool)]
            rows.append(
                {
                    "paper_id": pid,
                    "year": paper_year(pid),
                    "raw_state": svariants[j % len(svariants)],
                    "raw_cue": variants[j % len(variants)],
                    "channel": ch,
                }
            )
        counter += n
    return rows


def main() -> None:
    all_rows = []
    for state, cfg in SPEC.items():
        all_rows.extend(build_state_rows(state, cfg))

    # A few out-of-scope rows exercising the exclusion patterns; they reuse
    # already-assigned papers so no state's paper count shifts.
    for i, raw_cue in enumerate(
        ["BERT embedding of answer", "essay text features", "word count of answer"]
    ):
        pid = f"seed-{slug('affective states (general)')}-{i + 1:04d}"
        all_rows.append(
            {
                "paper_id": pid,
                "year": paper_year(pid),
                "raw_state": "affective states (general)",
                "raw_cue": raw_cue,
                "channel": BE,
            }
        )

    OUT.parent.mkdir(parents=True, exist_ok=True)
    with open(OUT, "w", encoding="utf-8") as fh:
        for row in all_rows:
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")
    print(f"wrote {len(all_rows)} rows to {OUT}")


if __name__ == "__main__":
    main()
