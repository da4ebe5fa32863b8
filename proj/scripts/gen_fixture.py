#!/usr/bin/env python3
"""Regenerate the synthetic test fixtures in tests/data/.

Everything is drawn from a fixed seed, so rerunning leaves the files
byte-identical. After changing this script, refresh the golden outputs with
scripts/update_golden.sh.
"""

import json
import random
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
OUT = ROOT / "tests" / "data"
SEED = 20240611
N_INSTANCES = 5000

CITIES = [
    # name, country, BPM rate, share of BPMs preceded by "my"
    ("Springfield", "US", 0.07, 0.35),
    ("Riverton", "US", 0.10, 0.42),
    ("Lakeside", "US", 0.13, 0.50),
    ("Northbridge", "CA", 0.16, 0.55),
    ("Eastport", "UK", 0.19, 0.60),
]

# Frequent types dominate, the way "my head" and "my heart" do in real text.
BODY_PARTS = (
    ["head"] * 30 + ["heart"] * 24 + ["face"] * 18 + ["eyes"] * 16 + ["hands"] * 12
    + ["back"] * 12 + ["stomach"] * 10 + ["feet"] * 8 + ["neck"] * 7 + ["hair"] * 7
    + ["arm", "arms", "legs", "leg", "knee", "shoulder", "teeth", "throat", "chest",
       "skin", "fingers", "nose", "lips", "ears", "brain", "tummy", "vertebrae", "liver"]
)

EMOTION_WORDS = {
    "hurt": ["sadness", "fear", "anger"],
    "ache": ["sadness"],
    "pain": ["fear", "sadness"],
    "sore": ["sadness", "anger"],
    "love": ["joy", "trust"],
    "happy": ["joy", "anticipation", "trust"],
    "smile": ["joy", "surprise"],
    "scared": ["fear"],
    "afraid": ["fear"],
    "nervous": ["fear", "anticipation"],
    "angry": ["anger", "disgust"],
    "hate": ["anger", "disgust", "fear", "sadness"],
    "gross": ["disgust"],
    "sick": ["disgust", "sadness"],
    "wow": ["surprise"],
    "sudden": ["surprise", "fear"],
    "trust": ["trust"],
    "hope": ["anticipation", "joy", "trust"],
    "tomorrow": ["anticipation"],
    "cry": ["sadness"],
    "lonely": ["sadness"],
    "beautiful": ["joy"],
    "warm": ["joy", "trust"],
    "calm": ["trust"],
    "tired": ["sadness"],
}
NEUTRAL_LEXICON_WORDS = ["table", "bus", "coffee", "window", "street", "paper"]

VAD = {
    "hurt": (0.10, 0.75, 0.30), "ache": (0.15, 0.55, 0.35), "pain": (0.08, 0.80, 0.25),
    "sore": (0.20, 0.50, 0.40), "love": (0.95, 0.70, 0.60), "happy": (0.96, 0.72, 0.70),
    "smile": (0.90, 0.55, 0.65), "scared": (0.10, 0.85, 0.20), "afraid": (0.12, 0.80, 0.22),
    "nervous": (0.25, 0.82, 0.28), "angry": (0.12, 0.90, 0.55), "hate": (0.05, 0.85, 0.50),
    "gross": (0.15, 0.60, 0.45), "sick": (0.12, 0.45, 0.25), "wow": (0.80, 0.85, 0.55),
    "calm": (0.75, 0.10, 0.60), "tired": (0.30, 0.15, 0.30), "lonely": (0.10, 0.30, 0.20),
    "beautiful": (0.92, 0.60, 0.60), "warm": (0.80, 0.40, 0.55), "table": (0.50, 0.20, 0.45),
    "coffee": (0.70, 0.55, 0.50), "street": (0.50, 0.45, 0.50), "quiet": (0.60, 0.12, 0.50),
    "storm": (0.25, 0.80, 0.30), "morning": (0.65, 0.35, 0.55),
    "head": (0.50, 0.45, 0.60), "heart": (0.80, 0.55, 0.50), "face": (0.55, 0.40, 0.50),
    "eyes": (0.60, 0.40, 0.50), "hands": (0.55, 0.35, 0.55), "back": (0.45, 0.30, 0.50),
    "stomach": (0.40, 0.40, 0.40), "neck": (0.45, 0.35, 0.45), "hair": (0.60, 0.35, 0.50),
    "skin": (0.55, 0.40, 0.45), "brain": (0.60, 0.50, 0.70), "throat": (0.40, 0.45, 0.40),
    "blood": (0.20, 0.75, 0.35), "bone": (0.40, 0.40, 0.50), "tooth": (0.45, 0.35, 0.45),
}
EMOTION_BP_ENTRIES = {
    "heart": ["joy", "trust"], "blood": ["fear", "disgust"], "stomach": ["disgust"],
    "head": [], "face": [], "brain": ["trust"], "throat": ["fear"], "skin": [], "tooth": [],
}

FILLER = ("the a this that so just really today again still now after before with "
          "and but then was is it at on in for out up down all day night week "
          "work home train game movie music dinner lunch weather rain sun "
          "friend friends mom dad boss team class school office phone "
          "coffee street window quiet morning storm table paper bus").split()
PRONOUNS = ["my", "your", "his", "her", "their"]
EMO_KEYS = sorted(EMOTION_WORDS)


def sentence(rng, city_idx, month):
    """One tweet-sized sentence; returns (text, has_bpm)."""
    _, _, bpm_rate, my_share = CITIES[city_idx]
    # Mild seasonal trend: BPM rate falls away from April.
    rate = bpm_rate * (1.0 - 0.015 * ((month - 4) % 12))
    words = [rng.choice(FILLER) for _ in range(rng.randint(3, 16))]
    has_bpm = rng.random() < rate
    if has_bpm:
        part = rng.choice(BODY_PARTS)
        roll = rng.random()
        if roll < my_share:
            pron = "my"
        elif roll < my_share + 0.25:
            pron = rng.choice(PRONOUNS[1:])
        else:
            pron = rng.choice(["the", "a", "of", "with"])
        pos = rng.randint(0, len(words))
        words[pos:pos] = [pron, part]
        # BPM text carries more affect.
        n_emo = rng.choice([0, 1, 1, 2, 2, 3])
    else:
        n_emo = rng.choice([0, 0, 0, 1, 1, 2])
    for _ in range(n_emo):
        words.insert(rng.randint(0, len(words)), rng.choice(EMO_KEYS))
    if rng.random() < 0.15:
        words.insert(0, "#" + rng.choice(FILLER))
    if rng.random() < 0.1:
        words.append("@" + rng.choice(["sam", "alex", "jo"]))
    text = " ".join(words)
    if rng.random() < 0.3:
        text = text[0].upper() + text[1:]
    return text, has_bpm


def timestamp(rng):
    year = rng.choice([2019, 2020])
    month = rng.randint(1, 12)
    day = rng.randint(1, 28)
    zone = rng.choice(["Z", "Z", "Z", "+02:00", "-05:00"])
    return f"{year:04d}-{month:02d}-{day:02d}T{rng.randint(0, 23):02d}:{rng.randint(0, 59):02d}:00{zone}", month


def corpus(rng):
    lines = []
    produced = 0
    rec = 0
    while produced < N_INSTANCES:
        rec += 1
        city_idx = rng.randrange(len(CITIES))
        city, country, _, _ = CITIES[city_idx]
        ts, month = timestamp(rng)
        remaining = N_INSTANCES - produced
        if remaining >= 4 and rng.random() < 0.15:
            k = rng.randint(2, 4)
            parts = []
            for _ in range(k):
                text, _ = sentence(rng, city_idx, month)
                parts.append(text[0].upper() + text[1:] + rng.choice([".", "!", "?", "..."]))
            text = " ".join(parts)
            medium = "blog"
            produced += k
        else:
            text, _ = sentence(rng, city_idx, month)
            medium = "tweet"
            produced += 1
        record = {"id": f"r{rec:05d}", "text": text, "medium": medium, "timestamp": ts,
                  "city": city, "country": country}
        if rng.random() < 0.02:
            record["city"] = None
            record["country"] = None
        lines.append(json.dumps(record, ensure_ascii=False))
        if rec in (17, 1234, 3001):
            lines.append('{"id": "broken", "text": 42, "medium": "tweet"}')
            lines.append("not json at all")
    return "\n".join(lines) + "\n"


def emotion_lexicon():
    names = ["anger", "anticipation", "disgust", "fear", "joy", "sadness", "surprise", "trust"]
    rows = []
    entries = dict(EMOTION_WORDS)
    entries.update(EMOTION_BP_ENTRIES)
    for w in NEUTRAL_LEXICON_WORDS:
        entries[w] = []
    for word in sorted(entries):
        for e in names:
            rows.append(f"{word}\t{e}\t{1 if e in entries[word] else 0}")
        rows.append(f"{word}\tpositive\t0")
        rows.append(f"{word}\tnegative\t0")
    return "\n".join(rows) + "\n"


def vad_lexicon():
    rows = ["word\tvalence\tarousal\tdominance"]
    rows += [f"{w}\t{v:.3f}\t{a:.3f}\t{d:.3f}" for w, (v, a, d) in sorted(VAD.items())]
    return "\n".join(rows) + "\n"


def health(rng):
    rows = ["city,metric,value"]
    for i, (city, _, _, _) in enumerate(CITIES):
        # Physical distress rises with the BPM rate; life expectancy falls.
        rows.append(f"{city},frequent_physical_distress,{11.0 + 0.9 * i + rng.uniform(0, 0.3):.2f}")
        rows.append(f"{city},life_expectancy,{80.5 - 0.8 * i + rng.uniform(0, 0.3):.2f}")
        rows.append(f"{city},frequent_mental_distress,{rng.uniform(10, 16):.2f}")
        rows.append(f"{city},physical_inactivity,{rng.uniform(18, 30):.2f}")
    return "\n".join(rows) + "\n"


def ratings(rng):
    """Synthetic replica of a crowd rating file: 60 items, 6 emotions, 5-6 raters.

    Most (item, emotion) pairs are absent and raters agree closely, which puts
    split-half agreement in the range reported for the real annotations.
    """
    emotions = ["joy", "fear/anxiety", "sadness", "anger", "disgust", "trust"]
    rows = ["item_id,annotator_id,emotion,rating"]
    for item in range(60):
        raters = rng.sample([f"a{j:02d}" for j in range(20)], rng.choice([5, 6]))
        for emo in emotions:
            latent = 0.0 if rng.random() < 0.65 else rng.uniform(0.5, 4)
            for r in sorted(raters):
                score = min(4, max(0, round(latent + rng.gauss(0, 0.45))))
                rows.append(f"t{item:03d},{r},{emo},{score}")
    return "\n".join(rows) + "\n"


def main():
    rng = random.Random(SEED)
    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / "fixture_corpus.jsonl").write_text(corpus(rng), encoding="utf-8")
    (OUT / "emotion_lexicon.tsv").write_text(emotion_lexicon(), encoding="utf-8")
    (OUT / "vad_lexicon.tsv").write_text(vad_lexicon(), encoding="utf-8")
    (OUT / "health.csv").write_text(health(rng), encoding="utf-8")
    (OUT / "ratings.csv").write_text(ratings(rng), encoding="utf-8")


if __name__ == "__main__":
    main()
