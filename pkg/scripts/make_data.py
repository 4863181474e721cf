"""Regenerate the bundled lexicons, synonym table and corpora under src/frc/data.

The outputs are committed; rerunning this script with the same seed rewrites
them byte for byte.
"""

import json
import random
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "frc" / "data"
SEED = 7

POSITIVE = {
    "good": 0.6, "nice": 0.55, "decent": 0.52,
    "great": 0.8, "excellent": 0.86, "wonderful": 0.9,
    "amazing": 0.9, "fantastic": 0.95, "awesome": 0.86,
    "tasty": 0.7, "delicious": 0.78, "flavorful": 0.68,
    "friendly": 0.6, "pleasant": 0.54, "welcoming": 0.64,
    "helpful": 0.6, "attentive": 0.66,
    "fast": 0.5, "quick": 0.46, "prompt": 0.42,
    "clean": 0.5, "tidy": 0.44, "spotless": 0.52,
    "cheap": 0.4, "affordable": 0.46,
    "fresh": 0.6, "crisp": 0.54,
    "cozy": 0.55, "comfortable": 0.6,
    "love": 0.8, "adore": 0.88,
    "like": 0.5, "enjoy": 0.56,
    "happy": 0.7, "pleased": 0.64, "glad": 0.66,
    "acceptable": 0.4, "okay": 0.34, "fine": 0.38,
}
NEGATIVE = {
    "bad": 0.6, "poor": 0.56, "lousy": 0.64,
    "awful": 0.85, "terrible": 0.9, "horrible": 0.92, "dreadful": 0.86,
    "disappointing": 0.7, "underwhelming": 0.62,
    "disappointed": 0.7, "dissatisfied": 0.64, "unhappy": 0.66,
    "slow": 0.5, "sluggish": 0.56,
    "dirty": 0.6, "grubby": 0.54,
    "rude": 0.7, "impolite": 0.64, "unfriendly": 0.6,
    "bland": 0.5, "tasteless": 0.56,
    "stale": 0.55, "soggy": 0.49,
    "expensive": 0.4, "pricey": 0.44, "overpriced": 0.48,
    "noisy": 0.45, "loud": 0.4,
    "cold": 0.4, "lukewarm": 0.36,
    "hate": 0.85, "detest": 0.9,
    "dislike": 0.6,
    "cramped": 0.5, "crowded": 0.44,
}
# words the student lexicon lacks; the teacher knows them
RARE_POSITIVE = {"scrumptious": 0.8, "impeccable": 0.85, "mouthwatering": 0.8, "superlative": 0.85}
RARE_NEGATIVE = {"inedible": 0.85, "grimy": 0.7, "overcooked": 0.65, "abysmal": 0.9}

MODIFIERS = {
    "very": 1.5, "really": 1.5, "so": 1.3, "quite": 1.2, "extremely": 1.8, "incredibly": 1.8,
    "slightly": 0.5, "a little": 0.5, "somewhat": 0.7, "rather": 0.7, "fairly": 0.9,
    "非常": 1.8, "很": 1.5, "特别": 1.5, "有点": 0.6, "稍微": 0.6,
}
NEGATORS = ["not", "never", "no", "wasn't", "isn't", "didn't", "don't", "不", "没", "没有"]

ZH = {
    "好吃": {"positive": 0.7}, "美味": {"positive": 0.78}, "可口": {"positive": 0.66},
    "满意": {"positive": 0.7}, "开心": {"positive": 0.66}, "高兴": {"positive": 0.64},
    "热情": {"positive": 0.6}, "周到": {"positive": 0.66},
    "干净": {"positive": 0.5}, "整洁": {"positive": 0.44},
    "便宜": {"positive": 0.4}, "实惠": {"positive": 0.46},
    "难吃": {"negative": 0.8}, "糟糕": {"negative": 0.74},
    "失望": {"negative": 0.7}, "不满": {"negative": 0.64},
    "冷淡": {"negative": 0.6}, "敷衍": {"negative": 0.66},
    "脏": {"negative": 0.6}, "乱": {"negative": 0.5},
    "贵": {"negative": 0.4}, "慢": {"negative": 0.5},
}

SENTIMENT_GROUPS = [
    ["good", "nice", "decent"], ["great", "excellent", "wonderful"],
    ["amazing", "fantastic", "awesome"], ["tasty", "delicious", "flavorful"],
    ["friendly", "pleasant", "welcoming"], ["helpful", "attentive"],
    ["fast", "quick", "prompt"], ["clean", "tidy", "spotless"], ["cheap", "affordable"],
    ["fresh", "crisp"], ["cozy", "comfortable"], ["love", "adore"], ["like", "enjoy"],
    ["happy", "pleased", "glad"], ["acceptable", "okay", "fine"],
    ["bad", "poor", "lousy"], ["awful", "terrible", "horrible", "dreadful"],
    ["disappointing", "underwhelming"], ["disappointed", "dissatisfied", "unhappy"],
    ["slow", "sluggish"], ["dirty", "grubby"], ["rude", "impolite", "unfriendly"],
    ["bland", "tasteless"], ["stale", "soggy"], ["expensive", "pricey", "overpriced"],
    ["noisy", "loud"], ["cold", "lukewarm"], ["hate", "detest"], ["cramped", "crowded"],
    ["very", "really"], ["extremely", "incredibly"], ["slightly", "a little"],
    ["somewhat", "rather"],
    ["好吃", "美味", "可口"], ["满意", "开心", "高兴"], ["热情", "周到"], ["干净", "整洁"],
    ["便宜", "实惠"], ["难吃", "糟糕"], ["失望", "不满"], ["冷淡", "敷衍"],
    ["很", "特别"], ["有点", "稍微"],
]
NEUTRAL_GROUPS = [
    ["food", "meal"], ["dish", "plate"], ["service", "staff"], ["restaurant", "place"],
    ["waiter", "server"], ["room", "suite"], ["price", "cost"], ["delivery", "shipping"],
    ["hotel", "inn"], ["was", "seemed"], ["were", "seemed"], ["the", "this"], ["overall", "all in all"],
    ["菜", "菜品"], ["服务", "服务员"], ["房间", "客房"], ["价格", "价钱"], ["这家店", "这个店"],
]

GENERAL_POS = ["good", "nice", "great", "excellent", "amazing", "wonderful"]
GENERAL_NEG = ["bad", "poor", "awful", "terrible", "horrible", "disappointing", "lousy"]
ASPECTS = {
    "food": (["tasty", "delicious", "fresh"], ["bland", "stale", "cold"]),
    "meal": (["tasty", "delicious"], ["bland", "cold"]),
    "soup": (["tasty", "fresh"], ["bland", "cold"]),
    "bread": (["fresh", "tasty"], ["stale"]),
    "coffee": (["fresh", "tasty"], ["bland", "cold"]),
    "service": (["friendly", "fast", "helpful"], ["slow", "rude"]),
    "staff": (["friendly", "helpful"], ["rude"]),
    "waiter": (["friendly", "helpful"], ["rude", "slow"]),
    "delivery": (["fast"], ["slow"]),
    "room": (["clean", "cozy"], ["dirty", "cramped", "noisy"]),
    "hotel": (["clean", "cozy"], ["dirty", "noisy"]),
    "place": (["cozy", "clean", "pleasant"], ["noisy", "dirty", "cramped"]),
    "price": (["cheap"], ["expensive"]),
    "view": (["pleasant"], []),
    "bed": (["comfortable"], ["cramped"]),
}
NOUNS = list(ASPECTS)
POS_ADJ = GENERAL_POS
NEG_ADJ = GENERAL_NEG
MODS = ["very", "really", "extremely", "slightly", "somewhat", "quite"]


def lexicon(rare: bool) -> dict:
    entries = {w: {"positive": v} for w, v in POSITIVE.items()}
    entries.update({w: {"negative": v} for w, v in NEGATIVE.items()})
    entries.update(ZH)
    if rare:
        entries.update({w: {"positive": v} for w, v in RARE_POSITIVE.items()})
        entries.update({w: {"negative": v} for w, v in RARE_NEGATIVE.items()})
    return {"entries": dict(sorted(entries.items())), "modifiers": MODIFIERS,
            "negators": NEGATORS}


def adj_phrase(rng, adj):
    r = rng.random()
    if r < 0.35:
        return f"{rng.choice(MODS)} {adj}"
    return adj


def clause(rng, polarity, negate=False):
    noun = rng.choice(NOUNS)
    pos, neg = ASPECTS[noun]
    specific = pos if polarity == "positive" else neg
    general = GENERAL_POS if polarity == "positive" else GENERAL_NEG
    adj = rng.choice(specific if specific and rng.random() < 0.6 else general)
    verb = "was"
    if negate:
        return f"the {noun} {verb} not {adj}"
    return f"the {noun} {verb} {adj_phrase(rng, adj)}"


def flip(label):
    return "negative" if label == "positive" else "positive"


def english_record(rng):
    kind = rng.choice(["single", "single", "neg", "pair", "contrast", "concessive", "triple",
                       "verb", "however"])
    p = rng.choice(["positive", "negative"])
    if kind == "single":
        text = clause(rng, p)
    elif kind == "neg":
        text = clause(rng, flip(p), negate=True)
    elif kind == "pair":
        text = f"{clause(rng, p)}, and {clause(rng, p)}"
    elif kind == "contrast":
        text = f"{clause(rng, flip(p))} but {clause(rng, p)}"
    elif kind == "however":
        text = f"{clause(rng, flip(p))}; however {clause(rng, p)}"
    elif kind == "concessive":
        text = f"though {clause(rng, flip(p))}, {clause(rng, p)}"
    elif kind == "triple":
        text = f"{clause(rng, p)}, {clause(rng, p)}, and the {rng.choice(NOUNS)} was {rng.choice(['okay', 'fine', 'acceptable'] if p == 'positive' else ['slow', 'cold', 'noisy'])}"
    else:
        verb = rng.choice(["love", "like", "enjoy"] if p == "positive" else ["hate", "dislike"])
        text = f"I {verb} this {rng.choice(['place', 'restaurant', 'hotel', 'cafe'])}, {clause(rng, p)}"
    text = text[0].upper() + text[1:] + rng.choice([".", ".", "!"])
    return text, p


ZH_ASPECTS = {
    "菜": (["好吃", "美味"], ["难吃"]),
    "服务": (["热情", "周到"], ["冷淡", "敷衍", "慢"]),
    "房间": (["干净", "整洁"], ["脏", "乱"]),
    "价格": (["便宜", "实惠"], ["贵"]),
    "我": (["满意", "开心"], ["失望", "不满"]),
}
ZH_MODS = ["很", "非常", "有点", ""]


def chinese_record(rng):
    p = rng.choice(["positive", "negative"])
    def part(pol):
        noun = rng.choice(list(ZH_ASPECTS))
        return noun + rng.choice(ZH_MODS) + rng.choice(ZH_ASPECTS[noun][0 if pol == "positive" else 1])
    kind = rng.choice(["single", "pair", "contrast"])
    if kind == "single":
        text = part(p)
    elif kind == "pair":
        text = f"{part(p)}，{part(p)}"
    else:
        text = f"{part(flip(p))}，但是{part(p)}"
    return text + "。", p


def corpus(rng, n_en, n_zh, prefix):
    rows, seen = [], set()
    while len(rows) < n_en + n_zh:
        zh = len(rows) >= n_en
        text, label = chinese_record(rng) if zh else english_record(rng)
        if text in seen:
            continue
        seen.add(text)
        rows.append({"id": f"{prefix}{len(rows):04d}", "text": text, "label": label,
                     "lang": "zh" if zh else "en"})
    return rows


def conflict(rng):
    strong_pos = ["amazing", "fantastic", "wonderful", "excellent", "awesome"]
    strong_neg = ["terrible", "horrible", "awful", "dreadful"]
    rows = []
    for i in range(30):
        a, b = rng.sample(["food", "service", "room", "view", "staff", "location", "coffee"], 2)
        pos, neg = rng.choice(strong_pos), rng.choice(strong_neg)
        if i % 2:
            text = f"The {a} was {pos} but the {b} was {neg}."
        else:
            text = f"The {a} was {neg} but the {b} was {pos}."
        rows.append({"id": f"c{i:04d}", "text": text, "label": "negative" if i % 2 else "positive",
                     "lang": "en"})
    return rows


def transfer(rng):
    rows = []
    rare = [(w, "positive") for w in RARE_POSITIVE] + [(w, "negative") for w in RARE_NEGATIVE]
    for i in range(40):
        w, label = rare[i % len(rare)]
        noun = rng.choice(["room", "bathroom"] if w == "grimy" else
                          ["service", "staff"] if w in ("impeccable", "abysmal", "superlative") else
                          ["food", "meal", "soup", "dish"])
        if i % 4 == 3:
            other = rng.choice(["bad", "poor"] if label == "positive" else ["good", "nice"])
            text = f"The {rng.choice(['view', 'price', 'music'])} was {other} but the {noun} was {w}."
        elif i % 4 == 2:
            text = f"Honestly the {noun} was {w}."
        else:
            text = f"The {noun} was {w}."
        rows.append({"id": f"t{i:04d}", "text": text, "label": label, "lang": "en"})
    return rows


def synonyms():
    table = {}
    for group in SENTIMENT_GROUPS + NEUTRAL_GROUPS:
        for w in group:
            table.setdefault(w, [])
            table[w] += [x for x in group if x != w and x not in table[w]]
    return dict(sorted(table.items()))


def dump_jsonl(path, rows):
    path.write_text("".join(json.dumps(r, ensure_ascii=False) + "\n" for r in rows), encoding="utf-8")


def dump_json(path, obj):
    path.write_text(json.dumps(obj, ensure_ascii=False, indent=1) + "\n", encoding="utf-8")


def main():
    rng = random.Random(SEED)
    OUT.mkdir(parents=True, exist_ok=True)
    dump_json(OUT / "lexicon.json", lexicon(rare=True))
    dump_json(OUT / "student_lexicon.json", lexicon(rare=False))
    dump_json(OUT / "synonyms.json", synonyms())
    dump_jsonl(OUT / "corpus.jsonl", corpus(rng, 380, 60, "r"))
    dump_jsonl(OUT / "conflict.jsonl", conflict(rng))
    dump_jsonl(OUT / "transfer.jsonl", transfer(rng))


if __name__ == "__main__":
    main()
