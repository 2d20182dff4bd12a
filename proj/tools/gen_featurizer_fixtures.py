#!/usr/bin/env python3
"""Generates tests/data/featurizer_fixtures.json.

A pure-Python reference implements the extraction/vocabulary/vectorize
contract (word-boundary char n-grams over code points, df pruning, total
count cap with lexicographic tie-break). Where the contract coincides with
sklearn's char_wb analyzer — word lengths >= n_max-2 so the short-word
branch never fires, and no max_features pressure — the generator
cross-checks the reference against CountVectorizer and fails loudly on any
disagreement. Cap/tie and short-word cases are covered by the reference
alone, which follows the written contract. Expectations are then frozen.
"""

import json
import random
from collections import Counter
from pathlib import Path

from sklearn.feature_extraction.text import CountVectorizer


def extract(text, n_min, n_max):
    out = []
    for w in text.split(" "):
        if not w:
            continue
        p = " " + w + " "
        length = len(p)
        for n in range(n_min, n_max + 1):
            if length >= n:
                out.extend(p[i:i + n] for i in range(length - n + 1))
            else:
                out.append(p)
    return out


def build_vocab(corpus, n_min, n_max, min_df, max_features):
    df, cnt = Counter(), Counter()
    for doc in corpus:
        c = Counter(extract(doc, n_min, n_max))
        for t in c:
            df[t] += 1
        cnt.update(c)
    survivors = [t for t in cnt if df[t] >= min_df]
    if not survivors:
        return None
    if len(survivors) > max_features:
        survivors.sort(key=lambda t: (-cnt[t], t))
        survivors = survivors[:max_features]
    return sorted(survivors)


def vectorize_ref(text, terms, n_min, n_max):
    vocab = set(terms)
    present = sorted(set(g for g in extract(text, n_min, n_max) if g in vocab))
    return present


def sklearn_check(corpus, texts, n_min, n_max, min_df, ref_terms, ref_rows):
    cv = CountVectorizer(analyzer="char_wb", ngram_range=(n_min, n_max),
                         min_df=min_df, binary=True, lowercase=False)
    cv.fit(corpus)
    sk_terms = list(cv.get_feature_names_out())
    assert sk_terms == ref_terms, (
        f"vocab mismatch vs sklearn: {sk_terms[:8]} vs {ref_terms[:8]}")
    mat = cv.transform(texts).toarray()
    for row, ref in zip(mat, ref_rows):
        got = sorted(sk_terms[i] for i in range(len(sk_terms)) if row[i])
        assert got == ref, f"vectorize mismatch vs sklearn: {got} vs {ref}"


WORD_POOLS = [
    "prompt", "inject", "ignore", "previous", "instructions", "system",
    "override", "transcript", "密码重置流程", "تجاوز التعليمات", "سياسة",
    "инструкции", "обход", "αβγδε", "şifre", "données", "naïve",
    "exfiltrate", "payload", "sandbox",
]
SHORT_WORDS = ["a", "ab", "的", "不要", "え", "ok", "no", "北京"]


def random_text(rng, min_word_len, max_words=12):
    words = []
    for _ in range(rng.randint(0, max_words)):
        w = rng.choice(WORD_POOLS if min_word_len > 2 else WORD_POOLS + SHORT_WORDS)
        if len(w) < min_word_len:
            continue
        if rng.random() < 0.3:
            w = w[: rng.randint(min_word_len, max(min_word_len, len(w)))]
        if len(w) >= min_word_len:
            words.append(w)
    return " ".join(words)


def main():
    rng = random.Random(777)
    out = {"extraction": [], "vocab": [], "vectorize": []}

    # --- extraction cases ------------------------------------------------
    extraction_inputs = [
        ("sudo", 3, 3),
        ("", 3, 5),
        ("ab", 5, 5),
        ("ab", 3, 5),       # short-word branch fires for n=5 (and n=4 fits exactly)
        ("a", 1, 3),
        ("hello world", 3, 5),
        ("日本語 の 文", 2, 4),   # code point windows over multibyte text
        ("x", 10, 10),
        ("double  space", 3, 3),  # run of spaces: no empty word
        (" lead trail ", 3, 3),
        ("naïve café", 3, 4),
    ]
    for _ in range(40):
        n_min = rng.randint(1, 6)
        n_max = rng.randint(n_min, min(n_min + 4, 10))
        extraction_inputs.append((random_text(rng, 1), n_min, n_max))

    for text, n_min, n_max in extraction_inputs:
        grams = extract(text, n_min, n_max)
        multiset = sorted(Counter(grams).items())
        out["extraction"].append({
            "text": text, "n_min": n_min, "n_max": n_max,
            "expected": [[t, c] for t, c in multiset],
        })

    # spec-pinned literals
    assert sorted(extract("sudo", 3, 3)) == sorted([" su", "sud", "udo", "do "])
    assert extract("", 3, 5) == []
    assert extract("ab", 5, 5) == [" ab "]

    # --- vocabulary + vectorize cases ------------------------------------
    def add_vocab_case(corpus, cfg, texts, check_sklearn):
        n_min, n_max, min_df, max_features = cfg
        terms = build_vocab(corpus, n_min, n_max, min_df, max_features)
        case = {
            "corpus": corpus,
            "cfg": {"n_min": n_min, "n_max": n_max, "min_df": min_df,
                    "max_features": max_features},
        }
        if terms is None:
            case["error"] = "EmptyVocabulary"
            out["vocab"].append(case)
            return
        case["terms"] = terms
        out["vocab"].append(case)

        rows = [vectorize_ref(t, terms, n_min, n_max) for t in texts]
        out["vectorize"].append({
            "vocab_case": len(out["vocab"]) - 1,
            "texts": texts,
            "present_terms": rows,
        })
        if check_sklearn:
            sklearn_check(corpus, texts, n_min, n_max, min_df, terms, rows)

    # Batch A: sklearn-verified (word len >= n_max-2, no cap pressure).
    for _ in range(10):
        n_min = rng.randint(2, 4)
        n_max = rng.randint(n_min, min(n_min + 3, 6))
        min_df = rng.randint(1, 4)
        docs = [random_text(rng, max(1, n_max - 2)) or "fallback text"
                for _ in range(rng.randint(4, 18))]
        texts = [rng.choice(docs), random_text(rng, max(1, n_max - 2)) or "zq",
                 "completely novel zebra quills"]
        add_vocab_case(docs, (n_min, n_max, min_df, 1000000), texts, True)

    # Batch B: cap pressure, ties, short words — reference-only.
    #   single-char docs make " c " the only trigram, realizing exact counts
    docs_tie = ["a"] * 10 + ["b"] * 10 + ["c"] * 3
    add_vocab_case(docs_tie, (3, 3, 1, 2), ["a b", "c", "b c a"], False)
    docs_tie2 = ["a"] * 7 + ["b"] * 7 + ["c"] * 7
    add_vocab_case(docs_tie2, (3, 3, 1, 2), ["c a", "b"], False)
    # spec example: five identical docs at min_df=5
    add_vocab_case(["sudo"] * 5, (3, 3, 5, 15000), ["sudo", "su do"], False)
    # spec example: four identical docs fail min_df=5
    add_vocab_case(["sudo"] * 4, (3, 3, 5, 15000), [], False)
    # short words under a wide n range (whole-word multiplicity affects counts)
    docs_short = ["ab ab ab", "ab cd", "cd cd ef", "ef ab cd", "gh"]
    add_vocab_case(docs_short, (3, 6, 2, 6), ["ab", "ef gh", "zz"], False)
    for _ in range(6):
        n_min = rng.randint(1, 4)
        n_max = rng.randint(n_min, min(n_min + 4, 8))
        min_df = rng.randint(1, 3)
        cap = rng.randint(2, 12)
        docs = [random_text(rng, 1) or "pad" for _ in range(rng.randint(4, 14))]
        texts = [rng.choice(docs), random_text(rng, 1) or "qx"]
        add_vocab_case(docs, (n_min, n_max, min_df, cap), texts, False)

    path = Path(__file__).resolve().parent.parent / "tests" / "data" / "featurizer_fixtures.json"
    path.write_text(json.dumps(out, ensure_ascii=True, indent=1, sort_keys=True) + "\n",
                    encoding="utf-8")
    n_ext, n_voc, n_vec = len(out["extraction"]), len(out["vocab"]), len(out["vectorize"])
    print(f"wrote {n_ext} extraction, {n_voc} vocab, {n_vec} vectorize cases to {path}")


if __name__ == "__main__":
    main()
