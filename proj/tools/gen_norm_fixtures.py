#!/usr/bin/env python3
"""Generates tests/data/norm_fixtures.jsonl.

Each line is one case: raw input, a NormConfig, and the expected normalized
output. Expectations come from an independent reference pipeline built on
Python's unicodedata: per-codepoint fold (same fixpoint definition the C++
tables are generated from) followed by a full NFC pass, whitespace handling,
and byte-capped truncation. The generator self-checks that every expected
output is idempotent under the reference and is genuinely normalized for the
requested form, then freezes the results to disk. Regenerate only on a
deliberate Unicode version bump.
"""

import json
import random
import sys
import unicodedata
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))
from gen_unicode_tables import build_fold_map, is_surrogate

WS = frozenset(
    cp for cp in range(0x110000) if not is_surrogate(cp) and chr(cp).isspace()
)

FORMS = ("NFC", "NFKC")


def fold_string(s, fold_map):
    out = []
    for ch in s:
        mapped = fold_map.get(ord(ch))
        if mapped is None:
            out.append(ch)
        else:
            out.extend(chr(c) for c in mapped)
    return "".join(out)


def ref_normalize(raw, lowercase, form, collapse, max_bytes, fold_maps):
    folded = fold_string(raw, fold_maps[(form, lowercase)])
    canon = unicodedata.normalize("NFC", folded)

    if collapse:
        parts = []
        in_run = False
        for ch in canon:
            if ord(ch) in WS:
                in_run = True
            else:
                if in_run and parts:
                    parts.append(" ")
                in_run = False
                parts.append(ch)
        text = "".join(parts)
    else:
        cps = list(canon)
        lo, hi = 0, len(cps)
        while lo < hi and ord(cps[lo]) in WS:
            lo += 1
        while hi > lo and ord(cps[hi - 1]) in WS:
            hi -= 1
        text = "".join(cps[lo:hi])

    encoded = text.encode("utf-8")
    if len(encoded) > max_bytes:
        cut = max_bytes
        while cut > 0 and (encoded[cut] & 0xC0) == 0x80:
            cut -= 1
        text = encoded[:cut].decode("utf-8")
        while text and ord(text[-1]) in WS:
            text = text[:-1]
    return text


def curated_cases():
    """Hand-picked raws covering fold, composition, whitespace, truncation."""
    ws_zoo = "a\tb\r\nc d e f　g"
    cases = [
        # (raw, [(lowercase, form, collapse, max_bytes)])
        ("Hello  World", None),
        ("", None),
        ("abc", None),
        ("   ", None),
        ("　\t\r\n", None),
        ("ＴＥＳＴ ｔｅｓｔ", None),
        ("ﬁnal ﬂight", None),
        ("Ångström Ωhm K", None),  # Å-ohm-Kelvin singletons
        ("Å Å", None),  # combining ring vs precomposed
        ("STRASSE straße", None),
        ("ΣΟΦΟΣ", None),  # per-cp lower: no final sigma
        ("ᴬᴮᶜ", None),  # modifier capitals: fold must reach 'a'
        ("한국", None),  # jamo → syllables
        ("한국어 처리", None),
        ("à̡", None),  # marks out of canonical order
        ("à̡", None),
        ("q̣̇ q̣̇", None),  # classic reorder pair
        ("क़ क़", None),  # composition exclusion (QA)
        ("ﷺ", None),  # ligature expanding to words with spaces
        ("ﻻﻷ", None),  # Arabic presentation forms
        ("ｶﾞｷﾞｸﾞ", None),  # halfwidth kana + voicing mark
        ("①② ½ Ⅲ ㎡", None),  # enclosed/fraction/roman/squared
        ("é́́́", None),  # stacked identical marks
        ("x" + "̀" * 12 + "y", None),
        ("̀́leading marks", None),
        (ws_zoo, None),
        ("mixed​zero​width", None),  # U+200B is not whitespace
        ("İ ı I i", None),  # dotted/dotless I
        ("Ǆ ǅ ǆ", None),  # DŽ titlecase forms
        ("ﬃﬄ", None),  # ffi/ffl ligatures
        ("１２３ ４５６", None),
        ("تجربة النص العربي", None),
        ("Русский Текст", None),
        ("中文 空格 测试", None),
        ("a b", [(True, "NFKC", True, 3)]),  # truncate exactly at space
        ("ab cd", [(True, "NFKC", True, 3)]),  # truncation exposes trailing ws
        ("héllo wörld", [(True, "NFKC", True, 7)]),  # cut inside a 2-byte cp
        ("héllo", [(True, "NFKC", True, 0)]),
        ("中文中文", [(True, "NFKC", True, 7)]),  # cut inside a 3-byte cp
        ("𝕊𝕋", [(True, "NFKC", True, 2), (False, "NFC", True, 3)]),
        ("a  \t b", [(True, "NFKC", False, 65536), (False, "NFC", False, 65536)]),
        ("  pad  ", [(True, "NFKC", False, 65536)]),
        ("\tinner\ttabs\t", [(False, "NFKC", False, 65536)]),
    ]
    out = []
    for raw, cfgs in cases:
        if cfgs is None:
            cfgs = [
                (True, "NFKC", True, 65536),
                (False, "NFKC", True, 65536),
                (True, "NFC", True, 65536),
                (False, "NFC", True, 65536),
            ]
        for cfg in cfgs:
            out.append((raw, cfg))
    return out


def build_pools():
    ascii_pool = list("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789!?#@.,;:'\"()[]{}<>/-_=+*&^%$~`|\\")
    ws_pool = list(" \t\n\r\x0b\x0c") + [
        "", " ", " ", " ", " ", " ",
        " ", " ", " ", " ", " ", "　",
    ]
    latin_ext = [chr(c) for c in range(0x00C0, 0x0180) if not chr(c).isspace()]
    greek = [chr(c) for c in range(0x0391, 0x03CA) if unicodedata.category(chr(c)).startswith("L")]
    cyrillic = [chr(c) for c in range(0x0410, 0x0450)]
    cjk = [chr(c) for c in range(0x4E00, 0x4E80)] + [chr(c) for c in range(0x9700, 0x9740)]
    fullwidth = [chr(c) for c in range(0xFF01, 0xFF5F)]
    half_kana = [chr(c) for c in range(0xFF66, 0xFFA0)]
    hangul_syll = [chr(c) for c in range(0xAC00, 0xAC80)] + [chr(c) for c in range(0xD750, 0xD7A4)]
    jamo_l = [chr(c) for c in range(0x1100, 0x1113)]
    jamo_v = [chr(c) for c in range(0x1161, 0x1176)]
    jamo_t = [chr(c) for c in range(0x11A8, 0x11C3)]
    arabic = [chr(c) for c in range(0x0621, 0x064B)]
    arabic_pres = [chr(c) for c in range(0xFE70, 0xFEFD) if unicodedata.decomposition(chr(c))]
    marks = [chr(c) for c in range(0x0300, 0x0370) if unicodedata.combining(chr(c))] + [
        "֑", "ְ", "़", "ु", "゙", "゚",
        "︠", "⃐", "ٕ", "ٔ",
    ]
    compat = [
        "ﬁ", "ﬂ", "ﬃ", "ℕ", "ℝ", "²", "³",
        "½", "Ⅷ", "㎒", "㍱", "ᴬ", "ᴵ", "ʰ",
        "①", "Ⓐ", "㋐", "Ĳ", "Ǆ", "Ω", "Å",
        "K", "ﷺ", "ﷻ", "㈝",
    ]
    exotic = [
        chr(0x1F600), chr(0x1F680), chr(0x10400), chr(0x1D400), chr(0x1D7D8),
        "क़", "य़", "ේ", "གྷ", "ཱི",
    ]

    def burst_jamo(rng):
        s = rng.choice(jamo_l) + rng.choice(jamo_v)
        if rng.random() < 0.5:
            s += rng.choice(jamo_t)
        return s

    def burst_zalgo(rng):
        base = rng.choice(ascii_pool if rng.random() < 0.5 else latin_ext)
        return base + "".join(rng.choice(marks) for _ in range(rng.randint(1, 8)))

    atom_pools = [
        (ascii_pool, 10), (ws_pool, 4), (latin_ext, 3), (greek, 2),
        (cyrillic, 2), (cjk, 3), (fullwidth, 2), (half_kana, 1),
        (hangul_syll, 2), (arabic, 2), (arabic_pres, 1), (marks, 2),
        (compat, 2), (exotic, 1),
    ]
    weighted = []
    for pool, w in atom_pools:
        weighted.extend([pool] * w)
    return weighted, burst_jamo, burst_zalgo


def random_raw(rng, weighted, burst_jamo, burst_zalgo):
    n = rng.randint(0, 120)
    parts = []
    for _ in range(n):
        roll = rng.random()
        if roll < 0.04:
            parts.append(burst_jamo(rng))
        elif roll < 0.08:
            parts.append(burst_zalgo(rng))
        else:
            parts.append(rng.choice(rng.choice(weighted)))
    return "".join(parts)


def main():
    out_path = Path(__file__).resolve().parent.parent / "tests" / "data" / "norm_fixtures.jsonl"
    out_path.parent.mkdir(parents=True, exist_ok=True)

    print("building fold maps (4 variants over the full code space)...", flush=True)
    fold_maps = {}
    for form in FORMS:
        for lower in (True, False):
            fold_maps[(form, lower)] = build_fold_map(form, lower)

    rng = random.Random(20260822)
    weighted, burst_jamo, burst_zalgo = build_pools()

    cases = curated_cases()
    for _ in range(500):
        raw = random_raw(rng, weighted, burst_jamo, burst_zalgo)
        lowercase = rng.random() < 0.6
        form = "NFKC" if rng.random() < 0.6 else "NFC"
        collapse = rng.random() < 0.75
        roll = rng.random()
        if roll < 0.12:
            max_bytes = rng.randint(0, 48)
        elif roll < 0.2:
            max_bytes = rng.randint(49, 200)
        else:
            max_bytes = 65536
        cases.append((raw, (lowercase, form, collapse, max_bytes)))

    lines = []
    for raw, (lowercase, form, collapse, max_bytes) in cases:
        expected = ref_normalize(raw, lowercase, form, collapse, max_bytes, fold_maps)

        # Self-check 1: the reference is idempotent on its own output.
        again = ref_normalize(expected, lowercase, form, collapse, max_bytes, fold_maps)
        assert again == expected, f"reference not idempotent for {raw!r}"
        # Self-check 2: output is genuinely normalized for the requested form.
        assert unicodedata.is_normalized(form, expected), f"not {form}: {raw!r}"
        # Self-check 3: byte cap respected.
        assert len(expected.encode("utf-8")) <= max_bytes

        lines.append(json.dumps({
            "raw": raw,
            "lowercase": lowercase,
            "form": form.lower(),
            "collapse": collapse,
            "max_bytes": max_bytes,
            "expected": expected,
        }, ensure_ascii=True, sort_keys=True))

    # Pin the spec-level examples to their literal expectations.
    defaults = (True, "NFKC", True, 65536)
    assert ref_normalize("Hello  World", *defaults, fold_maps) == "hello world"
    assert ref_normalize("", *defaults, fold_maps) == ""
    assert ref_normalize("abc", *defaults, fold_maps) == "abc"

    out_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {len(lines)} cases to {out_path}")


if __name__ == "__main__":
    main()
