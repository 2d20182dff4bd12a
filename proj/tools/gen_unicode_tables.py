#!/usr/bin/env python3
"""Generates src/generated/unicode_tables.{hpp,cpp}.

The normalizer needs four kinds of data:
  * per-codepoint fold maps: the fixpoint of (normalize to NFC/NFKC, then
    lowercase) applied per code point, for the four config combinations
  * full canonical decompositions (NFD) for the canonical pass
  * primary composition pairs for canonical recomposition
  * canonical combining classes and the whitespace set

Tables are committed as generated source so the normalization contract is
pinned: rebuilding on a machine with a different ICU/libc does not change
normalized output or content hashes. Regenerate only on a deliberate
Unicode version bump, then re-freeze the fixture files.
"""

import sys
import unicodedata

MAX_CP = 0x110000
HANGUL_BASE, HANGUL_END = 0xAC00, 0xD7A4


def is_surrogate(cp):
    return 0xD800 <= cp <= 0xDFFF


def fold_fixpoint(cp, form, lower):
    s = chr(cp)
    for _ in range(8):
        t = unicodedata.normalize(form, s.lower() if lower else s)
        if t == s:
            return s
        s = t
    raise RuntimeError(f"fold map did not converge for U+{cp:04X}")


def build_fold_map(form, lower):
    out = {}
    for cp in range(MAX_CP):
        if is_surrogate(cp) or HANGUL_BASE <= cp < HANGUL_END:
            continue
        s = fold_fixpoint(cp, form, lower)
        if s != chr(cp):
            out[cp] = [ord(c) for c in s]
    return out


def build_nfd():
    out = {}
    for cp in range(MAX_CP):
        if is_surrogate(cp) or HANGUL_BASE <= cp < HANGUL_END:
            continue
        d = unicodedata.normalize("NFD", chr(cp))
        if d != chr(cp):
            out[cp] = [ord(c) for c in d]
    return out


def build_compose_pairs():
    pairs = {}
    for cp in range(MAX_CP):
        if is_surrogate(cp) or HANGUL_BASE <= cp < HANGUL_END:
            continue
        raw = unicodedata.decomposition(chr(cp))
        if not raw or raw.startswith("<"):
            continue
        fields = raw.split()
        if len(fields) != 2:
            continue
        a, b = int(fields[0], 16), int(fields[1], 16)
        # Excluded composites do not recompose under NFC; let Python decide.
        if unicodedata.normalize("NFC", chr(a) + chr(b)) == chr(cp):
            pairs[(a, b)] = cp
    return pairs


def build_ccc():
    out = {}
    for cp in range(MAX_CP):
        if is_surrogate(cp):
            continue
        c = unicodedata.combining(chr(cp))
        if c:
            out[cp] = c
    return out


def build_whitespace():
    return sorted(
        cp for cp in range(MAX_CP) if not is_surrogate(cp) and chr(cp).isspace()
    )


def fmt_array(name, ctype, values, per_line=10):
    lines = [f"const {ctype} {name}[] = {{"]
    for i in range(0, len(values), per_line):
        chunk = ", ".join(str(v) for v in values[i : i + per_line])
        lines.append(f"    {chunk},")
    lines.append("};")
    return "\n".join(lines)


def main():
    out_dir = sys.argv[1] if len(sys.argv) > 1 else "src/generated"

    fold_maps = {
        "NfkcLower": build_fold_map("NFKC", True),
        "NfkcPlain": build_fold_map("NFKC", False),
        "NfcLower": build_fold_map("NFC", True),
        "NfcPlain": build_fold_map("NFC", False),
    }
    nfd = build_nfd()
    pairs = build_compose_pairs()
    ccc = build_ccc()
    ws = build_whitespace()

    # Shared code point pool for all expansion tables.
    pool = []

    def add_span(cps):
        off = len(pool)
        pool.extend(cps)
        return off, len(cps)

    sections = []
    header_decls = []

    for name, mapping in fold_maps.items():
        keys, offs, lens = [], [], []
        for cp in sorted(mapping):
            off, ln = add_span(mapping[cp])
            keys.append(cp)
            offs.append(off)
            lens.append(ln)
        sections.append(fmt_array(f"kFold{name}Keys", "std::uint32_t", keys))
        sections.append(fmt_array(f"kFold{name}Offsets", "std::uint32_t", offs))
        sections.append(fmt_array(f"kFold{name}Lens", "std::uint8_t", lens))
        sections.append(
            f"const std::size_t kFold{name}Count = {len(keys)};"
        )
        header_decls.append(
            f"extern const std::uint32_t kFold{name}Keys[];\n"
            f"extern const std::uint32_t kFold{name}Offsets[];\n"
            f"extern const std::uint8_t kFold{name}Lens[];\n"
            f"extern const std::size_t kFold{name}Count;"
        )

    keys, offs, lens = [], [], []
    for cp in sorted(nfd):
        off, ln = add_span(nfd[cp])
        keys.append(cp)
        offs.append(off)
        lens.append(ln)
    sections.append(fmt_array("kNfdKeys", "std::uint32_t", keys))
    sections.append(fmt_array("kNfdOffsets", "std::uint32_t", offs))
    sections.append(fmt_array("kNfdLens", "std::uint8_t", lens))
    sections.append(f"const std::size_t kNfdCount = {len(keys)};")
    header_decls.append(
        "extern const std::uint32_t kNfdKeys[];\n"
        "extern const std::uint32_t kNfdOffsets[];\n"
        "extern const std::uint8_t kNfdLens[];\n"
        "extern const std::size_t kNfdCount;"
    )

    pair_keys = sorted(pairs)
    sections.append(
        fmt_array(
            "kComposeKeys",
            "std::uint64_t",
            [(a << 32) | b for a, b in pair_keys],
            per_line=6,
        )
    )
    sections.append(
        fmt_array("kComposeVals", "std::uint32_t", [pairs[k] for k in pair_keys])
    )
    sections.append(f"const std::size_t kComposeCount = {len(pair_keys)};")
    header_decls.append(
        "extern const std::uint64_t kComposeKeys[];\n"
        "extern const std::uint32_t kComposeVals[];\n"
        "extern const std::size_t kComposeCount;"
    )

    ccc_keys = sorted(ccc)
    sections.append(fmt_array("kCccKeys", "std::uint32_t", ccc_keys))
    sections.append(fmt_array("kCccVals", "std::uint8_t", [ccc[k] for k in ccc_keys]))
    sections.append(f"const std::size_t kCccCount = {len(ccc_keys)};")
    header_decls.append(
        "extern const std::uint32_t kCccKeys[];\n"
        "extern const std::uint8_t kCccVals[];\n"
        "extern const std::size_t kCccCount;"
    )

    sections.append(fmt_array("kWhitespace", "std::uint32_t", ws))
    sections.append(f"const std::size_t kWhitespaceCount = {len(ws)};")
    header_decls.append(
        "extern const std::uint32_t kWhitespace[];\n"
        "extern const std::size_t kWhitespaceCount;"
    )

    sections.append(fmt_array("kCpPool", "std::uint32_t", pool, per_line=12))
    sections.append(f"const std::size_t kCpPoolSize = {len(pool)};")
    header_decls.append(
        "extern const std::uint32_t kCpPool[];\nextern const std::size_t kCpPoolSize;"
    )

    banner = (
        "// Generated by tools/gen_unicode_tables.py -- do not edit.\n"
        f"// Unicode character database version: {unicodedata.unidata_version}\n"
    )

    with open(f"{out_dir}/unicode_tables.hpp", "w") as f:
        f.write(banner)
        f.write("#pragma once\n\n#include <cstddef>\n#include <cstdint>\n\n")
        f.write("namespace mirrorgate::unicode_tables {\n\n")
        f.write(
            f'inline constexpr const char* kUnicodeVersion = "{unicodedata.unidata_version}";\n\n'
        )
        f.write("\n\n".join(header_decls))
        f.write("\n\n}  // namespace mirrorgate::unicode_tables\n")

    with open(f"{out_dir}/unicode_tables.cpp", "w") as f:
        f.write(banner)
        f.write('#include "unicode_tables.hpp"\n\n')
        f.write("namespace mirrorgate::unicode_tables {\n\n")
        f.write("\n\n".join(sections))
        f.write("\n\n}  // namespace mirrorgate::unicode_tables\n")

    total = sum(len(m) for m in fold_maps.values())
    print(
        f"fold entries: {total}  nfd: {len(nfd)}  pairs: {len(pairs)}  "
        f"ccc: {len(ccc)}  ws: {len(ws)}  pool: {len(pool)}"
    )


if __name__ == "__main__":
    main()
