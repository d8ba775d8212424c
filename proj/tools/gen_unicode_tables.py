#!/usr/bin/env python3
# Copyright 2026 The faitheval Authors.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Regenerates src/unicode_tables.inc from Python's unicodedata."""

import sys
import unicodedata

MAX_CP = 0x110000


def ranges(pred):
    out, start = [], None
    for cp in range(MAX_CP):
        if pred(cp):
            if start is None:
                start = cp
        elif start is not None:
            out.append((start, cp - 1))
            start = None
    if start is not None:
        out.append((start, MAX_CP - 1))
    return out


def is_punct(cp):
    return unicodedata.category(chr(cp))[0] in ("P", "S")


def is_space(cp):
    return chr(cp).isspace()


def lower_pairs():
    pairs = []
    for cp in range(MAX_CP):
        low = chr(cp).lower()
        if len(low) == 1 and ord(low) != cp:
            pairs.append((cp, ord(low)))
    return pairs


def emit(name, rows, out):
    out.write(f"inline constexpr CodepointPair {name}[] = {{\n")
    for a, b in rows:
        out.write(f"    {{0x{a:04X}, 0x{b:04X}}},\n")
    out.write("};\n\n")


def main():
    out = sys.stdout
    out.write("// Generated by tools/gen_unicode_tables.py "
              f"(Unicode {unicodedata.unidata_version}). Do not edit.\n\n")
    emit("kPunctuationRanges", ranges(is_punct), out)
    emit("kWhitespaceRanges", ranges(is_space), out)
    emit("kLowercaseMap", lower_pairs(), out)


if __name__ == "__main__":
    main()
