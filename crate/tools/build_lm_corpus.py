#!/usr/bin/env python3
"""Build the bundled math-prose sample used to train the fixture n-gram model.

Walks the installed SymPy package, pulls prose paragraphs out of docstrings
(doctest blocks, parameter tables and directives are skipped) and writes one
sentence per line until the byte budget is reached.

    python3 tools/build_lm_corpus.py crates/core/data/lm/math_prose.txt
"""
import ast
import os
import re
import sys

import sympy

BUDGET = 1_000_000
SKIP_PREFIXES = (">>>", "...", "..", ":", "=", "-", "*", "[", "|", "+")
SENT_SPLIT = re.compile(r"(?<=[.!?])\s+(?=[A-Z])")


def paragraphs(doc):
    para = []
    in_block = False
    for raw in doc.splitlines():
        line = raw.strip()
        if not line:
            if para:
                yield " ".join(para)
            para = []
            in_block = False
            continue
        if line.startswith(SKIP_PREFIXES) or raw.startswith("        ") or in_block:
            if line.endswith("::"):
                in_block = True
            if para:
                yield " ".join(para)
            para = []
            continue
        if line.endswith("::"):
            in_block = True
            line = line[:-1]
        para.append(line)
    if para:
        yield " ".join(para)


def sentences(root):
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames[:] = sorted(d for d in dirnames if d not in ("tests", "benchmarks"))
        for name in sorted(filenames):
            if not name.endswith(".py"):
                continue
            try:
                tree = ast.parse(open(os.path.join(dirpath, name), encoding="utf-8").read())
            except (SyntaxError, UnicodeDecodeError):
                continue
            for node in ast.walk(tree):
                if not isinstance(node, (ast.Module, ast.ClassDef, ast.FunctionDef)):
                    continue
                doc = ast.get_docstring(node)
                if not doc:
                    continue
                for para in paragraphs(doc):
                    for sent in SENT_SPLIT.split(para):
                        words = sent.split()
                        if 6 <= len(words) <= 60 and sum(c.isalpha() for c in sent) > 0.6 * len(sent):
                            yield " ".join(words)


def main():
    out = sys.argv[1]
    seen = set()
    written = 0
    with open(out, "w", encoding="utf-8") as f:
        for sent in sentences(os.path.dirname(sympy.__file__)):
            if sent in seen:
                continue
            seen.add(sent)
            f.write(sent + "\n")
            written += len(sent) + 1
            if written >= BUDGET:
                break
    print(f"wrote {written} bytes, {len(seen)} sentences")


if __name__ == "__main__":
    main()
