"""Regenerate the bundled mini-corpus from Django and Sphinx translation catalogs.

Both projects are BSD licensed and ship compiled gettext catalogs (.mo) for
many European languages. Every translated message becomes one line of text.
Messages equal to their English source, or containing no letters, are dropped.

    pip download django==5.2.18 sphinx==8.1.3 --no-deps -d wheels/
    python tools/build_minicorpus.py wheels/*.whl --out src/hdcompute/data/minicorpus

Per language, ``--n-test`` messages whose normalized form is at least
``--min-test-chars`` long are held out (deterministic shuffle by ``--seed``);
everything else becomes training text.
"""

from __future__ import annotations

import argparse
import gettext
import io
import random
import re
import zipfile
from pathlib import Path

from hdcompute.langid import MINICORPUS_FAMILIES, normalize

_PLACEHOLDER = re.compile(r"%\([^)]*\)[a-z]|%[a-z]|\{[^}]*\}|<[^>]+>|&\w+;|https?://\S+|`[^`]*`")


def catalog_messages(wheels: list[Path], lang: str) -> list[str]:
    msgs: set[str] = set()
    for whl in wheels:
        with zipfile.ZipFile(whl) as zf:
            for name in zf.namelist():
                if f"/locale/{lang}/LC_MESSAGES/" not in name or not name.endswith(".mo"):
                    continue
                cat = gettext.GNUTranslations(io.BytesIO(zf.read(name)))._catalog
                for key, text in cat.items():
                    source = key[0] if isinstance(key, tuple) else key
                    if not source or not text or text == source:
                        continue
                    text = " ".join(_PLACEHOLDER.sub(" ", text).split())
                    if re.search(r"[^\W\d_]", text):
                        msgs.add(text)
    return sorted(msgs)


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("wheels", nargs="+", type=Path)
    ap.add_argument("--out", type=Path, required=True)
    ap.add_argument("--langs", default=",".join(MINICORPUS_FAMILIES))
    ap.add_argument("--n-test", type=int, default=200)
    ap.add_argument("--min-test-chars", type=int, default=30)
    ap.add_argument("--seed", type=int, default=2017)
    args = ap.parse_args(argv)

    (args.out / "train").mkdir(parents=True, exist_ok=True)
    (args.out / "test").mkdir(parents=True, exist_ok=True)
    for lang in args.langs.split(","):
        msgs = catalog_messages(args.wheels, lang)
        random.Random(f"{args.seed}-{lang}").shuffle(msgs)
        test, train = [], []
        for m in msgs:
            if len(test) < args.n_test and len(normalize(m)) >= args.min_test_chars:
                test.append(m)
            else:
                train.append(m)
        if len(test) < args.n_test:
            raise SystemExit(f"{lang}: only {len(test)} test-length messages")
        (args.out / "train" / f"{lang}.txt").write_text("\n".join(train) + "\n", encoding="utf-8")
        (args.out / "test" / f"{lang}.txt").write_text("\n".join(test) + "\n", encoding="utf-8")
        size = sum(len(normalize(t)) for t in train)
        print(f"{lang}: {len(train)} training messages ({size} symbols), {len(test)} test")


if __name__ == "__main__":
    main()
