#!/usr/bin/env python3
"""Regenerate the shipped construction scripts under corpus/.

The generators simulate every construction while emitting it, so running
this is also a full replay check; it fails loudly if any emitted assertion
would not hold.
"""
from pathlib import Path

from cuspforge.corpus import standard_corpus


def main() -> None:
    root = Path(__file__).resolve().parent.parent / "corpus"
    root.mkdir(exist_ok=True)
    corpus = standard_corpus()
    stale = {p.name for p in root.glob("*.cusp")} - set(corpus)
    for name in sorted(stale):
        (root / name).unlink()
        print(f"removed {name}")
    for name, text in sorted(corpus.items()):
        path = root / name
        if not path.exists() or path.read_text() != text:
            path.write_text(text)
            print(f"wrote {name}")
    print(f"{len(corpus)} scripts in {root}")


if __name__ == "__main__":
    main()
