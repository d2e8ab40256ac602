"""Regenerate the bundled mini-corpus from the template definitions."""
import sys

from monotree import corpus, synth

if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else corpus.bundled_corpus_path()
    problems = synth.mini_corpus()
    corpus.save_corpus(problems, out)
    print(f"wrote {len(problems)} problems to {out}")
