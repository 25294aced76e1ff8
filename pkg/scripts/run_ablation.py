"""Compare the full contrastive objective against its ablations.

Three variants train on the synthetic benchmark corpus per seed:

* full      - the complete objective;
* pos-only  - negatives disabled, attraction term only;
* lambda0   - contrastive weight zeroed, topic-model term alone.

With --augmented, the full and lambda0 variants instead train with paired
augmentations, and the table reports the mean cosine between each
document's topic distribution and its augmented view.

Usage:
    python3 scripts/run_ablation.py --seeds 42 43 44
    python3 scripts/run_ablation.py --augmented --seeds 42 43 44
"""
import argparse
import statistics
import sys
import time

import numpy as np

from tsctm.evaluation import (cluster_assignments, nmi, pair_cosine, purity,
                              top_words, topic_uniqueness)
from tsctm.objectives import TscConfig
from tsctm.synthetic import make_topic_corpus
from tsctm.trainer import TrainConfig, infer_theta, train


def parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seeds", type=int, nargs="+", default=[42, 43, 44])
    parser.add_argument("--epochs", type=int, default=200)
    parser.add_argument("--n-docs", type=int, default=2000)
    parser.add_argument("--augmented", action="store_true")
    parser.add_argument("--top-words", type=int, default=10)
    return parser.parse_args()


def run_variant(corpus, seed, epochs, tsc, augmented, top_t):
    cfg = TrainConfig(n_topics=5, epochs=epochs, seed=seed,
                      augmented=augmented, tsc=tsc)
    t0 = time.perf_counter()
    params, _ = train(corpus, cfg)
    wall = time.perf_counter() - t0
    theta = infer_theta(params, corpus)
    assignments = cluster_assignments(theta)
    labels = np.asarray(corpus.labels)
    row = {
        "tu": topic_uniqueness(top_words(params.beta, top_t)),
        "purity": purity(assignments, labels),
        "nmi": nmi(assignments, labels),
        "wall": wall,
    }
    if augmented:
        row["pair_cos"] = pair_cosine(theta, infer_theta(params, corpus, augmented=True))
    return row


def main() -> int:
    args = parse_args()
    corpus = make_topic_corpus(n_docs=args.n_docs, augment=args.augmented)
    print(f"corpus: {len(corpus.docs)} documents, vocabulary {len(corpus.vocab)}")

    if args.augmented:
        variants = [("full", TscConfig()), ("lambda0", TscConfig(lambda_tsc=0.0))]
        header = f"{'seed':>4} {'variant':>8} {'tu':>6} {'purity':>7} {'nmi':>6} {'pair_cos':>9} {'wall':>7}"
    else:
        variants = [("full", TscConfig()), ("pos-only", TscConfig(use_negatives=False)),
                    ("lambda0", TscConfig(lambda_tsc=0.0))]
        header = f"{'seed':>4} {'variant':>8} {'tu':>6} {'purity':>7} {'nmi':>6} {'wall':>7}"
    print(header)

    results: dict[str, list[dict]] = {name: [] for name, _ in variants}
    for seed in args.seeds:
        for name, tsc in variants:
            row = run_variant(corpus, seed, args.epochs, tsc,
                              args.augmented, args.top_words)
            results[name].append(row)
            cells = f"{seed:>4} {name:>8} {row['tu']:6.3f} {row['purity']:7.3f} {row['nmi']:6.3f}"
            if args.augmented:
                cells += f" {row['pair_cos']:9.4f}"
            print(cells + f" {row['wall']:6.1f}s")

    def med(name, key):
        return statistics.median(r[key] for r in results[name])

    print("\nmedians over seeds:")
    if args.augmented:
        gap = statistics.median(
            f["pair_cos"] - l["pair_cos"]
            for f, l in zip(results["full"], results["lambda0"]))
        print(f"  full pair_cos {med('full', 'pair_cos'):.4f}, "
              f"lambda0 pair_cos {med('lambda0', 'pair_cos'):.4f}, gap {gap:+.4f}")
    else:
        tu_gap = statistics.median(
            f["tu"] - p["tu"] for f, p in zip(results["full"], results["pos-only"]))
        pur_gap = statistics.median(
            f["purity"] - l["purity"]
            for f, l in zip(results["full"], results["lambda0"]))
        print(f"  full tu {med('full', 'tu'):.3f} vs pos-only {med('pos-only', 'tu'):.3f} "
              f"(gap {tu_gap:+.3f})")
        print(f"  full purity {med('full', 'purity'):.3f} vs lambda0 "
              f"{med('lambda0', 'purity'):.3f} (gap {pur_gap:+.3f})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
