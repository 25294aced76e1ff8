/**
 * Core augmentation pass: per-line token substitution at a fixed rate.
 *
 * Every input line comes back as exactly one output line, in order. A line
 * with n tokens has ceil(changeRate * n) of them replaced, chosen and
 * substituted by a per-line seeded stream, so two runs with the same seed
 * produce identical files and lines can be processed in any order.
 *
 * Two methods are recognized. "wordnet" substitutes from the embedded
 * synonym lexicon, falling back to a corpus-vocabulary swap for words the
 * lexicon does not cover. "contextual" would use a masked language model to
 * propose in-context replacements; no model ships with this package, so
 * requesting it degrades to wordnet-only with a warning rather than failing
 * the run.
 */

import { SplitMix64, deriveLineSeed } from "./rng.js";
import { tokenSpans } from "./tokenize.js";
import { SYNONYMS } from "./lexicon.js";

export type Method = "wordnet" | "contextual";

export interface AugmentConfig {
  /** Fraction of each line's tokens to alter, exclusive bounds (0, 1). */
  changeRate: number;
  /** Substitution methods to apply, at least one. */
  methods: Method[];
  /** Drop output words whose corpus frequency is below this; 0 disables. */
  minFreqFilter: number;
  /** Global seed; per-line streams are derived from it. */
  seed: number;
}

export interface AugmentResult {
  lines: string[];
  warnings: string[];
}

export class AugmentError extends Error {}

const KNOWN_METHODS: readonly Method[] = ["wordnet", "contextual"];

export function validateConfig(cfg: AugmentConfig): void {
  if (!(cfg.changeRate > 0 && cfg.changeRate < 1)) {
    throw new AugmentError(
      `changeRate must lie strictly between 0 and 1, got ${cfg.changeRate}`,
    );
  }
  if (cfg.methods.length === 0) {
    throw new AugmentError("at least one method is required");
  }
  for (const m of cfg.methods) {
    if (!KNOWN_METHODS.includes(m)) {
      throw new AugmentError(`unknown method '${m}'`);
    }
  }
  if (!Number.isInteger(cfg.minFreqFilter) || cfg.minFreqFilter < 0) {
    throw new AugmentError(
      `minFreqFilter must be a non-negative integer, got ${cfg.minFreqFilter}`,
    );
  }
  if (!Number.isInteger(cfg.seed)) {
    throw new AugmentError(`seed must be an integer, got ${cfg.seed}`);
  }
}

/**
 * Replace a requested "contextual" method with the lexicon path.
 * Returns the effective method list and any warnings raised.
 */
export function resolveMethods(methods: Method[]): {
  effective: Method[];
  warnings: string[];
} {
  const warnings: string[] = [];
  if (methods.includes("contextual")) {
    warnings.push(
      "contextual model unavailable, falling back to wordnet-only substitution",
    );
  }
  return { effective: ["wordnet"], warnings };
}

/** Total occurrence count of each lowercase token across the corpus. */
export function buildFrequencyTable(lines: string[]): Map<string, number> {
  const freq = new Map<string, number>();
  for (const line of lines) {
    for (const span of tokenSpans(line)) {
      const w = span.text.toLowerCase();
      freq.set(w, (freq.get(w) ?? 0) + 1);
    }
  }
  return freq;
}

/** Vocabulary ordered by descending frequency, ties alphabetical. */
export function sortedVocabulary(freq: Map<string, number>): string[] {
  return [...freq.keys()].sort((a, b) => {
    const d = (freq.get(b) ?? 0) - (freq.get(a) ?? 0);
    return d !== 0 ? d : a < b ? -1 : a > b ? 1 : 0;
  });
}

/** Reapply the original token's casing pattern to a lowercase replacement. */
function matchCase(original: string, replacement: string): string {
  if (original === original.toUpperCase() && /\p{L}/u.test(original)) {
    return replacement.toUpperCase();
  }
  const first = original.charAt(0);
  if (first === first.toUpperCase() && first !== first.toLowerCase()) {
    return replacement.charAt(0).toUpperCase() + replacement.slice(1);
  }
  return replacement;
}

/**
 * Deterministic substitute for one token. Lexicon synonyms are preferred;
 * otherwise a different corpus word is drawn. Always differs from the
 * original token (case-insensitively) when any alternative exists.
 */
function substituteToken(
  token: string,
  rng: SplitMix64,
  vocab: string[],
): string {
  const lower = token.toLowerCase();
  const synonyms = SYNONYMS[lower];
  if (synonyms !== undefined && synonyms.length > 0) {
    return matchCase(token, synonyms[rng.int(synonyms.length)]!);
  }
  // Corpus-vocabulary fallback: skip entries equal to the token itself.
  const pool = vocab.filter((w) => w !== lower);
  if (pool.length > 0) {
    return matchCase(token, pool[rng.int(pool.length)]!);
  }
  // Degenerate one-word corpus: mutate the token in place.
  const reversed = [...lower].reverse().join("");
  if (reversed !== lower) {
    return matchCase(token, reversed);
  }
  return matchCase(token, lower + lower.charAt(0));
}

/**
 * Augment a single line with an already-derived stream.
 * Exactly ceil(changeRate * tokenCount) tokens are replaced in place;
 * whitespace and punctuation between tokens are preserved. When
 * minFreqFilter is positive the augmented line is then re-tokenized and
 * words below the threshold (or absent from the corpus table) are dropped,
 * the survivors joined by single spaces.
 */
export function augmentLine(
  line: string,
  cfg: AugmentConfig,
  rng: SplitMix64,
  vocab: string[],
  freq: Map<string, number>,
): string {
  const spans = tokenSpans(line);
  const budget = Math.ceil(cfg.changeRate * spans.length);
  let out = line;
  if (budget > 0) {
    const chosen = rng.sample(spans.length, budget).sort((a, b) => a - b);
    // Splice right to left so earlier offsets stay valid.
    for (let i = chosen.length - 1; i >= 0; i -= 1) {
      const span = spans[chosen[i]!]!;
      const replacement = substituteToken(span.text, rng, vocab);
      out = out.slice(0, span.start) + replacement + out.slice(span.end);
    }
  }
  if (cfg.minFreqFilter > 0) {
    const kept = tokenSpans(out)
      .map((s) => s.text)
      .filter((w) => (freq.get(w.toLowerCase()) ?? 0) >= cfg.minFreqFilter);
    out = kept.join(" ");
  }
  return out;
}

/** Augment a whole corpus held in memory, one entry per line. */
export function augmentLines(
  lines: string[],
  cfg: AugmentConfig,
): AugmentResult {
  validateConfig(cfg);
  const { warnings } = resolveMethods(cfg.methods);
  const freq = buildFrequencyTable(lines);
  const vocab = sortedVocabulary(freq);
  const out = lines.map((line, i) => {
    const rng = new SplitMix64(deriveLineSeed(cfg.seed, i));
    return augmentLine(line, cfg, rng, vocab, freq);
  });
  return { lines: out, warnings };
}
