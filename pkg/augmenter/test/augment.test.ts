/**
 * Behavioral suite for the corpus augmenter.
 *
 * The fixture is a deterministic 100-line corpus built from a fixed word
 * pool, so every expectation here is reproducible without touching disk.
 * The three contract checks: line count is preserved exactly, each line has
 * ceil(rate * tokens) alterations, and a fixed seed yields identical output.
 */

import { mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { describe, expect, it } from "vitest";

import {
  AugmentError,
  augmentLines,
  buildFrequencyTable,
  resolveMethods,
  sortedVocabulary,
  type AugmentConfig,
} from "../src/augment.js";
import { augmentFile, main } from "../src/cli.js";
import { SplitMix64, deriveLineSeed } from "../src/rng.js";
import { tokenSpans, tokens } from "../src/tokenize.js";

const POOL = [
  "happy",
  "fast",
  "doctor",
  "stone",
  "iron",
  "metal",
  "quick",
  "story",
  "zebra",
  "apple",
  "cold",
  "bright",
  "river07",
  "small",
  "delta",
];

/** 100 lines, lengths cycling 1..12, fully determined by index arithmetic. */
function fixtureLines(): string[] {
  const lines: string[] = [];
  for (let i = 0; i < 100; i += 1) {
    const len = (i % 12) + 1;
    const words: string[] = [];
    for (let j = 0; j < len; j += 1) {
      words.push(POOL[(i * 7 + j * 3) % POOL.length]!);
    }
    lines.push(words.join(" "));
  }
  return lines;
}

function cfg(overrides: Partial<AugmentConfig> = {}): AugmentConfig {
  return {
    changeRate: 0.3,
    methods: ["wordnet"],
    minFreqFilter: 0,
    seed: 7,
    ...overrides,
  };
}

describe("SplitMix64", () => {
  it("same seed gives the same stream", () => {
    const a = new SplitMix64(42);
    const b = new SplitMix64(42);
    const drawsA = Array.from({ length: 32 }, () => a.nextU64());
    const drawsB = Array.from({ length: 32 }, () => b.nextU64());
    expect(drawsA).toEqual(drawsB);
  });

  it("different seeds diverge", () => {
    const a = new SplitMix64(1);
    const b = new SplitMix64(2);
    expect(a.nextU64()).not.toEqual(b.nextU64());
  });

  it("int() stays in range and rejects bad bounds", () => {
    const rng = new SplitMix64(9);
    for (let i = 0; i < 200; i += 1) {
      const v = rng.int(7);
      expect(v).toBeGreaterThanOrEqual(0);
      expect(v).toBeLessThan(7);
    }
    expect(() => rng.int(0)).toThrow(RangeError);
  });

  it("sample() returns k distinct indices below n", () => {
    const rng = new SplitMix64(3);
    const picks = rng.sample(10, 6);
    expect(picks).toHaveLength(6);
    expect(new Set(picks).size).toBe(6);
    for (const p of picks) {
      expect(p).toBeGreaterThanOrEqual(0);
      expect(p).toBeLessThan(10);
    }
    expect(() => rng.sample(3, 4)).toThrow(RangeError);
  });

  it("line seeds differ across lines and agree across calls", () => {
    const seen = new Set<bigint>();
    for (let i = 0; i < 50; i += 1) {
      seen.add(deriveLineSeed(7, i));
    }
    expect(seen.size).toBe(50);
    expect(deriveLineSeed(7, 13)).toEqual(deriveLineSeed(7, 13));
  });
});

describe("tokenize", () => {
  it("splits on anything that is not a letter or digit", () => {
    expect(tokens("The CAT, cat! river07")).toEqual([
      "the",
      "cat",
      "cat",
      "river07",
    ]);
  });

  it("records spans that index back into the line", () => {
    const line = "a bb  ccc";
    const spans = tokenSpans(line);
    expect(spans.map((s) => s.text)).toEqual(["a", "bb", "ccc"]);
    for (const s of spans) {
      expect(line.slice(s.start, s.end)).toBe(s.text);
    }
  });

  it("an empty line has no tokens", () => {
    expect(tokenSpans("")).toEqual([]);
  });
});

describe("config validation", () => {
  it.each([
    [{ changeRate: 0 }, "changeRate"],
    [{ changeRate: 1 }, "changeRate"],
    [{ changeRate: -0.2 }, "changeRate"],
    [{ methods: [] as AugmentConfig["methods"] }, "method"],
    [{ minFreqFilter: -1 }, "minFreqFilter"],
    [{ minFreqFilter: 0.5 }, "minFreqFilter"],
    [{ seed: 1.5 }, "seed"],
  ])("rejects %j", (overrides, fragment) => {
    expect(() => augmentLines(["a b"], cfg(overrides))).toThrow(AugmentError);
    expect(() => augmentLines(["a b"], cfg(overrides))).toThrow(fragment);
  });

  it("contextual requests fall back to the lexicon with a warning", () => {
    const { effective, warnings } = resolveMethods(["wordnet", "contextual"]);
    expect(effective).toEqual(["wordnet"]);
    expect(warnings).toHaveLength(1);
    expect(warnings[0]).toMatch(/falling back to wordnet/);
    const result = augmentLines(["happy fast doctor"], cfg({ methods: ["contextual"] }));
    expect(result.warnings).toHaveLength(1);
  });

  it("a plain wordnet run warns about nothing", () => {
    const result = augmentLines(["happy fast doctor"], cfg());
    expect(result.warnings).toEqual([]);
  });
});

describe("frequency table", () => {
  it("counts lowercase occurrences across the corpus", () => {
    const freq = buildFrequencyTable(["Apple apple banana", "apple zzz"]);
    expect(freq.get("apple")).toBe(3);
    expect(freq.get("banana")).toBe(1);
    expect(freq.get("zzz")).toBe(1);
  });

  it("orders the vocabulary by frequency, ties alphabetical", () => {
    const freq = buildFrequencyTable(["b b a a c"]);
    expect(sortedVocabulary(freq)).toEqual(["a", "b", "c"]);
  });
});

describe("augmentLines contract", () => {
  const lines = fixtureLines();

  it("keeps exactly one output line per input line, in order", () => {
    const result = augmentLines(lines, cfg());
    expect(result.lines).toHaveLength(lines.length);
    for (let i = 0; i < lines.length; i += 1) {
      expect(tokens(result.lines[i]!)).toHaveLength(tokens(lines[i]!).length);
    }
  });

  it("alters ceil(rate * tokens) tokens on every line", () => {
    const result = augmentLines(lines, cfg({ changeRate: 0.3 }));
    for (let i = 0; i < lines.length; i += 1) {
      const before = tokens(lines[i]!);
      const after = tokens(result.lines[i]!);
      expect(after).toHaveLength(before.length);
      let altered = 0;
      for (let j = 0; j < before.length; j += 1) {
        if (before[j] !== after[j]) {
          altered += 1;
        }
      }
      expect(altered).toBe(Math.ceil(0.3 * before.length));
    }
  });

  it("a four-token line at rate 0.30 gets exactly two alterations", () => {
    const line = "happy fast stone iron";
    const result = augmentLines([line], cfg({ changeRate: 0.3 }));
    const before = tokens(line);
    const after = tokens(result.lines[0]!);
    const altered = before.filter((w, j) => w !== after[j]).length;
    expect(altered).toBe(2);
  });

  it("is deterministic under a fixed seed", () => {
    const a = augmentLines(lines, cfg({ seed: 11 }));
    const b = augmentLines(lines, cfg({ seed: 11 }));
    expect(a.lines).toEqual(b.lines);
  });

  it("changes with the seed", () => {
    const a = augmentLines(lines, cfg({ seed: 11 }));
    const b = augmentLines(lines, cfg({ seed: 12 }));
    expect(a.lines).not.toEqual(b.lines);
  });

  it("leaves empty lines empty", () => {
    const result = augmentLines(["", "happy fast stone", ""], cfg());
    expect(result.lines[0]).toBe("");
    expect(result.lines[2]).toBe("");
  });

  it("preserves punctuation and casing patterns", () => {
    const line = "The cat, the hat! STOP now.";
    const result = augmentLines([line], cfg({ changeRate: 0.9, seed: 3 }));
    const out = result.lines[0]!;
    // Replacements are spliced into token spans, so the non-token
    // skeleton of the line must survive untouched.
    const skeleton = (s: string): string => s.replace(/[\p{L}\p{N}]+/gu, "#");
    expect(skeleton(out)).toBe(skeleton(line));
    const before = tokenSpans(line).map((s) => s.text);
    const after = tokenSpans(out).map((s) => s.text);
    for (let j = 0; j < before.length; j += 1) {
      const src = before[j]!;
      const dst = after[j]!;
      if (src === src.toUpperCase() && /\p{L}/u.test(src)) {
        expect(dst).toBe(dst.toUpperCase());
      } else if (src.charAt(0) === src.charAt(0).toUpperCase()) {
        expect(dst.charAt(0)).toBe(dst.charAt(0).toUpperCase());
      }
    }
  });

  it("never replaces a token with itself", () => {
    const a = augmentLines(lines, cfg({ changeRate: 0.99, seed: 5 }));
    for (let i = 0; i < lines.length; i += 1) {
      const before = tokens(lines[i]!);
      const after = tokens(a.lines[i]!);
      const altered = before.filter((w, j) => w !== after[j]).length;
      expect(altered).toBe(Math.ceil(0.99 * before.length));
    }
  });

  it("drops words below the frequency floor when the filter is on", () => {
    const corpus = [
      "apple apple apple banana",
      "apple stone stone stone zzz",
    ];
    const freq = buildFrequencyTable(corpus);
    const result = augmentLines(
      corpus,
      cfg({ minFreqFilter: 2, changeRate: 0.25, seed: 1 }),
    );
    for (const line of result.lines) {
      for (const w of tokens(line)) {
        // Substituted-in words absent from the corpus count as frequency 0.
        expect(freq.get(w) ?? 0).toBeGreaterThanOrEqual(2);
      }
    }
  });
});

describe("file round trip", () => {
  const dir = mkdtempSync(join(tmpdir(), "augmenter-"));

  it("preserves line count and trailing newline", () => {
    const input = join(dir, "in.txt");
    const output = join(dir, "out.txt");
    writeFileSync(input, fixtureLines().join("\n") + "\n", "utf8");
    const returned = augmentFile(input, output, cfg());
    expect(returned).toBe(output);
    const text = readFileSync(output, "utf8");
    expect(text.endsWith("\n")).toBe(true);
    expect(text.slice(0, -1).split("\n")).toHaveLength(100);
  });

  it("same seed writes identical bytes, a new seed does not", () => {
    const input = join(dir, "in2.txt");
    writeFileSync(input, fixtureLines().join("\n") + "\n", "utf8");
    const outA = join(dir, "a.txt");
    const outB = join(dir, "b.txt");
    const outC = join(dir, "c.txt");
    expect(
      main([
        "--input", input, "--out", outA,
        "--rate", "0.3", "--methods", "wordnet,contextual", "--seed", "7",
      ]),
    ).toBe(0);
    expect(
      main([
        "--input", input, "--out", outB,
        "--rate", "0.3", "--methods", "wordnet,contextual", "--seed", "7",
      ]),
    ).toBe(0);
    expect(
      main([
        "--input", input, "--out", outC,
        "--rate", "0.3", "--methods", "wordnet,contextual", "--seed", "8",
      ]),
    ).toBe(0);
    const bytesA = readFileSync(outA);
    expect(bytesA.equals(readFileSync(outB))).toBe(true);
    expect(bytesA.equals(readFileSync(outC))).toBe(false);
  });

  it("flags usage errors with exit code 1", () => {
    expect(main([])).toBe(1);
    expect(main(["--input", "x.txt"])).toBe(1);
    expect(main(["--bogus", "1"])).toBe(1);
    const input = join(dir, "in3.txt");
    writeFileSync(input, "a b c\n", "utf8");
    expect(
      main(["--input", input, "--out", join(dir, "o.txt"), "--rate", "0"]),
    ).toBe(1);
  });

  it("flags runtime failures with exit code 2", () => {
    expect(
      main(["--input", join(dir, "missing.txt"), "--out", join(dir, "o2.txt")]),
    ).toBe(2);
  });

  it("prints usage on --help", () => {
    expect(main(["--help"])).toBe(0);
  });
});
