/**
 * Command line entry point.
 *
 * Usage:
 *   augment --input corpus.txt --out corpus.aug.txt --rate 0.3 \
 *           --methods wordnet,contextual --seed 7 [--min-freq 0]
 *
 * Reads one document per line, writes exactly one augmented line per input
 * line in the same order. Exit code 1 flags a usage error, 2 a runtime
 * failure; warnings (such as the contextual-model fallback) go to stderr.
 */

import { readFileSync, writeFileSync } from "node:fs";
import { pathToFileURL } from "node:url";
import process from "node:process";
import {
  AugmentError,
  augmentLines,
  validateConfig,
  type AugmentConfig,
  type Method,
} from "./augment.js";

const USAGE = `usage: augment --input FILE --out FILE [options]

options:
  --rate R          fraction of tokens to alter per line, 0 < R < 1 (default 0.3)
  --methods LIST    comma-separated subset of wordnet,contextual (default wordnet)
  --seed S          integer seed for deterministic output (default 0)
  --min-freq N      drop output words with corpus frequency below N (default 0, off)
  --help            show this message`;

class UsageError extends Error {}

interface CliArgs {
  input: string;
  out: string;
  cfg: AugmentConfig;
}

function parseArgs(argv: string[]): CliArgs | "help" {
  let input: string | undefined;
  let out: string | undefined;
  let rate = 0.3;
  let methods: Method[] = ["wordnet"];
  let seed = 0;
  let minFreq = 0;

  const takeValue = (flag: string, i: number): string => {
    const v = argv[i + 1];
    if (v === undefined) {
      throw new UsageError(`${flag} expects a value`);
    }
    return v;
  };

  for (let i = 0; i < argv.length; i += 2) {
    const flag = argv[i]!;
    switch (flag) {
      case "--help":
      case "-h":
        return "help";
      case "--input":
        input = takeValue(flag, i);
        break;
      case "--out":
        out = takeValue(flag, i);
        break;
      case "--rate": {
        rate = Number(takeValue(flag, i));
        if (!Number.isFinite(rate)) {
          throw new UsageError("--rate expects a number");
        }
        break;
      }
      case "--methods": {
        const names = takeValue(flag, i)
          .split(",")
          .map((s) => s.trim())
          .filter((s) => s.length > 0);
        if (names.length === 0) {
          throw new UsageError("--methods expects at least one name");
        }
        for (const name of names) {
          if (name !== "wordnet" && name !== "contextual") {
            throw new UsageError(`unknown method '${name}'`);
          }
        }
        methods = names as Method[];
        break;
      }
      case "--seed": {
        seed = Number(takeValue(flag, i));
        if (!Number.isInteger(seed)) {
          throw new UsageError("--seed expects an integer");
        }
        break;
      }
      case "--min-freq": {
        minFreq = Number(takeValue(flag, i));
        if (!Number.isInteger(minFreq) || minFreq < 0) {
          throw new UsageError("--min-freq expects a non-negative integer");
        }
        break;
      }
      default:
        throw new UsageError(`unknown flag '${flag}'`);
    }
  }

  if (input === undefined) {
    throw new UsageError("--input is required");
  }
  if (out === undefined) {
    throw new UsageError("--out is required");
  }
  return {
    input,
    out,
    cfg: { changeRate: rate, methods, minFreqFilter: minFreq, seed },
  };
}

/**
 * Augment one file on disk. Returns the output path. A trailing newline in
 * the input is reproduced in the output; line count is preserved exactly.
 */
export function augmentFile(
  inputPath: string,
  outPath: string,
  cfg: AugmentConfig,
): string {
  const raw = readFileSync(inputPath, "utf8");
  const hadTrailingNewline = raw.endsWith("\n");
  const body = hadTrailingNewline ? raw.slice(0, -1) : raw;
  const lines = body.length === 0 ? [] : body.split(/\r?\n/);
  const result = augmentLines(lines, cfg);
  for (const w of result.warnings) {
    process.stderr.write(`warning: ${w}\n`);
  }
  const text = result.lines.join("\n") + (hadTrailingNewline ? "\n" : "");
  writeFileSync(outPath, text, "utf8");
  return outPath;
}

export function main(argv: string[]): number {
  let args: CliArgs | "help";
  try {
    args = parseArgs(argv);
  } catch (err) {
    if (err instanceof UsageError || err instanceof AugmentError) {
      process.stderr.write(`usage error: ${err.message}\n${USAGE}\n`);
      return 1;
    }
    throw err;
  }
  if (args === "help") {
    process.stdout.write(`${USAGE}\n`);
    return 0;
  }
  try {
    // Surface config problems as usage errors before touching the disk.
    validateConfig(args.cfg);
    const out = augmentFile(args.input, args.out, args.cfg);
    process.stdout.write(`augmented ${args.input} -> ${out}\n`);
    return 0;
  } catch (err) {
    if (err instanceof AugmentError) {
      process.stderr.write(`usage error: ${err.message}\n${USAGE}\n`);
      return 1;
    }
    if (err instanceof Error) {
      process.stderr.write(`error: ${err.message}\n`);
      return 2;
    }
    throw err;
  }
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(process.argv[1]).href;

if (invokedDirectly) {
  process.exit(main(process.argv.slice(2)));
}
