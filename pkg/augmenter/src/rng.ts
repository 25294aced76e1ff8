/**
 * Deterministic pseudo-random numbers for the augmenter.
 *
 * SplitMix64 is small, fast, and passes the statistical tests that matter at
 * this scale. All state lives in a single 64-bit word, so per-line generators
 * are cheap to derive: each input line gets its own stream seeded from the
 * global seed and the line index. That makes the output independent of
 * processing order and stable when lines are added or removed elsewhere in
 * the file.
 */

const MASK64 = (1n << 64n) - 1n;
const GAMMA = 0x9e3779b97f4a7c15n;

/** One SplitMix64 output step applied to a raw 64-bit value. */
function mix64(x: bigint): bigint {
  let z = (x + GAMMA) & MASK64;
  z = ((z ^ (z >> 30n)) * 0xbf58476d1ce4e5b9n) & MASK64;
  z = ((z ^ (z >> 27n)) * 0x94d049bb133111ebn) & MASK64;
  return (z ^ (z >> 31n)) & MASK64;
}

export class SplitMix64 {
  private state: bigint;

  constructor(seed: number | bigint) {
    this.state = BigInt(seed) & MASK64;
  }

  /** Next raw 64-bit draw. */
  nextU64(): bigint {
    this.state = (this.state + GAMMA) & MASK64;
    let z = this.state;
    z = ((z ^ (z >> 30n)) * 0xbf58476d1ce4e5b9n) & MASK64;
    z = ((z ^ (z >> 27n)) * 0x94d049bb133111ebn) & MASK64;
    return (z ^ (z >> 31n)) & MASK64;
  }

  /** Uniform integer in [0, n). Rejection sampling, no modulo bias. */
  int(n: number): number {
    if (!Number.isInteger(n) || n <= 0) {
      throw new RangeError(`int() needs a positive integer bound, got ${n}`);
    }
    const bound = BigInt(n);
    const span = MASK64 + 1n;
    const threshold = span - (span % bound);
    for (;;) {
      const draw = this.nextU64();
      if (draw < threshold) {
        return Number(draw % bound);
      }
    }
  }

  /**
   * First k entries of a seeded permutation of [0, n): a partial
   * Fisher-Yates shuffle. Returned in draw order.
   */
  sample(n: number, k: number): number[] {
    if (k > n) {
      throw new RangeError(`cannot sample ${k} from ${n}`);
    }
    const pool = Array.from({ length: n }, (_, i) => i);
    const out: number[] = [];
    for (let i = 0; i < k; i += 1) {
      const j = i + this.int(n - i);
      const tmp = pool[i]!;
      pool[i] = pool[j]!;
      pool[j] = tmp;
      out.push(pool[i]!);
    }
    return out;
  }
}

/**
 * Stream seed for one line: global seed mixed with the line index.
 * Two mix rounds keep nearby indices from producing nearby states.
 */
export function deriveLineSeed(seed: number, lineIndex: number): bigint {
  const base = mix64(BigInt(seed) & MASK64);
  return mix64(base ^ ((BigInt(lineIndex) + 1n) * GAMMA) & MASK64);
}
