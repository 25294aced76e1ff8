/**
 * Tokenization shared by every augmenter pass.
 *
 * A token is a maximal run of Unicode letters or digits, the same rule the
 * topic-model preprocessor applies downstream. Spans are kept so substitution
 * can splice replacements into the original line without disturbing the
 * punctuation and whitespace around them.
 */

export interface TokenSpan {
  /** The token text as it appears in the line. */
  text: string;
  /** Offset of the first character. */
  start: number;
  /** Offset one past the last character. */
  end: number;
}

const TOKEN_RE = /[\p{L}\p{N}]+/gu;

/** All token spans of a line, left to right. */
export function tokenSpans(line: string): TokenSpan[] {
  const spans: TokenSpan[] = [];
  for (const m of line.matchAll(TOKEN_RE)) {
    spans.push({ text: m[0], start: m.index, end: m.index + m[0].length });
  }
  return spans;
}

/** Just the token strings, lowercased. */
export function tokens(line: string): string[] {
  return tokenSpans(line).map((s) => s.text.toLowerCase());
}
