/** Split paragraph text around a character range for answer highlighting. */

export interface HighlightParts {
  before: string;
  mark: string;
  after: string;
}

export function splitForHighlight(
  text: string,
  start: number,
  end: number,
): HighlightParts {
  const lo = Math.max(0, Math.min(start, text.length));
  const hi = Math.max(lo, Math.min(end, text.length));
  return {
    before: text.slice(0, lo),
    mark: text.slice(lo, hi),
    after: text.slice(hi),
  };
}
