// Scripted browser test: a jsdom-mounted app driven against the real
// Python service running mock backends (booted in global-setup).

import { JSDOM } from 'jsdom';
import { beforeAll, describe, expect, inject, it } from 'vitest';

import { ApiClient } from '../src/api.js';
import { ExplorerApp } from '../src/main.js';

// at seed 7 this paragraph yields exactly 4 GENERAL roots
const FIXTURE =
  'The Aldermoor ferry crossed the strait twice each morning. ' +
  'Rosa Quint piloted the ferry for forty years. ' +
  'A winter storm sank the ferry at its mooring in 1958. ' +
  'The town raised the wreck the next spring.';

function mountApp(): { app: ExplorerApp; root: HTMLElement } {
  const dom = new JSDOM('<!doctype html><html><body><div id="app"></div></body></html>');
  const root = dom.window.document.getElementById('app') as HTMLElement;
  const client = new ApiClient(inject('serviceUrl'));
  const app = new ExplorerApp(root, client, {
    pollIntervalMs: 50,
    submitConfig: { seed: 7, max_workers: 1 },
  });
  return { app, root };
}

function rows(root: HTMLElement, kind: string): HTMLElement[] {
  return [...root.querySelectorAll(`.tree-row.${kind}`)] as HTMLElement[];
}

describe('explorer against the live service', () => {
  let app: ExplorerApp;
  let root: HTMLElement;

  beforeAll(async () => {
    ({ app, root } = mountApp());
    await app.submit(FIXTURE);
  });

  it('renders only the four roots after a run', () => {
    expect(app.result).not.toBeNull();
    expect(app.result!.paragraphs[0]!.trees).toHaveLength(4);
    expect(rows(root, 'root')).toHaveLength(4);
    expect(rows(root, 'child')).toHaveLength(0);
  });

  it('expanding a root reveals exactly its children from the service JSON', () => {
    rows(root, 'root')[0]!.click();
    const expected = app.result!.paragraphs[0]!.trees[0]!.children.map(
      (c) => c.question,
    );
    const shown = rows(root, 'child').map(
      (el) => el.querySelector('.question')!.textContent,
    );
    expect(shown).toEqual(expected);
    expect(expected.length).toBeGreaterThan(0);
  });

  it('highlights the clicked answer span in the source text', () => {
    const child = rows(root, 'child')[0]!;
    child.click();
    const mark = root.querySelector('mark.answer-highlight');
    expect(mark).not.toBeNull();
    const expected = app.result!.paragraphs[0]!.trees[0]!.children[0]!.answer.text;
    expect(mark!.textContent).toBe(expected);
  });

  it('collapsing hides children and clears the highlight', () => {
    rows(root, 'root')[0]!.click();
    expect(rows(root, 'child')).toHaveLength(0);
    expect(root.querySelector('mark.answer-highlight')).toBeNull();
  });

  it('budget slider at 0.5 renders 2 of the 4 roots via server refilter', async () => {
    const slider = root.querySelector('.general-slider') as HTMLInputElement;
    slider.value = '50';
    await app.onBudgetChange();
    expect(rows(root, 'root')).toHaveLength(2);
    // the forest came from the service, not client-side math
    expect(app.result!.paragraphs[0]!.trees).toHaveLength(2);
    expect(app.result!.config['budget']).toEqual({
      general_fraction: 0.5,
      specific_fraction: 1.0,
    });
  });

  it('restoring the slider to 100% brings all roots back', async () => {
    const slider = root.querySelector('.general-slider') as HTMLInputElement;
    slider.value = '100';
    await app.onBudgetChange();
    expect(rows(root, 'root')).toHaveLength(4);
  });

  it('expansion state only ever references nodes present in the forest', async () => {
    rows(root, 'root')[0]!.click(); // expand one root
    const slider = root.querySelector('.general-slider') as HTMLInputElement;
    slider.value = '25';
    await app.onBudgetChange();
    const present = new Set(
      app.result!.paragraphs.flatMap((p) =>
        p.trees.map((t) => `p${p.index}|${t.root.answer.start}|${t.root.question}`),
      ),
    );
    for (const id of app.state.expanded) {
      expect(present.has(id)).toBe(true);
    }
  });

  it('clamps out-of-range slider fractions client-side', () => {
    const slider = root.querySelector('.general-slider') as HTMLInputElement;
    slider.value = '0';
    expect(app.fractions().general).toBeCloseTo(0.05);
    slider.value = '100';
    expect(app.fractions().general).toBe(1.0);
  });

  it('shows a validation message for empty input without calling the service', async () => {
    const { app: fresh, root: freshRoot } = mountApp();
    await fresh.submit('   ');
    expect(fresh.result).toBeNull();
    expect(
      freshRoot.querySelector('.status-line')!.textContent,
    ).toMatch(/empty/i);
  });

  it('loads a picked file into the document input', async () => {
    const { app: fresh, root: freshRoot } = mountApp();
    const file = new File(['A short document about wrens.'], 'doc.txt', {
      type: 'text/plain',
    });
    await fresh.loadFile(file);
    const input = freshRoot.querySelector('.doc-input') as HTMLTextAreaElement;
    expect(input.value).toBe('A short document about wrens.');
  });

  it('shows an error banner when the service is unreachable', async () => {
    const dom = new JSDOM('<!doctype html><html><body><div id="app"></div></body></html>');
    const broken = new ExplorerApp(
      dom.window.document.getElementById('app') as HTMLElement,
      new ApiClient('http://127.0.0.1:9'),
      { pollIntervalMs: 10 },
    );
    await broken.submit('Some document.');
    const banner = broken.root.querySelector('.error-banner') as HTMLElement;
    expect(banner.hidden).toBe(false);
    expect(broken.root.querySelector('.retry-btn')).not.toBeNull();
  });
});
