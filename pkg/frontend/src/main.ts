/**
 * Explorer application: submit a document, browse the resulting question
 * hierarchy, highlight answers in the source text, and steer the output
 * with budget sliders that refilter server-side.
 *
 * Two panes: source paragraphs left, question tree right. Only tree roots
 * are visible after a run; expanding a root reveals its children.
 */

import { ApiClient } from './api.js';
import { splitForHighlight } from './highlight.js';
import {
  clampFraction,
  initialViewState,
  pruneViewState,
  toggleNode,
  visibleRows,
  type TreeRow,
  type ViewState,
} from './model.js';
import type { SquashResult } from './types.js';

export interface AppOptions {
  pollIntervalMs?: number;
  /** pipeline config forwarded with document submissions */
  submitConfig?: Record<string, unknown>;
}

export class ExplorerApp {
  readonly root: HTMLElement;
  readonly client: ApiClient;
  state: ViewState = initialViewState();
  jobId: string | null = null;
  result: SquashResult | null = null;

  private doc: Document;
  private options: AppOptions;
  private banner!: HTMLElement;
  private bannerText!: HTMLElement;
  private statusLine!: HTMLElement;
  private input!: HTMLTextAreaElement;
  private sourcePane!: HTMLElement;
  private treePane!: HTMLElement;
  private generalSlider!: HTMLInputElement;
  private specificSlider!: HTMLInputElement;
  private lastAction: (() => void) | null = null;

  constructor(root: HTMLElement, client: ApiClient, options: AppOptions = {}) {
    this.root = root;
    this.client = client;
    this.options = options;
    this.doc = root.ownerDocument;
    this.buildSkeleton();
  }

  private el<K extends keyof HTMLElementTagNameMap>(
    tag: K,
    className?: string,
    text?: string,
  ): HTMLElementTagNameMap[K] {
    const node = this.doc.createElement(tag);
    if (className) node.className = className;
    if (text !== undefined) node.textContent = text;
    return node;
  }

  private buildSkeleton(): void {
    this.banner = this.el('div', 'error-banner');
    this.banner.hidden = true;
    this.bannerText = this.el('span', 'error-text');
    const retry = this.el('button', 'retry-btn', 'Retry');
    retry.addEventListener('click', () => {
      this.banner.hidden = true;
      this.lastAction?.();
    });
    this.banner.append(this.bannerText, retry);

    const form = this.el('div', 'submit-bar');
    this.input = this.el('textarea', 'doc-input');
    this.input.placeholder = 'Paste a document (blank lines separate paragraphs)';
    const picker = this.el('input', 'file-input');
    picker.type = 'file';
    picker.accept = '.txt,text/plain';
    picker.addEventListener('change', () => void this.loadFile(picker.files?.[0]));
    const submit = this.el('button', 'submit-btn', 'Squash it');
    submit.addEventListener('click', () => void this.submit(this.input.value));
    form.append(this.input, picker, submit);

    const controls = this.el('div', 'controls');
    this.generalSlider = this.makeSlider('general');
    this.specificSlider = this.makeSlider('specific');
    controls.append(
      this.labeled('broad questions', this.generalSlider, 'general-value'),
      this.labeled('follow-ups per question', this.specificSlider, 'specific-value'),
    );

    this.statusLine = this.el('div', 'status-line');

    const panes = this.el('div', 'panes');
    this.sourcePane = this.el('div', 'source-pane');
    this.treePane = this.el('div', 'tree-pane');
    panes.append(this.sourcePane, this.treePane);

    this.root.append(this.banner, form, controls, this.statusLine, panes);
  }

  private makeSlider(kind: 'general' | 'specific'): HTMLInputElement {
    const slider = this.el('input', `${kind}-slider`) as HTMLInputElement;
    slider.type = 'range';
    slider.min = '5';
    slider.max = '100';
    slider.step = '5';
    slider.value = '100';
    slider.addEventListener('input', () => this.updateSliderLabels());
    slider.addEventListener('change', () => void this.onBudgetChange());
    return slider;
  }

  private labeled(text: string, slider: HTMLInputElement, valueClass: string): HTMLElement {
    const wrap = this.el('label', 'slider-wrap');
    wrap.append(
      this.el('span', 'slider-label', text),
      slider,
      this.el('span', valueClass, '100%'),
    );
    return wrap;
  }

  private updateSliderLabels(): void {
    const g = this.root.querySelector('.general-value');
    const s = this.root.querySelector('.specific-value');
    if (g) g.textContent = `${this.generalSlider.value}%`;
    if (s) s.textContent = `${this.specificSlider.value}%`;
  }

  fractions(): { general: number; specific: number } {
    return {
      general: clampFraction(Number(this.generalSlider.value) / 100),
      specific: clampFraction(Number(this.specificSlider.value) / 100),
    };
  }

  private showError(message: string, retry: (() => void) | null): void {
    this.bannerText.textContent = message;
    this.banner.hidden = false;
    this.lastAction = retry;
  }

  private setStatus(text: string): void {
    this.statusLine.textContent = text;
  }

  async loadFile(file: File | undefined): Promise<void> {
    if (!file) return;
    this.input.value = await file.text();
    this.setStatus(`Loaded ${file.name}; ready to squash.`);
  }

  async submit(text: string): Promise<void> {
    if (!text.trim()) {
      this.setStatus('Nothing to squash: the document is empty.');
      return;
    }
    this.banner.hidden = true;
    this.setStatus('Working on it…');
    try {
      this.jobId = await this.client.submitDocument(text, this.options.submitConfig);
      const status = await this.client.pollJob(
        this.jobId,
        this.options.pollIntervalMs ?? 1000,
      );
      if (status.status === 'error' || !status.result) {
        this.showError(`The run failed: ${status.error ?? 'no result'}`, () =>
          void this.submit(text),
        );
        this.setStatus('');
        return;
      }
      this.result = status.result;
      this.state = initialViewState();
      const counts = this.countNodes(status.result);
      this.setStatus(
        `${counts.roots} broad questions across ` +
        `${status.result.paragraphs.length} paragraphs; click one to dig in.`,
      );
      this.render();
    } catch (err) {
      this.showError(`Could not reach the service: ${String(err)}`, () =>
        void this.submit(text),
      );
      this.setStatus('');
    }
  }

  private countNodes(result: SquashResult): { roots: number; children: number } {
    let roots = 0;
    let children = 0;
    for (const para of result.paragraphs) {
      roots += para.trees.length;
      for (const tree of para.trees) children += tree.children.length;
    }
    return { roots, children };
  }

  async onBudgetChange(): Promise<void> {
    if (!this.jobId || !this.result) return;
    const { general, specific } = this.fractions();
    this.state.generalFraction = general;
    this.state.specificFraction = specific;
    try {
      const result = await this.client.refilter(this.jobId, general, specific);
      if (result === null) return; // superseded by a newer slider position
      this.result = result;
      pruneViewState(this.state, result);
      this.render();
    } catch (err) {
      this.showError(`Refilter failed: ${String(err)}`, () =>
        void this.onBudgetChange(),
      );
    }
  }

  handleRowClick(row: TreeRow): void {
    if (!this.result) return;
    if (row.kind === 'root') {
      toggleNode(this.state, this.result, row.id);
      if (this.state.expanded.has(row.id)) {
        this.state.highlighted = row.id;
      }
    } else {
      this.state.highlighted = row.id;
    }
    this.render();
  }

  render(): void {
    if (!this.result) return;
    const rows = visibleRows(this.result, this.state);
    const byId = new Map(rows.map((row) => [row.id, row]));
    const highlighted =
      this.state.highlighted !== null ? byId.get(this.state.highlighted) : undefined;

    this.renderSource(highlighted);
    this.renderTree(rows);
  }

  private renderSource(highlighted: TreeRow | undefined): void {
    this.sourcePane.replaceChildren();
    for (const para of this.result!.paragraphs) {
      const block = this.el('div', 'paragraph');
      block.dataset.index = String(para.index);
      if (highlighted && highlighted.paragraphIndex === para.index) {
        const { before, mark, after } = splitForHighlight(
          para.text,
          highlighted.node.answer.start,
          highlighted.node.answer.end,
        );
        const markEl = this.el('mark', 'answer-highlight', mark);
        block.append(before, markEl, after);
        queueMicrotask(() => {
          if (typeof markEl.scrollIntoView === 'function') {
            markEl.scrollIntoView({ block: 'center' });
          }
        });
      } else {
        block.textContent = para.text;
      }
      this.sourcePane.append(block);
    }
  }

  private renderTree(rows: TreeRow[]): void {
    this.treePane.replaceChildren();
    for (const row of rows) {
      const div = this.el('div', `tree-row ${row.kind}`);
      div.dataset.id = row.id;
      if (row.id === this.state.highlighted) div.classList.add('selected');
      if (row.kind === 'root') {
        const marker = row.expanded ? '▾' : '▸';
        div.append(this.el('span', 'expander', marker));
      }
      div.append(this.el('span', 'question', row.node.question));
      if (row.kind === 'root' && !row.expanded && row.childCount > 0) {
        div.append(this.el('span', 'child-count', `(${row.childCount})`));
      }
      if (row.kind !== 'root') {
        div.append(this.el('span', 'answer-preview', row.node.answer.text));
      }
      div.addEventListener('click', () => this.handleRowClick(row));
      this.treePane.append(div);
    }
  }
}

export function initApp(
  root: HTMLElement,
  client?: ApiClient,
  options?: AppOptions,
): ExplorerApp {
  return new ExplorerApp(root, client ?? new ApiClient(), options);
}

// browser bootstrap; test environments mount explicitly instead
if (typeof document !== 'undefined') {
  const mount = document.getElementById('app');
  if (mount) initApp(mount);
}
