/**
 * Pure view-model: what the tree pane shows for a given result and view
 * state. Rendering is a function of (result, state); no pipeline logic
 * lives client-side.
 */

import type { QANode, SquashResult } from './types.js';

export interface ViewState {
  expanded: Set<string>;
  generalFraction: number;
  specificFraction: number;
  /** node id whose answer is highlighted in the source pane, if any */
  highlighted: string | null;
}

export function initialViewState(): ViewState {
  return {
    expanded: new Set(),
    generalFraction: 1.0,
    specificFraction: 1.0,
    highlighted: null,
  };
}

export interface TreeRow {
  id: string;
  kind: 'root' | 'child' | 'orphan';
  paragraphIndex: number;
  node: QANode;
  childCount: number;
  expanded: boolean;
}

/** Stable across refilters: identity is content, not tree position. */
export function nodeId(paragraphIndex: number, node: QANode): string {
  return `p${paragraphIndex}|${node.answer.start}|${node.question}`;
}

export function visibleRows(result: SquashResult, state: ViewState): TreeRow[] {
  const rows: TreeRow[] = [];
  for (const para of result.paragraphs) {
    for (const tree of para.trees) {
      const id = nodeId(para.index, tree.root);
      const expanded = state.expanded.has(id);
      rows.push({
        id,
        kind: 'root',
        paragraphIndex: para.index,
        node: tree.root,
        childCount: tree.children.length,
        expanded,
      });
      if (expanded) {
        for (const child of tree.children) {
          rows.push({
            id: nodeId(para.index, child),
            kind: 'child',
            paragraphIndex: para.index,
            node: child,
            childCount: 0,
            expanded: false,
          });
        }
      }
    }
    for (const orphan of para.orphans) {
      rows.push({
        id: nodeId(para.index, orphan),
        kind: 'orphan',
        paragraphIndex: para.index,
        node: orphan,
        childCount: 0,
        expanded: false,
      });
    }
  }
  return rows;
}

export function allNodeIds(result: SquashResult): Set<string> {
  const ids = new Set<string>();
  for (const para of result.paragraphs) {
    for (const tree of para.trees) {
      ids.add(nodeId(para.index, tree.root));
      for (const child of tree.children) ids.add(nodeId(para.index, child));
    }
    for (const orphan of para.orphans) ids.add(nodeId(para.index, orphan));
  }
  return ids;
}

export function toggleNode(state: ViewState, result: SquashResult, id: string): void {
  if (!allNodeIds(result).has(id)) return;
  if (state.expanded.has(id)) {
    state.expanded.delete(id);
  } else {
    state.expanded.add(id);
  }
  // a collapsed subtree cannot keep a highlight alive
  const visible = new Set(visibleRows(result, state).map((row) => row.id));
  if (state.highlighted !== null && !visible.has(state.highlighted)) {
    state.highlighted = null;
  }
}

/**
 * Reconcile the view state with a freshly fetched forest: expansion
 * survives for nodes that still exist, everything else is dropped.
 */
export function pruneViewState(state: ViewState, result: SquashResult): void {
  const ids = allNodeIds(result);
  for (const id of [...state.expanded]) {
    if (!ids.has(id)) state.expanded.delete(id);
  }
  if (state.highlighted !== null && !ids.has(state.highlighted)) {
    state.highlighted = null;
  }
}

/** Budget sliders accept (0, 1]; out-of-range values clamp, never error. */
export function clampFraction(value: number): number {
  if (Number.isNaN(value)) return 1.0;
  return Math.min(1.0, Math.max(0.05, value));
}
