/**
 * Minimal observable state container. The DOM layer subscribes and re-renders;
 * tests read state directly. No framework, no magic: `update` shallow-merges a
 * patch and notifies listeners.
 *
 * `plan` always holds the last server-acknowledged plan. While a plan edit is
 * in flight it lives in `pending` (its keys mirrored in `dirty`), and the UI
 * shows `visiblePlan`: the acknowledged plan with the pending edit overlaid.
 * Acknowledgment replaces `plan` with the server echo; rejection just drops
 * the overlay, which is all a rollback takes.
 */

import type {
  EmojiSearchItem,
  FieldInfo,
  PaletteInfo,
  PlanEdits,
  PlanJson,
  PreviewResult,
  RecommendationPage,
  SpecJson,
} from "./types.js";

export interface AppState {
  sessionId: string | null;
  fields: FieldInfo[];
  rowCount: number;
  /** Last server-acknowledged plan; never holds unconfirmed edits. */
  plan: PlanJson | null;
  /** Optimistic edit overlay awaiting server acknowledgment, if any. */
  pending: PlanEdits | null;
  /** Plan keys with an edit in flight. */
  dirty: string[];
  spec: SpecJson | null;
  /** Server-rendered preview, displayed verbatim; the client never renders charts. */
  preview: PreviewResult | null;
  /** Page cursor per recommendation target, so paging survives panel switches. */
  pages: Record<string, number>;
  recommendations: Record<string, RecommendationPage>;
  searchResults: EmojiSearchItem[];
  palettes: PaletteInfo[];
  error: string | null;
}

export function initialState(): AppState {
  return {
    sessionId: null,
    fields: [],
    rowCount: 0,
    plan: null,
    pending: null,
    dirty: [],
    spec: null,
    preview: null,
    pages: {},
    recommendations: {},
    searchResults: [],
    palettes: [],
    error: null,
  };
}

/** Apply a partial edit on top of a plan, the same way the server merges it. */
export function mergePlanEdits(plan: PlanJson, edits: PlanEdits): PlanJson {
  const valueEmoji = Object.fromEntries(
    Object.entries(plan.value_emoji).map(([fname, mapping]) => [fname, { ...mapping }]),
  );
  for (const [fname, mapping] of Object.entries(edits.value_emoji ?? {})) {
    valueEmoji[fname] = { ...(valueEmoji[fname] ?? {}), ...mapping };
  }
  return {
    field_emoji: { ...plan.field_emoji, ...(edits.field_emoji ?? {}) },
    value_emoji: valueEmoji,
    numeric_palette: { ...plan.numeric_palette, ...(edits.numeric_palette ?? {}) },
    field_order: [...(edits.field_order ?? plan.field_order)],
    show_labels: edits.show_labels ?? plan.show_labels,
  };
}

/** The plan as the author sees it: acknowledged state plus any in-flight edit. */
export function visiblePlan(state: AppState): PlanJson | null {
  if (state.plan === null) return null;
  if (state.pending === null) return state.plan;
  return mergePlanEdits(state.plan, state.pending);
}

export type Listener = (state: AppState) => void;

export class Store {
  private state: AppState = initialState();
  private listeners: Listener[] = [];

  get(): AppState {
    return this.state;
  }

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  update(patch: Partial<AppState>): void {
    this.state = { ...this.state, ...patch };
    for (const listener of this.listeners) listener(this.state);
  }
}
