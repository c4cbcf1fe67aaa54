/** JSON shapes exchanged with the authoring service. */

export interface FieldInfo {
  name: string;
  kind: "categorical" | "numerical" | "temporal";
  granularity: string | null;
}

export interface PaletteChoiceJson {
  palette: string;
  midpoint: number | null;
}

export interface PlanJson {
  field_emoji: Record<string, string>;
  value_emoji: Record<string, Record<string, string>>;
  numeric_palette: Record<string, PaletteChoiceJson>;
  field_order: string[];
  show_labels: boolean;
}

export interface SessionCreated {
  id: string;
  fields: FieldInfo[];
  row_count: number;
  plan: PlanJson;
  created_at: string;
}

export interface RecommendationItem {
  rank: number;
  emoji_id: string;
  emoji: string;
  score: number;
}

export interface RecommendationPage {
  target: string;
  page: number;
  page_size: number;
  total: number;
  items: RecommendationItem[];
}

export interface SeriesJson {
  field: string;
  op: string;
}

export interface UnitSpecJson {
  template: "unit_chart";
  group_by: string;
  series: SeriesJson[];
  unit_value: number | null;
  max_units_per_row?: number;
}

export interface TimeSeriesSpecJson {
  template: "time_series";
  time_field: string;
  value_field: string;
  window: number;
  palette: string;
  aggregation?: string;
}

export type SpecJson = UnitSpecJson | TimeSeriesSpecJson;

export interface PreviewResult {
  text: string;
  legend: [string, string][];
  spec: SpecJson;
}

export interface EmojiSearchItem {
  id: string;
  emoji: string;
  name: string;
  keywords: string[];
}

export interface EmojiSearchResult {
  query: string;
  items: EmojiSearchItem[];
}

export interface PaletteInfo {
  name: string;
  kind: "sequential" | "diverging";
  levels: string[];
  glyphs: string[];
}

/** Subset of plan keys accepted by the plan-edit endpoint. */
export interface PlanEdits {
  field_emoji?: Record<string, string>;
  value_emoji?: Record<string, Record<string, string>>;
  numeric_palette?: Record<string, PaletteChoiceJson>;
  field_order?: string[];
  show_labels?: boolean;
}
