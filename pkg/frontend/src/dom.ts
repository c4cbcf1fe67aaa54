/**
 * Browser wiring: renders store state into the static skeleton from
 * index.html and forwards every interaction to the Workbench. All chart
 * content shown here came from the server; this layer never computes glyph
 * runs, bins, or legends itself.
 */

import { visiblePlan } from "./store.js";
import type { Store, AppState } from "./store.js";
import type { Workbench } from "./workbench.js";
import type { PlanJson, SpecJson } from "./types.js";

function el<T extends HTMLElement>(root: ParentNode, selector: string): T {
  const node = root.querySelector(selector);
  if (node === null) throw new Error(`missing element ${selector}`);
  return node as T;
}

/** Glyphs arrive on recommendation/search/palette payloads; cache them by id. */
class GlyphCache {
  private glyphs = new Map<string, string>();

  absorb(state: AppState): void {
    for (const page of Object.values(state.recommendations)) {
      for (const item of page.items) this.glyphs.set(item.emoji_id, item.emoji);
    }
    for (const item of state.searchResults) this.glyphs.set(item.id, item.emoji);
    for (const palette of state.palettes) {
      palette.levels.forEach((id, i) => {
        const glyph = palette.glyphs[i];
        if (glyph !== undefined) this.glyphs.set(id, glyph);
      });
    }
  }

  show(emojiId: string | undefined): string {
    if (emojiId === undefined) return "·";
    return this.glyphs.get(emojiId) ?? emojiId;
  }
}

export function mount(workbench: Workbench, store: Store, root: Document = document): void {
  const glyphs = new GlyphCache();
  let activeTarget: string | null = null;
  let dragFrom: number | null = null;

  const csvInput = el<HTMLTextAreaElement>(root, "#csv-input");
  const csvFile = el<HTMLInputElement>(root, "#csv-file");
  const loadButton = el<HTMLButtonElement>(root, "#load-csv");
  const fieldsPane = el<HTMLElement>(root, "#fields");
  const recsPane = el<HTMLElement>(root, "#recommendations");
  const searchBox = el<HTMLInputElement>(root, "#search-box");
  const searchButton = el<HTMLButtonElement>(root, "#search-run");
  const searchPane = el<HTMLElement>(root, "#search-results");
  const specForm = el<HTMLFormElement>(root, "#spec-form");
  const templateSelect = el<HTMLSelectElement>(root, "#spec-template");
  const previewPane = el<HTMLPreElement>(root, "#preview-text");
  const legendPane = el<HTMLElement>(root, "#legend");
  const copyButton = el<HTMLButtonElement>(root, "#copy-preview");
  const labelsToggle = el<HTMLInputElement>(root, "#show-labels");
  const errorBanner = el<HTMLElement>(root, "#error-banner");

  loadButton.addEventListener("click", () => {
    void workbench.loadCsv(csvInput.value);
  });
  csvFile.addEventListener("change", () => {
    const file = csvFile.files?.[0];
    if (!file) return;
    void file.text().then((text) => {
      csvInput.value = text;
      return workbench.loadCsv(text);
    });
  });

  searchButton.addEventListener("click", () => {
    void workbench.search(searchBox.value);
  });
  searchBox.addEventListener("keydown", (event) => {
    if (event.key === "Enter") {
      event.preventDefault();
      void workbench.search(searchBox.value);
    }
  });

  copyButton.addEventListener("click", () => {
    void workbench.copyPreview();
  });
  labelsToggle.addEventListener("change", () => {
    void workbench.setShowLabels(labelsToggle.checked);
  });

  function option(value: string, label = value): HTMLOptionElement {
    const node = root.createElement("option");
    node.value = value;
    node.textContent = label;
    return node;
  }

  function fillSelect(select: HTMLSelectElement, values: string[]): void {
    const previous = select.value;
    select.textContent = "";
    for (const value of values) select.append(option(value));
    if (values.includes(previous)) select.value = previous;
  }

  function syncSpecForm(state: AppState): void {
    const names = state.fields.map((f) => f.name);
    const temporal = state.fields
      .filter((f) => f.kind === "temporal")
      .map((f) => f.name);
    const numerical = state.fields
      .filter((f) => f.kind === "numerical")
      .map((f) => f.name);
    fillSelect(el<HTMLSelectElement>(specForm, "#spec-group-by"), names);
    fillSelect(el<HTMLSelectElement>(specForm, "#spec-series-field"), names);
    fillSelect(el<HTMLSelectElement>(specForm, "#spec-time-field"), temporal);
    fillSelect(el<HTMLSelectElement>(specForm, "#spec-value-field"), numerical);
    const paletteSelect = el<HTMLSelectElement>(specForm, "#spec-palette");
    fillSelect(paletteSelect, state.palettes.map((p) => p.name));
    specForm.classList.toggle(
      "template-unit",
      templateSelect.value === "unit_chart",
    );
  }

  templateSelect.addEventListener("change", () => syncSpecForm(store.get()));

  function numberOrNull(value: string): number | null {
    const trimmed = value.trim();
    if (trimmed === "") return null;
    const parsed = Number(trimmed);
    return Number.isFinite(parsed) ? parsed : null;
  }

  specForm.addEventListener("submit", (event) => {
    event.preventDefault();
    let spec: SpecJson;
    if (templateSelect.value === "unit_chart") {
      spec = {
        template: "unit_chart",
        group_by: el<HTMLSelectElement>(specForm, "#spec-group-by").value,
        series: [
          {
            field: el<HTMLSelectElement>(specForm, "#spec-series-field").value,
            op: el<HTMLSelectElement>(specForm, "#spec-series-op").value,
          },
        ],
        unit_value: numberOrNull(
          el<HTMLInputElement>(specForm, "#spec-unit-value").value,
        ),
      };
    } else {
      spec = {
        template: "time_series",
        time_field: el<HTMLSelectElement>(specForm, "#spec-time-field").value,
        value_field: el<HTMLSelectElement>(specForm, "#spec-value-field").value,
        window: Number(el<HTMLInputElement>(specForm, "#spec-window").value),
        palette: el<HTMLSelectElement>(specForm, "#spec-palette").value,
        aggregation: el<HTMLSelectElement>(specForm, "#spec-aggregation").value,
      };
    }
    void workbench.applySpec(spec);
  });

  function renderFieldChip(
    state: AppState,
    plan: PlanJson,
    name: string,
    position: number,
  ): HTMLElement {
    const field = state.fields.find((f) => f.name === name);
    const chip = root.createElement("div");
    chip.className = "field-chip";
    chip.draggable = true;
    chip.addEventListener("dragstart", () => {
      dragFrom = position;
    });
    chip.addEventListener("dragover", (event) => event.preventDefault());
    chip.addEventListener("drop", (event) => {
      event.preventDefault();
      if (dragFrom === null) return;
      void workbench.moveField(dragFrom, position);
      dragFrom = null;
    });

    const glyph = root.createElement("span");
    glyph.className = "chip-glyph";
    glyph.textContent = glyphs.show(plan.field_emoji[name]);
    const label = root.createElement("span");
    label.textContent = `${name} (${field?.kind ?? "?"})`;
    const suggest = root.createElement("button");
    suggest.type = "button";
    suggest.textContent = "suggest";
    suggest.addEventListener("click", () => {
      activeTarget = `field:${name}`;
      void workbench.showRecommendations(activeTarget);
    });
    chip.append(glyph, label, suggest);

    if (field?.kind === "categorical") {
      const values = Object.keys(plan.value_emoji[name] ?? {});
      for (const value of values.sort()) {
        const row = root.createElement("button");
        row.type = "button";
        row.className = "value-row";
        row.textContent = `${glyphs.show(plan.value_emoji[name]?.[value])} ${value}`;
        row.addEventListener("click", () => {
          activeTarget = `value:${name}:${value}`;
          void workbench.showRecommendations(activeTarget);
        });
        chip.append(row);
      }
    }
    if (field?.kind === "numerical" && state.palettes.length > 0) {
      const select = root.createElement("select");
      for (const palette of state.palettes) select.append(option(palette.name));
      const current = plan.numeric_palette[name];
      if (current) select.value = current.palette;
      select.addEventListener("change", () => {
        void workbench.choosePalette(name, select.value, current?.midpoint ?? null);
      });
      chip.append(select);
    }
    return chip;
  }

  function renderRecommendations(state: AppState): void {
    recsPane.textContent = "";
    if (activeTarget === null) return;
    const page = state.recommendations[activeTarget];
    if (page === undefined) return;
    const title = root.createElement("div");
    title.className = "recs-title";
    title.textContent = `${activeTarget} — page ${page.page} of ${Math.ceil(page.total / page.page_size)}`;
    recsPane.append(title);
    for (const item of page.items) {
      const button = root.createElement("button");
      button.type = "button";
      button.className = "rec-item";
      button.textContent = `${item.emoji} ${item.emoji_id} (${item.score.toFixed(3)})`;
      button.addEventListener("click", () => {
        if (activeTarget !== null) void workbench.assignEmoji(activeTarget, item.emoji_id);
      });
      recsPane.append(button);
    }
    const nav = root.createElement("div");
    const prev = root.createElement("button");
    prev.type = "button";
    prev.textContent = "prev";
    prev.disabled = page.page <= 1;
    prev.addEventListener("click", () => {
      if (activeTarget !== null) void workbench.showRecommendations(activeTarget, page.page - 1);
    });
    const next = root.createElement("button");
    next.type = "button";
    next.textContent = "next";
    next.disabled = page.page * page.page_size >= page.total;
    next.addEventListener("click", () => {
      if (activeTarget !== null) void workbench.showRecommendations(activeTarget, page.page + 1);
    });
    nav.append(prev, next);
    recsPane.append(nav);
  }

  function renderSearch(state: AppState): void {
    searchPane.textContent = "";
    for (const item of state.searchResults) {
      const button = root.createElement("button");
      button.type = "button";
      button.className = "rec-item";
      button.textContent = `${item.emoji} ${item.name}`;
      button.title = item.keywords.join(", ");
      button.addEventListener("click", () => {
        if (activeTarget !== null) void workbench.assignEmoji(activeTarget, item.id);
      });
      searchPane.append(button);
    }
  }

  function render(state: AppState): void {
    glyphs.absorb(state);
    errorBanner.textContent = state.error ?? "";
    errorBanner.hidden = state.error === null;

    fieldsPane.textContent = "";
    const plan = visiblePlan(state);
    if (plan !== null) {
      plan.field_order.forEach((name, position) => {
        fieldsPane.append(renderFieldChip(state, plan, name, position));
      });
      labelsToggle.checked = plan.show_labels;
    }

    renderRecommendations(state);
    renderSearch(state);
    syncSpecForm(state);

    previewPane.textContent = state.preview?.text ?? "";
    legendPane.textContent = "";
    for (const [glyph, meaning] of state.preview?.legend ?? []) {
      const row = root.createElement("div");
      row.textContent = `${glyph} ${meaning}`;
      legendPane.append(row);
    }
    copyButton.disabled = state.preview === null;
  }

  store.subscribe(render);
  void workbench.loadPalettes();
}
