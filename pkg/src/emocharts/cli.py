"""Command line entry points: train models, query them, render charts, serve.

Exit codes: 0 success, 1 usage error, 2 data error (CSV, plan files,
render problems), 3 model error (lexicon/embeddings/palettes fail to
load or training fails). Chart text goes to standard output and the
legend to standard error, so stdout can be piped straight to a clipboard.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .assets import (
    DEFAULT_EMBEDDINGS_PATH,
    DEFAULT_LEXICON_PATH,
    DEFAULT_PALETTES_PATH,
)
from .chart import (
    ChartSpec,
    RenderError,
    SeriesSpec,
    plan_from_dict,
    propose_plan,
    render_time_series,
    render_unit_chart,
)
from .embedding import (
    EmbeddingFileError,
    TrainConfig,
    TrainError,
    load_table,
    save_table,
    train_table,
)
from .lexicon import LexiconError, load_lexicon
from .recommend import load_palettes, recommend
from .tabular import CsvError, ingest_csv

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_MODEL = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage problems; 2 is reserved for data errors here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class DataError(Exception):
    pass


class ModelError(Exception):
    pass


def build_parser() -> _Parser:
    parser = _Parser(prog="emocharts", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="train an embedding model from a lexicon")
    train.add_argument("--lexicon", required=True)
    train.add_argument("--out", required=True)
    train.add_argument("--dim", type=int, default=64)
    train.add_argument("--window", type=int, default=5)
    train.add_argument("--epochs", type=int, default=15)
    train.add_argument("--seed", type=int, default=42)
    train.add_argument("--negative", type=int, default=5)
    train.add_argument("--lr", type=float, default=0.025)
    train.add_argument("--min-count", type=int, default=2)
    train.add_argument("--subsample", type=float, default=1e-3)

    rec = sub.add_parser("recommend", help="rank emojis for a phrase")
    rec.add_argument("--embeddings", default=str(DEFAULT_EMBEDDINGS_PATH))
    rec.add_argument("--lexicon", default=str(DEFAULT_LEXICON_PATH))
    rec.add_argument("--text", required=True)
    rec.add_argument("-k", type=int, default=10)

    chart = sub.add_parser("chart", help="render a CSV file as an emoji chart")
    chart.add_argument("--csv", required=True)
    chart.add_argument("--template", required=True, choices=["unit", "timeseries"])
    chart.add_argument("--group-by")
    chart.add_argument("--agg", choices=["sum", "mean", "count"])
    chart.add_argument("--unit", type=float)
    chart.add_argument("--time-field")
    chart.add_argument("--value-field")
    chart.add_argument("--window", type=int)
    chart.add_argument("--palette", default="emoji-10")
    chart.add_argument("--labels", action="store_true")
    chart.add_argument("--plan")
    chart.add_argument("--embeddings", default=str(DEFAULT_EMBEDDINGS_PATH))
    chart.add_argument("--lexicon", default=str(DEFAULT_LEXICON_PATH))
    chart.add_argument("--palettes", default=str(DEFAULT_PALETTES_PATH))

    serve = sub.add_parser("serve", help="start the local authoring service")
    serve.add_argument("--port", type=int, default=8765)
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--lexicon", default=str(DEFAULT_LEXICON_PATH))
    serve.add_argument("--embeddings", default=str(DEFAULT_EMBEDDINGS_PATH))
    serve.add_argument("--palettes", default=str(DEFAULT_PALETTES_PATH))
    serve.add_argument("--ui-dir", default=None)

    return parser


def _load_lexicon(path) -> object:
    try:
        return load_lexicon(path)
    except (OSError, LexiconError) as exc:
        raise ModelError(f"cannot load lexicon: {exc}")


def _load_table(path):
    try:
        return load_table(path)
    except (OSError, EmbeddingFileError) as exc:
        raise ModelError(f"cannot load embeddings: {exc}")


def cmd_train(args) -> int:
    lexicon = _load_lexicon(args.lexicon)
    try:
        config = TrainConfig(
            dimension=args.dim,
            window=args.window,
            negative_samples=args.negative,
            epochs=args.epochs,
            learning_rate_initial=args.lr,
            min_token_count=args.min_count,
            seed=args.seed,
            subsample_threshold=args.subsample,
        )
        table = train_table(lexicon, config)
        save_table(table, args.out)
    except (ValueError, TrainError, OSError) as exc:
        raise ModelError(str(exc))
    print(f"vocabulary: {len(table.token_vectors)} tokens")
    print(f"emoji coverage: {len(table.emoji_vectors)} of {len(lexicon)} entries")
    return EXIT_OK


def cmd_recommend(args) -> int:
    lexicon = _load_lexicon(args.lexicon)
    table = _load_table(args.embeddings)
    try:
        ranked = recommend(table, lexicon, args.text, k=args.k)
    except ValueError as exc:
        raise DataError(str(exc))
    if not ranked:
        from .recommend import DEFAULT_PLACEHOLDER_ID

        glyph = ""
        if DEFAULT_PLACEHOLDER_ID in lexicon:
            glyph = lexicon.get(DEFAULT_PLACEHOLDER_ID).emoji + " "
        print(
            f"no tokens of {args.text!r} are in the model vocabulary; "
            f"placeholder: {glyph}{DEFAULT_PLACEHOLDER_ID}"
        )
        return EXIT_OK
    for r in ranked:
        print(f"{r.rank} {lexicon.get(r.emoji_id).emoji} {r.emoji_id} {r.score:.6f}")
    return EXIT_OK


def _chart_spec(args, parser: _Parser) -> ChartSpec:
    if args.template == "unit":
        missing = [
            flag
            for flag, value in (("--group-by", args.group_by),
                                ("--value-field", args.value_field))
            if value is None
        ]
        if missing:
            parser.error(f"unit template requires {' and '.join(missing)}")
        return ChartSpec(
            template="unit_chart",
            group_by=args.group_by,
            series=[SeriesSpec(args.value_field, args.agg or "sum")],
            unit_value=args.unit,
        )
    missing = [
        flag
        for flag, value in (("--time-field", args.time_field),
                            ("--value-field", args.value_field),
                            ("--window", args.window))
        if value is None
    ]
    if missing:
        parser.error(f"timeseries template requires {' and '.join(missing)}")
    return ChartSpec(
        template="time_series",
        time_field=args.time_field,
        value_field=args.value_field,
        window=args.window,
        palette=args.palette,
        aggregation=args.agg or "mean",
    )


def cmd_chart(args, parser: _Parser) -> int:
    spec = _chart_spec(args, parser)
    try:
        ds = ingest_csv(Path(args.csv))
    except (OSError, CsvError) as exc:
        raise DataError(f"cannot ingest {args.csv}: {exc}")
    lexicon = _load_lexicon(args.lexicon)
    try:
        palettes = load_palettes(args.palettes, lexicon)
    except (OSError, ValueError) as exc:
        raise ModelError(f"cannot load palettes: {exc}")

    if args.plan:
        try:
            raw = json.loads(Path(args.plan).read_text(encoding="utf-8"))
            plan = plan_from_dict(raw)
            plan.validate(lexicon, ds)
        except (OSError, ValueError, KeyError) as exc:
            raise DataError(f"cannot use plan file {args.plan}: {exc}")
    else:
        table = _load_table(args.embeddings)
        plan = propose_plan(ds, table, lexicon)
        plan.show_labels = False
    if args.labels:
        plan.show_labels = True

    try:
        spec.validate(ds)
        if spec.template == "unit_chart":
            rendered = render_unit_chart(ds, plan, spec, lexicon)
        else:
            rendered = render_time_series(ds, plan, spec, palettes, lexicon)
    except (RenderError, ValueError, KeyError) as exc:
        detail = exc.args[0] if exc.args else str(exc)
        raise DataError(str(detail))

    sys.stdout.write(rendered.text)
    sys.stdout.flush()
    for emoji_id, meaning in rendered.legend:
        glyph = lexicon.get(emoji_id).emoji if emoji_id in lexicon else emoji_id
        print(f"{glyph} {meaning}", file=sys.stderr)
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import ModelLoadError, create_app, load_runtime

    try:
        runtime = load_runtime(args.lexicon, args.embeddings, args.palettes)
    except ModelLoadError as exc:
        raise ModelError(str(exc))
    ui_dir = args.ui_dir
    if ui_dir is None:
        candidate = Path.cwd() / "frontend" / "dist"
        ui_dir = candidate if candidate.is_dir() else None
    app = create_app(runtime, ui_dir=ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    for stream in (sys.stdout, sys.stderr):
        if hasattr(stream, "reconfigure"):
            try:
                stream.reconfigure(encoding="utf-8")
            except (ValueError, OSError):
                pass
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "train":
            return cmd_train(args)
        if args.command == "recommend":
            return cmd_recommend(args)
        if args.command == "chart":
            return cmd_chart(args, parser)
        return cmd_serve(args)
    except DataError as exc:
        print(f"emocharts: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ModelError as exc:
        print(f"emocharts: model error: {exc}", file=sys.stderr)
        return EXIT_MODEL


if __name__ == "__main__":
    sys.exit(main())
