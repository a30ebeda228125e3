"""Command-line interface.

    squash run      --input FILE [--config FILE] [--backend mock|URL] ...
    squash classify --input FILE [--backend URL]
    squash stats    --input FILE [--format squad|quac|coqa] [--csv]
    squash serve    [--port N] [--host H]
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .budget import BudgetConfig
from .errors import SquashError
from .ingest import FORMATS, corpus_stats, ingest_rc_dataset, stats_to_csv
from .pipeline import PipelineConfig, prepare_document, squash
from .taxonomy import classify_batch


def _load_config(path):
    if path is None:
        return PipelineConfig()
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    return PipelineConfig.from_dict(data)


def _load_document(path, max_paragraph_chars):
    text = Path(path).read_text(encoding="utf-8")
    doc_id = Path(path).stem
    if path.endswith(".json"):
        data = json.loads(text)
        return prepare_document(
            paragraphs=data["paragraphs"],
            doc_id=doc_id,
            title=data.get("title"),
            max_paragraph_chars=max_paragraph_chars,
        )
    return prepare_document(
        raw_text=text, doc_id=doc_id, max_paragraph_chars=max_paragraph_chars
    )


def cmd_run(args):
    config = _load_config(args.config)
    if args.backend is not None:
        config = replace(config, backend=args.backend)
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    if args.workers is not None:
        config = replace(config, max_workers=args.workers)
    if args.general_fraction is not None or args.specific_fraction is not None:
        budget = BudgetConfig(
            general_fraction=(
                args.general_fraction
                if args.general_fraction is not None
                else config.budget.general_fraction
            ),
            specific_fraction=(
                args.specific_fraction
                if args.specific_fraction is not None
                else config.budget.specific_fraction
            ),
        )
        config = replace(config, budget=budget)

    document = _load_document(args.input, config.max_paragraph_chars)
    output = squash(document, config)
    payload = output.to_json()
    if args.out:
        Path(args.out).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)
    return 0


def cmd_classify(args):
    questions = [
        line.strip()
        for line in Path(args.input).read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    fallback = None
    if args.backend:
        from .backends.http import HttpBackend

        fallback = HttpBackend(args.backend)
    for question, cls in zip(questions, classify_batch(questions, fallback)):
        sys.stdout.write(f"{cls.label.value}\t{cls.source}\t{question}\n")
    return 0


def cmd_stats(args):
    corpus = ingest_rc_dataset(args.input, fmt=args.format)
    report = corpus_stats(corpus)
    payload = stats_to_csv(report) if args.csv else json.dumps(report, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)
    return 0


def cmd_serve(args):
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="squash",
        description="Convert documents into question-answer hierarchies.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="squash a document")
    run.add_argument("--input", required=True, help="document file (.txt or .json)")
    run.add_argument("--config", help="pipeline config JSON file")
    run.add_argument("--backend", help='"mock" or backend base URL')
    run.add_argument("--general-fraction", type=float, dest="general_fraction")
    run.add_argument("--specific-fraction", type=float, dest="specific_fraction")
    run.add_argument("--seed", type=int)
    run.add_argument("--workers", type=int, help="paragraph worker count")
    run.add_argument("--out", help="output JSON path (default stdout)")
    run.set_defaults(func=cmd_run)

    classify = sub.add_parser("classify", help="label questions, one per line")
    classify.add_argument("--input", required=True)
    classify.add_argument("--backend", help="fallback classifier URL")
    classify.set_defaults(func=cmd_classify)

    stats = sub.add_parser("stats", help="label distribution of an RC dataset")
    stats.add_argument("--input", required=True)
    stats.add_argument("--format", choices=FORMATS, default="squad")
    stats.add_argument("--csv", action="store_true")
    stats.add_argument("--out")
    stats.set_defaults(func=cmd_stats)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--host", default="127.0.0.1")
    serve.set_defaults(func=cmd_serve)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SquashError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
