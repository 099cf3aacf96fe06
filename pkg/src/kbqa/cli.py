"""Operator command line.

Subcommands: serve (bind the gateway), load (register descriptors), ask
(one question, locally or against a running gateway), stats (Table-style
dataset report), datasets (list registrations). `--json` output uses the
same serializer as the HTTP API, so the shapes are identical.
"""

from __future__ import annotations

import dataclasses
import json
import sys
from pathlib import Path
from typing import Optional

import click
import httpx

from .answering import LlmClient, answer, answer_payload
from .config import descriptor_to_wire, load_config, load_descriptor
from .errors import KbqaError, RemoteServiceUnavailable
from .gateway import Registry, dataset_summary, serve as serve_gateway
from .structure import ingest_conllu


def _fail(code: str, message: str) -> None:
    click.echo(f"error {code}: {message}", err=True)
    sys.exit(2)


def _request(method: str, url: str, **kwargs) -> dict:
    try:
        response = httpx.request(method, url, timeout=30.0, **kwargs)
    except Exception as exc:
        _fail(RemoteServiceUnavailable.code, f"cannot reach {url}: {exc}")
    if response.status_code // 100 != 2:
        try:
            envelope = response.json()["error"]
            _fail(envelope["code"], envelope["message"])
        except (ValueError, KeyError, TypeError):
            _fail("INTERNAL",
                  f"{url} returned status {response.status_code}")
    return response.json()


def _registry_from_config(config_path: str):
    config = load_config(config_path)
    registry = Registry()
    for descriptor in config.datasets:
        registry.register(descriptor)
    return config, registry


def _print_payload(payload: dict, as_json: bool) -> None:
    if as_json:
        click.echo(json.dumps(payload, indent=2, sort_keys=False))
        return
    click.echo(f"stage: {payload['stage']}")
    click.echo(f"verified: {str(payload['verified']).lower()}")
    if "truth" in payload:
        click.echo(f"truth: {str(payload['truth']).lower()}")
    if "rows" in payload and payload.get("columns"):
        click.echo("rows:")
        for row in payload["rows"]:
            click.echo("  " + "\t".join(cell["text"] for cell in row))
    if payload.get("llm_text") is not None:
        click.echo("answer (language model, may be unreliable):")
        click.echo("  " + payload["llm_text"].replace("\n", "\n  "))
    if payload.get("sparql"):
        click.echo("sparql:")
        for line in payload["sparql"].splitlines():
            click.echo("  " + line)
    if "score" in payload:
        click.echo(f"score: {payload['score']:.6f}")
    if "trace" in payload:
        click.echo("trace:")
        block = json.dumps(payload["trace"], indent=2)
        for line in block.splitlines():
            click.echo("  " + line)


@click.group()
def main() -> None:
    """Question answering over registered knowledge bases."""


@main.command()
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Gateway configuration file (JSON).")
@click.option("--host", default=None, help="Override the configured host.")
@click.option("--port", default=None, type=int,
              help="Override the configured port.")
@click.option("--static", "static_dir", default=None,
              type=click.Path(file_okay=False),
              help="Serve this directory at / (the web console build).")
def serve(config_path: str, host: Optional[str], port: Optional[int],
          static_dir: Optional[str]) -> None:
    """Start the HTTP gateway."""
    try:
        config = load_config(config_path)
        if host is not None:
            config = dataclasses.replace(config, host=host)
        if port is not None:
            config = dataclasses.replace(config, port=port)
        if static_dir is not None:
            config = dataclasses.replace(config, static_dir=static_dir)
        serve_gateway(config)
    except KbqaError as exc:
        _fail(exc.code, str(exc))


@main.command()
@click.argument("question")
@click.option("--dataset", required=True, help="Dataset id to ask.")
@click.option("--config", "config_path", default=None,
              type=click.Path(exists=True, dir_okay=False),
              help="Answer locally using this configuration.")
@click.option("--endpoint", default=None,
              help="Ask a running gateway at this base URL instead.")
@click.option("--trace", is_flag=True, help="Include the pipeline trace.")
@click.option("--json", "as_json", is_flag=True,
              help="Print the raw answer payload as JSON.")
@click.option("--conllu", "conllu_path", default=None,
              type=click.Path(exists=True, dir_okay=False),
              help="Use this CoNLL-U parse instead of the heuristic parser "
                   "(local mode only).")
def ask(question: str, dataset: str, config_path: Optional[str],
        endpoint: Optional[str], trace: bool, as_json: bool,
        conllu_path: Optional[str]) -> None:
    """Ask one question and print the answer."""
    if endpoint:
        if conllu_path:
            _fail("PARSE_ERROR", "--conllu only works in local mode")
        payload = _request("POST", endpoint.rstrip("/") + "/ask",
                           json={"dataset": dataset, "question": question,
                                 "trace": trace})
        _print_payload(payload, as_json)
        return
    if not config_path:
        _fail("PARSE_ERROR", "either --config or --endpoint is required")
    try:
        config, registry = _registry_from_config(config_path)
        runtime = registry.get(dataset)
        structure = None
        if conllu_path:
            structure = ingest_conllu(Path(conllu_path).read_bytes(),
                                      question)
        llm = LlmClient(config.llm) if config.llm else None
        result, pipeline_trace = answer(question, runtime,
                                        defaults=config.defaults, llm=llm,
                                        structure=structure)
    except KbqaError as exc:
        _fail(exc.code, str(exc))
    payload = answer_payload(result, pipeline_trace if trace else None)
    _print_payload(payload, as_json)


@main.command()
@click.argument("descriptors", nargs=-1, required=True,
                type=click.Path(exists=True, dir_okay=False))
@click.option("--endpoint", default=None,
              help="Register against a running gateway at this base URL.")
def load(descriptors, endpoint: Optional[str]) -> None:
    """Load dataset descriptor files (validates KBs; registers remotely
    with --endpoint)."""
    try:
        if endpoint:
            for path in descriptors:
                descriptor = load_descriptor(path)
                _request("POST", endpoint.rstrip("/") + "/datasets",
                         json=descriptor_to_wire(descriptor))
                click.echo(f"registered {descriptor.dataset_id}")
            return
        registry = Registry()
        for path in descriptors:
            descriptor = load_descriptor(path)
            registry.register(descriptor)
            summary = dataset_summary(registry.get(descriptor.dataset_id))
            s = summary["stats"]
            click.echo(
                f"loaded {descriptor.dataset_id}: {s['triples']} triples, "
                f"{s['entities']} entities, {s['predicates']} predicates")
    except KbqaError as exc:
        _fail(exc.code, str(exc))


@main.command()
@click.option("--dataset", required=True, help="Dataset id to report on.")
@click.option("--config", "config_path", default=None,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--endpoint", default=None,
              help="Query a running gateway at this base URL.")
@click.option("--json", "as_json", is_flag=True)
def stats(dataset: str, config_path: Optional[str], endpoint: Optional[str],
          as_json: bool) -> None:
    """Print the dataset's triple/entity/predicate counts."""
    summary = None
    if endpoint:
        listing = _request("GET", endpoint.rstrip("/") + "/datasets")
        for item in listing:
            if item.get("dataset_id") == dataset:
                summary = item
                break
        if summary is None:
            _fail("DATASET_NOT_FOUND",
                  f"dataset {dataset!r} is not registered")
    else:
        if not config_path:
            _fail("PARSE_ERROR", "either --config or --endpoint is required")
        try:
            config, registry = _registry_from_config(config_path)
            summary = dataset_summary(registry.get(dataset))
        except KbqaError as exc:
            _fail(exc.code, str(exc))
    if as_json:
        click.echo(json.dumps(summary, indent=2))
        return
    s = summary["stats"]
    click.echo(f"dataset: {summary['dataset_id']} ({summary['name']})")
    click.echo(f"triples: {s['triples']}")
    click.echo(f"entities: {s['entities']}")
    click.echo(f"predicates: {s['predicates']}")


@main.command()
@click.option("--config", "config_path", default=None,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--endpoint", default=None,
              help="Query a running gateway at this base URL.")
@click.option("--json", "as_json", is_flag=True)
def datasets(config_path: Optional[str], endpoint: Optional[str],
             as_json: bool) -> None:
    """List registered datasets."""
    if endpoint:
        listing = _request("GET", endpoint.rstrip("/") + "/datasets")
    else:
        if not config_path:
            _fail("PARSE_ERROR", "either --config or --endpoint is required")
        try:
            config, registry = _registry_from_config(config_path)
        except KbqaError as exc:
            _fail(exc.code, str(exc))
        snapshot = registry.snapshot()
        listing = [dataset_summary(snapshot[k]) for k in sorted(snapshot)]
    if as_json:
        click.echo(json.dumps(listing, indent=2))
        return
    for item in listing:
        s = item["stats"]
        click.echo(f"{item['dataset_id']}\t{item['name']}\t"
                   f"triples={s['triples']} entities={s['entities']} "
                   f"predicates={s['predicates']}")


if __name__ == "__main__":
    main()
