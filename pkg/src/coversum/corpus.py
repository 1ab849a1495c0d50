"""Corpus ingestion and report persistence.

A corpus lives in a directory with one JSON manifest naming clusters of
plain-text document and reference files. Reports are written as CSV (raw
rows) and/or a JSON envelope (header, rows, aggregates) with bit-stable
formatting: fixed field order, floats at six decimal places, LF endings.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ManifestError, MissingFileError
from .stopwords import DEFAULT_LIST_NAME, default_stopwords, load_stopword_file
from .textproc import TokenizedDocument, TokenizerConfig, tokenize_document

__all__ = [
    "Cluster",
    "Corpus",
    "ReportTable",
    "load_corpus",
    "manifest_dict",
    "render_report",
    "write_report",
    "read_report",
]


@dataclass(frozen=True)
class Cluster:
    id: str
    documents: tuple
    references: tuple
    genre: str | None = None


@dataclass(frozen=True)
class Corpus:
    name: str
    clusters: tuple
    fingerprint: str
    pipeline: dict
    exclusions: tuple = ()   # skipped defective files, with reasons
    duplicates: tuple = ()   # document ids whose content repeats an earlier one

    def documents(self):
        for cluster in self.clusters:
            for doc in cluster.documents:
                yield cluster, doc

    def unique_documents(self):
        dup = set(self.duplicates)
        for cluster, doc in self.documents():
            if doc.id not in dup:
                yield cluster, doc


def _require(condition: bool, message: str):
    if not condition:
        raise ManifestError(message)


def load_corpus(manifest_path) -> Corpus:
    """Load and tokenize a corpus described by a JSON manifest.

    Documents that tokenize to nothing are skipped with a recorded
    exclusion instead of failing the load; files that do not exist fail
    immediately. Document ids are the manifest-relative paths.
    """
    manifest_path = Path(manifest_path)
    if not manifest_path.is_file():
        raise MissingFileError(f"manifest not found: {manifest_path}")
    try:
        raw = json.loads(manifest_path.read_text("utf-8"))
    except json.JSONDecodeError as exc:
        raise ManifestError(f"manifest is not valid JSON: {exc}") from exc

    _require(isinstance(raw, dict), "manifest root must be an object")
    name = raw.get("name", manifest_path.stem)
    _require(isinstance(name, str), "manifest 'name' must be a string")
    cluster_entries = raw.get("clusters")
    _require(isinstance(cluster_entries, list) and cluster_entries,
             "manifest 'clusters' must be a non-empty array")

    pipeline_entry = raw.get("pipeline", {})
    _require(isinstance(pipeline_entry, dict), "manifest 'pipeline' must be an object")
    legacy_numbers = bool(pipeline_entry.get("legacy_numbers", True))
    stopword_file = pipeline_entry.get("stopword_file")
    if stopword_file:
        stopword_path = manifest_path.parent / stopword_file
        if not stopword_path.is_file():
            raise MissingFileError(f"stopword file not found: {stopword_path}")
        stopword_set = load_stopword_file(stopword_path)
        stopword_name = str(stopword_file)
    else:
        stopword_set = default_stopwords()
        stopword_name = DEFAULT_LIST_NAME
    config = TokenizerConfig(stem=False, legacy_numbers=legacy_numbers,
                             stopwords=stopword_set)

    root = manifest_path.parent
    digest = hashlib.sha256()
    exclusions: list = []
    seen_hashes: dict = {}
    duplicates: list = []
    clusters: list = []
    seen_ids: set = set()

    def load_file(rel: str, role: str) -> TokenizedDocument | None:
        path = root / rel
        if not path.is_file():
            raise MissingFileError(f"{role} file not found: {path}")
        data = path.read_bytes()
        digest.update(data)
        digest.update(b"\x00")
        doc = tokenize_document(str(rel), data.decode("utf-8"), config)
        if not doc.sentences:
            exclusions.append(f"{rel}: empty after tokenization, skipped")
            return None
        if role == "document":
            content_hash = hashlib.sha256(data).hexdigest()
            first = seen_hashes.setdefault(content_hash, str(rel))
            if first != str(rel):
                duplicates.append(str(rel))
        return doc

    for i, entry in enumerate(cluster_entries):
        _require(isinstance(entry, dict), f"cluster #{i} must be an object")
        cid = entry.get("id")
        _require(isinstance(cid, str) and cid, f"cluster #{i} needs a string 'id'")
        _require(cid not in seen_ids, f"duplicate cluster id {cid!r}")
        seen_ids.add(cid)
        doc_paths = entry.get("documents")
        _require(isinstance(doc_paths, list) and doc_paths,
                 f"cluster {cid!r} needs a non-empty 'documents' array")
        ref_paths = entry.get("references", [])
        _require(isinstance(ref_paths, list),
                 f"cluster {cid!r} 'references' must be an array")
        genre = entry.get("genre")
        _require(genre is None or isinstance(genre, str),
                 f"cluster {cid!r} 'genre' must be a string")
        docs = [d for d in (load_file(p, "document") for p in doc_paths) if d]
        refs = [r for r in (load_file(p, "reference") for p in ref_paths) if r]
        if not docs:
            exclusions.append(f"cluster {cid}: no usable documents, skipped")
            continue
        clusters.append(Cluster(cid, tuple(docs), tuple(refs), genre))

    _require(bool(clusters), "no usable clusters in manifest")
    pipeline = {
        "legacy_numbers": legacy_numbers,
        "stopword_list": stopword_name,
        "stemmer": "porter",
    }
    return Corpus(
        name=name,
        clusters=tuple(clusters),
        fingerprint=digest.hexdigest(),
        pipeline=pipeline,
        exclusions=tuple(exclusions),
        duplicates=tuple(duplicates),
    )


def manifest_dict(corpus: Corpus) -> dict:
    """Reconstruct the manifest structure of a loaded corpus.

    Writing this dict as JSON next to the same files and loading it again
    yields the same logical corpus (ids, order, genres, fingerprint).
    """
    clusters = []
    for cluster in corpus.clusters:
        entry = {
            "id": cluster.id,
            "documents": [d.id for d in cluster.documents],
            "references": [r.id for r in cluster.references],
        }
        if cluster.genre is not None:
            entry["genre"] = cluster.genre
        clusters.append(entry)
    out = {"name": corpus.name, "clusters": clusters}
    pipeline = {"legacy_numbers": corpus.pipeline.get("legacy_numbers", True)}
    stopword_list = corpus.pipeline.get("stopword_list")
    if stopword_list and stopword_list != DEFAULT_LIST_NAME:
        pipeline["stopword_file"] = stopword_list
    out["pipeline"] = pipeline
    return out


@dataclass(frozen=True)
class ReportTable:
    """Serialization currency for every report the toolkit emits."""

    kind: str
    header: dict
    columns: tuple
    rows: tuple
    aggregates: dict = field(default_factory=dict)


def _format_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.6f}"
    return str(value)


def _json_safe(value):
    if isinstance(value, float):
        return round(value, 6)
    if isinstance(value, dict):
        return {k: _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    return value


def render_report(report, fmt: str) -> str:
    """Render a report as 'csv' or 'json' text; deterministic for equal input."""
    table = report.to_table() if hasattr(report, "to_table") else report
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([_format_cell(c) for c in row])
        return buf.getvalue()
    if fmt == "json":
        envelope = {
            "kind": table.kind,
            "header": _json_safe(table.header),
            "columns": list(table.columns),
            "rows": _json_safe([list(r) for r in table.rows]),
            "aggregates": _json_safe(table.aggregates),
        }
        return json.dumps(envelope, indent=2) + "\n"
    raise ValueError(f"format must be 'csv' or 'json', got {fmt!r}")


def write_report(report, fmt: str, path) -> None:
    """Write a report file; identical input gives identical bytes (LF endings)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_report(report, fmt), "utf-8", newline="\n")


def read_report(path) -> dict:
    """Parse a JSON report envelope back into a dict."""
    return json.loads(Path(path).read_text("utf-8"))
