import json

import pytest

from coversum.corpus import load_corpus
from coversum.model import build_instance
from coversum.textproc import document_from_sentences


def doc_from(sentences, doc_id="doc"):
    return document_from_sentences(doc_id, sentences)


def instance_from_sets(unit_sets, doc_id="doc"):
    """CoverageInstance whose sentence i covers exactly unit_sets[i]."""
    sentences = [" ".join(sorted(s)) for s in unit_sets]
    return build_instance(doc_from(sentences, doc_id))


@pytest.fixture
def make_corpus(tmp_path):
    """Write a corpus directory from {cluster: {docs: [...], refs: [...]}}."""

    def _make(clusters, name="fixture", pipeline=None, genre=None):
        root = tmp_path / name
        manifest = {"name": name, "clusters": []}
        if pipeline:
            manifest["pipeline"] = pipeline
        for cid, spec in clusters.items():
            doc_paths = []
            for i, text in enumerate(spec["docs"]):
                rel = f"docs/{cid}-{i}.txt"
                path = root / rel
                path.parent.mkdir(parents=True, exist_ok=True)
                path.write_text(text, "utf-8")
                doc_paths.append(rel)
            ref_paths = []
            for i, text in enumerate(spec.get("refs", [])):
                rel = f"refs/{cid}-{i}.txt"
                path = root / rel
                path.parent.mkdir(parents=True, exist_ok=True)
                path.write_text(text, "utf-8")
                ref_paths.append(rel)
            entry = {"id": cid, "documents": doc_paths, "references": ref_paths}
            if spec.get("genre"):
                entry["genre"] = spec["genre"]
            manifest["clusters"].append(entry)
        manifest_path = root / "manifest.json"
        manifest_path.write_text(json.dumps(manifest, indent=2), "utf-8")
        return manifest_path

    return _make


@pytest.fixture
def demo_corpus_dir(make_corpus):
    """Manifest path (string) of the small demo corpus, for CLI tests."""
    manifest = make_corpus({
        "flood": {
            "docs": ["Heavy rain caused a flood in the valley. "
                     "The river crested early Monday. "
                     "Residents moved to higher ground before dawn."],
            "refs": ["A flood hit the valley after heavy rain. "
                     "Residents moved to higher ground."],
        },
        "fire": {
            "docs": ["A fire burned the old mill on Tuesday. "
                     "Firefighters contained the blaze within hours."],
            "refs": ["Fire destroyed the mill. Firefighters contained it quickly."],
        },
    }, name="demo")
    return str(manifest)


@pytest.fixture
def demo_corpus(make_corpus):
    manifest = make_corpus({
        "flood": {
            "docs": ["Heavy rain caused a flood in the valley. "
                     "The river crested early Monday. "
                     "Residents moved to higher ground before dawn."],
            "refs": ["A flood hit the valley after heavy rain. "
                     "Residents moved to higher ground."],
        },
        "fire": {
            "docs": ["A fire burned the old mill on Tuesday. "
                     "Firefighters contained the blaze within hours."],
            "refs": ["Fire destroyed the mill. Firefighters contained it quickly."],
        },
    })
    return load_corpus(manifest)
