"""Shared fixtures: seeded corpora and JSON schema validation."""

import json
import random
from pathlib import Path

import pytest
from jsonschema import Draft202012Validator
from referencing import Registry, Resource

from szk import corpus

SCHEMA_DIR = Path(__file__).resolve().parents[1] / "src" / "szk" / "schemas"

CORPUS_SEED = 12345
CORPUS_SIZE = 200


def _registry() -> Registry:
    resources = []
    for path in SCHEMA_DIR.glob("*.json"):
        doc = json.loads(path.read_text())
        resources.append((doc["$id"], Resource.from_contents(doc)))
    return Registry().with_resources(resources)


_REGISTRY = _registry()


def validate_payload(schema_name: str, payload) -> None:
    if not schema_name.endswith(".json"):
        schema_name += ".json"
    doc = json.loads((SCHEMA_DIR / schema_name).read_text())
    Draft202012Validator(doc, registry=_REGISTRY).validate(payload)


@pytest.fixture(scope="session")
def finite_dp_corpus():
    rng = random.Random(CORPUS_SEED)
    return [corpus.random_description(rng) for _ in range(CORPUS_SIZE)]


@pytest.fixture(scope="session")
def mixed_corpus():
    rng = random.Random(CORPUS_SEED + 1)
    return [corpus.random_description(rng, finite_dp_only=False)
            for _ in range(CORPUS_SIZE)]
