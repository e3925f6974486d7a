"""Shared helpers for the test modules."""

from __future__ import annotations

from pathlib import Path

from shaperec.parsing import load_graph
from shaperec.rdf import Iri
from shaperec.reader import read_document

FIXTURES = Path(__file__).parent / "fixtures"
EX = "http://example.org/"


def ex(local: str) -> Iri:
    return Iri(EX + local)


def fixture_graph(name: str):
    return load_graph(FIXTURES / name)[0]


def fixture_doc(name: str):
    return read_document(fixture_graph(name))
