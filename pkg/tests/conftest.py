"""Shared paths and pipeline helpers for the test suite."""

from pathlib import Path

import pytest

from stagec.cli import elaborate_source, parse_verdict
from stagec.syntax.parser import parse_program
from stagec.typecheck.elaborate import check_program

ROOT = Path(__file__).resolve().parents[1]
CORPUS = ROOT / "corpus"
GOLDEN = Path(__file__).resolve().parent / "golden"
DATA = Path(__file__).resolve().parent / "data"

CORPUS_FILES = sorted(CORPUS.glob("*.sth"))
ACCEPTED = [f for f in CORPUS_FILES if parse_verdict(f.read_text()).kind != "reject"]


def elaborate(text: str):
    return check_program(parse_program(text))


@pytest.fixture(params=CORPUS_FILES, ids=lambda p: p.stem)
def corpus_file(request):
    return request.param


@pytest.fixture(params=ACCEPTED, ids=lambda p: p.stem)
def accepted_file(request):
    return request.param


@pytest.fixture
def accepted_core(accepted_file):
    return elaborate_source(accepted_file.read_text())
