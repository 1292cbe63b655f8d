"""Corpus replays: every shipped script parses, renders stably and executes green."""
from pathlib import Path

import pytest

from cuspforge.catalog import FamilyParams, instantiate
from cuspforge.corpus import (
    script_a,
    script_b,
    script_c,
    script_d1,
    script_d2,
    script_e,
    standard_corpus,
)
from cuspforge.script import execute, parse, render

CORPUS_DIR = Path(__file__).resolve().parent.parent / "corpus"
CORPUS = standard_corpus()


def test_corpus_files_in_sync_with_generators():
    on_disk = {p.name: p.read_text() for p in CORPUS_DIR.glob("*.cusp")}
    assert on_disk == CORPUS


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_corpus_script_replays(name):
    script = parse(CORPUS[name])
    report = execute(script)
    assert report.ok, report.text
    assert report.failed_assertions == 0
    # parse(render()) stability on the statement stream
    assert parse(render(script)) == script


def test_render_matches_file_body():
    for name, text in CORPUS.items():
        body = "\n".join(
            line for line in text.splitlines() if not line.startswith("#")
        ) + "\n"
        assert render(parse(text)) == body


@pytest.mark.parametrize("k", range(2, 7))
def test_b_finalize_matches_catalog(k):
    report = execute(script_b(k))
    fi = instantiate(FamilyParams("b", k=k))
    assert report.profile == fi.profile


def test_b_k1_reaches_the_singly_cusped_cubic():
    report = execute(script_b(1))
    assert report.ok
    assert report.profile.degree == 3
    assert [list(c.entries) for c in report.profile.cusps] == [[2]]


@pytest.mark.parametrize("k", range(1, 7))
def test_c_finalize_matches_catalog(k):
    report = execute(script_c(k))
    assert report.profile == instantiate(FamilyParams("c", k=k)).profile


@pytest.mark.parametrize("k", range(1, 7))
def test_e_finalize_matches_catalog(k):
    report = execute(script_e(k))
    assert report.profile == instantiate(FamilyParams("e", k=k)).profile


@pytest.mark.parametrize("family", ["a1", "a2", "a3", "a4"])
@pytest.mark.parametrize("l,m", [(2, 2), (2, 3), (3, 2), (3, 3)])
def test_a_two_steps_match_catalog(family, l, m):
    report = execute(script_a(family, l, m))
    assert report.profile == instantiate(FamilyParams(family, u=3, l=l, m=m)).profile


@pytest.mark.parametrize("k", [1, 2])
def test_d_families_replay(k):
    r1 = execute(script_d1(k))
    assert r1.profile == instantiate(FamilyParams("d1", k=k)).profile
    r2 = execute(script_d2(k))
    assert r2.profile == instantiate(FamilyParams("d2", k=k)).profile


def test_ledger_zero_on_every_line():
    for name in ("b_k3.cusp", "c_k2.cusp", "e_k2.cusp", "a4_l3_m3.cusp"):
        report = execute(parse(CORPUS[name]))
        for line in report.lines:
            if "ledger=" in line:
                assert "ledger=0 " in line, line
