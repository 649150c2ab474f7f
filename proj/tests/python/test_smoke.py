import json
import math
import os
from pathlib import Path

import pytest

import snmine

DATA = Path(os.environ.get("SNMINE_TEST_DATA_DIR", Path(__file__).parent.parent / "data"))
FIXTURES = Path(
    os.environ.get("SNMINE_FIXTURE_DIR", Path(__file__).parents[2] / "data" / "fixtures")
)

FIX5 = [
    ("d1", "alice works with bob"),
    ("d2", "alice and carol study networks"),
    ("d3", "bob and carol write papers"),
    ("d4", "alice bob carol meet"),
    ("d5", "unrelated text here"),
]


@pytest.fixture
def space():
    return snmine.build_index(snmine.Corpus.from_texts(FIX5))


def test_tokenize_normalizes():
    assert snmine.tokenize("Alice, BOB!") == [("alice", 0), ("bob", 1)]


def test_counts(space):
    assert space.total_docs == 5
    assert snmine.singleton_event(space, snmine.Term("alice")) == ["d1", "d2", "d4"]
    assert snmine.doubleton_event(space, snmine.Term("alice"), snmine.Term("bob")) == ["d1", "d4"]
    assert snmine.probability_singleton(space, snmine.Term("alice")) == pytest.approx(0.6)
    with pytest.raises(snmine.DegeneratePairError):
        snmine.doubleton_event(space, snmine.Term("alice"), snmine.Term("alice"))


def test_measures():
    c = snmine.CountTriple(3, 3, 2, 5)
    assert snmine.jaccard(c) == pytest.approx(0.5)
    assert snmine.pmi(c) == pytest.approx(math.log2(10 / 9))


def test_fixture_jaccard():
    src = snmine.FixtureSource.from_file(FIXTURES / "web_hit_counts.json")
    report = json.loads(
        snmine.pair_behavior(src, snmine.Term("shahrul azman noah"), snmine.Term("opim salim sitompul"))
    )
    assert report["jaccard"] == pytest.approx(61 / 8269, abs=1e-12)
    with pytest.raises(snmine.MissingFixtureError):
        src.count(snmine.Term("nobody"))


def test_network(space):
    actors = [snmine.Actor("alice", "alice"), snmine.Actor("bob", "bob"), snmine.Actor("carol", "carol")]
    src = snmine.LocalSource(space)
    net = snmine.build_network(actors, src)
    assert len(net.vertices) == 3
    assert [w for _, _, w in net.edges] == [0.5, 0.5, 0.5]
    assert snmine.build_network(actors, src, threshold=0.55).edges == []
    assert json.loads(net.render("json"))["edges"]
    with pytest.raises(snmine.ConfigError):
        snmine.build_network(actors, src, measure=snmine.MeasureKind.pmi)


def test_rules(space):
    terms = [snmine.Term(n) for n in ("alice", "bob", "carol")]
    tx = [items for _, items in snmine.transactions_from_corpus(space, terms)]
    rules = snmine.mine_rules(tx)
    ab = [r for r in rules if r.antecedent == ["alice"] and r.consequent == ["bob"]]
    assert len(ab) == 1
    assert ab[0].support == pytest.approx(0.4)
    assert ab[0].confidence == pytest.approx(2 / 3)
    assert ab[0].holds
