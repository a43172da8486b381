import pandas as pd
import pytest

from silverlab import ALL_EXPERIMENTS, EXPERIMENTS_BY_NAME
from silverlab.constructions.oracles import PatternOracle
from silverlab.experiments import (
    AntiDemocracyExperiment,
    BuildTreeExperiment,
    DensityExperiment,
    ExperimentBase,
    ForcingExperiment,
    TriplesExperiment,
    WitnessFExperiment,
)
from silverlab.experiments.base import COLUMNS
from silverlab.experiments.catalog import decade_horizons, preset_family
from silverlab.speclang import parse


def test_registry_is_complete():
    assert len(ALL_EXPERIMENTS) == 11
    assert [c.name for c in ALL_EXPERIMENTS] == sorted(EXPERIMENTS_BY_NAME)


@pytest.mark.parametrize("cls", ALL_EXPERIMENTS)
def test_experiment_has_name_and_property(cls):
    assert isinstance(cls.name, str) and cls.name
    assert isinstance(cls.cites, str) and cls.cites


@pytest.mark.parametrize("cls", ALL_EXPERIMENTS)
def test_examples(cls):
    d = cls.example()
    raw = d.run()
    assert raw is not None
    clean = d.normalize(raw)
    assert isinstance(clean, pd.DataFrame)
    assert clean.shape[0] > 0
    assert all(c in list(clean) for c in COLUMNS)
    assert (clean["property"] == cls.cites).all()
    assert d.validate(clean)


@pytest.mark.parametrize("cls", ALL_EXPERIMENTS)
def test_execute_reports_every_row(cls):
    result = cls.example().execute()
    assert result.valid
    assert result.name == cls.name
    assert len(result.lines) == result.frame.shape[0]
    assert all(line.endswith(f"[{cls.cites}]") for line in result.lines)


def test_put_writes_csv(datapath):
    d = TriplesExperiment.example()
    result = d.execute(store=True)
    fp = datapath / "TriplesExperiment" / "triples.csv"
    assert fp.exists()
    stored = pd.read_csv(fp)
    assert stored.shape[0] == result.frame.shape[0]
    assert list(stored.columns[:4]) == list(COLUMNS)


def test_validate_rejects_missing_columns():
    d = DensityExperiment.example()
    with pytest.raises(ValueError):
        d.validate(pd.DataFrame({"check": ["x"], "ok": [True]}))


def test_validate_empty_table_is_invalid():
    d = DensityExperiment.example()
    assert not d.validate(pd.DataFrame(columns=list(COLUMNS)))


def test_seed_is_carried():
    d = TriplesExperiment.example()
    assert d.seed == 0
    assert isinstance(d, ExperimentBase)


def test_decade_horizons():
    assert decade_horizons(1000) == (10, 100, 1000)
    assert decade_horizons(500) == (10, 100, 500)
    assert decade_horizons(7) == (7,)


def test_random_preset_family_is_seeded():
    a = [o.to_text() for o in preset_family("random", 4, seed=3)]
    b = [o.to_text() for o in preset_family("random", 4, seed=3)]
    assert a == b
    assert len(a) == 5


def test_from_document_uses_bindings():
    doc = parse("F = dictator(0)\nfam = Dplus(0.9)\n")
    (exp,) = AntiDemocracyExperiment.from_document(doc)
    result = exp.execute()
    assert result.valid
    assert "yes: b = ~finite{0}" in result.lines[0]


def test_from_document_one_per_directive():
    doc = parse(
        'a = periodic("1110")\n'
        "run triples(a, horizon=100)\n"
        "run triples(a, horizon=200)\n"
        "run density(a, horizon=1000)\n"
    )
    exps = TriplesExperiment.from_document(doc)
    assert [e.horizon for e in exps] == [100, 200]
    (dens,) = DensityExperiment.from_document(doc)
    assert dens.horizons == (10, 100, 1000)


def test_directive_options_override_keywords():
    doc = parse('a = periodic("1110")\nrun triples(a, horizon=100)\n')
    (exp,) = TriplesExperiment.from_document(doc, horizon=40)
    assert exp.horizon == 40


def test_build_tree_preset_keyword():
    doc = parse('run build_tree(3/4, 2, oracle="ones")\n')
    (exp,) = BuildTreeExperiment.from_document(doc)
    assert [o.to_text() for o in exp.oracles] == ["ones(1)", "ones(2)", "ones(3)"]
    assert exp.execute().valid


def test_unverified_meets_fail_the_run(monkeypatch):
    monkeypatch.setenv("SILVERLAB_ENUMERATION_CAP", "2")
    result = ForcingExperiment("meet", [PatternOracle((0, 1, 0, 1, 0))]).execute()
    assert not result.valid
    assert result.lines[0].startswith('meets pattern("01010"): FAILED (unverified)')


def test_witness_f_rows_name_the_covering_generator():
    doc = parse(
        "f = assign(K=inf, free=arith(1, 2), fix{0:5})\n"
        'run witness_f(f, "out", 2, 4)\n'
    )
    (exp,) = WitnessFExperiment.from_document(doc)
    result = exp.execute()
    assert not result.valid
    assert result.lines[0].startswith("y in N_f: ")
    assert result.lines[1].startswith("y outside F_3: inside F_3 via G_3(g ∪ {0 ↦ 5}), g = ")
