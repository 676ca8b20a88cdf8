from collections import Counter
from datetime import date

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crowdrec.ingestion import (
    DanglingReferenceError,
    DatasetError,
    DuplicateRegistrationError,
    MalformedRowError,
    active_workers,
    derive_indicators,
    load_dataset,
    load_dataset_dir,
    normalize_name,
    write_dataset,
)
from crowdrec.synth import synth_generate

from conftest import REGISTRATIONS_CSV, WORKER_ONE_TECH, reg, task


def _load(d):
    return load_dataset(d / "tasks.csv", d / "registrations.csv", d / "ratings.csv")


def test_load_counts(csv_dir):
    ds = _load(csv_dir)
    assert len(ds.tasks) == 3
    assert len(ds.registrations) == 5
    assert ds.tasks["T2"].technologies == ("Java", "HTML")
    assert ds.tasks["T3"].status == "open"
    r = ds.registrations[1]
    assert (r.worker_id, r.task_id, r.submitted, r.submission_date) == ("A", "T2", False, None)


def test_missing_rating_defaults_to_zero(csv_dir):
    ds = _load(csv_dir)
    assert ds.ratings == {"A": 1250, "B": 850, "C": 0}


def test_ratings_file_optional(csv_dir):
    ds = load_dataset(csv_dir / "tasks.csv", csv_dir / "registrations.csv")
    assert set(ds.ratings.values()) == {0}


def test_empty_registrations(csv_dir):
    (csv_dir / "registrations.csv").write_text(REGISTRATIONS_CSV.splitlines()[0] + "\n")
    ds = _load(csv_dir)
    assert len(ds.registrations) == 0
    assert len(ds.tasks) == 3


def test_dangling_task_reference(csv_dir):
    with open(csv_dir / "registrations.csv", "a") as fh:
        fh.write("A,T99,2015-01-03,,false,false\n")
    with pytest.raises(DanglingReferenceError) as exc:
        _load(csv_dir)
    assert any("T99" in p and ":7:" in p for p in exc.value.problems)


def test_duplicate_registration(csv_dir):
    with open(csv_dir / "registrations.csv", "a") as fh:
        fh.write("A,T1,2015-01-04,,false,false\n")
    with pytest.raises(DuplicateRegistrationError):
        _load(csv_dir)


@pytest.mark.parametrize(
    "row, field",
    [
        ("A,T3,2015-13-40,,false,false", "registration_date"),
        ("A,T3,2015-02-02,,maybe,false", "submitted"),
        (",T3,2015-02-02,,false,false", "worker_id"),
    ],
)
def test_malformed_row_names_file_line_field(csv_dir, row, field):
    with open(csv_dir / "registrations.csv", "a") as fh:
        fh.write(row + "\n")
    with pytest.raises(MalformedRowError) as exc:
        _load(csv_dir)
    (problem,) = exc.value.problems
    assert "registrations.csv:7:" in problem
    assert repr(field) in problem


def test_bad_prize_reported(csv_dir):
    text = (csv_dir / "tasks.csv").read_text().replace("300,", "lots,")
    (csv_dir / "tasks.csv").write_text(text)
    with pytest.raises(MalformedRowError, match="monetary_prize"):
        _load(csv_dir)


@pytest.mark.parametrize(
    "row",
    [
        "A,T3,2015-02-02,,false,true",  # valid without submission
        "A,T3,2015-02-02,,true,false",  # submitted without a date
        "A,T3,2015-02-02,2015-02-01,true,false",  # submitted before registering
    ],
)
def test_registration_invariants(csv_dir, row):
    with open(csv_dir / "registrations.csv", "a") as fh:
        fh.write(row + "\n")
    with pytest.raises(DatasetError):
        _load(csv_dir)


def test_task_invariants(csv_dir):
    with open(csv_dir / "tasks.csv", "a") as fh:
        fh.write("T4,Code,Java,10,2015-02-01,2015-01-01,completed\n")
    with pytest.raises(DatasetError, match="submission_end precedes"):
        _load(csv_dir)


def test_round_trip(csv_dir, tmp_path_factory):
    ds = _load(csv_dir)
    out = tmp_path_factory.mktemp("rt")
    write_dataset(ds, out)
    assert load_dataset_dir(out) == ds


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_round_trip_synthetic(tmp_path_factory, seed):
    ds = synth_generate(seed, 12, 30, months=2)
    out = tmp_path_factory.mktemp("rt")
    write_dataset(ds, out)
    assert load_dataset_dir(out) == ds


def test_normalize_name():
    assert normalize_name("  Node.JS ") == "node.js"
    assert normalize_name("UI  Prototype\tCompetition") == "ui prototype competition"


def test_wtech_counts_multi_technology_tasks():
    from crowdrec.ingestion import build_dataset

    ds = build_dataset(
        [task("a", techs=["Java"]), task("b", techs=["Java", "HTML"])],
        [reg("w", "a", date(2015, 1, 2)), reg("w", "b", date(2015, 1, 3))],
    )
    ind = derive_indicators(ds)
    assert ind.tech_counts("w") == {"java": 2, "html": 1}
    assert ind.is_expert("w", "HTML") and not ind.is_expert("w", "SQL")


def test_wtype_single_registration():
    from crowdrec.ingestion import build_dataset

    ds = build_dataset([task("a", "Code")], [reg("w", "a", date(2015, 1, 2))])
    assert derive_indicators(ds).type_counts("w") == {"code": 1}


def test_names_are_case_folded_for_matching():
    from crowdrec.ingestion import build_dataset

    ds = build_dataset(
        [task("a", "Code", ["JAVA "]), task("b", "code", ["java"])],
        [reg("w", "a", date(2015, 1, 2)), reg("w", "b", date(2015, 1, 3))],
    )
    ind = derive_indicators(ds)
    assert ind.tech_counts("w") == {"java": 2}
    assert ind.type_counts("w") == {"code": 2}
    assert ind.display["java"] == "JAVA "


def test_worker_one_top_five_technologies(worker_one):
    counts = derive_indicators(worker_one).tech_counts("I")
    assert counts == {normalize_name(k): v for k, v in WORKER_ONE_TECH.items()}


def _brute_force_counts(ds, worker):
    tech, typ = Counter(), Counter()
    for r in ds.registrations:
        if r.worker_id != worker:
            continue
        t = ds.tasks[r.task_id]
        for name in {normalize_name(x) for x in t.technologies}:
            tech[name] += 1
        typ[normalize_name(t.task_type)] += 1
    return tech, typ


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_indicator_sums(seed):
    ds = synth_generate(seed, 15, 40, months=2)
    ind = derive_indicators(ds)
    for w in ds.workers:
        mine = ds.registrations_of(w)
        assert sum(ind.tech_counts(w).values()) == sum(len(ds.tasks[r.task_id].tech_keys) for r in mine)
        assert sum(ind.type_counts(w).values()) == len(mine)
        tech, typ = _brute_force_counts(ds, w)
        assert dict(tech) == dict(ind.tech_counts(w))
        assert dict(typ) == dict(ind.type_counts(w))


def test_active_workers_by_month():
    from crowdrec.ingestion import build_dataset

    ds = build_dataset(
        [task("a"), task("b"), task("c", start=date(2015, 2, 1))],
        [reg("A", "a", date(2015, 1, 3)), reg("A", "b", date(2015, 1, 9)), reg("B", "c", date(2015, 2, 2))],
    )
    assert active_workers(ds, date(2015, 1, 20)) == {"A"}
    assert active_workers(ds, "2015-02") == {"B"}
    assert active_workers(ds, (2015, 3)) == set()


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 4))
def test_active_workers_subset(seed, month):
    ds = synth_generate(seed, 15, 40, months=4)
    assert active_workers(ds, (2014, month)) <= set(ds.workers)
