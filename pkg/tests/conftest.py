from datetime import date, timedelta

import pytest

from crowdrec.ingestion import RegistrationRecord, TaskRecord, build_dataset

TASKS_CSV = """\
task_id,task_type,technologies,monetary_prize,registration_start,submission_end,status
T1,Code,Java,300,2015-01-02,2015-01-12,completed
T2,First2Finish,Java;HTML,120,2015-01-05,2015-01-20,completed
T3,Code,HTML,980,2015-02-01,2015-02-14,open
"""

REGISTRATIONS_CSV = """\
worker_id,task_id,registration_date,submission_date,submitted,valid_submission
A,T1,2015-01-03,2015-01-10,true,true
A,T2,2015-01-06,,false,false
B,T2,2015-01-07,2015-01-19,true,false
B,T3,2015-02-02,2015-02-05,true,true
C,T3,2015-02-03,,false,false
"""

RATINGS_CSV = """\
worker_id,rating
A,1250
B,850
"""


@pytest.fixture
def csv_dir(tmp_path):
    (tmp_path / "tasks.csv").write_text(TASKS_CSV)
    (tmp_path / "registrations.csv").write_text(REGISTRATIONS_CSV)
    (tmp_path / "ratings.csv").write_text(RATINGS_CSV)
    return tmp_path


def task(task_id, task_type="Code", techs=("Java",), prize=500.0, start=date(2015, 1, 1), days=10, status="completed"):
    return TaskRecord(task_id, task_type, tuple(techs), float(prize), start, start + timedelta(days=days), status)


def reg(worker, task_id, day, submitted_after=None, valid=False):
    sub = None if submitted_after is None else day + timedelta(days=submitted_after)
    return RegistrationRecord(worker, task_id, day, sub, sub is not None, valid)


# Worker I's profile: 244 registrations, 80 valid, Green belt, cheapest task 750,
# shortest registration-to-submission span 7 days. Technology counts are the
# five reported ones (Java 100, SQL 67, Android 60, Apex 67, .NET 32); type
# counts use the two reported (UI Prototype 100, First2Finish 42) plus three
# smaller types for the remaining 102 registrations.
WORKER_ONE_TECH = {"Java": 100, "SQL": 67, "Apex": 67, "Android": 60, ".NET": 32}
WORKER_ONE_TYPES = {
    "UI Prototype Competition": 100,
    "First2Finish": 42,
    "Code": 40,
    "Assembly Competition": 35,
    "Design": 27,
}


def worker_one_history(worker_id="I", first_day=date(2014, 1, 2)):
    n = 244
    techs = [[] for _ in range(n)]
    primary = ["Java"] * 100 + ["SQL"] * 67 + ["Apex"] * 67 + ["Android"] * 10
    for i, t in enumerate(primary):
        techs[i].append(t)
    for i in range(50):
        techs[i].append("Android")
    for i in range(50, 82):
        techs[i].append(".NET")
    types = [t for t, c in WORKER_ONE_TYPES.items() for _ in range(c)]

    tasks, regs = [], []
    for i in range(n):
        start = first_day + timedelta(days=i)
        tasks.append(task(f"H{i:03d}", types[i], techs[i], prize=750 + 250 * (i % 5), start=start, days=20))
        submitted_after = None
        if i < 120:
            submitted_after = 7 if i == 5 else 8 + i % 10
        regs.append(reg(worker_id, f"H{i:03d}", start + timedelta(days=1), submitted_after, valid=i < 80))
    return tasks, regs


@pytest.fixture
def worker_one():
    tasks, regs = worker_one_history()
    return build_dataset(tasks, regs, {"I": 1000})


# Motivating example: six tasks open the same fortnight, four workers.
MOTIVATING_CUTOFF = date(2015, 1, 14)


def motivating_dataset():
    tasks, regs = worker_one_history()
    week = MOTIVATING_CUTOFF
    tasks += [
        task("1", "First2Finish", ["Java"], 800, week, 10),
        task("2", "First2Finish", ["Java"], 900, week, 10),
        task("3", "Assembly Competition", ["Java"], 2500, week, 14),
        task("4", "Assembly Competition", ["Java"], 1000, week, 14),
        task("5", "Code", ["HTML", "Windows Server"], 600, week, 10),
        task("6", "UI Prototype Competition", ["HTML"], 700, week, 10),
    ]
    d = week + timedelta(days=1)
    regs += [reg("I", "2", d)]
    regs += [reg("II", t, d) for t in ("1", "2", "5", "6")]
    regs += [reg("III", t, d) for t in ("1", "2", "3", "4", "5")]
    regs += [reg("IV", t, d) for t in ("1", "5", "6")]
    return build_dataset(tasks, regs, {"I": 1000, "II": 500, "III": 1800, "IV": 1300})


@pytest.fixture
def motivating():
    return motivating_dataset()


# Five workers, ten tasks; T06-T09 are open in the two weeks after FIVE_CUTOFF
# and T10 opens later.
FIVE_CUTOFF = date(2015, 3, 1)


def five_by_ten_dataset():
    early = date(2015, 1, 5)
    open_ = date(2015, 2, 25)
    tasks = [
        task("T01", "Code", ["Java"], 300, early, 20),
        task("T02", "Code", ["Java", "SQL"], 500, early, 10),
        task("T03", "First2Finish", ["HTML"], 150, early, 6),
        task("T04", "First2Finish", ["HTML", "CSS"], 800, early, 15),
        task("T05", "Design", ["CSS"], 500, early, 25),
        task("T06", "Code", ["Java"], 400, open_, 14),
        task("T07", "First2Finish", ["HTML"], 200, open_, 5),
        task("T08", "Design", ["CSS", "HTML"], 1200, open_, 20),
        task("T09", "Code", ["SQL"], 600, open_, 9),
        task("T10", "First2Finish", ["Java", "HTML"], 600, date(2015, 4, 1), 10),
    ]
    d = date(2015, 1, 8)
    m = date(2015, 3, 3)
    regs = [
        reg("A", "T01", d, 9, True), reg("A", "T02", d, 4), reg("A", "T03", d),
        reg("B", "T02", d, 5, True), reg("B", "T04", d, 3, True), reg("B", "T06", m),
        reg("C", "T03", d, 2), reg("C", "T04", d), reg("C", "T05", d, 12, True), reg("C", "T09", m),
        reg("D", "T05", d, 6, True), reg("D", "T02", d), reg("D", "T08", m),
        reg("E", "T01", d, 11), reg("E", "T02", d), reg("E", "T07", m), reg("E", "T10", date(2015, 4, 2)),
    ]
    return build_dataset(tasks, regs, {"A": 1000, "B": 500, "C": 1600, "D": 2300, "E": 100})


@pytest.fixture
def five_by_ten():
    return five_by_ten_dataset()
