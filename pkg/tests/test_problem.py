import pytest

from overflow_repair import M8, M32, Interval, Outcome, ParseError
from overflow_repair.harness import check_problem, repair_problem, verify_problem
from overflow_repair.problem import format_problem, load_problem, parse_problem
from overflow_repair.report import RepairRecord, parse_tsv
from worked import DATA

TEXT = """\
# comment line
machine int8
var a in [1, 64]
var b in [-100, -1]   # trailing comment
var c in [40, 64]
rel a + b in [-50, 50]
rel -a - c in [-120, -41]
template 2*a + c in [0, 100]
query s1 sum: a + c + b
query r1 rel: a + c < b
repair s1: a + b + c
"""


def test_parse_problem():
    p = parse_problem(TEXT)
    assert p.machine == M8
    assert p.env.bound("b") == Interval(-100, -1)
    assert p.env.pair_bound("a", "b", 1) == Interval(-50, 50)
    assert p.env.pair_bound("a", "c", 1) == Interval(41, 120)
    assert len(p.env.templates) == 1
    assert [(q.id, q.kind) for q in p.queries] == [("s1", "sum"), ("r1", "rel")]
    assert p.repairs == {"s1": "a + b + c"}


def test_format_round_trips():
    p = parse_problem(TEXT)
    q = parse_problem(format_problem(p))
    assert q.env == p.env and q.machine == p.machine and q.repairs == p.repairs
    assert [x.expr for x in q.queries] == [x.expr for x in p.queries]


def test_default_machine():
    assert parse_problem("var x in [0, 1]\nquery q sum: x\n").machine == M32


@pytest.mark.parametrize(
    "text, line, column",
    [
        ("machine int12\n", 1, 9),
        ("var x in [0, 1]\nvar x in [0, 2]\n", 2, 5),
        ("var x in [0, 1]\nquery q sum: x +\n", 2, 17),
        ("var x in [0, 1]\nquery q prod: x\n", 2, 9),
        ("var x in [0, 1]\nquery q sum: y\n", 2, 1),
        ("var x in [0, 1]\nvar y in [0, 1]\nrel x + 2*y in [0, 1]\n", 3, 5),
        ("frobnicate\n", 1, 1),
        ("var x in [0, 1]\nquery q sum: x\nrepair p: x\n", 3, 1),
    ],
)
def test_errors_report_positions(text, line, column):
    with pytest.raises(ParseError) as info:
        parse_problem(text)
    assert (info.value.line, info.value.column) == (line, column)


def test_check_repair_verify_pipeline():
    p = load_problem(DATA / "mixed.prob")
    assert [r.safe for r in check_problem(p)] == [True, False, False]
    report = repair_problem(p)
    assert [r.outcome for r in report.records] == [Outcome.SAFE, Outcome.REPAIRED, Outcome.UNREPAIRABLE]
    assert sum(report.counts.values()) == len(p.queries)
    assert not report.all_resolved
    records = parse_tsv(report.tsv())
    assert [(r.id, r.outcome, r.text) for r in records] == [(r.id, r.outcome, r.text) for r in report.records]
    assert all(v.ok for v in verify_problem(p, records))
    assert all(v.ok for v in verify_problem(p))


def test_verify_rejects_bad_repairs():
    p = parse_problem(TEXT)
    bad = [
        RepairRecord("s1", "sum", Outcome.REPAIRED, "a + c + b"),
        RepairRecord("s1", "sum", Outcome.REPAIRED, "a + b"),
        RepairRecord("s1", "sum", Outcome.REPAIRED, "a + + b"),
        RepairRecord("zz", "sum", Outcome.REPAIRED, "a"),
    ]
    results = verify_problem(p, bad)
    assert [v.ok for v in results] == [False, False, False, False]
    assert "certificate" in results[0].detail
    assert "Z-equivalent" in results[1].detail


def test_parallel_repair_keeps_input_order():
    p = load_problem(DATA / "mixed.prob")
    serial = repair_problem(p)
    parallel = repair_problem(p, jobs=2)
    assert [r.id for r in parallel.records] == [r.id for r in serial.records]
    assert [r.text for r in parallel.records] == [r.text for r in serial.records]


def test_tsv_field_count_is_checked():
    with pytest.raises(ValueError):
        parse_tsv("a\tsum\tsafe\n")
