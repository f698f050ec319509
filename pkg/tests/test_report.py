from odogibbs import Commands, Report
from odogibbs.enums import ExitStatus
from odogibbs.report import row_key


def test_rows_are_sorted():
    rows = [{"n": 10}, {"n": 2}, {"kind": "series"}, {"kind": "measure", "word": "b"}]
    report = Report(Commands.MEASURE, rows)

    assert [row.get("n") for row in report.rows] == [2, 10, None, None]
    assert report.rows[2]["kind"] == "measure"
    assert report.columns == ("kind", "n", "word")
    assert len(report) == 4


def test_row_key_separates_types():
    assert row_key({"n": 3}) < row_key({"n": "3"})
    assert row_key({}) < row_key({"kind": "a"})


def test_status():
    assert Report(Commands.LEMMAS).status is ExitStatus.OK
    assert Report(Commands.LEMMAS, converged=False).status is ExitStatus.NOT_CONVERGED
    assert Report(Commands.LEMMAS, checks_passed=False, converged=False).status is ExitStatus.CHECK_FAILED
    assert Report(Commands.ORBIT, columns=("sample", "k")).columns == ("sample", "k")
