import threading

import pytest

from postselcat.errata import (
    COLUMNS,
    HEADER,
    Erratum,
    ErrataRegistry,
    format_number,
    parse_number,
    read_errata,
    scaled_error,
)
from postselcat.postselect import MeasurementParams
from postselcat.states import CatParams


def test_number_round_trip():
    for v in (0.1, -3.25e-17, 1 + 2j, 2.5 - 1e-300j):
        assert complex(parse_number(format_number(v))) == complex(v)
    assert format_number(2.0) == "2"


def test_scaled_error():
    assert scaled_error(1.5, 1.0) == pytest.approx(0.5)
    assert scaled_error(1e-3, 0.0) == pytest.approx(1e-3)
    assert scaled_error(110, 100) == pytest.approx(0.1)


def test_check_records_only_mismatch(tmp_path):
    reg = ErrataRegistry(tmp_path / "e.tsv")
    cat, meas = CatParams(1.0), MeasurementParams()
    assert reg.check(cat, meas, "kappa", 1.0, 1.0 + 1e-12, 1e-8)
    assert not reg.check(cat, meas, "a4", 2 + 1j, 2.0, 1e-8)
    assert not reg.check(cat, meas, "R", float("nan"), 0.0, 1e-8)
    assert len(reg) == 2
    lines = (tmp_path / "e.tsv").read_text().splitlines()
    assert lines[0] + "\n" == HEADER and lines[1].split("\t") == list(COLUMNS)
    back = read_errata(tmp_path / "e.tsv")
    assert [e.quantity for e in back] == ["a4", "R"]
    assert back[0].paper_value == 2 + 1j and back[0].oracle_value == 2


def test_appends_without_repeating_header(tmp_path):
    path = tmp_path / "e.tsv"
    e = Erratum(1, 0, 0, 1, 2, 3, "q", 1.0, 2.0)
    ErrataRegistry(path).record(e)
    ErrataRegistry(path).record(e)
    text = path.read_text()
    assert text.count(HEADER) == 1 and len(text.splitlines()) == 4


def test_concurrent_records_are_whole_lines(tmp_path):
    reg = ErrataRegistry(tmp_path / "e.tsv")
    e = Erratum(1, 0, 0, 1, 2, 3, "q", 1.0 + 1j, 2.0)

    def work():
        for _ in range(50):
            reg.record(e)

    threads = [threading.Thread(target=work) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(read_errata(tmp_path / "e.tsv")) == 200
