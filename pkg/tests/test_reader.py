import pytest
from odogibbs import Reader


def test_reader():
    reader = Reader(b"# header\r\n1 a\r\n1 b\n2 bb")

    assert reader.position == 0
    assert reader.buffer == b"# header\n1 a\n1 b\n2 bb"

    assert reader.read(1) == b"#"
    assert reader.position == 1

    with pytest.raises(RuntimeError):
        assert reader.read_until(b"abab")

    assert reader.read_until(b"\n") == b" header"
    assert reader.line == 1
    assert reader.read_line() == "1 a"
    assert reader.read_line() == "1 b"
    assert reader.read_line() == "2 bb"
    assert reader.line == 4
    assert reader.at_end
    assert reader.read_line() is None


def test_empty_reader():
    reader = Reader(b"")

    assert reader.at_end
    assert reader.read_line() is None
    assert reader.read() == b""
