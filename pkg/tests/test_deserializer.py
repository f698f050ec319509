from __future__ import annotations

import pytest
from odogibbs import Deserializer, DyadicRational, Reader, Serializer, Side, build_language

TABLE = build_language(8)


def _files():
    return (
        Serializer.serialize_language(TABLE, Side.UNDER).encode(),
        Serializer.serialize_language(TABLE, Side.OVER).encode(),
    )


def test_language_header():
    under, over = _files()

    assert under.splitlines()[0] == b"# odogibbs language build_depth=24 side=under max_len=8"
    assert under.splitlines()[1:3] == [b"1 a", b"1 b"]
    assert over.splitlines()[0].endswith(b"side=over max_len=8")


def test_language_round_trip():
    under, over = _files()
    table = Deserializer().load_language(Reader(under), Reader(over))

    assert (table.max_len, table.build_depth) == (8, 24)
    for length in range(1, 9):
        for side in Side:
            assert table.masks(length, side) == TABLE.masks(length, side)


def test_process():
    parsed = Deserializer().process(Reader(b"# odogibbs language build_depth=9 side=over max_len=2\r\n\n2 ab\n2 bb\n"))

    assert parsed.side is Side.OVER
    assert parsed.build_depth == 9
    assert parsed.words == {2: {0b10, 0b11}}


@pytest.mark.parametrize(
    "payload",
    [
        b"",
        b"1 a\n",
        b"# odogibbs language build_depth=9 side=over max_len=2\n2 abc\n",
        b"# odogibbs language build_depth=9 side=over max_len=2\n3 abb\n",
        b"# odogibbs language build_depth=9 side=over max_len=2\n2 a\n",
        b"# odogibbs language build_depth=9 side=over max_len=2\nab\n",
    ],
)
def test_malformed(payload: bytes):
    with pytest.raises(ValueError):
        Deserializer().process(Reader(payload))


def test_mismatched_files():
    under, over = _files()

    with pytest.raises(ValueError):
        Deserializer().load_language(Reader(over), Reader(under))

    other = Serializer.serialize_language(build_language(8, depth=30), Side.OVER).encode()
    with pytest.raises(ValueError):
        Deserializer().load_language(Reader(under), Reader(other))


def test_dyadic():
    assert Deserializer.deserialize_dyadic("5*2^-5") == DyadicRational(5, -5)
    assert Deserializer.deserialize_dyadic("3/64") == DyadicRational(3, -6)
