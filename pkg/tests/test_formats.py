import io

import pytest

from surfcensus import TriangleSet
from surfcensus.formats import (
    ParseError,
    dump_complex,
    parse_complex,
    parse_coordinates,
    read_complexes,
    write_complexes,
    write_coordinates,
    write_off,
)


def test_parse_dump_roundtrip(sphere5):
    line = dump_complex(sphere5)
    assert line == "1,2,3;1,2,4;1,3,4;2,3,5;2,4,5;3,4,5"
    assert parse_complex(line) == sphere5


def test_parse_infers_n():
    c = parse_complex("1,2,3;1,2,4")
    assert c.n == 4


def test_parse_unsorted_vertices_rejected():
    with pytest.raises(ParseError) as exc:
        parse_complex("1,3,2")
    assert exc.value.line == 1


def test_parse_unsorted_triangles_rejected():
    with pytest.raises(ParseError) as exc:
        parse_complex("1,2,4;1,2,3", lineno=3)
    assert exc.value.line == 3
    assert exc.value.column == 7


def test_parse_duplicate_triangle_rejected():
    with pytest.raises(ParseError, match="duplicate"):
        parse_complex("1,2,3;1,2,3")


def test_parse_out_of_range_rejected():
    with pytest.raises(ParseError, match="outside"):
        parse_complex("1,2,3;1,2,9", n=5)
    with pytest.raises(ParseError, match="9"):
        parse_complex("1,2,3;1,2,9", n=5)


def test_parse_bad_token_points_at_column():
    with pytest.raises(ParseError) as exc:
        parse_complex("1,2,3;1,x,4")
    assert exc.value.column == 9


def test_parse_permits_partial_complexes():
    # labels missing from 1..n parse fine; they fail verification instead
    c = parse_complex("1,2,3", n=5)
    assert c.n == 5


def test_file_roundtrip(sphere5, moebius, tetra):
    buf = io.StringIO()
    write_complexes(buf, [tetra, sphere5, moebius])
    buf.seek(0)
    assert read_complexes(buf) == [tetra, sphere5, moebius]


def test_coordinates_roundtrip(csaszar):
    buf = io.StringIO()
    write_coordinates(buf, csaszar.as_dict())
    buf.seek(0)
    assert parse_coordinates(buf) == csaszar.as_dict()


def test_coordinates_reject_duplicates():
    with pytest.raises(ParseError, match="duplicate"):
        parse_coordinates(io.StringIO("1 0 0 0\n1 1 1 1\n"))


def test_off_export(moebius, csaszar):
    buf = io.StringIO()
    write_off(buf, moebius, csaszar.as_dict())
    lines = buf.getvalue().splitlines()
    assert lines[0] == "OFF"
    assert lines[1] == "7 14 0"
    assert len(lines) == 2 + 7 + 14
    assert lines[2].split() == ["3.0", "-3.0", "0.0"]
    # faces are 0-based index triples
    assert lines[9].split() == ["3", "0", "1", "2"]
