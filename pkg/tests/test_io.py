import io

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from seismic.errors import ParseError
from seismic.estimator import Cascade
from seismic.io import import_snap, load_corpus, parse_cascade, serialize_cascade, write_cascade


def test_parse_two_events():
    c = parse_cascade(io.StringIO("0,100\n300,50"))
    assert c.times.tolist() == [0, 300] and c.degrees.tolist() == [100, 50]


def test_parse_decrease_names_line():
    with pytest.raises(ParseError) as err:
        parse_cascade(io.StringIO("0,100\n200,5\n100,7"))
    assert err.value.line == 3
    assert "line 3" in str(err.value)


def test_headers_are_skipped():
    plain = parse_cascade(io.StringIO("0,100\n300,50\n"))
    commented = parse_cascade(io.StringIO("# exported\n0,100\n# note\n300,50\n"))
    assert commented == plain
    named = parse_cascade(io.StringIO("# id: abc\n0,100\n300,50\n"))
    assert named.id == "abc" and np.array_equal(named.times, plain.times)


@pytest.mark.parametrize("text, line", [
    ("0,100\n5,-1\n", 2),
    ("0,100\n5\n", 2),
    ("0,100\nx,1\n", 2),
    ("0,100\n5,1.5\n", 2),
    ("3,100\n", 1),
])
def test_parse_errors(text, line):
    with pytest.raises(ParseError) as err:
        parse_cascade(io.StringIO(text))
    assert err.value.line == line


def test_parse_empty():
    with pytest.raises(ParseError):
        parse_cascade(io.StringIO("# nothing\n"))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.floats(0, 1e7, allow_nan=False), st.integers(0, 10**9)),
                max_size=30),
       st.integers(0, 10**9))
def test_round_trip(events, root):
    times = np.concatenate([[0.0], np.sort([t for t, _ in events])])
    degrees = np.array([root] + [n for _, n in events])
    c = Cascade(times, degrees, id="x1")
    back = parse_cascade(io.StringIO(serialize_cascade(c)))
    assert back == c and back.id == "x1"


def test_corpus_uses_file_stem(tmp_path):
    write_cascade(Cascade([0, 10, 2 * 86400], [5, 5, 5]), tmp_path / "b.csv")
    write_cascade(Cascade([0, 1], [5, 5]), tmp_path / "a.csv")
    corpus = load_corpus(tmp_path, horizon_seconds=86400)
    assert [(c.id, r) for c, r in corpus] == [("a", 1), ("b", 1)]
    with pytest.raises(ParseError):
        load_corpus(tmp_path / "missing")


def _snap(tmp_path, index, data):
    src = tmp_path / "snap"
    src.mkdir()
    (src / "index.csv").write_text(index)
    (src / "data.csv").write_text(data)
    return src


def test_import_snap(tmp_path):
    src = _snap(tmp_path,
                "tweet_id,post_time_day,start_ind,end_ind\n11,0.5,1,3\n12,1.0,4,5\n",
                "relative_time_second,number_of_followers\n0,100\n5,20\n9,3\n0,7\n60,1\n")
    out = tmp_path / "out"
    assert import_snap(src, out) == 2
    c = parse_cascade(out / "11.csv")
    assert c.id == "11" and c.times.tolist() == [0, 5, 9] and c.degrees.tolist() == [100, 20, 3]
    assert import_snap(src, tmp_path / "out2", min_reshares=2) == 1


def test_import_snap_layout_mismatch(tmp_path):
    src = _snap(tmp_path, "id,start,end\n1,1,1\n", "relative_time_second,number_of_followers\n0,1\n")
    with pytest.raises(ParseError, match="header"):
        import_snap(src, tmp_path / "out")


def test_import_snap_bad_range(tmp_path):
    src = _snap(tmp_path, "tweet_id,post_time_day,start_ind,end_ind\n1,0,1,9\n",
                "relative_time_second,number_of_followers\n0,1\n")
    with pytest.raises(ParseError, match="outside"):
        import_snap(src, tmp_path / "out")
