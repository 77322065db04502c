"""Cascade files, corpora and dataset import.

Cascade file format (UTF-8, LF line endings)::

    # id: 12345            optional; other '#' lines are ignored
    0,1520                 original post: time 0, follower count of the poster
    31.5,212               one reshare per line: seconds since the post,
    95,8                   follower count of the resharer

Times are nondecreasing decimal seconds; follower counts are nonnegative
integers. A corpus is a directory of ``*.csv`` cascade files whose true
final size is the number of reshares within the configured horizon.
"""
import csv
import io
import math
import os
from pathlib import Path

import numpy as np

from .errors import ParseError
from .estimator import Cascade


def _open_text(source):
    if hasattr(source, "read"):
        return source, False, getattr(source, "name", None)
    return open(source, "r", encoding="utf-8", newline=""), True, str(source)


def parse_cascade(source, id=None):
    """Read one cascade from a path or text stream.

    Raises
    ------
    ParseError
        On a malformed line, a decreasing time, a negative or non-integer
        count, or a missing ``0,<n0>`` first event. The message names the
        line number.
    """
    fh, close, name = _open_text(source)
    try:
        text = fh.read()
    finally:
        if close:
            fh.close()
    if name is not None and id is None and not hasattr(source, "read"):
        id = Path(name).stem
    times, degrees = [], []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r").strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.lower().startswith("id:"):
                id = body[3:].strip() or id
            continue
        parts = line.split(",")
        if len(parts) != 2:
            raise ParseError(f"expected 'time,follower_count', got {line!r}", lineno, name)
        try:
            t = float(parts[0])
        except ValueError:
            raise ParseError(f"bad time {parts[0]!r}", lineno, name) from None
        try:
            n = int(parts[1].strip())
        except ValueError:
            raise ParseError(f"bad follower count {parts[1]!r}", lineno, name) from None
        if not math.isfinite(t) or t < 0:
            raise ParseError(f"time must be finite and nonnegative, got {parts[0]!r}", lineno, name)
        if n < 0:
            raise ParseError(f"negative follower count {n}", lineno, name)
        if not times and t != 0:
            raise ParseError("first event must be the original post at time 0", lineno, name)
        if times and t < times[-1]:
            raise ParseError(f"time decreased from {times[-1]:g} to {t:g}", lineno, name)
        times.append(t)
        degrees.append(n)
    if not times:
        raise ParseError("no events: missing original post '0,<n0>'", None, name)
    return Cascade(np.array(times), np.array(degrees, dtype=np.int64), id=id)


def _fmt_time(t):
    t = float(t)
    return str(int(t)) if t.is_integer() and abs(t) < 2**53 else repr(t)


def serialize_cascade(cascade, stream=None):
    """Write ``cascade`` in the format read by :func:`parse_cascade`."""
    out = stream if stream is not None else io.StringIO()
    if cascade.id is not None:
        out.write(f"# id: {cascade.id}\n")
    for t, n in zip(cascade.times, cascade.degrees):
        out.write(f"{_fmt_time(t)},{int(n)}\n")
    if stream is None:
        return out.getvalue()


def write_cascade(cascade, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        serialize_cascade(cascade, fh)


def corpus_files(directory):
    files = sorted(Path(directory).glob("*.csv"))
    if not files:
        raise ParseError(f"no *.csv cascade files in {directory}")
    return files


def load_corpus(directory, horizon_seconds=14 * 86400.0):
    """``[(cascade, final_size)]`` for every cascade file in ``directory``.

    The final size is the reshare count at ``horizon_seconds``.
    """
    corpus = []
    for path in corpus_files(directory):
        cascade = parse_cascade(path)
        corpus.append((cascade, cascade.reshare_count(horizon_seconds)))
    return corpus


# -- SNAP SEISMIC dataset ---------------------------------------------------

SNAP_INDEX_HEADER = ["tweet_id", "post_time_day", "start_ind", "end_ind"]
SNAP_DATA_HEADER = ["relative_time_second", "number_of_followers"]


def _read_csv(path, header):
    with open(path, "r", encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [h.strip().strip('"') for h in rows[0]] != header:
        got = rows[0] if rows else []
        raise ParseError(f"unexpected header {got!r}; expected {header!r}", 1, str(path))
    return rows[1:]


def import_snap(directory, out_dir, min_reshares=0):
    """Convert the published tweet dataset into native cascade files.

    Expects ``index.csv`` (``tweet_id,post_time_day,start_ind,end_ind``,
    1-based inclusive row ranges into ``data.csv``) and ``data.csv``
    (``relative_time_second,number_of_followers``). Any deviation, such as
    a different header or a range whose first row is not at time 0, raises
    :class:`ParseError`. Returns the number of cascades written.
    """
    directory = Path(directory)
    index = _read_csv(directory / "index.csv", SNAP_INDEX_HEADER)
    data = _read_csv(directory / "data.csv", SNAP_DATA_HEADER)
    try:
        times = np.array([float(r[0]) for r in data])
        followers = np.array([int(float(r[1])) for r in data], dtype=np.int64)
    except (ValueError, IndexError) as err:
        raise ParseError(f"malformed data.csv row: {err}", None, str(directory / "data.csv")) from None
    os.makedirs(out_dir, exist_ok=True)
    written = 0
    for lineno, row in enumerate(index, start=2):
        try:
            tweet_id = row[0].strip().strip('"')
            start, end = int(row[2]), int(row[3])
        except (ValueError, IndexError):
            raise ParseError(f"malformed index row {row!r}", lineno, "index.csv") from None
        if not 1 <= start <= end <= times.size:
            raise ParseError(f"row range {start}..{end} outside data.csv", lineno, "index.csv")
        t = times[start - 1:end]
        n = followers[start - 1:end]
        if t[0] != 0:
            raise ParseError(f"cascade {tweet_id} does not start at time 0", lineno, "index.csv")
        if np.any(np.diff(t) < 0):
            raise ParseError(f"cascade {tweet_id} has decreasing times", lineno, "index.csv")
        if t.size - 1 < min_reshares:
            continue
        write_cascade(Cascade(t, n, id=tweet_id), Path(out_dir) / f"{tweet_id}.csv")
        written += 1
    return written
