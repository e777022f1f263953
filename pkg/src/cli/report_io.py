"""Report serialisation.

JSON keeps the report tree as built (insertion order, floats by shortest repr).
CSV flattens it to one `path,type,value` row per leaf; path segments are joined
by '/', list positions are written as [i], and parse_report rebuilds the tree.
"""
import csv
import io
import json
import logging
import sys

from src.const import SCHEMA_VERSION
from src.errors import UsageError
from src.types import OutputFormat

logger = logging.getLogger(__name__)

CSV_HEADER = ('path', 'type', 'value')


def _escape(key):
    return str(key).replace('%', '%25').replace('/', '%2F').replace('[', '%5B')


def _unescape(key):
    return key.replace('%5B', '[').replace('%2F', '/').replace('%25', '%')


def _leaf(value):
    if value is None:
        return 'null', ''
    if isinstance(value, bool):
        return 'bool', 'true' if value else 'false'
    if isinstance(value, int):
        return 'int', str(value)
    if isinstance(value, float):
        return 'float', repr(value)
    return 'str', str(value)


def _flatten(value, path, rows):
    if isinstance(value, dict):
        if not value:
            rows.append((path, 'dict', ''))
        for key, item in value.items():
            _flatten(item, path + [_escape(key)], rows)
    elif isinstance(value, (list, tuple)):
        if not value:
            rows.append((path, 'list', ''))
        for i, item in enumerate(value):
            _flatten(item, path + ['[%d]' % i], rows)
    else:
        kind, text = _leaf(value)
        rows.append((path, kind, text))


def flatten(report):
    """[(path, type, value)] rows of a report tree"""
    rows = []
    _flatten(report, [], rows)
    return [('/'.join(path), kind, text) for path, kind, text in rows]


def dumps_report(report, fmt=OutputFormat.json):
    if fmt == OutputFormat.json:
        return json.dumps(report, indent=2) + '\n'
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(CSV_HEADER)
    writer.writerows(flatten(report))
    return buffer.getvalue()


def emit_report(report, fmt=OutputFormat.json, path=None):
    """write the report to path (stdout when None); returns the text written"""
    text = dumps_report(report, fmt)
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, 'w', encoding='utf-8', newline='') as handle:
            handle.write(text)
        logger.info('report written to %s', path)
    return text


_READERS = {
    'null': lambda text: None,
    'bool': lambda text: text == 'true',
    'int': int,
    'float': float,
    'str': str,
    'dict': lambda text: {},
    'list': lambda text: [],
}


def _place(root, segments, value):
    node = root
    for segment, following in zip(segments[:-1], segments[1:]):
        child = [] if following.startswith('[') else {}
        if segment.startswith('['):
            index = int(segment[1:-1])
            if index == len(node):
                node.append(child)
            node = node[index]
        else:
            node = node.setdefault(_unescape(segment), child)
    last = segments[-1]
    if last.startswith('['):
        node.append(value)
    else:
        node[_unescape(last)] = value


def _unflatten(rows):
    root = {}
    for path, kind, text in rows:
        if kind not in _READERS:
            raise UsageError('unknown CSV value type %r at %s' % (kind, path))
        _place(root, path.split('/'), _READERS[kind](text))
    return root


def loads_report(text):
    """inverse of dumps_report for either format; rejects other schema versions"""
    stripped = text.lstrip()
    if stripped.startswith('{'):
        report = json.loads(stripped)
    else:
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or tuple(rows[0]) != CSV_HEADER:
            raise UsageError('not a report: missing CSV header')
        report = _unflatten(rows[1:])
    version = report.get('schema_version')
    if version != SCHEMA_VERSION:
        raise UsageError('report schema version %r, this build reads %d' % (version, SCHEMA_VERSION))
    return report


def parse_report(path):
    with open(path, encoding='utf-8', newline='') as handle:
        return loads_report(handle.read())
