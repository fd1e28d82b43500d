"""
Report writers

Writers print a report dict from :mod:`lmshift.main` to stdout, either as
indented text or as flat records. The record format has one record per
line, each a sequence of ``key=value`` fields quoted for a POSIX shell;
list values are joined with ``;``. The first line describes the report
itself.
"""

import shlex
from typing import Mapping

LIST_SEPARATOR = ";"
_HEADER_SKIP = ("command", "suite", "subject", "verdict", "records")


def _field_text(value, separator: str = LIST_SEPARATOR) -> str:
    if value is None:
        return "none"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return separator.join(_field_text(v, separator) for v in value)
    return str(value)


def record_line(record: Mapping) -> str:
    """One record as ``key=value`` fields."""
    return " ".join(
        f"{key}={shlex.quote(_field_text(value))}" for key, value in record.items()
    )


def read_records(text: str) -> list[dict[str, str]]:
    """Parse the lines written by :func:`records_output`.

    Values come back as strings; list values are still joined with
    :data:`LIST_SEPARATOR`.
    """
    records = []
    for line in text.splitlines():
        if line.strip():
            records.append(dict(field.split("=", 1) for field in shlex.split(line)))
    return records


def records_output(report):
    """Print the report as flat records, the report header first.

    Parameters
    ----------
    report : dict
        A report as returned by the pipelines in :mod:`lmshift.main`.
    """
    header = {key: value for key, value in report.items() if key != "records"}
    header["records"] = len(report["records"])
    print(record_line(header))
    for record in report["records"]:
        print(record_line(record))


def text_output(report, show_passing=True):
    """Print the report as indented text.

    Parameters
    ----------
    report : dict
        A report as returned by the pipelines in :mod:`lmshift.main`.
    show_passing : bool
        If True (default), list every record. Otherwise only failing
        records are listed.
    """
    title = " ".join(filter(None, [report["command"], report.get("suite")]))
    print(f"{title} on {report['subject']}: {report['verdict'].upper()}")
    for key, value in report.items():
        if key not in _HEADER_SKIP:
            print(f"  {key}: {_field_text(value, ', ')}")
    for record in report["records"]:
        verdict = record.get("verdict", "")
        if not show_passing and verdict != "fail":
            continue
        print(f"  [{verdict or '-':<4}] {record['check']}")
        for key, value in record.items():
            if key not in ("check", "verdict"):
                print(f"         {key}: {_field_text(value, ', ')}")
