"""Test-suite plumbing: dataset gating and the acceptance-criteria summary."""

from __future__ import annotations

import os
from functools import lru_cache
from pathlib import Path

import pytest

import qwlink as qw

REPO_ROOT = Path(__file__).resolve().parents[1]
DATA_DIR = Path(os.environ.get("QWLINK_DATA_DIR", REPO_ROOT / "data"))

# Benchmark edge lists are user-supplied (see README "Datasets"); tests that
# need one skip with a pointer when the file is absent.
DATASET_FILES = {
    "facebook": "facebook.txt",
    "messel": "messel.txt",
    "hamsterster": "hamsterster.txt",
    "hi-iii-20": "hi-iii-20.txt",
    "yeast-bio": "yeast-bio.txt",
    "wiki-vote": "wiki-vote.txt",
    "p2p-gnutella": "p2p-gnutella.txt",
}


def dataset_path(name: str) -> Path:
    path = DATA_DIR / DATASET_FILES[name]
    if not path.exists():
        pytest.skip(f"dataset {name!r} not present at {path}; see README 'Datasets'")
    return path


@lru_cache(maxsize=None)
def dataset_graph(name: str) -> qw.Graph:
    with open(dataset_path(name), "r", encoding="utf-8") as fh:
        return qw.load_edge_list(fh)


_acceptance_outcomes: dict[str, str] = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None or not marker.args:
        return
    label = marker.args[0]
    if report.skipped:
        _acceptance_outcomes.setdefault(label, "SKIP")
    elif report.when == "call":
        result = "PASS" if report.passed else "FAIL"
        if _acceptance_outcomes.get(label) != "FAIL":
            _acceptance_outcomes[label] = result


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_outcomes:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for label in sorted(_acceptance_outcomes):
        terminalreporter.write_line(f"[{_acceptance_outcomes[label]}] {label}")
