import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

MNIST_DIR = Path(os.environ.get("MNIST_DIR", "/root/data/mnist"))
MNIST_FILES = {
    "train_images": "train-images-idx3-ubyte",
    "train_labels": "train-labels-idx1-ubyte",
    "test_images": "t10k-images-idx3-ubyte",
    "test_labels": "t10k-labels-idx1-ubyte",
}


@pytest.fixture(scope="session")
def mnist():
    """Paths of the canonical MNIST files; skips when they are not available."""
    paths = {}
    for key, name in MNIST_FILES.items():
        for candidate in (MNIST_DIR / name, MNIST_DIR / (name + ".gz")):
            if candidate.exists():
                paths[key] = candidate
                break
        else:
            pytest.skip(f"MNIST file {name} not found in {MNIST_DIR} (set MNIST_DIR)")
    return paths


_acceptance = {}


def pytest_runtest_logreport(report):
    if "acceptance" not in report.keywords:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _acceptance[report.nodeid] = (report.outcome, report.keywords)


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for item in terminalreporter.config._acceptance_items:
        outcome, _ = _acceptance.get(item.nodeid, ("not run", None))
        label = {"passed": "PASS", "failed": "FAIL", "skipped": "SKIP"}.get(outcome, outcome.upper())
        terminalreporter.write_line(f"[{label}] {item.get_closest_marker('acceptance').args[0]}")


def pytest_collection_finish(session):
    session.config._acceptance_items = [i for i in session.items if i.get_closest_marker("acceptance")]
