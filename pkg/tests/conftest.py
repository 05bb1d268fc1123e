import re
from collections import defaultdict

_CRITERION = re.compile(r"test_acceptance\.py::test_criterion_(\d+)_(\w+?)(\[.*\])?$")
_outcomes = defaultdict(list)
_names = {}
_durations = defaultdict(float)


def pytest_runtest_logreport(report):
    m = _CRITERION.search(report.nodeid)
    if not m:
        return
    num = int(m.group(1))
    _names[num] = m.group(2).replace("_", " ")
    if report.when == "call" or report.outcome != "passed":
        _outcomes[num].append(report.outcome)
    if report.when == "call":
        _durations[num] += report.duration


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_outcomes):
        ok = all(o == "passed" for o in _outcomes[num])
        terminalreporter.write_line(f"criterion {num}: {'PASS' if ok else 'FAIL'}  "
                                    f"({_names[num]}, {_durations[num]:.2f} s)")
