from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=300, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

_CRITERIA: dict[str, tuple[str, str, str]] = {}  # nodeid -> (criterion, title, outcome)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(code, title): acceptance criterion checked by this test")


def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark is not None:
            _CRITERIA[item.nodeid] = (mark.args[0], mark.args[1], "not run")


def pytest_runtest_logreport(report):
    if report.nodeid not in _CRITERIA:
        return
    code, title, outcome = _CRITERIA[report.nodeid]
    if hasattr(report, "wasxfail"):
        outcome = "FAIL (expected, see decisions ledger)"
    elif report.failed:
        outcome = "FAIL"
    elif report.when == "call" and report.passed:
        outcome = "PASS"
    elif report.skipped:
        outcome = "SKIP"
    _CRITERIA[report.nodeid] = (code, title, outcome)


def _d2_audit() -> tuple[int, int]:
    from colposet.complexes import BUILD_STATS
    kinds = ("C", "K", "S", "D", "Q")
    return (sum(BUILD_STATS[("d2_checked", k)] for k in kinds),
            sum(BUILD_STATS[("d2_failures", k)] for k in kinds))


def pytest_sessionfinish(session, exitstatus):
    # deliberate non-complexes in the unit tests are built unnamed and do not count here
    if _d2_audit()[1] and exitstatus == 0:
        session.exitstatus = 1


def pytest_terminal_summary(terminalreporter):
    checked, failed = _d2_audit()
    if checked:
        terminalreporter.section("d^2 audit")
        terminalreporter.write_line(f"{checked} complexes of kinds C, K, S, D, Q built, {failed} with d^2 != 0")
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    rows = sorted(_CRITERIA.values(), key=lambda r: int(r[0][2:]))
    for code, title, outcome in rows:
        terminalreporter.write_line(f"{code:<5} {outcome.split()[0]:<5} {title}"
                                    + ("  [expected failure]" if "expected" in outcome else ""))
