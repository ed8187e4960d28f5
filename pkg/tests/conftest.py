# filled by test_acceptance; (number, title, passed, seconds, limit)
ACCEPTANCE: list[tuple[int, str, bool, float, float | None]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n, title, ok, secs, limit in sorted(ACCEPTANCE):
        budget = f" / {limit:g} s" if limit is not None else ""
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {title}  ({secs:.2f} s{budget})")
