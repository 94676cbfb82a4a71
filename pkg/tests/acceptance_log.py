"""One pass/fail line per acceptance criterion, collected during the run."""
LINES: dict[int, str] = {}


def record(n: int, title: str, ok: bool, detail: str) -> None:
    line = f"{'PASS' if ok else 'FAIL'}  criterion {n:2}: {title} ({detail})"
    LINES[n] = line
    print(line)
    assert ok, line
