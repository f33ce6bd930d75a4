"""Acceptance criteria 1-8; each prints one PASS/FAIL line.

Run directly (``python tests/test_acceptance.py``) or through pytest.
"""

import sys
import time

import pytest

from so3inv.batteries import CRITERIA


def _run(n: int):
    title, fn = CRITERIA[n]
    t0 = time.perf_counter()
    battery = fn()
    elapsed = time.perf_counter() - t0
    status = "PASS" if battery.ok else "FAIL"
    line = f"criterion {n}: {status}  {title}  ({len(battery.cases)} cases, {elapsed:.1f}s)"
    bad = [f"    failed: {c.label} {c.detail}".rstrip() for c in battery.failures()]
    return battery, "\n".join([line] + bad)


@pytest.mark.parametrize("n", sorted(CRITERIA))
def test_criterion(n, capsys):
    battery, report = _run(n)
    with capsys.disabled():
        print("\n" + report)
    assert battery.ok, report


if __name__ == "__main__":
    ok = True
    for n in sorted(CRITERIA):
        battery, report = _run(n)
        print(report, flush=True)
        ok = ok and battery.ok
    sys.exit(0 if ok else 1)
