import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)


def random_sector_state(rng, n, m, real=False):
    from dipolar_squeeze.fock import StateVector, subspace_basis

    basis = subspace_basis(n, m)
    g = rng.normal(size=basis.dim)
    if not real:
        g = g + 1j * rng.normal(size=basis.dim)
    return StateVector(basis, g / np.linalg.norm(g))


# acceptance bookkeeping: sub-check outcomes keyed by criterion number
ACCEPTANCE = {}


@pytest.fixture
def record():
    def _record(criterion, label, ok, detail=""):
        ACCEPTANCE.setdefault(criterion, []).append((label, bool(ok), detail))
        line = f"[criterion {criterion}] {'PASS' if ok else 'FAIL'} {label}: {detail}"
        print(line)
        assert ok, line

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for crit in sorted(ACCEPTANCE):
        checks = ACCEPTANCE[crit]
        failed = [label for label, ok, _ in checks if not ok]
        verdict = "FAIL" if failed else "PASS"
        tail = f"; failing: {', '.join(failed)}" if failed else ""
        tr.write_line(f"criterion {crit:>2}: {verdict} ({len(checks) - len(failed)}/{len(checks)} sub-checks){tail}")
    for crit in sorted(ACCEPTANCE):
        for label, ok, detail in ACCEPTANCE[crit]:
            tr.write_line(f"  {crit:>2}.{label:<28} {'PASS' if ok else 'FAIL'}  {detail}")
