import math

import numpy as np
import pytest


def coprime_pairs(max_product, even=None):
    out = []
    for m1 in range(1, max_product + 1):
        for m2 in range(1, max_product // m1 + 1):
            if math.gcd(m1, m2) != 1:
                continue
            if even is not None and (m2 % 2 == 0) != even:
                continue
            out.append((m1, m2))
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_pole_consistent(m, rng, complex_values=True):
    from lissphere.nodes import build_index_set
    from lissphere.transform import NodeData

    idx = build_index_set(m)
    n = int(idx.in_IS.sum())
    v = rng.normal(size=n)
    if complex_values:
        v = v + 1j * rng.normal(size=n)
    return NodeData.from_reduced(m, v)


ACCEPTANCE = {}


def record(criterion, passed, detail):
    ACCEPTANCE[criterion] = (passed, detail)
    print(f"criterion {criterion}: {'PASS' if passed else 'FAIL'}  {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if passed else 'FAIL'}  {detail}")
