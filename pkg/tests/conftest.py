import numpy as np
import pytest

from securesr.channel import ChannelRealization, SystemParams


def basis(n, k):
    e = np.zeros(n, dtype=complex)
    e[k] = 1.0
    return e


def make_channel(h1, h2, he, g1=1.0, g2=1.0):
    return ChannelRealization(h1=np.asarray(h1, dtype=complex), h2=np.asarray(h2, dtype=complex),
                              he=np.atleast_2d(np.asarray(he, dtype=complex)),
                              g1=complex(g1), g2=complex(g2))


def unit_sphere(rng, n, dim):
    z = rng.standard_normal((n, dim)) + 1j * rng.standard_normal((n, dim))
    return z / np.linalg.norm(z, axis=1, keepdims=True)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def defaults():
    return SystemParams()


@pytest.fixture
def toy():
    """Nt = 3 hand-computable instance: h1 = e1, h2 = e2, He = [a b 1], P = 10 (linear)."""
    params = SystemParams(nt=3, ne=1, p_dbm=10.0, alpha=0.3, gamma_s_th_db=3.0)
    ch = make_channel(basis(3, 0), basis(3, 1), [[0.7 - 0.2j, -0.4 + 1.1j, 1.0]])
    return params, ch


# acceptance verdicts, one line per criterion, echoed after the run
ACCEPTANCE: dict[int, str] = {}


def record(number: int, ok: bool, detail: str) -> bool:
    line = f'criterion {number}: {"PASS" if ok else "FAIL"}  {detail}'
    ACCEPTANCE[number] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section('acceptance criteria')
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
