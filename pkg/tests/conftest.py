import warnings

import numpy as np
import pytest

from sswpt import fixtures as fx
from sswpt.pipeline import PipelineConfig, decompose, transform

CRITERIA: dict[int, tuple[bool, str]] = {}


def record(n: int, ok: bool, detail: str) -> None:
    CRITERIA[n] = (bool(ok), detail)
    print(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        ok, detail = CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def cfg():
    return PipelineConfig()


@pytest.fixture(scope="session")
def ex1():
    return fx.example1()


@pytest.fixture(scope="session")
def ex1_dec(ex1, cfg):
    return decompose(ex1.signal, cfg)


@pytest.fixture(scope="session")
def ex2():
    return fx.example2()


@pytest.fixture(scope="session")
def ex2_planes(ex2, cfg):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        packet = transform(ex2.signal, cfg)
        wavelet = transform(ex2.signal, PipelineConfig(s=1.0))
    return packet, wavelet


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def rel(a, b) -> float:
    a = getattr(a, "samples", a)
    b = getattr(b, "samples", b)
    return float(np.linalg.norm(np.asarray(a) - np.asarray(b)) / np.linalg.norm(np.asarray(b)))
