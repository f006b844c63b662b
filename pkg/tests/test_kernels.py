import numpy as np
import pytest

from ribbonknots import fixtures, kernels


def _both(monkeypatch, fn, *args):
    monkeypatch.setenv("RIBBON_KERNELS", "numpy")
    assert kernels.backend() == "numpy"
    a = fn(*args)
    monkeypatch.setenv("RIBBON_KERNELS", "numba")
    b = fn(*args)
    return a, b


pytestmark = pytest.mark.skipif(not kernels.HAVE_NUMBA, reason="numba not installed")


@pytest.fixture(scope="module")
def frame():
    return fixtures.trefoil_flip_frame(512)


def test_arc_crossings_agree(monkeypatch, frame):
    a, b = _both(monkeypatch, kernels.arc_crossings, frame.samples.u, 5)
    assert len(a) > 0
    assert np.array_equal(a, b)


def test_close_pairs_agree(monkeypatch, frame):
    Y = frame.samples.x + 2.0 * frame.samples.u
    (ga, wa, pa), (gb, wb, pb) = _both(monkeypatch, kernels.close_pairs, Y, 5, 0.05)
    assert ga == pytest.approx(gb) and tuple(wa) == tuple(wb)
    assert np.array_equal(pa, pb)


def test_parallel_chord_cells_agree(monkeypatch, frame):
    a, b = _both(monkeypatch, kernels.parallel_chord_cells, frame.samples.x, frame.samples.u, 5)
    assert len(a) > 0
    assert np.array_equal(a, b)


def test_backend_env(monkeypatch):
    monkeypatch.setenv("RIBBON_KERNELS", "numpy")
    assert kernels.backend() == "numpy"
    monkeypatch.delenv("RIBBON_KERNELS")
    assert kernels.backend() == "numba"
