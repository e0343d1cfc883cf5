import numpy as np

from postselcat.hilbert import fock
from postselcat.plotting import plot_scan, plot_wigner
from postselcat.wigner import wigner_grid


def test_png_outputs_are_reproducible(tmp_path):
    g = wigner_grid(fock(8, 1), resolution=(41, 41))
    a, b = tmp_path / "a.png", tmp_path / "b.png"
    plot_wigner(g, a, title="|1>")
    plot_wigner(g, b, title="|1>")
    assert a.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    assert a.read_bytes() == b.read_bytes()


def test_scan_plot_tolerates_gaps(tmp_path):
    x = np.linspace(0, 1, 5)
    path = tmp_path / "s.pdf"
    plot_scan({"a": (x, [None, 0.1, -0.2, 0.0, 0.3]), "b": (x, list(x))}, "alpha_abs", path)
    assert path.read_bytes().startswith(b"%PDF")
