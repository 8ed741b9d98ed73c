import numpy as np
import pytest

from heaviplot import FigureJob, JobError, render
from heaviplot.render import load_matrix, load_spectra


def write_matrix(path, arr):
    np.savetxt(path, np.atleast_2d(arr), fmt="%.17g", delimiter=",")


def write_spectra(path, per_neuron):
    with open(path, "w") as fh:
        fh.write("neuron,m,sigma\n")
        for neuron, sigma in per_neuron.items():
            for m, s in enumerate(sigma, start=1):
                fh.write(f"{neuron},{m},{s:.17g}\n")


def test_job_validation(tmp_path):
    ok = tmp_path / "a.csv"
    with pytest.raises(JobError, match="kind"):
        FigureJob(kind="scatter", path=ok, out=tmp_path / "x.png")
    with pytest.raises(JobError, match="color scale"):
        FigureJob(kind="heatmap", path=ok, out=tmp_path / "x.png", color_scale="magma")
    with pytest.raises(JobError, match="second input"):
        FigureJob(kind="diff_heatmap", path=ok, out=tmp_path / "x.png")
    with pytest.raises(JobError, match="output"):
        FigureJob(kind="heatmap", path=ok, out=tmp_path / "x.pdf")


def test_identity_heatmap(tmp_path):
    write_matrix(tmp_path / "eye.csv", np.eye(2))
    info = render(FigureJob(kind="heatmap", path=tmp_path / "eye.csv",
                            out=tmp_path / "eye.png", title="identity"))
    assert info["shape"] == (2, 2)
    # diverging scale centered at zero, pinned by the diagonal ones
    assert info["vmin"] == -1.0 and info["vmax"] == 1.0
    assert (info["xlabel"], info["ylabel"]) == ("i", "j")
    raw = (tmp_path / "eye.png").read_bytes()
    assert raw[:8] == b"\x89PNG\r\n\x1a\n" and len(raw) > 1000


def test_auto_scale_and_svg(tmp_path):
    write_matrix(tmp_path / "m.csv", np.array([[0.0, 2.0], [1.0, 3.0]]))
    info = render(FigureJob(kind="heatmap", path=tmp_path / "m.csv",
                            out=tmp_path / "m.svg", color_scale="auto"))
    assert (info["vmin"], info["vmax"]) == (0.0, 3.0)
    assert b"<svg" in (tmp_path / "m.svg").read_bytes()[:300]


def test_flat_matrix_keeps_finite_scale(tmp_path):
    write_matrix(tmp_path / "z.csv", np.zeros((3, 3)))
    info = render(FigureJob(kind="heatmap", path=tmp_path / "z.csv",
                            out=tmp_path / "z.png"))
    assert info["vmin"] < 0.0 < info["vmax"]


def test_diff_heatmap(tmp_path):
    a = np.array([[1.0, -0.5], [0.25, 2.0]])
    b = np.array([[1.0, 0.5], [0.25, 1.0]])
    write_matrix(tmp_path / "a.csv", a)
    write_matrix(tmp_path / "b.csv", b)
    info = render(FigureJob(kind="diff_heatmap", path=tmp_path / "a.csv",
                            path2=tmp_path / "b.csv", out=tmp_path / "d.png"))
    assert info["shape"] == (2, 2)
    assert info["vmax"] == pytest.approx(1.0)  # max |a - b|


def test_diff_shape_mismatch(tmp_path):
    write_matrix(tmp_path / "a.csv", np.eye(2))
    write_matrix(tmp_path / "b.csv", np.eye(3))
    with pytest.raises(JobError, match="shape mismatch"):
        render(FigureJob(kind="diff_heatmap", path=tmp_path / "a.csv",
                         path2=tmp_path / "b.csv", out=tmp_path / "d.png"))


def test_missing_and_malformed_inputs(tmp_path):
    with pytest.raises(JobError, match="not found"):
        render(FigureJob(kind="heatmap", path=tmp_path / "nope.csv",
                         out=tmp_path / "x.png"))
    (tmp_path / "junk.csv").write_text("a,b\n1,two\n")
    with pytest.raises(JobError, match="malformed"):
        load_matrix(tmp_path / "junk.csv")
    (tmp_path / "empty.csv").write_text("neuron,m,sigma\n")
    with pytest.raises(JobError):
        load_spectra(tmp_path / "empty.csv")


def test_spectrum_exponential_line(tmp_path):
    # sigma_m = e^-m is a straight line on the log axis: the exponential fit
    # recovers it exactly, the algebraic one cannot
    write_spectra(tmp_path / "s.csv", {0: [np.exp(-m) for m in range(1, 13)]})
    info = render(FigureJob(kind="spectrum", path=tmp_path / "s.csv",
                            out=tmp_path / "s.png"))
    assert info["n_neurons"] == 1
    assert info["curves"] == ["sigma", "algebraic", "exponential"]
    assert info["alpha_exponential"] == pytest.approx(1.0, abs=1e-12)
    assert info["c_exponential"] == pytest.approx(1.0, abs=1e-12)
    assert abs(info["alpha_algebraic"] - 1.0) > 0.5


def test_spectrum_pools_ragged_neurons(tmp_path):
    # two neurons with different spectrum lengths still produce one median
    # curve over the union of m values
    write_spectra(tmp_path / "s.csv", {
        0: [2.0 * m ** -3.0 for m in range(1, 9)],
        1: [2.0 * m ** -3.0 for m in range(1, 6)],
    })
    info = render(FigureJob(kind="spectrum", path=tmp_path / "s.csv",
                            out=tmp_path / "s.png"))
    assert info["n_neurons"] == 2
    assert info["alpha_algebraic"] == pytest.approx(3.0, abs=1e-12)
    assert info["c_algebraic"] == pytest.approx(2.0, rel=1e-12)


def test_spectrum_too_short(tmp_path):
    write_spectra(tmp_path / "s.csv", {0: [1.0]})
    with pytest.raises(JobError, match="too short"):
        render(FigureJob(kind="spectrum", path=tmp_path / "s.csv",
                         out=tmp_path / "s.png"))


def test_rerender_same_size(tmp_path):
    write_matrix(tmp_path / "a.csv", np.arange(9.0).reshape(3, 3) - 4.0)
    job = FigureJob(kind="heatmap", path=tmp_path / "a.csv", out=tmp_path / "a.png")
    render(job)
    first = (tmp_path / "a.png").stat().st_size
    render(job)
    assert (tmp_path / "a.png").stat().st_size == first
