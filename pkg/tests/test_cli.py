import csv
import io

import numpy as np
import pytest

from torusdipole import __version__
from torusdipole.cli import main
from torusdipole.operators import BasisSpec, Geometry, assemble_hamiltonian


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_version(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0 and __version__ in out


def test_no_command_is_usage_error(capsys):
    code, _, err = run(capsys)
    assert code == 2 and "usage" in err


def test_bad_argument_is_usage_error(capsys):
    code, _, _ = run(capsys, "spectrum", "--a", "two")
    assert code == 2
    code, _, _ = run(capsys, "perturbation", "--a", "3", "--n", "2", "--i-range", "1:0:5")
    assert code == 2


def test_domain_error_exit_code(capsys):
    code, _, err = run(capsys, "spectrum", "--a", "1.0")
    assert code == 2 and "error" in err


def test_integrals_with_oracle(capsys):
    code, out, _ = run(capsys, "integrals", "--a", "2", "--n-max", "3", "--kind", "Iln", "--oracle")
    assert code == 0
    table = rows(out)
    assert table[0] == ["n", "closed_form", "oracle", "abs_diff"]
    assert len(table) == 1 + 7
    assert all(float(r[3]) <= 1e-12 for r in table[1:])
    zero = dict((r[0], r) for r in table[1:])["0"]
    assert float(zero[1]) == pytest.approx(0.6238107163648714, abs=1e-11)


@pytest.mark.parametrize("kind", ["In", "Iln2", "K2"])
def test_integral_kinds(capsys, kind):
    code, out, _ = run(capsys, "integrals", "--a", "1.2", "--n-max", "2", "--kind", kind, "--oracle")
    assert code == 0
    assert all(float(r[3]) <= 1e-10 for r in rows(out)[1:])


def test_matrix_csv(tmp_path, capsys):
    path = tmp_path / "h.csv"
    code, _, _ = run(capsys, "matrix", "--a", "2", "--m", "1", "--n-max", "3", "--i", "0.5", "--out", str(path))
    assert code == 0
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# operator=h basis=lambda a=2.0 m=1 n_max=3 i=0.5")
    table = rows("\n".join(lines[1:]))
    assert table[0] == ["row", "col", "re", "im"]
    mat = np.zeros((7, 7), dtype=complex)
    for r, c, re, im in table[1:]:
        mat[int(r), int(c)] = float(re) + 1j * float(im)
    expected = assemble_hamiltonian(Geometry(2.0), BasisSpec(1, 3), 0.5).entries
    assert np.allclose(mat, expected, rtol=1e-11, atol=1e-12)


def test_matrix_t3_parity_to_stdout(capsys):
    code, out, _ = run(capsys, "matrix", "--a", "3", "--n-max", "2", "--basis", "parity", "--operator", "t3")
    assert code == 0
    assert out.startswith("# operator=t3 basis=parity")
    assert len(out.splitlines()) == 2 + 25


def test_spectrum_and_coefficients(tmp_path, capsys):
    out_path, coeff_path = tmp_path / "s.csv", tmp_path / "c.csv"
    code, _, _ = run(capsys, "spectrum", "--a", "2", "--m", "0", "--i", "0", "--levels", "5",
                     "--out", str(out_path), "--coeffs", str(coeff_path))
    assert code == 0
    table = rows(out_path.read_text())
    assert table[0] == ["eta", "energy", "t3"]
    energies = [float(r[1]) for r in table[1:]]
    assert energies[0] == pytest.approx(-1.4046692557057239, abs=1e-9)
    assert all(abs(float(r[2])) <= 1e-8 for r in table[1:])
    coeffs = rows(coeff_path.read_text())
    assert coeffs[0] == ["eta", "n", "re", "im"]
    assert len(coeffs) == 1 + 5 * 121


def test_spectrum_levels_out_of_range(capsys):
    code, _, err = run(capsys, "spectrum", "--a", "2", "--n-max", "3", "--levels", "50")
    assert code == 2 and "--levels" in err


def test_perturbation_summary(capsys):
    code, out, _ = run(capsys, "perturbation", "--a", "3", "--n", "2", "--m", "1", "--i-range", "0:0.2:3")
    assert code == 0
    body, summary = out.split("# summary (large-a forms)")
    table = rows(body.strip())
    assert table[0] == ["i", "A_I", "delta_I", "eps_I", "ratio", "alpha_plus", "alpha_minus", "theta_plus",
                        "theta_minus"]
    assert len(table) == 4
    values = dict((r[0], r[1]) for r in rows(summary.strip()))
    assert float(values["k1"]) == pytest.approx(345.6)
    assert "i_max" in values and "ratio_max" in values


def test_perturbation_divergence_for_m0(capsys):
    code, out, _ = run(capsys, "perturbation", "--a", "3", "--n", "2", "--m", "0", "--i-range", "0:0.1:2")
    assert code == 0
    summary = dict((r[0], r[1]) for r in rows(out.split("# summary (large-a forms)")[1].strip()))
    assert float(summary["x_d"]) == pytest.approx(2.586, abs=1e-3)


def test_perturbation_rejects_n1(capsys):
    code, _, err = run(capsys, "perturbation", "--a", "3", "--n", "1")
    assert code == 1 and "n >= 2" in err


CONFIG = """\
a = 1.2
m = 1
i = 0:12:121
n_max = 20
levels = 3
"""


def test_sweep_command(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(CONFIG)
    out_dir = tmp_path / "out"
    code, out, err = run(capsys, "sweep", "--config", str(cfg), "--out", str(out_dir))
    assert code == 0
    assert (out_dir / "sweep_a1.2_m1.csv").is_file() and (out_dir / "summary.csv").is_file()
    assert "n_max raised" in err
    assert f"to {out_dir}" in out


def test_sweep_dump_config(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(CONFIG)
    code, out, _ = run(capsys, "sweep", "--config", str(cfg), "--out", "elsewhere", "--dump-config")
    assert code == 0
    assert "out = elsewhere" in out and "i = 0:12:121" in out
    code, top, _ = run(capsys, "--dump-config", str(cfg))
    assert code == 0 and "a = 1.2" in top and "out = sweep_out" in top


def test_sweep_bad_config(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("a = 2\ni = 5:1:10\n")
    code, _, err = run(capsys, "sweep", "--config", str(cfg))
    assert code == 2 and "line 2" in err and "hi > lo" in err
    code, _, err = run(capsys, "sweep", "--config", str(tmp_path / "absent.cfg"))
    assert code == 2 and "not found" in err


def test_output_error_exit_code(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    code, _, err = run(capsys, "matrix", "--a", "2", "--n-max", "2", "--out", str(blocker / "h.csv"))
    assert code == 1 and "error" in err


def test_verify_subset(capsys):
    code, out, _ = run(capsys, "verify", "--only", "1", "3")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("[PASS] criterion  1")
    assert lines[1].startswith("[PASS] criterion  3")
    assert lines[-1] == "2/2 criteria passed"
