import json

import pytest

from tightport.cli import main
from tightport.serialize import load


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def weyl2_file(tmp_path):
    path = tmp_path / "b.json"
    assert run("generate", "unitary-basis", "--construction", "weyl", "--d", 2, "-o", path) == 0
    return path


@pytest.fixture
def scheme_file(tmp_path, weyl2_file):
    path = tmp_path / "s.json"
    code = run(
        "generate", "scheme", "--from-basis", weyl2_file,
        "--mode", "teleportation", "-o", path,
    )
    assert code == 0
    return path


class TestGenerate:
    def test_weyl_basis_document_has_four_matrices(self, weyl2_file):
        doc = load(weyl2_file)
        assert doc.kind == "unitary_basis"
        assert doc.payload["elements"].shape == (4, 2, 2)

    def test_fourier_hadamard_verifies_on_reload(self, tmp_path):
        path = tmp_path / "h.json"
        assert run("generate", "hadamard", "--construction", "fourier", "--d", 5, "-o", path) == 0
        assert run("verify", path) == 0

    def test_scheme_embeds_all_components(self, scheme_file):
        doc = load(scheme_file)
        assert doc.payload["omega"].shape == (4,)
        assert doc.payload["channel_unitaries"].shape == (4, 2, 2)
        assert doc.payload["effect_vectors"].shape == (4, 4)
        assert run("verify", scheme_file) == 0

    def test_missing_required_param(self, tmp_path, capsys):
        code = run("generate", "unitary-basis", "--construction", "weyl", "-o", tmp_path / "x.json")
        assert code == 2
        assert "required" in capsys.readouterr().err

    def test_unknown_construction(self, tmp_path):
        code = run("generate", "hadamard", "--construction", "walsh", "--d", 4, "-o", tmp_path / "x.json")
        assert code == 2

    def test_random_requires_seed(self, tmp_path):
        code = run("generate", "latin", "--construction", "random", "--d", 4, "-o", tmp_path / "x.json")
        assert code == 2

    def test_determinism_with_seed(self, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        for path in (a, b):
            assert run(
                "generate", "hadamard", "--construction", "periodic",
                "--p", 2, "--q", 3, "--rng-seed", 11, "-o", path,
            ) == 0
        assert a.read_text() == b.read_text()

    @pytest.mark.parametrize(
        "argv",
        [
            ("latin", "--construction", "cyclic", "--d", 4),
            ("latin", "--construction", "random", "--d", 5, "--rng-seed", 3),
            ("hadamard", "--construction", "fourier", "--d", 6),
            ("hadamard", "--construction", "d4-family", "--u-phase", 0.7),
            ("hadamard", "--construction", "periodic", "--p", 2, "--q", 2, "--rng-seed", 5),
            ("unitary-basis", "--construction", "weyl", "--d", 3),
        ],
    )
    def test_generate_verify_closure(self, tmp_path, argv):
        path = tmp_path / "out.json"
        assert run("generate", *argv, "-o", path) == 0
        assert run("verify", path) == 0

    def test_shift_multiply_from_files(self, tmp_path):
        latin = tmp_path / "l.json"
        hadamard = tmp_path / "h.json"
        basis = tmp_path / "b.json"
        assert run("generate", "latin", "--construction", "cyclic", "--d", 3, "-o", latin) == 0
        assert run("generate", "hadamard", "--construction", "fourier", "--d", 3, "-o", hadamard) == 0
        code = run(
            "generate", "unitary-basis", "--construction", "shift-multiply",
            "--latin", latin, "--hadamards", hadamard, "-o", basis,
        )
        assert code == 0
        assert run("verify", basis) == 0

    def test_entangled_basis_closure(self, tmp_path, weyl2_file):
        path = tmp_path / "e.json"
        assert run("generate", "entangled-basis", "--from-basis", weyl2_file, "-o", path) == 0
        assert run("verify", path) == 0


class TestVerify:
    def test_corrupted_entry_fails_with_deviation(self, tmp_path, weyl2_file, capsys):
        data = json.loads(weyl2_file.read_text())
        data["payload"]["elements"][0][0][0][0] += 0.01
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(data))
        assert run("verify", bad) == 1
        out = capsys.readouterr().out
        assert "FAIL" in out and "deviation" in out

    def test_corrupted_latin_fails(self, tmp_path, capsys):
        latin = tmp_path / "l.json"
        assert run("generate", "latin", "--construction", "cyclic", "--d", 3, "-o", latin) == 0
        data = json.loads(latin.read_text())
        data["payload"]["grid"][1] = data["payload"]["grid"][0]  # rows valid, columns not
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(data))
        assert run("verify", bad) == 1
        assert "column 0" in capsys.readouterr().out

    def test_truncated_file(self, tmp_path, weyl2_file):
        bad = tmp_path / "t.json"
        bad.write_text(weyl2_file.read_text()[:40])
        assert run("verify", bad) == 2

    def test_missing_file(self, tmp_path):
        assert run("verify", tmp_path / "nope.json") == 2

    def test_corrupted_scheme_fails(self, tmp_path, scheme_file, capsys):
        data = json.loads(scheme_file.read_text())
        data["payload"]["omega"][0][0] = 0.9
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(data))
        assert run("verify", bad) == 1


class TestSimulate:
    def test_pure_state(self, scheme_file, capsys):
        assert run("simulate", scheme_file, "--state", "pure:0") == 0
        out = capsys.readouterr().out
        assert "0.250000, 0.250000, 0.250000, 0.250000" in out

    def test_maximally_mixed(self, scheme_file):
        assert run("simulate", scheme_file, "--state", "maximally-mixed") == 0

    def test_random_states(self, scheme_file):
        assert run(
            "simulate", scheme_file, "--state", "random", "--rng-seed", 9, "--trials", 5
        ) == 0

    def test_random_without_seed(self, scheme_file):
        assert run("simulate", scheme_file, "--state", "random") == 2

    def test_bad_state_spec(self, scheme_file):
        assert run("simulate", scheme_file, "--state", "pure:7") == 2
        assert run("simulate", scheme_file, "--state", "thermal") == 2

    def test_corrupted_scheme_reports_deviation(self, tmp_path, scheme_file, capsys):
        data = json.loads(scheme_file.read_text())
        data["payload"]["channel_unitaries"][1][0][1][0] += 0.2
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps(data))
        assert run("simulate", bad, "--state", "pure:0") == 1
        assert "FAIL" in capsys.readouterr().out

    def test_wrong_kind(self, weyl2_file):
        assert run("simulate", weyl2_file, "--state", "pure:0") == 2


class TestCountLatin:
    def test_d5(self, capsys):
        assert run("count-latin", 5) == 0
        assert capsys.readouterr().out.strip() == "56"

    def test_d4(self, capsys):
        assert run("count-latin", 4) == 0
        assert capsys.readouterr().out.strip() == "4"

    def test_d6_rejected(self, capsys):
        assert run("count-latin", 6) == 2
        assert "d=5" in capsys.readouterr().err


def test_no_command_shows_usage():
    assert run() == 2
