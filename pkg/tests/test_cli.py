import json
import math
from importlib import resources

import jsonschema
import numpy as np
import pytest

from aniso_spectra import cli


def load_schema(name):
    path = resources.files("aniso_spectra") / "schemas" / name
    return json.loads(path.read_text(encoding="utf-8"))


def write_json(path, data):
    path.write_text(json.dumps(data), encoding="utf-8")
    return str(path)


@pytest.fixture
def square_file(tmp_path):
    return write_json(
        tmp_path / "square.json",
        {"outer": [[0, 0], [1, 0], [1, 1], [0, 1]]},
    )


@pytest.fixture
def yplus_file(tmp_path):
    return write_json(
        tmp_path / "yplus.json",
        {"kind": "asymmetric_linear", "a": 1.0, "b": 0.0, "theta": math.pi / 2},
    )


class TestFreq1d:
    def test_closed_form_output(self, capsys, tmp_path):
        code = cli.main(
            ["freq1d", "--p", "2", "--interval", "-1", "1", "--a", "3", "--b", "1"]
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        jsonschema.validate(payload, load_schema("freq1d_result.schema.json"))
        assert payload["lambda"] == pytest.approx(math.pi**2, rel=1e-12)
        assert payload["t0"] == pytest.approx(0.5)

    def test_symmetric_value(self, capsys):
        assert cli.main(["freq1d", "--p", "2", "--a", "1", "--b", "1"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["lambda"] == pytest.approx(2.4674011, rel=1e-6)

    def test_zero_anisotropy_exit_2(self, capsys):
        assert cli.main(["freq1d", "--p", "2", "--a", "0", "--b", "0"]) == 2

    def test_oracle_flag(self, capsys):
        code = cli.main(
            ["freq1d", "--p", "2", "--a", "1", "--b", "1", "--oracle", "200"]
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        assert abs(payload["relative_gap"]) < 1e-2


class TestFreq2d:
    def test_closed_form_path(self, capsys, square_file, yplus_file):
        code = cli.main(
            ["freq2d", "--p", "2", "--domain", square_file,
             "--anisotropy", yplus_file, "--closed-form"]
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        jsonschema.validate(payload, load_schema("spectral_report.schema.json"))
        assert payload["lambda"] == pytest.approx(math.pi**2 / 4.0, rel=1e-12)
        assert payload["method"] == "closed_form"

    def test_solver_path_and_field_csv(self, capsys, tmp_path, square_file):
        aniso = write_json(tmp_path / "euclid.json", {"kind": "euclidean", "scale": 1.0})
        out_csv = tmp_path / "field.csv"
        code = cli.main(
            ["freq2d", "--p", "2", "--domain", square_file, "--anisotropy", aniso,
             "--resolution", "16", "--field-csv", str(out_csv)]
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        jsonschema.validate(payload, load_schema("spectral_report.schema.json"))
        assert payload["lambda"] == pytest.approx(2 * math.pi**2, rel=5e-2)
        header = out_csv.read_text().splitlines()[0]
        assert header == "x,y,u"

    def test_closed_form_on_positive_anisotropy_is_input_error(
        self, capsys, tmp_path, square_file
    ):
        aniso = write_json(tmp_path / "euclid.json", {"kind": "euclidean", "scale": 1.0})
        code = cli.main(
            ["freq2d", "--p", "2", "--domain", square_file,
             "--anisotropy", aniso, "--closed-form"]
        )
        assert code == 2

    def test_malformed_polygon_exit_2(self, capsys, tmp_path, yplus_file):
        bad = tmp_path / "bad.json"
        bad.write_text('{"outer": [[0, 0], [1, 0]]', encoding="utf-8")  # truncated
        code = cli.main(
            ["freq2d", "--p", "2", "--domain", str(bad), "--anisotropy", yplus_file]
        )
        assert code == 2
        err = capsys.readouterr().err
        assert "line" in err

    def test_determinism_byte_identical(self, capsys, tmp_path, square_file):
        aniso = write_json(tmp_path / "e.json", {"kind": "euclidean", "scale": 1.0})
        args = ["freq2d", "--p", "2", "--domain", square_file, "--anisotropy", aniso,
                "--resolution", "16", "--seed", "11"]
        assert cli.main(args) == 0
        out1 = capsys.readouterr().out
        assert cli.main(args) == 0
        out2 = capsys.readouterr().out
        assert out1 == out2


class TestWidthCommand:
    def test_square_summary_and_csv(self, capsys, tmp_path, square_file):
        csv_path = tmp_path / "curve.csv"
        code = cli.main(["width", "--domain", square_file, "--csv", str(csv_path)])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        jsonschema.validate(payload, load_schema("width_summary.schema.json"))
        assert payload["sup"] == pytest.approx(math.sqrt(2.0), rel=1e-9)
        assert payload["argmax_theta"] == pytest.approx(math.pi / 4.0, abs=1e-6)
        assert payload["attained"] is True
        rows = csv_path.read_text().splitlines()
        assert rows[0] == "theta,L_theta"
        assert len(rows) == 257


class TestBoundsCommand:
    def test_square(self, capsys, square_file):
        code = cli.main(
            ["bounds", "--p", "2", "--domain", square_file, "--resolution", "24"]
        )
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        jsonschema.validate(payload, load_schema("bounds_report.schema.json"))
        assert payload["lambda_min"] == pytest.approx(1.2337005, rel=1e-6)
        assert payload["lambda_max"] == pytest.approx(19.74, rel=5e-2)
        assert payload["argmin_theta"] == pytest.approx(0.7853981, abs=1e-6)


class TestClassifyCommand:
    def test_half_plane_anisotropy(self, capsys, yplus_file):
        code = cli.main(["classify", "--anisotropy", yplus_file])
        assert code == 0
        payload = json.loads(capsys.readouterr().out)
        jsonschema.validate(payload, load_schema("classify_result.schema.json"))
        assert payload["kernel"] == "half_plane"
        assert payload["norm"] == 1.0
        assert payload["normal_form"]["a"] == pytest.approx(1.0)
        assert payload["normal_form"]["b"] == 0.0

    def test_line_kernel(self, capsys, tmp_path):
        f = write_json(tmp_path / "ab.json",
                       {"kind": "asymmetric_linear", "a": 2.0, "b": 1.0,
                        "theta": math.pi / 2})
        assert cli.main(["classify", "--anisotropy", f]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert payload["kernel"] == "line"
        assert payload["normal_form"]["a"] == pytest.approx(2.0)
        assert payload["normal_form"]["b"] == pytest.approx(1.0)

    def test_diamond_kinks(self, capsys, tmp_path):
        f = write_json(
            tmp_path / "sq.json",
            {"kind": "support_polygon",
             "vertices": [[1, 1], [-1, 1], [-1, -1], [1, -1]]},
        )
        assert cli.main(["classify", "--anisotropy", f]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert len(payload["non_c1_directions"]) == 4


class TestManifest:
    def test_manifest_written_and_valid(self, capsys, tmp_path):
        manifest = tmp_path / "run.json"
        out = tmp_path / "result.json"
        code = cli.main(
            ["freq1d", "--p", "2", "--a", "1", "--b", "1",
             "--out", str(out), "--manifest", str(manifest)]
        )
        assert code == 0
        data = json.loads(manifest.read_text())
        jsonschema.validate(data, load_schema("manifest.schema.json"))
        assert data["command"] == "freq1d"
        assert str(out) in data["outputs"]


class TestVerifyCommand:
    def test_fast_divergence_suite(self, capsys):
        code = cli.main(["verify", "divergence", "--fast"])
        out = capsys.readouterr().out
        assert code == 0
        assert "OVERALL: PASS" in out
        assert out.count("[PASS]") >= 2
