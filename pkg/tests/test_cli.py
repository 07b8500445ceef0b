import json
from importlib import resources

import jsonschema
import pytest

from dp4lag import cli


@pytest.fixture(scope="module")
def schema():
    with resources.files("dp4lag").joinpath("schema/report.schema.json").open() as fh:
        return json.load(fh)


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


class TestVerbs:
    def test_sections_default_fixture(self, capsys, schema):
        code, report = run(capsys, "sections")
        assert code == 0
        jsonschema.validate(report, schema)
        assert report["result"]["kernel_dimension"] == 2
        assert report["result"]["row_count"] == 53
        assert report["result"]["dimension_profile"] == [27, 20, 14, 9, 5, 2]

    def test_sections_plane_only(self, capsys, schema):
        code, report = run(capsys, "sections", "--plane-only")
        assert code == 0
        jsonschema.validate(report, schema)
        assert report["result"]["kernel_dimension"] == 27

    def test_verify(self, capsys, schema):
        code, report = run(capsys, "verify")
        assert code == 0
        jsonschema.validate(report, schema)
        assert report["result"]["is_zero"] is True
        assert report["result"]["R"] == "0"
        assert all(s["value"] == "0/1" for s in report["result"]["samples"])

    def test_verify_symbolic(self, capsys, schema):
        code, report = run(capsys, "verify", "--symbolic")
        assert code == 0
        jsonschema.validate(report, schema)
        sym = report["result"]["symbolic"]
        assert sym["is_zero"] is True
        assert sym["degeneracy_locus"] != "0"

    def test_verify_corrupted_basis_fails(self, capsys, schema):
        code, report = run(capsys, "verify", "--debug-corrupt-basis")
        assert code == 1
        jsonschema.validate(report, schema)
        failed = [c["name"] for c in report["checks"] if not c["pass"]]
        assert "bracket_identically_zero" in failed

    def test_pencil(self, capsys, schema):
        code, report = run(capsys, "pencil")
        assert code == 0
        jsonschema.validate(report, schema)
        assert len(report["result"]["singular_members"]) == 5
        assert len(report["result"]["lines"]) == 16

    def test_probe(self, capsys, schema):
        code, report = run(capsys, "probe", "--tangency")
        assert code == 0
        jsonschema.validate(report, schema)
        assert all(f["status"] == "four_points" for f in report["result"]["fibers"])
        assert len(report["result"]["tangency"]) == 10

    def test_special_directions(self, capsys, schema):
        code, report = run(capsys, "special-directions")
        assert code == 0
        jsonschema.validate(report, schema)
        table = report["result"]["reducibility_table"]
        assert sum(1 for row in table if row["reducible"]) == 5
        assert all(row["reducible"] == row["special"] for row in table)

    def test_dictionary(self, capsys, schema):
        code, report = run(capsys, "dictionary")
        assert code == 0
        jsonschema.validate(report, schema)
        assert sorted(report["result"]["matching"]) == [0, 1, 2, 3, 4]

    def test_dictionary_shuffled_theta_same_matching(self, tmp_path, capsys):
        # shuffling theta relabels the points and changes the frame
        # normalization, but the intrinsic pairing (Veronese point of a root
        # <-> singular parameter of that root) must not move
        code, base = run(capsys, "dictionary")
        assert code == 0
        shuffled = ["2", "-1", "0", "-2", "1"]
        cfg = tmp_path / "shuffled.json"
        cfg.write_text(json.dumps({"theta": shuffled}))
        code, other = run(capsys, "dictionary", "--config", str(cfg))
        assert code == 0

        def pairs(report):
            perm = report["result"]["matching"]
            raw = report["result"]["configuration"]["raw_points"]
            params = report["result"]["parameters"]
            return {(tuple(raw[k]), tuple(params[perm[k]])) for k in range(5)}

        assert pairs(base) == pairs(other)

    def test_pipeline_full(self, capsys, schema):
        code, report = run(capsys, "pipeline", "--symbolic", "--tangency")
        assert code == 0
        jsonschema.validate(report, schema)
        assert report["overall_pass"] is True
        names = [c["name"] for c in report["checks"]]
        for expected in (
            "pencil_roots_and_coranks",
            "plane_dimension_27",
            "kernel_dimension_2",
            "involutivity_R_zero",
            "symbolic_involutivity",
            "numerology",
            "fibration_partitions",
            "five_special_directions",
            "reducibility_exactly_on_special",
            "fiber_generic_grid",
            "node_grid_biconditional",
            "dictionary_mobius",
            "branch_curve_on_surface",
            "line_tangencies",
        ):
            assert expected in names


class TestInputHandling:
    def test_malformed_config(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{not json")
        code = cli.main(["sections", "--config", str(bad)])
        assert code == 2
        assert "error" in json.loads(capsys.readouterr().out)

    def test_wrong_keys(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"theta": ["0", "1", "-1", "2", "-2"], "ab": ["1", "2"]}))
        assert cli.main(["sections", "--config", str(bad)]) == 2
        capsys.readouterr()

    def test_repeated_theta(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text(json.dumps({"theta": ["0", "1", "-1", "2", "2"]}))
        assert cli.main(["pipeline", "--config", str(bad)]) == 2
        capsys.readouterr()

    def test_ab_config(self, tmp_path, capsys, schema):
        cfg = tmp_path / "ab.json"
        cfg.write_text(json.dumps({"ab": ["2/1", "3/1"]}))
        code, report = run(capsys, "verify", "--config", str(cfg))
        assert code == 0
        jsonschema.validate(report, schema)

    def test_points_config(self, tmp_path, capsys, schema):
        cfg = tmp_path / "pts.json"
        cfg.write_text(
            json.dumps(
                {"points": [["1", "0", "0"], ["1", "1", "1"], ["1", "-1", "1"], ["1", "2", "4"], ["1", "-2", "4"]]}
            )
        )
        code, report = run(capsys, "sections", "--config", str(cfg))
        assert code == 0
        jsonschema.validate(report, schema)
        assert report["result"]["configuration"]["ab"] == ["-1/5", "9/5"]

    def test_collinear_points_rejected(self, tmp_path, capsys):
        cfg = tmp_path / "bad.json"
        cfg.write_text(
            json.dumps(
                {"points": [["1", "0", "0"], ["1", "1", "0"], ["1", "2", "0"], ["1", "0", "1"], ["1", "1", "1"]]}
            )
        )
        assert cli.main(["sections", "--config", str(cfg)]) == 2
        capsys.readouterr()


class TestDeterminism:
    def test_pipeline_bytes_reproducible(self, capsys):
        code1 = cli.main(["pipeline", "--seed", "3"])
        out1 = capsys.readouterr().out
        code2 = cli.main(["pipeline", "--seed", "3"])
        out2 = capsys.readouterr().out
        assert code1 == code2 == 0
        assert out1 == out2

    def test_out_flag_writes_identical_payload(self, tmp_path, capsys):
        target = tmp_path / "report.json"
        cli.main(["pencil", "--out", str(target)])
        out = capsys.readouterr().out
        assert target.read_text() == out
