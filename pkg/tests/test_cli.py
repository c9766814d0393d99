import json

import pytest

from partcat import cli
from partcat.delta import VerificationReport
from partcat.pcat import identity, morphism_to_dict


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def morphism_file(tmp_path):
    path = tmp_path / "id1.json"
    path.write_text(json.dumps(morphism_to_dict(identity(1))) + "\n")
    return str(path)


class TestExitCodes:
    def test_verify_pass_is_zero(self, capsys):
        code, out, _ = run(capsys, "verify", "--family", "ortho", "--n", "2")
        assert code == 0
        assert "all pass" in out

    def test_verify_cap_is_three(self, capsys):
        code, _, err = run(capsys, "verify", "--family", "deltalg", "--n", "99")
        assert code == 3
        assert "cap" in err

    def test_unknown_verb_is_two(self, capsys):
        assert run(capsys, "frobnicate")[0] == 2

    def test_unknown_flag_is_two(self, capsys):
        assert run(capsys, "dim", "--n", "2", "--bogus")[0] == 2

    def test_missing_file_is_two(self, capsys):
        assert run(capsys, "trace", "-f", "/nonexistent/m.json")[0] == 2

    def test_malformed_json_is_two(self, capsys, tmp_path):
        bad = tmp_path / "bad.json"
        bad.write_text("{broken")
        code, _, err = run(capsys, "trace", "-f", str(bad))
        assert code == 2
        assert "offset" in err

    def test_bad_coefficient_is_two(self, capsys, tmp_path):
        doc = {
            "source": 1,
            "target": 1,
            "ring": "Qt",
            "terms": [{"blocks": [[0], [1]], "coeff": "t//2"}],
        }
        bad = tmp_path / "badcoeff.json"
        bad.write_text(json.dumps(doc))
        code, _, err = run(capsys, "trace", "-f", str(bad))
        assert code == 2
        assert "position" in err

    def test_failed_verification_maps_to_one(self, capsys):
        report = VerificationReport("synthetic", 1)
        report.add("broken", identity(1), identity(1).scale(2))

        class Args:
            json = False

        assert cli._report_exit(Args(), report) == 1
        capsys.readouterr()

    def test_gram_cap_is_three(self, capsys):
        assert run(capsys, "gram", "--n", "7")[0] == 3


class TestVerbs:
    def test_trace(self, capsys, morphism_file):
        code, out, _ = run(capsys, "trace", "-f", morphism_file, "--json")
        assert code == 0
        assert json.loads(out) == {"trace": "t"}

    def test_dim(self, capsys):
        code, out, _ = run(capsys, "dim", "--n", "3", "--json")
        assert json.loads(out)["dim"] == "t^3"
        assert code == 0

    def test_compose_tensor_dual(self, capsys, morphism_file, tmp_path):
        out_path = tmp_path / "out.json"
        code, _, _ = run(
            capsys, "compose", "-f", morphism_file, "-g", morphism_file,
            "-o", str(out_path),
        )
        assert code == 0
        assert json.loads(out_path.read_text())["terms"]
        code, out, _ = run(capsys, "tensor", "-f", morphism_file, "-g", morphism_file)
        assert code == 0 and json.loads(out)["source"] == 2
        code, out, _ = run(capsys, "dual", "-f", morphism_file)
        assert code == 0 and json.loads(out)["source"] == 1

    def test_negligible(self, capsys, morphism_file):
        code, out, _ = run(capsys, "negligible", "-f", morphism_file, "--json")
        assert code == 0
        assert json.loads(out) == {"negligible": False}

    def test_gram_json(self, capsys):
        code, out, _ = run(capsys, "gram", "--n", "1", "--json")
        doc = json.loads(out)
        assert code == 0
        assert doc["matrix"] == [["t", "t"], ["t", "t^2"]]

    def test_verify_json_schema(self, capsys):
        code, out, _ = run(
            capsys, "verify", "--family", "xn_idempotent", "--n", "3", "--json"
        )
        doc = json.loads(out)
        assert code == 0
        assert doc["family"] == "xn_idempotent" and doc["overall"] is True
        assert {c["label"] for c in doc["checks"]} == {"x^2 = x", "x* = x"}

    def test_verify_object_split(self, capsys):
        code, out, _ = run(capsys, "verify", "--family", "object_split", "--d", "1")
        assert code == 0
        assert "all pass" in out

    def test_block_of(self, capsys):
        code, out, _ = run(
            capsys, "block-of", "--lambda", "1", "--d", "5", "--bound", "8", "--json"
        )
        doc = json.loads(out)
        assert code == 0
        assert doc["lambda"] == [1] and doc["d"] == 5
        assert [5] in doc["block"]["members"]
        assert doc["block"]["type"] == "infinite"
        assert doc["block"]["index"] == 0

    def test_blocks_count(self, capsys):
        code, out, _ = run(capsys, "blocks", "--d", "2", "--json")
        doc = json.loads(out)
        assert code == 0 and doc["infinite_blocks"] == 2

    def test_symmetrizer(self, capsys, tmp_path):
        out_path = tmp_path / "y.json"
        code, out, _ = run(
            capsys, "symmetrizer", "--lambda", "1,1", "--json", "-o", str(out_path)
        )
        doc = json.loads(out)
        assert code == 0
        assert doc["terms"][0]["coeff"] == "1/2"
        assert json.loads(out_path.read_text())["source"] == 2

    def test_decompose(self, capsys):
        code, out, _ = run(capsys, "decompose", "--n", "1", "--d", "1", "--json")
        doc = json.loads(out)
        assert code == 0
        assert doc["summands"] == [
            {"lambda": [], "dim": "1", "count": 1},
            {"lambda": [1], "dim": "0", "count": 1},
        ]

    def test_tl_ops(self, capsys):
        code, out, _ = run(capsys, "tl", "quantum", "--n", "3", "--l", "2", "--json")
        doc = json.loads(out)
        assert code == 0 and doc["quantum"] == "0" and doc["l_q"] == 2
        code, out, _ = run(capsys, "tl", "negligible", "--n", "2", "--l", "2", "--json")
        assert code == 0 and json.loads(out) == {"negligible": True}
        code, out, _ = run(capsys, "tl", "block", "--n", "3", "--l", "2", "--json")
        assert code == 0 and json.loads(out)["block"] == "reg:1"
        code, out, _ = run(capsys, "tl", "jw", "--n", "2", "--json")
        doc = json.loads(out)
        assert code == 0 and doc["kind"] == "tl"

    def test_tl_jw_undefined_is_two(self, capsys):
        code, _, err = run(capsys, "tl", "jw", "--n", "3", "--l", "2")
        assert code == 2
        assert "vanishes" in err


class TestDeterminism:
    def test_repeated_runs_identical(self, capsys):
        _, out1, _ = run(capsys, "verify", "--family", "ortho", "--n", "1", "--json")
        _, out2, _ = run(capsys, "verify", "--family", "ortho", "--n", "1", "--json")
        assert out1 == out2
        _, out3, _ = run(capsys, "decompose", "--n", "1", "--d", "0", "--json")
        _, out4, _ = run(capsys, "decompose", "--n", "1", "--d", "0", "--json")
        assert out3 == out4

    def test_io_roundtrip_idempotent(self, capsys, tmp_path):
        # a non-canonical file canonicalizes once, then stays fixed
        doc = {
            "source": 1,
            "target": 1,
            "ring": "Qt",
            "terms": [
                {"blocks": [[1], [0]], "coeff": "0 + 1"},
                {"blocks": [[1, 0]], "coeff": "2 - 1"},
            ],
        }
        first = tmp_path / "in.json"
        first.write_text(json.dumps(doc))
        mid = tmp_path / "mid.json"
        out = tmp_path / "out.json"
        # dual . dual is the identity, so two passes re-serialize the input
        assert cli.main(["dual", "-f", str(first), "-o", str(mid)]) == 0
        assert cli.main(["dual", "-f", str(mid), "-o", str(out)]) == 0
        canonical = out.read_text()
        again = tmp_path / "again.json"
        assert cli.main(["dual", "-f", str(out), "-o", str(again)]) == 0
        assert cli.main(["dual", "-f", str(again), "-o", str(out)]) == 0
        assert out.read_text() == canonical
        blocks = json.loads(canonical)["terms"][0]["blocks"]
        assert blocks == [[0], [1]]
