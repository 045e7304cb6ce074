import io
import json

import pytest

from semipred.cli import EXIT_BUDGET, EXIT_NEGATIVE, EXIT_OK, EXIT_USAGE, Report, emit_report, main, parse_report, run
from semipred.errors import FormatError
from semipred.formats import parse_rees_text, parse_table_file, parse_table_text
from semipred.semigroup import format_table

from conftest import MIN2_TABLE, Z2_TABLE


@pytest.fixture
def files(tmp_path, s3):
    def write(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return {
        "min2": write("min2.txt", format_table(MIN2_TABLE)),
        "z2": write("z2.txt", format_table(Z2_TABLE)),
        "s3": write("s3.txt", format_table(s3.table)),
        "commutator": write("comm.txt", "x^-1 * y^-1 * x * y = 1\n"),
        "idem": write("idem.txt", "M(x, x, x)\n"),
        "big": write("big.txt", "M(a, b, c)\nM(c, d, e)\nM(e, f, g)\n"),
        "reduce": write("reduce.txt", "M(x, [0,1], y)\nM(x, [1,1], y)\nx = y\n"),
        "write": write,
    }


def call(argv):
    out = io.StringIO()
    code = run(argv, out)
    text = out.getvalue()
    return code, (json.loads(text) if text else None)


class TestTableFormat:
    def test_parse(self):
        s = parse_table_text("2\n0 0\n0 1\n")
        assert s.table == MIN2_TABLE

    def test_file(self, files):
        assert parse_table_file(files["z2"]).table == Z2_TABLE

    @pytest.mark.parametrize(
        "text, line, column",
        [
            ("2\n0 0\n0 x\n", 3, 2),
            ("2\n0 0\n0 2\n", 3, 2),
            ("two\n0 0\n0 0\n", 1, 1),
            ("2\n0 0\n0\n", 3, None),
        ],
    )
    def test_errors_have_position(self, text, line, column):
        with pytest.raises(FormatError) as exc:
            parse_table_text(text)
        assert exc.value.line == line
        if column is not None:
            assert exc.value.column == column

    def test_non_associative(self):
        from semipred.errors import AssociativityError

        with pytest.raises(AssociativityError):
            parse_table_text("2\n1 0\n0 0\n")

    def test_rees_json(self):
        spec = parse_rees_text(json.dumps(
            {"group_table": [[0, 1], [1, 0]], "lambda_size": 2, "i_size": 2, "sandwich": [[0, 0], [0, 1]]}))
        assert spec.order == 8 and spec.is_normalized()

    def test_rees_missing_field(self):
        with pytest.raises(FormatError):
            parse_rees_text('{"lambda_size": 1}')


class TestCommands:
    def test_check_min2(self, files):
        code, doc = call(["check", files["min2"]])
        assert code == EXIT_OK
        assert doc["payload"]["verdict"] == "hard"
        assert doc["payload"]["qi_left"]["witness"] == [0, 1, 0, 1]

    def test_check_strict(self, files):
        assert call(["check", files["min2"], "--strict"])[0] == EXIT_NEGATIVE
        assert call(["check", files["z2"], "--strict"])[0] == EXIT_OK

    def test_check_z2(self, files):
        _, doc = call(["check", files["z2"]])
        assert doc["payload"]["qi_left"]["holds"] is True
        assert doc["payload"]["verdict"] == "simple"

    def test_missing_file(self, tmp_path):
        assert call(["check", str(tmp_path / "nope.txt")])[0] == EXIT_USAGE

    def test_bad_table(self, files):
        bad = files["write"]("bad.txt", "2\n0 0\n0 9\n")
        assert call(["check", bad])[0] == EXIT_USAGE

    def test_usage_error(self):
        assert main(["check"]) == EXIT_USAGE
        assert main(["frobnicate"]) == EXIT_USAGE

    def test_kernel(self, files):
        code, doc = call(["kernel", files["min2"]])
        assert code == EXIT_OK
        p = doc["payload"]
        assert p["kernel"] == [0] and p["idempotents"] == [0, 1] and p["is_homogroup"]
        assert p["center_check"]["holds"] is True

    def test_predicatize(self, files):
        _, doc = call(["predicatize", files["z2"], "--group"])
        rels = doc["payload"]["relations"]
        assert rels["E"] == {"arity": 1, "tuples": [[0]]}
        assert len(rels["M"]["tuples"]) == 4

    def test_solve_commutator(self, files):
        code, doc = call(["solve", "--structure", files["s3"], "--group", "--words", files["commutator"],
                          "--project", "x,y", "--count"])
        assert code == EXIT_OK
        assert doc["payload"]["count"] == 18
        assert "points" not in doc["payload"]

    def test_solve_power(self, files):
        _, doc = call(["solve", "--structure", files["min2"], "--system", files["idem"], "--N", "3"])
        assert doc["payload"]["count"] == 8
        assert len(doc["payload"]["points"]) == 8

    def test_solve_variable_budget(self, files):
        args = ["solve", "--structure", files["min2"], "--system", files["big"]]
        assert call(args)[0] == EXIT_BUDGET
        assert call(args + ["--max-vars", "7"])[0] == EXIT_OK

    def test_exponent_budget(self, files):
        assert call(["chain", files["min2"], "--N", "5"])[0] == EXIT_BUDGET
        assert call(["chain", files["min2"], "--N", "5", "--max-exponent", "5"])[0] == EXIT_OK

    def test_universe_budget(self, files):
        args = ["solve", "--structure", files["s3"], "--system", files["idem"], "--max-universe", "4"]
        assert call(args)[0] == EXIT_BUDGET

    def test_reduce(self, files):
        code, doc = call(["reduce", "--structure", files["z2"], "--system", files["reduce"], "--N", "2"])
        assert code == EXIT_OK
        p = doc["payload"]
        assert p["reducible"] and p["equivalent"]
        assert p["reduced_atoms"] <= p["input_atoms"]

    def test_reduce_qi_violated(self, files):
        code, doc = call(["reduce", "--structure", files["min2"], "--system", files["reduce"], "--N", "2",
                          "--strict"])
        assert code == EXIT_NEGATIVE
        assert doc["payload"]["reducible"] is False

    def test_chain_min2(self, files):
        code, doc = call(["chain", files["min2"], "--N", "3"])
        assert code == EXIT_OK
        p = doc["payload"]
        assert p["counts"] == [4, 2, 1]
        assert p["strictly_decreasing"]
        assert p["violating_points"][0]["point"] == [0, 1, 1]

    def test_chain_group(self, files):
        code, doc = call(["chain", files["z2"], "--N", "3", "--strict"])
        assert code == EXIT_NEGATIVE and doc["payload"]["qi_holds"] is True

    def test_survey(self):
        code, doc = call(["survey", "--order", "2"])
        assert code == EXIT_OK
        assert doc["payload"]["total_tables"] == 8

    def test_survey_budget(self):
        assert call(["survey", "--order", "5"])[0] == EXIT_BUDGET

    def test_rees(self, files):
        spec = files["write"]("spec.json", json.dumps(
            {"group_table": [[0, 1], [1, 0]], "lambda_size": 2, "i_size": 2, "sandwich": [[0, 0], [0, 1]]}))
        code, doc = call(["rees", spec])
        assert code == EXIT_OK
        assert doc["payload"]["order"] == 8 and doc["payload"]["is_simple"]
        assert doc["payload"]["is_rectangular_band_of_groups"] is False

    def test_rees_unnormalized(self, files):
        spec = files["write"]("spec.json", json.dumps(
            {"group_table": [[0, 1], [1, 0]], "lambda_size": 2, "i_size": 2, "sandwich": [[1, 0], [0, 1]]}))
        assert call(["rees", spec])[0] == EXIT_USAGE


class TestReports:
    @pytest.mark.parametrize("fmt", ["structured", "text"])
    def test_round_trip(self, files, fmt):
        out = io.StringIO()
        run(["check", files["min2"], "--format", fmt], out)
        text = out.getvalue()
        doc = parse_report(text, fmt)
        assert doc["command"] == "check"
        assert doc["payload"]["qi_left"]["witness"] == [0, 1, 0, 1]
        again = io.StringIO()
        run(["check", files["min2"], "--format", fmt], again)
        assert again.getvalue() == text

    @pytest.mark.parametrize("fmt", ["structured", "text"])
    def test_emit_parse_inverse(self, fmt):
        r = Report("x", {"b": [1, 2], "a": {"k": None}})
        assert parse_report(emit_report(r, fmt), fmt) == r.to_dict()

    def test_empty_survey_zeroed(self):
        from semipred.classify import SurveyOutcome

        doc = parse_report(emit_report(Report("survey", SurveyOutcome(order=0).to_dict())))
        p = doc["payload"]
        assert p["total_tables"] == 0 and p["qi_pass_count"] == 0
