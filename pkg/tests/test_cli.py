import json
import textwrap

import pytest

from zigzagip import cli

NATURALS_CONSTRUCT = """\
[ring]
kind = naturals

[sequences]
kind = arithmetic
start = 0, 0
step = 1, 2

[oracle]
base1.alpha = 1/5
base1.interval = 0, 1/5

[run]
blocks = 3
"""

MATRIX_CONSTRUCT = """\
[ring]
kind = matrix
dimension = 2

[sequences]
kind = constant
value1 = [["1", "0"], ["1", "1"]]
value2 = [["1", "1"], ["0", "1"]]

[oracle]
base1.alpha = 1/3
base1.interval = 0, 1/3

[run]
blocks = 2
"""

MULT5_PROBE = """\
[ring]
kind = naturals

[oracle]
base1.alpha = 1/5
base1.interval = 0, 1/5

[run]
range = 1..20
"""


def write_config(tmp_path, text, name="run.ini"):
    path = tmp_path / name
    path.write_text(textwrap.dedent(text), encoding="utf-8")
    return str(path)


def run_to_file(tmp_path, config_text, command, extra=(), name="report.json"):
    config = write_config(tmp_path, config_text)
    out = tmp_path / name
    code = cli.main(
        ["--config", config, "--command", command, "--out", str(out), *extra]
    )
    report = json.loads(out.read_text(encoding="utf-8")) if out.exists() else None
    return code, report


class TestConstruct:
    def test_pass_naturals(self, tmp_path):
        code, report = run_to_file(tmp_path, NATURALS_CONSTRUCT, "construct")
        assert code == 0
        assert report["status"] == "pass"
        assert report["blocks"] == [[2, 3], [5], [7, 8]]
        assert report["schema"] == 1
        assert report["command"] == "construct"
        assert "timestamp" in report
        cert = report["certificate"]
        assert cert["summary"]["overall_pass"] is True
        assert cert["summary"]["terms_checked"] == 26 + 78
        assert "elapsed_seconds" in cert["stats"]

    def test_pass_matrix(self, tmp_path):
        code, report = run_to_file(tmp_path, MATRIX_CONSTRUCT, "construct")
        assert code == 0
        assert report["blocks"] == [[1], [2, 3, 4]]
        assert report["certificate"]["ring"] == {"kind": "matrix", "dimension": 2}

    def test_no_timestamp_byte_identical(self, tmp_path):
        config = write_config(tmp_path, NATURALS_CONSTRUCT)
        outs = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            code = cli.main(
                ["--config", config, "--command", "construct",
                 "--out", str(out), "--no-timestamp"]
            )
            assert code == 0
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]
        report = json.loads(outs[0])
        assert "timestamp" not in report
        assert "elapsed_seconds" not in report["certificate"]["stats"]

    def test_window_exhaustion_reports_partial(self, tmp_path):
        config_text = """\
        [ring]
        kind = naturals

        [sequences]
        kind = explicit
        seq1 = ["5", "1", "1", "1"]

        [oracle]
        base1.alpha = 1/5
        base1.interval = 0, 1/5

        [run]
        blocks = 2
        """
        code, report = run_to_file(
            tmp_path, config_text, "construct", extra=["--horizon", "3"]
        )
        assert code == 2
        assert report["status"] == "search-exhausted"
        assert report["search"] == {"candidates_tried": 7, "reason": "horizon"}
        partial = report["certificate"]
        assert partial["blocks"] == [[1]]
        assert partial["summary"]["overall_pass"] is True

    def test_window_from_config_section(self, tmp_path):
        config_text = """\
        [ring]
        kind = naturals

        [sequences]
        kind = explicit
        seq1 = ["5", "1", "1", "1"]

        [oracle]
        base1.alpha = 1/5
        base1.interval = 0, 1/5

        [run]
        blocks = 2
        horizon = 3
        """
        code, report = run_to_file(tmp_path, config_text, "construct")
        assert code == 2
        assert report["search"]["reason"] == "horizon"

    def test_budget_flag_exhaustion(self, tmp_path):
        code, report = run_to_file(
            tmp_path, NATURALS_CONSTRUCT, "construct", extra=["--budget", "3"]
        )
        assert code == 2
        assert report["search"] == {"candidates_tried": 3, "reason": "budget"}
        assert report["certificate"]["blocks"] == []
        assert report["certificate"]["checks"] == []

    def test_one_sided_instance_exits_config(self, tmp_path, capsys):
        config_text = """\
        [ring]
        kind = endomap
        modulus = 3

        [sequences]
        kind = constant
        value1 = [0, 1, 2]

        [oracle]
        base1.alpha = 1/2
        base1.interval = 0, 1/2
        base1.character = identity

        [run]
        blocks = 1
        """
        code, report = run_to_file(tmp_path, config_text, "construct")
        assert code == 3
        assert report is None
        assert "distributive" in capsys.readouterr().err


class TestVerify:
    def build_report(self, tmp_path):
        code, report = run_to_file(tmp_path, NATURALS_CONSTRUCT, "construct")
        assert code == 0
        return report

    def verify(self, tmp_path, cert_path):
        config_text = f"[run]\ncertificate = {cert_path}\n"
        return run_to_file(tmp_path, config_text, "verify", name="verdict.json")

    def test_round_trip_passes(self, tmp_path):
        self.build_report(tmp_path)
        code, verdict = self.verify(tmp_path, tmp_path / "report.json")
        assert code == 0
        assert verdict["status"] == "pass"
        assert verdict["identical"] is True

    def test_bare_certificate_accepted(self, tmp_path):
        report = self.build_report(tmp_path)
        bare = tmp_path / "bare.json"
        bare.write_text(json.dumps(report["certificate"]), encoding="utf-8")
        code, verdict = self.verify(tmp_path, bare)
        assert code == 0 and verdict["identical"] is True

    def test_tampered_verdict_fails(self, tmp_path):
        report = self.build_report(tmp_path)
        report["certificate"]["checks"][0]["member"] = False
        tampered = tmp_path / "tampered.json"
        tampered.write_text(json.dumps(report), encoding="utf-8")
        code, verdict = self.verify(tmp_path, tampered)
        assert code == 1
        assert verdict["identical"] is False
        assert verdict["status"] == "pass"  # fresh recomputation still passes

    def test_tampered_subsystem_fails_fresh(self, tmp_path):
        report = self.build_report(tmp_path)
        report["certificate"]["subsystem"]["rows"][0][0] = "7"
        tampered = tmp_path / "tampered.json"
        tampered.write_text(json.dumps(report), encoding="utf-8")
        code, verdict = self.verify(tmp_path, tampered)
        assert code == 1
        assert verdict["status"] == "fail"

    def test_missing_file(self, tmp_path):
        code, verdict = self.verify(tmp_path, tmp_path / "absent.json")
        assert code == 3 and verdict is None

    def test_not_a_certificate(self, tmp_path):
        junk = tmp_path / "junk.json"
        junk.write_text('{"hello": 1}', encoding="utf-8")
        code, verdict = self.verify(tmp_path, junk)
        assert code == 3 and verdict is None


class TestProbe:
    def test_members(self, tmp_path):
        code, report = run_to_file(tmp_path, MULT5_PROBE, "probe")
        assert code == 0
        assert report["members"] == ["5", "10", "15", "20"]
        assert report["count"] == 4
        assert report["range"] == [1, 20]

    def test_intersection_of_bases(self, tmp_path):
        config_text = """\
        [ring]
        kind = naturals

        [oracle]
        base1.alpha = 1/2
        base1.interval = 0, 1/2
        base2.alpha = 1/3
        base2.interval = 0, 1/3

        [run]
        range = 1..36
        """
        code, report = run_to_file(tmp_path, config_text, "probe")
        assert code == 0
        assert report["members"] == ["6", "12", "18", "24", "30", "36"]

    def test_matrix_instance_rejected(self, tmp_path):
        config_text = MATRIX_CONSTRUCT.replace("blocks = 2", "range = 1..5")
        code, report = run_to_file(tmp_path, config_text, "probe")
        assert code == 3 and report is None

    @pytest.mark.parametrize("bad", ["5..1", "abc", "1..", "-3..4"])
    def test_bad_ranges(self, tmp_path, bad):
        config_text = MULT5_PROBE.replace("range = 1..20", f"range = {bad}")
        code, report = run_to_file(tmp_path, config_text, "probe")
        assert code == 3 and report is None


class TestEnumerate:
    def enumerate(self, tmp_path, runsection):
        config_text = f"""\
        [ring]
        kind = naturals

        [sequences]
        kind = explicit
        seq1 = ["1", "2"]

        [run]
        {runsection}
        """
        return run_to_file(tmp_path, config_text, "enumerate")

    def test_counts_and_values(self, tmp_path):
        code, report = self.enumerate(tmp_path, "k = 2")
        assert code == 0
        assert report["counts"] == {
            "fs": 3, "fp": 3, "ap": 4, "zfs": 3, "zfp": 3, "zap": 4,
        }
        fs_values = {entry["value"] for entry in report["sets"]["fs"]}
        assert fs_values == {"1", "2", "3"}
        ap_words = [tuple(e["term"]["indices"]) for e in report["sets"]["ap"]]
        assert ap_words == [(1,), (2,), (1, 2), (2, 1)]

    def test_two_rows(self, tmp_path):
        config_text = """\
        [ring]
        kind = naturals

        [sequences]
        kind = explicit
        seq1 = ["1", "2"]
        seq2 = ["10", "20"]

        [run]
        k = 2
        """
        code, report = run_to_file(tmp_path, config_text, "enumerate")
        assert code == 0
        assert report["l"] == 2
        assert report["counts"]["zfs"] == 8
        assert report["counts"]["zap"] == 12

    def test_term_cap(self, tmp_path):
        code, report = self.enumerate(tmp_path, "k = 2\nterm_cap = 3")
        assert code == 2
        assert report["status"] == "budget-exceeded"
        assert report["needed"] == 4 and report["cap"] == 3

    def test_k_beyond_horizon(self, tmp_path):
        code, report = self.enumerate(tmp_path, "k = 3")
        assert code == 3 and report is None

    def test_random_rows_need_seed(self, tmp_path):
        config_text = """\
        [ring]
        kind = naturals

        [sequences]
        kind = random
        count = 2

        [run]
        k = 2
        """
        code, report = run_to_file(tmp_path, config_text, "enumerate")
        assert code == 3 and report is None

    def test_random_rows_deterministic(self, tmp_path):
        config_text = """\
        [ring]
        kind = naturals

        [sequences]
        kind = random
        count = 2
        seed = 7
        bound = 5

        [run]
        k = 3
        """
        config = write_config(tmp_path, config_text)
        blobs = []
        for name in ("a.json", "b.json"):
            out = tmp_path / name
            assert cli.main(
                ["--config", config, "--command", "enumerate",
                 "--out", str(out), "--no-timestamp"]
            ) == 0
            blobs.append(out.read_bytes())
        assert blobs[0] == blobs[1]


class TestHindman:
    def hindman(self, tmp_path, runsection):
        config_text = f"[run]\n{runsection}\n"
        return run_to_file(tmp_path, config_text, "hindman")

    def test_witness(self, tmp_path):
        code, report = self.hindman(tmp_path, "coloring = 1, 1, 1\nlength = 2")
        assert code == 0
        assert report["status"] == "witness"
        assert report["witness"]["values"] == [1, 1]
        assert report["witness"]["finite_sums"] == [1, 2]

    def test_named_colors(self, tmp_path):
        code, report = self.hindman(
            tmp_path, "coloring = red, red, red\nlength = 2\ndistinct = true"
        )
        assert code == 0
        assert report["witness"] == {
            "color": "red", "values": [1, 2], "finite_sums": [1, 2, 3],
        }

    def test_no_witness(self, tmp_path):
        code, report = self.hindman(tmp_path, "coloring = 1, 2, 2, 1\nlength = 2")
        assert code == 1
        assert report["status"] == "no-witness"
        assert report["witness"] is None

    def test_sweep_all_witnessed(self, tmp_path):
        code, report = self.hindman(
            tmp_path, "sweep = true\nn = 5\ncolors = 2\nlength = 2"
        )
        assert code == 0
        assert report["status"] == "all-witnessed"
        assert report["colorings"] == 32
        assert report["witnesses"] == 32
        assert report["failures"] == []

    def test_sweep_with_failures(self, tmp_path):
        code, report = self.hindman(
            tmp_path, "sweep = true\nn = 4\ncolors = 2\nlength = 2"
        )
        assert code == 1
        assert report["status"] == "missing-witness"
        assert [1, 2, 2, 1] in report["failures"]

    def test_needs_coloring_or_sweep(self, tmp_path):
        code, report = self.hindman(tmp_path, "length = 2")
        assert code == 3 and report is None


class TestConfigErrors:
    @pytest.mark.parametrize(
        "mutation",
        [
            lambda t: t.replace("kind = naturals", "kind = integers"),
            lambda t: t.replace("[ring]\nkind = naturals", "[ring]"),
            lambda t: t.replace("base1.alpha = 1/5", "base1.alpha = pi"),
            lambda t: t.replace("base1.interval = 0, 1/5", "base1.interval = 1/5"),
            lambda t: t.replace("base1.interval = 0, 1/5", "base1.interval = 1/4, 1/4"),
            lambda t: t.replace("blocks = 3", "blocks = 0"),
            lambda t: t.replace("blocks = 3", "blocks = three"),
            lambda t: t.replace("step = 1, 2", "step = 1"),
        ],
    )
    def test_bad_construct_configs(self, tmp_path, mutation, capsys):
        code, report = run_to_file(tmp_path, mutation(NATURALS_CONSTRUCT), "construct")
        assert code == 3 and report is None
        assert capsys.readouterr().err.startswith("error:")

    def test_missing_oracle_section(self, tmp_path):
        text = NATURALS_CONSTRUCT.replace("[oracle]", "[oracle-misnamed]")
        code, report = run_to_file(tmp_path, text, "construct")
        assert code == 3 and report is None

    def test_unreadable_config(self, tmp_path):
        code = cli.main(
            ["--config", str(tmp_path / "absent.ini"), "--command", "probe"]
        )
        assert code == 3

    def test_malformed_ini(self, tmp_path):
        path = tmp_path / "broken.ini"
        path.write_text("not an ini file at all\n", encoding="utf-8")
        assert cli.main(["--config", str(path), "--command", "probe"]) == 3

    def test_arithmetic_on_matrix_rejected(self, tmp_path):
        text = MATRIX_CONSTRUCT.replace(
            'kind = constant\nvalue1 = [["1", "0"], ["1", "1"]]\nvalue2 = [["1", "1"], ["0", "1"]]',
            "kind = arithmetic\nstart = 0\nstep = 1",
        )
        code, report = run_to_file(tmp_path, text, "construct")
        assert code == 3 and report is None


class TestFlags:
    def test_bad_flag_values(self, tmp_path):
        config = write_config(tmp_path, MULT5_PROBE)
        base = ["--config", config, "--command", "probe"]
        assert cli.main([*base, "--jobs", "0"]) == 3
        assert cli.main([*base, "--horizon", "0"]) == 3
        assert cli.main([*base, "--budget", "-1"]) == 3

    def test_unknown_command_is_usage_error(self, tmp_path):
        config = write_config(tmp_path, MULT5_PROBE)
        with pytest.raises(SystemExit) as exc:
            cli.main(["--config", config, "--command", "dance"])
        assert exc.value.code == 2

    def test_jobs_echoed(self, tmp_path):
        code, report = run_to_file(
            tmp_path, MULT5_PROBE, "probe", extra=["--jobs", "4"]
        )
        assert code == 0 and report["jobs"] == 4

    def test_stdout_when_no_out(self, tmp_path, capsys):
        config = write_config(tmp_path, MULT5_PROBE)
        code = cli.main(["--config", config, "--command", "probe"])
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["members"] == ["5", "10", "15", "20"]

    def test_out_from_run_section(self, tmp_path):
        target = tmp_path / "from-config.json"
        text = MULT5_PROBE + f"out = {target}\n"
        config = write_config(tmp_path, text)
        assert cli.main(["--config", config, "--command", "probe"]) == 0
        assert json.loads(target.read_text(encoding="utf-8"))["count"] == 4

    def test_inline_comments_stripped(self, tmp_path):
        text = MULT5_PROBE.replace(
            "kind = naturals", "kind = naturals   ; the exact-integer instance"
        ).replace("range = 1..20", "range = 1..20  ; inclusive on both ends")
        code, report = run_to_file(tmp_path, text, "probe")
        assert code == 0 and report["count"] == 4


class TestReportShape:
    def test_canonical_json(self, tmp_path):
        config = write_config(tmp_path, MULT5_PROBE)
        out = tmp_path / "report.json"
        assert cli.main(
            ["--config", config, "--command", "probe", "--out", str(out)]
        ) == 0
        text = out.read_text(encoding="utf-8")
        assert text == json.dumps(json.loads(text), indent=2, sort_keys=True) + "\n"

    def test_no_temp_files_left_behind(self, tmp_path):
        run_to_file(tmp_path, MULT5_PROBE, "probe")
        assert list(tmp_path.glob("*.tmp")) == []
