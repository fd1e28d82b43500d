import functools

import pytest

from lmshift.cli import *
from lmshift.conjugacy import BlockMap, identity_conjugacy
from lmshift.definitions import emit_block_map, load_shift
from lmshift.output import read_records

Y_FILE = "builtin:lind-marcus-2block"


@pytest.fixture(scope="module")
def y():
    return load_shift(Y_FILE)


@pytest.fixture
def identity_maps(tmp_path, y):
    pair = identity_conjugacy(y)
    forward = tmp_path / "forward.map"
    inverse = tmp_path / "inverse.map"
    forward.write_text(emit_block_map(pair.forward))
    inverse.write_text(emit_block_map(pair.inverse))
    return str(forward), str(inverse)


def run(capsys, *argv):
    status = cli_main(list(argv))
    captured = capsys.readouterr()
    return status, captured.out, captured.err


class TestParser:
    def test_verify_defaults(self):
        opts = make_parser().parse_args(["verify", Y_FILE, "--suite", "lm"])
        assert opts.command == "verify"
        assert (opts.maxlen, opts.depth) == (16, 6)
        assert (opts.bridge_bound, opts.run_bound) == (8, 8)
        assert opts.format == "text"
        assert opts.out is None
        assert not opts.timing

    def test_unknown_suite(self, capsys):
        with pytest.raises(SystemExit) as info:
            make_parser().parse_args(["verify", Y_FILE, "--suite", "lemma23"])
        assert info.value.code == 2

    def test_command_required(self, capsys):
        with pytest.raises(SystemExit):
            make_parser().parse_args([])

    def test_negative_length(self, capsys):
        with pytest.raises(SystemExit):
            make_parser().parse_args(["language", Y_FILE, "--length", "-1"])
        assert "at least 0" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv, expected",
    [
        (["--format", "records"], records_output),
        ([], text_output),
        (["--failures-only"], text_output),
    ],
)
def test_select_output(argv, expected):
    opts = make_parser().parse_args(["language", Y_FILE, *argv])
    output = select_output(opts)
    if isinstance(output, functools.partial):
        assert output.func is expected
        assert output.keywords == {"show_passing": "--failures-only" not in argv}
    else:
        assert output is expected


def test_select_pipeline():
    opts = make_parser().parse_args(["verify", Y_FILE, "--suite", "lemma22"])
    pipeline = select_pipeline(opts)
    assert pipeline.args[1] == "lemma22"
    assert pipeline.keywords["maxlen"] == 16


class TestLanguage:
    def test_records(self, capsys):
        status, out, _ = run(
            capsys, "language", "builtin:lind-marcus", "--length", "1", "--format", "records"
        )
        assert status == EXIT_PASS
        header, record = read_records(out)
        assert header["verdict"] == "pass"
        assert record["count"] == "3"
        assert record["words"] == "a;b;c"

    def test_golden_mean(self, capsys):
        status, out, _ = run(capsys, "language", "builtin:golden-mean", "--length", "3")
        assert status == EXIT_PASS
        assert "count: 5" in out

    def test_timing(self, capsys):
        _, out, _ = run(
            capsys, "language", "builtin:golden-mean", "--timing", "--format", "records"
        )
        assert read_records(out)[-1]["check"] == "timing"

    def test_missing_file(self, capsys, tmp_path):
        status, out, err = run(capsys, "language", str(tmp_path / "nowhere.shift"))
        assert status == EXIT_USAGE
        assert out == ""
        assert "No such file" in err

    def test_parse_error(self, capsys, tmp_path):
        path = tmp_path / "bad.shift"
        path.write_text("alphabet: a b\nkind: zigzag\n")
        status, _, err = run(capsys, "language", str(path))
        assert status == EXIT_USAGE
        assert "line 2: Unknown kind" in err

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "report.txt"
        status, out, _ = run(
            capsys,
            "language",
            "builtin:lind-marcus",
            "--length",
            "2",
            "--format",
            "records",
            "--out",
            str(path),
        )
        assert status == EXIT_PASS
        assert out == ""
        assert read_records(path.read_text())[1]["count"] == "9"


class TestVerify:
    def test_lemma22_passes(self, capsys):
        status, out, _ = run(
            capsys, "verify", "builtin:lind-marcus", "--suite", "lemma22", "--maxlen", "10"
        )
        assert status == EXIT_PASS
        assert out.splitlines()[0].endswith(": PASS")

    def test_profile_fails_on_golden_mean(self, capsys):
        status, out, _ = run(
            capsys,
            "verify",
            "builtin:golden-mean",
            "--suite",
            "profile",
            "--maxlen",
            "8",
            "--depth",
            "4",
            "--format",
            "records",
        )
        assert status == EXIT_FAIL
        header, record = read_records(out)
        assert header["verdict"] == record["verdict"] == "fail"
        assert "No characteristic pair" in record["reason"]

    @pytest.mark.parametrize(
        "option, value, message",
        [
            ("--bridge-bound", "1", "at least 3"),
            ("--run-bound", "1", "at least 2"),
            ("--maxlen", "0", "at least 1"),
            ("--depth", "six", "invalid integer"),
        ],
    )
    def test_bad_bounds(self, capsys, option, value, message):
        with pytest.raises(SystemExit) as info:
            cli_main(["verify", Y_FILE, "--suite", "profile", option, value])
        assert info.value.code == EXIT_USAGE
        assert message in capsys.readouterr().err

    def test_internal_errors_propagate(self, capsys, monkeypatch):
        def broken(opts):
            def pipeline(timing):
                raise ValueError("Negative element in [-1]")

            return pipeline

        monkeypatch.setattr("lmshift.cli.select_pipeline", broken)
        with pytest.raises(ValueError, match="Negative element"):
            cli_main(["verify", Y_FILE, "--suite", "lm"])


class TestTransfer:
    def test_identity(self, capsys, identity_maps):
        forward, inverse = identity_maps
        status, out, _ = run(
            capsys,
            "transfer",
            Y_FILE,
            Y_FILE,
            forward,
            inverse,
            Y_FILE,
            "--maxlen",
            "12",
            "--format",
            "records",
        )
        assert status == EXIT_PASS
        header, *records = read_records(out)
        assert header["command"] == "transfer"
        transfer = next(r for r in records if r["check"] == "transfer")
        assert (transfer["H-minus"], transfer["H-plus"], transfer["I"]) == ("0", "0", "3")
        assert transfer["delta-minus"] == "(ab) | ε -> {0}"

    def test_forward_map_must_be_one_block(self, capsys, tmp_path, y, identity_maps):
        _, inverse = identity_maps
        middle = BlockMap(y.alphabet, y.alphabet, 1, {w: w[1] for w in y.language(3)})
        forward = tmp_path / "middle.map"
        forward.write_text(emit_block_map(middle))
        status, _, err = run(
            capsys, "transfer", Y_FILE, Y_FILE, str(forward), inverse, Y_FILE
        )
        assert status == EXIT_USAGE
        assert "one-block" in err

    def test_malformed_map(self, capsys, tmp_path, identity_maps):
        _, inverse = identity_maps
        bad = tmp_path / "bad.map"
        bad.write_text("radius: 0\nmap:\n  (ab) (ab)\n")
        status, _, err = run(capsys, "transfer", Y_FILE, Y_FILE, str(bad), inverse, Y_FILE)
        assert status == EXIT_USAGE
        assert "line 3" in err
