from __future__ import annotations

import contextlib
import io
import json
import os
import shlex
import subprocess
import sys
from pathlib import Path

import pytest

from tropkit.cli import BUDGET, NO, USAGE, YES, run
from tropkit.textio import parse_certificate

DATA = Path(__file__).parent / "data"
EXPECTED = json.loads((DATA / "expected.json").read_text())


@contextlib.contextmanager
def chdir(path):
    old = os.getcwd()
    os.chdir(path)
    try:
        yield
    finally:
        os.chdir(old)


def call(args, cwd=DATA, stdin=None):
    """Run the CLI in-process from the corpus directory."""
    buf, err = io.StringIO(), io.StringIO()
    old_stdin = sys.stdin
    with chdir(cwd), contextlib.redirect_stdout(buf), contextlib.redirect_stderr(err):
        if stdin is not None:
            sys.stdin = io.StringIO(stdin)
        try:
            code = run(shlex.split(args) if isinstance(args, str) else args)
        finally:
            sys.stdin = old_stdin
    return code, buf.getvalue(), err.getvalue()


class TestExamples:
    def test_solve_f1(self):
        assert call("solve f1.trop")[:2] == (YES, "0 0 0\n")

    def test_dim_f2(self):
        assert call("dim f2.trop --global --affine --at-least 4")[0] == YES

    def test_implies_counterexample(self):
        assert call("implies a.trop l.trop")[0] == NO


@pytest.mark.parametrize("cmd", sorted(EXPECTED))
def test_corpus_frozen(cmd):
    code, out, _ = call(cmd)
    assert (code, out) == (EXPECTED[cmd]["exit"], EXPECTED[cmd]["stdout"])


def test_oracle_variants_agree():
    oracle = [c for c in EXPECTED if c.endswith(" --oracle")]
    assert len(oracle) >= 8
    for cmd in oracle:
        base = cmd[: -len(" --oracle")]
        assert EXPECTED[cmd]["exit"] == EXPECTED[base]["exit"], cmd
        # witnesses may differ; verdict lines must not
        if EXPECTED[base]["exit"] == NO or cmd.startswith("implies"):
            assert EXPECTED[cmd]["stdout"] == EXPECTED[base]["stdout"], cmd


def test_stdin():
    text = (DATA / "f1.trop").read_text()
    assert call("solve -", stdin=text)[:2] == (YES, "0 0 0\n")


def test_emit_cert_round_trip(tmp_path):
    path = tmp_path / "c.cert"
    code, out, _ = call(["dim", str(DATA / "f2.trop"), "--global", "--projective", "--emit-cert", str(path)])
    assert (code, out) == (YES, "3\n")
    assert parse_certificate(path.read_text()).claimed_k == 3
    assert call(["certify", str(DATA / "f2.trop"), str(path)])[:2] == (YES, "valid\n")


def test_tampered_cert_rejected(tmp_path):
    text = (DATA / "f2.cert").read_text().replace("3 3 3 3", "3 3 3 2")
    path = tmp_path / "bad.cert"
    path.write_text(text)
    assert call(["certify", str(DATA / "f2.trop"), str(path)])[:2] == (NO, "invalid\n")


class TestExitCodes:
    def test_parse_error(self, tmp_path):
        p = tmp_path / "bad.trop"
        p.write_text("tropical 1 2 int\n0 inf\n")
        code, out, err = call(["solve", str(p)])
        assert code == USAGE and out == "" and "line 2, column 3" in err

    def test_usage(self):
        assert call("frobnicate")[0] == USAGE
        assert call("dim f1.trop")[0] == USAGE
        assert call("solve missing.trop")[0] == USAGE
        assert call("rank inf.trop")[0] == USAGE
        assert call("mpg solve win.mpg lose.mpg")[0] == USAGE

    def test_budget(self, monkeypatch, tmp_path):
        monkeypatch.setenv("TROPKIT_BUDGET", "10")
        p = tmp_path / "big.trop"
        p.write_text("tropical 1 4\n0 9 9 9\n")
        assert call(["solve", str(p), "--oracle"])[0] == BUDGET

    def test_help(self):
        assert call("--help")[0] == YES


def test_console_script_is_deterministic():
    cmd = [sys.executable, "-m", "tropkit.cli", "reduce", "inf.trop", "--to", "finite"]
    runs = [subprocess.run(cmd, cwd=DATA, capture_output=True, text=True, check=True).stdout for _ in range(2)]
    assert runs[0] == runs[1] == EXPECTED["reduce inf.trop --to finite"]["stdout"]
