"""File formats round-trip bit-exactly; CLI exit codes and determinism."""
import json
import subprocess
import sys

import pytest

from proofdiag.formula import atom, negate
from proofdiag.diagram import BigGate, interchange_canonical_form as canon, single
from proofdiag.diagramio import (
    ParseError,
    derivation_text,
    diagram_text,
    parse_derivation,
    parse_diagram,
    parse_sequent,
)
from proofdiag.perm import Permutation
from proofdiag.render import render_svg, render_tikz
from proofdiag.sequent import ax, bot, cut, exchange, one, par, tensor
from proofdiag.translate import represent

a, b = atom("a"), atom("b")


def _cli(*args, stdin=None):
    return subprocess.run(
        [sys.executable, "-m", "proofdiag.cli", *args],
        capture_output=True,
        text=True,
        input=stdin,
    )


CORPUS = [
    ax(a),
    par(ax(a)),
    tensor(ax(a), ax(b)),
    cut(bot(one()), one()),
    exchange(tensor(exchange(tensor(ax(a), one()), Permutation((2, 1))), one()), Permutation((2, 1))),
]


def test_derivation_text_round_trip():
    for d in CORPUS:
        text = derivation_text(d)
        assert parse_derivation(text) == d
        assert derivation_text(parse_derivation(text)) == text


def test_diagram_text_round_trip():
    for d in CORPUS:
        for sig in ("controlled", "uncontrolled"):
            phi = represent(d, sig)
            text = diagram_text(phi)
            assert parse_diagram(text) == phi
            assert diagram_text(parse_diagram(text)) == text


def test_diagram_text_round_trip_with_big_gate():
    phi = canon(single(BigGate((a, negate(a)), (b,))))
    text = diagram_text(phi)
    assert parse_diagram(text) == phi


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_diagram("not a diagram")
    with pytest.raises(ParseError):
        parse_derivation("(frob a)")
    assert parse_sequent("a, a^") == (a, negate(a))


def test_cli_check_and_exit_codes(tmp_path):
    f = tmp_path / "d.txt"
    f.write_text("(par (ax a))\n")
    r = _cli("check", str(f))
    assert r.returncode == 0 and "(a|a^)" in r.stdout
    bad = tmp_path / "bad.txt"
    bad.write_text("(par (par (ax a)))\n")
    assert _cli("check", str(bad)).returncode == 2  # fails to parse as valid
    missing = _cli("check", str(tmp_path / "nope.txt"))
    assert missing.returncode == 2


def test_cli_represent_seq_normalize_cutelim_equiv(tmp_path):
    d = tmp_path / "d.txt"
    d.write_text("(cut (par (ax a)) (ax (a*a^)))\n")
    diag = tmp_path / "d.diag"
    assert _cli("represent", str(d), "-o", str(diag)).returncode == 0
    r = _cli("seq", str(diag), "--json")
    assert r.returncode == 0
    payload = json.loads(r.stdout)
    assert payload["sequentializable"] is True
    r = _cli("normalize", str(diag), "--polygraph", "sem", "--json")
    assert r.returncode == 0
    r = _cli("cut-elim", str(diag), "--json")
    assert r.returncode == 0
    payload = json.loads(r.stdout)
    assert payload["cut_weight_after"] == 0
    r = _cli("equiv", str(d), str(d), "--mode", "sem")
    assert r.returncode == 0 and r.stdout.strip() == "yes"


def test_cli_equiv_verdict_exit_codes(tmp_path):
    d1 = tmp_path / "d1.txt"
    d2 = tmp_path / "d2.txt"
    d1.write_text("(tensor (ex (2,1) (ax a)) (ax a))\n")
    d2.write_text("(ex (3,2,1) (tensor (ex (2,1) (ax a)) (ax a)))\n")
    r = _cli("equiv", str(d1), str(d2), "--bound", "2")
    assert r.returncode in (1, 10)
    d3 = tmp_path / "d3.txt"
    d3.write_text("(one)\n")
    assert _cli("equiv", str(d1), str(d3)).returncode == 3


def test_cli_seq_negative(tmp_path):
    d = tmp_path / "d.txt"
    d.write_text("(ax a)\n")
    diag = tmp_path / "ax.diag"
    _cli("represent", str(d), "--sig", "uncontrolled", "-o", str(diag))
    r = _cli("seq", str(diag))
    assert r.returncode == 1  # uncontrolled boundary is not L,Gamma,R


def test_cli_seq_on_axiom(tmp_path):
    d = tmp_path / "ax.txt"
    d.write_text("(ax a)\n")
    diag = tmp_path / "ax.diag"
    _cli("represent", str(d), "-o", str(diag))
    r = _cli("seq", str(diag))
    assert r.returncode == 0
    assert "(ax a)" in r.stdout


def test_cli_equiv_paired_tensors_sim_mode(tmp_path):
    d1 = tmp_path / "d1.txt"
    d2 = tmp_path / "d2.txt"
    d1.write_text("(ex (2,1) (tensor (ex (2,1) (tensor (ax a) (one))) (one)))\n")
    d2.write_text("(tensor (ex (2,1) (tensor (ex (2,1) (ax a)) (one))) (one))\n")
    r = _cli("equiv", str(d1), str(d2), "--mode", "sim")
    assert r.returncode == 0 and r.stdout.strip() == "yes"


def test_cli_oracle_enumerate():
    r = _cli("oracle", "enumerate", "1,_", "--max-rules", "3", "--json")
    assert r.returncode == 0
    payload = json.loads(r.stdout)
    assert "(bot (one))" in payload["derivations"]


def test_render_deterministic(tmp_path):
    phi = represent(tensor(ax(a), ax(b)))
    assert render_svg(phi) == render_svg(phi)
    assert render_tikz(phi) == render_tikz(phi)
    assert render_svg(phi).startswith("<svg")
    assert "tikzpicture" in render_tikz(phi)
