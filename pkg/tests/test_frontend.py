from __future__ import annotations

import json
import re

import pytest

from polybound.analysis import AnalysisResult, analyze
from polybound.frontend import ParseError, SemanticError, parse_its, print_its
from polybound.frontend import cli
from polybound.frontend.report import render_report
from polybound.ir import Bound, classify, compare, conj, disj, var
from polybound.ir import formula as fm
from loop_fixtures import CORPUS, corpus, corpus_files
from polybound.frontend import load

HEADER = "(GOAL COMPLEXITY)\n(STARTTERM (FUNCTIONSYMBOLS l0))\n(VAR x y)\n"


def its(rules: str) -> str:
    return HEADER + "(RULES\n" + rules + "\n)\n"


class TestParser:
    def test_twn_nest_structure(self):
        p = corpus("twn_nest")
        assert p.pv == ("x1", "x2", "x3", "x4", "x5")
        assert [t.id for t in p.transitions] == [f"t{i}" for i in range(6)]
        t5 = p["t5"]
        x1, x2, x3 = var("x1"), var("x2"), var("x3")
        assert t5.src == t5.tgt == "l3"
        assert dict(t5.update) == {"x1": -2 * x1, "x2": 3 * x2 - 2 * x3**3}
        want = conj(compare(x1**2 + x3**5, "<", x2), compare(x1, "!=", 0))
        assert fm.normalize(t5.guard) == fm.normalize(want)

    def test_disjunction_and_chained_comparison(self):
        p = parse_its(its("l0(x,y) -> l1(x,y)\nl1(x,y) -> l1(x-1,y) :|: 0 < x <= 9 && (y > 0 || y < -1)"))
        x, y = var("x"), var("y")
        want = conj(compare(0, "<", x), compare(x, "<=", 9), disj(compare(y, ">", 0), compare(y, "<", -1)))
        assert fm.normalize(p["t1"].guard) == fm.normalize(want)

    def test_missing_guard_is_true(self):
        p = parse_its(its("l0(x,y) -> l1(y,x)"))
        assert p["t0"].guard == fm.TRUE

    def test_temporaries(self):
        p = corpus("temp_init")
        assert p.temporaries(p["t0"]) == {"u"}
        assert p.temporaries(p["t1"]) == frozenset()

    def test_neq_split(self):
        p = load(str(CORPUS / "twn_nest.koat"), neq_mode="split")
        ids = [t.id for t in p.transitions]
        assert ids[-2:] == ["t5_0", "t5_1"]
        rels = sorted(a.rel for t in p.transitions[-2:] for a in fm.atoms(t.guard) if a.poly == var("x1"))
        assert rels == ["<", ">"]

    def test_empty_rules(self):
        with pytest.raises(SemanticError):
            parse_its(HEADER + "(RULES\n)\n")

    def test_rule_into_start(self):
        with pytest.raises(SemanticError, match="start"):
            parse_its(its("l0(x,y) -> l1(x,y)\nl1(x,y) -> l0(x,y)"))

    def test_arity_mismatch(self):
        with pytest.raises(SemanticError, match="arity"):
            parse_its(its("l0(x,y) -> l1(x)"))

    def test_syntax_error_has_position(self):
        with pytest.raises(ParseError) as info:
            parse_its(its("l0(x,y) -> l1(x,y) :|: x > > 0"))
        assert info.value.line == 5 and info.value.col > 1

    def test_costs_are_rejected(self):
        with pytest.raises(ParseError, match="cost"):
            parse_its(its("l0(x,y) -{2}> l1(x,y)"))

    @pytest.mark.parametrize("path", corpus_files(), ids=lambda p: p.stem)
    def test_round_trip(self, path):
        p = load(str(path))
        assert parse_its(print_its(p)) == p


class TestReport:
    def test_first_lines(self):
        assert render_report(analyze(corpus("twn_nest"))).splitlines()[0] == "WORST_CASE(?, O(n^2))"
        assert render_report(analyze(corpus("shift_chain"))).splitlines()[0] == "WORST_CASE(?, O(1))"
        res = analyze(corpus("growing_then_loop"))
        assert render_report(res).splitlines()[0] == "WORST_CASE(?, INF)"

    def test_all_omega(self):
        p = corpus("countdown")
        res = AnalysisResult(p, {t.id: Bound.omega() for t in p.transitions}, {}, Bound.omega(), classify(Bound.omega()))
        assert render_report(res).startswith("WORST_CASE(?, INF)\n")


class TestCli:
    def run(self, capsys, *args):
        code = cli.main([str(a) for a in args])
        out = capsys.readouterr()
        return code, out.out, out.err

    def test_twn_nest(self, capsys):
        code, out, _ = self.run(capsys, CORPUS / "twn_nest.koat")
        assert code == 0
        assert out.splitlines()[0] == "WORST_CASE(?, O(n^2))"
        assert "8*x4*x5 + 13006*x4" in out

    def test_missing_file(self, capsys):
        code, _, err = self.run(capsys, CORPUS / "does_not_exist.koat")
        assert code == 1 and "cannot read" in err

    def test_bad_input(self, capsys, tmp_path):
        f = tmp_path / "bad.koat"
        f.write_text(its("l0(x,y) -> l1(x"))
        code, _, err = self.run(capsys, f)
        assert code == 1 and re.search(r"\d+:\d+: ", err)

    def test_rf_technique(self, capsys):
        code, out, _ = self.run(capsys, CORPUS / "twn_nest.koat", "--technique", "rf", "--solver", "none")
        assert code == 0 and out.startswith("WORST_CASE(?, INF)")

    def test_json_and_proof(self, capsys):
        code, out, _ = self.run(capsys, CORPUS / "twn_nest_split.koat", "--format", "json", "--proof")
        data = json.loads(out)
        assert code == 0 and data["worst_case"] == "O(n^2)"
        assert {r["id"]: r["bound"] for r in data["transitions"]}["t6"] == "8*x4*x5 + 13008*x4"
        assert any(entry["entry"] == "t1" and entry["psi"] == "x3 > 0" for entry in data["local"])

    def test_check_passes(self, capsys):
        code, out, _ = self.run(capsys, CORPUS / "nested.koat", "--check", "--check-range", "2")
        assert code == 0 and "Check: PASS (25 initial states)" in out

    def test_check_failure_exit_code(self, capsys, monkeypatch):
        real = cli.analyze

        def too_small(program, **kw):
            res = real(program, **kw)
            res.runtime["t1"] = Bound.const(0)
            return res

        monkeypatch.setattr(cli, "analyze", too_small)
        code, out, _ = self.run(capsys, CORPUS / "countdown.koat", "--check")
        assert code == 3 and "Check: FAIL" in out

    def test_internal_error(self, capsys, monkeypatch):
        def boom(program, **kw):
            raise RuntimeError("boom")

        monkeypatch.setattr(cli, "analyze", boom)
        code, _, err = self.run(capsys, CORPUS / "countdown.koat")
        assert code == 2 and "internal error" in err

    def test_output_is_deterministic(self, capsys):
        first = self.run(capsys, CORPUS / "twn_nest_split.koat", "--proof")[1]
        second = self.run(capsys, CORPUS / "twn_nest_split.koat", "--proof")[1]
        assert first == second
