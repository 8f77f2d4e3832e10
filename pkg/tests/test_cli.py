import json

import mpmath
import pytest

from src.cli import main
from src.services.factory import get_service_factory


def run(capsys, *argv):
    """Run the CLI and return (exit code, stdout, stderr)."""
    with pytest.raises(SystemExit) as exc:
        main(list(argv))
    captured = capsys.readouterr()
    return exc.value.code, captured.out, captured.err


def test_index_dual(capsys):
    code, out, _ = run(capsys, "index", "dual", "(1,2)", "--no-cache")
    assert code == 0
    assert out.strip() == "(3)"


def test_index_hoffman_dual(capsys):
    code, out, _ = run(capsys, "index", "hdual", "(2,1)", "--no-cache")
    assert code == 0
    assert out.strip() == "(1,2)"


def test_index_blocks(capsys):
    code, out, _ = run(capsys, "index", "blocks", "(1,3)", "--no-cache")
    assert code == 0
    assert out.strip() == "(2,2)"


def test_index_blocks_json(capsys):
    code, out, _ = run(capsys, "index", "blocks", "(1,3)", "--no-cache", "--json")
    assert json.loads(out) == {"index": "(1,3)", "blocks": [[2, 2]]}


def test_dual_of_non_admissible_index(capsys):
    code, _, err = run(capsys, "index", "dual", "(2,1)", "--no-cache")
    assert code == 2
    assert "not admissible" in err


def test_malformed_index(capsys):
    code, _, _ = run(capsys, "index", "dual", "(1,,2)")
    assert code == 2


def test_word_commands(capsys):
    code, out, _ = run(capsys, "word", "shuffle", "1", "0", "--no-cache")
    assert code == 0
    assert sorted(out.split("\n")[:2]) == ["1 01", "1 10"]
    code, out, _ = run(capsys, "word", "dual", "110", "--no-cache")
    assert out.strip() == "100"
    code, _, _ = run(capsys, "word", "dual", "110", "10", "--no-cache")
    assert code == 2


def test_poset_commands(capsys, tmp_path):
    antichain = '{"labels": [1, 0], "covers": []}'
    code, out, _ = run(capsys, "poset", "wmap", antichain, "--no-cache", "--json")
    assert code == 0
    assert json.loads(out) == {"01": "1", "10": "1"}

    path = tmp_path / "chain.json"
    path.write_text('{"labels": [1, 0], "covers": [[0, 1]]}', encoding='utf-8')
    code, out, _ = run(capsys, "poset", "admissible", f"@{path}", "--no-cache", "--json")
    assert json.loads(out) == {"semi_admissible": True, "admissible": True}

    code, _, err = run(capsys, "poset", "wmap", "{bad", "--no-cache")
    assert code == 2
    assert err.startswith("Error:")


@pytest.mark.parametrize("argv, prefix", [
    (["eval", "zeta", "(3)"], "1.20205690315959"),
    (["eval", "xi", "(1)", "--m", "2"], "2.404113806319188"),
    (["eval", "li", "(2)", "--z", "0.5"], "0.582240526465012"),
    (["eval", "t", "(2)"], "2.467401100272339"),
])
def test_eval(capsys, argv, prefix):
    code, out, _ = run(capsys, *argv, "--no-cache")
    assert code == 0
    assert out.startswith(prefix)


def test_eval_close_to_one(capsys):
    code, out, _ = run(capsys, "eval", "li", "(2)", "--z", "0.99", "--no-cache", "--json")
    assert code == 0
    data = json.loads(out)
    with mpmath.workprec(300):
        expected = mpmath.polylog(2, mpmath.mpf(99) / 100)
        mid = mpmath.mpf(data["value"]["mid"])
        assert abs(mid - expected) < 1e-30


@pytest.mark.parametrize("argv", [
    ["eval", "li", "(2)"],
    ["eval", "xi", "(1)"],
    ["eval", "li", "(2)", "--z", "1.5"],
])
def test_eval_missing_arguments(capsys, argv):
    code, _, _ = run(capsys, *argv, "--no-cache")
    assert code == 2


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "thm-main2", "--k", "(1,2)", "--no-cache")
    assert code == 0
    assert out.startswith("PASS  thm-main2(k=(1,2))")


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "cor-main", "--k", "(2)", "--m", "1", "--no-cache", "--json")
    assert code == 0
    data = json.loads(out)
    assert data['pass'] is True
    assert data['params'] == {'k': '(2)', 'm': 1}
    assert data['points'][0]['lhs']['mid'].startswith("2.7058080842778454787")


def test_verify_usage_errors(capsys):
    code, _, _ = run(capsys, "verify", "thm-main2", "--k", "(2)", "--z-grid", "0.99", "--no-cache")
    assert code == 2
    code, _, err = run(capsys, "verify", "thm-main1", "--k", "(2)", "--no-cache")
    assert code == 2
    assert "needs parameter" in err


def test_verify_detects_perturbation(capsys):
    code, out, _ = run(capsys, "verify", "thm-main2", "--k", "(2)", "--z-grid", "0.5",
                       "--perturb", "1e-10", "--no-cache")
    assert code == 1
    assert out.startswith("FAIL")


def test_cache_commands(capsys, tmp_path):
    path = tmp_path / "constants.mzvcache"
    code, out, _ = run(capsys, "cache", "path", "--cache", str(path))
    assert out.strip() == str(path)

    run(capsys, "eval", "zeta", "(3)", "--cache", str(path))
    assert path.exists()

    code, out, _ = run(capsys, "cache", "stats", "--cache", str(path), "--json")
    assert code == 0
    assert json.loads(out)['entries'] >= 1

    code, out, _ = run(capsys, "cache", "clear", "--cache", str(path))
    assert out.strip() == "cache cleared"
    assert not path.exists()


def test_combinatorics_suite(capsys):
    code, out, _ = run(capsys, "suite", "combinatorics", "--max-weight", "4", "--no-cache")
    assert code == 0
    assert out.strip().endswith("PASS")


def test_tolerance_option_reaches_suites(capsys):
    code, _, _ = run(capsys, "suite", "combinatorics", "--max-weight", "2", "--tol", "1e-30", "--no-cache")
    assert code == 0
    verifier = get_service_factory().get_verifier()
    assert verifier.tolerance(1) == 1e-30
    assert verifier.tolerance(2) == 1e-30


def test_tolerance_option_reaches_verify(capsys):
    code, out, _ = run(capsys, "verify", "cor-main", "--k", "(2)", "--m", "1", "--tol", "1e-25",
                       "--no-cache", "--json")
    assert code == 0
    assert json.loads(out)['tol'] == 1e-25


def test_non_positive_tolerance_is_rejected(capsys):
    code, _, err = run(capsys, "suite", "combinatorics", "--tol", "0", "--no-cache")
    assert code == 2
    assert err.startswith("Error:")


def test_analyze(capsys):
    code, out, _ = run(capsys, "analyze", "derivative", "--k", "(2)", "--z", "0.5", "--no-cache")
    assert code == 0
    assert out.strip().endswith("PASS")
    code, out, _ = run(capsys, "analyze", "limit", "--k", "(2)", "--a", "1", "--no-cache", "--json")
    assert code == 0
    assert json.loads(out)['pass'] is True
    code, _, _ = run(capsys, "analyze", "limit", "--no-cache")
    assert code == 2


@pytest.mark.slow
def test_preflight(capsys):
    code, out, _ = run(capsys, "preflight", "--max-weight", "3", "--level1-only", "--no-cache")
    assert code == 0
    assert out.startswith("pre-flight: 3 values checked")
