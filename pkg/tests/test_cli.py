"""Command-line surface: outputs, exit codes, and the terminal play loop."""

import json

import pytest

from polygame.cli import build_parser, main


def run(capsys, *argv):
    rc = main(list(argv))
    out, err = capsys.readouterr()
    return rc, out, err


def run_json(capsys, *argv):
    rc, out, err = run(capsys, *argv)
    assert err == ""
    return rc, json.loads(out)


def feed(monkeypatch, lines):
    queue = iter(lines)

    def fake_input(prompt=""):
        try:
            return next(queue)
        except StopIteration:
            raise EOFError

    monkeypatch.setattr("builtins.input", fake_input)


# -- solve ------------------------------------------------------------------


def test_solve_json(capsys):
    rc, doc = run_json(capsys, "solve", "--n", "9", "--d", "2",
                       "--first", "nora", "--json")
    assert rc == 0
    assert doc["winner"] == "nora"
    assert set(doc) == {"winner", "pv", "states_visited"}
    assert len(doc["pv"]) == 3


def test_solve_json_flag_up_front(capsys):
    rc, doc = run_json(capsys, "--json", "solve", "--n", "4", "--d", "1",
                       "--first", "wanda")
    assert rc == 0 and doc["winner"] == "wanda"


def test_solve_human_readable(capsys):
    rc, out, _ = run(capsys, "solve", "--n", "9", "--d", "2",
                     "--first", "nora")
    assert rc == 0
    assert "winner: nora" in out and "states visited" in out


def test_solve_budget_exceeded(capsys):
    rc, out, err = run(capsys, "solve", "--n", "9", "--d", "2",
                       "--first", "nora", "--budget", "10")
    assert rc == 2 and out == "" and "error" in err


# -- p-adic queries ---------------------------------------------------------


def test_polygon_output(capsys):
    rc, doc = run_json(capsys, "padic", "polygon", "--p", "5",
                       "--coeffs", "25,0,1/5,1")
    assert rc == 0
    assert doc["vertices"] == [[0, "2"], [2, "-1"], [3, "0"]]
    assert doc["segments"][0] == {"slope": "-3/2", "length": 2}


def test_polygon_degenerate_input(capsys):
    rc, out, err = run(capsys, "padic", "polygon", "--p", "5",
                       "--coeffs", "0,1")
    assert rc == 2 and "error" in err


def test_bad_coeffs_exit_usage(capsys):
    with pytest.raises(SystemExit) as err:
        main(["padic", "polygon", "--p", "5", "--coeffs", "1,x"])
    assert err.value.code == 2


def test_has_root_both_ways(capsys):
    rc, doc = run_json(capsys, "padic", "has-root", "--p", "5",
                       "--coeffs=-4,0,1")
    assert rc == 0 and doc["exists"] is True and doc["witness"] is not None

    rc, doc = run_json(capsys, "padic", "has-root", "--p", "5",
                       "--coeffs", "2,0,1")
    assert rc == 0 and doc["exists"] is False


# -- demos ------------------------------------------------------------------


def test_unramified_demo(capsys):
    rc, doc = run_json(capsys, "unramified-demo", "--primes", "2,3",
                       "--d", "5", "--seed", "1")
    assert rc == 0
    assert set(doc["certificates"]) == {"2", "3"}
    assert all(c["exists"] is False for c in doc["certificates"].values())
    assert len(doc["coefficients"]) == 6
    assert len(doc["moves"]) == 6


def test_unramified_demo_rejects_excluded_degree(capsys):
    rc, out, err = run(capsys, "unramified-demo", "--primes", "2,3", "--d", "3")
    assert rc == 2 and "excluded" in err


def test_unramified_demo_needs_two_primes(capsys):
    rc, out, err = run(capsys, "unramified-demo", "--primes", "5", "--d", "5")
    assert rc == 2


def test_cubic_demo(capsys):
    rc, doc = run_json(capsys, "abelian", "cubic-demo", "--p", "5",
                       "--seed", "3")
    assert rc == 0
    assert doc["certificate"] == {"no_Qp_root": True, "disc_negative": True}
    assert doc["discriminant"].startswith("-")


def test_find_prime(capsys):
    rc, doc = run_json(capsys, "abelian", "find-prime", "--d", "9")
    assert rc == 0
    assert doc["p"] == 107 and doc["half_cofactor"] == [[53, 1]]


def test_highdeg_demo(capsys):
    rc, doc = run_json(capsys, "abelian", "highdeg-demo", "--d", "9",
                       "--seed", "2")
    assert rc == 0
    assert doc["prime"]["p"] == 107
    assert doc["order_recomputed"] == doc["closing_order"]
    assert doc["qp_root"]["exists"] is False


def test_highdeg_demo_degree_floor(capsys):
    rc, out, err = run(capsys, "abelian", "highdeg-demo", "--d", "7")
    assert rc == 2


# -- verification -----------------------------------------------------------


def test_verify_theorem1_from_file(capsys, tmp_path):
    grid = tmp_path / "grid.json"
    grid.write_text(json.dumps([[4, 1], [4, 2], [9, 2]]))
    rc, out, _ = run(capsys, "verify", "theorem1", "--grid", str(grid))
    assert rc == 0
    rows = [json.loads(line) for line in out.splitlines()]
    assert len(rows) == 6
    assert all(row["match"] is True for row in rows)


def test_verify_theorem1_budget_miss_fails(capsys, tmp_path):
    # (18, 5) needs 19^6 packed states, past the default budget, so the
    # cell cannot be confirmed and the command must not exit clean
    grid = tmp_path / "grid.json"
    grid.write_text(json.dumps([[4, 1], [18, 5]]))
    rc, out, _ = run(capsys, "verify", "theorem1", "--grid", str(grid))
    assert rc == 1
    rows = [json.loads(line) for line in out.splitlines()]
    assert any(row["match"] is None for row in rows)


def test_verify_strategy_exhaustive(capsys):
    rc, doc = run_json(capsys, "verify", "strategy", "--name", "nora_even",
                       "--n", "9", "--d", "2", "--role", "nora",
                       "--first", "nora")
    assert rc == 0
    assert doc["all_won"] is True and doc["games"] == doc["wins"] == 17


def test_verify_strategy_random_valued(capsys):
    rc, doc = run_json(capsys, "verify", "strategy", "--name", "nora_quad",
                       "--p", "5", "--d", "2", "--role", "nora",
                       "--first", "nora", "--universe", "random",
                       "--seed", "1", "--trials", "25")
    assert rc == 0 and doc["wins"] == 25


def test_verify_strategy_usage_errors(capsys):
    rc, _, err = run(capsys, "verify", "strategy", "--name", "no_such",
                     "--n", "9", "--d", "2", "--role", "nora",
                     "--first", "nora")
    assert rc == 2 and "unknown strategy" in err

    rc, _, err = run(capsys, "verify", "strategy", "--name", "nora_even",
                     "--d", "2", "--role", "nora", "--first", "nora")
    assert rc == 2 and "exactly one" in err

    rc, _, err = run(capsys, "verify", "strategy", "--name", "nora_even",
                     "--n", "9", "--p", "5", "--d", "2", "--role", "nora",
                     "--first", "nora")
    assert rc == 2

    # applicable seats only: nora_even wants Nora to open
    rc, _, err = run(capsys, "verify", "strategy", "--name", "nora_even",
                     "--n", "9", "--d", "2", "--role", "nora",
                     "--first", "wanda")
    assert rc == 2


# -- terminal play ----------------------------------------------------------


def test_play_scripted_game(capsys, monkeypatch):
    feed(monkeypatch, ["1 4", "3 7"])
    rc, out, _ = run(capsys, "play", "--n", "16", "--d", "3",
                     "--engine-role", "wanda", "--first", "wanda")
    assert rc == 0
    assert "engine: a_0 = 12" in out
    assert "engine: a_2 = 15" in out
    assert "finished: winner wanda" in out
    assert "roots:" in out


def test_play_reprompts_and_aborts(capsys, monkeypatch):
    feed(monkeypatch, ["nonsense", "0 7"])
    rc, out, _ = run(capsys, "play", "--n", "16", "--d", "3",
                     "--engine-role", "wanda", "--first", "wanda")
    assert rc == 0
    assert "expected: <index> <value>" in out
    assert "illegal" in out      # a_0 is already taken by the engine
    assert "aborted" in out


def test_play_padic_defaults_first_to_engine_seat(capsys, monkeypatch):
    # the quadratic policy needs Nora to open; no --first given
    feed(monkeypatch, ["0 2"])
    rc, out, _ = run(capsys, "play-padic", "--p", "5", "--d", "2",
                     "--engine-role", "nora")
    assert rc == 0
    assert "engine: a_1 = 0" in out
    assert "finished: winner nora" in out


def test_play_rejects_prime_modulus(capsys):
    rc, out, err = run(capsys, "play", "--n", "7", "--d", "2",
                       "--engine-role", "wanda")
    assert rc == 2 and "out of scope" in err


# -- parser plumbing --------------------------------------------------------


def test_usage_errors_exit_2():
    for argv in ([], ["solve"], ["padic"], ["solve", "--n", "9"]):
        with pytest.raises(SystemExit) as err:
            main(argv)
        assert err.value.code == 2


def test_serve_args_parse():
    args = build_parser().parse_args(
        ["serve", "--port", "9001", "--persist", "/tmp/x"])
    assert args.port == 9001 and args.persist == "/tmp/x"
    assert args.host == "127.0.0.1"
