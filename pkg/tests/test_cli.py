import json

import pytest

from srdomset.cli import main

K3_GR = "p tw 3 3\n1 2\n2 3\n1 3\n"
K3_TD = "s td 1 3 3\nb 1 1 2 3\n"


@pytest.fixture
def k3(tmp_path):
    gr = tmp_path / "k3.gr"
    td = tmp_path / "k3.td"
    gr.write_text(K3_GR)
    td.write_text(K3_TD)
    return gr, td


def run(args):
    return main([str(a) for a in args])


def test_solve_all_sizes(k3, tmp_path, capsys):
    gr, td = k3
    out = tmp_path / "rep.json"
    code = run(["solve", "--gr", gr, "--td", td, "--sigma", "0/2", "--rho", "1/2",
                "--mode", "all-sizes", "--out", out])
    assert code == 0
    js = json.loads(out.read_text())
    assert js["schema"] == 1
    assert js["feasible"] == [False, True, False, True]
    assert js["min"] == 1 and js["max"] == 3 and js["decision"] is True


def test_solve_min_mode(k3, tmp_path):
    gr, td = k3
    out = tmp_path / "rep.json"
    assert run(["solve", "--gr", gr, "--td", td, "--sigma", "0/2", "--rho", "1/2",
                "--mode", "min", "--out", out]) == 0
    assert json.loads(out.read_text())["min"] == 1


def test_solve_missing_td_errors(k3):
    gr, _ = k3
    assert run(["solve", "--gr", gr, "--sigma", "0/2", "--rho", "1/2"]) == 2


def test_solve_heuristic_td(k3, tmp_path):
    gr, _ = k3
    out = tmp_path / "rep.json"
    assert run(["solve", "--gr", gr, "--heuristic-td", "--sigma", "0/2",
                "--rho", "1/2", "--out", out]) == 0


def test_solve_infeasible_exit_code(tmp_path):
    gr = tmp_path / "one.gr"
    gr.write_text("p tw 1 0\n")
    td = tmp_path / "one.td"
    td.write_text("s td 1 1 1\nb 1 1\n")
    # plain lights out on a single vertex: infeasible
    assert run(["solve", "--gr", gr, "--td", td, "--sigma", "1/2", "--rho", "1/2"]) == 1


def test_oracle_agrees_with_solve(k3, tmp_path):
    gr, td = k3
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert run(["solve", "--gr", gr, "--td", td, "--sigma", "0/2", "--rho", "1/2",
                "--out", a]) == 0
    assert run(["oracle", "--gr", gr, "--sigma", "0/2", "--rho", "1/2",
                "--out", b]) == 0
    assert json.loads(a.read_text())["feasible"] == json.loads(b.read_text())["feasible"]


def test_oracle_cap_exit(tmp_path):
    gr = tmp_path / "big.gr"
    gr.write_text("p tw 30 0\n")
    assert run(["oracle", "--gr", gr, "--sigma", "0/2", "--rho", "1/2"]) == 2


def test_oracle_honors_shifts(k3, tmp_path):
    gr, _ = k3
    shifts = tmp_path / "s.txt"
    shifts.write_text("1 1\n2 1\n3 1\n")
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    assert run(["oracle", "--gr", gr, "--sigma", "0/2", "--rho", "1/2",
                "--shifts", shifts, "--out", a]) in (0, 1)
    assert run(["solve", "--gr", gr, "--heuristic-td", "--sigma", "0/2",
                "--rho", "1/2", "--shifts", shifts, "--out", b]) in (0, 1)
    assert json.loads(a.read_text())["feasible"] == json.loads(b.read_text())["feasible"]


def test_gen_lightsout_and_solve(tmp_path):
    prefix = tmp_path / "lo"
    assert run(["gen", "lightsout", "5", "5", "--out-prefix", prefix]) == 0
    out = tmp_path / "rep.json"
    assert run(["solve", "--gr", f"{prefix}.gr", "--td", f"{prefix}.td",
                "--sigma", "0/2", "--rho", "1/2", "--out", out]) == 0
    assert json.loads(out.read_text())["min"] == 15


def test_gen_sat_files(tmp_path):
    cnf = tmp_path / "f.cnf"
    cnf.write_text("p cnf 2 2\n1 2 0\n-1 2 0\n")
    prefix = tmp_path / "sat"
    assert run(["gen", "sat", cnf, "--variant", "reflexive",
                "--out-prefix", prefix]) == 0
    meta = json.loads((tmp_path / "sat.json").read_text())
    assert meta["target_size"] == 2 + 2 + 1
    # 4 variable vertices + 2 clause gadgets of (2+3) + 3 negation = 17
    assert set(meta["roles"]) == {str(i) for i in range(1, 18)}
    out = tmp_path / "rep.json"
    assert run(["solve", "--gr", f"{prefix}.gr", "--td", f"{prefix}.td",
                "--sigma", "0/2", "--rho", "1/2", "--out", out]) == 0
    js = json.loads(out.read_text())
    assert any(js["feasible"][: meta["target_size"] + 1])


def test_gen_random_deterministic(tmp_path):
    p1 = tmp_path / "r1"
    p2 = tmp_path / "r2"
    assert run(["gen", "random", "8", "0.4", "7", "--out-prefix", p1]) == 0
    assert run(["gen", "random", "8", "0.4", "7", "--out-prefix", p2]) == 0
    assert (tmp_path / "r1.gr").read_text() == (tmp_path / "r2.gr").read_text()


def test_gadget_build_verify_roundtrip(tmp_path):
    prefix = tmp_path / "gad"
    assert run(["gadget", "build", "--sigma", "0/3", "--rho", "1/3", "-k", "3",
                "--out-prefix", prefix]) == 0
    assert run(["gadget", "verify", "--sigma", "0/3", "--rho", "1/3",
                "--gr", f"{prefix}.gr", "--portals", f"{prefix}.portals",
                "--relation", "hw1"]) == 0
    assert run(["gadget", "verify", "--sigma", "0/3", "--rho", "1/3",
                "--gr", f"{prefix}.gr", "--portals", f"{prefix}.portals",
                "--relation", "hw-mod"]) == 0
    # arity-4 gadget at m=3 realizes weights {1,4}, so HW=1 must fail
    prefix4 = f"{prefix}4"
    assert run(["gadget", "build", "--sigma", "0/3", "--rho", "1/3", "-k", "4",
                "--out-prefix", prefix4]) == 0
    assert run(["gadget", "verify", "--sigma", "0/3", "--rho", "1/3",
                "--gr", f"{prefix4}.gr", "--portals", f"{prefix4}.portals",
                "--relation", "hw1"]) == 1
    assert run(["gadget", "verify", "--sigma", "0/3", "--rho", "1/3",
                "--gr", f"{prefix4}.gr", "--portals", f"{prefix4}.portals",
                "--relation", "hw-mod"]) == 0


def test_gen_comb_files(tmp_path):
    prefix = tmp_path / "comb"
    assert run(["gen", "comb", "4", "--out-prefix", prefix]) == 0
    out = tmp_path / "rep.json"
    assert run(["solve", "--gr", f"{prefix}.gr", "--td", f"{prefix}.td",
                "--sigma", "0/3", "--rho", "0/3",
                "--shifts", f"{prefix}.shifts", "--out", out]) == 0


def test_bench_csv_and_plot(tmp_path):
    csv_path = tmp_path / "bench.csv"
    png_path = tmp_path / "bench.png"
    assert run(["bench", "--m", "3", "--w", "4..5", "--engine", "both",
                "--csv", csv_path, "--plot", png_path]) == 0
    lines = csv_path.read_text().strip().splitlines()
    assert lines[0] == "engine,m,w,n,max_states,join_ms,total_ms"
    assert len(lines) == 1 + 4  # two widths x two engines
    assert png_path.exists() and png_path.stat().st_size > 0


def test_bad_spec_argument(k3):
    gr, td = k3
    assert run(["solve", "--gr", gr, "--td", td, "--sigma", "5/2",
                "--rho", "1/2"]) == 2
