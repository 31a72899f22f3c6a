"""CLI tests: subcommands, exit codes, determinism of JSON output."""

import json

from click.testing import CliRunner

from rigidgeo.catalog import CATALOG, complete, reversal_pair
from rigidgeo.cli import main
from rigidgeo.exact import random_generic_configuration
from rigidgeo.rigidity import Framework, measure
from rigidgeo.unlabeled import DistanceMultiset


def run(*args, env=None):
    return CliRunner().invoke(main, list(args), env=env, catch_exceptions=False)


def write_graph(tmp_path, name, g):
    path = tmp_path / name
    path.write_text(g.to_text())
    return str(path)


def write_instance(tmp_path, name, g, d, seed):
    config = random_generic_configuration(g.n, d, seed).to_float()
    ms = DistanceMultiset(measure(Framework(g, config)).values)
    path = tmp_path / name
    path.write_text(ms.to_text(g.n, d))
    return str(path), config


# -- analyze -----------------------------------------------------------------


def test_analyze_k43(tmp_path):
    f = write_graph(tmp_path, "k43.txt", CATALOG["K43"])
    result = run("analyze", f, "--dim", "2", "--seed", "0")
    assert result.exit_code == 0
    report = json.loads(result.output)
    assert report["gen_glob_rigid"] is True


def test_analyze_path_not_rigid(tmp_path):
    f = write_graph(tmp_path, "p4.txt", CATALOG["P4"])
    result = run("analyze", f, "--seed", "0")
    assert result.exit_code == 0
    assert json.loads(result.output)["gen_loc_rigid"] is False


def test_analyze_k5_d3(tmp_path):
    f = write_graph(tmp_path, "k5.txt", complete(5))
    result = run("analyze", f, "-d", "3", "--seed", "0")
    report = json.loads(result.output)
    assert report["gen_glob_rigid"] and report["gen_loc_rigid"] and report["redundant"]


def test_analyze_parse_error(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("this is not a graph\n")
    assert run("analyze", str(path)).exit_code == 2


def test_analyze_dimension_too_small(tmp_path):
    f = write_graph(tmp_path, "k3.txt", complete(3))
    assert run("analyze", f, "-d", "3", "--seed", "0").exit_code == 3


def test_analyze_json_input_and_determinism(tmp_path):
    path = tmp_path / "w4.json"
    path.write_text(CATALOG["W4"].to_json())
    a = run("analyze", str(path), "--seed", "5")
    b = run("analyze", str(path), "--seed", "5")
    assert a.exit_code == 0 and a.output == b.output


def test_seed_env_default(tmp_path):
    f = write_graph(tmp_path, "k4.txt", CATALOG["K4"])
    a = run("analyze", f, env={"RIGID_SEED": "9"})
    b = run("analyze", f, "--seed", "9")
    assert a.output == b.output


# -- reconstruct -------------------------------------------------------------


def test_reconstruct_k4(tmp_path):
    f, _ = write_instance(tmp_path, "k4.dist", CATALOG["K4"], 2, 3)
    result = run("reconstruct", f, "--seed", "3")
    assert result.exit_code == 0
    out = json.loads(result.output)
    assert len(out["solutions"]) == 1
    assert out["solutions"][0]["residual"] < 1e-6 * max(
        v for p in out["solutions"][0]["coords"] for v in p) ** 2 + 1e-9


def test_reconstruct_c4_multiple(tmp_path):
    f, _ = write_instance(tmp_path, "c4.dist", CATALOG["C4"], 2, 5)
    result = run("reconstruct", f, "--seed", "5")
    assert result.exit_code == 0
    assert len(json.loads(result.output)["solutions"]) >= 2


def test_reconstruct_infeasible_exit_4(tmp_path):
    path = tmp_path / "bad.dist"
    path.write_text(DistanceMultiset((1.0, 2.0, 100.0)).to_text(3, 2))
    assert run("reconstruct", str(path), "--seed", "0").exit_code == 4


def test_reconstruct_scale_exceeded_exit_5(tmp_path):
    path = tmp_path / "big.dist"
    vals = tuple(float(i + 1) for i in range(13))
    path.write_text(DistanceMultiset(vals).to_text(8, 2))
    assert run("reconstruct", str(path)).exit_code == 5


# -- certify -----------------------------------------------------------------


def test_certify_round_trip(tmp_path):
    g = CATALOG["K4"]
    f, config = write_instance(tmp_path, "k4.dist", g, 2, 17)
    gf = write_graph(tmp_path, "k4.txt", g)
    coords = tmp_path / "coords.json"
    coords.write_text(json.dumps({"coords": [list(p) for p in config.coords]}))
    result = run("certify", f, gf, str(coords), "--seed", "17")
    assert result.exit_code == 0
    assert json.loads(result.output)["certified"] is True


def test_certify_rejects_non_ggr(tmp_path):
    g = CATALOG["C4"]
    f, config = write_instance(tmp_path, "c4.dist", g, 2, 19)
    gf = write_graph(tmp_path, "c4.txt", g)
    coords = tmp_path / "coords.json"
    coords.write_text(json.dumps({"coords": [list(p) for p in config.coords]}))
    result = run("certify", f, gf, str(coords), "--seed", "19")
    assert json.loads(result.output)["certified"] is False


# -- compare-matroid ---------------------------------------------------------


def test_compare_matroid_reversal_pair(tmp_path):
    g1, g2, _, _ = reversal_pair()
    f1 = write_graph(tmp_path, "a.txt", g1)
    f2 = write_graph(tmp_path, "b.txt", g2)
    result = run("compare-matroid", f1, f2)
    out = json.loads(result.output)
    assert out["cycle_isomorphic"] is True
    assert out["vertex_map"] is None
    assert out["verdict"] == "2-isomorphic only"


def test_compare_matroid_isomorphic(tmp_path):
    f = write_graph(tmp_path, "k4.txt", CATALOG["K4"])
    result = run("compare-matroid", f, f)
    out = json.loads(result.output)
    assert out["vertex_map"] == [1, 2, 3, 4]
    assert out["verdict"] == "isomorphic"


def test_compare_matroid_negative(tmp_path):
    from rigidgeo.catalog import star
    f1 = write_graph(tmp_path, "k4.txt", CATALOG["K4"])
    f2 = write_graph(tmp_path, "s6.txt", star(6))
    result = run("compare-matroid", f1, f2)
    out = json.loads(result.output)
    assert out["cycle_isomorphic"] is False
    assert out["verdict"] == "not cycle-isomorphic"


# -- variety-pair ------------------------------------------------------------


def test_variety_pair_invalid_edge_exit_6(tmp_path):
    f = write_graph(tmp_path, "k5.txt", complete(5))
    result = run("variety-pair", f, "--edge", "0", "--new-edge", "1,2",
                 "--seed", "0")
    assert result.exit_code == 6


def test_variety_pair_reports_non_isomorphic(tmp_path):
    from rigidgeo.catalog import variety_pair_base
    g, e, ep = variety_pair_base()
    f = write_graph(tmp_path, "vp.txt", g)
    result = run("variety-pair", f, "--edge", str(e),
                 "--new-edge", f"{ep[0]},{ep[1]}", "--seed", "98",
                 "--trials", "1", "--out-prefix", str(tmp_path / "pair"))
    assert result.exit_code == 0
    out = json.loads(result.output)
    assert out["isomorphic"] is False
    assert (tmp_path / "pair_a.txt").exists() and (tmp_path / "pair_b.txt").exists()


# -- generate ----------------------------------------------------------------


def test_generate_catalog_graph():
    result = run("generate", "K4")
    assert result.exit_code == 0
    assert result.output == CATALOG["K4"].to_text()


def test_generate_unknown_name():
    assert run("generate", "K99").exit_code == 2


def test_generate_distances_round_trip(tmp_path):
    out = tmp_path / "w4.dist"
    result = run("generate", "W4", "--distances", "--seed", "4",
                 "--out", str(out))
    assert result.exit_code == 0
    ms, n, d = DistanceMultiset.from_text(out.read_text())
    assert n == 5 and d == 2 and len(ms) == 8


def test_generate_random_graph():
    result = run("generate", "random:5:6", "--seed", "2")
    assert result.exit_code == 0
    a = run("generate", "random:5:6", "--seed", "2")
    assert result.output == a.output
