import subprocess
import sys

from outerspine import textio
from outerspine.marked import MarkedGraph
from outerspine.retract_aut import PointedMarkedGraph, embed_j
from outerspine import graphs


def run_cli(args, expect=0):
    proc = subprocess.run([sys.executable, "-m", "outerspine.cli"] + args,
                          capture_output=True, text=True)
    assert proc.returncode == expect, proc.stderr
    return proc.stdout


def write_rose(tmp_path, name="rose.txt", n=3, pointed=False):
    G = MarkedGraph.rose_identity(n)
    p = tmp_path / name
    p.write_text(textio.print_marked(G, pointed=pointed))
    return str(p)


def test_reduce():
    out = run_cli(["reduce", "a1 a1^-1 a2", "--rank", "2"])
    assert out.strip() == "a2"


def test_apply_theta():
    out = run_cli(["apply", "--rank", "3", "--images", "a1 a2, a1, a3",
                   "--word", "a1"])
    assert out.strip() == "a1 a2"


def test_compose_inverse():
    out = run_cli(["compose", "--rank", "3", "--f", "a1 a2, a1, a3",
                   "--g", "a2, a2^-1 a1, a3"])
    assert out.strip() == "a1, a2, a3"


def test_is_auto():
    out = run_cli(["is-auto", "--rank", "3", "--images", "a1 a2, a1, a3"])
    assert out.splitlines()[0] == "true"
    out = run_cli(["is-auto", "--rank", "3", "--images", "a1 a2, a1 a2, a3"])
    assert out.strip() == "false"


def test_count_i_known_values(tmp_path):
    rose = write_rose(tmp_path)
    out = run_cli(["count-i", "--graph", rose, "--a", "a1",
                   "--b", "a1, a2", "--cls", "a3"])
    assert out.strip() == "0"
    out = run_cli(["count-i", "--graph", rose, "--a", "a1",
                   "--b", "a1, a2", "--cls", "a3 a1 a2"])
    assert out.strip() == "1"


def test_count_i_precondition_error(tmp_path):
    rose = write_rose(tmp_path)
    proc = subprocess.run([sys.executable, "-m", "outerspine.cli", "count-i",
                           "--graph", rose, "--a", "a1", "--b", "a1, a2",
                           "--cls", "a1 a2"], capture_output=True, text=True)
    assert proc.returncode == 2


def test_witness_csv():
    out = run_cli(["witness", "--case", "1", "--n", "3", "--r", "1",
                   "--kmax", "10"])
    lines = out.strip().splitlines()
    assert lines[0] == "k,upper_nielsen,i_k,spine_lb"
    iks = [int(l.split(",")[2]) for l in lines[1:]]
    assert iks == [0, 1, 1, 2, 3, 5, 8, 13, 21, 34, 55]


def test_retract_aut_fixed_point(tmp_path):
    w = PointedMarkedGraph.pointed_rose(2)
    x = embed_j(w)
    p = tmp_path / "pointed.txt"
    p.write_text(textio.print_marked(x, pointed=True))
    out = run_cli(["retract-aut", str(p)])
    r = textio.parse_marked(out, pointed=True)
    from outerspine.retract_aut import pointed_equivalent
    assert pointed_equivalent(r, w) is not None


def test_split_membership_and_retract(tmp_path):
    rose = write_rose(tmp_path)
    bp = tmp_path / "bp.txt"
    bp.write_text('splitting { type: loop; vertex A = a1 a2; stable: a3; '
                  'ray1: prefix "", period a3; ray2: prefix "", period a3^-1 }')
    out = run_cli(["split-membership", "--graph", rose, "--blueprint", str(bp)])
    assert out.splitlines()[0] == "true"
    out = run_cli(["retract-split", "--graph", rose, "--blueprint", str(bp)])
    got = textio.parse_marked(out)
    from outerspine.marked import equivalent
    assert equivalent(got, MarkedGraph.rose_identity(3)) is not None


def test_equiv_and_act(tmp_path):
    rose = write_rose(tmp_path, n=2)
    other = tmp_path / "acted.txt"
    out = run_cli(["act", rose, "--images", "a2, a1"])
    other.write_text(out)
    assert run_cli(["equiv", rose, str(other)]).strip() == "equivalent"
    out = run_cli(["act", rose, "--images", "a1 a2, a2"])
    other.write_text(out)
    assert run_cli(["equiv", rose, str(other)]).strip() == "not equivalent"


def test_circuit(tmp_path):
    rose = write_rose(tmp_path)
    out = run_cli(["circuit", rose, "--cls", "a3 a1 a2"])
    assert out.strip() == "e1 e2 e3"


def test_spine_bfs(tmp_path):
    rose = write_rose(tmp_path, n=2)
    out = run_cli(["act", rose, "--images", "a1 a2, a2"])
    other = tmp_path / "acted.txt"
    other.write_text(out)
    got = run_cli(["spine-bfs", rose, str(other), "--cap", "4"])
    assert got.strip() == "2"


def test_fold_path_cli(tmp_path):
    rose = write_rose(tmp_path, n=2)
    out = run_cli(["act", rose, "--images", "a1 a2, a2"])
    other = tmp_path / "acted.txt"
    other.write_text(out)
    got = run_cli(["fold-path", rose, str(other)])
    assert got.startswith("length:")
    assert "certificate 0" in got


def test_collapse_and_blowups(tmp_path):
    T = MarkedGraph(graphs.theta_graph(), 0, [(1, -3), (2, -3)])
    p = tmp_path / "theta.txt"
    p.write_text(textio.print_marked(T))
    out = run_cli(["collapse", str(p), "--edges", "e3"])
    G = textio.parse_marked(out)
    assert G.rank == 2
    out = run_cli(["blowups", str(tmp_path / "rose2.txt")], expect=2)


def test_coindex_cli():
    out = run_cli(["coindex", "--rank", "3", "--component", "a1"])
    assert out.strip() == "2"
    out = run_cli(["coindex", "--rank", "4",
                   "--component", "a1, a2, a3"])
    assert out.strip() == "1"


def test_realizes_cli(tmp_path):
    rose = write_rose(tmp_path)
    out = run_cli(["realizes", "--graph", rose, "--component", "a1"])
    assert out.startswith("witness")
    out = run_cli(["realizes", "--graph", rose, "--component", "a1 a1"])
    assert out.strip() == "none"


def test_core_cli(tmp_path):
    rose = write_rose(tmp_path, n=2)
    out = run_cli(["core", "--graph", rose, "--gens", "a1 a2"])
    assert "rank: 1" in out
