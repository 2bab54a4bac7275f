import pytest

from app.api import run
from app.services.poset_service import poset_service
from app.storage.formats import read_family, read_graph, read_provenance, write_poset


def invoke(capsys, *argv):
    code = run(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGen:
    def test_named_generator(self, capsys):
        code, out, _ = invoke(capsys, "gen", "--kind", "hamming", "--q", "3", "--d", "2")
        assert code == 0
        assert out.splitlines()[0] == "9 18"

    def test_expression(self, capsys, tmp_path):
        path = tmp_path / "g.txt"
        code, out, _ = invoke(capsys, "gen", "--expr", "strong(C4,P3)", "-o", str(path))
        assert code == 0 and out == ""
        g = read_graph(path.read_text())
        assert (g.n, g.m) == (12, 36)

    def test_vertex_limit(self, capsys):
        code, _, err = invoke(capsys, "--max-n", "4", "gen", "--expr", "cartesian(K3,K3)")
        assert code == 3
        assert err.startswith("error: size-limit:")

    def test_two_cycle_is_rejected(self, capsys):
        code, _, err = invoke(capsys, "gen", "--kind", "cycle", "--n", "2")
        assert code == 2
        assert err.startswith("error: invalid-input: cycle needs n >= 3")
        assert "neither is simple" in err

    def test_kind_and_expression_are_exclusive(self, capsys):
        code, _, err = invoke(capsys, "gen", "--kind", "path", "--n", "3", "--expr", "P3")
        assert code == 2
        assert "exactly one of --kind and --expr" in err


class TestConstructAndVerify:
    def test_hamming_certificate(self, capsys, tmp_path):
        out_dir = tmp_path / "h32"
        code, out, _ = invoke(capsys, "construct", "--thm", "6", "--q", "3", "--d", "2", "--mode", "box",
                              "--seed", "5", "-o", str(out_dir))
        assert code == 0
        fields = read_provenance(out)
        assert (fields["theorem"], fields["seed"], fields["dimension"]) == ("thm6", "5", "32")
        assert read_provenance((out_dir / "provenance.txt").read_text()) == fields

        code, out, _ = invoke(capsys, "verify", "-g", str(out_dir / "graph.txt"), "-r", str(out_dir / "rep.txt"))
        assert code == 0
        assert out == "ok dimension 32\n"

    def test_verify_plane_fixture(self, capsys, tmp_path, fixture_path):
        graph_file = tmp_path / "c4p3.txt"
        invoke(capsys, "gen", "--expr", "strong(C4,P3)", "-o", str(graph_file))
        code, out, _ = invoke(capsys, "verify", "-g", str(graph_file), "-r", fixture_path("c4_strong_p3_plane.txt"))
        assert code == 0
        assert out == "ok dimension 2\n"

    def test_corrupted_representation(self, capsys, tmp_path):
        out_dir = tmp_path / "h32"
        invoke(capsys, "construct", "--thm", "6", "--q", "3", "--d", "2", "-o", str(out_dir))
        lines = (out_dir / "rep.txt").read_text().splitlines()
        # vertex 0 takes the box of vertex 1
        lines[1] = lines[2]
        (out_dir / "rep.txt").write_text("\n".join(lines) + "\n")
        code, out, err = invoke(capsys, "verify", "-g", str(out_dir / "graph.txt"), "-r", str(out_dir / "rep.txt"))
        assert code == 1
        assert out == ""
        assert err.startswith("error: verification-failed:")

    def test_factor_expressions(self, capsys, tmp_path):
        code, out, _ = invoke(capsys, "construct", "--thm", "1", "--factors", "C4", "P3", "-o", str(tmp_path / "s"))
        assert code == 0
        assert read_provenance(out)["dimension"] == "3"

    def test_star_cube(self, capsys, tmp_path):
        code, out, _ = invoke(capsys, "construct", "--thm", "obs7", "--n", "5", "--mode", "cube",
                              "-o", str(tmp_path / "star"))
        assert code == 0
        assert read_provenance(out)["dimension"] == "3"

    def test_output_directory_is_required(self, capsys):
        code, _, err = invoke(capsys, "construct", "--thm", "4", "--d", "3")
        assert code == 2
        assert err.startswith("error: usage:")

    def test_missing_inputs(self, capsys, tmp_path):
        code, _, err = invoke(capsys, "construct", "--thm", "6", "--q", "3", "-o", str(tmp_path / "x"))
        assert code == 2
        assert "--d" in err


class TestExact:
    def test_star_cubicity(self, capsys):
        code, out, _ = invoke(capsys, "exact", "--param", "cubicity", "--expr", "S8")
        assert code == 0 and out == "3\n"

    def test_ceiling_is_not_an_error(self, capsys):
        code, out, _ = invoke(capsys, "exact", "--param", "boxicity", "--expr", "C4", "--kmax", "1")
        assert code == 0 and out == ">1\n"

    def test_global_ceiling(self, capsys):
        code, out, _ = invoke(capsys, "--max-k", "1", "exact", "--param", "boxicity", "--expr", "C4")
        assert code == 0 and out == ">1\n"

    def test_witness_file(self, capsys, tmp_path):
        path = tmp_path / "rep.txt"
        code, out, _ = invoke(capsys, "exact", "--param", "boxicity", "--expr", "C4", "-o", str(path))
        assert code == 0 and out == "2\n"
        assert path.read_text().startswith("BOX 2 4\n")

    def test_chromatic(self, capsys):
        code, out, _ = invoke(capsys, "exact", "--param", "chromatic", "--expr", "C5")
        assert code == 0 and out == "3\n"

    def test_poset_dimension(self, capsys, tmp_path):
        poset, _ = poset_service.boolean_layer_poset(3, 1, 2)
        path = tmp_path / "b3.txt"
        path.write_text(write_poset(poset))
        code, out, _ = invoke(capsys, "exact", "--param", "pdim", "-p", str(path))
        assert code == 0 and out == "3\n"

    def test_exact_search_limit(self, capsys):
        code, _, err = invoke(capsys, "--max-n", "5", "exact", "--param", "boxicity", "--expr", "P6")
        assert code == 3
        assert "limit is 5" in err


class TestBoundsAndTables:
    def test_bound(self, capsys, fresh_bounds):
        code, out, _ = invoke(capsys, "bound", "--expr", "C4")
        assert code == 0
        assert out.splitlines()[2:5] == ["lower 2", "upper 2", "witnessed_upper 2"]

    def test_table(self, capsys, fresh_bounds):
        code, out, _ = invoke(capsys, "table", "--seed", "K2", "--kind", "strong", "--dmax", "2")
        assert code == 0
        assert out.splitlines() == [
            "d,lower,upper,witnessed_upper,provenance",
            "1,0,0,0,lower=complete;upper=complete;witnessed=complete",
            "2,0,0,0,lower=complete;upper=complete;witnessed=complete",
        ]

    def test_long_cartesian_cubicity_table(self, capsys, fresh_bounds):
        code, out, _ = invoke(capsys, "table", "--seed", "K2", "--kind", "cartesian", "--param", "cubicity",
                              "--dmax", "64")
        assert code == 0
        lines = out.splitlines()
        assert len(lines) == 65
        d, _, upper, witnessed, _ = lines[-1].split(",")
        assert (d, upper, witnessed) == ("64", "22", "inf")


class TestFamily:
    def test_build_then_check(self, capsys, tmp_path):
        path = tmp_path / "family.txt"
        code, out, _ = invoke(capsys, "family", "--n", "20", "--q", "4", "--seed", "7", "-o", str(path))
        assert code == 0 and out == ""
        text = path.read_text()
        assert text.startswith("# seed 7 retries 64\n")
        assert read_family(text).q == 4

        code, out, _ = invoke(capsys, "family", "--check", str(path))
        assert code == 0
        assert out == "ok 4 sets over 20 elements\n"

    def test_failed_check(self, capsys, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("2 3\n\n1\n2\n")
        code, _, err = invoke(capsys, "family", "--check", str(path))
        assert code == 1
        assert "verification-failed" in err

    def test_impossible_family(self, capsys):
        code, _, err = invoke(capsys, "family", "--n", "1", "--q", "3")
        assert code == 4
        assert err.startswith("error: not-found:")


class TestUsage:
    @pytest.mark.parametrize("argv", [
        [],
        ["--log-level", "LOUD", "gen", "--kind", "path", "--n", "3"],
        ["gen", "--kind", "tree", "--n", "3"],
        ["exact", "--param", "pdim"],
    ])
    def test_usage_errors(self, capsys, argv):
        code, out, err = invoke(capsys, *argv)
        assert code == 2
        assert out == ""
        assert err.startswith("error: usage:")

    def test_parse_error(self, capsys):
        code, _, err = invoke(capsys, "gen", "--expr", "strong(K3")
        assert code == 2
        assert err.startswith("error: parse-error:")

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = invoke(capsys, "verify", "-g", str(tmp_path / "none.txt"), "-r", str(tmp_path / "none.txt"))
        assert code == 2
        assert err.startswith("error: invalid-input: file not found")
