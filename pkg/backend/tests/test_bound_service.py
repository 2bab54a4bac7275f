import pytest

from app.services.graph_service import graph_service
from app.services.oracle_service import oracle_service
from app.storage.formats import format_bound_report
from app.utils.errors import InvalidInputError


def tags(report, side=None):
    return {e.tag for e in report.entries if side is None or e.side == side}


class TestBound:
    def test_complete_graph_is_exact(self, fresh_bounds):
        report = fresh_bounds.bound("K4")
        assert (report.lower, report.upper, report.witnessed_upper) == (0, 0, 0)
        assert tags(report) == {"complete"}

    def test_cycle(self, fresh_bounds):
        report = fresh_bounds.bound("C4")
        assert (report.lower, report.upper, report.witnessed_upper) == (2, 2, 2)
        assert {"chordless-cycle", "oracle", "vertex-star"} <= tags(report)

    def test_perfect_matching(self, fresh_bounds):
        report = fresh_bounds.bound("direct(K2,K2)")
        assert (report.lower, report.upper) == (1, 1)
        assert "perfect-matching" in tags(report, "exact")

    def test_strong_product_of_stars(self, fresh_bounds):
        report = fresh_bounds.bound("strong(S2,S2)")
        assert (report.lower, report.upper) == (2, 2)
        thm1 = [e for e in report.entries if e.tag == "thm1"]
        assert {e.side for e in thm1} == {"lower", "upper"}

    def test_cartesian_square_of_triangles(self, fresh_bounds):
        report = fresh_bounds.bound("cartesian(K3,K3)")
        assert report.lower >= 2
        assert {"thm2", "thm3", "oracle"} <= tags(report)
        # 16 weak homomorphisms into C4, which has boxicity 2
        assert min(e.value for e in report.entries if e.tag == "thm2") == 32

    def test_star_cubicity(self, fresh_bounds):
        report = fresh_bounds.bound("S8", "cubicity")
        assert (report.lower, report.upper) == (3, 3)
        assert "obs7" in tags(report, "exact")

    def test_reported_only_entries_are_not_witnessed(self, fresh_bounds):
        report = fresh_bounds.bound("Q6")
        for entry in report.entries:
            assert not (entry.witnessed and entry.reported_only)
        assert report.witnessed_upper is None or report.witnessed_upper >= report.upper

    @pytest.mark.parametrize("expression", ["C5", "CR3", "strong(P3,P3)", "direct(K3,K2)", "cartesian(P2,P3)"])
    def test_oracle_lies_in_range(self, fresh_bounds, expression):
        report = fresh_bounds.bound(expression)
        value = oracle_service.exact_boxicity(graph_service.from_expression(expression)).value
        assert report.lower <= value
        assert report.upper is None or value <= report.upper

    def test_unknown_parameter(self, fresh_bounds):
        with pytest.raises(InvalidInputError):
            fresh_bounds.bound("K3", "treewidth")

    def test_report_text(self, fresh_bounds):
        text = format_bound_report(fresh_bounds.bound("K1"))
        assert text.splitlines()[:5] == [
            "expression K1", "parameter boxicity", "lower 0", "upper 0", "witnessed_upper 0",
        ]
        assert "entry complete exact 0 witnessed 0" in text


class TestGrowthTable:
    def test_strong_powers_of_an_edge_stay_complete(self, fresh_bounds):
        table = fresh_bounds.growth_table("K2", "strong", "boxicity", 3)
        assert list(table["d"]) == [1, 2, 3]
        assert list(table["lower"]) == [0, 0, 0]
        assert list(table["upper"]) == [0, 0, 0]
        assert set(table["provenance"]) == {"lower=complete;upper=complete;witnessed=complete"}

    def test_cartesian_lower_column_is_monotone(self, fresh_bounds):
        table = fresh_bounds.growth_table("K2", "cartesian", "boxicity", 3)
        lower = list(table["lower"])
        assert lower == sorted(lower)
        assert lower[1] == 2

    def test_cartesian_cubicity_follows_d_over_log_d(self, fresh_bounds):
        table = fresh_bounds.growth_table("K2", "cartesian", "cubicity", 8)
        assert list(table["upper"])[3:] == [4, 5, 5, 5, 6]
        for lower, upper in zip(table["lower"], table["upper"]):
            assert lower <= upper

    def test_missing_witness_stays_none(self, fresh_bounds):
        table = fresh_bounds.growth_table("K2", "cartesian", "cubicity", 13)
        assert table["witnessed_upper"].dtype == object
        assert table["witnessed_upper"].iloc[-1] is None
        assert fresh_bounds.table_csv(table).splitlines()[-1].split(",")[3] == "inf"

    def test_csv(self, fresh_bounds):
        table = fresh_bounds.growth_table("K2", "direct", "cubicity", 2)
        text = fresh_bounds.table_csv(table)
        assert text.splitlines()[0] == "d,lower,upper,witnessed_upper,provenance"
        assert len(text.splitlines()) == 3

    def test_rejects_bad_arguments(self, fresh_bounds):
        with pytest.raises(InvalidInputError):
            fresh_bounds.growth_table("K2", "lexicographic", "boxicity", 2)
        with pytest.raises(InvalidInputError):
            fresh_bounds.growth_table("K2", "strong", "boxicity", 0)
