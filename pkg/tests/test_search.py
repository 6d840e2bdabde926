import pytest

from kakeya.ratios import RatioError, RSet, witness_replay
from kakeya.search import SearchConfig, default_box, search_lower_bound

QUICK = SearchConfig(restarts=3, max_iters=1500)


class TestConfig:
    def test_default_box_contains_digit_witness(self):
        assert default_box(2) == [(-3, 0), (0, 3)]

    def test_toml(self):
        cfg = SearchConfig.from_toml(
            "[search]\nrestarts = 5\nseed = 9\nsupport_box = [[-1, 0], [0, 2]]\n"
            "[search.schedule]\nt_start = 0.1\n"
        )
        assert (cfg.restarts, cfg.seed, cfg.t_start) == (5, 9, 0.1)
        assert cfg.support_box == ((-1, 0), (0, 2))

    def test_unknown_key(self):
        with pytest.raises(ValueError, match="unknown"):
            SearchConfig.from_mapping({"restart": 3})

    def test_den_cap(self):
        with pytest.raises(ValueError):
            SearchConfig(den=2**17)

    def test_box_dimension(self):
        with pytest.raises(ValueError):
            SearchConfig(support_box=((0, 1),)).with_box(2)


class TestSearch:
    def test_single_r_rejected(self):
        with pytest.raises(RatioError, match="unbounded"):
            search_lower_bound(RSet([0]), QUICK)

    def test_gap_needs_span(self):
        with pytest.raises(RatioError):
            search_lower_bound(RSet.parse("0:0,1:1"), QUICK, "gap")

    def test_replayable_and_capped(self):
        B = search_lower_bound(RSet([0, 1]), QUICK)
        assert B.kind == "lower" and 0 < B.value <= 2
        assert witness_replay(B) == B.value

    def test_seed_determinism(self):
        a = search_lower_bound(RSet([0, 1]), QUICK).to_dict()
        b = search_lower_bound(RSet([0, 1]), QUICK).to_dict()
        assert a == b

    def test_workers_do_not_change_result(self):
        a = search_lower_bound(RSet([0, 1]), QUICK, workers=1)
        b = search_lower_bound(RSet([0, 1]), QUICK, workers=2)
        assert a.to_dict() == b.to_dict()

    @pytest.mark.slow
    def test_three_element_r(self):
        cfg = SearchConfig(support_box=((-4, 4), (-4, 4)))
        B = search_lower_bound(RSet([0, 1, 2]), cfg)
        assert B.value >= 1.5
        assert witness_replay(B) == B.value

    @pytest.mark.slow
    def test_homogeneous(self):
        B = search_lower_bound(RSet([0, 1]), SearchConfig(), "homogeneous")
        assert 1.9 <= B.value <= 2 + 1e-9
