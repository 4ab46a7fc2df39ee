import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from distmapper.cover import (ChainCover, Interval, OverlapTooWide, InvalidRange,
                              PreprocessedCover, build_chain_cover, build_sub_covers,
                              covers_span, flatten_cover, uniform_cover,
                              validate_preprocessed_cover)


def approx_intervals(ivs):
    return [pytest.approx(tuple(iv)) for iv in ivs]


def test_chain_cover_example():
    chain = build_chain_cover(0, 12, 3, 2)
    assert list(chain.chunks) == approx_intervals([(-0.06, 5), (3, 9), (7, 12.06)])
    assert chain.overlap(0) == pytest.approx((3, 5))
    assert chain.overlap(1) == pytest.approx((7, 9))


def test_single_chunk_is_padded_range():
    chain = build_chain_cover(0, 10, 1, 3.7)
    assert list(chain.chunks) == approx_intervals([(-0.05, 10.05)])


def test_overlap_too_wide():
    with pytest.raises(OverlapTooWide):
        build_chain_cover(0, 12, 3, 5)
    with pytest.raises(OverlapTooWide):
        build_chain_cover(0, 12, 3, 4)


@pytest.mark.parametrize("a,b", [(1, 1), (2, 1)])
def test_invalid_range(a, b):
    with pytest.raises(InvalidRange):
        build_chain_cover(a, b, 2, 0.1)


def test_default_overlap_is_gain_times_chunk_length():
    chain = build_chain_cover(0, 12, 3, gain=0.25)
    assert chain.overlap(0) == pytest.approx((3.5, 4.5))


def test_sub_cover_example():
    pc = build_sub_covers(build_chain_cover(0, 12, 3, 2), 3, 0.25)
    second = [iv for _, iv in pc.sub_covers[1]]
    assert second == approx_intervals([(3, 5), (4, 5.6), (5.2, 6.8), (6.4, 8), (7, 9)])
    assert validate_preprocessed_cover(pc) == []
    assert len(flatten_cover(pc)) == 11


def test_single_chunk_sub_cover_has_no_shared():
    pc = build_sub_covers(build_chain_cover(0, 10, 1, 1), 3, 0.25)
    assert pc.shared_ids == ()
    assert len(pc.sub_covers[0]) == 3
    assert validate_preprocessed_cover(pc) == []
    pc5 = build_sub_covers(build_chain_cover(0, 10, 1, 1), 5, 0.3)
    assert len(flatten_cover(pc5)) == 5


def test_shared_interval_has_one_id():
    pc = build_sub_covers(build_chain_cover(0, 12, 3, 2), 3, 0.25)
    for i, sid in enumerate(pc.shared_ids):
        left = dict(pc.sub_covers[i])[sid]
        right = dict(pc.sub_covers[i + 1])[sid]
        assert left == right == pc.chain.overlap(i)
    assert len(pc.global_ids) == 11


def test_uniform_cover_endpoints_exact():
    ivs = uniform_cover(0.1, 0.7, 7, 0.33)
    assert ivs[0].lo == 0.1 and ivs[-1].hi == 0.7


def test_covers_span():
    assert covers_span([Interval(0, 2), Interval(1, 3)], 0, 3)
    assert not covers_span([Interval(0, 2), Interval(2, 3)], 0, 3)  # 2 itself is missed
    assert not covers_span([Interval(0, 3)], 0, 3, closed=True)
    assert covers_span([Interval(-1, 4)], 0, 3, closed=True)


def _hand_built(first, second, shared_first=Interval(4, 6), shared_second=Interval(4, 6)):
    chain = ChainCover((0.0, 10.0), (Interval(-1, 6), Interval(4, 11)))
    return PreprocessedCover(chain, (tuple(first) + ((9, shared_first),),
                                     ((9, shared_second),) + tuple(second)), (9,))


def test_validator_flags_cross_chunk_overlap():
    pc = _hand_built([(0, Interval(-1, 6))], [(1, Interval(5, 7)), (2, Interval(6.5, 11))])
    kinds = {v.kind for v in validate_preprocessed_cover(pc)}
    assert kinds == {"cross-chunk-overlap"}
    bad = [v for v in validate_preprocessed_cover(pc)]
    assert (bad[0].first, bad[0].second) == (Interval(-1, 6), Interval(5, 7))


def test_validator_flags_shared_mismatch():
    pc = _hand_built([(0, Interval(-1, 5))], [(1, Interval(5, 11))], shared_second=Interval(4, 6.5))
    kinds = {v.kind for v in validate_preprocessed_cover(pc)}
    assert kinds == {"shared-mismatch"}


def test_validator_accepts_hand_built_good_cover():
    pc = _hand_built([(0, Interval(-1, 5))], [(1, Interval(5, 11))])
    assert validate_preprocessed_cover(pc) == []


def test_validator_flags_nonadjacent_and_gap():
    chain = ChainCover((0.0, 3.0), (Interval(-1, 1.5), Interval(1, 2.5), Interval(2, 4)))
    pc = PreprocessedCover(chain, (
        ((0, Interval(-1, 1.2)), (5, Interval(1, 1.5))),
        ((5, Interval(1, 1.5)), (1, Interval(1.2, 2.3)), (6, Interval(2, 2.5))),
        ((6, Interval(2, 2.5)), (2, Interval(2.3, 4)), (3, Interval(1.4, 1.45))),
    ), (5, 6))
    kinds = {v.kind for v in validate_preprocessed_cover(pc)}
    assert "nonadjacent-overlap" in kinds


params = st.tuples(
    st.floats(-100, 100), st.floats(0.01, 100),
    st.sampled_from([1, 2, 3, 4, 5, 8, 13]),
    st.floats(0.01, 0.99), st.integers(1, 6), st.floats(0.05, 0.5),
)


def _build(p):
    a, span, n, wfrac, m, g = p
    b = a + span
    chain = build_chain_cover(a, b, n, wfrac * span / n)
    return a, b, chain, build_sub_covers(chain, m, g)


@settings(max_examples=200, deadline=None)
@given(params)
def test_chain_invariants_exhaustive(p):
    _, _, chain, _ = _build(p)
    ch = chain.chunks
    for i in range(len(ch)):
        for j in range(i + 1, len(ch)):
            assert ch[i].intersects(ch[j]) == (j == i + 1)


@settings(max_examples=200, deadline=None)
@given(params)
def test_flattened_cover_covers_grid(p):
    a, b, _, pc = _build(p)
    flat = [iv for _, iv in flatten_cover(pc)]
    lo = np.array([iv.lo for iv in flat])
    hi = np.array([iv.hi for iv in flat])
    grid = np.linspace(a, b, 1000)
    inside = (grid[:, None] > lo[None]) & (grid[:, None] < hi[None])
    assert inside.any(axis=1).all()


@settings(max_examples=500, deadline=None)
@given(params)
def test_cross_chunk_disjointness(p):
    _, _, _, pc = _build(p)
    for i, sid in enumerate(pc.shared_ids):
        for g, u in pc.sub_covers[i]:
            for h, v in pc.sub_covers[i + 1]:
                if g != sid and h != sid:
                    assert not u.intersects(v)


def test_flatten_duplicate_free_random():
    rng = np.random.default_rng(7)
    for _ in range(100):
        p = (rng.uniform(-10, 10), rng.uniform(0.1, 50), int(rng.integers(1, 9)),
             rng.uniform(0.05, 0.95), int(rng.integers(1, 7)), rng.uniform(0.05, 0.5))
        _, _, _, pc = _build(p)
        flat = flatten_cover(pc)
        ends = [(iv.lo, iv.hi) for _, iv in flat]
        for i in range(len(ends)):
            for j in range(i + 1, len(ends)):
                assert ends[i] != ends[j]
        assert len({gid for gid, _ in flat}) == len(flat)
        assert ends == sorted(ends)
        assert len(flat) == pc.n_chunks * pc.resolution + pc.n_chunks - 1
