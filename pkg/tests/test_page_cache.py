import random

from pangloss.geometry import L2_GEOMETRY
from pangloss.page_cache import PageCache, PageHit


def test_cold_miss_then_hit():
    pc = PageCache(L2_GEOMETRY)
    assert pc.access(5, 10) is None
    hit = pc.access(5, 14)
    assert hit == PageHit(prev_delta=-64, prev_offset=10, delta=4)


def test_hit_returns_pre_update_state():
    pc = PageCache(L2_GEOMETRY)
    pc.access(5, 10)
    pc.access(5, 14)
    hit = pc.access(5, 20)
    assert hit == PageHit(prev_delta=4, prev_offset=14, delta=6)


def test_interleaved_streams_reconstruct_per_page_deltas():
    pc = PageCache(L2_GEOMETRY)
    page_a, page_b = 3, 9
    assert pc.access(page_a, 0) is None
    assert pc.access(page_b, 10) is None
    assert pc.access(page_a, 3).delta == 3
    assert pc.access(page_b, 12).delta == 2


def test_zero_delta_updates_entry_state():
    pc = PageCache(L2_GEOMETRY)
    pc.access(7, 30)
    hit = pc.access(7, 30)
    assert hit.delta == 0
    # the zero still lands in delta_prev
    assert pc.access(7, 33) == PageHit(prev_delta=0, prev_offset=30, delta=3)


def test_tag_aliasing_gives_false_positive_hit():
    # page numbers differing only above bit 17 share set and tag
    pc = PageCache(L2_GEOMETRY)
    pc.access(0x00005, 0)
    hit = pc.access(0x40005, 7)
    assert hit is not None
    assert hit.delta == 7


def test_distinct_tags_do_not_collide():
    pc = PageCache(L2_GEOMETRY)
    pc.access(0x005, 0)
    assert pc.access(0x105, 9) is None  # same set, different tag


def _fill_set(pc, set_index=0, ways=12):
    # pages k*256 all map to set 0 with distinct tags
    for k in range(ways):
        pc.access(k * 256 + set_index, 1)


def test_nru_victim_unique_zero():
    pc = PageCache(L2_GEOMETRY)
    _fill_set(pc)
    for way in range(12):
        pc._sets[0][way][3] = 1
    pc._sets[0][1][3] = 0
    assert pc.nru_victim(0) == 1


def test_nru_victim_lowest_index_tie():
    pc = PageCache(L2_GEOMETRY)
    _fill_set(pc)
    pc._sets[0][0][3] = 0
    pc._sets[0][1][3] = 0
    assert pc.nru_victim(0) == 0


def test_nru_all_set_clears_except_last_touch():
    pc = PageCache(L2_GEOMETRY)
    _fill_set(pc)
    pc.access(3 * 256, 5)  # most recent touch is way 3
    assert all(entry[3] == 1 for entry in pc._sets[0])
    assert pc.nru_victim(0) == 0
    bits = [entry[3] for entry in pc._sets[0]]
    assert bits == [0, 0, 0, 1, 0, 0, 0, 0, 0, 0, 0, 0]


def test_nru_all_set_last_touch_at_way_zero():
    pc = PageCache(L2_GEOMETRY)
    _fill_set(pc)
    pc.access(0, 5)
    assert pc.nru_victim(0) == 1


def test_insertion_uses_invalid_way_before_eviction():
    pc = PageCache(L2_GEOMETRY)
    for k in range(5):
        pc.access(k * 256, 1)
    assert len(pc._sets[0]) == 5
    pc.access(5 * 256, 1)
    assert len(pc._sets[0]) == 6


def test_thirteenth_page_evicts_nru_victim():
    pc = PageCache(L2_GEOMETRY)
    _fill_set(pc)  # last insert touched way 11
    assert pc.access(12 * 256, 2) is None
    # way 0 (page 0) was the victim, so page 0 now misses
    assert pc.access(0, 3) is None


def test_offset_tracking_matches_unbounded_map():
    rng = random.Random(11)
    pc = PageCache(L2_GEOMETRY)
    pages = [k * 256 for k in range(12)]  # one set, no evictions possible
    oracle: dict[int, int] = {}
    for _ in range(5000):
        page = rng.choice(pages)
        offset = rng.randrange(64)
        hit = pc.access(page, offset)
        if page in oracle:
            assert hit is not None
            assert hit.prev_offset == oracle[page]
            assert hit.delta == offset - oracle[page]
            assert -64 < hit.delta < 64
        else:
            assert hit is None
        oracle[page] = offset


def test_interleaved_valid_transition_fraction():
    # two fresh stride streams: each page costs one miss and one
    # sentinel-source hit, the rest are real transitions
    pc = PageCache(L2_GEOMETRY)
    accesses = 0
    usable = 0
    pages = (1, 2)
    for step in range(640):
        for lane, page in enumerate(pages):
            offset = step % 64
            hit = pc.access(page + (step // 64) * 16, offset)
            accesses += 1
            if hit is not None and hit.prev_delta != L2_GEOMETRY.sentinel:
                usable += 1
    touched_pages = 2 * 10  # 640 steps / 64 offsets, two lanes
    assert accesses == 1280
    assert usable == accesses - 2 * touched_pages


def test_dump_csv(tmp_path):
    pc = PageCache(L2_GEOMETRY)
    pc.access(5, 10)
    pc.access(5, 14)
    path = tmp_path / "pages.csv"
    pc.dump_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "set,way,tag,delta_prev,offset_prev,nru"
    assert lines[1] == "5,0,0,4,14,1"
    assert len(lines) == 2
