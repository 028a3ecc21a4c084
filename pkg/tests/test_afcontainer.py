"""Container behavior: trie mechanics, insertion, neighbor queries,
snapshots."""

import random
from collections import Counter

import pytest

from treescape.afcontainer import AFContainer, ByteTrie, Mode, read_snapshot, write_snapshot
from treescape.canonical import decode_tree, sdlnewick_tree
from treescape.errors import ModeError, SnapshotError
from treescape.oracle import enumerate_all_trees, enumerate_neighbors, random_tree
from treescape.tree import parse_newick

TRIANGLE = [
    "(((4,5),1),(2,3));",
    "((((4,5),2),3),1);",
    "(1,(2,((4,5),3)));",
]


def triangle_trees():
    return [parse_newick(s, rooted=True) for s in TRIANGLE]


class TestByteTrie:
    def test_set_get(self):
        t = ByteTrie()
        assert t.get(b"missing") is None
        assert t.get(b"missing", -1) == -1
        t.set(b"abc", 1)
        t.set(b"abd", 2)
        t.set(b"ab", 3)
        t.set(b"abcdef", 4)
        t.set(b"", 5)
        assert [t.get(k) for k in (b"abc", b"abd", b"ab", b"abcdef", b"")] == [1, 2, 3, 4, 5]
        assert t.get(b"abcd") is None
        assert t.get(b"a") is None
        assert len(t) == 5

    def test_overwrite_keeps_count(self):
        t = ByteTrie()
        t.set(b"k", 1)
        t.set(b"k", 2)
        assert t.get(b"k") == 2
        assert len(t) == 1

    def test_contains(self):
        t = ByteTrie()
        t.set(b"xy", 0)
        assert b"xy" in t
        assert b"x" not in t

    def test_setdefault(self):
        t = ByteTrie()
        lst = t.setdefault(b"key", list)
        lst.append(7)
        assert t.setdefault(b"key", list) == [7]
        assert len(t) == 1

    def test_items_sorted(self):
        t = ByteTrie()
        keys = [b"b", b"ba", b"a", b"ab", b"aa", b"abc", b""]
        for i, k in enumerate(keys):
            t.set(k, i)
        assert [k for k, _ in t.items()] == sorted(keys)

    def test_split_and_fuzz_against_dict(self):
        rng = random.Random(13)
        t = ByteTrie()
        model = {}
        alphabet = b"(),;pr0123456789 "
        for _ in range(3000):
            key = bytes(rng.choice(alphabet) for _ in range(rng.randint(0, 12)))
            if rng.random() < 0.7:
                val = rng.randint(0, 99)
                t.set(key, val)
                model[key] = val
            else:
                assert t.get(key) == model.get(key)
        assert len(t) == len(model)
        assert dict(t.items()) == model
        assert [k for k, _ in t.items()] == sorted(model)


class TestInsert:
    def test_ids_are_dense_and_duplicates_return_existing(self):
        c = AFContainer(Mode.RSPR)
        t0, t1, t2 = triangle_trees()
        assert c.insert(t0) == 0
        assert c.insert(t1) == 1
        assert c.insert(t0) == 0
        assert c.insert(t2) == 2
        assert len(c) == 3

    def test_isomorphic_presentation_is_duplicate(self):
        c = AFContainer(Mode.RSPR)
        assert c.insert(parse_newick("((1,2),(3,4));", rooted=True)) == 0
        assert c.insert(parse_newick("((4,3),(2,1));", rooted=True)) == 0
        assert len(c) == 1

    def test_mode_mismatch(self):
        rooted = parse_newick("((1,2),(3,4));", rooted=True)
        unrooted = parse_newick("(1,2,(3,4));", rooted=False)
        with pytest.raises(ModeError):
            AFContainer(Mode.TBR).insert(rooted)
        with pytest.raises(ModeError):
            AFContainer(Mode.RSPR).insert(unrooted)
        with pytest.raises(ModeError):
            AFContainer(Mode.USPR).insert(rooted)

    def test_shared_forest_list_is_insertion_ordered(self):
        c = AFContainer(Mode.RSPR)
        for t in triangle_trees():
            c.insert(t)
        assert c._forest_trie.get(b"(r,1,(2,3)) (4,5)p;") == [0, 1, 2]

    def test_id_and_sdlnewick_of(self):
        c = AFContainer(Mode.USPR)
        t = parse_newick("(1,2,(3,4));", rooted=False)
        assert c.id(t) is None
        i = c.insert(t)
        assert c.id(t) == i
        assert c.sdlnewick_of(i) == sdlnewick_tree(t)
        assert c.sdlnewick_of(99) == b""
        assert c.sdlnewick_of(-1) == b""
        assert c.id(decode_tree(c.sdlnewick_of(i))) == i

    def test_mode_coerces_from_string(self):
        assert AFContainer("tbr").mode is Mode.TBR
        assert Mode.RSPR.rooted and not Mode.USPR.rooted and not Mode.TBR.rooted


class TestNeighborQueries:
    def test_empty_container(self):
        t = parse_newick("((1,2),(3,4));", rooted=True)
        c = AFContainer(Mode.RSPR)
        assert c.spr_neighbors(t) == []
        assert c.nni_neighbors(t) == []
        assert c.id(t) is None

    def test_triangle_neighbors(self):
        c = AFContainer(Mode.RSPR)
        trees = triangle_trees()
        for t in trees:
            c.insert(t)
        assert set(c.spr_neighbors(trees[0])) == {1, 2}
        assert set(c.spr_neighbors(trees[1])) == {0, 2}
        strings = c.neighbor_strings(trees[0])
        assert strings == [c.sdlnewick_of(1), c.sdlnewick_of(2)]

    def test_query_tree_need_not_be_inserted(self):
        c = AFContainer(Mode.RSPR)
        trees = triangle_trees()
        c.insert(trees[0])
        assert set(c.spr_neighbors(trees[1])) == {0}

    def test_wrong_query_for_mode(self):
        c = AFContainer(Mode.TBR)
        t = parse_newick("(1,2,(3,4));", rooted=False)
        with pytest.raises(ModeError):
            c.spr_neighbors(t)
        c2 = AFContainer(Mode.USPR)
        with pytest.raises(ModeError):
            c2.tbr_neighbors(t)

    def test_neighbor_sets_match_oracle(self):
        rng = random.Random(41)
        for mode, move, rooted in [
            (Mode.RSPR, "rspr", True),
            (Mode.USPR, "uspr", False),
            (Mode.TBR, "tbr", False),
        ]:
            n = rng.randint(4, 7)
            trees = [random_tree(n, rooted=rooted, rng=rng) for _ in range(25)]
            c = AFContainer(mode)
            ids = [c.insert(t) for t in trees]
            for t, own in zip(trees, ids):
                raw = c.tbr_neighbors(t) if mode is Mode.TBR else c.spr_neighbors(t)
                want_strings = enumerate_neighbors(t, move)
                want = {i for i in range(len(c)) if c.sdlnewick_of(i) in want_strings}
                assert set(raw) == want
                assert own not in raw
                nni_want = enumerate_neighbors(t, "nni")
                nni_ids = c.nni_neighbors(t)
                assert len(nni_ids) == len(set(nni_ids))
                assert {c.sdlnewick_of(i) for i in nni_ids} == {
                    s for s in nni_want if c.id(decode_tree(s)) is not None
                }

    def test_nni_multiplicity_pattern(self):
        # NNI-adjacent trees share 3 forest keys rooted, 4 unrooted;
        # SPR-only neighbors share exactly 1
        for rooted, mode, factor in [(True, Mode.RSPR, 3), (False, Mode.USPR, 4)]:
            trees = enumerate_all_trees(5, rooted=rooted)
            c = AFContainer(mode)
            for t in trees:
                c.insert(t)
            for t in trees:
                counts = Counter(c.spr_neighbors(t))
                nni = set(c.nni_neighbors(t))
                for i, k in counts.items():
                    assert k == (factor if i in nni else 1)

    def test_tbr_pair_sharing_two_forests_appears_twice(self):
        trees = enumerate_all_trees(5, rooted=False)
        c = AFContainer(Mode.TBR)
        for t in trees:
            c.insert(t)
        found = False
        for t in trees:
            counts = Counter(c.tbr_neighbors(t))
            if any(k >= 2 for k in counts.values()):
                found = True
        assert found


class TestSnapshot:
    def test_roundtrip(self, tmp_path):
        c = AFContainer(Mode.RSPR)
        trees = triangle_trees()
        for t in trees:
            c.insert(t)
        path = tmp_path / "c.snap"
        c.save(path)
        back = AFContainer.load(path)
        assert back.mode is Mode.RSPR
        assert len(back) == 3
        assert [back.sdlnewick_of(i) for i in range(3)] == [c.sdlnewick_of(i) for i in range(3)]
        assert set(back.spr_neighbors(trees[0])) == {1, 2}

    def test_helpers_roundtrip(self, tmp_path):
        path = tmp_path / "x.snap"
        lines = [b"(1,2,(3,4));", b"((1,3),2,4);"]
        write_snapshot(path, "uspr", lines)
        mode, back = read_snapshot(path)
        assert mode is Mode.USPR and back == lines

    @pytest.mark.parametrize(
        "content",
        [
            "bogus v1 rspr 0\n",
            "afcontainer v2 rspr 0\n",
            "afcontainer v1 zpr 0\n",
            "afcontainer v1 rspr x\n",
            "afcontainer v1 rspr 2\n(r,1,2);\n",
            "afcontainer v1 rspr 1\n(r,1,2);\n\n",
        ],
    )
    def test_bad_headers_and_counts(self, tmp_path, content):
        path = tmp_path / "bad.snap"
        path.write_text(content)
        with pytest.raises(SnapshotError):
            AFContainer.load(path)

    def test_noncanonical_and_duplicate_lines(self, tmp_path):
        path = tmp_path / "bad.snap"
        path.write_text("afcontainer v1 rspr 1\n(r,2,1);\n")
        with pytest.raises(SnapshotError):
            AFContainer.load(path)
        path.write_text("afcontainer v1 rspr 2\n(r,1,2);\n(r,1,2);\n")
        with pytest.raises(SnapshotError):
            AFContainer.load(path)
        path.write_text("afcontainer v1 rspr 1\n(1,2,(3,4));\n")
        with pytest.raises(SnapshotError):
            AFContainer.load(path)


def test_space_stays_near_quadratic():
    # soft regression tracking of stored key bytes per tree
    rng = random.Random(53)
    for n in (8, 16):
        c = AFContainer(Mode.RSPR)
        for _ in range(30):
            c.insert(random_tree(n, rooted=True, rng=rng))
        key_bytes = sum(len(k) for k, _ in c._forest_trie.items())
        assert key_bytes <= 64 * 30 * n * n
