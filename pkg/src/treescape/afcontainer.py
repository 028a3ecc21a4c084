"""Trie-indexed container mapping shared forest keys to tree ids.

An AFContainer holds three substructures:

* forest trie: canonical forest key -> append-only list of tree ids, in
  insertion order and duplicate-free per list;
* id trie: canonical tree string -> tree id;
* tree array: tree id -> canonical tree string, ids dense from 0.

Both tries are compressed byte-branching radix tries, so every lookup and
insertion costs time proportional to the key length in the worst case; no
full-key hashing is involved, which keeps the per-tree work for an n-leaf
tree at O(n^2) inserted bytes and O(n^2) query work.
"""

import enum

from .canonical import decode_tree, sdlnewick_tree
from .errors import CanonicalError, ModeError, SnapshotError
from .forestgen import nni_moves, rspr_forest_keys, tbr_forest_keys, uspr_forest_keys

_MISSING = object()


class _Node:
    __slots__ = ("edge", "children", "value")

    def __init__(self, edge):
        self.edge = edge
        self.children = {}
        self.value = _MISSING


class ByteTrie:
    """Compressed radix trie over byte-string keys."""

    __slots__ = ("_root", "_count")

    def __init__(self):
        self._root = _Node(b"")
        self._count = 0

    def __len__(self):
        return self._count

    def __contains__(self, key):
        return self.get(key, _MISSING) is not _MISSING

    def get(self, key, default=None):
        node = self._root
        i = 0
        n = len(key)
        while i < n:
            child = node.children.get(key[i])
            if child is None:
                return default
            edge = child.edge
            j = i + len(edge)
            if key[i:j] != edge:
                return default
            node = child
            i = j
        return default if node.value is _MISSING else node.value

    def set(self, key, value):
        """Bind key to value, replacing any previous binding."""
        node = self._descend(key)
        if node.value is _MISSING:
            self._count += 1
        node.value = value

    def setdefault(self, key, factory):
        """Return the value at key, creating it via factory if absent."""
        node = self._descend(key)
        if node.value is _MISSING:
            node.value = factory()
            self._count += 1
        return node.value

    def _descend(self, key):
        node = self._root
        i = 0
        n = len(key)
        while True:
            if i == n:
                return node
            child = node.children.get(key[i])
            if child is None:
                leaf = _Node(key[i:])
                node.children[key[i]] = leaf
                return leaf
            edge = child.edge
            j = i + len(edge)
            if key[i:j] == edge:
                node = child
                i = j
                continue
            # split the child edge at the first mismatching byte
            rest = key[i:]
            k = 0
            limit = min(len(edge), len(rest))
            while k < limit and edge[k] == rest[k]:
                k += 1
            mid = _Node(edge[:k])
            node.children[key[i]] = mid
            child.edge = edge[k:]
            mid.children[child.edge[0]] = child
            if k == len(rest):
                return mid
            leaf = _Node(rest[k:])
            mid.children[leaf.edge[0]] = leaf
            return leaf

    def items(self):
        """Yield (key, value) pairs in byte-lexicographic key order."""
        stack = [(self._root, b"")]
        while stack:
            node, prefix = stack.pop()
            key = prefix + node.edge
            if node.value is not _MISSING:
                yield key, node.value
            for byte in sorted(node.children, reverse=True):
                stack.append((node.children[byte], key))


class Mode(enum.Enum):
    """Which rearrangement adjacency a container indexes."""

    RSPR = "rspr"
    USPR = "uspr"
    TBR = "tbr"

    @property
    def rooted(self):
        return self is Mode.RSPR


_SNAPSHOT_MAGIC = "afcontainer"
_SNAPSHOT_VERSION = "v1"


def write_snapshot(path, mode, canonical_lines):
    """Write canonical tree strings to a reloadable snapshot file."""
    mode = Mode(mode)
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{_SNAPSHOT_MAGIC} {_SNAPSHOT_VERSION} {mode.value} {len(canonical_lines)}\n")
        for text in canonical_lines:
            fh.write(text.decode("ascii") + "\n")


def read_snapshot(path):
    """Read a snapshot header and its raw canonical lines: (Mode, [bytes])."""
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline().rstrip("\n").split(" ")
        if len(header) != 4 or header[0] != _SNAPSHOT_MAGIC:
            raise SnapshotError("not a container snapshot")
        if header[1] != _SNAPSHOT_VERSION:
            raise SnapshotError(f"unsupported snapshot version {header[1]!r}")
        try:
            mode = Mode(header[2])
        except ValueError:
            raise SnapshotError(f"unknown snapshot mode {header[2]!r}") from None
        try:
            count = int(header[3])
        except ValueError:
            raise SnapshotError(f"bad tree count {header[3]!r}") from None
        lines = []
        for lineno, line in enumerate(fh):
            text = line.rstrip("\n")
            if not text:
                raise SnapshotError(f"blank line {lineno + 2} in snapshot")
            lines.append(text.encode("ascii"))
        if len(lines) != count:
            raise SnapshotError(f"snapshot header promises {count} trees, found {len(lines)}")
    return mode, lines


class AFContainer:
    """Append-only index of trees by their shared two-component forests.

    Tree ids are assigned densely from 0 in first-insertion order; inserting
    an already-present tree returns its existing id and changes nothing.
    """

    def __init__(self, mode):
        self.mode = Mode(mode)
        self._forest_trie = ByteTrie()
        self._id_trie = ByteTrie()
        self._trees = []

    def __len__(self):
        return len(self._trees)

    def __repr__(self):
        return f"<AFContainer {self.mode.value} m={len(self._trees)}>"

    def _check_rootedness(self, tree):
        if tree.rooted != self.mode.rooted:
            kind = "rooted" if tree.rooted else "unrooted"
            raise ModeError(f"{kind} tree does not match container mode {self.mode.value}")

    def _keys(self, tree):
        if self.mode is Mode.RSPR:
            return rspr_forest_keys(tree)
        if self.mode is Mode.USPR:
            return uspr_forest_keys(tree)
        return tbr_forest_keys(tree)

    def insert(self, tree):
        """Index a tree; returns its id (the existing one for duplicates)."""
        self._check_rootedness(tree)
        text = sdlnewick_tree(tree)
        existing = self._id_trie.get(text)
        if existing is not None:
            return existing
        tree_id = len(self._trees)
        self._id_trie.set(text, tree_id)
        self._trees.append(text)
        trie = self._forest_trie
        for key in self._keys(tree):
            trie.setdefault(key, list).append(tree_id)
        return tree_id

    def id(self, tree):
        """Id of an inserted tree, or None."""
        return self._id_trie.get(sdlnewick_tree(tree))

    def sdlnewick_of(self, tree_id):
        """Canonical string of the tree with this id; b"" if out of range."""
        if 0 <= tree_id < len(self._trees):
            return self._trees[tree_id]
        return b""

    def _matches(self, tree, keys):
        own = self._id_trie.get(sdlnewick_tree(tree))
        get = self._forest_trie.get
        out = []
        for key in keys:
            found = get(key)
            if found:
                if own is None:
                    out.extend(found)
                else:
                    out.extend(i for i in found if i != own)
        return out

    def spr_neighbors(self, tree):
        """Ids of inserted trees one prune-regraft move from tree.

        The raw list is unsorted and repeats the ids of trees that are also
        interchange-adjacent (they share more than one forest key); the query
        tree itself need not be inserted and is never reported.
        """
        if self.mode is Mode.TBR:
            raise ModeError("prune-regraft queries need an rspr or uspr container")
        self._check_rootedness(tree)
        return self._matches(tree, self._keys(tree))

    def tbr_neighbors(self, tree):
        """Ids of inserted trees one bisection-reconnection move from tree."""
        if self.mode is not Mode.TBR:
            raise ModeError("bisection queries need a tbr container")
        self._check_rootedness(tree)
        return self._matches(tree, self._keys(tree))

    def nni_neighbors(self, tree):
        """Ids of inserted trees one interchange move from tree (no repeats).

        Works in any mode: only the id trie is consulted, at O(n) candidate
        lookups per query.
        """
        own = self._id_trie.get(sdlnewick_tree(tree))
        seen = set()
        out = []
        get = self._id_trie.get
        for candidate in nni_moves(tree):
            found = get(sdlnewick_tree(candidate))
            if found is not None and found != own and found not in seen:
                seen.add(found)
                out.append(found)
        return out

    def neighbor_strings(self, tree):
        """Canonical strings of the deduplicated move neighborhood of tree."""
        ids = self.tbr_neighbors(tree) if self.mode is Mode.TBR else self.spr_neighbors(tree)
        seen = set()
        out = []
        for i in ids:
            if i not in seen:
                seen.add(i)
                out.append(self._trees[i])
        return out

    # -- snapshot -----------------------------------------------------------

    def save(self, path):
        """Write the container to a text snapshot; the forest trie is
        reconstructed on load."""
        write_snapshot(path, self.mode, self._trees)

    @classmethod
    def load(cls, path):
        mode, lines = read_snapshot(path)
        container = cls(mode)
        for lineno, text in enumerate(lines):
            try:
                tree = decode_tree(text)
                tree_id = container.insert(tree)
            except (CanonicalError, ModeError) as exc:
                raise SnapshotError(f"snapshot line {lineno + 2}: {exc}") from exc
            if tree_id != lineno:
                raise SnapshotError(f"duplicate tree at snapshot line {lineno + 2}")
        return container
