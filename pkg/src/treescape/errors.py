"""Exception types shared across the package."""


class TreescapeError(Exception):
    """Base class for every error raised by treescape."""


class NewickError(TreescapeError):
    """Malformed or unsupported Newick input.

    ``pos`` is the 0-based character offset into the parsed text; the
    rendered message reports it as a 1-based column.
    """

    def __init__(self, message, pos=None):
        self.pos = pos
        if pos is not None:
            message = f"{message} (column {pos + 1})"
        super().__init__(message)


class CanonicalError(TreescapeError):
    """Malformed, non-canonical, or structurally invalid canonical string."""


class MoveError(TreescapeError):
    """Invalid rearrangement arguments (bad prune/regraft/cut edges)."""


class ModeError(TreescapeError):
    """Operation mode incompatible with the trees involved."""


class LabelSetError(TreescapeError):
    """Input trees do not share one leaf label set."""


class GraphInvariantError(TreescapeError):
    """Internal adjacency-list construction invariant violated."""


class SnapshotError(TreescapeError):
    """Container snapshot file is malformed or inconsistent."""
