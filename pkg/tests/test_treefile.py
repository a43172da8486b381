import io

import pytest

from silverlab.constructions import treefile
from silverlab.seqcore import FiniteTree, SilverTree

SAMPLE = "# tree K=2 height=2\n.\n  0\n    01\n  1\n    10\n"


def test_dumps_writes_depth_first():
    tree = FiniteTree.from_words([(0, 1), (1, 0)])
    assert treefile.dumps(tree) == SAMPLE
    assert treefile.loads(SAMPLE) == tree


def test_silver_trees_are_materialized():
    text = treefile.dumps(SilverTree(2, (1, None)))
    assert text == "# tree K=2 height=2\n.\n  1\n    10\n    11\n"


def test_ternary_header_is_read():
    tree = treefile.loads("# tree K=3 height=1\n.\n  2\n")
    assert tree.alphabet == 3
    assert sorted(tree.terminals()) == [(2,)]


@pytest.mark.parametrize(
    "text",
    [
        "# tree K=2 height=1\n.\n 0\n",
        "# tree K=2 height=1\n  0\n",
        "# tree K=2 height=2\n.\n    01\n",
    ],
)
def test_malformed_tree_text(text):
    with pytest.raises(ValueError):
        treefile.loads(text)


def test_dump_and_load_files(tmp_path):
    tree = FiniteTree.cube(2)
    fp = tmp_path / "cube.tree"
    treefile.dump(tree, str(fp))
    assert treefile.load(str(fp)) == tree
    buf = io.StringIO()
    treefile.dump(tree, buf)
    buf.seek(0)
    assert treefile.load(buf) == tree
