"""Small named graphs shared by the tests."""
from abelgraph.graph import DualGraph


def banana(g1: int, g2: int, k: int) -> DualGraph:
    """Two components joined by k parallel edges."""
    return DualGraph.build({"C1": g1, "C2": g2}, [(f"e{i + 1}", "C1", "C2") for i in range(k)])


def G1() -> DualGraph:
    return DualGraph.build({"C1": 2})


def G2() -> DualGraph:
    return banana(0, 0, 3)


def G3() -> DualGraph:
    return banana(1, 2, 1)


def G4() -> DualGraph:
    return banana(1, 2, 2)


def G5() -> DualGraph:
    return banana(0, 0, 4)


def chain(*genera: int) -> DualGraph:
    names = "ABCDEFGH"[: len(genera)]
    return DualGraph.build(
        dict(zip(names, genera)),
        [(f"e{i + 1}", names[i], names[i + 1]) for i in range(len(genera) - 1)],
    )


def star() -> DualGraph:
    """Genus-0 center joined by single edges to three genus-1 leaves."""
    return DualGraph.build(
        {"c": 0, "a": 1, "b": 1, "d": 1}, [("e1", "c", "a"), ("e2", "c", "b"), ("e3", "c", "d")]
    )


def line_pair() -> DualGraph:
    """Two joined genus-0 vertices, each bridged to its own genus-2 vertex."""
    return DualGraph.build(
        {"L1": 0, "L2": 0, "P": 2, "R": 2},
        [("m", "L1", "L2"), ("a", "L1", "P"), ("b", "L2", "R")],
    )


def loop_curve() -> DualGraph:
    return DualGraph.build({"v": 1}, [("l", "v", "v")])


def two_lines() -> DualGraph:
    """A tree of two lines; each line carries two positive-genus leaves."""
    return DualGraph.build(
        {"L1": 0, "L2": 0, "a": 1, "b": 1, "c": 1, "d": 2},
        [("m", "L1", "L2"), ("ea", "L1", "a"), ("eb", "L1", "b"), ("ec", "L2", "c"), ("ed", "L2", "d")],
    )


def three_lines() -> DualGraph:
    """A path of three lines with genus-1 leaves."""
    return DualGraph.build(
        {"L1": 0, "L2": 0, "L3": 0, "a": 1, "b": 1, "c": 1, "d": 1, "f": 1},
        [
            ("m1", "L1", "L2"),
            ("m2", "L2", "L3"),
            ("ea", "L1", "a"),
            ("eb", "L1", "b"),
            ("ec", "L2", "c"),
            ("ed", "L3", "d"),
            ("ef", "L3", "f"),
        ],
    )
