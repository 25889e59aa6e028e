import random

from hypothesis import settings, strategies as st

from partcat.partition import (
    BLACK,
    EXTRA,
    EXTRA_REGIME,
    LINE,
    PLAIN,
    TWOCOL,
    WHITE,
    Partition,
)

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

REGIME_COLORS = {
    PLAIN: (LINE,),
    EXTRA_REGIME: (LINE, EXTRA),
    TWOCOL: (WHITE, BLACK),
}


def build(upper, lower, raw_labels):
    colors = list(upper) + list(lower)
    labels = [("t", i) if c is EXTRA else lab for i, (c, lab) in enumerate(zip(colors, raw_labels))]
    return Partition(upper, lower, labels)


@st.composite
def words(draw, regime, min_size=0, max_size=3):
    return tuple(draw(st.lists(st.sampled_from(REGIME_COLORS[regime]),
                               min_size=min_size, max_size=max_size)))


@st.composite
def partitions(draw, regime=None, max_side=3, upper=None):
    if regime is None:
        regime = draw(st.sampled_from((PLAIN, EXTRA_REGIME, TWOCOL)))
    up = tuple(upper) if upper is not None else draw(words(regime, max_size=max_side))
    low = draw(words(regime, max_size=max_side))
    n = len(up) + len(low)
    labels = draw(st.lists(st.integers(0, max(0, n - 1)), min_size=n, max_size=n))
    return build(up, low, labels)


@st.composite
def composable(draw, regime=None, max_side=3):
    """(p, q) with q.upper == p.lower, so q∘p is defined."""
    if regime is None:
        regime = draw(st.sampled_from((PLAIN, EXTRA_REGIME, TWOCOL)))
    p = draw(partitions(regime, max_side))
    q = draw(partitions(regime, max_side, upper=p.lower))
    return p, q


def rng(seed=0):
    return random.Random(seed)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for res in sorted(results, key=lambda r: r.number):
        terminalreporter.write_line(f"{res.line()}  ({res.seconds:.1f}s)")
