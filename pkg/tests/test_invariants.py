import random

import pytest

from partcat.closure import CERTIFIED_IN, closure, contains
from partcat.functors import degree_of_reflection
from partcat.invariants import (
    INVARIANT_NAMES,
    INVARIANTS,
    base_partitions,
    c_value,
    certify_exclusion,
    get_invariant,
    has_noncrossing_extra_pairing,
    verify_preserved,
)
from partcat.partition import EXTRA_REGIME, PLAIN, TWOCOL, generator, parse


@pytest.mark.parametrize("name", INVARIANT_NAMES)
def test_invariants_are_preserved(name):
    inv = get_invariant(name)
    for regime in inv.regimes:
        ok, witness = verify_preserved(name, regime, 1000, 0)
        assert ok, witness


@pytest.mark.parametrize("regime", [PLAIN, EXTRA_REGIME, TWOCOL])
def test_base_partitions_satisfy_invariants(regime):
    for inv in INVARIANTS:
        if regime not in inv.regimes:
            continue
        param = 0 if inv.name == "c-sum-lattice" else None
        for p in base_partitions(regime):
            assert inv.check(p, param) is not False, (inv.name, p)


def test_c_values():
    assert c_value(parse("P(; a:w a:w)")) == 2
    assert c_value(parse("P(; a:w a:b)")) == 0
    assert c_value(generator("positionerext")) == -2  # F gives P(a:w ; a:b)
    assert c_value(parse("P(; a a)")) is None
    assert c_value(parse("P(; a x:t)")) == 1
    assert c_value(parse("P(; a a x:t)")) is None


def test_noncrossing_extra_pairing():
    assert has_noncrossing_extra_pairing(generator("extra_pair"))
    assert not has_noncrossing_extra_pairing(generator("globcolext"))
    assert has_noncrossing_extra_pairing(generator("positionerext")) is False


def test_certify_examples():
    glob, pos = generator("globcolext"), generator("positionerext")
    assert certify_exclusion(glob, [], EXTRA_REGIME) == "noncrossing-extra-pairing"
    assert certify_exclusion(parse("P(; a:w a:w)"), [], TWOCOL) == "c-sum-lattice"
    assert certify_exclusion(generator("crosspart"), [], PLAIN) == "noncrossing"
    assert certify_exclusion(generator("singleton"), [], PLAIN) == "even-length"
    assert certify_exclusion(generator("fourpart"), [generator("crosspart")], PLAIN) is None
    assert certify_exclusion(pos, [pos], EXTRA_REGIME) is None


def test_certificates_are_sound():
    r = random.Random(0)
    for regime, gens, P in [
        (PLAIN, [generator("fourpart")], 6),
        (EXTRA_REGIME, [generator("globcolext")], 6),
        (TWOCOL, [parse("P(; a:w a:w)")], 6),
    ]:
        c = closure(gens, regime, P, 2)
        elems = list(c.elements())
        for p in r.sample(elems, min(40, len(elems))):
            assert contains(c, p) == CERTIFIED_IN
            assert certify_exclusion(p, gens, regime) is None


def test_degree_from_closures():
    assert degree_of_reflection(closure([], TWOCOL, 6, 0).elements()) == 0
    assert degree_of_reflection(closure([parse("P(; a:w a:w)")], TWOCOL, 6, 0).elements()) == 2
    assert degree_of_reflection(closure([parse("P(; a:w)")], TWOCOL, 6, 0).elements()) == 1
