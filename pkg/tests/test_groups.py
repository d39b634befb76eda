import numpy as np
import pytest

from equivarifier.actions import FunctionAction, rot90_action, trivial_action
from equivarifier.errors import (
    GroupFormatError,
    InsufficientProbeError,
    InvalidElementError,
    InvalidOrderError,
    InvalidSubgroupError,
    NotNormalError,
)
from equivarifier.groups import (
    FiniteGroup,
    check_axioms,
    compose,
    cosets,
    cyclic_group,
    describe_group,
    dihedral_group,
    element_order,
    is_homomorphism,
    is_normal,
    kernel_of_action,
    make_subgroup,
    parse_group_spec,
    quotient_group,
    read_group_table,
    write_group_table,
)


def test_cyclic_group_table():
    C4 = cyclic_group(4)
    assert C4.order == 4
    assert C4.identity == 0
    assert C4.table[1][3] == 0
    assert C4.table[2][3] == 1
    assert C4.element_names == ("e", "g", "g^2", "g^3")


def test_trivial_cyclic_group():
    C1 = cyclic_group(1)
    assert C1.order == 1
    assert C1.identity == 0
    assert C1.table.tolist() == [[0]]


@pytest.mark.parametrize("constructor", [cyclic_group, dihedral_group])
def test_order_zero_is_rejected(constructor):
    with pytest.raises(InvalidOrderError):
        constructor(0)


def test_dihedral_relations():
    D3 = dihedral_group(3)
    r, f = 1, 3
    assert D3.order == 6
    assert compose(D3, compose(D3, f, r), f) == D3.power(r, 2)
    assert compose(D3, f, f) == D3.identity
    assert element_order(D3, r) == 3
    assert element_order(D3, f) == 2


def test_dihedral_one_is_c2():
    assert dihedral_group(1).same_table(cyclic_group(2))


def test_compose_examples():
    C4 = cyclic_group(4)
    assert compose(C4, 1, 1) == 2
    assert compose(C4, 0, 3) == 3
    with pytest.raises(InvalidElementError):
        compose(C4, 4, 0)


def test_inverse_and_power():
    C5 = cyclic_group(5)
    assert C5.inverse(2) == 3
    assert C5.power(2, -1) == 3
    assert C5.power(1, 7) == 2
    assert len(C5) == 5


@pytest.mark.parametrize("n", range(1, 13))
def test_cyclic_axioms_hold(n):
    report = check_axioms(cyclic_group(n))
    assert report.ok
    assert report.exhaustive


@pytest.mark.parametrize("n", range(1, 7))
def test_dihedral_axioms_hold(n):
    assert check_axioms(dihedral_group(n)).ok


def test_inverses_are_unique():
    for G in (cyclic_group(6), dihedral_group(4)):
        for a in G.elements:
            assert np.count_nonzero(G.table[a] == G.identity) == 1


def test_corrupted_table_reports_violations():
    table = cyclic_group(4).table.copy()
    table[1][1] = 3
    report = check_axioms(FiniteGroup.from_table(table, name="broken"))
    assert not report.ok
    assert {v.law for v in report.violations} & {"associativity", "inverse"}


def test_out_of_range_entry_is_a_closure_violation():
    report = check_axioms(FiniteGroup.from_table([[0, 1], [1, 2]]))
    assert [v.law for v in report.violations] == ["closure"]


def test_large_group_is_sampled():
    report = check_axioms(cyclic_group(70), seed=3)
    assert report.ok
    assert not report.exhaustive


def test_make_subgroup_validates():
    C4 = cyclic_group(4)
    N = make_subgroup(C4, [2, 0])
    assert N.members == (0, 2)
    assert 2 in N
    with pytest.raises(InvalidSubgroupError):
        make_subgroup(C4, [1, 2])
    with pytest.raises(InvalidSubgroupError):
        make_subgroup(C4, [0, 1])


def test_cosets_identity_first():
    C4 = cyclic_group(4)
    assert cosets(C4, make_subgroup(C4, [0, 2])) == [(0, 2), (1, 3)]


def test_quotient_orders():
    C4 = cyclic_group(4)
    Q = quotient_group(C4, make_subgroup(C4, [0, 2]))
    assert Q.group.order == 2
    assert Q.projection.tolist() == [0, 1, 0, 1]
    assert is_homomorphism(Q)

    trivial = quotient_group(C4, make_subgroup(C4, [0]))
    assert trivial.group.same_table(C4)
    assert sorted(trivial.projection.tolist()) == [0, 1, 2, 3]

    D3 = dihedral_group(3)
    rotations = quotient_group(D3, make_subgroup(D3, [0, 1, 2]))
    assert rotations.group.order == 2
    assert is_homomorphism(rotations)


def test_quotient_by_non_normal_subgroup():
    D3 = dihedral_group(3)
    flips = make_subgroup(D3, [0, 3])
    assert not is_normal(flips)
    with pytest.raises(NotNormalError):
        quotient_group(D3, flips)


def test_kernel_of_swap_action():
    C4 = cyclic_group(4)
    swap = FunctionAction(C4, lambda k, x: (1 - x) if k % 2 else x)
    N = kernel_of_action(C4, swap, [0, 1])
    assert N.members == (0, 2)
    assert is_normal(N)


def test_kernel_of_trivial_and_faithful_actions():
    C4 = cyclic_group(4)
    assert kernel_of_action(C4, trivial_action(C4), [np.arange(3)]).members == (0, 1, 2, 3)
    probe = np.arange(9, dtype=float).reshape(3, 3, 1)
    assert kernel_of_action(C4, rot90_action(C4, 3, 3), [probe]).is_trivial


def test_kernel_needs_probes():
    C4 = cyclic_group(4)
    with pytest.raises(InsufficientProbeError):
        kernel_of_action(C4, trivial_action(C4), [])


def test_group_table_file_round_trip(tmp_path):
    D3 = dihedral_group(3)
    path = write_group_table(D3, tmp_path / "d3.tbl")
    loaded = read_group_table(path)
    assert loaded.same_table(D3)
    assert loaded.name == "d3"


def test_group_table_file_errors(tmp_path):
    bad = tmp_path / "bad.tbl"
    bad.write_text("order 2\n0 1\n", encoding="utf-8")
    with pytest.raises(GroupFormatError):
        read_group_table(bad)
    bad.write_text("size 2\n0 1\n1 0\n", encoding="utf-8")
    with pytest.raises(GroupFormatError):
        read_group_table(bad)


def test_parse_group_spec(tmp_path):
    assert parse_group_spec("cyclic:4").same_table(cyclic_group(4))
    assert parse_group_spec("dihedral:3").order == 6
    path = write_group_table(cyclic_group(3), tmp_path / "c3.tbl")
    assert parse_group_spec(f"file:{path}").order == 3
    with pytest.raises(GroupFormatError):
        parse_group_spec("klein")
    with pytest.raises((GroupFormatError, InvalidOrderError)):
        parse_group_spec("cyclic:x")


def test_describe_group():
    info = describe_group(cyclic_group(4))
    assert info.order == 4
    assert info.inverses == [0, 3, 2, 1]
    assert info.axioms.ok
