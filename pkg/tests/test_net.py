import numpy as np
import pytest

from mols_forge.errors import DimensionError, IncompatibilityError, StructuralError
from mols_forge.latin import PolSet, TreatmentGrid
from mols_forge.net import Net, PseudoNet, complementary_net, joined, joined_matrix, net_from_pol, scheme_from_net
from mols_forge.resolution import find_resolution
from mols_forge.scheme import build_Lg_scheme, induce_complement

from conftest import prefix


def test_grid_net_degree_two():
    net = net_from_pol(TreatmentGrid(3), PolSet.empty(3))
    assert net.degree == 2
    assert net.classes[0][0] == (1, 2, 3) and net.classes[1][0] == (1, 4, 7)
    assert joined(net, 1, 2) and joined(net, 1, 4) and not joined(net, 1, 5)
    with pytest.raises(DimensionError):
        joined(net, 2, 2)


def test_net_scheme_equals_lg_scheme():
    for name, w in (("ex43_pol", 1), ("ex44_pol", 3), ("ex46_pol", 2)):
        pol = prefix(name, w)
        net = net_from_pol(pol.grid, pol)
        assert net.degree == w + 2
        assert scheme_from_net(net) == build_Lg_scheme(pol.grid, pol)
        assert np.array_equal(PseudoNet(net).relation(), induce_complement(scheme_from_net(net)).adjacency)


def test_net_axioms_enforced():
    with pytest.raises(StructuralError):
        Net(2, [[(1, 2), (3,)]])
    with pytest.raises(StructuralError):
        Net(2, [[(1, 2), (2, 3)]])
    with pytest.raises(IncompatibilityError) as err:
        Net(2, [[(1, 2), (3, 4)], [(1, 2), (3, 4)]])
    assert err.value.witness == ((1, 2), (1, 2))


def test_complementary_net_from_resolution():
    pol = prefix("ex43_pol", 1)
    net = net_from_pol(pol.grid, pol)
    res = find_resolution(pol, 3)
    comp = complementary_net(net, res)
    assert comp.degree == 3 and comp.order == 5
    # together the two nets join every pair of points exactly once
    total = joined_matrix(net).astype(int) + joined_matrix(comp).astype(int)
    assert (total[~np.eye(25, dtype=bool)] == 1).all()
    assert PseudoNet(net).joined(1, 7) and not PseudoNet(net).joined(1, 2)


def test_complementary_net_rejects_a_row():
    pol = prefix("ex43_pol", 1)
    net = net_from_pol(pol.grid, pol)
    with pytest.raises(IncompatibilityError) as err:
        complementary_net(net, [net.classes[0]])
    assert err.value.witness[0] == (1, 2, 3, 4, 5)


def test_payload():
    net = net_from_pol(TreatmentGrid(2), PolSet.empty(2))
    assert net.to_payload() == {"order": 2, "degree": 2, "classes": [[[1, 2], [3, 4]], [[1, 3], [2, 4]]]}
    assert sorted(net.lines()) == [(1, 2), (1, 3), (2, 4), (3, 4)]
