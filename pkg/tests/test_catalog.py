import itertools

import pytest

from posmc import catalog
from posmc.structures import complement, is_isomorphic

RECON = [n for n in catalog.names() if catalog.catalog(n).provenance == catalog.RECONSTRUCTED]


def test_fixed_entries():
    nae = catalog.structure("B_NAE")
    assert nae.table("NAE") == set(itertools.product((0, 1), repeat=3)) - {(0, 0, 0), (1, 1, 1)}
    assert catalog.digraph("DP110_3").edges == {(0, 1), (1, 2), (0, 0), (1, 1)}
    assert catalog.digraph("K2").edges == {(0, 1), (1, 0)}
    assert catalog.digraph("K2bar").edges == {(0, 0), (1, 1)}
    assert catalog.structure("B1").table("R") == {(0, 0, 0), (0, 0, 1)}
    assert catalog.structure("B2").table("R") == {(0, 0, 0), (0, 1, 1)}


def test_h8_shape():
    assert catalog.digraph("H8").edges == {(0, 1), (1, 2), (0, 2), (1, 1)}


def test_complement_prefix():
    assert catalog.digraph("~K3") == catalog.digraph("K3bar")
    assert catalog.digraph("~K2") == catalog.digraph("K2bar")
    assert catalog.digraph("~~H6") == catalog.digraph("H6")


def test_unknown_name():
    with pytest.raises(catalog.CatalogError):
        catalog.catalog("H9")
    with pytest.raises(catalog.CatalogError):
        catalog.reconstruction_solutions("K2")


def test_reconstructed_entries_listed():
    assert set(RECON) == {"H1", "H1'", "H2", "H2'", "H3", "H3'", "H4", "H4'", "H5", "H5'", "H6", "H7", "H7'", "H8"}
    for name in RECON:
        assert catalog.catalog(name).constraints


@pytest.mark.parametrize("name", RECON)
def test_reconstruction_unique_up_to_isomorphism(name):
    sols = catalog.verify_reconstruction(name)
    assert catalog.digraph(name) in sols
    assert all(is_isomorphic(s, sols[0]) for s in sols)


def test_lookup_isomorphic():
    assert catalog.lookup_isomorphic(complement(catalog.digraph("K3"))) == "K3bar"
    assert catalog.lookup_isomorphic(catalog.digraph("H8"), ["K3", "H8"]) == "H8"
