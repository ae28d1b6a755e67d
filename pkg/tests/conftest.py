import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

import commprob as cp


@pytest.fixture(scope="session")
def s3():
    return cp.build("symmetric:n=3")


@pytest.fixture(scope="session")
def d8():
    return cp.build("dihedral:n=4")


@pytest.fixture(scope="session")
def q8():
    return cp.build("quaternion8")


@pytest.fixture(scope="session")
def d12():
    return cp.build("dihedral:n=6")


@pytest.fixture(scope="session")
def f20():
    return cp.build("frobenius20")


@pytest.fixture(scope="session")
def g20_inverting():
    """Order-20 group where the coset generator squares to a central element."""
    return cp.build("semidirect_cyclic:a=5,u=4,m=4")


@pytest.fixture(scope="session")
def h31():
    return cp.build("heisenberg:p=3,m=1,n=1")


@pytest.fixture(scope="session")
def h32():
    return cp.build("heisenberg:p=3,m=1,n=2")


@pytest.fixture(scope="session")
def h91():
    return cp.build("heisenberg:p=3,m=2,n=1")


@pytest.fixture(scope="session")
def class2_corpus(h31, h32, h91):
    """Constructed class-2 exponent-3 groups of order <= 3^6, with labels."""
    c3 = cp.build("cyclic:n=3")
    c9 = cp.build("cyclic:n=9")
    return [
        ("H27", h31),
        ("H243", h32),
        ("H729", h91),
        ("Jordan(3,1)", cp.build("semidirect_matrix:p=3,d=1")),
        ("Jordan(3,2)", cp.build("semidirect_matrix:p=3,d=2")),
        ("H27xC3", cp.direct_product(h31, c3)),
        ("H27xC9", cp.direct_product(h31, c9)),
        ("H27xH27", cp.direct_product(h31, h31)),
    ]


@pytest.fixture(scope="session")
def catalog48():
    return cp.small_catalog(48)


@pytest.fixture(scope="session")
def catalog64():
    return cp.small_catalog(64)
