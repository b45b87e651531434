import pytest

from leavitt import parse_field, parse_graph

ROSE2 = """\
[vertices]
v
[arrows]
x1: v -> v
x2: v -> v
"""

ROSE3 = """\
[vertices]
v
[arrows]
x1: v -> v
x2: v -> v
x3: v -> v
"""

ROSE5 = """\
[vertices]
v
[arrows]
x1: v -> v
x2: v -> v
x3: v -> v
x4: v -> v
x5: v -> v
"""

ROSEAB = """\
[vertices]
v
[arrows]
a: v -> v
b: v -> v
"""

# two vertices on a cycle, one sink hanging off the middle
SINK3 = """\
[vertices]
u
v
w
[arrows]
e: u -> v
g: v -> u
h: v -> w
"""

# a rose with infinitely many petals, all drawn from one family
ROSEINF = """\
[vertices]
v
[families]
f[]: v -> v
"""

# one plain loop next to an infinite family at the same vertex
LOOPFAM = """\
[vertices]
v
[arrows]
a: v -> v
[families]
f[]: v -> v
"""

ABFAM = """\
[vertices]
v
[arrows]
a: v -> v
b: v -> v
[families]
f[]: v -> v
"""

# a two loop rose with a tail vertex feeding into it
TWOLOOP_TAIL = """\
[vertices]
t
v
[arrows]
a: v -> v
b: v -> v
c: t -> v
"""


@pytest.fixture(scope="session")
def q():
    return parse_field("q")


@pytest.fixture(scope="session")
def gf5():
    return parse_field("gf:5")


@pytest.fixture(scope="session")
def rose2():
    return parse_graph(ROSE2)


@pytest.fixture(scope="session")
def rose3():
    return parse_graph(ROSE3)


@pytest.fixture(scope="session")
def rose5():
    return parse_graph(ROSE5)


@pytest.fixture(scope="session")
def roseab():
    return parse_graph(ROSEAB)


@pytest.fixture(scope="session")
def sink3():
    return parse_graph(SINK3)


@pytest.fixture(scope="session")
def roseinf():
    return parse_graph(ROSEINF)


@pytest.fixture(scope="session")
def loopfam():
    return parse_graph(LOOPFAM)


@pytest.fixture(scope="session")
def abfam():
    return parse_graph(ABFAM)
