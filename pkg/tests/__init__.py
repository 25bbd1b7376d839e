from pathlib import Path

from socbound.model import Topology
from socbound.topology import load_topology

TESTS_DIR = Path(__file__).parent
TOPOLOGY_1NS = TESTS_DIR / "topology_1ns.json"
MINIMAL = TESTS_DIR / "minimal.json"
REFERENCE = TESTS_DIR.parent / "socbound" / "data" / "reference.json"


def topology_1ns() -> Topology:
    return load_topology(TOPOLOGY_1NS)


def minimal() -> Topology:
    return load_topology(MINIMAL)


def reference() -> Topology:
    return load_topology(REFERENCE)
