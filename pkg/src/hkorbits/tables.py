"""Reference tables with expected and computed columns side by side."""

from __future__ import annotations

from dataclasses import dataclass

from .cohomogeneity import (CLASSICAL_TABLE, EXCEPTIONAL_TABLE, cartan_to_matrix,
                            classical_spec, cohomogeneity)
from .invariants import k_squared, k_squared_oracle
from .lie import build_algebra
from .orbits import format_partition, jordan_partition, orbit_spec, representative_matrix

NA = "n/a"
KINDS = ("classical", "height3", "cohom3", "ksquared")


@dataclass(frozen=True)
class TableRow:
    kind: str
    type: str
    orbit: str
    expected: object
    computed: object

    @property
    def computable(self):
        return self.computed != NA

    @property
    def matches(self):
        if not self.computable:
            return None
        if isinstance(self.expected, (int, str)):
            return self.computed == self.expected
        return abs(float(self.computed) - float(self.expected)) <= 1e-9 * max(1.0, abs(float(self.expected)))


# height-three orbits; classical rows as (type, smallest rank, partition of that rank, generic label)
HEIGHT3_CLASSICAL = (
    ("A", 3, (3, 1), "A_n: (3,1^(n-2))"),
    ("A", 5, (2, 2, 2), "A_n, n>=5: (2^3,1^(n-5))"),
    ("B", 2, (5,), "B_2: (5)"),
    ("B", 3, (3, 2, 2), "B_n, n>=3: (3,2^2,1^(2n-6))"),
    ("B", 6, (2, 2, 2, 2, 2, 2, 1), "B_n, n>=6: (2^6,1^(2n-11))"),
    ("C", 3, (2, 2, 2), "C_n, n>=3: (2^3,1^(2n-6))"),
    ("D", 3, (3, 3), "D_3: (3^2)"),
    ("D", 4, (3, 2, 2, 1), "D_n, n>=4: (3,2^2,1^(2n-7))"),
    ("D", 6, (2, 2, 2, 2, 2, 2), "D_n, n>=6: (2^6,1^(2n-12))"),
)
HEIGHT3_EXCEPTIONAL = ("G2", "F4", "E6", "E7", "E7", "E8")

# cohomogeneity-three orbits at their smallest rank
COHOM3 = (
    ("A", 5, (2, 2, 2), "generic"),
    ("B", 6, (2, 2, 2, 2, 2, 2, 1), "generic"),
    ("C", 3, (2, 2, 2), "generic"),
    ("D", 6, (2, 2, 2, 2, 2, 2), "generic"),
    ("B", 3, (3, 2, 2), "special"),
)

# matrix families and ranges for the k^2 table
KSQ_RANGES = (("SL", range(2, 9)), ("SO", range(4, 15)), ("SP", range(1, 5)))


def _type_label(letter, rank):
    fam, n = cartan_to_matrix(letter, rank)
    name = {"SL": "sl", "SO": "so", "SP": "sp"}[fam]
    return f"{letter}{rank}={name}({n})"


def classical_rows(n_samples=5, seed=42):
    rows = []
    for letter, rank, part, expected in CLASSICAL_TABLE:
        spec = classical_spec(letter, rank, part, expected)
        res = cohomogeneity(spec, n_samples, seed)
        rows.append(TableRow("classical", _type_label(letter, rank), format_partition(part),
                             expected, res.cohomogeneity))
    for name, label, expected in EXCEPTIONAL_TABLE:
        rows.append(TableRow("classical", name, label, expected, NA))
    return rows


def height3_rows():
    """Computed column: Jordan type of the listed representative."""
    rows = []
    for letter, rank, part, generic in HEIGHT3_CLASSICAL:
        fam, n = cartan_to_matrix(letter, rank)
        spec = orbit_spec(fam, n, part)
        got = jordan_partition(representative_matrix(spec))
        rows.append(TableRow("height3", _type_label(letter, rank), generic,
                             format_partition(part), format_partition(got)))
    for name in HEIGHT3_EXCEPTIONAL:
        rows.append(TableRow("height3", name, "weighted Dynkin diagram", "height 3", NA))
    return rows


def cohom3_rows(n_samples=5, seed=42):
    rows = []
    for letter, rank, part, kind in COHOM3:
        spec = classical_spec(letter, rank, part, 3)
        res = cohomogeneity(spec, n_samples, seed)
        rows.append(TableRow("cohom3", _type_label(letter, rank),
                             f"{format_partition(part)} {kind}", 3, res.cohomogeneity))
    rows.append(TableRow("cohom3", "E7", "k = R + e6 generic", 3, NA))
    return rows


def ksquared_rows():
    rows = []
    for fam, ns in KSQ_RANGES:
        for n in ns:
            alg = build_algebra(fam, n)
            rows.append(TableRow("ksquared", alg.label, "", float(k_squared(fam, n)),
                                 k_squared_oracle(alg)))
    for name in ("G2", "F4", "E6", "E7", "E8"):
        rows.append(TableRow("ksquared", name, "", float(k_squared(name)), NA))
    return rows


def emit_table(kind, n_samples=5, seed=42):
    """Reference rows with expected and computed columns."""
    if kind == "classical":
        return classical_rows(n_samples, seed)
    if kind == "height3":
        return height3_rows()
    if kind == "cohom3":
        return cohom3_rows(n_samples, seed)
    if kind == "ksquared":
        return ksquared_rows()
    raise ValueError(f"unknown table {kind!r}; expected one of {KINDS}")
