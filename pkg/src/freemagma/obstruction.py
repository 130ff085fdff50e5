"""Checkable ingredients of the argument that no mean on a free magma is idempotent.

For finitely supported means everything here is an exact identity or an
exact inequality between rationals.  :func:`discrepancy_witness` exhibits,
for any finitely supported mean, a set on which ``mu*mu`` and ``mu`` differ.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import CapExceeded
from .limits import DEFAULT_MAX_SUPPORT
from .measure import Mean, convolve, format_rational, measure_of
from .profiles import convolve_profiles, profile_measure, profile_of
from .sets import Complement, Level, Product, SetExpr, T, Union, Z, format_set


def z_via_levels(mu: Mean, nu: Mean) -> Fraction:
    """(mu*nu)(Z) assembled level by level: sum over p of mu(S_p) * nu(T_p)."""
    return sum((w * measure_of(nu, T(p)) for p, w in sorted(mu.level_masses().items())),
               Fraction(0))


def t_recursion(mu: Mean, nu: Mean, p: int,
                max_support: int = DEFAULT_MAX_SUPPORT) -> tuple[Fraction, Fraction]:
    """((mu*nu)(T(p+1)), (1 - mu(Z)) * nu(T(p))); the two agree exactly."""
    lhs = measure_of(convolve(mu, nu, max_support), T(p + 1))
    rhs = (1 - measure_of(mu, Z())) * measure_of(nu, T(p))
    return lhs, rhs


def _square_level_mass(mu: Mean, A: SetExpr, max_support: int) -> Fraction:
    try:
        return measure_of(convolve(mu, mu, max_support), A)
    except CapExceeded:
        prof = profile_of(mu, 0)
        return profile_measure(convolve_profiles(prof, prof, 0), A)


def discrepancy_witness(mu: Mean, max_support: int = DEFAULT_MAX_SUPPORT) -> tuple[SetExpr, Fraction]:
    """A set A and gap mu(A) - (mu*mu)(A) > 0.

    A is the union of levels 1..n with n the top level of mu: mu gives it
    full mass, while mu*mu puts mass mu(S_n)**2 > 0 on level 2n.
    """
    if not len(mu):
        raise ValueError("empty mean")
    top = max(mu.level_masses())
    A = Union(*(Level(k) for k in range(1, top + 1)))
    gap = measure_of(mu, A) - _square_level_mass(mu, A, max_support)
    return A, gap


@dataclass
class ObstructionReport:
    support_size: int
    levels: dict
    r: Fraction
    depth: int
    table: list = field(default_factory=list)
    identities: list = field(default_factory=list)
    covering: dict = field(default_factory=dict)
    hypotheses: list = field(default_factory=list)
    discrepancy: dict = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        """All identities hold, the covering bound holds and the gap is positive."""
        return (all(row["holds"] for row in self.identities)
                and self.covering["holds"] and self.discrepancy["gap"] > 0)

    def to_dict(self) -> dict:
        return _jsonable({
            "support_size": self.support_size,
            "levels": {str(k): v for k, v in sorted(self.levels.items())},
            "r": self.r,
            "depth": self.depth,
            "table": self.table,
            "identities": self.identities,
            "covering": self.covering,
            "hypotheses": self.hypotheses,
            "discrepancy": self.discrepancy,
            "consistent": self.consistent,
        })

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, SetExpr):
        return format_set(obj)
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def walkthrough(mu: Mean, depth: int = 6, max_support: int = DEFAULT_MAX_SUPPORT) -> ObstructionReport:
    if depth < 1:
        raise ValueError("depth must be positive")
    levels = mu.level_masses()
    top = max(levels)
    r = measure_of(mu, Z())

    try:
        square = convolve(mu, mu, max_support)
        sq = lambda A: measure_of(square, A)  # noqa: E731
    except CapExceeded:
        sq_prof = convolve_profiles(profile_of(mu, max(depth, top)), profile_of(mu, max(depth, top)),
                                    depth)

        def sq(A):
            # products of level sets and T sets factor exactly; unions of them are disjoint
            if isinstance(A, Product):
                return measure_of(mu, A.left) * measure_of(mu, A.right)
            if isinstance(A, Union) and all(isinstance(B, Product) for B in A.items):
                return sum((sq(B) for B in A.items), Fraction(0))
            return profile_measure(sq_prof, A)

    def mu_of(A):
        return measure_of(mu, A)

    rep = ObstructionReport(len(mu), levels, r, depth)
    for k in range(depth + 1):
        rep.table.append({
            "k": k,
            "mu_S": mu_of(Level(k)) if k else Fraction(0),
            "mu_T": mu_of(T(k)),
            "square_S": sq(Level(k)) if k else Fraction(0),
            "square_T": sq(T(k)),
            "idempotent_T": (1 - r) ** k,
        })

    def identity(name, lhs, rhs):
        rep.identities.append({"name": name, "lhs": lhs, "rhs": rhs, "holds": lhs == rhs})

    square_z = sq(Z())
    identity("(mu*mu)(Z) = sum_p mu(S_p) mu(T_p)", square_z, z_via_levels(mu, mu))
    identity("(mu*mu)(I) = 0", sq(Level(1)), Fraction(0))
    for p in range(depth):
        identity(f"(mu*mu)(T_{p + 1}) = (1 - mu(Z)) mu(T_{p})",
                 sq(T(p + 1)), (1 - r) * mu_of(T(p)))
    for n in range(2, 2 * top + 1):
        conv = sum((levels.get(i, 0) * levels.get(n - i, 0) for i in range(1, n)), Fraction(0))
        identity(f"(mu*mu)(S_{n}) = sum_(i+j={n}) mu(S_i) mu(S_j)", sq(Level(n)), conv)

    n = depth
    low_set = Union(*(Product(Level(k), T(k)) for k in range(1, n)))
    tail_set = Product(Complement(Union(*(Level(k) for k in range(1, n)))), T(n))
    low = sq(low_set)
    tail = sq(tail_set)
    bound = mu_of(T(n))          # mu(S) * mu(T_n) with mu(S) = 1
    rep.covering = {
        "n": n,
        "square_Z": square_z,
        "below_n": low,
        "tail_exact": tail,
        "tail_bound": bound,
        "bound": low + bound,
        "holds": square_z <= low + tail <= low + bound,
    }

    def hypothesis(name, holds, detail):
        rep.hypotheses.append({"name": name, "holds": holds, "detail": detail})

    A, gap = discrepancy_witness(mu, max_support)
    hypothesis("mu*mu = mu", False, f"{format_set(A)} has mass {format_rational(mu_of(A))} "
               f"under mu but {format_rational(mu_of(A) - gap)} under mu*mu")
    hypothesis("mu(S_1) = mu(I) = 0", levels.get(1, 0) == 0,
               f"mu(S_1) = {format_rational(levels.get(1, Fraction(0)))}")
    hypothesis("mu(S_k) = 0 for every k", False,
               f"mu(S_{top}) = {format_rational(levels[top])}")
    bad = [k for k in range(depth + 1) if mu_of(T(k)) != (1 - r) ** k]
    hypothesis(f"mu(T_k) = (1 - r)^k for k <= {depth}", not bad,
               "holds" if not bad else f"fails first at k = {bad[0]}")
    if r > 0:
        m = 1
        while not (1 - r) ** m < r:
            m += 1
        hypothesis("r <= (1 - r)^n at the first n with (1 - r)^n < r", False,
                   f"n = {m}: (1 - r)^n = {format_rational((1 - r) ** m)} < r = {format_rational(r)}; "
                   f"mu(T_n) = {format_rational(mu_of(T(m)))}")
    else:
        # with r = 0 an idempotent would give every section {t : s*t in Z} full mass
        sections = {format_rational(mu_of(T(s.size))) for s in mu}
        hypothesis("mu(T_#(s)) = 1 for s in supp(mu)", sections == {"1/1"},
                   f"section masses {sorted(sections)}; (mu*mu)(Z) = {format_rational(square_z)}")
    rep.discrepancy = {"set": A, "gap": gap, "mu": mu_of(A), "square": mu_of(A) - gap}
    return rep
