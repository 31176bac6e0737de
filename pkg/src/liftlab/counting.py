"""Counting congruence lifts of the projective groups to SL2(Z).

Two independent routes produce the count of congruence subgroups of
SL2(Z) projecting onto a given projective congruence group:

* a closed-form piecewise formula in terms of the level's factorization
  N = 2^s * p1^s1 * ... * pt^st, and
* an engine route that builds G = Gamma/Gamma(2N) inside SL2(Z/2N),
  takes the quotient by the subgroup generated by squares, and reads the
  count off the dimension d and the position of -I:

      1             if -I lies in the squares subgroup,
      1 + 2^(d-1)   otherwise (taken in <G, -I> when -I is not in G).

The two routes share no code and are kept separate deliberately; their
agreement over a whole modulus range is the main acceptance check.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import engine
from .matrices import factorize

# The three supported families of projective groups.
FAMILIES = ("gamma0", "gamma1", "gamma")

_ENGINE_KIND = {"gamma0": "gamma0", "gamma1": "gamma1", "gamma": "gamma_full"}


def engine_kind(family: str) -> str:
    """Map a family name onto the engine's membership-kind vocabulary."""
    try:
        return _ENGINE_KIND[family]
    except KeyError:
        raise ValueError(
            f"unknown family {family!r}; expected one of {FAMILIES}")


@dataclass(frozen=True)
class LiftCountReport:
    """Count of congruence lifts for one (family, level) pair.

    `branch` names the formula case that fired ("s>=2", "N>2 even", ...)
    or the engine case; dim2 and the -I flags are filled on the engine
    route (for the group the trichotomy was evaluated on, i.e. <G, -I>
    when -I is not already in G).
    """

    family: str
    level: int
    count: int
    source: str
    branch: str
    dim2: int | None = None
    minus_one_in_group: bool | None = None
    minus_one_in_squares: bool | None = None

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "level": self.level,
            "count": self.count,
            "source": self.source,
            "branch": self.branch,
            "dim2": self.dim2,
            "minus_one_in_group": self.minus_one_in_group,
            "minus_one_in_squares": self.minus_one_in_squares,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "LiftCountReport":
        return cls(**data)


def _require_level(level: int) -> None:
    if level < 1:
        raise ValueError(f"level must be a positive integer, got {level}")


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    q = 2
    while q * q <= p:
        if p % q == 0:
            return False
        q += 1
    return True


def count_congruence_lifts_formula(family: str, level: int) -> LiftCountReport:
    """Closed-form count of congruence lifts. Exact big integers throughout."""
    _require_level(level)
    engine_kind(family)
    if family == "gamma0":
        profile = factorize(level)
        s, t = profile.s, profile.t
        if s <= 1 and all(p % 4 == 1 for p in profile.odd_primes()):
            count, branch = 1, "s<=1, all odd primes 1 mod 4"
        elif s <= 1:
            count, branch = 1 + 2 ** (s + t), "s<=1, some odd prime 3 mod 4"
        else:
            count, branch = 1 + 2 ** (min(3, s) + t), "s>=2"
    elif family == "gamma1":
        if level <= 2:
            count, branch = 1, "N<=2"
        elif level % 2 == 1:
            count, branch = 3, "N>2 odd"
        else:
            count, branch = 5, "N>2 even"
    else:
        if level == 1:
            count, branch = 1, "N=1"
        elif level == 2:
            count, branch = 5, "N=2"
        elif level % 2 == 1:
            count, branch = 3, "N>1 odd"
        else:
            count, branch = 9, "N>2 even"
    return LiftCountReport(family, level, count, "formula", branch)


def minus_one_in_family(family: str, level: int) -> bool:
    """Whether -I belongs to the congruence subgroup itself."""
    engine_kind(family)
    if family == "gamma0":
        return True
    return level <= 2


def count_congruence_lifts_engine(family: str, level: int,
                                  max_modulus: int | None = None) -> LiftCountReport:
    """Engine count: build Gamma/Gamma(2N) and apply the d/-I trichotomy."""
    _require_level(level)
    kind = engine_kind(family)
    n = 2 * level
    group = engine.subgroup_by_membership(kind, level, n,
                                          max_modulus=max_modulus)
    minus_in_gamma = engine.contains_minus_one(group)
    if not minus_in_gamma:
        group = engine.adjoin_minus_identity(group)
    quotient = engine.two_quotient(group)
    neg = engine.minus_identity(n)
    minus_in_squares = neg in quotient.squares.elements
    if minus_in_squares:
        count = 1
        branch = "-1 in squares subgroup"
    else:
        count = 1 + 2 ** (quotient.dim2 - 1)
        branch = ("-1 outside squares subgroup" if minus_in_gamma
                  else "-1 adjoined, outside squares subgroup")
    return LiftCountReport(
        family, level, count, "engine", branch,
        dim2=quotient.dim2,
        minus_one_in_group=minus_in_gamma,
        minus_one_in_squares=minus_in_squares,
    )


def count_codim1_avoiding(p: int, d: int, via: str = "formula") -> int:
    """Number of codimension-1 subspaces of F_p^d avoiding a fixed v != 0.

    The answer p^(d-1) does not depend on v.  The brute-force route
    enumerates hyperplanes as kernels of functionals normalized to have
    first nonzero coordinate 1, with v = e1; it is capped at p^d <= 2^16.
    """
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if not _is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if via == "formula":
        return p ** (d - 1)
    if via != "brute_force":
        raise ValueError(f"via must be 'formula' or 'brute_force', got {via!r}")
    if p ** d > 2 ** 16:
        raise ValueError(f"p^d = {p ** d} too large for enumeration")
    count = 0
    for index in range(p ** d):
        phi = []
        rest = index
        for _ in range(d):
            phi.append(rest % p)
            rest //= p
        nonzero = [i for i, x in enumerate(phi) if x]
        if not nonzero or phi[nonzero[0]] != 1:
            continue  # not the normalized representative of its scalar class
        if phi[0] % p != 0:  # phi(e1) != 0, so the kernel avoids e1
            count += 1
    return count


def all_lifts_congruence_gamma0(level: int) -> bool:
    """Whether every lift of the degree-0 projective group is congruence."""
    _require_level(level)
    if level in (3, 4, 8):
        return True
    profile = factorize(level)
    return profile.s <= 1 and all(p % 4 == 1 for p in profile.odd_primes())


def all_lifts_congruence_gamma1(level: int) -> bool:
    _require_level(level)
    return level <= 4


def gamma_full_has_noncongruence_lift(level: int) -> bool:
    """The principal family admits a noncongruence lift exactly for N > 2."""
    _require_level(level)
    return level > 2
