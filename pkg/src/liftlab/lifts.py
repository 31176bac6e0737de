"""Enumeration and congruence classification of lifts.

A lift of a projective group is a subgroup of SL2(Z) projecting onto it.
Writing Gtilde for the full preimage (the lift containing -I), every
other lift is the kernel of a homomorphism Gtilde -> {1, -1} sending -I
to -1.  On the side-pairing generators of a Farey symbol the constraints
are rigid:

* an even generator g has g^2 = -I, so no such character exists and the
  full preimage is the only lift;
* an odd generator with trace -1 cubes to +I and is forced to sign +1
  (trace +1 would cube to -I and force -1);
* free generators carry arbitrary signs, giving 2^r characters.

A lift L is a congruence group exactly when it contains the principal
congruence subgroup of level 2N (N the level of the projective group),
which happens exactly when its image H mod 2N has index 2 in the image
Gtilde mod 2N.  Since [Gtilde : L] = 2 the image order can only be
|Gtilde mod 2N| or half of it; that dichotomy is the certificate.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from . import counting, engine
from .matrices import MINUS_IDENTITY, IntegerMatrix
from .presentation import GeneratorSet, _coset_key_fn, generator_set, \
    index_formula, proj_member

DEFAULT_ENUMERATION_CAP = 512


@dataclass(frozen=True)
class SignCharacter:
    """A sign assignment to the generators of the full preimage.

    `free_signs` lists one sign per free generator, in generator order;
    the full preimage itself is carried as the marker with
    `is_full_preimage` set (it is not the kernel of any character).
    """

    generators: GeneratorSet
    free_signs: tuple[int, ...] | None
    is_full_preimage: bool = False

    def __post_init__(self):
        if self.is_full_preimage:
            if self.free_signs is not None:
                raise ValueError("the full preimage carries no sign vector")
            return
        free = self.generators.by_type("free")
        if self.free_signs is None or len(self.free_signs) != len(free):
            raise ValueError(
                f"expected {len(free)} free signs, got {self.free_signs}")
        if any(s not in (1, -1) for s in self.free_signs):
            raise ValueError("signs must be +1 or -1")

    def signed_generators(self) -> tuple[tuple[IntegerMatrix, int], ...]:
        """(matrix, sign) pairs for every generator; odd signs are forced."""
        if self.is_full_preimage:
            raise ValueError("the full preimage has no character")
        out = []
        free_iter = iter(self.free_signs)
        for m, kind in self.generators.entries:
            if kind == "even":
                raise ValueError("even torsion admits no character")
            if kind == "odd":
                # trace -1 cubes to +I, trace +1 cubes to -I
                out.append((m, 1 if m.trace == -1 else -1))
            else:
                out.append((m, next(free_iter)))
        return tuple(out)


def enumerate_lifts(generators: GeneratorSet) -> list[SignCharacter]:
    """All lifts of the projective group, full preimage first.

    With even torsion present the full preimage is the only lift; without
    it the 2^r sign vectors on the free generators follow in
    lexicographic order (+1 before -1).
    """
    lifts = [SignCharacter(generators, None, is_full_preimage=True)]
    if generators.e2 > 0:
        return lifts
    for signs in itertools.product((1, -1), repeat=generators.rank):
        lifts.append(SignCharacter(generators, signs))
    return lifts


def lift_generators(character: SignCharacter,
                    transversal: str = "first") -> tuple[IntegerMatrix, ...]:
    """Generators of the index-2 kernel of a sign character.

    Schreier generators over the two cosets {kernel, w*kernel}, where the
    transversal element w is the first free generator of sign -1 (or the
    last, for cross-checking) and -I when every sign is +1.  For each
    generator x of the full preimage, including -I:

        sign +1:  emit x and w*x*w^(-1)
        sign -1:  emit x*w^(-1) and w*x

    Identity, duplicates and inverse duplicates are dropped.
    """
    if character.is_full_preimage:
        raise ValueError("the full preimage is generated by the presentation "
                         "generators together with -I; no kernel to take")
    if transversal not in ("first", "last"):
        raise ValueError(f"transversal must be 'first' or 'last', got {transversal!r}")
    signed = list(character.signed_generators())
    negatives = [m for m, sign in signed if sign == -1]
    if negatives:
        w = negatives[0] if transversal == "first" else negatives[-1]
    else:
        w = MINUS_IDENTITY
    w_inv = w.inverse()
    out: list[IntegerMatrix] = []
    seen: set[tuple] = set()

    def emit(m: IntegerMatrix) -> None:
        key = m.entries()
        if m == IntegerMatrix(1, 0, 0, 1):
            return
        if key in seen or m.inverse().entries() in seen:
            return
        seen.add(key)
        out.append(m)

    for x, sign in signed + [(MINUS_IDENTITY, -1)]:
        if sign == 1:
            emit(x)
            emit(w * x * w_inv)
        else:
            emit(x * w_inv)
            emit(w * x)
    return tuple(out)


@dataclass(frozen=True)
class LiftCertificate:
    """Orders behind the congruence dichotomy, auditable after the fact."""

    image_order: int
    full_image_order: int
    modulus: int

    def to_dict(self) -> dict:
        return {"image_order": self.image_order,
                "full_image_order": self.full_image_order,
                "modulus": self.modulus}

    @classmethod
    def from_dict(cls, data: dict) -> "LiftCertificate":
        return cls(data["image_order"], data["full_image_order"],
                   data["modulus"])


@dataclass(frozen=True)
class LiftDescriptor:
    """One lift: its character, kernel generators, and classification."""

    family: str
    level: int
    character: SignCharacter | None
    generators: tuple[IntegerMatrix, ...]
    classification: str
    certificate: LiftCertificate

    @property
    def is_full_preimage(self) -> bool:
        return self.character is not None and self.character.is_full_preimage

    def to_dict(self) -> dict:
        if self.character is None:
            free_signs = None
        elif self.character.is_full_preimage:
            free_signs = "full"
        else:
            free_signs = list(self.character.free_signs)
        return {
            "kind": self.family,
            "N": self.level,
            "character": {"free_signs": free_signs},
            "generators": [list(m.entries()) for m in self.generators],
            "classification": self.classification,
            "certificate": self.certificate.to_dict(),
        }


def full_image(family: str, level: int,
               max_modulus: int | None = None) -> engine.ResidueMatrixGroup:
    """Image of the full preimage in SL2(Z/2N)."""
    group = engine.subgroup_by_membership(
        counting.engine_kind(family), level, 2 * level,
        max_modulus=max_modulus)
    return engine.adjoin_minus_identity(group)


def classify_lift(character: SignCharacter, family: str, level: int,
                  max_modulus: int | None = None,
                  transversal: str = "first") -> LiftDescriptor:
    """Classify one lift by the order of its image mod 2N."""
    n = 2 * level
    ambient = full_image(family, level, max_modulus=max_modulus)
    if character.is_full_preimage:
        gens = character.generators.matrices() + (MINUS_IDENTITY,)
        image = engine.closure([m.reduce(n).key() for m in gens], n)
        if image.order != ambient.order:
            raise AssertionError(
                f"presentation generators only reach {image.order} of "
                f"{ambient.order} elements mod {n}")
        cert = LiftCertificate(image.order, ambient.order, n)
        classification = "congruence"
        return LiftDescriptor(family, level, character, tuple(gens),
                              classification, cert)
    gens = lift_generators(character, transversal=transversal)
    # An image containing -I is stable under negation, so it is all of
    # the full image and the closure can stop the moment -I turns up.
    has_minus, order = engine.closure_contains(
        [m.reduce(n).key() for m in gens], n,
        engine.minus_identity(n))
    if has_minus:
        cert = LiftCertificate(ambient.order, ambient.order, n)
        classification = "noncongruence"
    elif 2 * order == ambient.order:
        cert = LiftCertificate(order, ambient.order, n)
        classification = "congruence"
    else:
        raise AssertionError(
            f"image order {order} breaks the dichotomy against "
            f"{ambient.order} mod {n}")
    return LiftDescriptor(family, level, character, tuple(gens),
                          classification, cert)


def is_congruence(character: SignCharacter, family: str, level: int,
                  max_modulus: int | None = None) -> bool:
    return classify_lift(character, family, level,
                         max_modulus=max_modulus).classification == "congruence"


@dataclass(frozen=True)
class ClassificationReport:
    """Totals (and optionally per-lift detail) for one (family, level).

    mode is "enumerated" when every lift was classified individually, or
    "counted" when 2^r exceeded the enumeration cap and the congruence
    total came from the closed-form count instead.
    """

    family: str
    level: int
    total: int
    congruence: int
    noncongruence: int
    mode: str
    descriptors: tuple[LiftDescriptor, ...] | None = None
    witness: LiftDescriptor | None = None

    @property
    def all_congruence(self) -> bool:
        return self.noncongruence == 0

    def to_dict(self) -> dict:
        return {
            "kind": self.family,
            "N": self.level,
            "total_lifts": self.total,
            "congruence": self.congruence,
            "noncongruence": self.noncongruence,
            "mode": self.mode,
            "witness": None if self.witness is None else self.witness.to_dict(),
        }


@lru_cache(maxsize=None)
def _classify_all_cached(family: str, level: int, enumeration_cap: int,
                         max_modulus: int | None) -> ClassificationReport:
    generators = generator_set(family, level)
    if generators.e2 == 0 and 2 ** generators.rank > enumeration_cap:
        formula = counting.count_congruence_lifts_formula(family, level)
        total = 1 + 2 ** generators.rank
        return ClassificationReport(
            family, level, total, formula.count, total - formula.count,
            "counted")
    descriptors = []
    witness = None
    for character in enumerate_lifts(generators):
        descriptor = classify_lift(character, family, level,
                                   max_modulus=max_modulus)
        descriptors.append(descriptor)
        if witness is None and descriptor.classification == "noncongruence":
            witness = descriptor
    congruence = sum(1 for d in descriptors
                     if d.classification == "congruence")
    return ClassificationReport(
        family, level, len(descriptors), congruence,
        len(descriptors) - congruence, "enumerated", tuple(descriptors),
        witness)


def classify_all(family: str, level: int,
                 enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
                 max_modulus: int | None = None) -> ClassificationReport:
    """Classify every lift, falling back to counting when 2^r is too big."""
    if level < 1:
        raise ValueError(f"level must be positive, got {level}")
    return _classify_all_cached(family, level, enumeration_cap, max_modulus)


def find_witness(family: str, level: int,
                 enumeration_cap: int = DEFAULT_ENUMERATION_CAP,
                 max_modulus: int | None = None) -> LiftDescriptor:
    """First noncongruence lift in enumeration order, or a structured error."""
    if family == "gamma0":
        exists = not counting.all_lifts_congruence_gamma0(level)
    elif family == "gamma1":
        exists = not counting.all_lifts_congruence_gamma1(level)
    else:
        raise ValueError(
            f"witness construction supports gamma0 and gamma1, not {family!r}")
    if not exists:
        raise LookupError(
            f"every lift of {family}({level}) is a congruence group")
    report = classify_all(family, level, enumeration_cap=enumeration_cap,
                          max_modulus=max_modulus)
    if report.witness is not None:
        return report.witness
    if report.mode == "enumerated":
        # Exhaustive enumeration certified every lift congruence, so the
        # closed-form predicate over-promised for this level.
        raise LookupError(
            f"every lift of {family}({level}) is a congruence group by "
            f"exhaustive enumeration, although the closed-form predicate "
            f"expects a noncongruence one")
    for parent in _propagation_parents(family, level):
        try:
            parent_witness = find_witness(*parent,
                                          enumeration_cap=enumeration_cap,
                                          max_modulus=max_modulus)
        except (LookupError, engine.ModulusCapExceeded):
            continue
        return propagate_witness(parent_witness, family, level,
                                 max_modulus=max_modulus)
    raise LookupError(
        f"no witness for {family}({level}) within the enumeration cap "
        f"{enumeration_cap}; raise it or use propagation explicitly")


def _propagation_parents(family: str, level: int) -> list[tuple[str, int]]:
    """Smaller groups whose noncongruence lifts pull back to this one."""
    parents = []
    for m in range(1, level):
        if level % m == 0:
            parents.append(("gamma0", m))
            if family == "gamma1":
                parents.append(("gamma1", m))
    parents.sort(key=lambda p: -p[1])
    return parents


def propagate_witness(parent: LiftDescriptor, family: str, level: int,
                      max_modulus: int | None = None) -> LiftDescriptor:
    """Pull a noncongruence witness back to a subgroup family.

    The preimage of the smaller projective group inside a noncongruence
    lift is itself a noncongruence lift (were it to contain a principal
    congruence subgroup, so would the parent lift).  Its generators come
    from the Schreier construction over the finitely many cosets, using
    the parent lift's generators as the ambient generating set.
    """
    if parent.classification != "noncongruence":
        raise ValueError("can only propagate a noncongruence witness")
    if level % parent.level != 0:
        raise ValueError(
            f"level {level} is not a multiple of the parent level "
            f"{parent.level}")
    if parent.family == "gamma1" and family != "gamma1":
        raise ValueError(
            f"{family}({level}) does not embed in gamma1({parent.level})")
    subindex = index_formula(family, level) // index_formula(
        parent.family, parent.level)
    key = _coset_key_fn(family, level)
    ambient = parent.generators
    reps: list[IntegerMatrix] = [IntegerMatrix(1, 0, 0, 1)]
    index_of = {key(reps[0]): 0}
    queue = [0]
    edges: dict[tuple[int, int], int] = {}
    while queue:
        i = queue.pop()
        for g_pos, g in enumerate(ambient):
            image = reps[i] * g
            k = key(image)
            j = index_of.get(k)
            if j is None:
                j = len(reps)
                index_of[k] = j
                reps.append(image)
                queue.append(j)
            edges[(i, g_pos)] = j
    if len(reps) != subindex:
        raise AssertionError(
            f"coset walk found {len(reps)} cosets, expected {subindex}")
    out: list[IntegerMatrix] = []
    seen: set[tuple] = set()
    for (i, g_pos), j in sorted(edges.items()):
        schreier = reps[i] * ambient[g_pos] * reps[j].inverse()
        if schreier == IntegerMatrix(1, 0, 0, 1):
            continue
        if schreier.entries() in seen or schreier.inverse().entries() in seen:
            continue
        if not proj_member(family, level, schreier):
            raise AssertionError("Schreier generator escapes the subgroup")
        seen.add(schreier.entries())
        out.append(schreier)
    n = 2 * level
    ambient_image = full_image(family, level, max_modulus=max_modulus)
    image = engine.closure([m.reduce(n).key() for m in out], n)
    cert = LiftCertificate(image.order, ambient_image.order, n)
    if image.order != ambient_image.order:
        raise AssertionError(
            f"propagated lift image has order {image.order}, expected the "
            f"full {ambient_image.order} mod {n}")
    return LiftDescriptor(family, level, None, tuple(out),
                          "noncongruence", cert)
