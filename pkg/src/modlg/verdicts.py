"""Local-global surjectivity checkers for GL2, the product family Delta, and GSp.

Each checker decides whether a subgroup G of the target over Z/mZ is the
whole target using only data modulo each prime ell | m plus the image of
the determinant (or similitude) character. G mod m is never enumerated.
"""

import enum
from dataclasses import dataclass, field
from math import gcd

from .families import GroupFamily, family_order, is_member, similitude_factor, standard_generators
from .modular import det_and_trace, diagonal_block, euler_phi, power_image, unit_subgroup


class Status(enum.Enum):
    SURJECTIVE = "Surjective"
    NOT_SURJECTIVE = "NotSurjective"
    PRECONDITION_VIOLATED = "PreconditionViolated"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class PrimeReport:
    sl_part_ok: bool
    detail: str = ""


@dataclass(frozen=True)
class SurjectivityVerdict:
    status: Status
    per_prime: dict = field(default_factory=dict)
    det_image_index: int = 1
    witness: object = None
    condition: str = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.status is Status.PRECONDITION_VIOLATED and not self.condition:
            raise ValueError("a precondition verdict must name its condition")
        if self.status is not Status.PRECONDITION_VIOLATED:
            local_ok = all(p.sl_part_ok for p in self.per_prime.values())
            if (self.status is Status.SURJECTIVE) != (local_ok and self.det_image_index == 1):
                raise ValueError("status disagrees with per-prime data and determinant index")

    @classmethod
    def precondition(cls, condition):
        return cls(Status.PRECONDITION_VIOLATED, condition=condition)

    @property
    def surjective(self):
        return self.status is Status.SURJECTIVE

    def to_dict(self):
        witness = self.witness
        if hasattr(witness, "rows"):
            witness = {"modulus": witness.m, "matrix": witness.rows()}
        out = {
            "status": self.status.value,
            "per_prime": {
                str(ell): {"sl_part_ok": p.sl_part_ok, "detail": p.detail} for ell, p in sorted(self.per_prime.items())
            },
            "det_image_index": self.det_image_index,
            "witness": witness,
        }
        if self.condition:
            out["condition"] = self.condition
        if self.extra:
            out["extra"] = self.extra
        return out


def _assemble(per_prime, index, witness, extra=None):
    ok = all(p.sl_part_ok for p in per_prime.values()) and index == 1
    status = Status.SURJECTIVE if ok else Status.NOT_SURJECTIVE
    if ok:
        witness = None
    elif witness is None and index != 1:
        witness = f"determinant image has index {index}"
    return SurjectivityVerdict(status, per_prime, index, witness, extra=extra or {})


def _local_containment(G, fam_for, label):
    """Per-prime test that G mod ell contains the family; returns reports and
    the first missing generator as a witness."""
    per_prime = {}
    witness = None
    for ell in G.modulus.primes:
        local = G.project(ell)
        missing = [A for A in standard_generators(fam_for(ell), ell) if not local.contains(A)]
        ok = not missing
        detail = f"{label}(F_{ell}) contained mod {ell}" if ok else f"{label}(F_{ell}) not contained mod {ell}"
        per_prime[ell] = PrimeReport(ok, detail)
        if missing and witness is None:
            witness = missing[0]
    return per_prime, witness


def check_surjectivity_gl2(G, required_det=None):
    """Decide G = {A in GL2(Z/mZ) : det A in R}, R the full unit group or the
    (k-1)-th powers for required_det = DetPower(2, k)."""
    if G.n != 2:
        return SurjectivityVerdict.precondition("degree 2")
    m = G.m
    if gcd(m, 30) != 1:
        return SurjectivityVerdict.precondition("m coprime to 30")
    if required_det is None or required_det.tag == "GL":
        required = set(unit_subgroup([u for u in range(1, m) if gcd(u, m) == 1], m))
    elif required_det.tag == "DetPower":
        required = set(power_image(m, required_det.k - 1))
    else:
        return SurjectivityVerdict.precondition("required determinant must be full or a power")
    dets = [det_and_trace(A)[0] for A in G.generators]
    if any(d not in required for d in dets):
        return SurjectivityVerdict.precondition("generators inside the target determinant group")
    index = len(required) // len(unit_subgroup(dets, m))
    per_prime, witness = _local_containment(G, lambda ell: GroupFamily.SL(2), "SL2")
    return _assemble(per_prime, index, witness)


ORDER_CERTIFICATE_LIMIT = 10**4


def check_delta_pair(G):
    """Decide G = Delta(m) for G inside the paired-block family."""
    if G.n != 4:
        return SurjectivityVerdict.precondition("degree 4")
    m = G.m
    if gcd(m, 30) != 1:
        return SurjectivityVerdict.precondition("m coprime to 30")
    delta = GroupFamily.Delta()
    if not all(is_member(delta, A) for A in G.generators):
        return SurjectivityVerdict.precondition("generators in Delta")
    per_prime = {}
    for ell in G.modulus.primes:
        got = G.project(ell).order()
        want = family_order(delta, ell)
        per_prime[ell] = PrimeReport(got == want, f"|G mod {ell}| = {got}, |Delta({ell})| = {want}")
    dets = [det_and_trace(diagonal_block(A, 0))[0] for A in G.generators]
    index = euler_phi(m) // len(unit_subgroup(dets, m))
    extra = {}
    if m <= ORDER_CERTIFICATE_LIMIT:
        extra = {"group_order": G.order(), "family_order": family_order(delta, m)}
    witness = None
    if index != 1:
        witness = f"determinant pairs fill only 1/{index} of the diagonal units"
    verdict = _assemble(per_prime, index, witness, extra)
    if extra and verdict.surjective != (extra["group_order"] == extra["family_order"]):
        raise AssertionError("local-global verdict disagrees with the order certificate")
    return verdict


def check_gsp(G, g):
    """Decide G = GSp_2g(Z/mZ) for g > 1 from local Sp containment and the
    similitude character."""
    if g < 2:
        return SurjectivityVerdict.precondition("g > 1 required")
    if G.n != 2 * g:
        return SurjectivityVerdict.precondition(f"degree {2 * g}")
    m = G.m
    if gcd(m, 30) != 1:
        return SurjectivityVerdict.precondition("m coprime to 30")
    lams = [similitude_factor(A) for A in G.generators]
    if any(lam is None or gcd(lam, m) != 1 for lam in lams):
        return SurjectivityVerdict.precondition("generators in GSp")
    index = euler_phi(m) // len(unit_subgroup(lams, m))
    per_prime, witness = _local_containment(G, lambda ell: GroupFamily.Sp(2 * g), f"Sp{2 * g}")
    return _assemble(per_prime, index, witness)
