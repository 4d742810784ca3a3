"""Prime-range scans: torsion classification, PORC evidence, POFS partitions,
and flat-file persistence (CSV / JSON)."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .aut import ceil_4_over_i, gl2_order


class ScanError(ValueError):
    pass


def sieve_primes(n: int) -> list[int]:
    """Primes <= n by a plain sieve."""
    if n < 2:
        return []
    mask = np.ones(n + 1, dtype=bool)
    mask[:2] = False
    for k in range(2, int(n**0.5) + 1):
        if mask[k]:
            mask[k * k :: k] = False
    return [int(x) for x in np.flatnonzero(mask)]


def _legendre(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def _quartic_roots(p: int, c4: int, c2: int, c0: int) -> np.ndarray:
    """Roots of c4 x^4 + c2 x^2 + c0 over F_p, vectorized scan."""
    a = np.arange(p, dtype=np.int64)
    a2 = a * a % p
    vals = (c4 * a2 % p * a2 + c2 * a2 + c0) % p
    return a[vals == 0]


def torsion3_count_fast(p: int, S: int) -> int:
    """|E_S[3](F_p)| via the quartic route (no point enumeration)."""
    S_inv = pow(S % p, p - 2, p)
    count = 1
    for a in _quartic_roots(p, 3 * S * S % p, (-6 * S) % p, p - 1):
        rhs = (int(a) ** 3 - S_inv * int(a)) % p
        if rhs == 0:
            raise AssertionError("quartic root collided with 2-torsion")
        if _legendre(rhs, p) == 1:
            count += 2
    return count


def reference_system_solvable(p: int) -> bool:
    """Does y^2 = x^3 - x, x^4 + 6x^2 - 3 = 0 have a solution over F_p?

    This is the S-independent quartic system whose solvability separates the
    9-torsion case from the 1-torsion case at p = 1 mod 12.
    """
    for a in _quartic_roots(p, 1, 6, -3):
        rhs = (int(a) ** 3 - int(a)) % p
        if _legendre(rhs, p) >= 0:
            return True
    return False


@dataclass
class PrimeRecord:
    p: int
    p_mod_12: int
    p_mod_4: int
    S: int
    sqrtS_exists: bool
    e: int
    m: int
    quartic_solvable_on_curve: bool
    n11: Optional[int] = None  # S = 1 only
    aut_factors: dict = field(default_factory=dict)  # i -> factor dict, when defined

    def aut_order(self, i: int) -> Optional[int]:
        fac = self.aut_factors.get(i)
        if fac is None:
            return None
        return fac["gcd_factor"] * fac["gl2"] * fac["q_pow18"] * fac["torsion"]

    def check_invariants(self):
        if self.e not in (1, 3, 9):
            raise ScanError(f"p={self.p}: e = {self.e} outside {{1,3,9}}")
        if self.e == 3 and self.p_mod_12 != 11:
            raise ScanError(f"p={self.p}: e = 3 but p != -1 mod 12")
        if self.e == 9 and self.p_mod_12 != 1:
            raise ScanError(f"p={self.p}: e = 9 but p != 1 mod 12")


def _descendants_from(p: int, m: int, e: int) -> int:
    numerator = p * p + p + 2 - m + e * (p - 5) + 5 * m * e
    if numerator % (m * e):
        raise ScanError(f"descendants formula non-integral at p = {p}")
    return numerator // (m * e)


@dataclass
class ScanResult:
    S: int
    records: list
    skipped: list  # (p, reason)


def classify_primes(S: int, p_max: int) -> ScanResult:
    """One record per prime 5 <= p <= p_max with p not dividing 2S.

    Skipped primes (2, 3, divisors of S) are returned with a reason rather
    than silently dropped. Automorphism factors are attached for each i when
    sqrt(S) exists in F_p (the order formula needs the fixed root).
    """
    if S == 0:
        raise ScanError("S must be nonzero")
    if p_max > 10**5:
        raise ScanError("p_max beyond desk scale (10^5)")
    records = []
    skipped = []
    for p in sieve_primes(p_max):
        if p in (2, 3):
            skipped.append((p, "characteristic divides 6"))
            continue
        if S % p == 0:
            skipped.append((p, "p divides S"))
            continue
        e = torsion3_count_fast(p, S)
        m = math.gcd(p - 1, 4)
        sqrt_exists = _legendre(S, p) == 1
        rec = PrimeRecord(
            p=p,
            p_mod_12=p % 12,
            p_mod_4=p % 4,
            S=S,
            sqrtS_exists=sqrt_exists,
            e=e,
            m=m,
            quartic_solvable_on_curve=reference_system_solvable(p),
            n11=_descendants_from(p, m, e) if S == 1 else None,
        )
        if sqrt_exists:
            for i in (1, 2, 3):
                rec.aut_factors[i] = {
                    "galois": 1,
                    "gcd_factor": math.gcd(p - 1, ceil_4_over_i(i)),
                    "gl2": gl2_order(p),
                    "q_pow18": p**18,
                    "torsion": e,
                }
        rec.check_invariants()
        records.append(rec)
    return ScanResult(S=S, records=records, skipped=skipped)


# -- PORC violation evidence ---------------------------------------------------


@dataclass
class PorcReport:
    S: int
    p_max: int
    mixed_classes: dict  # modulus -> {residue: sorted e values}

    @property
    def has_violations(self) -> bool:
        return any(self.mixed_classes.values())


def porc_violation_report(S: int, p_max: int, modulus_cap: int = 12) -> PorcReport:
    """Residue classes (mod M <= cap) containing primes with different e.

    A nonempty report for every modulus is empirical evidence that p -> e(p),
    and with it the automorphism order, is not constant on residue classes --
    the observable shadow of non-quasipolynomiality (a demonstration, not a
    proof).
    """
    scan = classify_primes(S, p_max)
    mixed = {}
    for M in range(1, modulus_cap + 1):
        classes: dict = {}
        for rec in scan.records:
            classes.setdefault(rec.p % M, set()).add(rec.e)
        mixed[M] = {
            r: sorted(es) for r, es in sorted(classes.items()) if len(es) > 1
        }
    return PorcReport(S=S, p_max=p_max, mixed_classes=mixed)


# -- POFS partition --------------------------------------------------------------


@dataclass
class PofsSet:
    label: str
    membership: str  # human-readable defining condition
    coefficient: int  # |Aut| = coefficient * (p^2-1)(p^2-p) p^18 on this set
    primes: list
    fits: bool


@dataclass
class PofsReport:
    S: int
    i: int
    sets: list
    all_fit: bool
    every_prime_covered: bool


def _pofs_key_S1(rec: PrimeRecord, i: int):
    """The Frobenius-set label of a prime for S = 1."""
    if rec.p_mod_12 == 1 and rec.quartic_solvable_on_curve:
        return "e9"
    if rec.p_mod_12 == 11:
        return "e3"
    if i == 1:
        return "e1m4" if rec.p_mod_4 == 1 else "e1m2"
    return "e1"


_S1_MEMBERSHIP = {
    "e9": "p = 1 mod 12 and the reference quartic system is solvable on the curve",
    "e3": "p = -1 mod 12",
    "e1m4": "p = 1 mod 4, quartic system not solvable",
    "e1m2": "p = 7 mod 12",
    "e1": "neither p = -1 mod 12 nor (p = 1 mod 12 with solvable system)",
}


def pofs_partition(S: int, p_max: int, i: int = 1) -> PofsReport:
    """Partition scanned primes into sets carrying one |Aut| polynomial each.

    For S = 1 the sets are the Frobenius sets cut out by (p mod 12, quartic
    solvability): 4 sets for i = 1 and 3 for i in {2,3}, with coefficients
    m*e. For other perfect squares S the partition is assembled empirically
    from the observed (e, m) pairs and labelled as such.
    """
    root = math.isqrt(abs(S))
    if root * root != abs(S) or S < 0:
        raise ScanError("POFS partition needs S to be a perfect square")
    scan = classify_primes(S, p_max)
    groups: dict = {}
    for rec in scan.records:
        if S == 1:
            key = _pofs_key_S1(rec, i)
            membership = _S1_MEMBERSHIP[key]
        else:
            mm = rec.m if i == 1 else 2
            key = f"empirical e={rec.e} m={mm}"
            membership = f"(observed) e = {rec.e}, gcd factor {mm}"
        groups.setdefault(key, (membership, []))[1].append(rec)
    sets = []
    covered = 0
    for key, (membership, recs) in sorted(groups.items()):
        gcd_eff = (lambda r: r.m) if i == 1 else (lambda r: 2)
        coef = gcd_eff(recs[0]) * recs[0].e
        fits = all(
            rec.aut_order(i) == coef * (rec.p**2 - 1) * (rec.p**2 - rec.p) * rec.p**18
            and gcd_eff(rec) * rec.e == coef
            for rec in recs
        )
        covered += len(recs)
        sets.append(
            PofsSet(
                label=key,
                membership=membership,
                coefficient=coef,
                primes=[r.p for r in recs],
                fits=fits,
            )
        )
    return PofsReport(
        S=S,
        i=i,
        sets=sets,
        all_fit=all(s.fits for s in sets),
        every_prime_covered=covered == len(scan.records),
    )


# -- persistence -------------------------------------------------------------------


CSV_COLUMNS = ["p", "pmod12", "S", "e", "m", "n11", "aut_i1", "aut_i2", "aut_i3"]


def record_to_dict(rec: PrimeRecord) -> dict:
    return {
        "p": rec.p,
        "p_mod_12": rec.p_mod_12,
        "p_mod_4": rec.p_mod_4,
        "S": rec.S,
        "sqrtS_exists": rec.sqrtS_exists,
        "e": rec.e,
        "m": rec.m,
        "quartic_solvable_on_curve": rec.quartic_solvable_on_curve,
        "n11": rec.n11,
        "aut_orders": {
            str(i): (str(rec.aut_order(i)) if rec.aut_order(i) is not None else None)
            for i in (1, 2, 3)
        },
    }


def record_from_dict(d: dict) -> PrimeRecord:
    rec = PrimeRecord(
        p=d["p"],
        p_mod_12=d["p_mod_12"],
        p_mod_4=d["p_mod_4"],
        S=d["S"],
        sqrtS_exists=d["sqrtS_exists"],
        e=d["e"],
        m=d["m"],
        quartic_solvable_on_curve=d["quartic_solvable_on_curve"],
        n11=d["n11"],
    )
    if d["aut_orders"]["1"] is not None:
        for i in (1, 2, 3):
            rec.aut_factors[i] = {
                "galois": 1,
                "gcd_factor": math.gcd(rec.p - 1, ceil_4_over_i(i)),
                "gl2": gl2_order(rec.p),
                "q_pow18": rec.p**18,
                "torsion": rec.e,
            }
    return rec


def emit(records: list, fmt: str) -> str:
    """Render records as a CSV or JSON document (byte-stable for fixed input)."""
    if fmt == "csv":
        lines = [",".join(CSV_COLUMNS)]
        for rec in records:
            lines.append(
                ",".join(
                    [
                        str(rec.p),
                        str(rec.p_mod_12),
                        str(rec.S),
                        str(rec.e),
                        str(rec.m),
                        "" if rec.n11 is None else str(rec.n11),
                        *(
                            ""
                            if rec.aut_order(i) is None
                            else str(rec.aut_order(i))
                            for i in (1, 2, 3)
                        ),
                    ]
                )
            )
        return "\n".join(lines) + "\n"
    if fmt == "json":
        return json.dumps([record_to_dict(r) for r in records], indent=1, sort_keys=True) + "\n"
    raise ScanError(f"unknown format {fmt!r}")


def write_records(records: list, path: str, fmt: str) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(emit(records, fmt))
    except OSError as exc:
        raise ScanError(f"cannot write {path}: {exc}") from exc


def parse_json_records(text: str) -> list:
    return [record_from_dict(d) for d in json.loads(text)]
