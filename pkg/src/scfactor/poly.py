"""Polynomials over a coefficient ring, plus common-unit-root search.

Coefficients are stored ascending (coeffs[i] multiplies x^i) with no trailing
zeros; the zero polynomial has an empty tuple. Division, gcd, and deflation
assume a commutative ring and raise NoncommutativeRing otherwise.

unit_roots(P, Q) finds the common roots of P and Q that are units, reporting
the method used and whether the search was exhaustive:

* finite residue rings: direct scan over the units ("exhaustive-units")
* exact fields (rationals, Gaussian rationals): monic gcd, then either read
  off a degree-1 gcd ("field-gcd") or run a rational/Gaussian-integer
  candidate search over the gcd ("rational-root")
* float complex: Durand-Kerner on P and on Q, then match the root sets
  ("numeric", not exhaustive)
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NoncommutativeRing, NotAValidRoot, ParseError
from .rings import El, FloatComplex, GaussianRationals, IntegersMod, Rationals, Ring


class Poly:
    """A polynomial with coefficients in one ring, ascending order."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: Ring, coeffs):
        cs = [ring.el(c) for c in coeffs]
        while cs and cs[-1].is_zero:
            cs.pop()
        self.ring = ring
        self.coeffs = tuple(cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> El:
        if self.is_zero:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, i: int) -> El:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self.ring.zero

    def __call__(self, x: El) -> El:
        """Horner evaluation (left-multiplying coefficients)."""
        x = self.ring.el(x)
        acc = self.ring.zero
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if not isinstance(other, Poly) or other.ring != self.ring:
            return NotImplemented
        if len(self.coeffs) != len(other.coeffs):
            return False
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((self.ring, self.coeffs))

    def __add__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.ring, [self.coeff(i) + other.coeff(i) for i in range(n)])

    def __sub__(self, other):
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.ring, [self.coeff(i) - other.coeff(i) for i in range(n)])

    def __neg__(self):
        return Poly(self.ring, [-c for c in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, El):
            return Poly(self.ring, [c * other for c in self.coeffs])
        if self.is_zero or other.is_zero:
            return Poly(self.ring, [])
        out = [self.ring.zero] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(self.ring, out)

    def scale(self, s: El) -> "Poly":
        return Poly(self.ring, [s * c for c in self.coeffs])

    def monic(self) -> "Poly":
        if self.is_zero:
            return self
        lead = self.leading
        if lead == self.ring.one:
            return self
        return self.scale(lead.inverse())

    def derivative(self) -> "Poly":
        return Poly(self.ring, [self.coeffs[i] * self.ring.from_int(i)
                                for i in range(1, len(self.coeffs))])

    def shift_mul_x(self, s: int) -> "Poly":
        """Multiply by x^s."""
        if self.is_zero:
            return self
        return Poly(self.ring, [self.ring.zero] * s + list(self.coeffs))

    def low_zero_count(self) -> int:
        """Number of leading zero coefficients from x^0 up (x^s | P)."""
        s = 0
        while s < len(self.coeffs) and self.coeffs[s].is_zero:
            s += 1
        return s

    def fmt(self, var: str = "x") -> str:
        if self.is_zero:
            return "0"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeff(i)
            if c.is_zero:
                continue
            if i == 0:
                term = str(c)
            else:
                xs = var if i == 1 else f"{var}^{i}"
                if c == self.ring.one:
                    term = xs
                elif c == -self.ring.one:
                    term = f"-{xs}"
                else:
                    cs = str(c)
                    if "+" in cs[1:] or "-" in cs[1:]:
                        cs = f"({cs})"
                    term = f"{cs}*{xs}"
            if parts and not term.startswith("-"):
                parts.append("+ " + term)
            elif parts:
                parts.append("- " + term[1:])
            else:
                parts.append(term)
        return " ".join(parts)

    def __repr__(self):
        return f"Poly({self.fmt()})"


def _require_commutative(ring: Ring, what: str):
    if not ring.commutative:
        raise NoncommutativeRing(f"{what} requires a commutative ring, got {ring}")


def divmod_poly(a: Poly, b: Poly) -> tuple[Poly, Poly]:
    """Long division a = q*b + r with deg r < deg b. Needs unit leading coeff."""
    _require_commutative(a.ring, "polynomial division")
    if b.is_zero:
        raise ZeroDivisionError("polynomial division by zero")
    if not b.leading.is_unit:
        raise ValueError("divisor leading coefficient must be a unit")
    ring = a.ring
    inv_lead = b.leading.inverse()
    rem = list(a.coeffs)
    q = [ring.zero] * max(0, len(rem) - len(b.coeffs) + 1)
    while len(rem) >= len(b.coeffs) and rem:
        k = len(rem) - len(b.coeffs)
        factor = rem[-1] * inv_lead
        if not factor.is_zero:
            q[k] = factor
            for i, bc in enumerate(b.coeffs):
                rem[k + i] = rem[k + i] - factor * bc
        rem.pop()
    return Poly(ring, q), Poly(ring, rem)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd via Euclid. Intended for fields; gcd(a, 0) is monic a."""
    _require_commutative(a.ring, "polynomial gcd")
    x, y = a, b
    while not y.is_zero:
        _, r = divmod_poly(x, y)
        x, y = y, r
    return x.monic() if not x.is_zero else x


def deflate(p: Poly, rho: El) -> Poly:
    """Divide p by (x - rho) via synthetic division.

    The remainder equals p(rho) and must vanish (ring equality, so a
    tolerance check for float rings); otherwise NotAValidRoot is raised.
    """
    if p.is_zero:
        raise NotAValidRoot("cannot deflate the zero polynomial")
    rho = p.ring.el(rho)
    out = [p.ring.zero] * p.degree
    acc = p.ring.zero
    for i in range(p.degree, 0, -1):
        acc = acc * rho + p.coeff(i)
        out[i - 1] = acc
    rem = acc * rho + p.coeff(0)
    if not rem.is_zero:
        raise NotAValidRoot(f"{p.ring.fmt(rho.v)} is not a root (remainder {rem})")
    return Poly(p.ring, out)


def _root_multiplicity(p: Poly, rho: El, cap: int | None = None) -> int:
    """How many times (x - rho) divides p, by repeated deflation."""
    count = 0
    cur = p
    while not cur.is_zero and cur(rho).is_zero:
        cur = deflate(cur, rho)
        count += 1
        if cap is not None and count >= cap:
            break
    return count


@dataclass
class RootReport:
    """Common unit roots of a (P, Q) pair, with provenance.

    roots holds (root, multiplicity) pairs in the ring's canonical order.
    ``exhaustive`` is True when absence from the list proves absence of a
    root; numeric (float) searches never claim that.
    """

    roots: list[tuple[El, int]]
    method: str
    exhaustive: bool
    notes: list[str] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return bool(self.roots)

    def describe(self) -> str:
        if not self.roots:
            body = "none"
        else:
            body = ", ".join(
                str(r) if m == 1 else f"{r} (multiplicity {m})" for r, m in self.roots
            )
        tail = "exhaustive" if self.exhaustive else "not exhaustive"
        return f"common unit roots: {body} [method {self.method}, {tail}]"


def _finite_unit_roots(P: Poly, Q: Poly, ring: IntegersMod) -> RootReport:
    roots = []
    notes = []
    for u in ring.units():
        if not P(u).is_zero:
            continue
        if not Q.is_zero and not Q(u).is_zero:
            continue
        if ring.is_prime:
            mp = _root_multiplicity(P, u)
            mult = mp if Q.is_zero else min(mp, _root_multiplicity(Q, u))
        else:
            mult = 1
        roots.append((u, mult))
    if not ring.is_prime and roots:
        notes.append("composite modulus: multiplicities reported as 1")
    return RootReport(roots, "exhaustive-units", True, notes)


def _int_divisors(n: int) -> list[int]:
    n = abs(n)
    out = set()
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            out.add(d)
            out.add(n // d)
    return sorted(out)


def _rational_root_candidates(g: Poly) -> list[Fraction]:
    """Candidate nonzero rational roots of g by the rational root theorem."""
    ring = g.ring
    den_lcm = 1
    for c in g.coeffs:
        den_lcm = den_lcm * c.v.denominator // math.gcd(den_lcm, c.v.denominator)
    ints = [int(c.v * den_lcm) for c in g.coeffs]
    s = 0
    while s < len(ints) and ints[s] == 0:
        s += 1
    ints = ints[s:]
    if not ints:
        return []
    a0, lead = ints[0], ints[-1]
    cands = set()
    for p in _int_divisors(a0):
        for q in _int_divisors(lead):
            cands.add(Fraction(p, q))
            cands.add(Fraction(-p, q))
    return sorted(cands)


def _gaussian_int_divisor_candidates(z: tuple[int, int]) -> list[tuple[int, int]]:
    """All Gaussian integers d with d | z (z != 0), via norm divisors."""
    nz = z[0] * z[0] + z[1] * z[1]
    out = []
    for nd in _int_divisors(nz):
        for x in range(0, math.isqrt(nd) + 1):
            y2 = nd - x * x
            y = math.isqrt(y2)
            if y * y != y2:
                continue
            for cand in {(x, y), (x, -y), (y, x), (-y, x)}:
                if cand == (0, 0):
                    continue
                # check cand | z exactly: z * conj(cand) / norm(cand) integral
                re = z[0] * cand[0] + z[1] * cand[1]
                im = z[1] * cand[0] - z[0] * cand[1]
                if re % nd == 0 and im % nd == 0:
                    out.append(cand)
    return out


def _gaussian_root_candidates(g: Poly) -> list[tuple[Fraction, Fraction]]:
    """Candidate nonzero roots in Q(i) via the Z[i] analogue of the rational
    root theorem (Z[i] is a Euclidean domain, so the argument carries over)."""
    den_lcm = 1
    for c in g.coeffs:
        for part in c.v:
            den_lcm = den_lcm * part.denominator // math.gcd(den_lcm, part.denominator)
    zs = [(int(c.v[0] * den_lcm), int(c.v[1] * den_lcm)) for c in g.coeffs]
    s = 0
    while s < len(zs) and zs[s] == (0, 0):
        s += 1
    zs = zs[s:]
    if not zs:
        return []
    units = [(1, 0), (-1, 0), (0, 1), (0, -1)]
    num_div = _gaussian_int_divisor_candidates(zs[0])
    den_div = _gaussian_int_divisor_candidates(zs[-1])
    cands = set()
    for p in num_div:
        for q in den_div:
            nq = q[0] * q[0] + q[1] * q[1]
            base = (
                Fraction(p[0] * q[0] + p[1] * q[1], nq),
                Fraction(p[1] * q[0] - p[0] * q[1], nq),
            )
            for u in units:
                cands.add((base[0] * u[0] - base[1] * u[1], base[0] * u[1] + base[1] * u[0]))
    return sorted(cands)


def _exact_field_unit_roots(P: Poly, Q: Poly) -> RootReport:
    ring = P.ring
    g = poly_gcd(P, Q)
    if g.is_zero or g.degree == 0:
        return RootReport([], "field-gcd", True)
    s = g.low_zero_count()
    notes = []
    if s:
        g = Poly(ring, g.coeffs[s:])
        notes.append("dropped root 0 (not a unit)")
    if g.degree == 1:
        rho = -g.coeff(0) / g.coeff(1)
        if rho.is_zero:
            return RootReport([], "field-gcd", True, notes)
        return RootReport([(rho, _root_multiplicity(poly_gcd(P, Q), rho))],
                          "field-gcd", True, notes)
    if isinstance(ring, Rationals):
        cands = [ring.el(c) for c in _rational_root_candidates(g)]
    elif isinstance(ring, GaussianRationals):
        cands = [El(ring, c) for c in _gaussian_root_candidates(g)]
    else:
        raise ParseError(f"no exact root search implemented for {ring}")
    roots = []
    full = poly_gcd(P, Q)
    for rho in cands:
        if not g(rho).is_zero or rho.is_zero:
            continue
        roots.append((rho, _root_multiplicity(full, rho)))
    roots.sort(key=lambda rm: rm[0].sort_key())
    return RootReport(roots, "rational-root", True, notes)


def durand_kerner(coeffs: list[complex], max_iter: int = 200,
                  residual_tol: float = 1e-10) -> list[complex]:
    """All roots of a complex polynomial, coefficients ascending.

    Simultaneous iteration from the usual spiral start. Raises ValueError when
    the iteration does not reach the residual tolerance: callers treat that as
    "no reliable root set", never as "no roots".
    """
    cs = list(coeffs)
    while cs and abs(cs[-1]) == 0.0:
        cs.pop()
    n = len(cs) - 1
    if n < 1:
        return []
    lead = cs[-1]
    mon = [c / lead for c in cs]

    def val(z: complex) -> complex:
        acc = 0j
        for c in reversed(mon):
            acc = acc * z + c
        return acc

    bound = 1.0 + max(abs(c) for c in mon[:-1]) if n >= 1 else 1.0
    seed = 0.4 + 0.9j
    zs = [bound * seed ** k for k in range(1, n + 1)]
    for _ in range(max_iter):
        moved = 0.0
        for i in range(n):
            denom = 1.0 + 0j
            for j in range(n):
                if j != i:
                    denom *= zs[i] - zs[j]
            if denom == 0:
                denom = 1e-30
            step = val(zs[i]) / denom
            zs[i] -= step
            moved = max(moved, abs(step))
        if moved < 1e-14:
            break
    scale = max(1.0, max(abs(z) for z in zs)) ** n
    bad = [z for z in zs if abs(val(z)) > residual_tol * scale]
    if bad:
        raise ValueError(f"root iteration did not converge (worst residual at {bad[0]:.3g})")
    return zs


def _cluster(points: list[complex], tol: float) -> list[tuple[complex, int]]:
    """Group nearly equal points; returns (representative mean, count)."""
    groups: list[list[complex]] = []
    for z in sorted(points, key=lambda w: (w.real, w.imag)):
        for g in groups:
            if abs(z - g[0]) <= tol:
                g.append(z)
                break
        else:
            groups.append([z])
    return [(sum(g) / len(g), len(g)) for g in groups]


def _float_unit_roots(P: Poly, Q: Poly, ring: FloatComplex,
                      match_tol: float = 1e-8) -> RootReport:
    notes = []
    proots = _cluster(durand_kerner([c.v for c in P.coeffs]), match_tol)
    if Q.is_zero:
        common = proots
        notes.append("second polynomial is zero; using all roots of the first")
    else:
        qroots = _cluster(durand_kerner([c.v for c in Q.coeffs]), match_tol)
        common = []
        for zp, mp in proots:
            for zq, mq in qroots:
                if abs(zp - zq) <= match_tol:
                    common.append(((zp + zq) / 2, min(mp, mq)))
                    break
    roots = []
    for z, m in common:
        el = El(ring, z)
        if el.is_unit:
            roots.append((el, m))
    # Quantize the ordering key so residual solver noise (~1e-16) cannot
    # flip which root the greedy chain consumes first.
    roots.sort(key=lambda rm: (round(rm[0].v.real, 6), round(rm[0].v.imag, 6)))
    return RootReport(roots, "numeric", False, notes)


def unit_roots(P: Poly, Q: Poly) -> RootReport:
    """Common unit roots of P and Q (Q may be zero, meaning "no constraint")."""
    ring = P.ring
    if not ring.commutative:
        raise NoncommutativeRing("root search needs a commutative coefficient ring")
    if P.is_zero:
        raise ParseError("the first polynomial of a root search must be nonzero")
    if isinstance(ring, IntegersMod):
        return _finite_unit_roots(P, Q, ring)
    if isinstance(ring, (Rationals, GaussianRationals)):
        return _exact_field_unit_roots(P, Q)
    if isinstance(ring, FloatComplex):
        return _float_unit_roots(P, Q, ring)
    raise ParseError(f"no root search available over {ring}")


def verified_roots(P: Poly, Q: Poly, claimed: list[El]) -> RootReport:
    """Validate user-supplied roots by evaluation; multiplicity from repetition."""
    counts: list[tuple[El, int]] = []
    for rho in claimed:
        rho = P.ring.el(rho)
        if not rho.is_unit:
            raise NotAValidRoot(f"claimed root {rho} is not a unit")
        if not P(rho).is_zero:
            raise NotAValidRoot(f"claimed root {rho} does not annihilate {P.fmt()}")
        if not Q.is_zero and not Q(rho).is_zero:
            raise NotAValidRoot(f"claimed root {rho} does not annihilate {Q.fmt()}")
        for i, (r, m) in enumerate(counts):
            if r == rho:
                counts[i] = (r, m + 1)
                break
        else:
            counts.append((rho, 1))
    return RootReport(counts, "user-supplied", False)
