"""Polynomial arithmetic, deflation, and the unit-root searches."""

import pytest

from scfactor import NotAValidRoot, ParseError, Poly, deflate, durand_kerner, poly_gcd, unit_roots
from scfactor.errors import NoncommutativeRing
from scfactor.poly import verified_roots
from scfactor.rings import (FloatComplex, GaussianRationals, IntegersMod,
                            Rationals, RationalQuaternions)


def P(ring, *ascending):
    return Poly(ring, [ring.el(c) for c in ascending])


class TestPolyBasics:
    def test_trim_and_degree(self):
        R = Rationals()
        assert P(R, 1, 0, 0).degree == 0
        assert P(R).degree == -1
        assert P(R, 0, 0, 3).degree == 2

    def test_horner_eval(self):
        R = Rationals()
        p = P(R, "-1", "-2", 0, 1)   # x^3 - 2x - 1
        assert p(R.el(-1)) == R.zero
        assert p(R.el(2)) == R.el(3)

    def test_mul_and_divmod(self):
        from scfactor.poly import divmod_poly
        R = IntegersMod(7)
        a = P(R, 1, 1)       # x + 1
        b = P(R, "-1", "-1", 1)  # x^2 - x - 1
        q, r = divmod_poly(a * b, a)
        assert q == b and r.is_zero

    def test_derivative_char_collapse(self):
        R = IntegersMod(3)
        p = P(R, 0, 2, 0, 1)  # x^3 + 2x
        assert p.derivative() == P(R, 2)

    def test_fmt(self):
        R = Rationals()
        assert P(R, "-1", "-2", 0, 1).fmt() == "x^3 - 2*x - 1"
        assert P(R, "-1", 0, 1).fmt("L") == "L^2 - 1"

    def test_monic(self):
        R = Rationals()
        assert P(R, 2, 4).monic() == P(R, "1/2", 1)


class TestGcd:
    def test_frozen_pair(self):
        R = Rationals()
        g = poly_gcd(P(R, "-1", "-2", 0, 1), P(R, "-1", 0, 1))
        assert g == P(R, 1, 1)

    def test_gcd_with_zero(self):
        R = Rationals()
        g = poly_gcd(P(R, 2, 4), Poly(R, []))
        assert g == P(R, "1/2", 1)

    def test_coprime(self):
        R = IntegersMod(5)
        g = poly_gcd(P(R, 1, 1), P(R, 2, 1))
        assert g.degree == 0


class TestDeflate:
    def test_frozen(self):
        R = Rationals()
        out = deflate(P(R, "-1", "-2", 0, 1), R.el(-1))
        assert out == P(R, "-1", "-1", 1)

    def test_non_root_raises(self):
        R = Rationals()
        with pytest.raises(NotAValidRoot):
            deflate(P(R, "-1", "-2", 0, 1), R.el(2))

    def test_reconstruction(self):
        R = IntegersMod(11)
        p = P(R, 3, 1) * P(R, "-4", 1)
        out = deflate(p, R.el(4))
        assert out * P(R, "-4", 1) == p


class TestUnitRoots:
    def test_z26_contains_minus_one(self):
        R = IntegersMod(26)
        rr = unit_roots(P(R, "-1", "-2", 0, 1), P(R, "-1", 0, 1))
        assert (R.el(25), 1) in rr.roots
        assert rr.method == "exhaustive-units" and rr.exhaustive

    def test_z11_golden_pair(self):
        R = IntegersMod(11)
        Q = P(R, "-1", "-1", 1)
        PP = P(R, 1, 1) * Q
        rr = unit_roots(PP, Q)
        assert [(int(r.v), m) for r, m in rr.roots] == [(4, 1), (8, 1)]

    def test_z5_double_root(self):
        R = IntegersMod(5)
        Q = P(R, "-1", "-1", 1)
        PP = P(R, 1, 1) * Q
        rr = unit_roots(PP, Q)
        assert [(int(r.v), m) for r, m in rr.roots] == [(3, 2)]

    def test_composite_multiplicity_capped(self):
        R = IntegersMod(12)
        rr = unit_roots(P(R, "-1", "-2", 0, 1), P(R, "-1", 0, 1))
        assert (R.el(11), 1) in rr.roots
        assert any("composite" in n for n in rr.notes)

    def test_rational_root(self):
        R = Rationals()
        rr = unit_roots(P(R, "-1", "-2", 0, 1), P(R, "-1", 0, 1))
        assert [(str(r), m) for r, m in rr.roots] == [("-1", 1)]
        assert rr.exhaustive

    def test_rational_no_root(self):
        R = Rationals()
        rr = unit_roots(P(R, 1, 0, 1), P(R, 1, 0, 1))  # x^2 + 1 twice
        assert rr.roots == [] and rr.exhaustive

    def test_gaussian_pair(self):
        R = GaussianRationals()
        rr = unit_roots(P(R, 1, 0, 1), P(R, 0, 1, 0, 1))  # x^2+1, x^3+x
        assert sorted(str(r) for r, _ in rr.roots) == ["-i", "i"]

    def test_zero_root_dropped_with_note(self):
        R = Rationals()
        rr = unit_roots(P(R, 0, 0, 1), Poly(R, []))       # x^2, no constraint
        assert rr.roots == []
        assert any("0" in n for n in rr.notes)

    def test_float_conjugate_pair_ordering(self):
        R = FloatComplex()
        # P = x^3 - x^2 + x - 1 has roots 1, +-i; Q = x^2 + 1 keeps +-i.
        # -i must come first so greedy chain construction is deterministic.
        PP = P(R, "-1", "1", "-1", "1")
        QQ = P(R, "1", "0", "1")
        rr = unit_roots(PP, QQ)
        vals = [r.v for r, _ in rr.roots]
        assert len(vals) == 2
        assert abs(vals[0] - (-1j)) < 1e-8 and abs(vals[1] - 1j) < 1e-8
        assert rr.method == "numeric" and not rr.exhaustive

    def test_noncommutative_refused(self):
        R = RationalQuaternions()
        with pytest.raises(NoncommutativeRing):
            unit_roots(P(R, 1, 1), P(R, 1, 1))

    def test_zero_first_poly_rejected(self):
        R = Rationals()
        with pytest.raises(ParseError):
            unit_roots(Poly(R, []), P(R, 1, 1))


class TestDurandKerner:
    def test_cube_roots_of_unity(self):
        roots = durand_kerner([-1.0, 0.0, 0.0, 1.0])
        roots = sorted(roots, key=lambda z: (round(z.real, 6), round(z.imag, 6)))
        import cmath
        expect = sorted([1, cmath.exp(2j * cmath.pi / 3), cmath.exp(-2j * cmath.pi / 3)],
                        key=lambda z: (round(z.real, 6), round(z.imag, 6)))
        for got, want in zip(roots, expect):
            assert abs(got - want) < 1e-10

    def test_non_convergence_raises(self):
        with pytest.raises(ValueError):
            durand_kerner([1.0, 2.0, 3.0, 4.0, 5.0, 1.0], max_iter=1)


class TestVerifiedRoots:
    def test_good_claim(self):
        R = IntegersMod(11)
        Q = P(R, "-1", "-1", 1)
        PP = P(R, 1, 1) * Q
        rr = verified_roots(PP, Q, [R.el(4), R.el(8)])
        assert rr.method == "user-supplied"
        assert [(int(r.v), m) for r, m in rr.roots] == [(4, 1), (8, 1)]

    def test_repeated_claim_counts_multiplicity(self):
        R = IntegersMod(5)
        Q = P(R, "-1", "-1", 1)
        PP = P(R, 1, 1) * Q
        rr = verified_roots(PP, Q, [R.el(3), R.el(3)])
        assert [(int(r.v), m) for r, m in rr.roots] == [(3, 2)]

    def test_bad_claim(self):
        R = IntegersMod(11)
        Q = P(R, "-1", "-1", 1)
        PP = P(R, 1, 1) * Q
        with pytest.raises(NotAValidRoot):
            verified_roots(PP, Q, [R.el(5)])

    def test_non_unit_claim(self):
        R = IntegersMod(12)
        with pytest.raises(NotAValidRoot):
            verified_roots(P(R, 0, 1), Poly(R, []), [R.el(4)])
