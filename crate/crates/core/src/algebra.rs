//! Exact degree-2 algebraic parameters.
//!
//! Circle/segment crossings happen at parameters that are roots of rational
//! quadratics. A [`Param`] is either a rational or a root token: the canonical
//! integer minimal polynomial together with a root side and a rational
//! isolating interval. Tokens compare exactly (bisection refinement, plus a
//! closed-form rational-vs-root test), and rational quadratics can be sign
//! evaluated at a token without ever leaving exact arithmetic.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize};

use crate::scalar::{Scalar, Sign};

/// Canonical integer quadratic `a t^2 + b t + c`: content 1, `a > 0`,
/// irreducible over the rationals (used only for irrational roots).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadPoly {
    a: BigInt,
    b: BigInt,
    c: BigInt,
}

impl QuadPoly {
    fn canonical(a: &Scalar, b: &Scalar, c: &Scalar) -> QuadPoly {
        let lcm = a.denom().lcm(&b.denom().lcm(c.denom()));
        let mut ia = a.numer() * (&lcm / a.denom());
        let mut ib = b.numer() * (&lcm / b.denom());
        let mut ic = c.numer() * (&lcm / c.denom());
        let content = ia.gcd(&ib).gcd(&ic);
        if !content.is_zero() {
            ia /= &content;
            ib /= &content;
            ic /= &content;
        }
        if ia.is_negative() {
            ia = -ia;
            ib = -ib;
            ic = -ic;
        }
        QuadPoly { a: ia, b: ib, c: ic }
    }

    pub fn coefficients(&self) -> (&BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.c)
    }

    fn eval(&self, x: &Scalar) -> Scalar {
        let a = Scalar::from_big(self.a.clone(), BigInt::one());
        let b = Scalar::from_big(self.b.clone(), BigInt::one());
        let c = Scalar::from_big(self.c.clone(), BigInt::one());
        &(&a * &x.square()) + &(&b * x) + c
    }

    fn vertex(&self) -> Scalar {
        Scalar::from_big(-self.b.clone(), &self.a * BigInt::from(2))
    }
}

impl fmt::Debug for QuadPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}t^2{:+}t{:+}", self.a, self.b, self.c)
    }
}

/// Which root of the quadratic a token denotes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RootSide {
    Lower,
    Upper,
}

/// The root of an irreducible integer quadratic, with a rational isolating
/// interval. Identity is the (polynomial, side) pair; the interval is only a
/// working enclosure.
#[derive(Clone)]
pub struct QuadRoot {
    poly: QuadPoly,
    side: RootSide,
    lo: Scalar,
    hi: Scalar,
}

impl PartialEq for QuadRoot {
    fn eq(&self, other: &Self) -> bool {
        self.poly == other.poly && self.side == other.side
    }
}

impl Eq for QuadRoot {}

impl std::hash::Hash for QuadRoot {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.poly.hash(state);
        self.side.hash(state);
    }
}

impl fmt::Debug for QuadRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "root[{:?}]({:?} in [{}, {}])",
            self.side, self.poly, self.lo, self.hi
        )
    }
}

impl QuadRoot {
    pub fn poly(&self) -> &QuadPoly {
        &self.poly
    }

    pub fn side(&self) -> RootSide {
        self.side
    }

    pub fn bracket(&self) -> (Scalar, Scalar) {
        (self.lo.clone(), self.hi.clone())
    }

    /// Exact comparison of the root against a rational. Never `Equal`:
    /// the polynomial is irreducible, so its roots are irrational.
    pub fn cmp_rat(&self, x: &Scalar) -> Ordering {
        let v = self.poly.eval(x);
        match v.sign() {
            Sign::Zero => unreachable!("irreducible quadratic has no rational root"),
            Sign::Neg => match self.side {
                // x lies strictly between the two roots
                RootSide::Lower => Ordering::Less,
                RootSide::Upper => Ordering::Greater,
            },
            Sign::Pos => {
                if *x < self.poly.vertex() {
                    Ordering::Greater
                } else {
                    Ordering::Less
                }
            }
        }
    }

    /// Bisect the enclosure until it is no wider than `width`.
    pub fn refined(&self, width: &Scalar) -> (Scalar, Scalar) {
        let mut lo = self.lo.clone();
        let mut hi = self.hi.clone();
        while &(&hi - &lo) > width {
            let mid = Scalar::midpoint(&lo, &hi);
            match self.cmp_rat(&mid) {
                Ordering::Less => hi = mid,
                Ordering::Greater => lo = mid,
                Ordering::Equal => unreachable!(),
            }
        }
        (lo, hi)
    }

    fn halved(&self) -> QuadRoot {
        let mid = Scalar::midpoint(&self.lo, &self.hi);
        let mut out = self.clone();
        match self.cmp_rat(&mid) {
            Ordering::Less => out.hi = mid,
            Ordering::Greater => out.lo = mid,
            Ordering::Equal => unreachable!(),
        }
        out
    }
}

/// Segment parameter: rational, or an exact quadratic root token.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Param {
    Rat(Scalar),
    Root(QuadRoot),
}

impl fmt::Debug for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Rat(x) => write!(f, "{}", x),
            Param::Root(r) => write!(f, "{:?}", r),
        }
    }
}

impl Param {
    pub fn zero() -> Param {
        Param::Rat(Scalar::zero())
    }

    pub fn one() -> Param {
        Param::Rat(Scalar::one())
    }

    pub fn rat(num: i64, den: i64) -> Param {
        Param::Rat(Scalar::ratio(num, den))
    }

    pub fn as_rational(&self) -> Option<&Scalar> {
        match self {
            Param::Rat(x) => Some(x),
            Param::Root(_) => None,
        }
    }

    /// Rational enclosure `[lo, hi]` (degenerate for rationals).
    pub fn bracket(&self) -> (Scalar, Scalar) {
        match self {
            Param::Rat(x) => (x.clone(), x.clone()),
            Param::Root(r) => r.bracket(),
        }
    }

    /// Rational enclosure of width at most `width`.
    pub fn refined_bracket(&self, width: &Scalar) -> (Scalar, Scalar) {
        match self {
            Param::Rat(x) => (x.clone(), x.clone()),
            Param::Root(r) => r.refined(width),
        }
    }

    /// Midpoint of the current enclosure (a rational approximation).
    pub fn approx(&self, width: &Scalar) -> Scalar {
        let (lo, hi) = self.refined_bracket(width);
        Scalar::midpoint(&lo, &hi)
    }
}

impl PartialOrd for Param {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Param {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Param::Rat(a), Param::Rat(b)) => a.cmp(b),
            (Param::Rat(x), Param::Root(r)) => r.cmp_rat(x).reverse(),
            (Param::Root(r), Param::Rat(x)) => r.cmp_rat(x),
            (Param::Root(r), Param::Root(s)) => {
                if r.poly == s.poly {
                    return r.side.cmp(&s.side);
                }
                // Distinct canonical irreducible quadratics have distinct
                // roots, so interval refinement separates them.
                let mut r = r.clone();
                let mut s = s.clone();
                loop {
                    if r.hi <= s.lo {
                        return Ordering::Less;
                    }
                    if s.hi <= r.lo {
                        return Ordering::Greater;
                    }
                    r = r.halved();
                    s = s.halved();
                }
            }
        }
    }
}

impl Serialize for Param {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        match self {
            Param::Rat(x) => x.serialize(ser),
            Param::Root(r) => {
                let mut st = ser.serialize_struct("Root", 3)?;
                let (a, b, c) = r.poly.coefficients();
                st.serialize_field(
                    "poly",
                    &[a.to_string(), b.to_string(), c.to_string()],
                )?;
                st.serialize_field("side", &r.side)?;
                st.serialize_field("iso", &[r.lo.clone(), r.hi.clone()])?;
                st.end()
            }
        }
    }
}

/// Solutions of a rational quadratic over the real line.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QuadSolutions {
    /// 0, 1 or 2 roots in ascending order (a double root appears once).
    Roots(Vec<Param>),
    /// The zero polynomial: every parameter solves it.
    AllOfLine,
}

/// Solve `a t^2 + b t + c = 0` exactly.
pub fn solve_quadratic(a: &Scalar, b: &Scalar, c: &Scalar) -> QuadSolutions {
    if a.is_zero() {
        if b.is_zero() {
            return if c.is_zero() {
                QuadSolutions::AllOfLine
            } else {
                QuadSolutions::Roots(vec![])
            };
        }
        return QuadSolutions::Roots(vec![Param::Rat(&(-c) / b)]);
    }
    let poly = QuadPoly::canonical(a, b, c);
    let (pa, pb, pc) = (poly.a.clone(), poly.b.clone(), poly.c.clone());
    let disc: BigInt = &pb * &pb - BigInt::from(4) * &pa * &pc;
    match disc.sign() {
        num_bigint::Sign::Minus => QuadSolutions::Roots(vec![]),
        num_bigint::Sign::NoSign => {
            QuadSolutions::Roots(vec![Param::Rat(poly.vertex())])
        }
        num_bigint::Sign::Plus => {
            let s = disc.sqrt();
            let two_a = pa * BigInt::from(2);
            let nb = -&pb;
            if &s * &s == disc {
                let r0 = Scalar::from_big(&nb - &s, two_a.clone());
                let r1 = Scalar::from_big(&nb + &s, two_a);
                return QuadSolutions::Roots(vec![Param::Rat(r0), Param::Rat(r1)]);
            }
            // sqrt(disc) lies strictly in (s, s+1)
            let s1 = &s + BigInt::one();
            let lower = QuadRoot {
                poly: poly.clone(),
                side: RootSide::Lower,
                lo: Scalar::from_big(&nb - &s1, two_a.clone()),
                hi: Scalar::from_big(&nb - &s, two_a.clone()),
            };
            let upper = QuadRoot {
                poly,
                side: RootSide::Upper,
                lo: Scalar::from_big(&nb + &s, two_a.clone()),
                hi: Scalar::from_big(&nb + &s1, two_a),
            };
            QuadSolutions::Roots(vec![Param::Root(lower), Param::Root(upper)])
        }
    }
}

/// Exact sign of `qa t^2 + qb t + qc` at a parameter.
pub fn quad_sign_at(qa: &Scalar, qb: &Scalar, qc: &Scalar, t: &Param) -> Sign {
    match t {
        Param::Rat(x) => (&(qa * &x.square()) + &(qb * x) + qc.clone()).sign(),
        Param::Root(r) => {
            // With A rho^2 + B rho + C = 0 and A > 0:
            // g(rho) = ((qb A - qa B) rho + (qc A - qa C)) / A
            let (pa, pb, pc) = r.poly.coefficients();
            let a = Scalar::from_big(pa.clone(), BigInt::one());
            let b = Scalar::from_big(pb.clone(), BigInt::one());
            let c = Scalar::from_big(pc.clone(), BigInt::one());
            let lam = &(qb * &a) - &(qa * &b);
            let mu = &(qc * &a) - &(qa * &c);
            if lam.is_zero() {
                return mu.sign();
            }
            let x0 = &(-&mu) / &lam;
            match (r.cmp_rat(&x0), lam.is_positive()) {
                (Ordering::Greater, true) | (Ordering::Less, false) => Sign::Pos,
                (Ordering::Less, true) | (Ordering::Greater, false) => Sign::Neg,
                (Ordering::Equal, _) => unreachable!("rational equals irrational root"),
            }
        }
    }
}

/// A rational strictly between two parameters (`lo < hi` required).
pub fn rational_between(lo: &Param, hi: &Param) -> Scalar {
    debug_assert!(lo < hi);
    let mut a = lo.clone();
    let mut b = hi.clone();
    loop {
        let (_, a_hi) = a.bracket();
        let (b_lo, _) = b.bracket();
        if a_hi < b_lo {
            return Scalar::midpoint(&a_hi, &b_lo);
        }
        // When brackets touch, at least one side is a root token:
        // halving it eventually separates them.
        if let Param::Root(r) = &a {
            a = Param::Root(r.halved());
        }
        if let Param::Root(r) = &b {
            b = Param::Root(r.halved());
        }
        if let (Param::Rat(x), Param::Rat(y)) = (&a, &b) {
            return Scalar::midpoint(x, y);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn srat(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    #[test]
    fn rational_roots_are_recognized() {
        // 5t^2 - 6t + 1 = 0 -> t in {1/5, 1}
        let sol = solve_quadratic(&srat(5, 1), &srat(-6, 1), &srat(1, 1));
        assert_eq!(
            sol,
            QuadSolutions::Roots(vec![Param::rat(1, 5), Param::rat(1, 1)])
        );
    }

    #[test]
    fn negative_discriminant() {
        // 5t^2 - 6t + 19/10: disc = 36 - 38 < 0
        let sol = solve_quadratic(&srat(5, 1), &srat(-6, 1), &srat(19, 10));
        assert_eq!(sol, QuadSolutions::Roots(vec![]));
    }

    #[test]
    fn irrational_roots_order_and_sign() {
        // 5t^2 - 6t + 3/2 = 0 -> (6 +- sqrt(6)) / 10
        let sol = solve_quadratic(&srat(5, 1), &srat(-6, 1), &srat(3, 2));
        let (r0, r1) = match sol {
            QuadSolutions::Roots(v) if v.len() == 2 => (v[0].clone(), v[1].clone()),
            other => panic!("unexpected {other:?}"),
        };
        assert!(r0 < r1);
        // lower root is about 0.3551
        assert!(r0 > Param::rat(1, 3));
        assert!(r0 < Param::rat(2, 5));
        assert!(r1 > Param::rat(4, 5));
        assert!(r1 < Param::rat(9, 10));
        // sign of t^2 - 1/4 at the lower root: (0.3551)^2 < 1/4
        let s = quad_sign_at(&srat(1, 1), &srat(0, 1), &srat(-1, 4), &r0);
        assert_eq!(s, Sign::Neg);
        let s = quad_sign_at(&srat(1, 1), &srat(0, 1), &srat(-1, 4), &r1);
        assert_eq!(s, Sign::Pos);
    }

    #[test]
    fn token_identity_ignores_bracket() {
        let a = solve_quadratic(&srat(1, 1), &srat(0, 1), &srat(-2, 1));
        let b = solve_quadratic(&srat(3, 1), &srat(0, 1), &srat(-6, 1));
        let (QuadSolutions::Roots(a), QuadSolutions::Roots(b)) = (a, b) else {
            panic!()
        };
        // same canonical polynomial t^2 - 2
        assert_eq!(a[1], b[1]);
        assert_eq!(a[1].cmp(&b[1]), Ordering::Equal);
        assert!(a[0] < b[1]);
    }

    #[test]
    fn cross_poly_comparison_terminates() {
        // sqrt(2) vs sqrt(3) as roots of t^2-2 and t^2-3
        let QuadSolutions::Roots(a) = solve_quadratic(&srat(1, 1), &srat(0, 1), &srat(-2, 1))
        else {
            panic!()
        };
        let QuadSolutions::Roots(b) = solve_quadratic(&srat(1, 1), &srat(0, 1), &srat(-3, 1))
        else {
            panic!()
        };
        assert!(a[1] < b[1]);
        assert!(b[0] < a[0]);
    }

    #[test]
    fn between_value_is_strict() {
        let QuadSolutions::Roots(r) = solve_quadratic(&srat(5, 1), &srat(-6, 1), &srat(3, 2))
        else {
            panic!()
        };
        let m = rational_between(&r[0], &r[1]);
        assert!(Param::Rat(m.clone()) > r[0]);
        assert!(Param::Rat(m) < r[1]);
        let m = rational_between(&Param::zero(), &r[0]);
        assert!(m.is_positive());
        assert!(Param::Rat(m) < r[0]);
    }

    #[test]
    fn double_root_is_single_rational() {
        // (2t-1)^2 = 4t^2 -4t + 1
        let sol = solve_quadratic(&srat(4, 1), &srat(-4, 1), &srat(1, 1));
        assert_eq!(sol, QuadSolutions::Roots(vec![Param::rat(1, 2)]));
    }

    #[test]
    fn serialization_forms() {
        let v = serde_json::to_value(Param::rat(-3, 2)).unwrap();
        assert_eq!(v, serde_json::json!("-3/2"));
        let QuadSolutions::Roots(r) = solve_quadratic(&srat(1, 1), &srat(0, 1), &srat(-2, 1))
        else {
            panic!()
        };
        let v = serde_json::to_value(&r[1]).unwrap();
        assert_eq!(v["poly"], serde_json::json!(["1", "0", "-2"]));
        assert!(v["iso"].is_array());
    }
}
