//! Exact arithmetic in the golden ring `Q(τ)`, τ = (1 + √5)/2.
//!
//! Every value is stored as `a + b·τ` with `a`, `b` arbitrary-precision
//! rationals. Products are reduced with `τ² = τ + 1`, so the pair `(a, b)` is
//! a unique representation and equality/zero tests are exact. The reciprocal
//! golden ratio κ = 1/τ is the element `τ − 1`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// An exact element `a + b·τ` of `Q(τ)`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GoldenNum {
    a: BigRational,
    b: BigRational,
}

impl GoldenNum {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        GoldenNum { a, b }
    }

    /// `a + b·τ` with integer coefficients.
    pub fn from_ints(a: i64, b: i64) -> Self {
        GoldenNum {
            a: BigRational::from_integer(a.into()),
            b: BigRational::from_integer(b.into()),
        }
    }

    pub fn integer(a: i64) -> Self {
        Self::from_ints(a, 0)
    }

    /// The golden ratio τ.
    pub fn tau() -> Self {
        Self::from_ints(0, 1)
    }

    /// κ = 1/τ = τ − 1.
    pub fn kappa() -> Self {
        Self::from_ints(-1, 1)
    }

    /// Rational part `a`.
    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient `b` of τ.
    pub fn tau_part(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Galois conjugate: τ ↦ 1 − τ, i.e. `a + bτ ↦ (a + b) − bτ`.
    pub(crate) fn conjugate(&self) -> Self {
        GoldenNum {
            a: &self.a + &self.b,
            b: -&self.b,
        }
    }

    /// Field norm `x·σ(x) = a² + ab − b²`, a rational.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a + &self.a * &self.b - &self.b * &self.b
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        let c = self.conjugate();
        Some(GoldenNum {
            a: c.a / &n,
            b: c.b / n,
        })
    }

    /// Division by a nonzero rational.
    pub fn div_rational(&self, d: &BigRational) -> Self {
        GoldenNum {
            a: &self.a / d,
            b: &self.b / d,
        }
    }

    /// Sign of the real number `a + bτ`, decided exactly.
    pub fn signum(&self) -> i8 {
        // a + bτ = (2a + b + b√5)/2; compare p = 2a + b against -b√5.
        let p = BigRational::from_integer(2.into()) * &self.a + &self.b;
        let q = &self.b;
        let sp = sign_of(&p);
        let sq = sign_of(q);
        if sp == sq || sq == 0 {
            return sp;
        }
        if sp == 0 {
            return sq;
        }
        // Opposite signs: the larger magnitude wins; compare p² with 5q².
        let lhs = &p * &p;
        let rhs = BigRational::from_integer(5.into()) * q * q;
        if lhs > rhs {
            sp
        } else {
            sq
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Nearest `f64`, accurate to within one ulp of the correctly rounded
    /// value even when `a` and `b·τ` nearly cancel.
    pub fn to_f64(&self) -> f64 {
        if self.b.is_zero() {
            return self.a.to_f64().unwrap_or(f64::NAN);
        }
        // x = (P + Q√5) / R with integers P, Q, R > 0.
        let den = num_integer::Integer::lcm(self.a.denom(), self.b.denom());
        let a_num = self.a.numer() * (&den / self.a.denom());
        let b_num = self.b.numer() * (&den / self.b.denom());
        let p = BigInt::from(2) * a_num + &b_num;
        let q = b_num;
        let r = BigInt::from(2) * den;

        let sign = self.signum();
        if sign == 0 {
            return 0.0;
        }
        let (p, q) = if sign < 0 { (-p, -q) } else { (p, q) };

        // floor(x · 2^shift) approximated with an integer square root; the
        // truncation error is a few units, far below the ulp once the
        // mantissa carries at least 62 bits.
        let mut shift: i64 = 64 + r.bits() as i64 - (p.bits().max(q.bits()) as i64);
        loop {
            let scaled = scaled_floor(&p, &q, &r, shift);
            let bits = scaled.bits() as i64;
            if bits >= 62 {
                let m = scaled.to_f64().unwrap_or(f64::INFINITY);
                return f64::from(sign) * ldexp(m, -shift);
            }
            shift += 66 - bits.max(1);
        }
    }
}

fn sign_of(x: &BigRational) -> i8 {
    match x.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// floor((p + q√5) · 2^shift / r), assuming the result is nonnegative.
fn scaled_floor(p: &BigInt, q: &BigInt, r: &BigInt, shift: i64) -> BigInt {
    let (num_scale, den_scale) = if shift >= 0 {
        (BigInt::one() << shift as usize, BigInt::one())
    } else {
        (BigInt::one(), BigInt::one() << (-shift) as usize)
    };
    let ps = p * &num_scale;
    let qs = q * &num_scale;
    let root = (BigInt::from(5) * &qs * &qs).sqrt();
    let root = if qs.is_negative() { -root } else { root };
    let total = ps + root;
    let total = if total.is_negative() {
        BigInt::zero()
    } else {
        total
    };
    total / (r * den_scale)
}

fn ldexp(m: f64, exp: i64) -> f64 {
    let mut x = m;
    let mut e = exp;
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
    }
    x * 2f64.powi(e as i32)
}

impl Zero for GoldenNum {
    fn zero() -> Self {
        GoldenNum::default()
    }

    fn is_zero(&self) -> bool {
        GoldenNum::is_zero(self)
    }
}

impl One for GoldenNum {
    fn one() -> Self {
        GoldenNum::integer(1)
    }
}

impl From<i64> for GoldenNum {
    fn from(a: i64) -> Self {
        GoldenNum::integer(a)
    }
}

impl<'a> Add<&'a GoldenNum> for &'a GoldenNum {
    type Output = GoldenNum;

    fn add(self, rhs: &'a GoldenNum) -> GoldenNum {
        GoldenNum {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
        }
    }
}

impl Add for GoldenNum {
    type Output = GoldenNum;

    fn add(self, rhs: GoldenNum) -> GoldenNum {
        &self + &rhs
    }
}

impl AddAssign<&GoldenNum> for GoldenNum {
    fn add_assign(&mut self, rhs: &GoldenNum) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl<'a> Sub<&'a GoldenNum> for &'a GoldenNum {
    type Output = GoldenNum;

    fn sub(self, rhs: &'a GoldenNum) -> GoldenNum {
        GoldenNum {
            a: &self.a - &rhs.a,
            b: &self.b - &rhs.b,
        }
    }
}

impl Sub for GoldenNum {
    type Output = GoldenNum;

    fn sub(self, rhs: GoldenNum) -> GoldenNum {
        &self - &rhs
    }
}

impl<'a> Mul<&'a GoldenNum> for &'a GoldenNum {
    type Output = GoldenNum;

    fn mul(self, rhs: &'a GoldenNum) -> GoldenNum {
        // (a1 + b1 τ)(a2 + b2 τ) = a1 a2 + b1 b2 + (a1 b2 + a2 b1 + b1 b2) τ
        let bb = &self.b * &rhs.b;
        GoldenNum {
            a: &self.a * &rhs.a + &bb,
            b: &self.a * &rhs.b + &rhs.a * &self.b + bb,
        }
    }
}

impl Mul for GoldenNum {
    type Output = GoldenNum;

    fn mul(self, rhs: GoldenNum) -> GoldenNum {
        &self * &rhs
    }
}

impl Neg for GoldenNum {
    type Output = GoldenNum;

    fn neg(self) -> GoldenNum {
        GoldenNum {
            a: -self.a,
            b: -self.b,
        }
    }
}

impl Neg for &GoldenNum {
    type Output = GoldenNum;

    fn neg(self) -> GoldenNum {
        -self.clone()
    }
}

impl fmt::Debug for GoldenNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GoldenNum({})", self)
    }
}

fn fmt_coeff(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Writes `c` followed by `sym`, eliding a unit coefficient.
fn fmt_scaled(c: &BigRational, sym: char) -> String {
    if c.is_one() {
        sym.to_string()
    } else if (-c).is_one() {
        format!("-{}", sym)
    } else {
        format!("{}{}", fmt_coeff(c), sym)
    }
}

/// Textual form: `t` is τ and `k` is κ. Multiples of κ print as `k`, `-k`,
/// `2k`; everything else as `a`, `bt` or `a+bt`.
impl fmt::Display for GoldenNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", fmt_coeff(&self.a));
        }
        if self.a == -&self.b {
            return write!(f, "{}", fmt_scaled(&self.b, 'k'));
        }
        let bt = fmt_scaled(&self.b, 't');
        if self.a.is_zero() {
            write!(f, "{}", bt)
        } else if bt.starts_with('-') {
            write!(f, "{}{}", fmt_coeff(&self.a), bt)
        } else {
            write!(f, "{}+{}", fmt_coeff(&self.a), bt)
        }
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    if s.is_empty() {
        return None;
    }
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.parse().ok()?;
            let d: BigInt = d.parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(BigRational::new(n, d))
            }
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Parses a sum of signed terms, each a rational optionally followed by `t`
/// or `k`: `2`, `-t`, `2-t`, `1/2+3t`, `-k`, `2k`.
impl FromStr for GoldenNum {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let bad = || Error::GoldenSyntax(s.to_string());
        let text = s.trim();
        if text.is_empty() {
            return Err(bad());
        }
        let mut terms = Vec::new();
        let mut start = 0;
        for (i, ch) in text.char_indices() {
            if (ch == '+' || ch == '-') && i > start {
                terms.push(&text[start..i]);
                start = i;
            }
        }
        terms.push(&text[start..]);

        let mut acc = GoldenNum::zero();
        for term in terms {
            let (negative, body) = match term.as_bytes()[0] {
                b'+' => (false, &term[1..]),
                b'-' => (true, &term[1..]),
                _ => (false, term),
            };
            let (coeff, unit) = match body.chars().last() {
                Some('t') => (&body[..body.len() - 1], GoldenNum::tau()),
                Some('k') => (&body[..body.len() - 1], GoldenNum::kappa()),
                _ => (body, GoldenNum::one()),
            };
            let c = if coeff.is_empty() {
                if unit.is_one() {
                    return Err(bad());
                }
                BigRational::one()
            } else {
                parse_rational(coeff).ok_or_else(bad)?
            };
            let c = if negative { -c } else { c };
            acc += &GoldenNum::new(c, BigRational::zero()).mul(unit);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(a: i64, b: i64) -> GoldenNum {
        GoldenNum::from_ints(a, b)
    }

    #[test]
    fn add_examples() {
        assert_eq!(g(0, 1) + g(-1, 1), g(-1, 2));
        assert_eq!(g(0, 0) + g(3, 5), g(3, 5));
        assert_eq!(g(1, 1) + g(-1, -1), g(0, 0));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(g(0, 1) * g(0, 1), g(1, 1));
        assert_eq!(GoldenNum::kappa() * GoldenNum::tau(), g(1, 0));
        assert_eq!(GoldenNum::kappa() * GoldenNum::kappa(), g(2, -1));
    }

    #[test]
    fn zero_examples() {
        assert!(g(0, 0).is_zero());
        assert!(!g(2, -1).is_zero());
        assert!(!GoldenNum::kappa().is_zero());
    }

    #[test]
    fn inverse_of_tau_is_kappa() {
        assert_eq!(GoldenNum::tau().inverse().unwrap(), GoldenNum::kappa());
        assert!(GoldenNum::zero().inverse().is_none());
    }

    #[test]
    fn signum_near_cancellation() {
        // F(n+1) - F(n) τ alternates in sign and shrinks like τ^-n.
        assert_eq!(g(987, -610).signum(), -1);
        assert_eq!(g(-987, 610).signum(), 1);
        assert_eq!(g(1597, -987).signum(), 1);
        assert_eq!(g(0, 0).signum(), 0);
    }

    #[test]
    fn to_f64_values() {
        let tau = (1.0 + 5f64.sqrt()) / 2.0;
        assert_eq!(GoldenNum::tau().to_f64(), tau);
        assert!((GoldenNum::kappa().to_f64() - (tau - 1.0)).abs() < 1e-16);
        assert_eq!(g(3, 0).to_f64(), 3.0);
        assert_eq!(g(0, 0).to_f64(), 0.0);
        // 832040 - 514229 τ ≈ -1.0e-6: naive evaluation loses ~10 digits.
        let (a, b) = (832040i128, -514229i128);
        let x = g(a as i64, b as i64).to_f64();
        let norm = (a * a + a * b - b * b) as f64;
        let expected = norm / (a as f64 - b as f64 * (tau - 1.0));
        assert!(((x - expected) / expected).abs() < 1e-14, "{x} vs {expected}");
    }

    #[test]
    fn display_and_parse() {
        let cases = [
            (g(2, 0), "2"),
            (g(0, 1), "t"),
            (g(0, -1), "-t"),
            (g(-1, 1), "k"),
            (g(1, -1), "-k"),
            (g(-2, 2), "2k"),
            (g(2, -1), "2-t"),
            (g(1, 3), "1+3t"),
            (g(0, 0), "0"),
        ];
        for (v, s) in cases {
            assert_eq!(v.to_string(), s);
            assert_eq!(s.parse::<GoldenNum>().unwrap(), v);
        }
        let half = GoldenNum::new(BigRational::new(1.into(), 2.into()), BigRational::zero());
        assert_eq!(half.to_string(), "1/2");
        assert_eq!("1/2".parse::<GoldenNum>().unwrap(), half);
        assert_eq!("-1+t".parse::<GoldenNum>().unwrap(), GoldenNum::kappa());
        assert_eq!("+t".parse::<GoldenNum>().unwrap(), GoldenNum::tau());
        for bad in ["", "x", "1/0", "2q", "--1", "+", "t2"] {
            assert!(bad.parse::<GoldenNum>().is_err(), "{bad:?} parsed");
        }
    }

    /// Independent evaluation through an exact big-integer square root with
    /// 200 extra bits, used to check the one-ulp contract of `to_f64`.
    fn oracle_f64(a: i64, b: i64) -> f64 {
        let scale = BigInt::one() << 200usize;
        let root5 = (BigInt::from(5) * &scale * &scale).sqrt();
        let num = BigInt::from(2 * a + b) * &scale + BigInt::from(b) * root5;
        let q = BigRational::new(num, BigInt::from(2) * scale);
        q.to_f64().unwrap()
    }

    fn ulp_distance(x: f64, y: f64) -> u64 {
        if x == y {
            return 0;
        }
        let xi = x.to_bits() as i64;
        let yi = y.to_bits() as i64;
        if (xi < 0) != (yi < 0) {
            return u64::MAX;
        }
        (xi - yi).unsigned_abs()
    }

    proptest! {
        #[test]
        fn ring_axioms(a in -50i64..50, b in -50i64..50, c in -50i64..50,
                       d in -50i64..50, e in -50i64..50, f in -50i64..50) {
            let (x, y, z) = (g(a, b), g(c, d), g(e, f));
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            prop_assert_eq!(&x * &y, &y * &x);
            prop_assert_eq!(&x + &y, &y + &x);
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert_eq!(&x * &GoldenNum::one(), x.clone());
            prop_assert_eq!(&x + &(-&x), GoldenNum::zero());
        }

        #[test]
        fn conjugate_is_multiplicative(a in -50i64..50, b in -50i64..50,
                                       c in -50i64..50, d in -50i64..50) {
            let (x, y) = (g(a, b), g(c, d));
            prop_assert_eq!((&x * &y).conjugate(), &x.conjugate() * &y.conjugate());
            prop_assert_eq!((&x + &y).conjugate(), &x.conjugate() + &y.conjugate());
        }

        #[test]
        fn float_product_agrees(a in -1000i64..=1000, b in -1000i64..=1000,
                                c in -1000i64..=1000, d in -1000i64..=1000) {
            let (x, y) = (g(a, b), g(c, d));
            let exact = (&x * &y).to_f64();
            let approx = x.to_f64() * y.to_f64();
            let scale = exact.abs().max(1e-300);
            // Products of near-cancelling pairs are well conditioned once
            // each factor is evaluated accurately.
            prop_assert!(((exact - approx) / scale).abs() < 1e-12 || exact == approx);
        }

        #[test]
        fn to_f64_within_one_ulp(a in -100_000i64..100_000, b in -100_000i64..100_000) {
            let x = g(a, b).to_f64();
            let y = oracle_f64(a, b);
            prop_assert!(ulp_distance(x, y) <= 1, "{a}+{b}t: {x} vs {y}");
        }

        #[test]
        fn parse_display_roundtrip(a in -30i64..30, b in -30i64..30, d in 1i64..6) {
            let v = GoldenNum::new(BigRational::new(a.into(), d.into()),
                                   BigRational::new(b.into(), 1.into()));
            prop_assert_eq!(v.to_string().parse::<GoldenNum>().unwrap(), v);
        }

        #[test]
        fn signum_matches_float(a in -1000i64..1000, b in -1000i64..1000) {
            let s = g(a, b).signum();
            let f = a as f64 + b as f64 * (1.0 + 5f64.sqrt()) / 2.0;
            prop_assert_eq!(f64::from(s), if f == 0.0 { 0.0 } else { f.signum() });
        }
    }
}
