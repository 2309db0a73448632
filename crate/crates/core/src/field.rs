//! Coefficient fields.
//!
//! Every algebraic structure in the crate is generic over a [`Field`]. Two
//! implementations ship: arbitrary-precision rationals ([`Rational`]) and
//! word-sized prime fields ([`Fp`]).

use std::fmt::{self, Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num::bigint::{BigInt, Sign};
use num::rational::BigRational;
use num::integer::Integer;
use num::traits::{Num, One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational numbers.
pub type Rational = BigRational;

/// An exact, commutative coefficient field.
///
/// The `*_ref` methods exist so that big-number implementations can avoid
/// cloning operands on the hot paths of reduction.
pub trait Field:
    Num + Neg<Output = Self> + Clone + Eq + Hash + Debug + Display + Send + Sync + 'static
{
    /// Zero for the rationals, `p` for `F_p`.
    fn characteristic() -> u64;

    /// Short human-readable name (`"QQ"`, `"GF(32003)"`).
    fn name() -> String;

    fn from_i64(v: i64) -> Self;

    /// Image of an arbitrary integer.
    fn from_bigint(v: &BigInt) -> Self;

    /// `num / den`; `None` when `den` maps to zero.
    fn from_fraction(num: &BigInt, den: &BigInt) -> Option<Self> {
        let d = Self::from_bigint(den);
        if d.is_zero() {
            return None;
        }
        Some(Self::from_bigint(num).mul_ref(&d.inv()))
    }

    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self;

    /// Whether the canonical printed form carries a leading minus sign.
    fn is_negative(&self) -> bool;

    fn add_ref(&self, other: &Self) -> Self {
        self.clone() + other.clone()
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self.clone() - other.clone()
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self.clone() * other.clone()
    }

    /// Nonzero `(a, b)` with `a·x = b·y`, used to cancel a leading
    /// coefficient `x` against `y`. The default divides.
    fn cancel_factors(x: &Self, y: &Self) -> (Self, Self) {
        (Self::one(), x.mul_ref(&y.inv()))
    }

    /// A nonzero factor bringing a coefficient list to its canonical scale.
    /// The default makes the first coefficient one.
    fn content_scale<'a, I: Iterator<Item = &'a Self>>(mut coeffs: I) -> Self
    where
        Self: 'a,
    {
        coeffs.next().map_or_else(Self::one, |c| c.inv())
    }
}

impl Field for BigRational {
    fn characteristic() -> u64 {
        0
    }

    fn name() -> String {
        "QQ".to_string()
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_bigint(v: &BigInt) -> Self {
        BigRational::from_integer(v.clone())
    }

    fn from_fraction(num: &BigInt, den: &BigInt) -> Option<Self> {
        if den.is_zero() {
            None
        } else {
            Some(BigRational::new(num.clone(), den.clone()))
        }
    }

    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        self.recip()
    }

    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }

    // integer operands skip the gcd normalization of `Ratio`
    fn add_ref(&self, other: &Self) -> Self {
        if self.is_integer() && other.is_integer() {
            BigRational::from_integer(self.numer() + other.numer())
        } else {
            self + other
        }
    }

    fn sub_ref(&self, other: &Self) -> Self {
        if self.is_integer() && other.is_integer() {
            BigRational::from_integer(self.numer() - other.numer())
        } else {
            self - other
        }
    }

    fn mul_ref(&self, other: &Self) -> Self {
        if self.is_integer() && other.is_integer() {
            BigRational::from_integer(self.numer() * other.numer())
        } else {
            self * other
        }
    }

    fn cancel_factors(x: &Self, y: &Self) -> (Self, Self) {
        if x.is_integer() && y.is_integer() {
            let (xn, yn) = (x.numer(), y.numer());
            let g = xn.gcd(yn);
            let (mut a, mut b) = (yn / &g, xn / &g);
            if a.is_negative() {
                a = -a;
                b = -b;
            }
            (BigRational::from_integer(a), BigRational::from_integer(b))
        } else {
            (Self::one(), x / y)
        }
    }

    /// Scale to integer coefficients without common factor and a positive
    /// first coefficient.
    fn content_scale<'a, I: Iterator<Item = &'a Self>>(coeffs: I) -> Self {
        let mut den = BigInt::one();
        let mut nums: Vec<(&BigInt, &BigInt)> = Vec::new();
        for c in coeffs {
            den = den.lcm(c.denom());
            nums.push((c.numer(), c.denom()));
        }
        let mut g = BigInt::zero();
        for (n, d) in &nums {
            g = g.gcd(&(*n * (&den / *d)));
            if g.is_one() {
                break;
            }
        }
        if g.is_zero() {
            return Self::one();
        }
        if nums.first().is_some_and(|(n, _)| n.is_negative()) {
            g = -g;
        }
        BigRational::new(den, g)
    }
}

/// Residues modulo a word-sized prime `P`, stored as the least nonnegative
/// representative.
///
/// `P` must be prime; [`Fp::modulus_is_prime`] checks it and ring
/// construction refuses composite moduli.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Fp<const P: u64>(u64);

/// A prime close to 2^15 commonly used for modular runs.
pub type Fp32003 = Fp<32003>;

impl<const P: u64> Fp<P> {
    pub const fn new(v: u64) -> Self {
        Fp(v % P)
    }

    pub const fn value(self) -> u64 {
        self.0
    }

    pub fn modulus_is_prime() -> bool {
        is_prime(P)
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp::<P>(1 % P);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

/// Deterministic trial division; moduli are word-sized.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

impl<const P: u64> Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 + rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 + P as u128 - rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u128 * rhs.0 as u128) % P as u128) as u64)
    }
}

impl<const P: u64> Div for Fp<P> {
    type Output = Self;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        self * rhs.inv()
    }
}

impl<const P: u64> Rem for Fp<P> {
    type Output = Self;
    fn rem(self, rhs: Self) -> Self {
        assert!(!rhs.is_zero(), "remainder by zero");
        Fp(0)
    }
}

impl<const P: u64> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        if self.0 == 0 {
            self
        } else {
            Fp(P - self.0)
        }
    }
}

impl<const P: u64> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u64> One for Fp<P> {
    fn one() -> Self {
        Fp(1 % P)
    }
}

impl<const P: u64> Num for Fp<P> {
    type FromStrRadixErr = num::bigint::ParseBigIntError;

    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        let v = BigInt::from_str_radix(s, radix)?;
        Ok(<Self as Field>::from_bigint(&v))
    }
}

impl<const P: u64> Field for Fp<P> {
    fn characteristic() -> u64 {
        P
    }

    fn name() -> String {
        format!("GF({P})")
    }

    fn from_i64(v: i64) -> Self {
        Fp(v.rem_euclid(P as i64) as u64)
    }

    fn from_bigint(v: &BigInt) -> Self {
        let m = BigInt::from(P);
        let mut r = v % &m;
        if r.sign() == Sign::Minus {
            r += &m;
        }
        Fp(r.to_u64().expect("residue fits in a word"))
    }

    fn inv(&self) -> Self {
        assert!(self.0 != 0, "inverse of zero in GF({P})");
        self.pow(P - 2)
    }

    fn is_negative(&self) -> bool {
        false
    }
}
