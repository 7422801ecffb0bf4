use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An element `r + s·√5` of the real field Q(√5).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RealSurd {
    pub rational: BigRational,
    pub surd: BigRational,
}

impl RealSurd {
    pub fn new(rational: BigRational, surd: BigRational) -> Self {
        Self { rational, surd }
    }

    pub fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        Self::new(BigRational::one(), BigRational::zero())
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::new(r, BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.surd.is_zero()
    }

    /// Exact sign of `r + s√5` as a real number.
    pub fn signum(&self) -> Ordering {
        let r = self.rational.cmp(&BigRational::zero());
        let s = self.surd.cmp(&BigRational::zero());
        match (r, s) {
            (Ordering::Equal, x) | (x, Ordering::Equal) => x,
            (x, y) if x == y => x,
            // Opposite signs: compare r² with 5s².
            (x, _) => {
                let r2 = &self.rational * &self.rational;
                let s2 = &self.surd * &self.surd * BigRational::from_integer(BigInt::from(5));
                match r2.cmp(&s2) {
                    Ordering::Greater => x,
                    Ordering::Less => x.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    /// Multiplicative inverse via the conjugate `r − s√5`.
    pub fn inv(&self) -> Option<Self> {
        let norm =
            &self.rational * &self.rational - &self.surd * &self.surd * BigRational::from_integer(BigInt::from(5));
        if norm.is_zero() {
            return None;
        }
        Some(Self::new(&self.rational / &norm, -&self.surd / &norm))
    }

    fn scale(&self, k: &BigRational) -> Self {
        Self::new(&self.rational * k, &self.surd * k)
    }
}

impl Add for &RealSurd {
    type Output = RealSurd;
    fn add(self, o: &RealSurd) -> RealSurd {
        RealSurd::new(&self.rational + &o.rational, &self.surd + &o.surd)
    }
}

impl Sub for &RealSurd {
    type Output = RealSurd;
    fn sub(self, o: &RealSurd) -> RealSurd {
        RealSurd::new(&self.rational - &o.rational, &self.surd - &o.surd)
    }
}

impl Mul for &RealSurd {
    type Output = RealSurd;
    fn mul(self, o: &RealSurd) -> RealSurd {
        if self.surd.is_zero() && o.surd.is_zero() {
            return RealSurd::from_rational(&self.rational * &o.rational);
        }
        let five = BigRational::from_integer(BigInt::from(5));
        RealSurd::new(
            &self.rational * &o.rational + &self.surd * &o.surd * five,
            &self.rational * &o.surd + &self.surd * &o.rational,
        )
    }
}

impl Neg for &RealSurd {
    type Output = RealSurd;
    fn neg(self) -> RealSurd {
        RealSurd::new(-&self.rational, -&self.surd)
    }
}

/// An element `a + b√5 + c·i + d·i√5` of Q(√5)(i), with exact rational parts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    re: RealSurd,
    im: RealSurd,
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl ExactScalar {
    pub fn new(a: BigRational, b: BigRational, c: BigRational, d: BigRational) -> Self {
        Self { re: RealSurd::new(a, b), im: RealSurd::new(c, d) }
    }

    pub fn from_parts(re: RealSurd, im: RealSurd) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self { re: RealSurd::zero(), im: RealSurd::zero() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self { re: RealSurd::from_rational(rat(n)), im: RealSurd::zero() }
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Self { re: RealSurd::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q))), im: RealSurd::zero() }
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self { re: RealSurd::from_rational(r), im: RealSurd::zero() }
    }

    pub fn i() -> Self {
        Self { re: RealSurd::zero(), im: RealSurd::one() }
    }

    pub fn sqrt5() -> Self {
        Self { re: RealSurd::new(rat(0), rat(1)), im: RealSurd::zero() }
    }

    /// The golden ratio `(1 + √5) / 2`.
    pub fn phi() -> Self {
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        Self { re: RealSurd::new(half.clone(), half), im: RealSurd::zero() }
    }

    pub fn re(&self) -> &RealSurd {
        &self.re
    }

    pub fn im(&self) -> &RealSurd {
        &self.im
    }

    pub fn a(&self) -> &BigRational {
        &self.re.rational
    }

    pub fn b(&self) -> &BigRational {
        &self.re.surd
    }

    pub fn c(&self) -> &BigRational {
        &self.im.rational
    }

    pub fn d(&self) -> &BigRational {
        &self.im.surd
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re == RealSurd::one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// True when the value lies in Q.
    pub fn is_rational(&self) -> bool {
        self.im.is_zero() && self.re.surd.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -&self.im }
    }

    /// `|z|² = z̄·z`, a real element of Q(√5).
    pub fn norm_sqr(&self) -> RealSurd {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm_sqr().inv()?;
        let c = self.conj();
        Some(Self { re: &c.re * &n, im: &c.im * &n })
    }

    /// Multiplies by a rational.
    pub fn scale(&self, k: &BigRational) -> Self {
        Self { re: self.re.scale(k), im: self.im.scale(k) }
    }

    /// Sign under the fixed total order used for sign canonicalization:
    /// the real part decides, the imaginary part breaks ties.
    pub fn orientation(&self) -> Ordering {
        match self.re.signum() {
            Ordering::Equal => self.im.signum(),
            o => o,
        }
    }

    /// The four rational coordinates, in `a, b, c, d` order.
    pub fn components(&self) -> [&BigRational; 4] {
        [&self.re.rational, &self.re.surd, &self.im.rational, &self.im.surd]
    }
}

impl Add for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, o: &ExactScalar) -> ExactScalar {
        ExactScalar { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, o: &ExactScalar) -> ExactScalar {
        ExactScalar { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, o: &ExactScalar) -> ExactScalar {
        if self.is_zero() || o.is_zero() {
            return ExactScalar::zero();
        }
        if self.im.is_zero() && o.im.is_zero() {
            return ExactScalar { re: &self.re * &o.re, im: RealSurd::zero() };
        }
        ExactScalar { re: &(&self.re * &o.re) - &(&self.im * &o.im), im: &(&self.re * &o.im) + &(&self.im * &o.re) }
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar { re: -&self.re, im: -&self.im }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, o: ExactScalar) -> ExactScalar { (&self).$m(&o) }
        }
        impl $tr<&ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $m(self, o: &ExactScalar) -> ExactScalar { (&self).$m(o) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Formats in the ray-file syntax, e.g. `1/2+1/2*w5-1*im`.
impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let suffixes = ["", "*w5", "*im", "*im*w5"];
        let mut wrote = false;
        for (coef, suffix) in self.components().into_iter().zip(suffixes) {
            if coef.is_zero() {
                continue;
            }
            if wrote && !coef.is_negative() {
                f.write_str("+")?;
            }
            write!(f, "{coef}{suffix}")?;
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}
