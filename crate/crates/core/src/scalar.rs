//! The scalar abstraction shared by every coefficient-carrying type.
//!
//! Two domains are supported: exact rationals (the canonical domain) and
//! `f64` (required for transcendental functions). The domain is fixed per
//! value at the type level, so mixed-domain arithmetic cannot compile;
//! front-ends that read untyped input enforce the same rule dynamically.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::error::{JetError, Result};

/// Exact rational scalar, the canonical coefficient domain.
pub type Rat = BigRational;

/// Elementary transcendental primitives available in the float domain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Elementary {
    Sin,
    Cos,
    Exp,
    Log,
    Sqrt,
}

impl Elementary {
    pub fn name(self) -> &'static str {
        match self {
            Elementary::Sin => "sin",
            Elementary::Cos => "cos",
            Elementary::Exp => "exp",
            Elementary::Log => "log",
            Elementary::Sqrt => "sqrt",
        }
    }
}

/// Coefficient scalar for jets, iterated tangents and Weil elements.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + 'static
{
    /// True for domains where equality and rank decisions are exact.
    const EXACT: bool;

    fn from_integer(n: i64) -> Self;

    /// Conversion of a rational literal into this domain.
    fn from_rational(r: &Rat) -> Result<Self>;

    /// Division with an explicit zero-divisor error.
    fn try_div(&self, rhs: &Self) -> Result<Self>;

    /// Point comparison: exact in the rational domain, tolerance-based in
    /// the float domain (jets composed numerically never match bit-exactly).
    fn point_eq(&self, other: &Self) -> bool;

    /// Pivot quality for elimination: any nonzero value works exactly in the
    /// rational domain; floats prefer the largest magnitude.
    fn pivot_score(&self) -> f64;

    /// Univariate Taylor coefficients `c_0..c_order` of an elementary
    /// function at `center`. Errors in the rational domain and on domain
    /// violations (`log` of a non-positive value, `sqrt` of a negative one).
    fn taylor_series(f: Elementary, center: &Self, order: usize) -> Result<Vec<Self>>;

    /// Small random value for self-check probes; exact domains draw from a
    /// short list of fractions so downstream identities stay exact.
    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

/// Absolute-plus-relative tolerance used by `f64::point_eq`.
pub const FLOAT_POINT_TOL: f64 = 1e-9;

impl Scalar for Rat {
    const EXACT: bool = true;

    fn from_integer(n: i64) -> Self {
        Rat::from_integer(n.into())
    }

    fn from_rational(r: &Rat) -> Result<Self> {
        Ok(r.clone())
    }

    fn try_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(JetError::EvaluationSingularity("division by zero".into()));
        }
        Ok(self / rhs)
    }

    fn point_eq(&self, other: &Self) -> bool {
        self == other
    }

    fn pivot_score(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }

    fn taylor_series(f: Elementary, _center: &Self, _order: usize) -> Result<Vec<Self>> {
        Err(JetError::TranscendentalInExactMode(f.name()))
    }

    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let num: i64 = rng.gen_range(-4..=4);
        let den: i64 = rng.gen_range(1..=3);
        Rat::new(num.into(), den.into())
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_integer(n: i64) -> Self {
        n as f64
    }

    fn from_rational(r: &Rat) -> Result<Self> {
        r.to_f64().ok_or(JetError::NumericOverflow)
    }

    fn try_div(&self, rhs: &Self) -> Result<Self> {
        if *rhs == 0.0 {
            return Err(JetError::EvaluationSingularity("division by zero".into()));
        }
        Ok(self / rhs)
    }

    fn point_eq(&self, other: &Self) -> bool {
        let scale = 1.0_f64.max(self.abs()).max(other.abs());
        (self - other).abs() <= FLOAT_POINT_TOL * scale
    }

    fn pivot_score(&self) -> f64 {
        self.abs()
    }

    fn taylor_series(f: Elementary, center: &Self, order: usize) -> Result<Vec<Self>> {
        let c = *center;
        let mut out = Vec::with_capacity(order + 1);
        match f {
            Elementary::Exp => {
                // c_k = exp(c) / k!
                let mut coeff = c.exp();
                out.push(coeff);
                for k in 1..=order {
                    coeff /= k as f64;
                    out.push(coeff);
                }
            }
            Elementary::Sin | Elementary::Cos => {
                // Derivatives cycle through (sin, cos, -sin, -cos) at c.
                let cycle = [c.sin(), c.cos(), -c.sin(), -c.cos()];
                let shift = if f == Elementary::Sin { 0 } else { 1 };
                let mut fact = 1.0;
                for k in 0..=order {
                    if k > 0 {
                        fact *= k as f64;
                    }
                    out.push(cycle[(k + shift) % 4] / fact);
                }
            }
            Elementary::Log => {
                if c <= 0.0 {
                    return Err(JetError::EvaluationSingularity(
                        "log of a non-positive value".into(),
                    ));
                }
                // c_k = (-1)^{k-1} / (k c^k)
                out.push(c.ln());
                let mut power = 1.0;
                for k in 1..=order {
                    power *= c;
                    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                    out.push(sign / (k as f64 * power));
                }
            }
            Elementary::Sqrt => {
                if c <= 0.0 {
                    return Err(JetError::EvaluationSingularity(
                        "sqrt at a non-positive value".into(),
                    ));
                }
                // c_k = c_{k-1} * (1/2 - (k-1)) / (k c)
                let mut coeff = c.sqrt();
                out.push(coeff);
                for k in 1..=order {
                    coeff *= (0.5 - (k as f64 - 1.0)) / (k as f64 * c);
                    out.push(coeff);
                }
            }
        }
        Ok(out)
    }

    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let num: i64 = rng.gen_range(-4..=4);
        let den: i64 = rng.gen_range(1..=3);
        num as f64 / den as f64
    }
}

/// `k!` as a scalar, built by repeated multiplication so it never overflows
/// a machine integer on the way in.
pub fn factorial<S: Scalar>(k: usize) -> S {
    let mut acc = S::one();
    for i in 1..=k {
        acc = acc * S::from_integer(i as i64);
    }
    acc
}

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(num.into(), den.into())
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// Parses "p/q", "p", or a decimal like "1.25" into an exact rational.
pub fn parse_rat(text: &str) -> Option<Rat> {
    let t = text.trim();
    if let Some((p, q)) = t.split_once('/') {
        let p: num::BigInt = p.trim().parse().ok()?;
        let q: num::BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rat::new(p, q));
    }
    if let Some((int_part, frac_part)) = t.split_once('.') {
        if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = int_part.trim_start().starts_with('-');
        let int: num::BigInt = if int_part.is_empty() || int_part == "-" {
            num::BigInt::zero()
        } else {
            int_part.parse().ok()?
        };
        let numer: num::BigInt = frac_part.parse().ok()?;
        let denom = num::BigInt::from(10u32).pow(frac_part.len() as u32);
        let frac = Rat::new(numer, denom);
        let whole = Rat::from_integer(int);
        return Some(if negative { whole - frac } else { whole + frac });
    }
    let p: num::BigInt = t.parse().ok()?;
    Some(Rat::from_integer(p))
}

/// Canonical "p/q" rendering: lowest terms, positive denominator, the
/// denominator omitted when it is 1.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}
