//! The two scalar backends.
//!
//! Every computation runs wholly in one backend: [`GaussRat`] (Gaussian
//! rationals, exact) or [`C64`] (double-precision complex). Algorithms are
//! written once against [`Scalar`]; the handful of operations whose natural
//! algorithm differs between an exact field and floating point (rank, kernel,
//! eigenvalues, polynomial roots) dispatch through the trait.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{Number, Value};

use super::matrix::CMatrix;
use super::poly::Poly;
use super::tolerance::ToleranceConfig;
use super::{exact, float};
use crate::error::Result;

/// Exact Gaussian rational `a + b i` with `a, b` arbitrary-precision rationals.
pub type GaussRat = Complex<BigRational>;

/// Double-precision complex number.
pub type C64 = Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
}

impl Backend {
    pub fn as_str(self) -> &'static str {
        match self {
            Backend::Exact => "exact",
            Backend::Float => "float",
        }
    }
}

impl std::str::FromStr for Backend {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            other => Err(format!("unknown backend `{other}` (expected exact|float)")),
        }
    }
}

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const BACKEND: Backend;

    fn from_int(v: i64) -> Self;

    /// `re + im·i` from integer parts.
    fn from_parts_i64(re: i64, im: i64) -> Self;

    fn to_c64(&self) -> C64;

    /// Approximate modulus, used for scaling and pivot heuristics only.
    fn modulus(&self) -> f64 {
        self.to_c64().norm()
    }

    /// Larger is a better elimination pivot. Exact scalars prefer small
    /// heights (less coefficient growth); floats prefer large moduli.
    fn pivot_score(&self) -> f64;

    /// Zero test used by elimination. Exact scalars ignore `scale` and `tol`.
    fn is_negligible(&self, scale: f64, tol: f64) -> bool;

    /// Equality for invariants and reports: bit-exact on the exact backend,
    /// `|a − b| ≤ tol · max(1, |a|, |b|)` on floats.
    fn approx_eq(&self, other: &Self, tol: f64) -> bool;

    fn conj(&self) -> Self;

    /// Total order by real part, then imaginary part.
    fn cmp_re_im(&self, other: &Self) -> Ordering;

    fn rank(m: &CMatrix<Self>, tol: &ToleranceConfig) -> usize;

    /// Basis of the right kernel, returned as the columns of a matrix.
    fn kernel(m: &CMatrix<Self>, tol: &ToleranceConfig) -> CMatrix<Self>;

    /// Distinct eigenvalues with algebraic multiplicities, ordered by
    /// [`Scalar::cmp_re_im`].
    fn eigenvalues(m: &CMatrix<Self>, tol: &ToleranceConfig) -> Result<Vec<(Self, usize)>>;

    /// Distinct roots with multiplicities, ordered by [`Scalar::cmp_re_im`].
    fn roots(p: &Poly<Self>, tol: &ToleranceConfig) -> Result<Vec<(Self, usize)>>;

    /// One real component as JSON: `"p/q"` strings on the exact backend,
    /// numbers with 17 significant digits on floats.
    fn encode_part(&self, imaginary: bool) -> Value;

    /// Inverse of [`Scalar::encode_part`] applied to a `[re, im]` pair.
    fn decode_pair(re: &Value, im: &Value) -> std::result::Result<Self, String>;

    /// Human-readable form used in reports and error messages.
    fn display(&self) -> String;
}

fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numerator and denominator may overflow f64 individually
        let n = r.numer().bits() as i64;
        let d = r.denom().bits() as i64;
        let shift = (n - d).clamp(-1000, 1000);
        let sign = if r.is_negative() { -1.0 } else { 1.0 };
        sign * 2f64.powi(shift as i32)
    })
}

fn rational_height(r: &BigRational) -> u64 {
    r.numer().bits() + r.denom().bits()
}

impl Scalar for GaussRat {
    const BACKEND: Backend = Backend::Exact;

    fn from_int(v: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(v)), BigRational::zero())
    }

    fn from_parts_i64(re: i64, im: i64) -> Self {
        Complex::new(
            BigRational::from_integer(BigInt::from(re)),
            BigRational::from_integer(BigInt::from(im)),
        )
    }

    fn to_c64(&self) -> C64 {
        C64::new(rational_to_f64(&self.re), rational_to_f64(&self.im))
    }

    fn pivot_score(&self) -> f64 {
        -((rational_height(&self.re) + rational_height(&self.im)) as f64)
    }

    fn is_negligible(&self, _scale: f64, _tol: f64) -> bool {
        self.is_zero()
    }

    fn approx_eq(&self, other: &Self, _tol: f64) -> bool {
        self == other
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn cmp_re_im(&self, other: &Self) -> Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }

    fn rank(m: &CMatrix<Self>, _tol: &ToleranceConfig) -> usize {
        exact::bareiss_rank(m)
    }

    fn kernel(m: &CMatrix<Self>, tol: &ToleranceConfig) -> CMatrix<Self> {
        m.rref_kernel(tol)
    }

    fn eigenvalues(m: &CMatrix<Self>, tol: &ToleranceConfig) -> Result<Vec<(Self, usize)>> {
        exact::roots(&m.charpoly(), tol)
    }

    fn roots(p: &Poly<Self>, tol: &ToleranceConfig) -> Result<Vec<(Self, usize)>> {
        exact::roots(p, tol)
    }

    fn encode_part(&self, imaginary: bool) -> Value {
        let r = if imaginary { &self.im } else { &self.re };
        Value::String(r.to_string())
    }

    fn decode_pair(re: &Value, im: &Value) -> std::result::Result<Self, String> {
        Ok(Complex::new(parse_rational(re)?, parse_rational(im)?))
    }

    fn display(&self) -> String {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => self.re.to_string(),
            (true, false) => format!("{}i", self.im),
            (false, false) if self.im.is_negative() => format!("({}-{}i)", self.re, -self.im.clone()),
            (false, false) => format!("({}+{}i)", self.re, self.im),
        }
    }
}

impl Scalar for C64 {
    const BACKEND: Backend = Backend::Float;

    fn from_int(v: i64) -> Self {
        C64::new(v as f64, 0.0)
    }

    fn from_parts_i64(re: i64, im: i64) -> Self {
        C64::new(re as f64, im as f64)
    }

    fn to_c64(&self) -> C64 {
        *self
    }

    fn pivot_score(&self) -> f64 {
        self.norm()
    }

    fn is_negligible(&self, scale: f64, tol: f64) -> bool {
        self.norm() <= tol * scale
    }

    fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let scale = 1f64.max(self.norm()).max(other.norm());
        (self - other).norm() <= tol * scale
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn cmp_re_im(&self, other: &Self) -> Ordering {
        self.re.total_cmp(&other.re).then_with(|| self.im.total_cmp(&other.im))
    }

    fn rank(m: &CMatrix<Self>, tol: &ToleranceConfig) -> usize {
        float::svd_rank(m, tol.rank_rel_tol)
    }

    fn kernel(m: &CMatrix<Self>, tol: &ToleranceConfig) -> CMatrix<Self> {
        float::svd_kernel(m, tol.rank_rel_tol)
    }

    fn eigenvalues(m: &CMatrix<Self>, tol: &ToleranceConfig) -> Result<Vec<(Self, usize)>> {
        Ok(float::eigenvalues(m, tol.eig_tol))
    }

    fn roots(p: &Poly<Self>, tol: &ToleranceConfig) -> Result<Vec<(Self, usize)>> {
        Ok(float::roots(p, tol.eig_tol))
    }

    fn encode_part(&self, imaginary: bool) -> Value {
        encode_f64(if imaginary { self.im } else { self.re })
    }

    fn decode_pair(re: &Value, im: &Value) -> std::result::Result<Self, String> {
        Ok(C64::new(parse_f64(re)?, parse_f64(im)?))
    }

    fn display(&self) -> String {
        if self.im == 0.0 {
            format!("{}", self.re)
        } else if self.re == 0.0 {
            format!("{}i", self.im)
        } else if self.im < 0.0 {
            format!("({}-{}i)", self.re, -self.im)
        } else {
            format!("({}+{}i)", self.re, self.im)
        }
    }
}

/// A float as a JSON number with 17 significant digits; non-finite values
/// become strings since JSON has no literal for them.
pub fn encode_f64(x: f64) -> Value {
    if !x.is_finite() {
        return Value::String(x.to_string());
    }
    let text = format!("{x:.16e}");
    match text.parse::<Number>() {
        Ok(n) => Value::Number(n),
        Err(_) => Value::String(text),
    }
}

fn parse_f64(v: &Value) -> std::result::Result<f64, String> {
    match v {
        Value::Number(n) => n
            .to_string()
            .parse::<f64>()
            .map_err(|e| format!("bad number `{n}`: {e}")),
        Value::String(s) => s.parse::<f64>().map_err(|e| format!("bad number `{s}`: {e}")),
        other => Err(format!("expected a number, found {other}")),
    }
}

/// Accepts `"p/q"`, integer strings, decimal strings and JSON numbers without
/// loss (decimals are read as exact rationals).
fn parse_rational(v: &Value) -> std::result::Result<BigRational, String> {
    let text = match v {
        Value::Number(n) => n.to_string(),
        Value::String(s) => s.trim().to_string(),
        other => return Err(format!("expected a rational, found {other}")),
    };
    let bad = |e: &dyn std::fmt::Display| format!("bad rational `{text}`: {e}");
    if let Some((num, den)) = text.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|e| bad(&e))?;
        let den: BigInt = den.trim().parse().map_err(|e| bad(&e))?;
        if den.is_zero() {
            return Err(bad(&"zero denominator"));
        }
        return Ok(BigRational::new(num, den));
    }
    let (mantissa, exp) = match text.find(['e', 'E']) {
        Some(i) => (&text[..i], text[i + 1..].parse::<i32>().map_err(|e| bad(&e))?),
        None => (text.as_str(), 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    let digits: BigInt = format!("{int_part}{frac_part}").parse().map_err(|e| bad(&e))?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Ok(if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    })
}

/// Builds an exact Gaussian rational from `num/den` parts.
pub fn gauss(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> GaussRat {
    Complex::new(
        BigRational::new(re_num.into(), re_den.into()),
        BigRational::new(im_num.into(), im_den.into()),
    )
}

/// `base^exp` for any scalar by repeated squaring.
pub fn powi<S: Scalar>(base: &S, mut exp: u32) -> S {
    let mut acc = S::one();
    let mut b = base.clone();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b.clone();
        }
        b = b.clone() * b;
        exp >>= 1;
    }
    acc
}
