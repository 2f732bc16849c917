//! Exact-backend kernels: fraction-free rank and root isolation over ℚ(i).

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, ToPrimitive, Zero};

use super::float;
use super::matrix::CMatrix;
use super::poly::Poly;
use super::scalar::{GaussRat, Scalar, C64};
use super::tolerance::ToleranceConfig;
use crate::error::{Error, Result};

type GaussInt = Complex<BigInt>;

/// Scales each row by the lcm of its denominators so every entry becomes a
/// Gaussian integer. Row scaling preserves rank and kernel.
fn clear_row_denominators(m: &CMatrix<GaussRat>) -> Vec<Vec<GaussInt>> {
    (0..m.rows())
        .map(|r| {
            let row = m.row(r);
            let lcm = row
                .iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(x.re.denom()).lcm(x.im.denom()));
            row.iter()
                .map(|x| {
                    let re = x.re.numer() * (&lcm / x.re.denom());
                    let im = x.im.numer() * (&lcm / x.im.denom());
                    Complex::new(re, im)
                })
                .collect()
        })
        .collect()
}

fn gauss_int_bits(z: &GaussInt) -> u64 {
    z.re.bits() + z.im.bits()
}

/// Rank by Bareiss fraction-free elimination over ℤ[i]. Every intermediate
/// entry is a minor of the input, so each division by the previous pivot is
/// exact.
pub fn bareiss_rank(m: &CMatrix<GaussRat>) -> usize {
    let mut a = clear_row_denominators(m);
    let (rows, cols) = (m.rows(), m.cols());
    let mut prev = GaussInt::one();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let pivot = (r..rows)
            .filter(|&i| !a[i][c].is_zero())
            .min_by_key(|&i| gauss_int_bits(&a[i][c]));
        let Some(p) = pivot else { continue };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let prow = &top[r];
        let pv = prow[c].clone();
        for row in rest.iter_mut() {
            let lead = row[c].clone();
            for j in c + 1..cols {
                let v = &pv * &row[j] - &lead * &prow[j];
                row[j] = if prev.is_one() { v } else { v / &prev };
            }
            row[c] = GaussInt::zero();
        }
        prev = pv;
        r += 1;
    }
    r
}

fn lcm_denominators(p: &Poly<GaussRat>) -> BigInt {
    p.coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.re.denom()).lcm(c.im.denom()))
}

fn to_rational(x: f64) -> BigRational {
    BigRational::from_float(x).unwrap_or_else(BigRational::zero)
}

fn round_rational(x: &BigRational) -> BigInt {
    x.round().to_integer()
}

/// Candidate exact root near the float approximation `z`. Any root of a
/// Gaussian-integer polynomial has the form `w / a_n` with `w ∈ ℤ[i]`.
fn candidate_from_float(z: C64, lead: &GaussInt) -> Option<GaussRat> {
    let lz = C64::new(float_of_bigint(&lead.re), float_of_bigint(&lead.im)) * z;
    let w = Complex::new(
        <BigInt as FromPrimitive>::from_f64(lz.re.round())?,
        <BigInt as FromPrimitive>::from_f64(lz.im.round())?,
    );
    let lead_q = Complex::new(
        BigRational::from_integer(lead.re.clone()),
        BigRational::from_integer(lead.im.clone()),
    );
    let wq = Complex::new(BigRational::from_integer(w.re), BigRational::from_integer(w.im));
    Some(wq / lead_q)
}

fn float_of_bigint(b: &BigInt) -> f64 {
    b.to_f64().unwrap_or(f64::MAX)
}

/// Exact Newton refinement followed by rounding `a_n · x` to ℤ[i].
fn candidate_by_exact_newton(p: &Poly<GaussRat>, dp: &Poly<GaussRat>, z: C64, lead: &GaussInt) -> Option<GaussRat> {
    let mut x = Complex::new(to_rational(z.re), to_rational(z.im));
    for _ in 0..4 {
        let d = dp.eval(&x);
        if d.is_zero() {
            return None;
        }
        x = x.clone() - p.eval(&x) / d;
        // keep heights bounded: truncate to a dyadic with 256 fractional bits
        let scale = BigRational::from_integer(BigInt::one() << 256);
        x = Complex::new(
            BigRational::new(round_rational(&(x.re.clone() * scale.clone())), BigInt::one() << 256),
            BigRational::new(round_rational(&(x.im.clone() * scale.clone())), BigInt::one() << 256),
        );
    }
    let lead_q = Complex::new(
        BigRational::from_integer(lead.re.clone()),
        BigRational::from_integer(lead.im.clone()),
    );
    let lx = lead_q.clone() * x;
    let w = Complex::new(
        BigRational::from_integer(round_rational(&lx.re)),
        BigRational::from_integer(round_rational(&lx.im)),
    );
    Some(w / lead_q)
}

/// Roots over ℚ(i) with multiplicities. Numerical approximations of the
/// squarefree part are turned into exact candidates and verified by exact
/// evaluation; anything left over means the polynomial does not split.
pub fn roots(p: &Poly<GaussRat>, _tol: &ToleranceConfig) -> Result<Vec<(GaussRat, usize)>> {
    let Some(deg) = p.degree() else {
        return Err(Error::DegenerateInput("roots of the zero polynomial".into()));
    };
    if deg == 0 {
        return Ok(Vec::new());
    }
    let squarefree = p.div_exact(&p.gcd(&p.derivative())).expect("gcd divides p").monic();
    let sf_deg = squarefree.degree().unwrap_or(0);

    let scale = GaussRat::from_integer_part(lcm_denominators(&squarefree));
    let integral: Vec<GaussInt> = squarefree
        .coeffs()
        .iter()
        .map(|c| {
            let s = c.clone() * scale.clone();
            Complex::new(s.re.to_integer(), s.im.to_integer())
        })
        .collect();
    let lead = integral.last().cloned().expect("nonzero polynomial");
    let dsq = squarefree.derivative();

    let approx = float::roots_raw(&Poly::new(squarefree.coeffs().iter().map(Scalar::to_c64).collect()));

    let mut found: Vec<GaussRat> = Vec::new();
    for z in approx {
        let cand = candidate_from_float(z, &lead)
            .filter(|c| squarefree.eval(c).is_zero())
            .or_else(|| {
                candidate_by_exact_newton(&squarefree, &dsq, z, &lead).filter(|c| squarefree.eval(c).is_zero())
            });
        if let Some(c) = cand {
            if !found.contains(&c) {
                found.push(c);
            }
        }
    }
    if found.len() < sf_deg {
        return Err(Error::NonSplitting {
            remaining: sf_deg - found.len(),
        });
    }

    let mut out = Vec::with_capacity(found.len());
    for r in found {
        let lin = Poly::linear_root(r.clone());
        let mut mult = 0;
        let mut rest = p.clone();
        while let Some(q) = rest.div_exact(&lin) {
            rest = q;
            mult += 1;
        }
        out.push((r, mult));
    }
    out.sort_by(|a, b| a.0.cmp_re_im(&b.0));
    Ok(out)
}

trait FromIntegerPart {
    fn from_integer_part(b: BigInt) -> Self;
}

impl FromIntegerPart for GaussRat {
    fn from_integer_part(b: BigInt) -> Self {
        Complex::new(BigRational::from_integer(b), BigRational::zero())
    }
}
