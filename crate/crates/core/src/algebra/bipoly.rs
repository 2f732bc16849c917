//! Bivariate polynomials in (ζ, η).
//!
//! Stored as a polynomial in ζ whose coefficients are polynomials in η, which
//! is the layout the subresultant gcd wants. Trailing zero ζ-coefficients are
//! stripped, so the zero polynomial has an empty table.

use std::fmt;

use super::poly::Poly;
use super::scalar::{Backend, Scalar};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct BiPoly<S> {
    table: Vec<Poly<S>>,
}

impl<S: Scalar> BiPoly<S> {
    /// `table[i]` is the coefficient of `ζ^i`, itself a polynomial in η.
    pub fn from_zeta_coeffs(mut table: Vec<Poly<S>>) -> Self {
        while table.last().is_some_and(Poly::is_zero) {
            table.pop();
        }
        Self { table }
    }

    pub fn zero() -> Self {
        Self { table: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn constant(c: S) -> Self {
        Self::from_zeta_coeffs(vec![Poly::constant(c)])
    }

    pub fn zeta() -> Self {
        Self::from_terms(&[(1, 0, S::one())])
    }

    pub fn eta() -> Self {
        Self::from_terms(&[(0, 1, S::one())])
    }

    /// Sum of `c · ζ^i η^j` over the given terms; repeated exponents add up.
    pub fn from_terms(terms: &[(usize, usize, S)]) -> Self {
        let dz = terms.iter().map(|t| t.0).max().map_or(0, |d| d + 1);
        let mut rows: Vec<Vec<S>> = vec![Vec::new(); dz];
        for (i, j, c) in terms {
            let row = &mut rows[*i];
            if row.len() <= *j {
                row.resize(j + 1, S::zero());
            }
            row[*j] = row[*j].clone() + c.clone();
        }
        Self::from_zeta_coeffs(rows.into_iter().map(Poly::new).collect())
    }

    /// Univariate polynomial in η lifted to a bivariate one.
    pub fn from_eta_poly(p: Poly<S>) -> Self {
        Self::from_zeta_coeffs(vec![p])
    }

    /// Univariate polynomial in ζ lifted to a bivariate one.
    pub fn from_zeta_poly(p: &Poly<S>) -> Self {
        Self::from_zeta_coeffs(p.coeffs().iter().map(|c| Poly::constant(c.clone())).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    pub fn zeta_coeffs(&self) -> &[Poly<S>] {
        &self.table
    }

    pub fn deg_zeta(&self) -> Option<usize> {
        self.table.len().checked_sub(1)
    }

    pub fn deg_eta(&self) -> Option<usize> {
        self.table.iter().filter_map(Poly::degree).max()
    }

    /// `(deg_ζ, deg_η)` of the support, or `None` for zero.
    pub fn bidegree(&self) -> Option<(usize, usize)> {
        Some((self.deg_zeta()?, self.deg_eta()?))
    }

    pub fn coeff(&self, i: usize, j: usize) -> S {
        self.table.get(i).map_or_else(S::zero, |p| p.coeff(j))
    }

    /// Nonzero terms `(i, j, c)` in increasing `(i, j)` order.
    pub fn terms(&self) -> Vec<(usize, usize, S)> {
        let mut out = Vec::new();
        for (i, p) in self.table.iter().enumerate() {
            for (j, c) in p.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    out.push((i, j, c.clone()));
                }
            }
        }
        out
    }

    pub fn eval(&self, zeta: &S, eta: &S) -> S {
        self.eval_zeta(zeta).eval(eta)
    }

    /// Specialises ζ, leaving a polynomial in η.
    pub fn eval_zeta(&self, zeta: &S) -> Poly<S> {
        self.table
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| acc.scale(zeta).add(c))
    }

    /// Specialises η, leaving a polynomial in ζ.
    pub fn eval_eta(&self, eta: &S) -> Poly<S> {
        Poly::new(self.table.iter().map(|c| c.eval(eta)).collect())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> BiPoly<T> {
        BiPoly::from_zeta_coeffs(
            self.table
                .iter()
                .map(|p| Poly::new(p.coeffs().iter().map(&f).collect()))
                .collect(),
        )
    }

    pub fn scale(&self, s: &S) -> Self {
        Self::from_zeta_coeffs(self.table.iter().map(|p| p.scale(s)).collect())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-S::one())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.table.len().max(other.table.len());
        Self::from_zeta_coeffs((0..n).map(|i| self.zc(i).add(&other.zc(i))).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.table.len().max(other.table.len());
        Self::from_zeta_coeffs((0..n).map(|i| self.zc(i).sub(&other.zc(i))).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Poly::zero(); self.table.len() + other.table.len() - 1];
        for (i, a) in self.table.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.table.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::from_zeta_coeffs(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Multiplies by the η-polynomial `c`.
    pub fn mul_eta_poly(&self, c: &Poly<S>) -> Self {
        Self::from_zeta_coeffs(self.table.iter().map(|p| p.mul(c)).collect())
    }

    fn zc(&self, i: usize) -> Poly<S> {
        self.table.get(i).cloned().unwrap_or_else(Poly::zero)
    }

    fn shift_zeta(&self, by: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut table = vec![Poly::zero(); by];
        table.extend(self.table.iter().cloned());
        Self { table }
    }

    pub fn partial_zeta(&self) -> Self {
        Self::from_zeta_coeffs(
            self.table
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, p)| p.scale(&S::from_int(i as i64)))
                .collect(),
        )
    }

    pub fn partial_eta(&self) -> Self {
        Self::from_zeta_coeffs(self.table.iter().map(Poly::derivative).collect())
    }

    /// Leading term in the lexicographic order with ζ > η: `(i, j, c)`.
    pub fn lex_leading(&self) -> Option<(usize, usize, S)> {
        let i = self.deg_zeta()?;
        let p = &self.table[i];
        let j = p.degree().expect("trimmed");
        Some((i, j, p.coeff(j)))
    }

    /// Scales so the lexicographic leading coefficient is 1.
    pub fn lex_monic(&self) -> Self {
        match self.lex_leading() {
            None => Self::zero(),
            Some((_, _, c)) => self.scale(&(S::one() / c)),
        }
    }

    /// Exact quotient by `d`, or `None` when `d` does not divide `self`.
    /// Long division in ζ with exact η-polynomial division of the leading
    /// coefficients.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let dd = d.deg_zeta()?;
        let lead = &d.table[dd];
        let mut rem = self.clone();
        let Some(sd) = self.deg_zeta() else {
            return Some(Self::zero());
        };
        if sd < dd {
            return None;
        }
        let mut quot = vec![Poly::zero(); sd - dd + 1];
        while let Some(rd) = rem.deg_zeta() {
            if rd < dd {
                return None;
            }
            let c = rem.table[rd].div_exact(lead)?;
            let step = d.mul_eta_poly(&c).shift_zeta(rd - dd);
            rem = rem.sub(&step);
            // guard against float residue that never cancels
            if rem.deg_zeta() == Some(rd) {
                return None;
            }
            quot[rd - dd] = c;
        }
        Some(Self::from_zeta_coeffs(quot))
    }

    /// Whether `self` is a scalar multiple of `other`.
    pub fn is_associate(&self, other: &Self) -> bool {
        self.lex_monic() == other.lex_monic()
    }

    /// Interpolates from values on the integer grid `ζ ∈ 0..=dz`, `η ∈ 0..=de`;
    /// `values[i][j]` is the value at `(i, j)`.
    pub fn interpolate_grid(values: &[Vec<S>]) -> Self {
        let dz = values.len();
        if dz == 0 {
            return Self::zero();
        }
        let de = values[0].len();
        let eta_nodes: Vec<S> = (0..de).map(|j| S::from_int(j as i64)).collect();
        let zeta_nodes: Vec<S> = (0..dz).map(|i| S::from_int(i as i64)).collect();
        let rows: Vec<Poly<S>> = values.iter().map(|row| Poly::interpolate(&eta_nodes, row)).collect();
        // for each η-power, interpolate its coefficient across ζ
        let mut table = vec![vec![S::zero(); de]; dz];
        for j in 0..de {
            let col: Vec<S> = rows.iter().map(|p| p.coeff(j)).collect();
            let pz = Poly::interpolate(&zeta_nodes, &col);
            for (i, row) in table.iter_mut().enumerate() {
                row[j] = pz.coeff(i);
            }
        }
        Self::from_zeta_coeffs(table.into_iter().map(Poly::new).collect())
    }

    /// Greatest common divisor, normalised to lexicographic leading
    /// coefficient 1. Content in η is split off with univariate gcds; the
    /// primitive parts go through a subresultant remainder sequence in ζ.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        if S::BACKEND != Backend::Exact {
            return Err(Error::BackendUnsupported("bipoly_gcd"));
        }
        if self.is_zero() {
            return Ok(other.lex_monic());
        }
        if other.is_zero() {
            return Ok(self.lex_monic());
        }
        let (ca, pa) = self.content_primitive();
        let (cb, pb) = other.content_primitive();
        let content = ca.gcd(&cb);
        let (mut a, mut b) = if pa.deg_zeta() >= pb.deg_zeta() {
            (pa, pb)
        } else {
            (pb, pa)
        };
        let mut g = Poly::one();
        let mut h = Poly::one();
        loop {
            let delta = a.deg_zeta().unwrap() - b.deg_zeta().unwrap();
            let r = a.pseudo_rem(&b);
            if r.is_zero() {
                break;
            }
            if r.deg_zeta() == Some(0) {
                b = Self::one();
                break;
            }
            let divisor = g.mul(&h.pow(delta as u32));
            a = b;
            b = Self::from_zeta_coeffs(
                r.table
                    .iter()
                    .map(|c| c.div_exact(&divisor).expect("subresultant division is exact"))
                    .collect(),
            );
            g = a.table.last().cloned().expect("nonzero");
            // h ← g^δ / h^(δ−1)
            h = if delta == 0 {
                h
            } else {
                g.pow(delta as u32)
                    .div_exact(&h.pow(delta as u32 - 1))
                    .expect("subresultant division is exact")
            };
        }
        let (_, pp) = b.content_primitive();
        Ok(pp.mul_eta_poly(&content).lex_monic())
    }

    /// `(content, primitive part)` with respect to ζ; content is monic in η.
    fn content_primitive(&self) -> (Poly<S>, Self) {
        let content = self.table.iter().fold(Poly::zero(), |acc, c| acc.gcd(c));
        if content.is_zero() {
            return (content, Self::zero());
        }
        let prim = Self::from_zeta_coeffs(
            self.table
                .iter()
                .map(|c| c.div_exact(&content).expect("content divides"))
                .collect(),
        );
        (content, prim)
    }

    /// `lc(d)^(deg a − deg d + 1) · a mod d` in ζ.
    fn pseudo_rem(&self, d: &Self) -> Self {
        let dd = d.deg_zeta().expect("nonzero divisor");
        let lead = d.table[dd].clone();
        let Some(sd) = self.deg_zeta() else {
            return Self::zero();
        };
        if sd < dd {
            return self.clone();
        }
        let mut r = self.clone();
        let mut steps = 0u32;
        while let Some(rd) = r.deg_zeta() {
            if rd < dd {
                break;
            }
            let lr = r.table[rd].clone();
            r = r.mul_eta_poly(&lead).sub(&d.mul_eta_poly(&lr).shift_zeta(rd - dd));
            steps += 1;
        }
        let total = (sd - dd + 1) as u32;
        r.mul_eta_poly(&lead.pow(total - steps))
    }

    /// `P / gcd(P, ∂ζP, ∂ηP)`, lex-monic.
    pub fn squarefree_part(&self) -> Result<Self> {
        let g = self.gcd(&self.partial_zeta())?.gcd(&self.partial_eta())?;
        Ok(self.div_exact(&g).expect("gcd divides the polynomial").lex_monic())
    }
}

/// Interpolates several bivariate polynomials of bidegree at most `(dz, de)`
/// at once. `eval(ζ, η)` returns the value of every polynomial at the grid
/// point; the grid is `ζ ∈ 0..=dz`, `η ∈ 0..=de`.
pub fn interpolate_many<S: Scalar>(
    dz: usize,
    de: usize,
    count: usize,
    mut eval: impl FnMut(&S, &S) -> Vec<S>,
) -> Vec<BiPoly<S>> {
    let mut grids: Vec<Vec<Vec<S>>> = vec![vec![Vec::with_capacity(de + 1); dz + 1]; count];
    for i in 0..=dz {
        let zeta = S::from_int(i as i64);
        for j in 0..=de {
            let values = eval(&zeta, &S::from_int(j as i64));
            assert_eq!(values.len(), count, "interpolate_many: value count");
            for (grid, v) in grids.iter_mut().zip(values) {
                grid[i].push(v);
            }
        }
    }
    grids.iter().map(|g| BiPoly::interpolate_grid(g)).collect()
}

impl<S: Scalar> fmt::Display for BiPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = self.terms();
        terms.sort_by(|a, b| (b.0 + b.1, b.0).cmp(&(a.0 + a.1, a.0)));
        let mut first = true;
        for (i, j, c) in terms {
            let mono = match (i, j) {
                (0, 0) => String::new(),
                _ => {
                    let z = match i {
                        0 => None,
                        1 => Some("zeta".to_string()),
                        _ => Some(format!("zeta^{i}")),
                    };
                    let w = match j {
                        0 => None,
                        1 => Some("eta".to_string()),
                        _ => Some(format!("eta^{j}")),
                    };
                    [z, w].into_iter().flatten().collect::<Vec<_>>().join("*")
                }
            };
            let neg_one = -S::one();
            let (sign, coeff) = if c == S::one() {
                ("+", String::new())
            } else if c == neg_one {
                ("-", String::new())
            } else {
                let s = c.display();
                match s.strip_prefix('-') {
                    Some(rest) => ("-", rest.to_string()),
                    None => ("+", s),
                }
            };
            let body = match (coeff.is_empty(), mono.is_empty()) {
                (true, true) => "1".to_string(),
                (true, false) => mono,
                (false, true) => coeff,
                (false, false) => format!("{coeff}*{mono}"),
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                write!(f, "{body}")?;
                first = false;
            } else {
                write!(f, " {sign} {body}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::{GaussRat, C64};

    fn q(v: i64) -> GaussRat {
        GaussRat::from_int(v)
    }

    fn bp(terms: &[(usize, usize, i64)]) -> BiPoly<GaussRat> {
        BiPoly::from_terms(&terms.iter().map(|&(i, j, c)| (i, j, q(c))).collect::<Vec<_>>())
    }

    #[test]
    fn zero_is_empty_table() {
        let p = bp(&[(1, 1, 1)]);
        assert!(p.sub(&p).zeta_coeffs().is_empty());
        assert_eq!(p.sub(&p), BiPoly::zero());
    }

    #[test]
    fn gcd_examples() {
        let c = bp(&[(1, 1, 1), (0, 0, -1)]); // ζη − 1
        let sq = c.mul(&c);
        assert_eq!(sq.gcd(&sq.partial_zeta()).unwrap(), c);
        assert_eq!(c.gcd(&bp(&[(1, 0, 1), (0, 1, 1)])).unwrap(), BiPoly::one());
        assert_eq!(sq.scale(&q(3)).gcd(&BiPoly::zero()).unwrap(), sq);
        assert_eq!(sq.squarefree_part().unwrap(), c);
    }

    #[test]
    fn gcd_with_eta_content() {
        // (1 − η)(ζη − 1) and (1 − η)(ζ + 2)
        let a = bp(&[(0, 0, 1), (0, 1, -1)]);
        let p = a.mul(&bp(&[(1, 1, 1), (0, 0, -1)]));
        let r = a.mul(&bp(&[(1, 0, 1), (0, 0, 2)]));
        assert_eq!(p.gcd(&r).unwrap(), a.lex_monic());
    }

    #[test]
    fn gcd_rejects_float() {
        let p = BiPoly::<C64>::one();
        assert!(matches!(p.gcd(&p), Err(Error::BackendUnsupported(_))));
    }

    #[test]
    fn exact_division() {
        let c = bp(&[(1, 1, 1), (0, 0, -1)]);
        let d = bp(&[(2, 0, 1), (0, 2, 3), (1, 1, -1)]);
        assert_eq!(c.mul(&d).div_exact(&c), Some(d.clone()));
        assert_eq!(d.div_exact(&c), None);
    }

    #[test]
    fn grid_interpolation() {
        let p = bp(&[(2, 1, 3), (0, 0, -1), (1, 2, 5)]);
        let values: Vec<Vec<GaussRat>> = (0..3).map(|i| (0..3).map(|j| p.eval(&q(i), &q(j))).collect()).collect();
        assert_eq!(BiPoly::interpolate_grid(&values), p);
    }

    #[test]
    fn display() {
        assert_eq!(bp(&[(1, 1, 1), (0, 0, -1)]).to_string(), "zeta*eta - 1");
        assert_eq!(bp(&[(0, 1, -2), (2, 0, 1)]).to_string(), "zeta^2 - 2*eta");
    }
}
