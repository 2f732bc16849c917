//! Rational maps `R(ζ) = Y + G(ζ − X)⁻¹F = Y + Σ Rᵢ/(ζ − ζᵢ)` and the
//! finite data of their orbits.

mod boundary;

pub use boundary::{boundary_data, free_properness_check, BoundaryData, Direction};

use crate::algebra::{CMatrix, ConjClassInvariant, Scalar, ToleranceConfig};
use crate::error::{Error, Result};
use crate::pencil::Quadruple;
use crate::poisson::split_x;

#[derive(Clone, Debug, PartialEq)]
pub struct RationalMap<S> {
    pub y: CMatrix<S>,
    /// Distinct, ascending by (re, im).
    pub poles: Vec<S>,
    /// `l × l` residue at each pole.
    pub residues: Vec<CMatrix<S>>,
}

impl<S: Scalar> RationalMap<S> {
    /// Sorts the poles and checks that they are distinct and that the
    /// residues are `l × l`.
    pub fn new(y: CMatrix<S>, poles: Vec<S>, residues: Vec<CMatrix<S>>) -> Result<Self> {
        let l = y.rows();
        if !y.is_square() {
            return Err(Error::NotSquare {
                rows: y.rows(),
                cols: y.cols(),
            });
        }
        if poles.len() != residues.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} poles but {} residues",
                poles.len(),
                residues.len()
            )));
        }
        if let Some(r) = residues.iter().find(|r| r.rows() != l || r.cols() != l) {
            return Err(Error::DimensionMismatch(format!(
                "residue is {}x{}, expected {l}x{l}",
                r.rows(),
                r.cols()
            )));
        }
        let mut pairs: Vec<(S, CMatrix<S>)> = poles.into_iter().zip(residues).collect();
        pairs.sort_by(|a, b| a.0.cmp_re_im(&b.0));
        if pairs.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidArgument("poles must be distinct".into()));
        }
        let (poles, residues) = pairs.into_iter().unzip();
        Ok(Self { y, poles, residues })
    }

    pub fn l(&self) -> usize {
        self.y.rows()
    }

    /// `R(ζ)`, or `None` at a pole.
    pub fn eval(&self, zeta: &S) -> Option<CMatrix<S>> {
        let mut out = self.y.clone();
        for (p, r) in self.poles.iter().zip(&self.residues) {
            let d = zeta.clone() - p.clone();
            if d.is_zero() {
                return None;
            }
            out = &out + &r.scale(&(S::one() / d));
        }
        Some(out)
    }

    pub fn residue_ranks(&self, tol: &ToleranceConfig) -> Vec<usize> {
        self.residues.iter().map(|r| r.rank(tol)).collect()
    }
}

/// `Y + G(ζ − X)⁻¹F` straight from the quadruple, or `None` when `ζ` is an
/// eigenvalue of `X`.
pub fn resolvent_form<S: Scalar>(q: &Quadruple<S>, zeta: &S) -> Option<CMatrix<S>> {
    let shifted = &CMatrix::scalar(q.k(), zeta.clone()) - &q.x;
    let inv = shifted.inverse()?;
    Some(&q.y + &(&(&q.g * &inv) * &q.f))
}

/// Poles at the eigenvalues of `X`, residues `GᵢFᵢ`.
pub fn to_rational_map<S: Scalar>(q: &Quadruple<S>, tol: &ToleranceConfig) -> Result<RationalMap<S>> {
    let split = split_x(q, tol)?;
    let poles = split.diag.eigenvalues.iter().map(|(z, _)| z.clone()).collect();
    let residues = split.g_blocks.iter().zip(&split.f_blocks).map(|(g, f)| g * f).collect();
    RationalMap::new(q.y.clone(), poles, residues)
}

/// `X = diag(ζᵢ·I_kᵢ)` with `kᵢ = rank Rᵢ`, and `Rᵢ = GᵢFᵢ` factored as
/// pivot columns times the nonzero rows of the reduced echelon form.
pub fn from_rational_map<S: Scalar>(r: &RationalMap<S>, tol: &ToleranceConfig) -> Quadruple<S> {
    let l = r.l();
    let mut diag = Vec::new();
    let mut f = CMatrix::zeros(0, l);
    let mut g = CMatrix::zeros(l, 0);
    for (pole, residue) in r.poles.iter().zip(&r.residues) {
        let (cols, rows) = residue.rank_factorization(tol);
        diag.extend(std::iter::repeat_n(pole.clone(), rows.rows()));
        f = f.vstack(&rows);
        g = g.hstack(&cols);
    }
    Quadruple::new(CMatrix::diagonal(&diag), r.y.clone(), f, g).expect("shapes are consistent")
}

/// `Q₀` (class of `Y`) and `Q₁ … Q_r` (classes of the residues).
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitSpec<S> {
    pub poles: Vec<S>,
    pub q0: ConjClassInvariant<S>,
    pub residue_classes: Vec<ConjClassInvariant<S>>,
    /// Set when `Y` or a residue is not diagonalisable; the classes are
    /// still complete invariants, but the orbit description assumes
    /// semisimple data.
    pub non_semisimple: bool,
}

impl<S: Scalar> OrbitSpec<S> {
    /// `kᵢ = rank Qᵢ`.
    pub fn ranks(&self) -> Vec<usize> {
        self.residue_classes.iter().map(|c| c.rank).collect()
    }

    pub fn k(&self) -> usize {
        self.ranks().iter().sum()
    }

    pub fn agrees(&self, other: &Self, tol: f64) -> bool {
        self.poles.len() == other.poles.len()
            && self.poles.iter().zip(&other.poles).all(|(a, b)| a.approx_eq(b, tol))
            && self.q0.agrees(&other.q0, tol)
            && self.residue_classes.len() == other.residue_classes.len()
            && self
                .residue_classes
                .iter()
                .zip(&other.residue_classes)
                .all(|(a, b)| a.agrees(b, tol))
    }
}

pub fn orbit_invariants<S: Scalar>(r: &RationalMap<S>, tol: &ToleranceConfig) -> Result<OrbitSpec<S>> {
    let q0 = ConjClassInvariant::of(&r.y, tol)?;
    let residue_classes = r
        .residues
        .iter()
        .map(|m| ConjClassInvariant::of(m, tol))
        .collect::<Result<Vec<_>>>()?;
    let non_semisimple = !q0.semisimple || residue_classes.iter().any(|c| !c.semisimple);
    Ok(OrbitSpec {
        poles: r.poles.clone(),
        q0,
        residue_classes,
        non_semisimple,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GaussRat;
    use crate::pencil::act_k;

    fn q(v: i64) -> GaussRat {
        GaussRat::from_int(v)
    }

    fn m(rows: &[&[i64]]) -> CMatrix<GaussRat> {
        CMatrix::from_rows(
            &rows
                .iter()
                .map(|r| r.iter().map(|&v| q(v)).collect())
                .collect::<Vec<_>>(),
        )
    }

    fn e1() -> Quadruple<GaussRat> {
        Quadruple::new(m(&[&[0]]), m(&[&[0]]), m(&[&[1]]), m(&[&[1]])).unwrap()
    }

    #[test]
    fn e1_is_one_over_zeta() {
        let tol = ToleranceConfig::default();
        let r = to_rational_map(&e1(), &tol).unwrap();
        assert_eq!(r.poles, vec![q(0)]);
        assert_eq!(r.residues, vec![m(&[&[1]])]);
        assert_eq!(r.y, m(&[&[0]]));
        assert_eq!(from_rational_map(&r, &tol), e1());
        let spec = orbit_invariants(&r, &tol).unwrap();
        assert_eq!(spec.ranks(), vec![1]);
        assert!(!spec.non_semisimple);
    }

    #[test]
    fn two_simple_poles_and_gauge_invariance() {
        let tol = ToleranceConfig::default();
        let quad = Quadruple::new(
            m(&[&[1, 0], &[0, 2]]),
            m(&[&[0, 1], &[1, 0]]),
            m(&[&[1, 2], &[3, 1]]),
            m(&[&[1, 0], &[2, 1]]),
        )
        .unwrap();
        let r = to_rational_map(&quad, &tol).unwrap();
        assert_eq!(r.poles, vec![q(1), q(2)]);
        assert_eq!(r.residue_ranks(&tol), vec![1, 1]);
        let moved = act_k(&quad, &m(&[&[1, 1], &[0, 1]]), &CMatrix::identity(2)).unwrap();
        assert_eq!(to_rational_map(&moved, &tol).unwrap(), r);
        for z in [q(0), q(5), GaussRat::from_parts_i64(1, 1)] {
            assert_eq!(r.eval(&z), resolvent_form(&quad, &z));
        }
        assert_eq!(r.eval(&q(1)), None);
    }

    #[test]
    fn constant_map_has_no_poles() {
        let tol = ToleranceConfig::default();
        let r = RationalMap::new(m(&[&[1, 2], &[3, 4]]), vec![], vec![]).unwrap();
        let quad = from_rational_map(&r, &tol);
        assert_eq!((quad.k(), quad.l()), (0, 2));
    }

    #[test]
    fn orbit_spec_separates_scaled_residues() {
        let tol = ToleranceConfig::default();
        let r = to_rational_map(&e1(), &tol).unwrap();
        let scaled = RationalMap::new(r.y.clone(), r.poles.clone(), vec![m(&[&[2]])]).unwrap();
        let a = orbit_invariants(&r, &tol).unwrap();
        let b = orbit_invariants(&scaled, &tol).unwrap();
        assert!(!a.agrees(&b, 0.0));
    }

    #[test]
    fn repeated_poles_are_rejected() {
        let err = RationalMap::new(m(&[&[0]]), vec![q(1), q(1)], vec![m(&[&[1]]), m(&[&[2]])]);
        assert!(matches!(err, Err(Error::InvalidArgument(_))));
    }
}
