//! Sparse multivariate polynomials over complex doubles.
//!
//! Terms are kept in a [`BTreeMap`] keyed by [`Exponent`], whose ordering is
//! the graded column order used by the Macaulay matrix: higher total degree
//! first, then ascending in `e_1`, then `e_2`, and so on. Iterating a
//! polynomial's terms therefore visits them in Macaulay column order, which
//! keeps evaluation and matrix assembly bit-reproducible.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Exponent vector of a monomial `x_1^{e_1} ... x_n^{e_n}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Exponent(Vec<u32>);

impl Exponent {
    pub fn new(exps: Vec<u32>) -> Self {
        Exponent(exps)
    }

    /// The constant monomial `1` in `n` variables.
    pub fn zero(n: usize) -> Self {
        Exponent(vec![0; n])
    }

    /// The monomial `x_i` (0-based `i`) in `n` variables.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Exponent(e)
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Exponent of the product monomial.
    pub fn mul(&self, other: &Exponent) -> Exponent {
        debug_assert_eq!(self.n(), other.n());
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Exponent of `x_i * self`.
    pub fn shifted(&self, i: usize) -> Exponent {
        let mut e = self.0.clone();
        e[i] += 1;
        Exponent(e)
    }

    /// Evaluates the monomial at `z`.
    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        self.0
            .iter()
            .zip(z)
            .fold(Complex64::new(1.0, 0.0), |acc, (&e, &zi)| acc * zi.powu(e))
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .total_degree()
            .cmp(&self.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.total_degree() == 0 {
            return write!(f, "1");
        }
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "x{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial in `n` variables with complex coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<Exponent, Complex64>,
}

impl Polynomial {
    /// Builds a polynomial from `(exponent, coefficient)` pairs. Repeated
    /// exponents are summed and zero coefficients dropped.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, Complex64)>,
    {
        let mut map = BTreeMap::new();
        for (exp, coef) in terms {
            if exp.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: exp.n(),
                });
            }
            if !(coef.re.is_finite() && coef.im.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "non-finite coefficient for monomial {exp}"
                )));
            }
            *map.entry(exp).or_insert_with(Complex64::zero) += coef;
        }
        map.retain(|_, c| !c.is_zero());
        Ok(Polynomial { n, terms: map })
    }

    /// Convenience constructor for real coefficients.
    pub fn from_real_terms(n: usize, terms: &[(&[u32], f64)]) -> Result<Self> {
        Self::from_terms(
            n,
            terms
                .iter()
                .map(|(e, c)| (Exponent::new(e.to_vec()), Complex64::new(*c, 0.0))),
        )
    }

    pub fn zero(n: usize) -> Self {
        Polynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; `0` for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(Exponent::total_degree)
            .max()
            .unwrap_or(0)
    }

    /// Terms in graded column order (highest degree first).
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &Complex64)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, exp: &Exponent) -> Complex64 {
        self.terms.get(exp).copied().unwrap_or_else(Complex64::zero)
    }

    /// Evaluates the polynomial at `z`, summing terms in column order.
    pub fn eval(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: z.len(),
            });
        }
        Ok(self
            .terms
            .iter()
            .fold(Complex64::zero(), |acc, (e, c)| acc + c * e.eval(z)))
    }

    /// Partial derivative with respect to `x_i` (0-based).
    pub fn derivative(&self, i: usize) -> Polynomial {
        let terms = self.terms.iter().filter_map(|(e, c)| {
            let k = e.exps()[i];
            (k > 0).then(|| {
                let mut exps = e.exps().to_vec();
                exps[i] -= 1;
                (Exponent::new(exps), c * k as f64)
            })
        });
        Polynomial::from_terms(self.n, terms).expect("derivative preserves dimension")
    }

    /// Returns `a * self + other`.
    pub fn axpy(&self, a: Complex64, other: &Polynomial) -> Result<Polynomial> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                actual: other.n,
            });
        }
        let scaled = self.terms.iter().map(|(e, c)| (e.clone(), a * c));
        let rest = other.terms.iter().map(|(e, c)| (e.clone(), *c));
        Polynomial::from_terms(self.n, scaled.chain(rest))
    }

    /// Sum of coefficient magnitudes weighted by `max(1, s)^{deg}`; the
    /// denominator of the scale-invariant residual.
    pub fn weighted_coef_norm(&self, s: f64) -> f64 {
        let base = s.max(1.0);
        self.terms
            .iter()
            .map(|(e, c)| c.norm() * base.powi(e.total_degree() as i32))
            .sum()
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let coef = if c.im == 0.0 {
                    format!("{}", c.re)
                } else {
                    format!("({}{:+}i)", c.re, c.im)
                };
                format!("{coef}*{e}")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// A square system of `n` polynomials in `n` variables.
#[derive(Debug, Clone, PartialEq)]
pub struct PolySystem {
    n: usize,
    polys: Vec<Polynomial>,
}

impl PolySystem {
    pub fn new(polys: Vec<Polynomial>) -> Result<Self> {
        let n = polys.len();
        if n == 0 {
            return Err(Error::InvalidInput("empty polynomial system".into()));
        }
        for (i, p) in polys.iter().enumerate() {
            if p.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    actual: p.n(),
                });
            }
            if p.degree() < 1 {
                return Err(Error::InvalidInput(format!(
                    "polynomial {i} has degree 0; every equation needs degree >= 1"
                )));
            }
        }
        Ok(PolySystem { n, polys })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    /// Degrees `beta_1, ..., beta_n`.
    pub fn degrees(&self) -> Vec<u32> {
        self.polys.iter().map(Polynomial::degree).collect()
    }

    /// Macaulay degree `1 - n + sum(beta_i)`.
    pub fn macaulay_degree(&self) -> u32 {
        macaulay_degree(&self.degrees())
    }

    /// Bezout number `prod(beta_i)`, the root count of a generic system.
    pub fn bezout_count(&self) -> usize {
        bezout_count(&self.degrees())
    }

    /// Evaluates every polynomial at `z`.
    pub fn eval(&self, z: &[Complex64]) -> Result<Vec<Complex64>> {
        self.polys.iter().map(|p| p.eval(z)).collect()
    }

    /// Analytic Jacobian at `z`; entry `(i, j)` is `d p_i / d x_j`.
    pub fn jacobian(&self, z: &[Complex64]) -> Result<DMatrix<Complex64>> {
        let mut jac = DMatrix::zeros(self.n, self.n);
        for (i, p) in self.polys.iter().enumerate() {
            for j in 0..self.n {
                jac[(i, j)] = p.derivative(j).eval(z)?;
            }
        }
        Ok(jac)
    }

    /// Scale-invariant backward-style residual
    /// `max_i |p_i(z)| / sum_a |c_{i,a}| max(1, |z|_inf)^{deg a}`.
    pub fn residual(&self, z: &[Complex64]) -> Result<f64> {
        let zmax = z.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut worst: f64 = 0.0;
        for p in &self.polys {
            let value = p.eval(z)?.norm();
            let scale = p.weighted_coef_norm(zmax);
            let r = if scale > 0.0 { value / scale } else { value };
            worst = worst.max(r);
        }
        Ok(worst)
    }
}

/// Macaulay degree `1 - n + sum(beta_i)` for the given degrees.
pub fn macaulay_degree(degrees: &[u32]) -> u32 {
    let sum: u32 = degrees.iter().sum();
    1 + sum - degrees.len() as u32
}

/// Bezout number `prod(beta_i)`.
pub fn bezout_count(degrees: &[u32]) -> usize {
    degrees.iter().map(|&b| b as usize).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn paper_p1() -> Polynomial {
        // y^2 + 3xy - 4x + 1 with variables (x, y)
        Polynomial::from_real_terms(
            2,
            &[(&[0, 2], 1.0), (&[1, 1], 3.0), (&[1, 0], -4.0), (&[0, 0], 1.0)],
        )
        .unwrap()
    }

    fn paper_p2() -> Polynomial {
        Polynomial::from_real_terms(
            2,
            &[(&[1, 1], -6.0), (&[2, 0], -2.0), (&[0, 1], 6.0), (&[0, 0], 3.0)],
        )
        .unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(paper_p1().eval(&[c(0.0), c(0.0)]).unwrap(), c(1.0));
        assert_eq!(paper_p1().eval(&[c(1.0), c(1.0)]).unwrap(), c(1.0));
        assert_eq!(paper_p2().eval(&[c(0.0), c(1.0)]).unwrap(), c(9.0));
    }

    #[test]
    fn eval_dimension_mismatch() {
        let err = paper_p1().eval(&[c(0.0)]).unwrap_err();
        assert_eq!(err, Error::DimensionMismatch { expected: 2, actual: 1 });
    }

    #[test]
    fn column_order_of_terms() {
        let order: Vec<Vec<u32>> = paper_p1().terms().map(|(e, _)| e.exps().to_vec()).collect();
        assert_eq!(order, vec![vec![0, 2], vec![1, 1], vec![1, 0], vec![0, 0]]);
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let p = Polynomial::from_real_terms(1, &[(&[2], 1.0), (&[2], -1.0), (&[1], 2.0)]).unwrap();
        assert_eq!(p.num_terms(), 1);
        assert_eq!(p.degree(), 1);
    }

    #[test]
    fn macaulay_degree_examples() {
        assert_eq!(macaulay_degree(&[2, 2]), 3);
        assert_eq!(macaulay_degree(&[1, 1, 1]), 1);
        assert_eq!(macaulay_degree(&[3, 2, 2]), 5);
    }

    #[test]
    fn bezout_examples() {
        assert_eq!(bezout_count(&[2, 2]), 4);
        assert_eq!(bezout_count(&[1, 1, 1]), 1);
        assert_eq!(bezout_count(&[3, 2]), 6);
    }

    #[test]
    fn system_rejects_bad_shapes() {
        assert!(PolySystem::new(vec![paper_p1()]).is_err());
        let constant = Polynomial::from_real_terms(1, &[(&[0], 2.0)]).unwrap();
        assert!(PolySystem::new(vec![constant]).is_err());
        let sys = PolySystem::new(vec![paper_p1(), paper_p2()]).unwrap();
        assert_eq!(sys.degrees(), vec![2, 2]);
        assert_eq!(sys.macaulay_degree(), 3);
        assert_eq!(sys.bezout_count(), 4);
    }

    #[test]
    fn jacobian_and_residual() {
        let sys = PolySystem::new(vec![
            Polynomial::from_real_terms(2, &[(&[2, 0], 1.0), (&[0, 0], -1.0)]).unwrap(),
            Polynomial::from_real_terms(2, &[(&[0, 2], 1.0), (&[0, 0], -4.0)]).unwrap(),
        ])
        .unwrap();
        let z = [c(1.0), c(2.0)];
        let jac = sys.jacobian(&z).unwrap();
        assert_eq!(jac[(0, 0)], c(2.0));
        assert_eq!(jac[(1, 1)], c(4.0));
        assert_eq!(jac[(0, 1)], c(0.0));
        assert_eq!(sys.residual(&z).unwrap(), 0.0);
    }

    #[test]
    fn quadratic_macaulay_degree_is_n_plus_one() {
        for n in 1..8u32 {
            assert_eq!(macaulay_degree(&vec![2; n as usize]), n + 1);
        }
    }

    #[test]
    fn bezout_multiplicative_under_appended_factor() {
        let base = [3u32, 2, 4];
        for extra in 1..6u32 {
            let mut ext = base.to_vec();
            ext.push(extra);
            assert_eq!(bezout_count(&ext), bezout_count(&base) * extra as usize);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn cplx() -> impl Strategy<Value = Complex64> {
            (-2.0f64..2.0, -2.0f64..2.0).prop_map(|(a, b)| Complex64::new(a, b))
        }

        fn poly2() -> impl Strategy<Value = Polynomial> {
            prop::collection::vec(((0u32..4, 0u32..4), cplx()), 1..8).prop_map(|ts| {
                Polynomial::from_terms(
                    2,
                    ts.into_iter().map(|((a, b), c)| (Exponent::new(vec![a, b]), c)),
                )
                .unwrap()
            })
        }

        proptest! {
            #[test]
            fn eval_is_linear(p in poly2(), q in poly2(), a in cplx(), z0 in cplx(), z1 in cplx()) {
                let z = [z0, z1];
                let lhs = p.axpy(a, &q).unwrap().eval(&z).unwrap();
                let rhs = a * p.eval(&z).unwrap() + q.eval(&z).unwrap();
                // Rounding is bounded by the sum of term magnitudes, not by |rhs|.
                let scale = (a.norm() * p.weighted_coef_norm(2.0) + q.weighted_coef_norm(2.0))
                    * 2f64.powi(6);
                prop_assert!((lhs - rhs).norm() <= 8.0 * f64::EPSILON * scale.max(1.0));
            }
        }
    }
}
