//! Hirzebruch–Jung continued fractions `-p/q = n_1 - 1/(n_2 - 1/(... - 1/n_k))`
//! with every `n_i <= -2`, and the linear plumbing trees they describe.

use num_integer::Integer;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{GraphError, PlumbingTree};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ContFracError {
    #[error("invalid lens space parameters ({p}, {q}): need p > q >= 1 with gcd(p, q) = 1")]
    InvalidParams { p: i64, q: i64 },
    #[error("coefficient {0} is greater than -2")]
    CoefficientTooLarge(i64),
    #[error("empty expansion")]
    Empty,
    #[error("arithmetic overflow while evaluating the expansion")]
    Overflow,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Parameters of the lens space `L(p, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LensParams {
    p: i64,
    q: i64,
}

impl LensParams {
    pub fn new(p: i64, q: i64) -> Result<Self, ContFracError> {
        if q < 1 || p <= q || p.gcd(&q) != 1 {
            return Err(ContFracError::InvalidParams { p, q });
        }
        Ok(LensParams { p, q })
    }

    pub fn p(&self) -> i64 {
        self.p
    }

    pub fn q(&self) -> i64 {
        self.q
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HjExpansion {
    coefficients: Vec<i64>,
}

impl HjExpansion {
    pub fn new(coefficients: Vec<i64>) -> Result<Self, ContFracError> {
        if coefficients.is_empty() {
            return Err(ContFracError::Empty);
        }
        if let Some(&c) = coefficients.iter().find(|&&c| c > -2) {
            return Err(ContFracError::CoefficientTooLarge(c));
        }
        Ok(HjExpansion { coefficients })
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }
}

/// Expands `-p/q` by repeated ceiling division.
pub fn hj_expand(params: LensParams) -> HjExpansion {
    let (mut p, mut q) = (params.p, params.q);
    let mut coefficients = Vec::new();
    while q != 0 {
        let a = Integer::div_ceil(&p, &q);
        coefficients.push(-a);
        (p, q) = (q, a * q - p);
    }
    HjExpansion { coefficients }
}

/// Evaluates the expansion back to the reduced pair `(p, q)`.
pub fn hj_evaluate(exp: &HjExpansion) -> Result<(i64, i64), ContFracError> {
    let mut iter = exp.coefficients.iter().rev();
    let last = *iter.next().ok_or(ContFracError::Empty)?;
    let (mut p, mut q) = (-last, 1i64);
    for &n in iter {
        // -n - q/p = (-n p - q) / p
        let next = (-n)
            .checked_mul(p)
            .and_then(|x| x.checked_sub(q))
            .ok_or(ContFracError::Overflow)?;
        (p, q) = (next, p);
    }
    Ok((p, q))
}

/// The linear plumbing `v1 - ... - vk` whose boundary is `L(p, q)`.
pub fn lens_tree(params: LensParams) -> Result<PlumbingTree, ContFracError> {
    Ok(PlumbingTree::linear(hj_expand(params).coefficients())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Exact rational value of the continued fraction, as a reduced (num, den)
    /// with den > 0. Folds from the right with plain fraction arithmetic.
    fn value(coeffs: &[i64]) -> (i64, i64) {
        let mut num = *coeffs.last().unwrap();
        let mut den = 1i64;
        for &c in coeffs.iter().rev().skip(1) {
            // c - den/num
            let (n2, d2) = (c * num - den, num);
            let g = n2.gcd(&d2);
            num = n2 / g;
            den = d2 / g;
            if den < 0 {
                num = -num;
                den = -den;
            }
        }
        (num, den)
    }

    #[test]
    fn expansion_examples() {
        let exp = |p, q| hj_expand(LensParams::new(p, q).unwrap()).coefficients().to_vec();
        assert_eq!(exp(2, 1), vec![-2]);
        assert_eq!(exp(7, 4), vec![-2, -4]);
        assert_eq!(exp(5, 2), vec![-3, -2]);
        assert_eq!(value(&[-2, -4]), (-7, 4));
        assert_eq!(value(&[-3, -2]), (-5, 2));
    }

    #[test]
    fn evaluation_examples() {
        let ev = |c: &[i64]| hj_evaluate(&HjExpansion::new(c.to_vec()).unwrap()).unwrap();
        assert_eq!(ev(&[-2]), (2, 1));
        assert_eq!(ev(&[-2, -2]), (3, 2));
        assert_eq!(ev(&[-2, -4]), (7, 4));
        assert_eq!(
            HjExpansion::new(vec![-2, -1]),
            Err(ContFracError::CoefficientTooLarge(-1))
        );
    }

    #[test]
    fn invalid_params() {
        assert!(LensParams::new(3, 3).is_err());
        assert!(LensParams::new(4, 2).is_err());
        assert!(LensParams::new(4, 0).is_err());
        assert!(LensParams::new(2, 3).is_err());
    }

    #[test]
    fn expansion_value_matches_rational_oracle() {
        for p in 2..60 {
            for q in 1..p {
                if p.gcd(&q) != 1 {
                    continue;
                }
                let c = hj_expand(LensParams::new(p, q).unwrap());
                assert!(c.coefficients().iter().all(|&n| n <= -2));
                assert_eq!(value(c.coefficients()), (-p, q));
            }
        }
    }

    #[test]
    fn lens_trees() {
        let t = lens_tree(LensParams::new(2, 1).unwrap()).unwrap();
        assert_eq!(t.serialize(), "vertex v1 -2\n");
        let t = lens_tree(LensParams::new(7, 4).unwrap()).unwrap();
        assert_eq!(t, PlumbingTree::linear(&[-2, -4]).unwrap());
        let t = lens_tree(LensParams::new(3, 2).unwrap()).unwrap();
        assert_eq!(t, PlumbingTree::linear(&[-2, -2]).unwrap());
        assert!(t.validate().non_positive);
    }
}
