//! Univariate polynomials over [`Cyclotomic`], used for exact eigenvalue multiplicities.

use crate::cyclotomic::Cyclotomic;

/// Coefficients lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(Vec<Cyclotomic>);

impl Poly {
    pub fn new(mut coeffs: Vec<Cyclotomic>) -> Self {
        while coeffs.last().is_some_and(Cyclotomic::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    /// `x − root`.
    pub fn linear(root: &Cyclotomic) -> Self {
        Poly::new(vec![-root, Cyclotomic::one()])
    }

    pub fn coeffs(&self) -> &[Cyclotomic] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Cyclotomic) -> Cyclotomic {
        self.0
            .iter()
            .rev()
            .fold(Cyclotomic::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Cyclotomic::from_integer(k as i64))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        match self.0.last() {
            Some(lead) => {
                let inv = lead.inv().expect("nonzero leading coefficient");
                Poly(self.0.iter().map(|c| c * &inv).collect())
            }
            None => self.clone(),
        }
    }

    /// Quotient and remainder of division by a nonzero polynomial.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = d.0[dd].inv().expect("nonzero leading coefficient");
        let mut rem = self.0.clone();
        if rem.len() <= dd {
            return (Poly::new(Vec::new()), self.clone());
        }
        let mut quot = vec![Cyclotomic::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (i, di) in d.0.iter().enumerate() {
                rem[k + i] -= &(&c * di);
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Number of distinct roots in an algebraic closure.
    pub fn distinct_root_count(&self) -> usize {
        let Some(deg) = self.degree() else { return 0 };
        let g = self.gcd(&self.derivative());
        deg - g.degree().unwrap_or(0)
    }

    /// Multiplicity of `root` as a root of the polynomial.
    pub fn root_multiplicity(&self, root: &Cyclotomic) -> usize {
        let lin = Poly::linear(root);
        let mut p = self.clone();
        let mut k = 0;
        while !p.is_zero() {
            let (q, r) = p.div_rem(&lin);
            if !r.is_zero() {
                break;
            }
            p = q;
            k += 1;
        }
        k
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: i64) -> Cyclotomic {
        Cyclotomic::from_integer(n)
    }

    #[test]
    fn multiplicities_of_repeated_root() {
        // (x − 1)²(x + 2) = x³ − 3x + 2
        let p = Poly::new(vec![c(2), c(-3), c(0), c(1)]);
        assert_eq!(p.root_multiplicity(&c(1)), 2);
        assert_eq!(p.root_multiplicity(&c(-2)), 1);
        assert_eq!(p.root_multiplicity(&c(0)), 0);
        assert_eq!(p.distinct_root_count(), 2);
    }

    #[test]
    fn cyclotomic_roots() {
        // x² + x + 1 has roots ω, ω²
        let p = Poly::new(vec![c(1), c(1), c(1)]);
        assert_eq!(p.root_multiplicity(&Cyclotomic::root_of_unity(3, 1)), 1);
        assert_eq!(p.distinct_root_count(), 2);
        assert!(p.eval(&Cyclotomic::root_of_unity(3, 2)).is_zero());
    }

    #[test]
    fn gcd_is_monic() {
        let a = Poly::new(vec![c(-2), c(2)]); // 2x − 2
        let b = Poly::new(vec![c(-1), c(0), c(1)]); // x² − 1
        assert_eq!(a.gcd(&b), Poly::new(vec![c(-1), c(1)]));
    }
}
