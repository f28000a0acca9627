//! Truncated power series in one variable `z`.
//!
//! A series of order `n` knows its coefficients of `z^0 ..= z^n` exactly;
//! anything above is unknown and reading it is an error.

use std::fmt;

use super::{Polynomial, Rational};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<Rational>,
    order: usize,
}

impl PowerSeries {
    /// Takes the coefficients of `z^0 ..= z^order`; missing entries are zero
    /// and entries above `order` are dropped.
    pub fn new(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        PowerSeries { coeffs, order }
    }

    pub fn one(order: usize) -> Self {
        Self::new(vec![Rational::one()], order)
    }

    pub fn from_polynomial(p: &Polynomial, order: usize) -> Self {
        Self::new(p.coeffs().to_vec(), order)
    }

    pub fn truncation_order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, n: usize) -> Result<&Rational> {
        self.coeffs.get(n).ok_or(Error::TruncationExceeded {
            requested: n,
            order: self.order,
        })
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn mul(&self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.order.min(rhs.order);
        let mut out = vec![Rational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(order + 1 - i) {
                out[i + j] += a * b;
            }
        }
        PowerSeries { coeffs: out, order }
    }

    pub fn add(&self, rhs: &PowerSeries) -> PowerSeries {
        let order = self.order.min(rhs.order);
        let coeffs = (0..=order).map(|i| &self.coeffs[i] + &rhs.coeffs[i]).collect();
        PowerSeries { coeffs, order }
    }

    pub fn pow(&self, exp: u32) -> PowerSeries {
        (0..exp).fold(Self::one(self.order), |acc, _| acc.mul(self))
    }

    /// `self / rhs`; requires a nonzero constant term in `rhs`.
    pub fn checked_div(&self, rhs: &PowerSeries) -> Result<PowerSeries> {
        let order = self.order.min(rhs.order);
        let inv0 = rhs.coeffs[0].recip()?;
        let mut out: Vec<Rational> = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut acc = self.coeffs[n].clone();
            for (k, q) in out.iter().enumerate() {
                acc -= q * &rhs.coeffs[n - k];
            }
            out.push(acc * &inv0);
        }
        Ok(PowerSeries { coeffs: out, order })
    }

    /// `s(k z)`: the `z^n` coefficient is scaled by `k^n`.
    pub fn scale_arg(&self, k: u64) -> PowerSeries {
        let k = Rational::from_int(k);
        let mut factor = Rational::one();
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let out = c * &factor;
                factor *= &k;
                out
            })
            .collect();
        PowerSeries { coeffs, order: self.order }
    }
}

/// `S(z) = sinh(z/2) / (z/2) = Σ_n (z/2)^{2n} / (2n+1)!`, truncated at `z^order`.
pub fn s_series(order: usize) -> PowerSeries {
    let coeffs = (0..=order)
        .map(|n| {
            if n % 2 == 1 {
                return Rational::zero();
            }
            let denom = Rational::from_int(num_bigint::BigInt::from(2u32).pow(n as u32))
                * Rational::factorial(n as u64 + 1);
            denom.recip().expect("positive")
        })
        .collect();
    PowerSeries { coeffs, order }
}

pub fn series_scale_arg(s: &PowerSeries, k: u64) -> PowerSeries {
    s.scale_arg(k)
}

/// Truncation order sufficient for every ρ-coefficient of `C̄_{m+1}`.
pub fn default_order(m: usize) -> usize {
    2 * m + 2
}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = Polynomial::new(self.coeffs.clone());
        write!(f, "{} + O(z^{})", p.render("z"), self.order + 1)
    }
}
