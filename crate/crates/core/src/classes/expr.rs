use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::exact::{Rational, XiPolynomial};
use crate::trees::MarkedTree;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    Singularity,
    Basic,
}

impl Basis {
    pub fn name(self) -> &'static str {
        match self {
            Basis::Singularity => "singularity",
            Basis::Basic => "basic",
        }
    }
}

/// Homogeneous linear combination of tree classes with coefficients in ℚ[ξ].
///
/// Every monomial `c ξ^e [T]` satisfies `e + codim(T) = codim()`. Stored
/// trees never vanish and point classes are kept as stars.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassExpr {
    basis: Basis,
    codim: u32,
    terms: BTreeMap<MarkedTree, XiPolynomial>,
}

impl ClassExpr {
    pub fn zero(basis: Basis, codim: u32) -> Self {
        ClassExpr {
            basis,
            codim,
            terms: BTreeMap::new(),
        }
    }

    /// The unit class, the stick marked 0 in either basis.
    pub fn unit(basis: Basis) -> Self {
        Self::from_tree(basis, MarkedTree::stick(0))
    }

    pub fn from_tree(basis: Basis, tree: MarkedTree) -> Self {
        let mut out = Self::zero(basis, tree.codim());
        out.add_tree(tree, &XiPolynomial::one()).expect("homogeneous by construction");
        out
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn codim(&self) -> u32 {
        self.codim
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&MarkedTree, &XiPolynomial)> {
        self.terms.iter()
    }

    pub fn trees(&self) -> impl Iterator<Item = &MarkedTree> {
        self.terms.keys()
    }

    pub fn coefficient(&self, tree: &MarkedTree, xi_power: usize) -> Rational {
        self.terms.get(tree).map(|p| p.coeff(xi_power)).unwrap_or_default()
    }

    pub fn coefficient_poly(&self, tree: &MarkedTree) -> XiPolynomial {
        self.terms.get(tree).cloned().unwrap_or_default()
    }

    /// Adds `coeff · [tree]`, dropping vanishing trees and merging like terms.
    pub fn add_tree(&mut self, tree: MarkedTree, coeff: &XiPolynomial) -> Result<()> {
        let Some(tree) = tree.reduce() else {
            return Ok(());
        };
        for (e, _) in coeff.terms() {
            if tree.codim() + e as u32 != self.codim {
                return Err(Error::Constraint(format!(
                    "inhomogeneous term ξ^{e}·{tree} (codim {}) in an expression of codim {}",
                    tree.codim() + e as u32,
                    self.codim
                )));
            }
        }
        let entry = self.terms.entry(tree).or_default();
        *entry = &*entry + coeff;
        self.terms.retain(|_, c| !c.is_zero());
        Ok(())
    }

    pub fn add_monomial(&mut self, tree: MarkedTree, coeff: Rational, xi_power: usize) -> Result<()> {
        self.add_tree(tree, &XiPolynomial::monomial(coeff, xi_power))
    }

    fn check_compatible(&self, other: &ClassExpr) -> Result<()> {
        if self.basis != other.basis {
            return Err(Error::WrongBasis {
                expected: self.basis.name(),
                found: other.basis.name(),
            });
        }
        if self.codim != other.codim && !self.is_empty() && !other.is_empty() {
            return Err(Error::Constraint(format!(
                "adding expressions of codimension {} and {}",
                self.codim, other.codim
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &ClassExpr) -> Result<ClassExpr> {
        self.check_compatible(other)?;
        if self.is_empty() {
            return Ok(other.clone());
        }
        let mut out = self.clone();
        for (t, c) in &other.terms {
            out.add_tree(t.clone(), c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &ClassExpr) -> Result<ClassExpr> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> ClassExpr {
        let mut out = Self::zero(self.basis, self.codim);
        if c.is_zero() {
            return out;
        }
        out.terms = self.terms.iter().map(|(t, p)| (t.clone(), p.scale(c))).collect();
        out
    }

    /// Multiplication by `ξ^k`.
    pub fn mul_xi(&self, k: u32) -> ClassExpr {
        ClassExpr {
            basis: self.basis,
            codim: self.codim + k,
            terms: self.terms.iter().map(|(t, p)| (t.clone(), p.shift(k as usize))).collect(),
        }
    }

    /// Multiplication by a coefficient polynomial that keeps the result
    /// homogeneous of codimension `codim() + shift`.
    pub fn mul_poly(&self, p: &XiPolynomial) -> Result<ClassExpr> {
        let mut powers = p.terms();
        let Some((first, _)) = powers.next() else {
            return Ok(ClassExpr::zero(self.basis, self.codim));
        };
        if powers.next().is_some() {
            return Err(Error::Constraint("multiplier must be a single ξ-monomial".into()));
        }
        Ok(self.mul_xi(first as u32).scale(&p.coeff(first)))
    }

    /// Multiplication by ψ on expressions without sticks: increments the
    /// marking next to the root of every tree.
    pub fn mul_psi(&self) -> Result<ClassExpr> {
        let mut out = Self::zero(self.basis, self.codim + 1);
        for (t, c) in &self.terms {
            out.add_tree(t.increment_top(1)?, c)?;
        }
        Ok(out)
    }

    /// Terms as `(ξ-power, coefficient, tree)`, ordered by ascending ξ-power,
    /// then descending tree weight, then canonical encoding.
    pub fn ordered_terms(&self) -> Vec<(usize, Rational, &MarkedTree)> {
        let mut out: Vec<_> = self
            .terms
            .iter()
            .flat_map(|(t, p)| p.terms().map(move |(e, c)| (e, c.clone(), t)))
            .collect();
        out.sort_by(|a, b| {
            a.0.cmp(&b.0)
                .then_with(|| b.2.weight().cmp(&a.2.weight()))
                .then_with(|| a.2.cmp(b.2))
        });
        out
    }
}
