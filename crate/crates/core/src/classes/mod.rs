//! Expansions between singularity classes and basic classes.
//!
//! Singularity basis: the stick marked `m` is `a_m`, the star with marking
//! `p` over leaves `m_1..m_ℓ` is `ψ^p i_{m_1+1,…,m_ℓ+1}`. Basic basis: the
//! stick is `ψ^m` and the star is `ψ^p δ_{m_1,…,m_ℓ}`.

mod expr;

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

pub use expr::{Basis, ClassExpr};

use crate::combinatorics::{aut_count, profiles_with_sum, Profile};
use crate::cycles::x_polynomial;
use crate::error::{Error, Result};
use crate::exact::{factorial, Polynomial, Rational};
use crate::trees::{substitute, MarkedTree};

/// `Σ_{ℓ≥2} Σ_{k_1+…+k_ℓ=m} (∏k_i / |Aut k|) i_k`, the new layer of `P_m`.
fn new_profile_layer(m: u32) -> ClassExpr {
    let mut out = ClassExpr::zero(Basis::Singularity, m);
    for p in profiles_with_sum(m, 2) {
        let coeff = Rational::new(p.product(), aut_count(&p)).expect("nonzero");
        out.add_monomial(point_free_star(&p), coeff, 0).expect("codim m");
    }
    out
}

/// `i_k` as the unmarked star with leaves `k_i − 1`.
fn point_free_star(p: &Profile) -> MarkedTree {
    let leaves: Vec<u32> = p.parts().iter().map(|k| k - 1).collect();
    MarkedTree::star(0, &leaves).expect("at least two parts")
}

/// `P_m` of the recursion `∏_{r≤m}(rψ − ξ) = a_m + P_m`.
fn p_term(m: u32) -> Result<ClassExpr> {
    let mut p = ClassExpr::zero(Basis::Singularity, 1);
    for j in 2..=m {
        let psi_part = p.mul_psi()?.scale(&Rational::from_int(j));
        let xi_part = p.mul_xi(1);
        p = new_profile_layer(j).add(&psi_part.sub(&xi_part)?)?;
    }
    Ok(p)
}

/// `∏_{r=1}^m (rψ − ξ)` in the singularity basis.
pub fn theorem1_expansion(m: u32) -> Result<ClassExpr> {
    if m < 1 {
        return Err(Error::Constraint("product expansion needs m ≥ 1".into()));
    }
    let mut out = ClassExpr::from_tree(Basis::Singularity, MarkedTree::stick(m));
    if m >= 2 {
        out = out.add(&p_term(m)?)?;
    }
    Ok(out)
}

/// `∏_{r=1}^j (rψ − 1)` as a polynomial in ψ.
fn falling_product(j: u32) -> Polynomial {
    (1..=j).fold(Polynomial::one(), |acc, r| {
        &acc * &Polynomial::new(vec![-Rational::one(), Rational::from_int(r)])
    })
}

/// Coefficients `c_{m,0..=m}` with `ψ^m = Σ_j c_{m,j} ξ^{m−j} ∏_{r≤j}(rψ − ξ)`.
pub fn psi_decomposition(m: u32) -> Vec<Rational> {
    // Dehomogenize at ξ = 1 and peel off the leading ψ-power from the top.
    let mut residual = Polynomial::monomial(Rational::one(), m as usize);
    let mut coeffs = vec![Rational::zero(); m as usize + 1];
    for j in (0..=m).rev() {
        let c = residual
            .coeff(j as usize)
            .checked_div(&Rational::factorial(j as u64))
            .expect("nonzero factorial");
        residual = &residual - &falling_product(j).scale(&c);
        coeffs[j as usize] = c;
    }
    debug_assert!(residual.is_zero());
    coeffs
}

type ExprCache = Mutex<HashMap<u32, ClassExpr>>;

/// `ψ^m` in the singularity basis.
pub fn psi_power_sing(m: u32) -> Result<ClassExpr> {
    static CACHE: OnceLock<ExprCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(e) = cache.lock().unwrap().get(&m) {
        return Ok(e.clone());
    }
    let coeffs = psi_decomposition(m);
    let mut out = ClassExpr::zero(Basis::Singularity, m);
    for (j, c) in coeffs.iter().enumerate() {
        let product = match j {
            0 => ClassExpr::unit(Basis::Singularity),
            _ => theorem1_expansion(j as u32)?,
        };
        out = out.add(&product.mul_xi(m - j as u32).scale(c))?;
    }
    cache.lock().unwrap().insert(m, out.clone());
    Ok(out)
}

fn expect_basis(e: &ClassExpr, basis: Basis) -> Result<()> {
    if e.basis() != basis {
        return Err(Error::WrongBasis {
            expected: basis.name(),
            found: e.basis().name(),
        });
    }
    Ok(())
}

/// `[T]_basic` in the singularity basis: substitute `ψ^{m_i}` into every leaf.
pub fn basic_tree_to_sing(tree: &MarkedTree) -> Result<ClassExpr> {
    static CACHE: OnceLock<Mutex<HashMap<MarkedTree, ClassExpr>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(e) = cache.lock().unwrap().get(tree) {
        return Ok(e.clone());
    }
    let out = if tree.is_stick() {
        psi_power_sing(tree.top_marking())?
    } else {
        let grafts = tree
            .leaves()
            .into_iter()
            .map(psi_power_sing)
            .collect::<Result<Vec<_>>>()?;
        substitute(tree, &grafts)?
    };
    cache.lock().unwrap().insert(tree.clone(), out.clone());
    Ok(out)
}

pub fn basic_to_sing(e: &ClassExpr) -> Result<ClassExpr> {
    expect_basis(e, Basis::Basic)?;
    let mut out = ClassExpr::zero(Basis::Singularity, e.codim());
    for (tree, coeff) in e.iter() {
        out = out.add(&basic_tree_to_sing(tree)?.mul_poly(coeff)?)?;
    }
    Ok(out)
}

/// `∏ m_i!` over the leaves; `m!` for a stick.
fn leading_factor(tree: &MarkedTree) -> Rational {
    tree.leaves()
        .iter()
        .map(|&m| Rational::from_int(factorial(m as u64)))
        .product()
}

/// Inverts [`basic_to_sing`] by peeling terms in descending weight.
pub fn sing_to_basic(e: &ClassExpr) -> Result<ClassExpr> {
    expect_basis(e, Basis::Singularity)?;
    let mut residual = e.clone();
    let mut out = ClassExpr::zero(Basis::Basic, e.codim());
    while let Some(tree) = residual.trees().max_by_key(|t| (t.weight(), (*t).clone())).cloned() {
        let coeff = residual.coefficient_poly(&tree);
        let factor = leading_factor(&tree);
        let lift = coeff.scale(&factor);
        let image = basic_tree_to_sing(&tree)?;
        if image.coefficient(&tree, 0) != factor.recip()? {
            return Err(Error::Constraint(format!("no triangular leading term for {tree}")));
        }
        out.add_tree(tree, &lift)?;
        residual = residual.sub(&image.mul_poly(&lift)?)?;
    }
    Ok(out)
}

/// The tree carrying `α_ℓ i_k`: the star marked `ℓ − 2` over leaves `k_i − 1`,
/// or the stick `a_{k−1}` when `ℓ = 1`.
pub fn point_tree(p: &Profile) -> Result<MarkedTree> {
    let leaves: Vec<u32> = p.parts().iter().map(|k| k - 1).collect();
    match leaves.len() {
        0 => Err(Error::Constraint("empty profile has no point class".into())),
        1 => Ok(MarkedTree::stick(leaves[0])),
        l => MarkedTree::star(l as u32 - 2, &leaves),
    }
}

/// Coefficient of `α_ℓ i_k` (no ξ) in an expression.
pub fn extract_point_coefficient(e: &ClassExpr, p: &Profile) -> Result<Rational> {
    Ok(e.coefficient(&point_tree(p)?, 0))
}

/// Coefficient of `α_ℓ i_k` in `ψ^m`, i.e. `∏k_i / (|Aut k| (Σk_i)!)`.
///
/// With `raw` set, returns the unnormalized `m!/(m−ℓ+2)! ∏k_i / |Aut k|`
/// instead, which differs by the factor `m!`.
pub fn point_coefficient_psi(m: u32, p: &Profile, raw: bool) -> Result<Rational> {
    if p.is_empty() || m as u64 + 2 != p.order() {
        return Err(Error::Constraint(format!(
            "need m + 2 = ℓ + Σk, got m = {m} and profile {p}"
        )));
    }
    let weight = Rational::new(p.product(), aut_count(p))?;
    if raw {
        let l = p.len() as u64;
        let ratio = Rational::new(factorial(m as u64), factorial(m as u64 + 2 - l))?;
        Ok(weight * ratio)
    } else {
        weight.checked_div(&Rational::factorial(p.sum()))
    }
}

/// Coefficient of `α_ℓ i_k` in `α_s δ_{m_1,…,m_s}`: the coefficient of
/// `∏ x_{k_i}` in `X̃_{m_1} ⋯ X̃_{m_s}`.
pub fn point_coefficient_delta(ms: &[u32], p: &Profile) -> Result<Rational> {
    let lhs = 2 * ms.len() as u64 + ms.iter().map(|&m| m as u64).sum::<u64>();
    if ms.is_empty() || lhs != p.order() {
        return Err(Error::Constraint(format!(
            "need 2s + Σm = ℓ + Σk, got {lhs} and {}",
            p.order()
        )));
    }
    let product = ms
        .iter()
        .fold(crate::cycles::XPolynomial::one(), |acc, &m| acc.mul(&x_polynomial(m, true)));
    Ok(product.coefficient(p))
}

/// `α_s δ_{m}` as a basic tree: star marked `s − 2` (stick for `s = 1`).
pub fn point_delta_tree(ms: &[u32]) -> Result<MarkedTree> {
    match ms.len() {
        0 => Err(Error::Constraint("empty δ index".into())),
        1 => Ok(MarkedTree::stick(ms[0])),
        s => MarkedTree::star(s as u32 - 2, ms),
    }
}

#[cfg(test)]
mod tests;
