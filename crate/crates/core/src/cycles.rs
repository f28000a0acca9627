//! Completed cycles and stable central elements of the symmetric groups.
//!
//! `C_k` is the family over all `N` of sums of permutations with `ℓ`
//! numbered cycles of lengths `k_1..k_ℓ` and all other points fixed. A
//! [`CycleExpr`] is a finite combination of them; it is evaluated on a
//! partition `λ` through the central characters.

use std::collections::BTreeMap;
use std::fmt;

use crate::classes::{extract_point_coefficient, point_coefficient_psi, psi_power_sing};
use crate::combinatorics::{aut_count, central_character, profiles_up_to_order, profiles_with_sum, Partition, Profile};
use crate::error::{Error, Result};
use crate::exact::{factorial, s_series, solve_linear, Rational};

/// Finite combination `Σ c_p C_p`; the empty profile is the identity.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct CycleExpr {
    terms: BTreeMap<Profile, Rational>,
}

impl CycleExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(p: Profile) -> Self {
        let mut out = Self::zero();
        out.add_term(p, Rational::one());
        out
    }

    pub fn add_term(&mut self, p: Profile, c: Rational) {
        let entry = self.terms.entry(p.clone()).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&p);
        }
    }

    pub fn coefficient(&self, p: &Profile) -> Rational {
        self.terms.get(p).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Profile, &Rational)> {
        self.terms.iter()
    }

    /// Terms by descending order `ℓ + Σk`, then ascending length, then parts.
    pub fn ordered_terms(&self) -> Vec<(&Profile, &Rational)> {
        let mut out: Vec<_> = self.terms.iter().collect();
        out.sort_by(|a, b| {
            b.0.order()
                .cmp(&a.0.order())
                .then_with(|| a.0.len().cmp(&b.0.len()))
                .then_with(|| a.0.cmp(b.0))
        });
        out
    }

    /// Restriction to profiles of the given order.
    pub fn restrict_order(&self, order: u64) -> CycleExpr {
        CycleExpr {
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| p.order() == order)
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn max_order(&self) -> Option<u64> {
        self.terms.keys().map(Profile::order).max()
    }
}

impl fmt::Display for CycleExpr {
    /// `1/2*C[3] + 1/4*C[1,1] + 1/24*C[1]`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.ordered_terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (p, c)) in terms.into_iter().enumerate() {
            let atom = format!("C[{}]", p.parts().iter().map(u32::to_string).collect::<Vec<_>>().join(","));
            write_signed(f, i == 0, c, &atom)?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

pub(crate) fn write_signed(f: &mut impl fmt::Write, first: bool, c: &Rational, atom: &str) -> fmt::Result {
    let mag = c.abs();
    match (first, c.is_negative()) {
        (true, true) => f.write_str("-")?,
        (true, false) => {}
        (false, true) => f.write_str(" - ")?,
        (false, false) => f.write_str(" + ")?,
    }
    if atom.is_empty() {
        write!(f, "{mag}")
    } else if mag.is_one() {
        f.write_str(atom)
    } else {
        write!(f, "{mag}*{atom}")
    }
}

/// Polynomial in the variables `x_1, x_2, …`; monomials are profiles.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct XPolynomial {
    terms: BTreeMap<Profile, Rational>,
}

impl XPolynomial {
    pub fn one() -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(Profile::empty(), Rational::one());
        XPolynomial { terms }
    }

    pub fn coefficient(&self, monomial: &Profile) -> Rational {
        self.terms.get(monomial).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Profile, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn mul(&self, rhs: &XPolynomial) -> XPolynomial {
        let mut terms: BTreeMap<Profile, Rational> = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                *terms.entry(a.concat(b)).or_default() += ca * cb;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        XPolynomial { terms }
    }

    /// Replaces every monomial `∏ x_{k_i}` by `C_k`.
    pub fn to_cycles(&self) -> CycleExpr {
        CycleExpr { terms: self.terms.clone() }
    }
}

impl fmt::Display for XPolynomial {
    /// `1/2*x_3 + 1/4*x_1^2`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut terms: Vec<_> = self.terms.iter().collect();
        terms.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| b.0.cmp(a.0)));
        for (i, (p, c)) in terms.into_iter().enumerate() {
            let atom = p
                .multiplicities()
                .iter()
                .rev()
                .map(|(k, e)| if *e == 1 { format!("x_{k}") } else { format!("x_{k}^{e}") })
                .collect::<Vec<_>>()
                .join("*");
            write_signed(f, i == 0, c, &atom)?;
        }
        Ok(())
    }
}

impl fmt::Debug for XPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `X_m = Σ_ℓ 1/ℓ! Σ_{Σk_i = m−ℓ+2} m!/(m−ℓ+2)! ∏ k_i x_{k_i}`, collapsed onto
/// multisets; `normalized` divides by `m!`.
pub fn x_polynomial(m: u32, normalized: bool) -> XPolynomial {
    let mut terms = BTreeMap::new();
    for l in 1..=(m + 1) {
        let total = m + 2 - l;
        for p in profiles_with_sum(total, l as usize).into_iter().filter(|p| p.len() == l as usize) {
            let numer = if normalized {
                p.product()
            } else {
                p.product() * factorial(m as u64)
            };
            let denom = aut_count(&p) * factorial(total as u64);
            terms.insert(p, Rational::new(numer, denom).expect("nonzero"));
        }
    }
    XPolynomial { terms }
}

/// `ρ_{g;k}`: coefficient of `z^{2g}` in `∏k_i/K! · S(z)^{K−1} ∏ S(k_i z)`.
pub fn rho(g: u32, p: &Profile) -> Result<Rational> {
    if p.is_empty() {
        return Err(Error::Constraint("ρ needs a nonempty profile".into()));
    }
    let order = 2 * g as usize;
    let s = s_series(order);
    let k = p.sum();
    let series = p
        .parts()
        .iter()
        .fold(s.pow(k as u32 - 1), |acc, &ki| acc.mul(&s.scale_arg(ki as u64)));
    let prefactor = Rational::new(p.product(), factorial(k))?;
    Ok(prefactor * series.coeff(order)?)
}

/// `C̄_{m+1} = Σ_{g, k} ρ_{g;k} / |Aut k| · C_k` over `Σk_i + ℓ + 2g − 2 = m`.
pub fn completed_cycle(m: u32) -> CycleExpr {
    let mut out = CycleExpr::zero();
    for p in profiles_up_to_order(m as u64 + 2) {
        if p.is_empty() {
            continue;
        }
        let gap = m as u64 + 2 - p.order();
        if gap % 2 != 0 {
            continue;
        }
        let g = (gap / 2) as u32;
        let c = rho(g, &p).expect("nonempty profile")
            .checked_div(&Rational::from_int(aut_count(&p)))
            .expect("nonzero");
        out.add_term(p, c);
    }
    out
}

/// Terms of maximal order `m + 2`.
pub fn genus0_part(c: &CycleExpr, m: u32) -> CycleExpr {
    c.restrict_order(m as u64 + 2)
}

pub fn evaluate(c: &CycleExpr, lambda: &Partition) -> Rational {
    c.iter().map(|(p, coeff)| coeff * central_character(p, lambda)).sum()
}

/// Largest partition size tried before giving up on determining a product.
const MAX_SAMPLE_SIZE: u32 = 40;

/// `C_{p1} · C_{p2}` as a combination of stable central elements.
///
/// Unknown coefficients on all profiles of order `≤ order(p1) + order(p2)`
/// are fitted to the pointwise product of central characters, sampling all
/// partitions of `N = 0, 1, 2, …` until the system has full rank; two
/// further sizes are then used as a residual check.
pub fn multiply_central(p1: &Profile, p2: &Profile) -> Result<CycleExpr> {
    let unknowns = profiles_up_to_order(p1.order() + p2.order());
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut rhs: Vec<Rational> = Vec::new();
    let sample = |n: u32, rows: &mut Vec<Vec<Rational>>, rhs: &mut Vec<Rational>| {
        for lambda in Partition::all_of(n) {
            rows.push(unknowns.iter().map(|q| central_character(q, &lambda)).collect());
            rhs.push(central_character(p1, &lambda) * central_character(p2, &lambda));
        }
    };
    let mut n = 0;
    let solution = loop {
        sample(n, &mut rows, &mut rhs);
        n += 1;
        if rows.len() < unknowns.len() {
            continue;
        }
        match solve_linear(&rows, &rhs) {
            Ok(x) => break x,
            Err(Error::Underdetermined { .. }) if n <= MAX_SAMPLE_SIZE => continue,
            Err(e) => return Err(e),
        }
    };
    let mut out = CycleExpr::zero();
    for (q, c) in unknowns.into_iter().zip(solution) {
        out.add_term(q, c);
    }
    for extra in n..n + 2 {
        for lambda in Partition::all_of(extra) {
            let lhs = central_character(p1, &lambda) * central_character(p2, &lambda);
            if evaluate(&out, &lambda) != lhs {
                return Err(Error::Inconsistent);
            }
        }
    }
    Ok(out)
}

/// Checks `C_{p1} · C_{p2} = claimed` inside the group algebra of `S_N` by
/// brute force over all permutations.
pub fn verify_in_group_algebra(p1: &Profile, p2: &Profile, claimed: &CycleExpr, n: u32) -> Result<bool> {
    if (n as u64) < p1.sum() + p2.sum() {
        return Err(Error::Constraint(format!(
            "N = {n} is smaller than {} + {}",
            p1.sum(),
            p2.sum()
        )));
    }
    let group = SymmetricGroup::new(n as usize);
    let a = group.stable_element(p1);
    let b = group.stable_element(p2);
    let lhs = group.convolve(&a, &b);
    let mut rhs = vec![Rational::zero(); group.elements.len()];
    for (q, c) in claimed.iter() {
        for (slot, v) in rhs.iter_mut().zip(group.stable_element(q)) {
            *slot += c * Rational::from_int(v);
        }
    }
    Ok(lhs == rhs)
}

struct SymmetricGroup {
    elements: Vec<Vec<usize>>,
    index: std::collections::HashMap<Vec<usize>, usize>,
}

impl SymmetricGroup {
    fn new(n: usize) -> Self {
        fn perms(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if rest.is_empty() {
                out.push(cur.clone());
                return;
            }
            for i in 0..rest.len() {
                let x = rest.remove(i);
                cur.push(x);
                perms(rest, cur, out);
                cur.pop();
                rest.insert(i, x);
            }
        }
        let mut elements = Vec::new();
        perms(&mut (0..n).collect(), &mut Vec::new(), &mut elements);
        let index = elements.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect();
        SymmetricGroup { elements, index }
    }

    fn cycle_lengths(perm: &[usize]) -> BTreeMap<usize, usize> {
        let mut seen = vec![false; perm.len()];
        let mut counts = BTreeMap::new();
        for start in 0..perm.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = perm[x];
                len += 1;
            }
            *counts.entry(len).or_insert(0) += 1;
        }
        counts
    }

    /// Multiplicity of each permutation in `C_p`: the number of ways to
    /// number its cycles so that they match `p`, all others being fixed points.
    fn stable_element(&self, p: &Profile) -> Vec<i64> {
        let wanted = p.multiplicities();
        self.elements
            .iter()
            .map(|perm| {
                let have = Self::cycle_lengths(perm);
                let mut ways: i64 = 1;
                for (&len, &count) in &have {
                    let need = wanted.get(&(len as u32)).copied().unwrap_or(0);
                    if len > 1 && need != count {
                        return 0;
                    }
                    if need > count {
                        return 0;
                    }
                    ways *= ((count - need + 1)..=count).product::<usize>() as i64;
                }
                if wanted.iter().any(|(&k, _)| k > 1 && !have.contains_key(&(k as usize))) {
                    return 0;
                }
                if wanted.get(&1).is_some_and(|&need| need > have.get(&1).copied().unwrap_or(0)) {
                    return 0;
                }
                ways
            })
            .collect()
    }

    fn convolve(&self, a: &[i64], b: &[i64]) -> Vec<Rational> {
        let mut out = vec![0i64; self.elements.len()];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if y == 0 {
                    continue;
                }
                let s = &self.elements[i];
                let t = &self.elements[j];
                let composed: Vec<usize> = t.iter().map(|&k| s[k]).collect();
                out[self.index[&composed]] += x * y;
            }
        }
        out.into_iter().map(Rational::from_int).collect()
    }
}

/// Genus-0 coefficients of `C̄_{m+1}` against the point coefficients of `ψ^m`.
pub fn equality1_check(m: u32) -> Result<bool> {
    if m < 1 {
        return Err(Error::Constraint("equality check needs m ≥ 1".into()));
    }
    let genus0 = genus0_part(&completed_cycle(m), m);
    let psi = psi_power_sing(m)?;
    for p in profiles_up_to_order(m as u64 + 2).into_iter().filter(|p| p.order() == m as u64 + 2) {
        let cycle = genus0.coefficient(&p);
        if cycle != point_coefficient_psi(m, &p, false)? || cycle != extract_point_coefficient(&psi, &p)? {
            return Ok(false);
        }
    }
    Ok(true)
}
