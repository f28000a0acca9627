//! Local models of meromorphic functions near a singular point: the
//! canonical function with prescribed poles, its partial-fraction
//! coordinates, and the constants governing the stratum's components.

use std::collections::HashSet;
use std::fmt;

use num_integer::Integer;

use crate::combinatorics::Profile;
use crate::error::{Error, Result};
use crate::exact::{Polynomial, PowerSeries, Rational};

/// `K = lcm(k_i)`, `r_i = K / k_i` and `d = ∏k_i / K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileConstants {
    pub lcm: u64,
    pub r: Vec<u64>,
    pub d: u64,
}

pub fn profile_constants(p: &Profile) -> Result<ProfileConstants> {
    if p.is_empty() {
        return Err(Error::Constraint("profile must be nonempty".into()));
    }
    let lcm = p.parts().iter().fold(1u64, |acc, &k| acc.lcm(&u64::from(k)));
    let r = p.parts().iter().map(|&k| lcm / u64::from(k)).collect();
    let product: u64 = p.parts().iter().map(|&k| u64::from(k)).product();
    Ok(ProfileConstants { lcm, r, d: product / lcm })
}

/// Number of orbits of `Z/K` acting diagonally on `∏ Z/k_i`, counted by
/// walking every orbit.
pub fn orbit_count(p: &Profile) -> Result<u64> {
    let ProfileConstants { lcm, .. } = profile_constants(p)?;
    let ks: Vec<u64> = p.parts().iter().map(|&k| u64::from(k)).collect();
    let mut seen: HashSet<Vec<u64>> = HashSet::new();
    let mut orbits = 0;
    let mut tuple = vec![0u64; ks.len()];
    loop {
        if !seen.contains(&tuple) {
            orbits += 1;
            for t in 0..lcm {
                seen.insert(tuple.iter().zip(&ks).map(|(x, k)| (x + t) % k).collect());
            }
        }
        // Odometer step.
        let mut i = 0;
        while i < ks.len() {
            tuple[i] += 1;
            if tuple[i] < ks[i] {
                break;
            }
            tuple[i] = 0;
            i += 1;
        }
        if i == ks.len() {
            return Ok(orbits);
        }
    }
}

/// A reduced quotient of polynomials in `z` with monic denominator.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalFunction {
    numerator: Polynomial,
    denominator: Polynomial,
}

impl RationalFunction {
    pub fn new(numerator: Polynomial, denominator: Polynomial) -> Result<Self> {
        if denominator.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if numerator.is_zero() {
            return Ok(Self::from_polynomial(Polynomial::zero()));
        }
        let g = Polynomial::gcd(&numerator, &denominator);
        let (n, _) = numerator.div_rem(&g)?;
        let (d, _) = denominator.div_rem(&g)?;
        let lead = d.leading().expect("nonzero").recip()?;
        Ok(RationalFunction {
            numerator: n.scale(&lead),
            denominator: d.scale(&lead),
        })
    }

    pub fn from_polynomial(p: Polynomial) -> Self {
        RationalFunction {
            numerator: p,
            denominator: Polynomial::one(),
        }
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.numerator
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.denominator
    }

    pub fn eval(&self, z: &Rational) -> Result<Rational> {
        self.numerator.eval(z).checked_div(&self.denominator.eval(z))
    }

    pub fn add(&self, rhs: &RationalFunction) -> Result<RationalFunction> {
        let n = &(&self.numerator * &rhs.denominator) + &(&rhs.numerator * &self.denominator);
        Self::new(n, &self.denominator * &rhs.denominator)
    }

    pub fn derivative(&self) -> Result<RationalFunction> {
        let n = &(&self.numerator.derivative() * &self.denominator)
            - &(&self.numerator * &self.denominator.derivative());
        Self::new(n, &self.denominator * &self.denominator)
    }

    pub fn nth_derivative(&self, n: usize) -> Result<RationalFunction> {
        (0..n).try_fold(self.clone(), |f, _| f.derivative())
    }

    /// Multiplicity of the root `z0` in the denominator.
    pub fn pole_order(&self, z0: &Rational) -> u32 {
        multiplicity(&self.denominator, z0)
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} / {}", self.numerator.render("z"), self.denominator.render("z"))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn multiplicity(p: &Polynomial, z0: &Rational) -> u32 {
    let lin = Polynomial::linear_root(z0);
    let mut p = p.clone();
    let mut count = 0;
    while !p.is_zero() {
        let (q, r) = p.div_rem(&lin).expect("monic divisor");
        if !r.is_zero() {
            break;
        }
        p = q;
        count += 1;
    }
    count
}

fn check_distinct(points: &[&Rational]) -> Result<()> {
    for (i, a) in points.iter().enumerate() {
        if points[i + 1..].contains(a) {
            return Err(Error::CoincidentPoints(format!("{a} appears twice")));
        }
    }
    Ok(())
}

/// `(z − x)^m / ∏(z − z_i)^{k_i}` with `m = Σk_i`: the function whose first
/// `m − 1` derivatives vanish at `x`.
pub fn canonical_function(p: &Profile, x: &Rational, poles: &[Rational]) -> Result<RationalFunction> {
    if poles.len() != p.len() {
        return Err(Error::SizeMismatch(format!(
            "{} poles for a profile of length {}",
            poles.len(),
            p.len()
        )));
    }
    let mut points: Vec<&Rational> = poles.iter().collect();
    points.push(x);
    check_distinct(&points)?;
    let num = Polynomial::linear_root(x).pow(p.sum() as u32);
    let den = poles
        .iter()
        .zip(p.parts())
        .fold(Polynomial::one(), |acc, (z, &k)| &acc * &Polynomial::linear_root(z).pow(k));
    RationalFunction::new(num, den)
}

/// A chosen `k`-th root of a rational. When the root is rational, `value`
/// holds it (the positive one for even `k`); otherwise the root is kept
/// formally as `radicand^(1/degree)` on the real branch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KthRoot {
    pub radicand: Rational,
    pub degree: u32,
    pub value: Option<Rational>,
}

impl KthRoot {
    fn of(radicand: Rational, degree: u32) -> Self {
        let value = radicand.exact_root(degree);
        KthRoot { radicand, degree, value }
    }
}

impl fmt::Display for KthRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Some(v) => write!(f, "{v}"),
            None => write!(f, "({})^(1/{})", self.radicand, self.degree),
        }
    }
}

/// Coordinates of one pole. `laurent[j]` is the coefficient of
/// `(z − pole)^{−(k−j)}`, i.e. `a_j u^{k−j}`; `a` is present whenever `u`
/// is rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Branch {
    pub pole: Rational,
    pub order: u32,
    pub u: KthRoot,
    pub a: Option<Vec<Rational>>,
    pub laurent: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HurwitzCoordinates {
    pub branches: Vec<Branch>,
    pub constant: Rational,
}

pub fn hurwitz_coordinates(f: &RationalFunction, p: &Profile, poles: &[Rational]) -> Result<HurwitzCoordinates> {
    if poles.len() != p.len() {
        return Err(Error::SizeMismatch(format!(
            "{} poles for a profile of length {}",
            poles.len(),
            p.len()
        )));
    }
    check_distinct(&poles.iter().collect::<Vec<_>>())?;
    let mut expected = Polynomial::one();
    for (z, &k) in poles.iter().zip(p.parts()) {
        let found = f.pole_order(z);
        if found != k {
            return Err(Error::PoleOrder {
                pole: z.to_string(),
                expected: k,
                found,
            });
        }
        expected = &expected * &Polynomial::linear_root(z).pow(k);
    }
    if expected != f.denominator {
        return Err(Error::Constraint(format!("{f} has poles outside the given points")));
    }
    let (num_deg, den_deg) = (f.numerator.degree().unwrap_or(0), f.denominator.degree().unwrap_or(0));
    if num_deg > den_deg {
        return Err(Error::Constraint(format!("{f} has a pole at infinity")));
    }
    let constant = if num_deg == den_deg && !f.numerator.is_zero() {
        f.numerator.leading().expect("nonzero").clone()
    } else {
        Rational::zero()
    };

    let mut branches = Vec::with_capacity(poles.len());
    for (i, (z, &k)) in poles.iter().zip(p.parts()).enumerate() {
        // f = N / ((z − z_i)^k g); expand N/g around z_i.
        let g = poles
            .iter()
            .zip(p.parts())
            .enumerate()
            .filter(|&(j, _)| j != i)
            .fold(Polynomial::one(), |acc, (_, (w, &kw))| &acc * &Polynomial::linear_root(w).pow(kw));
        let order = k as usize - 1;
        let n = PowerSeries::from_polynomial(&f.numerator.taylor_shift(z), order);
        let d = PowerSeries::from_polynomial(&g.taylor_shift(z), order);
        let laurent = n.checked_div(&d)?.coeffs().to_vec();
        let u = KthRoot::of(laurent[0].clone(), k);
        let a = match &u.value {
            Some(v) => Some(
                laurent
                    .iter()
                    .enumerate()
                    .map(|(j, c)| c.checked_div(&v.pow(k - j as u32)))
                    .collect::<Result<Vec<_>>>()?,
            ),
            None => None,
        };
        branches.push(Branch {
            pole: z.clone(),
            order: k,
            u,
            a,
            laurent,
        });
    }
    Ok(HurwitzCoordinates { branches, constant })
}

/// `Σ_i Σ_j a_{ij} (u_i/(z − z_i))^{k_i − j} + constant`, read from `u` and
/// `a` where they are rational and from the Laurent data otherwise.
pub fn reassemble(h: &HurwitzCoordinates) -> Result<RationalFunction> {
    // Everything over the common denominator ∏(z − z_i)^{k_i}.
    let factors: Vec<Polynomial> = h
        .branches
        .iter()
        .map(|b| Polynomial::linear_root(&b.pole).pow(b.order))
        .collect();
    let den = factors.iter().fold(Polynomial::one(), |acc, f| &acc * f);
    let mut num = den.scale(&h.constant);
    for (i, b) in h.branches.iter().enumerate() {
        let others = factors
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .fold(Polynomial::one(), |acc, (_, f)| &acc * f);
        let lin = Polynomial::linear_root(&b.pole);
        let mut local = Polynomial::zero();
        for j in 0..b.order as usize {
            let c = match (&b.u.value, &b.a) {
                (Some(u), Some(a)) => &a[j] * &u.pow(b.order - j as u32),
                _ => b.laurent[j].clone(),
            };
            local = &local + &lin.pow(j as u32).scale(&c);
        }
        num = &num + &(&local * &others);
    }
    if num.is_zero() {
        return Ok(RationalFunction::from_polynomial(num));
    }
    // Only the poles can cancel, so no general gcd is needed.
    let (mut num, mut den) = (num, den);
    for b in &h.branches {
        let lin = Polynomial::linear_root(&b.pole);
        while num.eval(&b.pole).is_zero() && den.eval(&b.pole).is_zero() {
            num = num.div_rem(&lin)?.0;
            den = den.div_rem(&lin)?.0;
        }
    }
    Ok(RationalFunction {
        numerator: num,
        denominator: den,
    })
}
