//! Profiles, partitions, automorphism counts, and symmetric-group
//! characters evaluated by the Murnaghan–Nakayama rule.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::One;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact::{factorial, Rational};

/// Multiset of positive integers, stored in ascending order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Profile(Vec<u32>);

impl Profile {
    /// Zero parts are rejected.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Constraint("profile parts must be positive".into()));
        }
        parts.sort_unstable();
        Ok(Profile(parts))
    }

    pub fn from_parts(parts: &[u32]) -> Self {
        Self::new(parts.to_vec()).expect("positive parts")
    }

    pub fn empty() -> Self {
        Profile(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().map(|&k| k as u64).sum()
    }

    pub fn product(&self) -> BigInt {
        self.0.iter().fold(BigInt::one(), |acc, &k| acc * k)
    }

    /// `ℓ + Σk`, the order of the stable central element `C_p`.
    pub fn order(&self) -> u64 {
        self.len() as u64 + self.sum()
    }

    pub fn concat(&self, other: &Profile) -> Profile {
        let mut parts = self.0.clone();
        parts.extend_from_slice(&other.0);
        parts.sort_unstable();
        Profile(parts)
    }

    /// Value → multiplicity.
    pub fn multiplicities(&self) -> BTreeMap<u32, usize> {
        let mut m = BTreeMap::new();
        for &k in &self.0 {
            *m.entry(k).or_insert(0) += 1;
        }
        m
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", join(&self.0))
    }
}

impl fmt::Debug for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Profile {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

impl FromStr for Profile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Profile::new(parse_int_list(s, '{', '}')?)
    }
}

/// Integer partition with weakly decreasing rows.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Partition(Vec<u32>);

impl Partition {
    /// Zero rows are dropped; rows are sorted into decreasing order.
    pub fn new(mut rows: Vec<u32>) -> Self {
        rows.retain(|&r| r > 0);
        rows.sort_unstable_by(|a, b| b.cmp(a));
        Partition(rows)
    }

    pub fn rows(&self) -> &[u32] {
        &self.0
    }

    pub fn size(&self) -> u64 {
        self.0.iter().map(|&r| r as u64).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All partitions of `n`, in reverse lexicographic order starting at `[n]`.
    pub fn all_of(n: u32) -> Vec<Partition> {
        fn go(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for part in (1..=rem.min(max)).rev() {
                cur.push(part);
                go(rem - part, part, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(n, n, &mut Vec::new(), &mut out);
        out
    }

    /// Cycle type of a profile padded with fixed points up to size `n`.
    fn padded(p: &Profile, n: u64) -> Partition {
        let mut rows = p.parts().to_vec();
        rows.extend(std::iter::repeat_n(1, (n - p.sum()) as usize));
        Partition::new(rows)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", join(&self.0))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let rows = parse_int_list(s, '[', ']')?;
        if rows.contains(&0) {
            return Err(Error::parse(0, "partition rows must be positive"));
        }
        Ok(Partition::new(rows))
    }
}

fn join(xs: &[u32]) -> String {
    xs.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

fn parse_int_list(s: &str, open: char, close: char) -> Result<Vec<u32>> {
    let s = s.trim();
    let inner = s
        .strip_prefix(open)
        .and_then(|t| t.strip_suffix(close))
        .ok_or_else(|| Error::parse(0, format!("expected {open}…{close}, got {s:?}")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| Error::parse(0, format!("invalid integer {:?}", t.trim())))
        })
        .collect()
}

/// `∏_v (multiplicity of v)!`.
pub fn aut_count(p: &Profile) -> BigInt {
    p.multiplicities()
        .values()
        .fold(BigInt::one(), |acc, &m| acc * factorial(m as u64))
}

/// Multisets of positive integers summing to `total` with at least
/// `min_len` parts, ordered by length and then lexicographically.
pub fn profiles_with_sum(total: u32, min_len: usize) -> Vec<Profile> {
    let mut out: Vec<Profile> = Partition::all_of(total)
        .into_iter()
        .filter(|p| p.len() >= min_len)
        .map(|p| Profile::from_parts(p.rows()))
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

/// All profiles (including the empty one) with `ℓ + Σk ≤ max_order`.
pub fn profiles_up_to_order(max_order: u64) -> Vec<Profile> {
    let mut out = vec![Profile::empty()];
    for total in 1..max_order as u32 {
        out.extend(
            profiles_with_sum(total, 1)
                .into_iter()
                .filter(|p| p.order() <= max_order),
        );
    }
    out
}

type CharCache = Mutex<HashMap<(Vec<u32>, Vec<u32>), BigInt>>;

fn char_cache() -> &'static CharCache {
    static CACHE: OnceLock<CharCache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Irreducible character `χ^λ` evaluated at the class of cycle type `cycle_type`.
pub fn mn_character(lambda: &Partition, cycle_type: &Partition) -> Result<BigInt> {
    if lambda.size() != cycle_type.size() {
        return Err(Error::SizeMismatch(format!(
            "character {lambda} of S_{} evaluated on class {cycle_type} of S_{}",
            lambda.size(),
            cycle_type.size()
        )));
    }
    Ok(mn_rec(lambda.rows(), cycle_type.rows()))
}

// Rim-hook removal on beta-numbers: with β_i = λ_i + (n - i), removing an
// r-hook moves one bead β to β - r, with sign given by the beads jumped over.
fn mn_rec(lambda: &[u32], mu: &[u32]) -> BigInt {
    let Some((&r, rest)) = mu.split_first() else {
        return BigInt::one();
    };
    let key = (lambda.to_vec(), mu.to_vec());
    if let Some(v) = char_cache().lock().unwrap().get(&key) {
        return v.clone();
    }
    let n = lambda.len();
    let beta: Vec<i64> = lambda
        .iter()
        .enumerate()
        .map(|(i, &l)| l as i64 + (n - 1 - i) as i64)
        .collect();
    let r = r as i64;
    let mut total = BigInt::default();
    for (i, &b) in beta.iter().enumerate() {
        let target = b - r;
        if target < 0 || beta.contains(&target) {
            continue;
        }
        let jumped = beta.iter().filter(|&&x| x > target && x < b).count();
        let mut next = beta.clone();
        next[i] = target;
        next.sort_unstable_by(|a, b| b.cmp(a));
        let len = next.len();
        let rows: Vec<u32> = next
            .iter()
            .enumerate()
            .map(|(j, &x)| (x - (len - 1 - j) as i64) as u32)
            .filter(|&x| x > 0)
            .collect();
        let sub = mn_rec(&rows, rest);
        if jumped % 2 == 0 {
            total += sub;
        } else {
            total -= sub;
        }
    }
    char_cache().lock().unwrap().insert(key, total.clone());
    total
}

/// Scalar by which the stable central element `C_p` acts in the irreducible
/// representation `λ`; zero when `Σp > |λ|`.
pub fn central_character(p: &Profile, lambda: &Partition) -> Rational {
    let n = lambda.size();
    let k = p.sum();
    if k > n {
        return Rational::zero();
    }
    let count = factorial(n) / factorial(n - k);
    let count = Rational::new(count, p.product()).expect("positive parts");
    let chi = mn_character(lambda, &Partition::padded(p, n)).expect("sizes agree");
    let dim = mn_character(lambda, &Partition::new(vec![1; n as usize])).expect("sizes agree");
    count * Rational::new(chi, dim).expect("dimension is positive")
}

/// `1/(m+1)! Σ_i [(λ_i − i + ½)^{m+1} − (−i + ½)^{m+1}]`.
pub fn shifted_power_sum(lambda: &Partition, m: u32) -> Rational {
    let half = Rational::frac(1, 2);
    let sum: Rational = lambda
        .rows()
        .iter()
        .enumerate()
        .map(|(idx, &row)| {
            let i = Rational::from_int(idx as i64 + 1);
            let shifted = Rational::from_int(row) - &i + &half;
            let empty = -&i + &half;
            shifted.pow(m + 1) - empty.pow(m + 1)
        })
        .sum();
    sum.checked_div(&Rational::factorial(m as u64 + 1))
        .expect("nonzero factorial")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pr(parts: &[u32]) -> Profile {
        Profile::from_parts(parts)
    }

    fn pa(rows: &[u32]) -> Partition {
        Partition::new(rows.to_vec())
    }

    #[test]
    fn automorphisms() {
        assert_eq!(aut_count(&pr(&[1, 1])), BigInt::from(2));
        assert_eq!(aut_count(&pr(&[1, 2])), BigInt::from(1));
        assert_eq!(aut_count(&pr(&[1, 1, 2])), BigInt::from(2));
        assert_eq!(aut_count(&Profile::empty()), BigInt::from(1));
    }

    #[test]
    fn aut_times_orderings_is_factorial() {
        // count distinct orderings by brute-force permutation of positions
        fn orderings(parts: &[u32]) -> usize {
            fn perms(v: &[u32]) -> Vec<Vec<u32>> {
                if v.is_empty() {
                    return vec![vec![]];
                }
                let mut out = Vec::new();
                for i in 0..v.len() {
                    let mut rest = v.to_vec();
                    let x = rest.remove(i);
                    for mut p in perms(&rest) {
                        p.insert(0, x);
                        out.push(p);
                    }
                }
                out
            }
            let mut all = perms(parts);
            all.sort();
            all.dedup();
            all.len()
        }
        for total in 1..=7 {
            for p in profiles_with_sum(total, 1) {
                assert_eq!(aut_count(&p) * orderings(p.parts()), factorial(p.len() as u64));
            }
        }
    }

    #[test]
    fn profile_enumeration() {
        assert_eq!(profiles_with_sum(2, 2), vec![pr(&[1, 1])]);
        assert_eq!(profiles_with_sum(3, 2), vec![pr(&[1, 2]), pr(&[1, 1, 1])]);
        assert_eq!(
            profiles_with_sum(4, 2),
            vec![pr(&[1, 3]), pr(&[2, 2]), pr(&[1, 1, 2]), pr(&[1, 1, 1, 1])]
        );
        assert_eq!(profiles_with_sum(0, 0), vec![Profile::empty()]);
    }

    #[test]
    fn formats() {
        assert_eq!(pr(&[2, 1, 2]).to_string(), "{1,2,2}");
        assert_eq!(pa(&[1, 3, 1]).to_string(), "[3,1,1]");
        assert_eq!("{2, 1}".parse::<Profile>().unwrap(), pr(&[1, 2]));
        assert_eq!("[1,2]".parse::<Partition>().unwrap(), pa(&[2, 1]));
        assert_eq!("{}".parse::<Profile>().unwrap(), Profile::empty());
        assert!("{0,1}".parse::<Profile>().is_err());
        assert!("1,2".parse::<Profile>().is_err());
    }

    #[test]
    fn character_values() {
        for n in 1..=5 {
            for mu in Partition::all_of(n) {
                assert_eq!(mn_character(&pa(&[n]), &mu).unwrap(), BigInt::one());
            }
        }
        assert_eq!(mn_character(&pa(&[1, 1]), &pa(&[2])).unwrap(), BigInt::from(-1));
        assert_eq!(mn_character(&pa(&[2, 1]), &pa(&[3])).unwrap(), BigInt::from(-1));
        assert!(mn_character(&pa(&[2, 1]), &pa(&[2])).is_err());
    }

    // The standard representation is the permutation representation minus
    // the trivial one, so χ^{(n-1,1)}(σ) = fix(σ) − 1.
    #[test]
    fn standard_representation_oracle() {
        for n in 2..=7u32 {
            for mu in Partition::all_of(n) {
                let fixed = mu.rows().iter().filter(|&&r| r == 1).count() as i64;
                assert_eq!(mn_character(&pa(&[n - 1, 1]), &mu).unwrap(), BigInt::from(fixed - 1));
            }
        }
    }

    #[test]
    fn column_orthogonality() {
        for n in 1..=6 {
            let parts = Partition::all_of(n);
            for mu in &parts {
                for nu in &parts {
                    let s: BigInt = parts
                        .iter()
                        .map(|l| mn_character(l, mu).unwrap() * mn_character(l, nu).unwrap())
                        .sum();
                    if mu != nu {
                        assert_eq!(s, BigInt::default(), "{mu} vs {nu}");
                    } else {
                        assert!(s > BigInt::default());
                    }
                }
            }
        }
    }

    #[test]
    fn central_characters() {
        for n in 2..=6 {
            for l in Partition::all_of(n) {
                assert_eq!(central_character(&pr(&[1, 1]), &l), Rational::from_int(n * (n - 1)));
            }
        }
        assert_eq!(central_character(&pr(&[2]), &pa(&[3])), Rational::from_int(3));
        assert_eq!(central_character(&pr(&[2]), &pa(&[2, 1])), Rational::zero());
        assert_eq!(central_character(&pr(&[3]), &pa(&[2])), Rational::zero());
        assert_eq!(central_character(&Profile::empty(), &pa(&[])), Rational::one());
    }

    #[test]
    fn shifted_power_sums() {
        for m in 0..4 {
            assert_eq!(shifted_power_sum(&pa(&[]), m), Rational::zero());
        }
        assert_eq!(shifted_power_sum(&pa(&[3]), 1), Rational::from_int(3));
        assert_eq!(shifted_power_sum(&pa(&[2, 1]), 1), Rational::zero());
        assert_eq!(shifted_power_sum(&pa(&[1]), 2), Rational::frac(1, 24));
        // C̄_2 = C_2 on every partition
        for n in 1..=6 {
            for l in Partition::all_of(n) {
                assert_eq!(shifted_power_sum(&l, 1), central_character(&pr(&[2]), &l));
            }
        }
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=8).map(|n| Partition::all_of(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
    }
}
