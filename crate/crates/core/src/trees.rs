//! Marked rooted trees indexing boundary-stratum classes.
//!
//! A tree is represented by the vertex adjacent to the (implicit, unmarked)
//! root. That vertex is either a leaf, giving the one-leaf *stick*, or an
//! internal vertex with at least two children. Every tree is kept in
//! canonical form: children sorted by their encoding
//! `(marking;child,child,…)`, leaves encoded as their bare marking.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use crate::classes::ClassExpr;
use crate::error::{Error, Result};

#[derive(Clone)]
pub struct MarkedTree {
    node: Node,
    code: String,
}

#[derive(Clone)]
enum Node {
    Leaf(u32),
    Internal { marking: u32, children: Vec<MarkedTree> },
}

/// A tree as written by hand, before canonicalization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawTree {
    Leaf(u32),
    Internal(u32, Vec<RawTree>),
}

pub fn canonicalize(raw: &RawTree) -> Result<MarkedTree> {
    match raw {
        RawTree::Leaf(m) => Ok(MarkedTree::leaf(*m)),
        RawTree::Internal(marking, children) => {
            let children = children.iter().map(canonicalize).collect::<Result<Vec<_>>>()?;
            MarkedTree::internal(*marking, children)
        }
    }
}

impl MarkedTree {
    /// A leaf; at top level this is the stick with the given marking.
    pub fn leaf(marking: u32) -> Self {
        MarkedTree {
            node: Node::Leaf(marking),
            code: marking.to_string(),
        }
    }

    pub fn stick(marking: u32) -> Self {
        Self::leaf(marking)
    }

    /// Internal vertex over the given subtrees; needs at least two children.
    pub fn internal(marking: u32, mut children: Vec<MarkedTree>) -> Result<Self> {
        if children.len() < 2 {
            return Err(Error::InvalidTree(format!(
                "internal vertex with {} child(ren); valency must be at least 3",
                children.len()
            )));
        }
        children.sort_by(|a, b| a.code.cmp(&b.code));
        let code = format!(
            "({marking};{})",
            children.iter().map(|c| c.code.as_str()).collect::<Vec<_>>().join(",")
        );
        Ok(MarkedTree {
            node: Node::Internal { marking, children },
            code,
        })
    }

    /// One internal vertex carrying `marking` over leaves with the given markings.
    pub fn star(marking: u32, leaves: &[u32]) -> Result<Self> {
        Self::internal(marking, leaves.iter().map(|&m| Self::leaf(m)).collect())
    }

    pub fn encoding(&self) -> &str {
        &self.code
    }

    pub fn is_stick(&self) -> bool {
        matches!(self.node, Node::Leaf(_))
    }

    /// Marking of the vertex adjacent to the root.
    pub fn top_marking(&self) -> u32 {
        match &self.node {
            Node::Leaf(m) => *m,
            Node::Internal { marking, .. } => *marking,
        }
    }

    pub fn children(&self) -> &[MarkedTree] {
        match &self.node {
            Node::Leaf(_) => &[],
            Node::Internal { children, .. } => children,
        }
    }

    /// True when the top vertex is the only internal vertex.
    pub fn is_star(&self) -> bool {
        !self.is_stick() && self.children().iter().all(MarkedTree::is_stick)
    }

    /// Leaf markings in canonical order.
    pub fn leaves(&self) -> Vec<u32> {
        let mut out = Vec::new();
        self.walk(&mut |t| {
            if let Node::Leaf(m) = t.node {
                out.push(m);
            }
        });
        out
    }

    pub fn num_leaves(&self) -> usize {
        self.leaves().len()
    }

    /// Sum of leaf markings.
    pub fn weight(&self) -> u32 {
        self.leaves().iter().sum()
    }

    fn walk(&self, f: &mut impl FnMut(&MarkedTree)) {
        f(self);
        for c in self.children() {
            c.walk(f);
        }
    }

    fn internal_stats(&self) -> (u32, u32) {
        let mut count = 0;
        let mut markings = 0;
        self.walk(&mut |t| {
            if let Node::Internal { marking, .. } = t.node {
                count += 1;
                markings += marking;
            }
        });
        (count, markings)
    }

    /// Codimension of the class `[T]` in either basis.
    pub fn codim(&self) -> u32 {
        match self.node {
            Node::Leaf(m) => m,
            Node::Internal { .. } => {
                let (count, markings) = self.internal_stats();
                let leaves: u32 = self.leaves().iter().map(|m| m + 1).sum();
                leaves + markings + count - 1
            }
        }
    }

    /// Degree of `[T]` inside `M̄_{0,ℓ+1}`; zero for sticks.
    pub fn moduli_degree(&self) -> u32 {
        if self.is_stick() {
            return 0;
        }
        let (count, markings) = self.internal_stats();
        markings + count - 1
    }

    /// True iff some internal vertex carries a marking above its valency minus 3.
    pub fn vanishes(&self) -> bool {
        let mut dead = false;
        self.walk(&mut |t| {
            if let Node::Internal { marking, children } = &t.node {
                // valency = children + parent edge
                if *marking as usize > children.len() + 1 - 3 {
                    dead = true;
                }
            }
        });
        dead
    }

    /// Non-vanishing tree of top degree in `M̄_{0,ℓ+1}`.
    pub fn is_point_class(&self) -> bool {
        !self.is_stick() && !self.vanishes() && self.moduli_degree() as usize + 2 == self.num_leaves()
    }

    /// Representative used for storage: `None` if the class vanishes, the
    /// star `(ℓ−2; leaves)` for point classes, the tree itself otherwise.
    pub fn reduce(self) -> Option<MarkedTree> {
        if self.vanishes() {
            return None;
        }
        if self.is_point_class() && !self.is_star() {
            let leaves = self.leaves();
            return Some(Self::star(leaves.len() as u32 - 2, &leaves).expect("at least two leaves"));
        }
        Some(self)
    }

    /// Multiplies by ψ: increments the marking next to the root. Sticks are
    /// rejected; the result may vanish.
    pub fn increment_top(&self, by: u32) -> Result<MarkedTree> {
        match &self.node {
            Node::Leaf(_) => Err(Error::Constraint("ψ-multiplication is not defined on sticks".into())),
            Node::Internal { marking, children } => MarkedTree::internal(marking + by, children.clone()),
        }
    }

    /// Replaces the leaves, in canonical order, by the given subtrees. A leaf
    /// replaced by a stick just takes the stick's marking.
    pub fn graft(&self, grafts: &[MarkedTree]) -> Result<MarkedTree> {
        let expected = self.num_leaves();
        if grafts.len() != expected {
            return Err(Error::SizeMismatch(format!(
                "{} grafts for a tree with {expected} leaves",
                grafts.len()
            )));
        }
        let mut iter = grafts.iter();
        Ok(self.graft_rec(&mut iter))
    }

    fn graft_rec<'a>(&self, iter: &mut impl Iterator<Item = &'a MarkedTree>) -> MarkedTree {
        match &self.node {
            Node::Leaf(_) => iter.next().expect("counted").clone(),
            Node::Internal { marking, children } => {
                let children = children.iter().map(|c| c.graft_rec(iter)).collect();
                MarkedTree::internal(*marking, children).expect("valency preserved")
            }
        }
    }
}

/// Every non-vanishing reduced tree with `codim() == c`, sorted.
pub fn trees_of_codim(c: u32) -> Vec<MarkedTree> {
    let mut out = std::collections::BTreeSet::new();
    out.insert(MarkedTree::stick(c));
    // An internal top vertex contributes one more than its codimension.
    for t in subtrees_of_weight(c + 1) {
        if !t.is_stick() {
            if let Some(t) = t.reduce() {
                out.insert(t);
            }
        }
    }
    out.into_iter().collect()
}

/// Non-vanishing subtrees of the given weight, where a leaf `m` weighs
/// `m + 1` and an internal vertex `p` weighs `p + 1` plus its children.
fn subtrees_of_weight(w: u32) -> Vec<MarkedTree> {
    let mut out = Vec::new();
    if w == 0 {
        return out;
    }
    out.push(MarkedTree::leaf(w - 1));
    let lighter: Vec<Vec<MarkedTree>> = (0..w).map(subtrees_of_weight).collect();
    let pool: Vec<(u32, &MarkedTree)> = lighter
        .iter()
        .enumerate()
        .flat_map(|(cw, ts)| ts.iter().map(move |t| (cw as u32, t)))
        .collect();
    for marking in 0..w - 1 {
        let budget = w - 1 - marking;
        let mut chosen = Vec::new();
        choose_children(&pool, 0, budget, marking as usize + 2, &mut chosen, &mut |children| {
            out.push(MarkedTree::internal(marking, children.to_vec()).expect("two or more children"));
        });
    }
    out
}

/// Multisets from `pool[start..]` with total weight `budget` and at least
/// `min_len` members.
fn choose_children<'a>(
    pool: &[(u32, &'a MarkedTree)],
    start: usize,
    budget: u32,
    min_len: usize,
    chosen: &mut Vec<MarkedTree>,
    emit: &mut dyn FnMut(&[MarkedTree]),
) {
    if budget == 0 {
        if chosen.len() >= min_len {
            emit(chosen);
        }
        return;
    }
    for i in start..pool.len() {
        let (w, t) = pool[i];
        if w <= budget {
            chosen.push(t.clone());
            choose_children(pool, i, budget - w, min_len, chosen, emit);
            chosen.pop();
        }
    }
}

/// Multilinear substitution of class expressions into the leaves of `outer`.
///
/// Each graft is a singularity-basis expression; the result is a
/// singularity-basis expression whose ξ-degrees add up.
pub fn substitute(outer: &MarkedTree, grafts: &[ClassExpr]) -> Result<ClassExpr> {
    substitute_counted(outer, grafts).map(|(e, _)| e)
}

/// Like [`substitute`], also reporting how many glued trees were formed
/// before like terms were merged.
pub fn substitute_counted(outer: &MarkedTree, grafts: &[ClassExpr]) -> Result<(ClassExpr, usize)> {
    use crate::classes::Basis;
    use crate::exact::{Rational, XiPolynomial};

    let leaves = outer.num_leaves();
    if grafts.len() != leaves {
        return Err(Error::SizeMismatch(format!(
            "{} grafts for a tree with {leaves} leaves",
            grafts.len()
        )));
    }
    if let Some(g) = grafts.iter().find(|g| g.basis() != Basis::Singularity) {
        return Err(Error::WrongBasis {
            expected: Basis::Singularity.name(),
            found: g.basis().name(),
        });
    }
    if outer.is_stick() {
        return Ok((grafts[0].clone(), grafts[0].len()));
    }
    let (count, markings) = outer.internal_stats();
    let codim = grafts.iter().map(|g| g.codim() + 1).sum::<u32>() + markings + count - 1;

    let term_lists: Vec<Vec<(&MarkedTree, &XiPolynomial)>> = grafts.iter().map(|g| g.iter().collect()).collect();
    let mut out = ClassExpr::zero(Basis::Singularity, codim);
    let mut formed = 0;
    let mut idx = vec![0usize; leaves];
    if term_lists.iter().any(Vec::is_empty) {
        return Ok((out, 0));
    }
    loop {
        let trees: Vec<MarkedTree> = idx.iter().zip(&term_lists).map(|(&i, l)| l[i].0.clone()).collect();
        let coeff = idx
            .iter()
            .zip(&term_lists)
            .fold(XiPolynomial::constant(Rational::one()), |acc, (&i, l)| &acc * l[i].1);
        formed += 1;
        out.add_tree(outer.graft(&trees)?, &coeff)?;

        // odometer over one term per graft
        let mut pos = 0;
        loop {
            if pos == leaves {
                return Ok((out, formed));
            }
            idx[pos] += 1;
            if idx[pos] < term_lists[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

impl PartialEq for MarkedTree {
    fn eq(&self, other: &Self) -> bool {
        self.code == other.code
    }
}

impl Eq for MarkedTree {}

impl Hash for MarkedTree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.code.hash(state);
    }
}

impl PartialOrd for MarkedTree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MarkedTree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.code.cmp(&other.code)
    }
}

impl fmt::Display for MarkedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code)
    }
}

impl fmt::Debug for MarkedTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code)
    }
}

impl FromStr for MarkedTree {
    type Err = Error;

    /// `TREE := INT | "(" INT ";" TREE ("," TREE)+ ")"`, whitespace ignored.
    fn from_str(s: &str) -> Result<Self> {
        let chars: Vec<(usize, char)> = s.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
        let mut pos = 0;
        let raw = parse_raw(&chars, &mut pos, s.len())?;
        if pos != chars.len() {
            return Err(Error::parse(chars[pos].0, "trailing input after tree"));
        }
        canonicalize(&raw)
    }
}

fn parse_raw(chars: &[(usize, char)], pos: &mut usize, end: usize) -> Result<RawTree> {
    let at = |p: usize| chars.get(p).map_or(end, |c| c.0);
    let int = |pos: &mut usize| -> Result<u32> {
        let start = *pos;
        while chars.get(*pos).is_some_and(|c| c.1.is_ascii_digit()) {
            *pos += 1;
        }
        if start == *pos {
            return Err(Error::parse(at(start), "expected a nonnegative integer"));
        }
        let digits: String = chars[start..*pos].iter().map(|c| c.1).collect();
        digits.parse().map_err(|_| Error::parse(at(start), "integer out of range"))
    };
    let expect = |pos: &mut usize, want: char| -> Result<()> {
        match chars.get(*pos) {
            Some(&(_, c)) if c == want => {
                *pos += 1;
                Ok(())
            }
            _ => Err(Error::parse(at(*pos), format!("expected '{want}'"))),
        }
    };
    if chars.get(*pos).map(|c| c.1) != Some('(') {
        return Ok(RawTree::Leaf(int(pos)?));
    }
    *pos += 1;
    let marking = int(pos)?;
    expect(pos, ';')?;
    let mut children = vec![parse_raw(chars, pos, end)?];
    while chars.get(*pos).map(|c| c.1) == Some(',') {
        *pos += 1;
        children.push(parse_raw(chars, pos, end)?);
    }
    let close = at(*pos);
    expect(pos, ')')?;
    if children.len() < 2 {
        return Err(Error::parse(close, "internal vertex needs at least two children"));
    }
    Ok(RawTree::Internal(marking, children))
}
