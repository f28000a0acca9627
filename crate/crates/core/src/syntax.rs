//! Text grammar for class and cycle expressions, plus text, LaTeX and JSON
//! renderers.
//!
//! ```text
//! expr   := ["+"|"-"] term (("+"|"-") term)*
//! term   := factor ("*" factor)*
//! factor := INT ["/" INT] | "xi" ["^" INT] | "psi" ["^" INT] | "a_" INT
//!         | "i[" ints "]" | "d[" ints "]" | "T{" TREE "}@" ("sing"|"basic")
//! ```
//!
//! `a_m` and `i[…]` are singularity atoms, `d[…]` and a bare `psi^m` are
//! basic atoms; a term holds at most one class atom. `psi` next to `i`, `d`
//! or a tree with two or more leaves multiplies that class by ψ.

use serde::Serialize;

use crate::classes::{Basis, ClassExpr};
use crate::combinatorics::Profile;
use crate::cycles::{write_signed, CycleExpr};
use crate::error::{Error, Result};
use crate::exact::Rational;
use crate::trees::MarkedTree;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LBracket,
    RBracket,
    Tree(String),
    At,
    Comma,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let (pos, c) = bytes[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '+' | '-' | '*' | '/' | '^' | '[' | ']' | '@' | ',' => {
                out.push((
                    pos,
                    match c {
                        '+' => Tok::Plus,
                        '-' => Tok::Minus,
                        '*' => Tok::Star,
                        '/' => Tok::Slash,
                        '^' => Tok::Caret,
                        '[' => Tok::LBracket,
                        ']' => Tok::RBracket,
                        ',' => Tok::Comma,
                        _ => Tok::At,
                    },
                ));
                i += 1;
            }
            '{' => {
                let start = i + 1;
                let end = bytes[start..]
                    .iter()
                    .position(|&(_, c)| c == '}')
                    .map(|off| start + off)
                    .ok_or_else(|| Error::parse(pos, "unterminated tree braces"))?;
                out.push((pos, Tok::Tree(bytes[start..end].iter().map(|c| c.1).collect())));
                i = end + 1;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < bytes.len() && bytes[i].1.is_ascii_digit() {
                    i += 1;
                }
                out.push((pos, Tok::Int(bytes[start..i].iter().map(|c| c.1).collect())));
            }
            c if c.is_ascii_alphabetic() => {
                let start = i;
                while i < bytes.len() && (bytes[i].1.is_ascii_alphanumeric() || bytes[i].1 == '_') {
                    i += 1;
                }
                out.push((pos, Tok::Ident(bytes[start..i].iter().map(|c| c.1).collect())));
            }
            other => return Err(Error::parse(pos, format!("unexpected character {other:?}"))),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

/// One parsed monomial before basis resolution.
struct Monomial {
    coeff: Rational,
    xi: u32,
    psi: u32,
    class: Option<(Option<Basis>, MarkedTree, usize)>,
}

impl Parser {
    fn new(src: &str) -> Result<Self> {
        Ok(Parser {
            toks: tokenize(src)?,
            pos: 0,
            end: src.len(),
        })
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.1.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let at = self.here();
        match self.next() {
            Some(t) if t == want => Ok(()),
            _ => Err(Error::parse(at, format!("expected {what}"))),
        }
    }

    fn int(&mut self) -> Result<u32> {
        let at = self.here();
        match self.next() {
            Some(Tok::Int(s)) => s.parse().map_err(|_| Error::parse(at, "integer out of range")),
            _ => Err(Error::parse(at, "expected an integer")),
        }
    }

    fn exponent(&mut self) -> Result<u32> {
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            self.int()
        } else {
            Ok(1)
        }
    }

    fn int_list(&mut self) -> Result<Vec<u32>> {
        self.expect(Tok::LBracket, "'['")?;
        let mut out = Vec::new();
        if self.peek() == Some(&Tok::RBracket) {
            self.pos += 1;
            return Ok(out);
        }
        loop {
            out.push(self.int()?);
            let at = self.here();
            match self.next() {
                Some(Tok::RBracket) => return Ok(out),
                Some(Tok::Comma) => {}
                _ => return Err(Error::parse(at, "expected ',' or ']'")),
            }
        }
    }

    fn expression(&mut self) -> Result<Vec<(usize, Monomial)>> {
        let mut terms = Vec::new();
        let mut sign = Rational::one();
        match self.peek() {
            Some(Tok::Minus) => {
                sign = -sign;
                self.pos += 1;
            }
            Some(Tok::Plus) => self.pos += 1,
            _ => {}
        }
        loop {
            let at = self.here();
            let mut m = self.term()?;
            m.coeff *= &sign;
            terms.push((at, m));
            match self.next() {
                None => return Ok(terms),
                Some(Tok::Plus) => sign = Rational::one(),
                Some(Tok::Minus) => sign = -Rational::one(),
                Some(_) => return Err(Error::parse(self.toks[self.pos - 1].0, "expected '+', '-' or '*'")),
            }
        }
    }

    fn term(&mut self) -> Result<Monomial> {
        let mut m = Monomial {
            coeff: Rational::one(),
            xi: 0,
            psi: 0,
            class: None,
        };
        loop {
            self.factor(&mut m)?;
            if self.peek() == Some(&Tok::Star) {
                self.pos += 1;
            } else {
                return Ok(m);
            }
        }
    }

    fn factor(&mut self, m: &mut Monomial) -> Result<()> {
        let at = self.here();
        let set_class = |m: &mut Monomial, basis: Option<Basis>, tree: MarkedTree| -> Result<()> {
            if m.class.is_some() {
                return Err(Error::parse(at, "a term may contain only one class atom"));
            }
            m.class = Some((basis, tree, at));
            Ok(())
        };
        match self.next() {
            Some(Tok::Int(s)) => {
                let mut r: Rational = s.parse()?;
                if self.peek() == Some(&Tok::Slash) {
                    self.pos += 1;
                    let d = self.int()?;
                    r = r.checked_div(&Rational::from_int(d)).map_err(|_| Error::parse(at, "zero denominator"))?;
                }
                m.coeff = &m.coeff * &r;
            }
            Some(Tok::Ident(id)) => match id.as_str() {
                "xi" => m.xi += self.exponent()?,
                "psi" => m.psi += self.exponent()?,
                "i" | "d" => {
                    let list = self.int_list()?;
                    let (basis, leaves) = if id == "i" {
                        if list.contains(&0) {
                            return Err(Error::parse(at, "i[…] indices must be positive"));
                        }
                        (Basis::Singularity, list.iter().map(|k| k - 1).collect::<Vec<_>>())
                    } else {
                        (Basis::Basic, list)
                    };
                    if leaves.len() < 2 {
                        return Err(Error::parse(at, format!("{id}[…] needs at least two indices")));
                    }
                    set_class(m, Some(basis), MarkedTree::star(0, &leaves)?)?;
                }
                "T" => {
                    let at_tree = self.here();
                    let Some(Tok::Tree(body)) = self.next() else {
                        return Err(Error::parse(at_tree, "expected '{' after T"));
                    };
                    let tree: MarkedTree = body.parse().map_err(|e| match e {
                        Error::Parse { position, message } => Error::parse(at_tree + 1 + position, message),
                        other => other,
                    })?;
                    self.expect(Tok::At, "'@sing' or '@basic'")?;
                    let at_b = self.here();
                    let basis = match self.next() {
                        Some(Tok::Ident(b)) if b == "sing" => Basis::Singularity,
                        Some(Tok::Ident(b)) if b == "basic" => Basis::Basic,
                        _ => return Err(Error::parse(at_b, "expected 'sing' or 'basic'")),
                    };
                    set_class(m, Some(basis), tree)?;
                }
                a if a.starts_with("a_") => {
                    let k: u32 = a[2..].parse().map_err(|_| Error::parse(at, format!("invalid atom {a:?}")))?;
                    let basis = (k > 0).then_some(Basis::Singularity);
                    set_class(m, basis, MarkedTree::stick(k))?;
                }
                other => return Err(Error::parse(at, format!("unknown atom {other:?}"))),
            },
            _ => return Err(Error::parse(at, "expected a number or an atom")),
        }
        Ok(())
    }
}

/// Parses a class expression in the public grammar. An expression built
/// only from `xi` and numbers names no basis and is read as singularity.
pub fn parse_class(text: &str) -> Result<ClassExpr> {
    let mut parser = Parser::new(text)?;
    if parser.toks.is_empty() {
        return Err(Error::parse(0, "empty expression"));
    }
    let monomials = parser.expression()?;

    let mut resolved = Vec::new();
    let mut basis: Option<(Basis, usize)> = None;
    for (at, m) in monomials {
        let (b, tree) = match m.class {
            None if m.psi > 0 => (Some(Basis::Basic), MarkedTree::stick(m.psi)),
            None => (None, MarkedTree::stick(0)),
            Some((b, tree, at)) if m.psi > 0 => {
                if tree.is_stick() {
                    return Err(Error::parse(at, "psi cannot multiply a stick class"));
                }
                (b, tree.increment_top(m.psi)?)
            }
            Some((b, tree, _)) => (b, tree),
        };
        if let Some(b) = b {
            match basis {
                Some((prev, _)) if prev != b => {
                    return Err(Error::parse(
                        at,
                        format!("{} atom in a {} expression", b.name(), prev.name()),
                    ))
                }
                _ => basis = Some((b, at)),
            }
        }
        resolved.push((at, tree, m.coeff, m.xi));
    }
    let basis = basis.map_or(Basis::Singularity, |b| b.0);
    let codim = resolved
        .iter()
        .find(|(_, _, c, _)| !c.is_zero())
        .map_or(0, |(_, t, _, xi)| t.codim() + xi);
    let mut out = ClassExpr::zero(basis, codim);
    for (at, tree, coeff, xi) in resolved {
        if coeff.is_zero() {
            continue;
        }
        if tree.codim() + xi != codim {
            return Err(Error::parse(
                at,
                format!("term of codimension {} in an expression of codimension {codim}", tree.codim() + xi),
            ));
        }
        out.add_monomial(tree, coeff, xi as usize)?;
    }
    Ok(out)
}

fn psi_prefix(p: u32) -> String {
    match p {
        0 => String::new(),
        1 => "psi*".into(),
        p => format!("psi^{p}*"),
    }
}

fn list(xs: impl IntoIterator<Item = u32>) -> String {
    let mut v: Vec<u32> = xs.into_iter().collect();
    v.sort_unstable();
    v.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

/// Atom for a tree; empty for the unit.
pub fn tree_atom(tree: &MarkedTree, basis: Basis) -> String {
    if tree.is_stick() {
        return match (tree.top_marking(), basis) {
            (0, _) => String::new(),
            (m, Basis::Singularity) => format!("a_{m}"),
            (1, Basis::Basic) => "psi".into(),
            (m, Basis::Basic) => format!("psi^{m}"),
        };
    }
    if tree.is_star() {
        let leaves = tree.leaves();
        let body = match basis {
            Basis::Singularity => format!("i[{}]", list(leaves.iter().map(|m| m + 1))),
            Basis::Basic => format!("d[{}]", list(leaves)),
        };
        return format!("{}{body}", psi_prefix(tree.top_marking()));
    }
    let tag = match basis {
        Basis::Singularity => "sing",
        Basis::Basic => "basic",
    };
    format!("T{{{}}}@{tag}", tree.encoding())
}

fn join_factors(xi: usize, atom: &str) -> String {
    let xi = match xi {
        0 => String::new(),
        1 => "xi".into(),
        e => format!("xi^{e}"),
    };
    match (xi.is_empty(), atom.is_empty()) {
        (true, _) => atom.to_string(),
        (false, true) => xi,
        (false, false) => format!("{xi}*{atom}"),
    }
}

/// Text form in the public grammar, e.g. `1/2*a_2 + 1/4*i[1,1] + 3/2*xi*a_1 + xi^2`.
pub fn render_text(e: &ClassExpr) -> String {
    let terms = e.ordered_terms();
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (xi, c, tree)) in terms.into_iter().enumerate() {
        let atom = join_factors(xi, &tree_atom(tree, e.basis()));
        write_signed(&mut out, i == 0, &c, &atom).expect("write to string");
    }
    out
}

fn latex_rational(c: &Rational) -> String {
    if c.is_integer() {
        c.to_string()
    } else {
        format!("\\frac{{{}}}{{{}}}", c.numer(), c.denom())
    }
}

fn latex_atom(tree: &MarkedTree, basis: Basis) -> String {
    let psi = |p: u32| match p {
        0 => String::new(),
        1 => "\\psi ".into(),
        p => format!("\\psi^{{{p}}} "),
    };
    if tree.is_stick() {
        return match (tree.top_marking(), basis) {
            (0, _) => String::new(),
            (m, Basis::Singularity) => format!("a_{{{m}}}"),
            (1, Basis::Basic) => "\\psi".into(),
            (m, Basis::Basic) => format!("\\psi^{{{m}}}"),
        };
    }
    if tree.is_star() {
        let leaves = tree.leaves();
        let body = match basis {
            Basis::Singularity => format!("i_{{{}}}", list(leaves.iter().map(|m| m + 1))),
            Basis::Basic => format!("\\delta_{{{}}}", list(leaves)),
        };
        return format!("{}{body}", psi(tree.top_marking()));
    }
    let tag = match basis {
        Basis::Singularity => "sing",
        Basis::Basic => "basic",
    };
    format!("\\left[{}\\right]_{{\\rm {tag}}}", tree.encoding())
}

pub fn render_latex(e: &ClassExpr) -> String {
    let terms = e.ordered_terms();
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (xi, c, tree)) in terms.into_iter().enumerate() {
        let mag = c.abs();
        out.push_str(match (i == 0, c.is_negative()) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        });
        let xi = match xi {
            0 => String::new(),
            1 => "\\xi ".into(),
            e => format!("\\xi^{{{e}}} "),
        };
        let atom = latex_atom(tree, e.basis());
        let body = format!("{xi}{atom}").trim_end().to_string();
        if body.is_empty() {
            out.push_str(&latex_rational(&mag));
        } else if mag.is_one() {
            out.push_str(&body);
        } else {
            out.push_str(&format!("{} {body}", latex_rational(&mag)));
        }
    }
    out
}

#[derive(Serialize)]
struct JsonTerm {
    coeff: Rational,
    xi_power: usize,
    tree: String,
}

#[derive(Serialize)]
struct JsonClass {
    basis: &'static str,
    codim: u32,
    terms: Vec<JsonTerm>,
}

/// `{"basis": …, "codim": n, "terms": [{"coeff": "p/q", "xi_power": e, "tree": …}]}`
pub fn render_json(e: &ClassExpr) -> serde_json::Value {
    let doc = JsonClass {
        basis: e.basis().name(),
        codim: e.codim(),
        terms: e
            .ordered_terms()
            .into_iter()
            .map(|(xi, coeff, tree)| JsonTerm {
                coeff,
                xi_power: xi,
                tree: tree.encoding().to_string(),
            })
            .collect(),
    };
    serde_json::to_value(doc).expect("serializable")
}

/// Parses `1/2*C[3] + 1/4*C[1,1] + 1/24*C[1]`.
pub fn parse_cycle(text: &str) -> Result<CycleExpr> {
    let toks = tokenize(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end: text.len(),
    };
    let mut out = CycleExpr::zero();
    let mut sign = Rational::one();
    if p.peek() == Some(&Tok::Minus) {
        sign = -sign;
        p.pos += 1;
    }
    loop {
        let mut coeff = sign.clone();
        let mut profile: Option<Profile> = None;
        loop {
            let at = p.here();
            match p.next() {
                Some(Tok::Int(s)) => {
                    let mut r: Rational = s.parse()?;
                    if p.peek() == Some(&Tok::Slash) {
                        p.pos += 1;
                        r = r.checked_div(&Rational::from_int(p.int()?)).map_err(|_| Error::parse(at, "zero denominator"))?;
                    }
                    coeff *= r;
                }
                Some(Tok::Ident(id)) if id == "C" => {
                    if profile.is_some() {
                        return Err(Error::parse(at, "a term may contain only one C[…]"));
                    }
                    profile = Some(Profile::new(p.int_list()?).map_err(|_| Error::parse(at, "cycle lengths must be positive"))?);
                }
                _ => return Err(Error::parse(at, "expected a number or C[…]")),
            }
            if p.peek() == Some(&Tok::Star) {
                p.pos += 1;
            } else {
                break;
            }
        }
        out.add_term(profile.unwrap_or_else(Profile::empty), coeff);
        let at = p.here();
        match p.next() {
            None => return Ok(out),
            Some(Tok::Plus) => sign = Rational::one(),
            Some(Tok::Minus) => sign = -Rational::one(),
            Some(_) => return Err(Error::parse(at, "expected '+' or '-'")),
        }
    }
}

#[derive(Serialize)]
struct JsonCycleTerm<'a> {
    profile: &'a Profile,
    coeff: &'a Rational,
}

pub fn render_cycle_json(c: &CycleExpr) -> serde_json::Value {
    let terms: Vec<_> = c
        .ordered_terms()
        .into_iter()
        .map(|(profile, coeff)| JsonCycleTerm { profile, coeff })
        .collect();
    serde_json::json!({ "terms": terms })
}

pub fn render_cycle_latex(c: &CycleExpr) -> String {
    let terms = c.ordered_terms();
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (p, coeff)) in terms.into_iter().enumerate() {
        out.push_str(match (i == 0, coeff.is_negative()) {
            (true, true) => "-",
            (true, false) => "",
            (false, true) => " - ",
            (false, false) => " + ",
        });
        let atom = format!("C_{{{}}}", list(p.parts().iter().copied()));
        let mag = coeff.abs();
        if mag.is_one() {
            out.push_str(&atom);
        } else {
            out.push_str(&format!("{} {atom}", latex_rational(&mag)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trees::trees_of_codim;
    use proptest::prelude::*;

    #[test]
    fn unit_and_simple_atoms() {
        let unit = parse_class("a_0").unwrap();
        assert_eq!(unit, ClassExpr::unit(Basis::Singularity));
        assert_eq!(render_text(&unit), "1");
        let e = parse_class("i[1,2] + xi*i[1,1]").unwrap();
        assert_eq!(e.codim(), 3);
        assert_eq!(render_text(&e), "i[1,2] + xi*i[1,1]");
        let e = parse_class("T{(0;1,2)}@basic").unwrap();
        assert_eq!(e.basis(), Basis::Basic);
        assert_eq!(render_text(&e), "d[1,2]");
    }

    #[test]
    fn psi_attaches_to_stars() {
        let e = parse_class("psi*d[0,0,0] - xi*psi^3").unwrap();
        assert_eq!(render_text(&e), "psi*d[0,0,0] - xi*psi^3");
        assert!(parse_class("psi*a_2").is_err());
    }

    #[test]
    fn latex_and_json() {
        let e = parse_class("1/2*i[1,3] + 1/4*psi*i[1,1,1] + xi^2*i[1,1]").unwrap();
        assert_eq!(
            render_latex(&e),
            "\\frac{1}{2} i_{1,3} + \\frac{1}{4} \\psi i_{1,1,1} + \\xi^{2} i_{1,1}"
        );
        let e = parse_class("d[0,1] - psi").unwrap_err();
        assert!(matches!(e, Error::Parse { .. }));
        let json = render_json(&parse_class("1/2*a_2 + 1/4*i[1,1]").unwrap());
        assert_eq!(
            json,
            serde_json::json!({"basis": "singularity", "codim": 2, "terms": [
                {"coeff": "1/2", "xi_power": 0, "tree": "2"},
                {"coeff": "1/4", "xi_power": 0, "tree": "(0;0,0)"}]})
        );
    }

    #[test]
    fn errors_carry_positions() {
        match parse_class("a_1 + ? ") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 6),
            other => panic!("{other:?}"),
        }
        // Mixing bases.
        match parse_class("i[1,1] + d[0,0]") {
            Err(Error::Parse { position, .. }) => assert_eq!(position, 9),
            other => panic!("{other:?}"),
        }
        // Inhomogeneous.
        assert!(parse_class("a_2 + a_1").is_err());
        assert!(parse_class("").is_err());
    }

    #[test]
    fn cycles() {
        let c = parse_cycle("1/2*C[3] + 1/4*C[1,1] + 1/24*C[1]").unwrap();
        assert_eq!(c.to_string(), "1/2*C[3] + 1/4*C[1,1] + 1/24*C[1]");
        assert_eq!(render_cycle_latex(&c), "\\frac{1}{2} C_{3} + \\frac{1}{4} C_{1,1} + \\frac{1}{24} C_{1}");
        assert_eq!(
            render_cycle_json(&c)["terms"][0],
            serde_json::json!({"profile": [3], "coeff": "1/2"})
        );
        assert!(parse_cycle("C[0]").is_err());
    }

    fn expr() -> impl Strategy<Value = ClassExpr> {
        (1u32..=5, any::<bool>(), prop::collection::vec((0usize..64, -20i64..20, 1i64..9), 1..6)).prop_map(
            |(codim, basic, picks)| {
                let basis = if basic { Basis::Basic } else { Basis::Singularity };
                let pool: Vec<_> = (0..=codim).flat_map(trees_of_codim).collect();
                let mut e = ClassExpr::zero(basis, codim);
                for (i, p, q) in picks {
                    let t = pool[i % pool.len()].clone();
                    let xi = (codim - t.codim()) as usize;
                    e.add_monomial(t, Rational::frac(p, q), xi).unwrap();
                }
                e
            },
        )
    }

    proptest! {
        #[test]
        fn render_parse_round_trip(e in expr()) {
            // Pure ξ-powers carry no basis marker and always read back as singularity.
            prop_assume!(e.trees().any(|t| *t != MarkedTree::stick(0)));
            let text = render_text(&e);
            prop_assert_eq!(parse_class(&text).unwrap(), e.clone());
            let again = render_text(&parse_class(&text).unwrap());
            prop_assert_eq!(again, text);
        }
    }
}
