//! Expression parser.
//!
//! ```text
//! expr    := ["int"] sum
//! sum     := ["-"] product (("+" | "-") product)*
//! product := factor (("*" | "/") factor)*
//! factor  := ["-"] compose
//! compose := power ("@" power)*
//! power   := atom ("^" integer)?
//! atom    := number | identifier | "(" sum ")"
//! ```
//!
//! Identifiers are field names with optional jet suffixes (`u_x`, `u_{xy}`),
//! base coordinates, `theta` with optional suffix, and derivative symbols
//! (`D`, `D2`, `Dx`, `Dxy`, `D_{xy}`).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::graded::{GradedDensity, LocalFunctional};
use crate::jet::{multi_binomial, DiffPolynomial, MultiIndex};
use crate::operators::GradedDiffOperator;
use crate::{Error, Rational, Space};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Op(char),
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>, Error> {
    let bytes: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = bytes[start..i].iter().collect();
            out.push((start, Tok::Num(s.parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == '_') {
                if bytes[i] == '_' && bytes.get(i + 1) == Some(&'{') {
                    let close = bytes[i..].iter().position(|&b| b == '}').map(|p| p + i).ok_or(Error::Syntax {
                        pos: i,
                        msg: "unclosed `{` in suffix".into(),
                    })?;
                    i = close + 1;
                    break;
                }
                i += 1;
            }
            out.push((start, Tok::Ident(bytes[start..i].iter().collect())));
        } else if "+-*/^@()".contains(c) {
            out.push((i, Tok::Op(c)));
            i += 1;
        } else {
            return Err(Error::Syntax { pos: i, msg: format!("unexpected character `{c}`") });
        }
    }
    Ok(out)
}

/// Scalar operator expression `sum θ^(J)? c D_N`; `None` marks terms with
/// no θ factor yet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Expr {
    dim: usize,
    terms: BTreeMap<(Option<MultiIndex>, MultiIndex), DiffPolynomial>,
}

impl Expr {
    fn zero(dim: usize) -> Self {
        Expr { dim, terms: BTreeMap::new() }
    }

    fn single(dim: usize, theta: Option<MultiIndex>, order: MultiIndex, c: DiffPolynomial) -> Self {
        let mut e = Self::zero(dim);
        e.add_term(theta, order, &c);
        e
    }

    fn poly(dim: usize, c: DiffPolynomial) -> Self {
        Self::single(dim, None, MultiIndex::zero(dim), c)
    }

    fn add_term(&mut self, theta: Option<MultiIndex>, order: MultiIndex, c: &DiffPolynomial) {
        if c.is_zero() {
            return;
        }
        let key = (theta, order);
        let slot = self.terms.entry(key.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((t, n), c) in &other.terms {
            out.add_term(t.clone(), n.clone(), c);
        }
        out
    }

    fn scale(&self, k: &Rational) -> Self {
        let mut out = Self::zero(self.dim);
        for ((t, n), c) in &self.terms {
            out.add_term(t.clone(), n.clone(), &c.scale(k));
        }
        out
    }

    fn has_derivative(&self) -> bool {
        self.terms.keys().any(|(_, n)| !n.is_zero())
    }

    fn has_theta(&self) -> bool {
        self.terms.keys().any(|(t, _)| t.is_some())
    }

    fn as_constant(&self) -> Option<Rational> {
        if self.terms.is_empty() {
            return Some(Rational::zero());
        }
        if self.terms.len() != 1 {
            return None;
        }
        let ((t, n), c) = self.terms.iter().next()?;
        if t.is_some() || !n.is_zero() {
            return None;
        }
        c.as_constant()
    }

    fn join(a: &Option<MultiIndex>, b: &Option<MultiIndex>) -> Option<MultiIndex> {
        match (a, b) {
            (None, None) => None,
            (Some(x), None) | (None, Some(x)) => Some(x.clone()),
            (Some(x), Some(y)) => Some(x.add(y)),
        }
    }

    /// Coefficient product; at most one factor may carry derivatives.
    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.dim);
        for ((t1, n1), a) in &self.terms {
            for ((t2, n2), b) in &other.terms {
                out.add_term(Self::join(t1, t2), n1.add(n2), &(a * b));
            }
        }
        out
    }

    /// Composition: derivatives on the left act on θ and coefficients on
    /// the right.
    fn compose(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.dim);
        for ((t1, n1), a) in &self.terms {
            for ((t2, n2), b) in &other.terms {
                for p in n1.sub_indices() {
                    if t2.is_none() && !p.is_zero() {
                        continue;
                    }
                    let rest = n1.checked_sub(&p).expect("sub index");
                    let cp = multi_binomial(n1, &p);
                    for q in rest.sub_indices() {
                        let r = rest.checked_sub(&q).expect("sub index");
                        let coeff = &cp * multi_binomial(&rest, &q);
                        let theta = Self::join(t1, &t2.as_ref().map(|t| t.add(&p)));
                        out.add_term(theta, r.add(n2), &(a * &b.total_derivative_multi(&q)).scale(&coeff));
                    }
                }
            }
        }
        out
    }

    fn with_theta(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for ((t, n), c) in &self.terms {
            out.add_term(Some(t.clone().unwrap_or_else(|| MultiIndex::zero(self.dim))), n.clone(), c);
        }
        out
    }
}

/// What an expression denotes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Parsed {
    Polynomial(DiffPolynomial),
    Density(GradedDensity),
    Operator(GradedDiffOperator),
    Functional(LocalFunctional),
}

impl Parsed {
    pub fn kind(&self) -> &'static str {
        match self {
            Parsed::Polynomial(_) => "polynomial",
            Parsed::Density(_) => "density",
            Parsed::Operator(_) => "operator",
            Parsed::Functional(_) => "functional",
        }
    }

    pub fn into_polynomial(self) -> Result<DiffPolynomial, Error> {
        match self {
            Parsed::Polynomial(p) => Ok(p),
            other => Err(Error::Kind { expected: "polynomial", found: other.kind() }),
        }
    }

    /// Densities, with plain polynomials read as `θ f`.
    pub fn into_density(self, dim: usize) -> Result<GradedDensity, Error> {
        match self {
            Parsed::Polynomial(p) => Ok(GradedDensity::bulk(dim, p)),
            Parsed::Density(d) => Ok(d),
            Parsed::Functional(f) => Ok(f.density),
            other => Err(Error::Kind { expected: "density", found: other.kind() }),
        }
    }

    /// Functionals; polynomials and densities are integrated.
    pub fn into_functional(self, dim: usize) -> Result<LocalFunctional, Error> {
        Ok(LocalFunctional::new(self.into_density(dim)?))
    }

    /// Operators; anything without derivatives is a multiplication operator.
    pub fn into_operator(self, dim: usize) -> Result<GradedDiffOperator, Error> {
        match self {
            Parsed::Operator(op) => Ok(op),
            Parsed::Polynomial(p) => Ok(GradedDiffOperator::multiplication(dim, 1, &p)),
            Parsed::Density(d) => {
                let mut op = GradedDiffOperator::zero(dim, 1);
                for (j, c) in d.terms() {
                    op.add_term(0, 0, j.clone(), MultiIndex::zero(dim), c);
                }
                Ok(op)
            }
            other => Err(Error::Kind { expected: "operator", found: other.kind() }),
        }
    }
}

struct Parser<'a> {
    space: &'a Space,
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map(|(p, _)| *p).unwrap_or(self.end)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn dim(&self) -> usize {
        self.space.dim()
    }

    fn sum(&mut self) -> Result<Expr, Error> {
        let mut acc = self.product()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.product()?);
            } else if self.eat('-') {
                acc = acc.add(&self.product()?.scale(&-Rational::one()));
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<Expr, Error> {
        let mut acc = self.factor()?;
        loop {
            let at = self.here();
            if self.eat('*') {
                let rhs = self.factor()?;
                if acc.has_derivative() && rhs.has_derivative() {
                    return Err(Error::Syntax {
                        pos: at,
                        msg: "`*` between two operators; use `@` for composition".into(),
                    });
                }
                acc = acc.mul(&rhs);
            } else if self.eat('/') {
                let rhs = self.factor()?;
                match rhs.as_constant() {
                    Some(k) if !k.is_zero() => acc = acc.scale(&(Rational::one() / k)),
                    Some(_) => return Err(Error::Syntax { pos: at, msg: "division by zero".into() }),
                    None => return Err(Error::Syntax { pos: at, msg: "only division by constants is allowed".into() }),
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, Error> {
        if self.eat('-') {
            return Ok(self.factor()?.scale(&-Rational::one()));
        }
        if self.eat('+') {
            return self.factor();
        }
        self.compose()
    }

    fn compose(&mut self) -> Result<Expr, Error> {
        let mut acc = self.power()?;
        while self.eat('@') {
            let rhs = self.power()?;
            acc = acc.compose(&rhs);
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Expr, Error> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let at = self.here();
        let e = match self.toks.get(self.pos) {
            Some((_, Tok::Num(n))) => {
                let n: u32 = n.try_into().map_err(|_| Error::Syntax { pos: at, msg: "exponent too large".into() })?;
                self.pos += 1;
                n
            }
            _ => return Err(Error::Syntax { pos: at, msg: "expected a nonnegative integer exponent".into() }),
        };
        let mut acc = Expr::poly(self.dim(), DiffPolynomial::one());
        for _ in 0..e {
            acc = if base.has_derivative() { acc.compose(&base) } else { acc.mul(&base) };
        }
        Ok(acc)
    }

    fn atom(&mut self) -> Result<Expr, Error> {
        let at = self.here();
        match self.toks.get(self.pos).cloned() {
            Some((_, Tok::Num(n))) => {
                self.pos += 1;
                Ok(Expr::poly(self.dim(), DiffPolynomial::constant(Rational::from_integer(n))))
            }
            Some((_, Tok::Ident(name))) => {
                self.pos += 1;
                self.identifier(&name, at)
            }
            Some((_, Tok::Op('('))) => {
                self.pos += 1;
                let inner = self.sum()?;
                if !self.eat(')') {
                    return Err(Error::Syntax { pos: self.here(), msg: "expected `)`".into() });
                }
                Ok(inner)
            }
            Some((_, t)) => Err(Error::Syntax { pos: at, msg: format!("unexpected {}", describe(&t)) }),
            None => Err(Error::Syntax { pos: at, msg: "unexpected end of input".into() }),
        }
    }

    fn identifier(&self, name: &str, at: usize) -> Result<Expr, Error> {
        let dim = self.dim();
        if name == "int" {
            return Err(Error::Syntax { pos: at, msg: "`int` may only start an expression".into() });
        }
        if let Some(axis) = self.space.axis_index(name) {
            return Ok(Expr::poly(dim, DiffPolynomial::coord(axis)));
        }
        let (base, suffix) = match name.split_once('_') {
            Some((b, s)) => (b, Some(s)),
            None => (name, None),
        };
        if base == "theta" {
            let j = match suffix {
                Some(s) => self.suffix(s, at)?,
                None => MultiIndex::zero(dim),
            };
            return Ok(Expr::single(dim, Some(j), MultiIndex::zero(dim), DiffPolynomial::one()));
        }
        if let Some(order) = self.derivative_symbol(name, at)? {
            return Ok(Expr::single(dim, None, order, DiffPolynomial::one()));
        }
        if let Some(field) = self.space.field_index(base) {
            let j = match suffix {
                Some(s) => self.suffix(s, at)?,
                None => MultiIndex::zero(dim),
            };
            return Ok(Expr::poly(dim, DiffPolynomial::jet(field, j)));
        }
        Err(Error::Undeclared(name.to_string()))
    }

    /// Parses `x`, `xy`, `{xy}`, `{x1x2}` into a multi-index.
    fn suffix(&self, s: &str, at: usize) -> Result<MultiIndex, Error> {
        let inner = s.strip_prefix('{').and_then(|t| t.strip_suffix('}')).unwrap_or(s);
        self.axes_word(inner).ok_or_else(|| {
            Error::Dimension(format!("suffix `{s}` at {at} does not name axes of {:?}", self.space.axes()))
        })
    }

    fn axes_word(&self, mut word: &str) -> Option<MultiIndex> {
        if word.is_empty() {
            return None;
        }
        let mut orders = vec![0u32; self.dim()];
        let mut axes: Vec<(usize, &String)> = self.space.axes().iter().enumerate().collect();
        axes.sort_by_key(|(_, a)| std::cmp::Reverse(a.len()));
        while !word.is_empty() {
            let (i, a) = axes.iter().find(|(_, a)| word.starts_with(a.as_str()))?;
            orders[*i] += 1;
            word = &word[a.len()..];
        }
        Some(MultiIndex::new(&orders))
    }

    fn derivative_symbol(&self, name: &str, at: usize) -> Result<Option<MultiIndex>, Error> {
        let Some(rest) = name.strip_prefix('D') else { return Ok(None) };
        let dim = self.dim();
        if rest.is_empty() {
            if dim != 1 {
                return Err(Error::Dimension(format!("bare `D` at {at} needs dimension 1; name the axis")));
            }
            return Ok(Some(MultiIndex::new(&[1])));
        }
        if rest.chars().all(|c| c.is_ascii_digit()) {
            if dim != 1 {
                return Err(Error::Dimension(format!("`{name}` at {at} needs dimension 1; name the axes")));
            }
            let k: u32 = rest.parse().map_err(|_| Error::Syntax { pos: at, msg: "bad derivative order".into() })?;
            return Ok(Some(MultiIndex::new(&[k])));
        }
        let word = rest.strip_prefix('_').unwrap_or(rest);
        let word = word.strip_prefix('{').and_then(|w| w.strip_suffix('}')).unwrap_or(word);
        match self.axes_word(word) {
            Some(j) => Ok(Some(j)),
            None => Ok(None),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Num(n) => format!("number {n}"),
        Tok::Ident(s) => format!("identifier `{s}`"),
        Tok::Op(c) => format!("`{c}`"),
    }
}

/// Parses `text` in the declared space.
pub fn parse_expression(space: &Space, text: &str) -> Result<Parsed, Error> {
    let toks = lex(text)?;
    let end = text.chars().count();
    let mut p = Parser { space, toks, pos: 0, end };
    let integral = matches!(p.peek(), Some(Tok::Ident(s)) if s == "int");
    if integral {
        p.pos += 1;
    }
    let e = p.sum()?;
    if p.pos != p.toks.len() {
        let (pos, t) = &p.toks[p.pos];
        return Err(Error::Syntax { pos: *pos, msg: format!("unexpected {}", describe(t)) });
    }
    classify(space.dim(), e, integral)
}

fn classify(dim: usize, e: Expr, integral: bool) -> Result<Parsed, Error> {
    if e.has_derivative() {
        if integral {
            return Err(Error::Kind { expected: "functional", found: "operator" });
        }
        let mut op = GradedDiffOperator::zero(dim, 1);
        for ((t, n), c) in &e.with_theta().terms {
            op.add_term(0, 0, t.clone().expect("theta attached"), n.clone(), c);
        }
        return Ok(Parsed::Operator(op));
    }
    if integral || e.has_theta() {
        let mut d = GradedDensity::zero(dim);
        let e = if integral { e.with_theta() } else { e };
        for ((t, _), c) in &e.terms {
            match t {
                Some(j) => d.add_term(j.clone(), c),
                None => {
                    return Err(Error::Kind { expected: "density (every term needs a theta factor)", found: "polynomial" })
                }
            }
        }
        return Ok(if integral { Parsed::Functional(LocalFunctional::new(d)) } else { Parsed::Density(d) });
    }
    let mut p = DiffPolynomial::zero();
    for c in e.terms.values() {
        p += c;
    }
    Ok(Parsed::Polynomial(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio;

    fn space1() -> Space {
        Space::new(1, &["u"]).unwrap()
    }
    fn mi(k: u32) -> MultiIndex {
        MultiIndex::new(&[k])
    }
    fn u(k: u32) -> DiffPolynomial {
        DiffPolynomial::jet(0, mi(k))
    }

    #[test]
    fn composition_is_normalized() {
        let s = space1();
        let op = parse_expression(&s, "theta*(D3 + (2/3)*u*D + (1/3)*D@u)").unwrap().into_operator(1).unwrap();
        let mut expected = GradedDiffOperator::zero(1, 1);
        expected.add_term(0, 0, mi(0), mi(3), &DiffPolynomial::one());
        expected.add_term(0, 0, mi(0), mi(1), &u(0));
        expected.add_term(0, 0, mi(0), mi(0), &u(1).scale(&ratio(1, 3)));
        assert_eq!(op, expected);
    }

    #[test]
    fn functionals_and_densities() {
        let s = space1();
        let f = parse_expression(&s, "int theta * u*u_x").unwrap();
        assert_eq!(f, Parsed::Functional(LocalFunctional::bulk(1, &u(0) * &u(1))));
        let g = parse_expression(&s, "int u^2/2").unwrap();
        assert_eq!(g, Parsed::Functional(LocalFunctional::bulk(1, u(0).pow(2).scale(&ratio(1, 2)))));
        let d = parse_expression(&s, "theta_x * u").unwrap();
        assert_eq!(d, Parsed::Density(GradedDensity::term(mi(1), u(0))));
    }

    #[test]
    fn theta_inside_composition() {
        let s = space1();
        let op = parse_expression(&s, "D@theta").unwrap().into_operator(1).unwrap();
        let mut expected = GradedDiffOperator::zero(1, 1);
        expected.add_term(0, 0, mi(0), mi(1), &DiffPolynomial::one());
        expected.add_term(0, 0, mi(1), mi(0), &DiffPolynomial::one());
        assert_eq!(op, expected);
    }

    #[test]
    fn two_dimensional_names() {
        let s = Space::new(2, &["w"]).unwrap();
        let op = parse_expression(&s, "theta*(w_x*Dy - w_y*Dx)").unwrap().into_operator(2).unwrap();
        assert_eq!(op.len(), 2);
        let p = parse_expression(&s, "w_{xy} + x*w_yy").unwrap().into_polynomial().unwrap();
        assert_eq!(p.len(), 2);
        assert!(matches!(parse_expression(&s, "D2"), Err(Error::Dimension(_))));
    }

    #[test]
    fn errors_carry_positions() {
        let s = space1();
        assert_eq!(
            parse_expression(&s, "u + v"),
            Err(Error::Undeclared("v".into()))
        );
        assert!(matches!(parse_expression(&s, "u + * u"), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse_expression(&s, "D*D"), Err(Error::Syntax { pos: 1, .. })));
        assert!(matches!(parse_expression(&s, "(u"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expression(&s, "u/0"), Err(Error::Syntax { .. })));
    }
}
