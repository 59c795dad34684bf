//! Printing in the input syntax.
//!
//! Polynomials, densities, functionals and scalar operators print in a form
//! that parses back to the same value. Wedge densities print with `xi`
//! (multivectors) or `d` (forms) labels joined by `∧`; that form is for
//! reading only.

use std::fmt::Write;

use num_traits::{One, Signed};

use crate::graded::{GradedDensity, LocalFunctional};
use crate::jet::{DiffPolynomial, Monomial, MultiIndex};
use crate::operators::GradedDiffOperator;
use crate::tensors::{Kind, Label, WedgeDensity, WedgePoly};
use crate::{Rational, Space};

/// Axis word for a multi-index, e.g. `xxy` or `x1x2`.
fn axes_word(space: &Space, j: &MultiIndex) -> String {
    let mut s = String::new();
    for (axis, &k) in j.orders().iter().enumerate() {
        for _ in 0..k {
            s.push_str(&space.axes()[axis]);
        }
    }
    s
}

/// `_x`, `_xy`, or `_{x1x2}` in dimension above three; empty for zero.
pub fn suffix(space: &Space, j: &MultiIndex) -> String {
    if j.is_zero() {
        return String::new();
    }
    let w = axes_word(space, j);
    if space.dim() > 3 {
        format!("_{{{w}}}")
    } else {
        format!("_{w}")
    }
}

pub fn print_theta(space: &Space, j: &MultiIndex) -> String {
    format!("theta{}", suffix(space, j))
}

/// `D`, `D2` in one dimension; `Dx`, `Dxy`, `D_{x1x2}` otherwise.
pub fn print_derivative(space: &Space, n: &MultiIndex) -> String {
    if space.dim() == 1 {
        return match n.order() {
            1 => "D".into(),
            k => format!("D{k}"),
        };
    }
    let w = axes_word(space, n);
    if space.dim() > 3 {
        format!("D_{{{w}}}")
    } else {
        format!("D{w}")
    }
}

pub fn print_monomial(space: &Space, m: &Monomial) -> String {
    let mut parts = Vec::new();
    for (axis, &e) in m.coords().iter().enumerate() {
        if e > 0 {
            parts.push(power(&space.axes()[axis], e));
        }
    }
    for (v, e) in m.vars() {
        parts.push(power(&format!("{}{}", space.field_name(v.field), suffix(space, &v.order)), *e));
    }
    parts.join("*")
}

fn power(base: &str, e: u32) -> String {
    if e == 1 {
        base.to_string()
    } else {
        format!("{base}^{e}")
    }
}

/// Appends `c*m` to a running sum, handling signs and unit coefficients.
fn push_term(out: &mut String, c: &Rational, body: &str) {
    let neg = c.is_negative();
    if out.is_empty() {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    let a = c.abs();
    if body.is_empty() {
        let _ = write!(out, "{a}");
    } else if a.is_one() {
        out.push_str(body);
    } else {
        let _ = write!(out, "{a}*{body}");
    }
}

pub fn print_polynomial(space: &Space, p: &DiffPolynomial) -> String {
    let mut out = String::new();
    for (m, c) in p.terms() {
        push_term(&mut out, c, &print_monomial(space, m));
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `prefix*(p)` with parentheses only when needed.
fn scaled_by(prefix: &str, space: &Space, p: &DiffPolynomial) -> (Rational, String) {
    if p.len() == 1 {
        let (m, c) = p.terms().next().expect("one term");
        let body = print_monomial(space, m);
        let joined = match (prefix.is_empty(), body.is_empty()) {
            (true, _) => body,
            (false, true) => prefix.to_string(),
            (false, false) => format!("{prefix}*{body}"),
        };
        return (c.clone(), joined);
    }
    let inner = print_polynomial(space, p);
    if prefix.is_empty() {
        (Rational::one(), format!("({inner})"))
    } else {
        (Rational::one(), format!("{prefix}*({inner})"))
    }
}

pub fn print_density(space: &Space, d: &GradedDensity) -> String {
    let mut out = String::new();
    for (j, c) in d.terms() {
        let (k, body) = scaled_by(&print_theta(space, j), space, c);
        push_term(&mut out, &k, &body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn print_functional(space: &Space, f: &LocalFunctional) -> String {
    if f.density.is_zero() {
        return "int 0".into();
    }
    format!("int {}", print_density(space, &f.density))
}

/// One matrix entry `Î_row,col` in input syntax.
pub fn print_operator_entry(space: &Space, op: &GradedDiffOperator, row: usize, col: usize) -> String {
    let mut out = String::new();
    for (j, n, c) in op.entry(row, col) {
        let mut prefix = print_theta(space, j);
        if !n.is_zero() {
            prefix = format!("{prefix}*{}", print_derivative(space, n));
        }
        let (k, body) = scaled_by("", space, c);
        let body = if body.is_empty() { prefix } else { format!("{body}*{prefix}") };
        push_term(&mut out, &k, &body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Scalar operators print as one expression; matrices as `row,col: entry`
/// lines for every nonzero entry.
pub fn print_operator(space: &Space, op: &GradedDiffOperator) -> String {
    if op.size() == 1 {
        return print_operator_entry(space, op, 0, 0);
    }
    let mut lines = Vec::new();
    for r in 0..op.size() {
        for c in 0..op.size() {
            if !op.entry(r, c).is_empty() {
                lines.push(format!(
                    "{},{}: {}",
                    space.field_name(r),
                    space.field_name(c),
                    print_operator_entry(space, op, r, c)
                ));
            }
        }
    }
    if lines.is_empty() {
        return "0".into();
    }
    lines.join("\n")
}

pub fn print_label<K: Kind>(space: &Space, l: &Label) -> String {
    let base = if K::NAME == "form" { "d".to_string() } else { "xi".to_string() };
    if space.num_fields() == 1 && K::NAME != "form" {
        return format!("{base}{}", suffix(space, &l.order));
    }
    let name = space.field_name(l.field);
    if K::NAME == "form" {
        format!("{base}{name}{}", suffix(space, &l.order))
    } else {
        format!("{base}[{name}]{}", suffix(space, &l.order))
    }
}

pub fn print_wedge_poly<K: Kind>(space: &Space, p: &WedgePoly) -> String {
    let mut out = String::new();
    for (w, c) in p.terms() {
        let labels: Vec<String> = w.iter().map(|l| print_label::<K>(space, l)).collect();
        let wedge = labels.join("∧");
        let (k, body) = scaled_by("", space, c);
        let joined = match (body.is_empty(), wedge.is_empty()) {
            (true, _) => wedge,
            (false, true) => body,
            (false, false) => format!("{body}*{wedge}"),
        };
        push_term(&mut out, &k, &joined);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// `int theta*(...) + theta_x*(...)` style rendering of a wedge density.
pub fn print_wedge_density<K: Kind>(space: &Space, v: &WedgeDensity<K>) -> String {
    let mut out = String::new();
    for (j, p) in v.gradings() {
        let theta = print_theta(space, j);
        let mut terms = p.terms();
        match (terms.next(), terms.next()) {
            (Some((w, c)), None) => {
                let labels: Vec<String> = w.iter().map(|l| print_label::<K>(space, l)).collect();
                let (k, body) = scaled_by(&theta, space, c);
                let body = if labels.is_empty() { body } else { format!("{body}*{}", labels.join("∧")) };
                push_term(&mut out, &k, &body);
            }
            _ => push_term(&mut out, &Rational::one(), &format!("{theta}*({})", print_wedge_poly::<K>(space, p))),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    format!("int {out}")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_expression;

    #[test]
    fn round_trips() {
        let s = Space::new(1, &["u"]).unwrap();
        for text in [
            "theta*(D3 + 2/3*u*D + 1/3*u_x)",
            "int theta*u^2/2 - theta_x*u*u_xx",
            "theta_xx*(u + 1)",
            "-u_x*theta*D2 + theta_x",
            "x^2*u - 3",
        ] {
            let parsed = parse_expression(&s, text).unwrap();
            let printed = match &parsed {
                crate::frontend::Parsed::Polynomial(p) => print_polynomial(&s, p),
                crate::frontend::Parsed::Density(d) => print_density(&s, d),
                crate::frontend::Parsed::Operator(o) => print_operator(&s, o),
                crate::frontend::Parsed::Functional(f) => print_functional(&s, f),
            };
            assert_eq!(parse_expression(&s, &printed).unwrap(), parsed, "{text} -> {printed}");
        }
    }

    #[test]
    fn readable_output() {
        let s = Space::new(1, &["u"]).unwrap();
        let op = parse_expression(&s, "theta*(D3 + (2/3)*u*D)").unwrap().into_operator(1).unwrap();
        assert_eq!(print_operator(&s, &op), "2/3*u*theta*D + theta*D3");
        let d = parse_expression(&s, "-theta_x*u_xx^2").unwrap().into_density(1).unwrap();
        assert_eq!(print_density(&s, &d), "-theta_x*u_xx^2");
        let s2 = Space::new(2, &["w"]).unwrap();
        let op = parse_expression(&s2, "theta*(w_x*Dy - w_y*Dx)").unwrap().into_operator(2).unwrap();
        assert_eq!(print_operator(&s2, &op), "w_x*theta*Dy - w_y*theta*Dx");
    }
}
