//! Zero test for graded wedge densities modulo formal divergences.
//!
//! Two methods are offered. `Rewrite` integrates by parts grading by grading
//! and records every step as a generator. `Span` builds the finite set of
//! divergence generators reachable from the input under the order bound and
//! decides membership by exact elimination. Both return a certificate that
//! is verified by recombination before it is handed out, and both report the
//! canonical residue when the input is not a divergence.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::exec::Exec;
use crate::jet::{DiffPolynomial, Monomial, MultiIndex};
use crate::linalg::{Echelon, SparseVec};
use crate::tensors::wedge::{normalize_wedge, Kind, Label, Wedge, WedgeDensity, WedgePoly};
use crate::{Error, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Rewrite,
    Span,
}

#[derive(Clone, Debug)]
pub struct ZeroOptions {
    pub method: Method,
    /// Largest derivative order allowed inside generators. `None` picks
    /// `max order + max(1, max grading)` of the input.
    pub order_bound: Option<u32>,
    /// Cap on the number of columns of the elimination system.
    pub max_columns: usize,
    pub exec: Exec,
}

impl Default for ZeroOptions {
    fn default() -> Self {
        ZeroOptions { method: Method::Rewrite, order_bound: None, max_columns: 200_000, exec: Exec::default() }
    }
}

impl ZeroOptions {
    pub fn with_method(mut self, m: Method) -> Self {
        self.method = m;
        self
    }

    pub fn with_bound(mut self, bound: Option<u32>) -> Self {
        self.order_bound = bound;
        self
    }
}

/// One generator `multiplier · D_axis(θ^(grading) · monomial · labels)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivergenceTerm {
    pub axis: usize,
    pub grading: MultiIndex,
    pub multiplier: Rational,
    pub monomial: Monomial,
    pub labels: Wedge,
}

/// Divergence certificate: `input = residue + sum of generators`, where the
/// residue lives in grading zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub generators: Vec<DivergenceTerm>,
}

impl Certificate {
    /// Sum of all generators as a wedge density.
    pub fn expand<K: Kind>(&self, dim: usize, degree: usize) -> WedgeDensity<K> {
        let mut out = WedgeDensity::<K>::zero(dim, degree);
        for g in &self.generators {
            let body = WedgePoly::single(DiffPolynomial::term(g.multiplier.clone(), g.monomial.clone()), &g.labels);
            let w = WedgeDensity::<K>::from_poly(&g.grading, degree, &body).total_derivative(g.axis);
            out = out.add(&w);
        }
        out
    }

    /// Checks `input − sum of generators` equals `residue` in grading zero.
    pub fn verify<K: Kind>(&self, input: &WedgeDensity<K>, residue: &WedgePoly) -> bool {
        let rest = input.sub(&self.expand(input.dim(), input.degree()));
        let expected = WedgeDensity::<K>::from_poly(&MultiIndex::zero(input.dim()), input.degree(), residue);
        rest == expected
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

/// Outcome of the zero test.
#[derive(Clone, Debug)]
pub struct ZeroTest {
    pub is_zero: bool,
    /// Grading-zero representative `sum (-1)^{|J|} D_J W^<J>`.
    pub residue: WedgePoly,
    pub certificate: Certificate,
    pub method: Method,
    pub order_bound: u32,
    /// False when generators beyond the bound were needed but skipped.
    pub complete: bool,
}

/// Default order bound for `v`.
pub fn default_bound<K: Kind>(v: &WedgeDensity<K>) -> u32 {
    v.max_order() + v.max_grading().max(1)
}

/// Decides whether `v` is a formal divergence.
pub fn multivector_is_zero<K: Kind>(v: &WedgeDensity<K>, opts: &ZeroOptions) -> Result<ZeroTest, Error> {
    let bound = opts.order_bound.unwrap_or_else(|| default_bound(v));
    let residue = v.canonical_residue();
    let (certificate, complete) = match opts.method {
        Method::Rewrite => (rewrite(v, bound, opts.max_columns)?, true),
        Method::Span => span_graded(v, bound, opts)?,
    };
    let is_zero = match opts.method {
        Method::Rewrite => residue.is_zero(),
        Method::Span => {
            let member = certificate.verify(v, &WedgePoly::zero());
            debug_assert!(!member || residue.is_zero());
            member
        }
    };
    let certificate = if is_zero || opts.method == Method::Rewrite { certificate } else { Certificate { generators: vec![] } };
    if opts.method == Method::Rewrite && !certificate.verify(v, &residue) {
        return Err(Error::ResourceLimit("internal: rewrite certificate failed verification".into()));
    }
    Ok(ZeroTest { is_zero, residue, certificate, method: opts.method, order_bound: bound, complete })
}

fn flatten_into(gens: &mut Vec<DivergenceTerm>, axis: usize, grading: &MultiIndex, body: &WedgePoly) {
    for (w, c) in body.terms() {
        for (m, q) in c.terms() {
            gens.push(DivergenceTerm {
                axis,
                grading: grading.clone(),
                multiplier: q.clone(),
                monomial: m.clone(),
                labels: w.clone(),
            });
        }
    }
}

/// Integration by parts from the top grading down.
fn rewrite<K: Kind>(v: &WedgeDensity<K>, bound: u32, max_terms: usize) -> Result<Certificate, Error> {
    let mut work: BTreeMap<MultiIndex, WedgePoly> =
        v.gradings().map(|(j, p)| (j.clone(), p.clone())).collect();
    let mut gens = Vec::new();
    while let Some((j, _)) = work.iter().next_back() {
        if j.is_zero() {
            break;
        }
        let j = j.clone();
        let body = work.remove(&j).expect("present");
        let axis = (0..j.dim()).find(|&i| j.get(i) > 0).expect("nonzero grading");
        let lower = j.decrement(axis).expect("positive");
        if body.max_order() > bound {
            return Err(Error::ResourceLimit(format!(
                "integration by parts needs order {} above the bound {bound}",
                body.max_order()
            )));
        }
        flatten_into(&mut gens, axis, &lower, &body);
        // θ^(J) W = D_i(θ^(J-e_i) W) − θ^(J-e_i) D_i W
        let slot = work.entry(lower.clone()).or_default();
        slot.add_scaled(&body.total_derivative(axis), &-Rational::one());
        if slot.is_zero() {
            work.remove(&lower);
        }
        if gens.len() > max_terms {
            return Err(Error::ResourceLimit(format!("more than {max_terms} generators")));
        }
    }
    Ok(Certificate { generators: gens })
}

type Column = (MultiIndex, Monomial, Wedge);
type GenKey = (MultiIndex, Monomial, Wedge, usize);

/// `D_axis(θ^(G) m w)` as a sparse vector over columns.
fn generator_image(key: &GenKey) -> SparseVec<Column> {
    let (g, m, w, axis) = key;
    let mut out = SparseVec::new();
    out.insert((g.increment(*axis), m.clone(), w.clone()), Rational::one());
    let body = WedgePoly::single(DiffPolynomial::term(Rational::one(), m.clone()), w).total_derivative(*axis);
    add_poly_columns(&mut out, g, &body);
    out
}

fn add_poly_columns(out: &mut SparseVec<Column>, g: &MultiIndex, body: &WedgePoly) {
    for (w, c) in body.terms() {
        for (m, q) in c.terms() {
            let key = (g.clone(), m.clone(), w.clone());
            let e = out.entry(key.clone()).or_insert_with(Rational::zero);
            *e += q;
            if e.is_zero() {
                out.remove(&key);
            }
        }
    }
}

fn wedge_order(w: &Wedge) -> u32 {
    w.iter().map(|l| l.order.order()).max().unwrap_or(0)
}

/// Exact elimination over θ-lowering generators closed under their images.
fn span_graded<K: Kind>(v: &WedgeDensity<K>, bound: u32, opts: &ZeroOptions) -> Result<(Certificate, bool), Error> {
    let target = {
        let mut t = SparseVec::new();
        for (j, p) in v.gradings() {
            add_poly_columns(&mut t, j, p);
        }
        t
    };
    let mut seen: BTreeSet<Column> = target.keys().cloned().collect();
    let mut queue: VecDeque<Column> = seen.iter().cloned().collect();
    let mut keys: BTreeSet<GenKey> = BTreeSet::new();
    let mut complete = true;
    while let Some((j, m, w)) = queue.pop_front() {
        for axis in 0..j.dim() {
            let Some(lower) = j.decrement(axis) else { continue };
            if m.max_order().max(wedge_order(&w)) > bound {
                complete = false;
                continue;
            }
            let key = (lower, m.clone(), w.clone(), axis);
            if !keys.insert(key.clone()) {
                continue;
            }
            for col in generator_image(&key).into_keys() {
                if !col.0.is_zero() && seen.insert(col.clone()) {
                    queue.push_back(col);
                }
            }
        }
        if seen.len() > opts.max_columns {
            return Err(Error::ResourceLimit(format!("more than {} columns in the divergence span", opts.max_columns)));
        }
    }
    let keys: Vec<GenKey> = keys.into_iter().collect();
    let images = opts.exec.map(&keys, generator_image);
    let certificate = solve(&target, &keys, &images, |(g, m, w, axis)| DivergenceTerm {
        axis: *axis,
        grading: g.clone(),
        multiplier: Rational::one(),
        monomial: m.clone(),
        labels: w.clone(),
    });
    Ok((certificate, complete))
}

fn solve<K2: Ord + Clone, G>(
    target: &SparseVec<K2>,
    keys: &[G],
    images: &[SparseVec<K2>],
    make: impl Fn(&G) -> DivergenceTerm,
) -> Certificate {
    let mut echelon = Echelon::new();
    for img in images {
        echelon.insert(img);
    }
    let (rest, combo) = echelon.reduce(target);
    if !rest.is_empty() {
        return Certificate { generators: vec![] };
    }
    let generators = combo
        .into_iter()
        .map(|(idx, c)| {
            let mut g = make(&keys[idx]);
            g.multiplier = c;
            g
        })
        .collect();
    Certificate { generators }
}

/// Result of the zero test after setting `θ ≡ 1`.
#[derive(Clone, Debug)]
pub struct StandardTest {
    pub is_zero: bool,
    /// Part of the input left after removing the divergence span.
    pub remainder: WedgePoly,
    pub certificate: Certificate,
    pub order_bound: u32,
    pub complete: bool,
}

/// Zero test in the classical calculus: keeps grading zero only and asks
/// whether the result is a total divergence.
pub fn standard_is_zero<K: Kind>(v: &WedgeDensity<K>, opts: &ZeroOptions) -> Result<StandardTest, Error> {
    let dim = v.dim();
    let body = v.standard_part();
    let bound = opts.order_bound.unwrap_or_else(|| body.max_order() + 1);
    let zero = MultiIndex::zero(dim);
    let mut target = SparseVec::new();
    add_poly_columns(&mut target, &zero, &body);
    let has_coords = target.keys().any(|(_, m, _)| m.coord_degree() > 0);
    let coord_cap = target.keys().map(|(_, m, _)| m.coord_degree()).max().unwrap_or(0) + 1;

    let mut seen: BTreeSet<Column> = target.keys().cloned().collect();
    let mut queue: VecDeque<Column> = seen.iter().cloned().collect();
    let mut keys: BTreeSet<GenKey> = BTreeSet::new();
    let mut complete = true;
    while let Some((_, m, w)) = queue.pop_front() {
        for axis in 0..dim {
            // raising a coordinate power is only needed for constants unless
            // the input depends on the coordinates itself
            let constant = m.degree() == 0 && w.is_empty();
            let mut candidates: Vec<(Monomial, Wedge)> = m
                .lowerings(axis)
                .into_iter()
                .filter(|lm| has_coords || constant || lm.coord_degree() == m.coord_degree())
                .map(|lm| (lm, w.clone()))
                .collect();
            for (i, label) in w.iter().enumerate() {
                let Some(lower) = label.order.decrement(axis) else { continue };
                let mut labels: Vec<Label> = w.to_vec();
                labels[i] = Label::new(label.field, lower);
                if let Some((_, lw)) = normalize_wedge(&labels) {
                    candidates.push((m.clone(), lw));
                }
            }
            for (cm, cw) in candidates {
                if cm.max_order().max(wedge_order(&cw)) > bound {
                    complete = false;
                    continue;
                }
                if cm.coord_degree() > coord_cap {
                    complete &= !has_coords;
                    continue;
                }
                let key = (zero.clone(), cm, cw, axis);
                if !keys.insert(key.clone()) {
                    continue;
                }
                for col in standard_image(&key).into_keys() {
                    if seen.insert(col.clone()) {
                        queue.push_back(col);
                    }
                }
            }
        }
        if seen.len() > opts.max_columns {
            return Err(Error::ResourceLimit(format!("more than {} columns in the divergence span", opts.max_columns)));
        }
    }
    let keys: Vec<GenKey> = keys.into_iter().collect();
    let images = opts.exec.map(&keys, standard_image);
    let mut echelon = Echelon::new();
    for img in &images {
        echelon.insert(img);
    }
    let (rest, combo) = echelon.reduce(&target);
    let mut remainder = WedgePoly::zero();
    for ((_, m, w), c) in &rest {
        remainder.add_sorted(w.clone(), &DiffPolynomial::term(c.clone(), m.clone()));
    }
    let is_zero = rest.is_empty();
    let generators = if is_zero {
        combo
            .into_iter()
            .map(|(idx, c)| {
                let (g, m, w, axis) = &keys[idx];
                DivergenceTerm { axis: *axis, grading: g.clone(), multiplier: c, monomial: m.clone(), labels: w.clone() }
            })
            .collect()
    } else {
        Vec::new()
    };
    Ok(StandardTest { is_zero, remainder, certificate: Certificate { generators }, order_bound: bound, complete })
}

/// `D_axis(m w)` without θ.
fn standard_image(key: &GenKey) -> SparseVec<Column> {
    let (g, m, w, axis) = key;
    let mut out = SparseVec::new();
    let body = WedgePoly::single(DiffPolynomial::term(Rational::one(), m.clone()), w).total_derivative(*axis);
    add_poly_columns(&mut out, g, &body);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensors::wedge::MultiVector;

    fn l(k: u32) -> Label {
        Label::new(0, MultiIndex::new(&[k]))
    }
    fn mi(k: u32) -> MultiIndex {
        MultiIndex::new(&[k])
    }

    fn boundary_trivector() -> MultiVector {
        // θ D(ξ ∧ ξ1 ∧ ξ2) = θ ξ ∧ ξ1 ∧ ξ3
        let mut v = MultiVector::zero(1, 3);
        v.add_term(&mi(0), &[l(0), l(1), l(3)], &DiffPolynomial::one());
        v
    }

    #[test]
    fn exact_divergence_is_zero_by_both_methods() {
        let mut w = MultiVector::zero(1, 3);
        w.add_term(&mi(1), &[l(0), l(2), l(1)], &DiffPolynomial::jet(0, mi(1)));
        let d = w.total_derivative(0);
        for method in [Method::Rewrite, Method::Span] {
            let t = multivector_is_zero(&d, &ZeroOptions::default().with_method(method)).unwrap();
            assert!(t.is_zero, "{method:?}");
            assert!(t.certificate.verify(&d, &WedgePoly::zero()));
        }
    }

    #[test]
    fn boundary_term_is_not_a_formal_divergence() {
        let v = boundary_trivector();
        for method in [Method::Rewrite, Method::Span] {
            let t = multivector_is_zero(&v, &ZeroOptions::default().with_method(method)).unwrap();
            assert!(!t.is_zero);
            assert!(!t.residue.is_zero());
        }
        let s = standard_is_zero(&v, &ZeroOptions::default()).unwrap();
        assert!(s.is_zero);
        assert!(s.complete);
    }

    #[test]
    fn tight_bound_is_reported() {
        let mut w = MultiVector::zero(1, 1);
        w.add_term(&mi(3), &[l(2)], &DiffPolynomial::one());
        let err = multivector_is_zero(&w, &ZeroOptions::default().with_bound(Some(1))).unwrap_err();
        assert!(matches!(err, Error::ResourceLimit(_)));
    }
}
