//! Problem files and the built-in corpus.
//!
//! A problem file is TOML with four sections:
//!
//! ```toml
//! name = "kdv1"
//!
//! [fields]
//! dimension = 1
//! names = ["u"]
//!
//! [operator]
//! expr = "theta*D"          # scalar operator, or:
//! # [operator.entries]
//! # "q,p" = "theta"
//! antisymmetrize = true
//!
//! [functionals]
//! F = "int u"
//!
//! [options]
//! order_bound = 6
//! method = "rewrite"
//! trials = 20
//! seed = 7
//! ```

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::frontend::parse::parse_expression;
use crate::graded::LocalFunctional;
use crate::operators::GradedDiffOperator;
use crate::tensors::Method;
use crate::{Error, Space};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawProblem {
    name: Option<String>,
    description: Option<String>,
    fields: RawFields,
    operator: RawOperator,
    #[serde(default)]
    functionals: BTreeMap<String, String>,
    #[serde(default)]
    options: RawOptions,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawFields {
    dimension: usize,
    names: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOperator {
    expr: Option<String>,
    entries: Option<BTreeMap<String, String>>,
    #[serde(default)]
    antisymmetrize: bool,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct RawOptions {
    order_bound: Option<u32>,
    method: Option<String>,
    trials: Option<usize>,
    seed: Option<u64>,
}

/// Settings for a check run; problem files may override the defaults and
/// command-line flags override both.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckOptions {
    pub method: Method,
    pub order_bound: Option<u32>,
    pub trials: usize,
    pub seed: u64,
}

impl Default for CheckOptions {
    fn default() -> Self {
        CheckOptions { method: Method::Rewrite, order_bound: None, trials: 20, seed: 1 }
    }
}

pub fn parse_method(s: &str) -> Result<Method, Error> {
    match s {
        "rewrite" => Ok(Method::Rewrite),
        "span" => Ok(Method::Span),
        other => Err(Error::Problem(format!("unknown method `{other}` (expected rewrite or span)"))),
    }
}

/// A validated problem: declared space, operator and named functionals.
#[derive(Clone, Debug)]
pub struct ProblemSpec {
    pub name: String,
    pub description: String,
    pub space: Space,
    /// Operator as written.
    pub raw_operator: GradedDiffOperator,
    /// Operator that is analyzed (antisymmetrized when requested).
    pub operator: GradedDiffOperator,
    pub antisymmetrized: bool,
    pub functionals: Vec<(String, LocalFunctional)>,
    pub options: CheckOptions,
}

impl ProblemSpec {
    pub fn from_toml(text: &str) -> Result<Self, Error> {
        let raw: RawProblem = toml::from_str(text).map_err(|e| Error::Problem(e.to_string()))?;
        let space = Space::new(raw.fields.dimension, &raw.fields.names)?;
        let dim = space.dim();
        let size = space.num_fields();
        let with_context = |what: &str, e: Error| Error::Problem(format!("{what}: {e}"));

        let raw_operator = match (&raw.operator.expr, &raw.operator.entries) {
            (Some(expr), None) => {
                if size != 1 {
                    return Err(Error::Problem(
                        "`expr` describes a scalar operator; use [operator.entries] for several fields".into(),
                    ));
                }
                parse_expression(&space, expr)
                    .and_then(|p| p.into_operator(dim))
                    .map_err(|e| with_context("operator", e))?
            }
            (None, Some(entries)) => {
                let mut op = GradedDiffOperator::zero(dim, size);
                for (key, expr) in entries {
                    let (r, c) = key
                        .split_once(',')
                        .ok_or_else(|| Error::Problem(format!("entry key `{key}` must look like \"row,col\"")))?;
                    let lookup = |n: &str| {
                        space.field_index(n.trim()).ok_or_else(|| Error::Undeclared(n.trim().to_string()))
                    };
                    let (r, c) = (lookup(r)?, lookup(c)?);
                    let entry = parse_expression(&space, expr)
                        .and_then(|p| p.into_operator(dim))
                        .map_err(|e| with_context(&format!("entry {key}"), e))?;
                    for (k, coeff) in entry.terms() {
                        op.add_term(r, c, k.grading.clone(), k.order.clone(), coeff);
                    }
                }
                op
            }
            _ => return Err(Error::Problem("[operator] needs exactly one of `expr` or `entries`".into())),
        };
        let operator = if raw.operator.antisymmetrize { raw_operator.antisymmetrize() } else { raw_operator.clone() };

        let mut functionals = Vec::new();
        for (name, expr) in &raw.functionals {
            let f = parse_expression(&space, expr)
                .and_then(|p| p.into_functional(dim))
                .map_err(|e| with_context(&format!("functional {name}"), e))?;
            functionals.push((name.clone(), f));
        }

        let mut options = CheckOptions::default();
        if let Some(b) = raw.options.order_bound {
            options.order_bound = Some(b);
        }
        if let Some(m) = &raw.options.method {
            options.method = parse_method(m)?;
        }
        if let Some(t) = raw.options.trials {
            options.trials = t;
        }
        if let Some(s) = raw.options.seed {
            options.seed = s;
        }

        Ok(ProblemSpec {
            name: raw.name.unwrap_or_else(|| "problem".into()),
            description: raw.description.unwrap_or_default(),
            space,
            raw_operator,
            operator,
            antisymmetrized: raw.operator.antisymmetrize,
            functionals,
            options,
        })
    }

    /// Loads a built-in corpus entry by name.
    pub fn from_corpus(name: &str) -> Result<Self, Error> {
        let (_, text) = CORPUS.iter().find(|(n, _)| *n == name).ok_or_else(|| Error::UnknownCorpus(name.into()))?;
        Self::from_toml(text)
    }

    pub fn functional(&self, name: &str) -> Option<&LocalFunctional> {
        self.functionals.iter().find(|(n, _)| n == name).map(|(_, f)| f)
    }
}

/// Built-in structures as `(name, problem file)`.
pub const CORPUS: &[(&str, &str)] = &[
    ("kdv1", include_str!("../../corpus/kdv1.toml")),
    ("kdv2", include_str!("../../corpus/kdv2.toml")),
    ("kdv2c", include_str!("../../corpus/kdv2c.toml")),
    ("fluid2d", include_str!("../../corpus/fluid2d.toml")),
    ("canonical2", include_str!("../../corpus/canonical2.toml")),
];

pub fn corpus_names() -> Vec<&'static str> {
    CORPUS.iter().map(|(n, _)| *n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_entries_load() {
        for name in corpus_names() {
            let p = ProblemSpec::from_corpus(name).unwrap();
            assert_eq!(p.name, name);
            assert!(p.operator.is_antisymmetric(), "{name}");
            assert!(!p.functionals.is_empty());
        }
        assert_eq!(ProblemSpec::from_corpus("nope").unwrap_err(), Error::UnknownCorpus("nope".into()));
    }

    #[test]
    fn matrix_entries() {
        let p = ProblemSpec::from_corpus("canonical2").unwrap();
        assert_eq!(p.operator.size(), 2);
        assert_eq!(p.operator.len(), 2);
        assert!(!p.antisymmetrized);
    }

    #[test]
    fn rejects_bad_files() {
        let missing = "[fields]\ndimension = 1\nnames = [\"u\"]\n[operator]\n";
        assert!(matches!(ProblemSpec::from_toml(missing), Err(Error::Problem(_))));
        let undeclared = "[fields]\ndimension = 1\nnames = [\"u\"]\n[operator]\nexpr = \"theta*v*D\"\n";
        assert!(matches!(ProblemSpec::from_toml(undeclared), Err(Error::Problem(m)) if m.contains("`v`")));
        let unknown_key = "[fields]\ndimension = 1\nnames = [\"u\"]\ncolor = 1\n[operator]\nexpr = \"theta*D\"\n";
        assert!(ProblemSpec::from_toml(unknown_key).is_err());
        let options = "[fields]\ndimension = 1\nnames = [\"u\"]\n[operator]\nexpr = \"theta*D\"\n[options]\nmethod = \"span\"\ntrials = 3\nseed = 9\n";
        let p = ProblemSpec::from_toml(options).unwrap();
        assert_eq!(p.options, CheckOptions { method: Method::Span, order_bound: None, trials: 3, seed: 9 });
    }
}
