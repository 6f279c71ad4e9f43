//! Finite partial monoids with explicit multiplication tables, a JSON
//! fixture format, and a brute-force triviality solver.
//!
//! The fixture format is
//!
//! ```json
//! {"elements": ["e1", "e2", "a"],
//!  "table": {"e1,e1": "e1", "e1,a": "a", "a,e2": "a", "e2,e2": "e2",
//!            "default": "0"}}
//! ```
//!
//! Pairs absent from `table` fall back to the `default` entry (itself
//! defaulting to `"0"`). The literal `"0"` denotes the absorbing zero and
//! `"?"` denotes an undefined product.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use serde::Deserialize;
use thiserror::Error;

use super::{PartialMonoid, Product};

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("fixture is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("fixture has no elements")]
    Empty,
    #[error("duplicate element name {0:?}")]
    DuplicateElement(String),
    #[error("malformed table key {0:?}: expected \"left,right\"")]
    MalformedKey(String),
    #[error("table key {key:?} refers to unknown element {name:?}")]
    UnknownElement { key: String, name: String },
    #[error("table value {value:?} for key {key:?} is not an element, \"0\" or \"?\"")]
    UnknownValue { key: String, value: String },
}

/// A finite partial monoid with zero, multiplication given by a table over
/// element indices.
#[derive(Debug, Clone)]
pub struct FiniteMonoid {
    names: Vec<String>,
    table: Vec<Product<usize>>,
}

#[derive(Deserialize)]
struct RawFixture {
    elements: Vec<String>,
    #[serde(default)]
    table: HashMap<String, String>,
}

impl FiniteMonoid {
    /// Builds a monoid from element names and an explicit table of defined
    /// products; everything else is the given default outcome.
    pub fn from_entries(
        names: Vec<String>,
        entries: &[(usize, usize, Product<usize>)],
        default: Product<usize>,
    ) -> Self {
        let n = names.len();
        let mut table = vec![default; n * n];
        for &(i, j, p) in entries {
            table[i * n + j] = p;
        }
        Self { names, table }
    }

    pub fn from_json(text: &str) -> Result<Self, FixtureError> {
        let raw: RawFixture = serde_json::from_str(text)?;
        if raw.elements.is_empty() {
            return Err(FixtureError::Empty);
        }
        let mut index = HashMap::new();
        for (i, name) in raw.elements.iter().enumerate() {
            if index.insert(name.clone(), i).is_some() {
                return Err(FixtureError::DuplicateElement(name.clone()));
            }
        }
        let parse_value = |key: &str, value: &str| -> Result<Product<usize>, FixtureError> {
            match value {
                "0" => Ok(Product::Zero),
                "?" => Ok(Product::Undefined),
                name => index.get(name).map(|&i| Product::Elem(i)).ok_or_else(|| {
                    FixtureError::UnknownValue {
                        key: key.to_string(),
                        value: value.to_string(),
                    }
                }),
            }
        };
        let default = match raw.table.get("default") {
            Some(v) => parse_value("default", v)?,
            None => Product::Zero,
        };
        let n = raw.elements.len();
        let mut table = vec![default; n * n];
        for (key, value) in &raw.table {
            if key == "default" {
                continue;
            }
            let (left, right) = key
                .split_once(',')
                .ok_or_else(|| FixtureError::MalformedKey(key.clone()))?;
            let lookup = |name: &str| {
                index
                    .get(name)
                    .copied()
                    .ok_or_else(|| FixtureError::UnknownElement {
                        key: key.clone(),
                        name: name.to_string(),
                    })
            };
            let i = lookup(left.trim())?;
            let j = lookup(right.trim())?;
            table[i * n + j] = parse_value(key, value)?;
        }
        Ok(Self {
            names: raw.elements,
            table,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.names.len()
    }

    /// All pairs `(i, j)` whose product is a nonzero element, with that
    /// element.
    pub fn composable_pairs(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for i in self.elements() {
            for j in self.elements() {
                if let Product::Elem(k) = self.table[i * self.len() + j] {
                    out.push((i, j, k));
                }
            }
        }
        out
    }

    /// The path monoid of the A₂ quiver `1 → 2`: two vertex idempotents
    /// and one arrow.
    pub fn quiver_a2() -> Self {
        Self::from_json(
            r#"{"elements": ["e1", "e2", "a"],
                "table": {"e1,e1": "e1", "e1,a": "a", "a,e2": "a", "e2,e2": "e2",
                          "default": "0"}}"#,
        )
        .expect("built-in fixture")
    }

    /// The cyclic group of order `n` (written multiplicatively), as a total
    /// monoid.
    pub fn cyclic(n: usize) -> Self {
        assert!(n >= 1);
        let names = (0..n).map(|i| format!("g{i}")).collect();
        let mut entries = Vec::new();
        for i in 0..n {
            for j in 0..n {
                entries.push((i, j, Product::Elem((i + j) % n)));
            }
        }
        Self::from_entries(names, &entries, Product::Zero)
    }

    /// Paths on a one-vertex, one-loop quiver truncated at length `cap`:
    /// products that would exceed the cap are undefined.
    pub fn truncated_loop(cap: usize) -> Self {
        assert!(cap >= 1);
        let names = (0..=cap)
            .map(|i| {
                if i == 0 {
                    "e".to_string()
                } else {
                    format!("x{i}")
                }
            })
            .collect();
        let mut entries = Vec::new();
        for i in 0..=cap {
            for j in 0..=cap {
                let p = if i + j <= cap {
                    Product::Elem(i + j)
                } else {
                    Product::Undefined
                };
                entries.push((i, j, p));
            }
        }
        Self::from_entries(names, &entries, Product::Zero)
    }
}

impl PartialMonoid for FiniteMonoid {
    type Elem = usize;

    fn product(&self, a: &usize, b: &usize) -> Product<usize> {
        self.table[a * self.len() + b]
    }
}

/// Outcome of solving `log f = δ log g` over the composable pairs of a
/// finite monoid.
#[derive(Debug, Clone)]
pub enum SolveOutcome {
    /// Some `g` satisfies `δg = f` up to the residual; `g` is indexed by
    /// element and is one solution among many (the system is usually
    /// rank-deficient).
    Trivial {
        g: Vec<f64>,
        residual: f64,
    },
    NotTrivial {
        residual: f64,
    },
}

impl SolveOutcome {
    pub fn residual(&self) -> f64 {
        match self {
            SolveOutcome::Trivial { residual, .. } | SolveOutcome::NotTrivial { residual } => {
                *residual
            }
        }
    }
}

/// Decides whether a positive-real 2-cochain on a finite monoid is a
/// coboundary, by least squares on `log g(a) + log g(b) − log g(ab) =
/// log f(a,b)` over all composable pairs. `f` must return a positive value
/// for every composable pair.
pub fn solve_triviality(
    m: &FiniteMonoid,
    f: impl Fn(usize, usize) -> f64,
    residual_tol: f64,
) -> SolveOutcome {
    let pairs = m.composable_pairs();
    if pairs.is_empty() {
        return SolveOutcome::Trivial {
            g: vec![1.0; m.len()],
            residual: 0.0,
        };
    }
    let mut a = DMatrix::<f64>::zeros(pairs.len(), m.len());
    let mut b = DVector::<f64>::zeros(pairs.len());
    for (row, &(i, j, k)) in pairs.iter().enumerate() {
        let v = f(i, j);
        assert!(
            v > 0.0 && v.is_finite(),
            "triviality solving needs positive finite cochain values, got {v} at ({i},{j})"
        );
        a[(row, i)] += 1.0;
        a[(row, j)] += 1.0;
        a[(row, k)] -= 1.0;
        b[row] = v.ln();
    }
    let svd = a.clone().svd(true, true);
    let x = svd
        .solve(&b, 1e-12)
        .expect("SVD least squares on a real matrix");
    let residual = (&a * &x - &b).amax();
    if residual <= residual_tol {
        SolveOutcome::Trivial {
            g: x.iter().map(|v| v.exp()).collect(),
            residual,
        }
    } else {
        SolveOutcome::NotTrivial { residual }
    }
}
