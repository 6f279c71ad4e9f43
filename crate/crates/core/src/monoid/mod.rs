//! Partial monoids with zero, their cochain complexes, and monoid-algebra
//! formal sums with a deformed (weighted) product.
//!
//! Multiplication takes values in the elements together with two sentinels:
//! `Zero` (an absorbing element, e.g. non-matching endpoints of paths) and
//! `Undefined` (the product exists set-theoretically but the structure
//! needed to work with it — a unique shortest geodesic — does not).
//! `Undefined` propagates through every construction; it is a value, not an
//! error. Exceptions are reserved for contract violations.

mod finite;

pub use finite::{solve_triviality, FiniteMonoid, FixtureError, SolveOutcome};

use std::sync::Arc;

use num_complex::Complex64;
use thiserror::Error;

use crate::coeffs::{ModReal, Weight};

/// Outcome of a partial-monoid multiplication.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Product<T> {
    Elem(T),
    Zero,
    Undefined,
}

impl<T> Product<T> {
    pub fn elem(&self) -> Option<&T> {
        match self {
            Product::Elem(t) => Some(t),
            _ => None,
        }
    }

    pub fn into_elem(self) -> Option<T> {
        match self {
            Product::Elem(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Product::Zero)
    }

    pub fn is_undefined(&self) -> bool {
        matches!(self, Product::Undefined)
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Product<U> {
        match self {
            Product::Elem(t) => Product::Elem(f(t)),
            Product::Zero => Product::Zero,
            Product::Undefined => Product::Undefined,
        }
    }
}

/// Outcome of evaluating a partial map: either a value or `Undefined`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Eval<T> {
    Defined(T),
    Undefined,
}

impl<T> Eval<T> {
    pub fn defined(self) -> Option<T> {
        match self {
            Eval::Defined(t) => Some(t),
            Eval::Undefined => None,
        }
    }

    pub fn is_defined(&self) -> bool {
        matches!(self, Eval::Defined(_))
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Eval<U> {
        match self {
            Eval::Defined(t) => Eval::Defined(f(t)),
            Eval::Undefined => Eval::Undefined,
        }
    }

    pub fn and_then<U>(self, f: impl FnOnce(T) -> Eval<U>) -> Eval<U> {
        match self {
            Eval::Defined(t) => f(t),
            Eval::Undefined => Eval::Undefined,
        }
    }

    /// Unwraps a value that is defined by construction.
    pub fn expect_defined(self, msg: &str) -> T {
        match self {
            Eval::Defined(t) => t,
            Eval::Undefined => panic!("{msg}"),
        }
    }
}

/// A set with one associative multiplication valued in
/// `elements ∪ {Zero, Undefined}`. Associativity is required on all triples
/// whose intermediate products are defined and nonzero; `Zero` is absorbing.
pub trait PartialMonoid {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn product(&self, a: &Self::Elem, b: &Self::Elem) -> Product<Self::Elem>;
}

/// A cochain argument: a monoid element or the absorbing zero. The zero
/// element is a legitimate point of the monoid, so cochains must be
/// evaluable on tuples containing it — coboundaries produce such tuples
/// whenever a merged product collapses to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Slot<E> {
    Elem(E),
    Zero,
}

fn slot_product<M: PartialMonoid>(
    m: &M,
    a: &Slot<M::Elem>,
    b: &Slot<M::Elem>,
) -> Eval<Slot<M::Elem>> {
    match (a, b) {
        (Slot::Zero, _) | (_, Slot::Zero) => Eval::Defined(Slot::Zero),
        (Slot::Elem(a), Slot::Elem(b)) => match m.product(a, b) {
            Product::Elem(p) => Eval::Defined(Slot::Elem(p)),
            Product::Zero => Eval::Defined(Slot::Zero),
            Product::Undefined => Eval::Undefined,
        },
    }
}

fn wrap_slots<E: Clone>(args: &[E]) -> Vec<Slot<E>> {
    args.iter().cloned().map(Slot::Elem).collect()
}

type AdditiveFn<'a, E> = Arc<dyn Fn(&[Slot<E>]) -> Eval<f64> + Send + Sync + 'a>;
type MultiplicativeFn<'a, E> = Arc<dyn Fn(&[Slot<E>]) -> Eval<Weight> + Send + Sync + 'a>;

/// An n-cochain valued in `ℝ/μℝ`. Evaluation is partial, mirroring the
/// partiality of the monoid it lives on.
#[derive(Clone)]
pub struct AdditiveCochain<'a, E> {
    arity: usize,
    modulus: f64,
    eval_fn: AdditiveFn<'a, E>,
}

impl<'a, E: Clone + PartialEq + std::fmt::Debug> AdditiveCochain<'a, E> {
    /// Cochain from values on nonzero tuples; tuples containing the zero
    /// element take the group identity.
    pub fn new(
        arity: usize,
        modulus: f64,
        f: impl Fn(&[E]) -> Eval<f64> + Send + Sync + 'a,
    ) -> Self {
        Self::from_slots(arity, modulus, move |slots: &[Slot<E>]| {
            let mut elems = Vec::with_capacity(slots.len());
            for s in slots {
                match s {
                    Slot::Elem(e) => elems.push(e.clone()),
                    Slot::Zero => return Eval::Defined(0.0),
                }
            }
            f(&elems)
        })
    }

    /// Cochain with full control over zero slots.
    pub fn from_slots(
        arity: usize,
        modulus: f64,
        f: impl Fn(&[Slot<E>]) -> Eval<f64> + Send + Sync + 'a,
    ) -> Self {
        assert!(arity >= 1, "cochains have arity at least 1");
        Self {
            arity,
            modulus,
            eval_fn: Arc::new(f),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn modulus(&self) -> f64 {
        self.modulus
    }

    pub fn eval(&self, args: &[E]) -> Eval<ModReal> {
        assert_eq!(args.len(), self.arity, "arity mismatch");
        self.eval_slots(&wrap_slots(args))
    }

    pub fn eval_slots(&self, args: &[Slot<E>]) -> Eval<ModReal> {
        assert_eq!(args.len(), self.arity, "arity mismatch");
        (self.eval_fn)(args).map(|v| ModReal::new(v, self.modulus))
    }
}

/// An n-cochain valued in nonzero scalars.
#[derive(Clone)]
pub struct MultiplicativeCochain<'a, E> {
    arity: usize,
    eval_fn: MultiplicativeFn<'a, E>,
}

impl<'a, E: Clone + PartialEq + std::fmt::Debug> MultiplicativeCochain<'a, E> {
    /// Cochain from values on nonzero tuples; tuples containing the zero
    /// element take the value one.
    pub fn new(arity: usize, f: impl Fn(&[E]) -> Eval<Weight> + Send + Sync + 'a) -> Self {
        Self::from_slots(arity, move |slots: &[Slot<E>]| {
            let mut elems = Vec::with_capacity(slots.len());
            for s in slots {
                match s {
                    Slot::Elem(e) => elems.push(e.clone()),
                    Slot::Zero => return Eval::Defined(Weight::one()),
                }
            }
            f(&elems)
        })
    }

    pub fn from_slots(
        arity: usize,
        f: impl Fn(&[Slot<E>]) -> Eval<Weight> + Send + Sync + 'a,
    ) -> Self {
        assert!(arity >= 1, "cochains have arity at least 1");
        Self {
            arity,
            eval_fn: Arc::new(f),
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn eval(&self, args: &[E]) -> Eval<Weight> {
        assert_eq!(args.len(), self.arity, "arity mismatch");
        self.eval_slots(&wrap_slots(args))
    }

    pub fn eval_slots(&self, args: &[Slot<E>]) -> Eval<Weight> {
        assert_eq!(args.len(), self.arity, "arity mismatch");
        (self.eval_fn)(args)
    }
}

/// The coboundary `δF` of an additive n-cochain:
///
/// ```text
/// δF(a₁,…,aₙ₊₁) = F(a₂,…,aₙ₊₁)
///               + Σᵢ (−1)ⁱ F(a₁,…,aᵢaᵢ₊₁,…,aₙ₊₁)
///               + (−1)ⁿ⁺¹ F(a₁,…,aₙ).
/// ```
///
/// Merged products that collapse to zero stay in the tuple as zero slots;
/// an `Undefined` product or F-evaluation makes the whole evaluation
/// `Undefined` (propagated, not raised).
pub fn coboundary_additive<'a, M: PartialMonoid + Sync>(
    m: &'a M,
    f: &AdditiveCochain<'a, M::Elem>,
) -> AdditiveCochain<'a, M::Elem> {
    let n = f.arity;
    let inner = f.eval_fn.clone();
    AdditiveCochain {
        arity: n + 1,
        modulus: f.modulus,
        eval_fn: Arc::new(move |args: &[Slot<M::Elem>]| {
            debug_assert_eq!(args.len(), n + 1);
            let mut total = match inner(&args[1..]) {
                Eval::Defined(v) => v,
                Eval::Undefined => return Eval::Undefined,
            };
            let mut sign = -1.0;
            let mut tuple: Vec<Slot<M::Elem>> = Vec::with_capacity(n);
            for i in 0..n {
                let merged = match slot_product(m, &args[i], &args[i + 1]) {
                    Eval::Defined(s) => s,
                    Eval::Undefined => return Eval::Undefined,
                };
                tuple.clear();
                tuple.extend_from_slice(&args[..i]);
                tuple.push(merged);
                tuple.extend_from_slice(&args[i + 2..]);
                match inner(&tuple) {
                    Eval::Defined(v) => total += sign * v,
                    Eval::Undefined => return Eval::Undefined,
                }
                sign = -sign;
            }
            match inner(&args[..n]) {
                Eval::Defined(v) => total += sign * v,
                Eval::Undefined => return Eval::Undefined,
            }
            Eval::Defined(total)
        }),
    }
}

/// The multiplicative coboundary of a 1-cochain:
/// `(δg)(a, b) = g(a)·g(b) / g(ab)`, with `g` evaluated at the zero slot
/// (giving one, for cochains built with `new`) when `ab` collapses.
pub fn coboundary_multiplicative<'a, M: PartialMonoid + Sync>(
    m: &'a M,
    g: &MultiplicativeCochain<'a, M::Elem>,
) -> MultiplicativeCochain<'a, M::Elem> {
    assert_eq!(
        g.arity, 1,
        "multiplicative coboundary is implemented for 1-cochains"
    );
    let inner = g.eval_fn.clone();
    MultiplicativeCochain {
        arity: 2,
        eval_fn: Arc::new(move |args: &[Slot<M::Elem>]| {
            debug_assert_eq!(args.len(), 2);
            let ga = match inner(&args[..1]) {
                Eval::Defined(w) => w,
                Eval::Undefined => return Eval::Undefined,
            };
            let gb = match inner(&args[1..]) {
                Eval::Defined(w) => w,
                Eval::Undefined => return Eval::Undefined,
            };
            let merged = match slot_product(m, &args[0], &args[1]) {
                Eval::Defined(s) => s,
                Eval::Undefined => return Eval::Undefined,
            };
            match inner(std::slice::from_ref(&merged)) {
                Eval::Defined(gp) => Eval::Defined(ga * gb / gp),
                Eval::Undefined => Eval::Undefined,
            }
        }),
    }
}

/// Result of checking the multiplicative 2-cocycle identity
/// `f(a,b)·f(ab,c) = f(b,c)·f(a,bc)` over a sample of triples.
#[derive(Debug, Clone, Copy)]
pub struct CocycleCheck {
    pub holds: bool,
    pub worst_rel: f64,
    pub checked: usize,
    pub skipped: usize,
}

/// Verifies the 2-cocycle identity on every fully composable triple in the
/// sample, within a relative tolerance. Triples with an undefined or zero
/// intermediate product are skipped and counted.
pub fn is_cocycle_multiplicative<M: PartialMonoid>(
    m: &M,
    f: &MultiplicativeCochain<M::Elem>,
    triples: &[[M::Elem; 3]],
    rel_tol: f64,
) -> CocycleCheck {
    assert_eq!(f.arity, 2);
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    let mut skipped = 0;
    for [a, b, c] in triples {
        let ab = match m.product(a, b) {
            Product::Elem(p) => p,
            _ => {
                skipped += 1;
                continue;
            }
        };
        let bc = match m.product(b, c) {
            Product::Elem(p) => p,
            _ => {
                skipped += 1;
                continue;
            }
        };
        if !matches!(m.product(a, &bc), Product::Elem(_)) {
            skipped += 1;
            continue;
        }
        let evals = [
            f.eval(&[a.clone(), b.clone()]),
            f.eval(&[ab, c.clone()]),
            f.eval(&[b.clone(), c.clone()]),
            f.eval(&[a.clone(), bc]),
        ];
        let mut ws = Vec::with_capacity(4);
        for e in evals {
            match e {
                Eval::Defined(w) => ws.push(w),
                Eval::Undefined => break,
            }
        }
        if ws.len() < 4 {
            skipped += 1;
            continue;
        }
        let lhs = ws[0] * ws[1];
        let rhs = ws[2] * ws[3];
        worst = worst.max(lhs.rel_distance(&rhs));
        checked += 1;
    }
    CocycleCheck {
        holds: worst <= rel_tol,
        worst_rel: worst,
        checked,
        skipped,
    }
}

/// A finite linear combination of monoid elements with complex
/// coefficients. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalSum<E: Clone + PartialEq> {
    terms: Vec<(E, Complex64)>,
}

impl<E: Clone + PartialEq> Default for FormalSum<E> {
    fn default() -> Self {
        Self::new()
    }
}

impl<E: Clone + PartialEq> FormalSum<E> {
    pub fn new() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn singleton(e: E, coeff: Complex64) -> Self {
        let mut s = Self::new();
        s.add_term(e, coeff);
        s
    }

    pub fn basis(e: E) -> Self {
        Self::singleton(e, Complex64::new(1.0, 0.0))
    }

    /// Adds `coeff·e`, merging with an existing term on the same basis
    /// element and dropping terms whose coefficient becomes zero.
    pub fn add_term(&mut self, e: E, coeff: Complex64) {
        if coeff.norm_sqr() == 0.0 {
            return;
        }
        if let Some(idx) = self.terms.iter().position(|(t, _)| *t == e) {
            self.terms[idx].1 += coeff;
            if self.terms[idx].1.norm_sqr() == 0.0 {
                self.terms.swap_remove(idx);
            }
        } else {
            self.terms.push((e, coeff));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&E, Complex64)> {
        self.terms.iter().map(|(e, c)| (e, *c))
    }

    pub fn coeff(&self, e: &E) -> Complex64 {
        self.terms
            .iter()
            .find(|(t, _)| t == e)
            .map(|(_, c)| *c)
            .unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, k: Complex64) -> Self {
        let mut s = Self::new();
        for (e, c) in self.terms() {
            s.add_term(e.clone(), c * k);
        }
        s
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut s = self.clone();
        for (e, c) in other.terms() {
            s.add_term(e.clone(), c);
        }
        s
    }

    /// Term-by-term comparison within an absolute coefficient tolerance.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        for (e, c) in self.terms() {
            if (c - other.coeff(e)).norm() > tol {
                return false;
            }
        }
        for (e, c) in other.terms() {
            if (c - self.coeff(e)).norm() > tol {
                return false;
            }
        }
        true
    }
}

/// Error raised when a deformed product touches a basis pair whose product
/// or weight is undefined. Lists the offending pairs.
#[derive(Debug, Error)]
#[error("deformed product undefined on {} basis pair(s): {}", pairs.len(), pairs.join("; "))]
pub struct UndefinedPairs {
    pub pairs: Vec<String>,
}

/// Bilinear extension of `a ⋆ b = f(a,b)·ab` to formal sums. Basis pairs
/// with a zero product contribute nothing; pairs with an undefined product
/// or weight make the whole product undefined.
pub fn deformed_product<M, F>(
    m: &M,
    f: F,
    x: &FormalSum<M::Elem>,
    y: &FormalSum<M::Elem>,
) -> Result<FormalSum<M::Elem>, UndefinedPairs>
where
    M: PartialMonoid,
    F: Fn(&M::Elem, &M::Elem) -> Eval<Weight>,
{
    let mut out = FormalSum::new();
    let mut offending = Vec::new();
    for (a, ca) in x.terms() {
        for (b, cb) in y.terms() {
            match m.product(a, b) {
                Product::Zero => {}
                Product::Undefined => offending.push(format!("({a:?}, {b:?})")),
                Product::Elem(p) => match f(a, b) {
                    Eval::Defined(w) => out.add_term(p, ca * cb * w.as_complex()),
                    Eval::Undefined => offending.push(format!("({a:?}, {b:?})")),
                },
            }
        }
    }
    if offending.is_empty() {
        Ok(out)
    } else {
        Err(UndefinedPairs { pairs: offending })
    }
}
