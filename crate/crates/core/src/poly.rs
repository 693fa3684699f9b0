//! Sparse multivariate polynomials over arbitrary-precision rationals.
//!
//! Terms are kept in a `BTreeMap` keyed by exponent vectors under the
//! graded-lexicographic order, so two equal polynomials always have
//! identical stored forms.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrd};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

/// Exponent vector with graded-lexicographic order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn constant(arity: usize) -> Self {
        Monomial(vec![0; arity])
    }

    pub fn var(arity: usize, idx: usize) -> Self {
        let mut e = vec![0; arity];
        e[idx] = 1;
        Monomial(e)
    }

    pub fn total_degree(&self) -> u64 {
        self.0.iter().map(|&e| e as u64).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

static TERM_BUDGET: AtomicUsize = AtomicUsize::new(2_000_000);

/// Set the global term budget guarding polynomial products. 0 disables it.
pub fn set_term_budget(n: usize) {
    TERM_BUDGET.store(n, AtomicOrd::Relaxed);
}

pub fn term_budget() -> usize {
    TERM_BUDGET.load(AtomicOrd::Relaxed)
}

fn check_budget(estimate: usize) {
    let budget = term_budget();
    if budget != 0 && estimate > budget {
        panic!(
            "symbolic expansion exceeds the term budget ({estimate} > {budget}); \
             rerun the identity in sampled mode or raise the budget"
        );
    }
}

/// Sparse multivariate polynomial; no zero coefficients are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    arity: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl Poly {
    pub fn zero(arity: usize) -> Self {
        Poly {
            arity,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(arity: usize, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Monomial::constant(arity), c);
        }
        Poly { arity, terms }
    }

    pub fn one(arity: usize) -> Self {
        Self::constant(arity, Rat::one())
    }

    pub fn var(arity: usize, idx: usize) -> Self {
        assert!(idx < arity, "variable index out of range");
        let mut terms = BTreeMap::new();
        terms.insert(Monomial::var(arity, idx), Rat::one());
        Poly { arity, terms }
    }

    pub fn monomial(arity: usize, exps: Vec<u32>, coef: Rat) -> Self {
        assert_eq!(exps.len(), arity);
        let mut terms = BTreeMap::new();
        if !coef.is_zero() {
            terms.insert(Monomial(exps), coef);
        }
        Poly { arity, terms }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Monomial::constant(self.arity))
                .is_some_and(|c| c.is_one())
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    /// Leading term in graded-lex order.
    pub fn leading(&self) -> Option<(&Monomial, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn constant_term(&self) -> Rat {
        self.terms
            .get(&Monomial::constant(self.arity))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    /// True when every stored coefficient is strictly positive.
    pub fn all_coeffs_positive(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            match terms.get_mut(m) {
                Some(acc) => {
                    *acc += c;
                    if acc.is_zero() {
                        terms.remove(m);
                    }
                }
                None => {
                    terms.insert(m.clone(), c.clone());
                }
            }
        }
        Poly {
            arity: self.arity,
            terms,
        }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.arity, other.arity, "arity mismatch");
        if self.is_zero() || other.is_zero() {
            return Poly::zero(self.arity);
        }
        check_budget(self.terms.len().saturating_mul(other.terms.len()));
        let mut terms: BTreeMap<Monomial, Rat> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m = m1.mul(m2);
                let c = c1 * c2;
                match terms.get_mut(&m) {
                    Some(acc) => {
                        *acc += c;
                        if acc.is_zero() {
                            terms.remove(&m);
                        }
                    }
                    None => {
                        terms.insert(m, c);
                    }
                }
            }
        }
        Poly {
            arity: self.arity,
            terms,
        }
    }

    pub fn scale(&self, c: &Rat) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.arity);
        }
        Poly {
            arity: self.arity,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, mut n: u32) -> Poly {
        let mut result = Poly::one(self.arity);
        let mut base = self.clone();
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, point: &[Rat]) -> Rat {
        assert_eq!(point.len(), self.arity, "point arity mismatch");
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t *= &point[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Smallest exponent of variable `idx` over all terms (0 for the zero poly).
    pub fn min_exponent(&self, idx: usize) -> u32 {
        self.terms.keys().map(|m| m.0[idx]).min().unwrap_or(0)
    }

    /// Divide every term by `var(idx)^e`; caller guarantees divisibility.
    pub fn shift_down(&self, idx: usize, e: u32) -> Poly {
        if e == 0 {
            return self.clone();
        }
        Poly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut exps = m.0.clone();
                    exps[idx] -= e;
                    (Monomial(exps), c.clone())
                })
                .collect(),
        }
    }

    /// Rational `g` such that `self / g` has integer coefficients with gcd 1.
    pub fn content(&self) -> Rat {
        if self.is_zero() {
            return Rat::one();
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            num_gcd = num_gcd.gcd(&c.numer().abs());
            den_lcm = den_lcm.lcm(c.denom());
        }
        Rat::new(num_gcd, den_lcm)
    }

    pub fn map_coeffs(&self, f: impl Fn(&Rat) -> Rat) -> Poly {
        Poly {
            arity: self.arity,
            terms: self
                .terms
                .iter()
                .filter_map(|(m, c)| {
                    let c = f(c);
                    (!c.is_zero()).then_some((m.clone(), c))
                })
                .collect(),
        }
    }

    /// Reinterpret over a larger variable set: old variable `i` becomes
    /// variable `map[i]` of an `arity`-variable polynomial.
    pub fn remap(&self, arity: usize, map: &[usize]) -> Poly {
        assert_eq!(map.len(), self.arity);
        Poly {
            arity,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| {
                    let mut exps = vec![0u32; arity];
                    for (i, &e) in m.0.iter().enumerate() {
                        exps[map[i]] += e;
                    }
                    (Monomial(exps), c.clone())
                })
                .collect(),
        }
    }
}
