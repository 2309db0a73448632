//! Sparse multivariate polynomials.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{AlgebraError, Result};
use crate::field::Field;
use crate::monomial::Monomial;
use crate::order::MonomialOrder;
use crate::ring::PolyRing;

pub type Term<F> = (Monomial, F);

/// A polynomial in canonical form: terms strictly descending in the ring's
/// order, no zero coefficients. The zero polynomial has no terms.
///
/// Arithmetic operators panic on ring mismatch; the `checked_*` methods
/// report it as an error instead.
#[derive(Clone)]
pub struct Polynomial<F: Field> {
    ring: Arc<PolyRing>,
    terms: Vec<Term<F>>,
}

impl<F: Field> PartialEq for Polynomial<F> {
    fn eq(&self, other: &Self) -> bool {
        self.ring.same_variables(&other.ring) && self.terms == other.terms
    }
}

impl<F: Field> Eq for Polynomial<F> {}

/// Merge two descending term lists, computing `a + scale * b`.
pub(crate) fn merge_terms<F: Field>(
    order: &MonomialOrder,
    a: &[Term<F>],
    b: &[Term<F>],
    scale: Option<&F>,
) -> Vec<Term<F>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let scaled = |c: &F| match scale {
        Some(s) => s.mul_ref(c),
        None => c.clone(),
    };
    while i < a.len() && j < b.len() {
        match order.cmp(&a[i].0, &b[j].0) {
            Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Less => {
                let c = scaled(&b[j].1);
                if !c.is_zero() {
                    out.push((b[j].0.clone(), c));
                }
                j += 1;
            }
            Ordering::Equal => {
                let c = a[i].1.add_ref(&scaled(&b[j].1));
                if !c.is_zero() {
                    out.push((a[i].0.clone(), c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    for t in &b[j..] {
        let c = scaled(&t.1);
        if !c.is_zero() {
            out.push((t.0.clone(), c));
        }
    }
    out
}

/// Sort descending and merge equal monomials.
pub(crate) fn normalize_terms<F: Field>(order: &MonomialOrder, mut terms: Vec<Term<F>>) -> Vec<Term<F>> {
    terms.sort_by(|a, b| order.cmp(&b.0, &a.0));
    let mut out: Vec<Term<F>> = Vec::with_capacity(terms.len());
    for (m, c) in terms {
        match out.last_mut() {
            Some(last) if last.0 == m => {
                last.1 = last.1.add_ref(&c);
            }
            _ => out.push((m, c)),
        }
    }
    out.retain(|t| !t.1.is_zero());
    out
}

impl<F: Field> Polynomial<F> {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: Vec::new(),
        }
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, F::one())
    }

    pub fn constant(ring: &Arc<PolyRing>, c: F) -> Self {
        Self::monomial(ring, Monomial::one(ring.nvars()), c)
    }

    pub fn from_int(ring: &Arc<PolyRing>, c: i64) -> Self {
        Self::constant(ring, F::from_i64(c))
    }

    pub fn var(ring: &Arc<PolyRing>, i: usize) -> Self {
        Self::monomial(ring, Monomial::var(ring.nvars(), i), F::one())
    }

    /// Variable by name; panics if the ring lacks it.
    pub fn var_named(ring: &Arc<PolyRing>, name: &str) -> Self {
        let i = ring
            .var_index(name)
            .unwrap_or_else(|| panic!("no variable named {name}"));
        Self::var(ring, i)
    }

    pub fn monomial(ring: &Arc<PolyRing>, m: Monomial, c: F) -> Self {
        assert_eq!(m.nvars(), ring.nvars());
        let terms = if c.is_zero() { vec![] } else { vec![(m, c)] };
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    /// Build from an arbitrary term list (any order, duplicates allowed).
    pub fn from_terms(ring: &Arc<PolyRing>, terms: Vec<Term<F>>) -> Self {
        debug_assert!(terms.iter().all(|t| t.0.nvars() == ring.nvars()));
        Polynomial {
            ring: ring.clone(),
            terms: normalize_terms(ring.order(), terms),
        }
    }

    /// Build from terms already in canonical order.
    pub(crate) fn from_sorted(ring: &Arc<PolyRing>, terms: Vec<Term<F>>) -> Self {
        debug_assert!(terms
            .windows(2)
            .all(|w| ring.order().cmp(&w[0].0, &w[1].0) == Ordering::Greater));
        debug_assert!(terms.iter().all(|t| !t.1.is_zero()));
        Polynomial {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn terms(&self) -> &[Term<F>] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.iter().all(|t| t.0.is_one())
    }

    pub fn nterms(&self) -> usize {
        self.terms.len()
    }

    pub fn leading_term(&self) -> Option<&Term<F>> {
        self.terms.first()
    }

    pub fn leading_monomial(&self) -> Option<&Monomial> {
        self.terms.first().map(|t| &t.0)
    }

    pub fn leading_coefficient(&self) -> Option<&F> {
        self.terms.first().map(|t| &t.1)
    }

    /// Total degree; `None` for zero.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0.degree()).max()
    }

    /// Lowest total degree among the terms; `None` for zero.
    pub fn low_degree(&self) -> Option<u32> {
        self.terms.iter().map(|t| t.0.degree()).min()
    }

    /// Coefficient of `m` (zero if absent).
    pub fn coefficient(&self, m: &Monomial) -> F {
        self.terms
            .iter()
            .find(|t| &t.0 == m)
            .map(|t| t.1.clone())
            .unwrap_or_else(F::zero)
    }

    fn check_ring(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ring, &other.ring) || *self.ring == *other.ring {
            Ok(())
        } else {
            Err(AlgebraError::RingMismatch)
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        Ok(Polynomial {
            ring: self.ring.clone(),
            terms: merge_terms(self.ring.order(), &self.terms, &other.terms, None),
        })
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let m1 = -F::one();
        Ok(Polynomial {
            ring: self.ring.clone(),
            terms: merge_terms(self.ring.order(), &self.terms, &other.terms, Some(&m1)),
        })
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_ring(other)?;
        let mut acc: Vec<Term<F>> = Vec::new();
        // multiply the shorter operand's terms into the longer one so each
        // partial product is already sorted
        let (short, long) = if self.terms.len() <= other.terms.len() {
            (&self.terms, &other.terms)
        } else {
            (&other.terms, &self.terms)
        };
        for (m, c) in short.iter() {
            let mut part = Vec::with_capacity(long.len());
            for (n, d) in long.iter() {
                part.push((m.checked_mul(n)?, c.mul_ref(d)));
            }
            acc = merge_terms(self.ring.order(), &acc, &part, None);
        }
        Ok(Polynomial {
            ring: self.ring.clone(),
            terms: acc,
        })
    }

    pub fn checked_pow(&self, e: u32) -> Result<Self> {
        let mut acc = Polynomial::one(&self.ring);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.checked_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(acc)
    }

    pub fn pow(&self, e: u32) -> Self {
        self.checked_pow(e).expect("exponent overflow")
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Polynomial::zero(&self.ring);
        }
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, d)| (m.clone(), c.mul_ref(d)))
                .collect(),
        }
    }

    /// Multiply by a single term `c * m`.
    pub fn mul_term(&self, m: &Monomial, c: &F) -> Result<Self> {
        if c.is_zero() {
            return Ok(Polynomial::zero(&self.ring));
        }
        let mut terms = Vec::with_capacity(self.terms.len());
        for (n, d) in &self.terms {
            terms.push((n.checked_mul(m)?, c.mul_ref(d)));
        }
        Ok(Polynomial {
            ring: self.ring.clone(),
            terms,
        })
    }

    /// Leading coefficient normalized to one (zero stays zero).
    pub fn monic(&self) -> Self {
        match self.leading_coefficient() {
            None => self.clone(),
            Some(c) if c.is_one() => self.clone(),
            Some(c) => self.scale(&c.inv()),
        }
    }

    /// The same polynomial viewed in a ring with the same variables but a
    /// possibly different order.
    pub fn with_ring(&self, ring: &Arc<PolyRing>) -> Self {
        assert_eq!(ring.nvars(), self.ring.nvars());
        if ring.order() == self.ring.order() {
            return Polynomial {
                ring: ring.clone(),
                terms: self.terms.clone(),
            };
        }
        Polynomial::from_terms(ring, self.terms.clone())
    }

    /// Embed into `target`, sending variable `i` to variable `map[i]`.
    pub fn embed(&self, target: &Arc<PolyRing>, map: &[usize]) -> Self {
        assert_eq!(map.len(), self.ring.nvars());
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| (m.remap(target.nvars(), map), c.clone()))
            .collect();
        Polynomial::from_terms(target, terms)
    }

    /// Embed into a ring whose first variables are exactly this ring's.
    pub fn embed_prefix(&self, target: &Arc<PolyRing>) -> Self {
        let map: Vec<usize> = (0..self.ring.nvars()).collect();
        self.embed(target, &map)
    }

    /// Substitute `images[i]` for variable `i`; all images share one ring.
    pub fn substitute(&self, images: &[Polynomial<F>]) -> Result<Self> {
        assert_eq!(images.len(), self.ring.nvars());
        let target = images
            .first()
            .map(|p| p.ring.clone())
            .expect("at least one variable");
        let mut acc = Polynomial::zero(&target);
        // cache powers per variable
        let mut powers: Vec<Vec<Polynomial<F>>> = vec![vec![Polynomial::one(&target)]; images.len()];
        for (m, c) in &self.terms {
            let mut t = Polynomial::constant(&target, c.clone());
            for (i, e) in m.exponents().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().checked_mul(&images[i])?;
                    powers[i].push(next);
                }
                t = t.checked_mul(&powers[i][e as usize])?;
            }
            acc = acc.checked_add(&t)?;
        }
        Ok(acc)
    }

    /// Formal partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> Self {
        let mut terms = Vec::new();
        for (m, c) in &self.terms {
            let e = m.exponent(i);
            if e == 0 {
                continue;
            }
            let mut ex: Vec<u32> = m.exponents().collect();
            ex[i] -= 1;
            let coef = c.mul_ref(&F::from_i64(e as i64));
            if !coef.is_zero() {
                terms.push((Monomial::from_exponents(&ex).unwrap(), coef));
            }
        }
        Polynomial::from_terms(&self.ring, terms)
    }

    /// Evaluate at a point of `k^n`.
    pub fn evaluate(&self, point: &[F]) -> F {
        assert_eq!(point.len(), self.ring.nvars());
        let mut acc = F::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, e) in m.exponents().enumerate() {
                for _ in 0..e {
                    t = t.mul_ref(&point[i]);
                }
            }
            acc = acc.add_ref(&t);
        }
        acc
    }

    /// Split into components by an integer grading of the variables,
    /// ascending by degree.
    pub fn graded_components(&self, weights: &[i64]) -> Vec<(i64, Polynomial<F>)> {
        let mut parts: std::collections::BTreeMap<i64, Vec<Term<F>>> = Default::default();
        for (m, c) in &self.terms {
            let d: i64 = m.exponents().zip(weights).map(|(e, w)| e as i64 * w).sum();
            parts.entry(d).or_default().push((m.clone(), c.clone()));
        }
        parts
            .into_iter()
            .map(|(d, ts)| (d, Polynomial::from_sorted(&self.ring, ts)))
            .collect()
    }

    pub fn is_homogeneous(&self, weights: &[i64]) -> bool {
        self.graded_components(weights).len() <= 1
    }

    /// Exact quotient `self / divisor`; fails unless the division leaves no
    /// remainder.
    pub fn exact_div(&self, divisor: &Self) -> Result<Self> {
        self.check_ring(divisor)?;
        let (lm, lc) = divisor.leading_term().ok_or(AlgebraError::InexactDivision)?;
        let lc_inv = lc.inv();
        let mut rem = self.terms.clone();
        let mut quot: Vec<Term<F>> = Vec::new();
        let order = self.ring.order();
        while let Some((m, c)) = rem.first().cloned() {
            let q = lm.quotient_of(&m).ok_or(AlgebraError::InexactDivision)?;
            let qc = c.mul_ref(&lc_inv);
            let sub: Vec<Term<F>> = divisor
                .terms
                .iter()
                .map(|(n, d)| (n.mul(&q), d.mul_ref(&qc)))
                .collect();
            let m1 = -F::one();
            rem = merge_terms(order, &rem, &sub, Some(&m1));
            quot.push((q, qc));
        }
        Ok(Polynomial::from_terms(&self.ring, quot))
    }

    /// Variables that occur.
    pub fn support(&self) -> Vec<usize> {
        let mut used = vec![false; self.ring.nvars()];
        for (m, _) in &self.terms {
            for (i, e) in m.exponents().enumerate() {
                if e > 0 {
                    used[i] = true;
                }
            }
        }
        (0..used.len()).filter(|&i| used[i]).collect()
    }
}

impl<F: Field> fmt::Display for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parse::format_polynomial(self))
    }
}

impl<F: Field> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({})", self)
    }
}

impl<F: Field> Add for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn add(self, rhs: Self) -> Polynomial<F> {
        self.checked_add(rhs).expect("ring mismatch")
    }
}

impl<F: Field> Sub for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn sub(self, rhs: Self) -> Polynomial<F> {
        self.checked_sub(rhs).expect("ring mismatch")
    }
}

impl<F: Field> Mul for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn mul(self, rhs: Self) -> Polynomial<F> {
        self.checked_mul(rhs).expect("ring mismatch or exponent overflow")
    }
}

impl<F: Field> Neg for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        self.scale(&-F::one())
    }
}

impl<F: Field> Add for Polynomial<F> {
    type Output = Polynomial<F>;
    fn add(self, rhs: Self) -> Polynomial<F> {
        &self + &rhs
    }
}

impl<F: Field> Sub for Polynomial<F> {
    type Output = Polynomial<F>;
    fn sub(self, rhs: Self) -> Polynomial<F> {
        &self - &rhs
    }
}

impl<F: Field> Mul for Polynomial<F> {
    type Output = Polynomial<F>;
    fn mul(self, rhs: Self) -> Polynomial<F> {
        &self * &rhs
    }
}

impl<F: Field> Neg for Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        -&self
    }
}
