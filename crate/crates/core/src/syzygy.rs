//! Submodules of free modules `(R/a)^m`, syzygies and lifting.
//!
//! Module bases use the position-over-term order of the ring: position 0
//! is the largest. An element of `(R/a)^m` is represented by a preimage in
//! `R^m`; the submodule `a·R^m` is added before every computation.

use std::fmt;
use std::sync::{Arc, RwLock};

use crate::context::Ctx;
use crate::error::{AlgebraError, Result};
use crate::field::Field;
use crate::groebner::engine::{Buchberger, Reducer, Vector};
use crate::groebner::Ideal;
use crate::poly::Polynomial;
use crate::ring::{PolyRing, RingSpec};

/// A vector of polynomials over one ring.
#[derive(Clone, PartialEq, Eq)]
pub struct ModuleVector<F: Field> {
    coords: Vec<Polynomial<F>>,
}

impl<F: Field> fmt::Debug for ModuleVector<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.coords.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", c.join(", "))
    }
}

impl<F: Field> ModuleVector<F> {
    pub fn new(coords: Vec<Polynomial<F>>) -> Result<Self> {
        let Some(first) = coords.first() else {
            return Err(AlgebraError::Precondition("vectors need at least one coordinate".into()));
        };
        let ring = first.ring().clone();
        if coords.iter().any(|c| !c.ring().same_variables(&ring)) {
            return Err(AlgebraError::RingMismatch);
        }
        Ok(ModuleVector {
            coords: coords.into_iter().map(|c| c.with_ring(&ring)).collect(),
        })
    }

    pub fn zero(ring: &Arc<PolyRing>, rank: usize) -> Self {
        ModuleVector {
            coords: vec![Polynomial::zero(ring); rank],
        }
    }

    /// `c·e_j`.
    pub fn unit(ring: &Arc<PolyRing>, rank: usize, j: usize, c: Polynomial<F>) -> Self {
        let mut v = Self::zero(ring, rank);
        v.coords[j] = c.with_ring(ring);
        v
    }

    pub fn coords(&self) -> &[Polynomial<F>] {
        &self.coords
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// `Σ self_i · f_i`.
    pub fn dot(&self, f: &[Polynomial<F>]) -> Result<Polynomial<F>> {
        if f.len() != self.rank() {
            return Err(AlgebraError::RankMismatch {
                left: self.rank(),
                right: f.len(),
            });
        }
        let ring = self.coords[0].ring();
        let mut acc = Polynomial::zero(ring);
        for (a, b) in self.coords.iter().zip(f) {
            acc = acc.checked_add(&a.checked_mul(&b.with_ring(ring))?)?;
        }
        Ok(acc)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        if self.rank() != other.rank() {
            return Err(AlgebraError::RankMismatch {
                left: self.rank(),
                right: other.rank(),
            });
        }
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.checked_sub(b))
            .collect::<Result<Vec<_>>>()?;
        Ok(ModuleVector { coords })
    }

    pub(crate) fn to_vector(&self, ring: &Arc<PolyRing>, offset: u32) -> Vector<F> {
        let mut out = Vec::new();
        for (j, c) in self.coords.iter().enumerate() {
            for (m, a) in c.with_ring(ring).terms() {
                out.push((offset + j as u32, m.clone(), a.clone()));
            }
        }
        out
    }

    /// Read positions `offset..offset+rank` of an engine vector.
    pub(crate) fn from_vector(ring: &Arc<PolyRing>, v: &Vector<F>, offset: u32, rank: usize) -> Self {
        let mut parts: Vec<Vec<(crate::monomial::Monomial, F)>> = vec![Vec::new(); rank];
        for (p, m, c) in v {
            if *p >= offset && ((*p - offset) as usize) < rank {
                parts[(*p - offset) as usize].push((m.clone(), c.clone()));
            }
        }
        ModuleVector {
            coords: parts
                .into_iter()
                .map(|t| Polynomial::from_sorted(ring, t))
                .collect(),
        }
    }
}

fn module_basis<F: Field>(
    ring: &Arc<PolyRing>,
    rank: usize,
    input: Vec<Vector<F>>,
    ctx: &Ctx,
) -> Result<Vec<Vector<F>>> {
    Buchberger::new(ring.order(), ctx, ring.degree_cap(), rank).run(input)
}

/// `a·e_j` for every relation `a` of the quotient and every position.
fn relation_vectors<F: Field>(ring: &RingSpec<F>, rank: usize, offset: u32) -> Vec<Vector<F>> {
    let mut out = Vec::new();
    for j in 0..rank {
        for r in ring.relations() {
            out.push(
                ModuleVector::unit(ring.base(), rank, j, r.clone()).to_vector(ring.base(), offset),
            );
        }
    }
    out
}

/// A submodule of `(R/a)^rank`.
#[derive(Clone)]
pub struct Submodule<F: Field> {
    ring: RingSpec<F>,
    rank: usize,
    gens: Vec<ModuleVector<F>>,
    basis: Arc<RwLock<Option<Arc<Vec<Vector<F>>>>>>,
}

impl<F: Field> fmt::Debug for Submodule<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.gens.iter()).finish()
    }
}

impl<F: Field> Submodule<F> {
    pub fn new(ring: &RingSpec<F>, rank: usize, gens: Vec<ModuleVector<F>>) -> Result<Self> {
        for g in &gens {
            if g.rank() != rank {
                return Err(AlgebraError::RankMismatch {
                    left: rank,
                    right: g.rank(),
                });
            }
            if !g.coords[0].ring().same_variables(ring.base()) {
                return Err(AlgebraError::RingMismatch);
            }
        }
        Ok(Submodule {
            ring: ring.clone(),
            rank,
            gens: gens.into_iter().filter(|g| !g.is_zero()).collect(),
            basis: Default::default(),
        })
    }

    pub fn free(ring: &RingSpec<F>, rank: usize) -> Self {
        let one = Polynomial::one(ring.base());
        let gens = (0..rank)
            .map(|j| ModuleVector::unit(ring.base(), rank, j, one.clone()))
            .collect();
        Submodule {
            ring: ring.clone(),
            rank,
            gens,
            basis: Default::default(),
        }
    }

    pub fn ring(&self) -> &RingSpec<F> {
        &self.ring
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gens(&self) -> &[ModuleVector<F>] {
        &self.gens
    }

    fn check_rank(&self, other: &Submodule<F>) -> Result<()> {
        if !self.ring.compatible(&other.ring) {
            return Err(AlgebraError::RingMismatch);
        }
        if self.rank != other.rank {
            return Err(AlgebraError::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        Ok(())
    }

    fn basis(&self, ctx: &Ctx) -> Result<Arc<Vec<Vector<F>>>> {
        if let Some(b) = self.basis.read().expect("cache lock").as_ref() {
            return Ok(b.clone());
        }
        let base = self.ring.base();
        let mut input: Vec<Vector<F>> = self.gens.iter().map(|g| g.to_vector(base, 0)).collect();
        input.extend(relation_vectors(&self.ring, self.rank, 0));
        let b = Arc::new(module_basis(base, self.rank, input, ctx)?);
        let mut w = self.basis.write().expect("cache lock");
        Ok(w.get_or_insert(b).clone())
    }

    /// Reduced module basis, as vectors, in position-over-term order.
    pub fn groebner_basis(&self, ctx: &Ctx) -> Result<Vec<ModuleVector<F>>> {
        let base = self.ring.base();
        Ok(self
            .basis(ctx)?
            .iter()
            .map(|v| ModuleVector::from_vector(base, v, 0, self.rank))
            .collect())
    }

    pub fn contains(&self, v: &ModuleVector<F>, ctx: &Ctx) -> Result<bool> {
        if v.rank() != self.rank {
            return Err(AlgebraError::RankMismatch {
                left: self.rank,
                right: v.rank(),
            });
        }
        if !v.coords[0].ring().same_variables(self.ring.base()) {
            return Err(AlgebraError::RingMismatch);
        }
        let b = self.basis(ctx)?;
        let red = Reducer::new(self.ring.base().order(), &b);
        red.reduces_to_zero(v.to_vector(self.ring.base(), 0), ctx)
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &Submodule<F>, ctx: &Ctx) -> Result<bool> {
        self.check_rank(other)?;
        for g in &self.gens {
            if !other.contains(g, ctx)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Submodule<F>) -> Result<Submodule<F>> {
        self.check_rank(other)?;
        let mut g = self.gens.clone();
        g.extend(other.gens.iter().cloned());
        Submodule::new(&self.ring, self.rank, g)
    }

    /// `self ∩ other`, eliminating the first copy of `R^m` from the
    /// module generated by `(a, a)` and `(b, 0)`.
    pub fn intersect(&self, other: &Submodule<F>, ctx: &Ctx) -> Result<Submodule<F>> {
        self.check_rank(other)?;
        let base = self.ring.base();
        let m = self.rank;
        let mut input: Vec<Vector<F>> = Vec::new();
        for a in &self.gens {
            let mut v = a.to_vector(base, 0);
            v.extend(a.to_vector(base, m as u32));
            input.push(v);
        }
        for b in &other.gens {
            input.push(b.to_vector(base, 0));
        }
        input.extend(relation_vectors(&self.ring, m, 0));
        let gb = module_basis(base, 2 * m, input, ctx)?;
        let gens = gb
            .iter()
            .filter(|v| v[0].0 as usize >= m)
            .map(|v| ModuleVector::from_vector(base, v, m as u32, m))
            .collect();
        Submodule::new(&self.ring, m, gens)
    }
}

/// Relations `Σ s_i f_i = 0` in `R/a` among `f`.
pub fn syzygy_module<F: Field>(
    ring: &RingSpec<F>,
    f: &[Polynomial<F>],
    ctx: &Ctx,
) -> Result<Submodule<F>> {
    let m = f.len();
    if m == 0 {
        return Err(AlgebraError::Precondition("syzygies of an empty list".into()));
    }
    let gb = lifting_basis(ring, f, ctx)?;
    let base = ring.base();
    let gens = gb
        .iter()
        .filter(|v| v[0].0 >= 1)
        .map(|v| ModuleVector::from_vector(base, v, 1, m))
        .collect();
    Submodule::new(ring, m, gens)
}

/// Basis of the module generated by the rows `(f_i | e_i)` and `(a | 0)`
/// in `R ⊕ R^m`.
fn lifting_basis<F: Field>(
    ring: &RingSpec<F>,
    f: &[Polynomial<F>],
    ctx: &Ctx,
) -> Result<Vec<Vector<F>>> {
    let base = ring.base();
    let m = f.len();
    let one = Polynomial::one(base);
    let mut input: Vec<Vector<F>> = Vec::with_capacity(m + ring.relations().len());
    for (i, fi) in f.iter().enumerate() {
        if !fi.ring().same_variables(base) {
            return Err(AlgebraError::RingMismatch);
        }
        let mut v = ModuleVector::unit(base, 1, 0, fi.clone()).to_vector(base, 0);
        v.extend(ModuleVector::unit(base, m, i, one.clone()).to_vector(base, 1));
        input.push(v);
    }
    input.extend(relation_vectors(ring, 1, 0));
    module_basis(base, m + 1, input, ctx)
}

/// Express each target as a combination of `f` modulo the quotient, or
/// `None` for targets outside the ideal `(f)`.
pub struct Lifter<F: Field> {
    base: Arc<PolyRing>,
    rank: usize,
    basis: Vec<Vector<F>>,
}

impl<F: Field> Lifter<F> {
    pub fn new(ring: &RingSpec<F>, f: &[Polynomial<F>], ctx: &Ctx) -> Result<Self> {
        Ok(Lifter {
            base: ring.base().clone(),
            rank: f.len(),
            basis: lifting_basis(ring, f, ctx)?,
        })
    }

    pub fn lift(&self, g: &Polynomial<F>, ctx: &Ctx) -> Result<Option<Vec<Polynomial<F>>>> {
        let red = Reducer::new(self.base.order(), &self.basis);
        let v = ModuleVector::unit(&self.base, 1, 0, g.clone()).to_vector(&self.base, 0);
        let r = red.reduce(v, ctx)?;
        if r.first().is_some_and(|t| t.0 == 0) {
            return Ok(None);
        }
        let w = ModuleVector::from_vector(&self.base, &r, 1, self.rank);
        Ok(Some(w.coords.into_iter().map(|c| -c).collect()))
    }
}

/// Coefficients `c` with `g = Σ c_i f_i` (modulo the quotient), if any.
pub fn lift<F: Field>(
    ring: &RingSpec<F>,
    g: &Polynomial<F>,
    f: &[Polynomial<F>],
    ctx: &Ctx,
) -> Result<Option<Vec<Polynomial<F>>>> {
    Lifter::new(ring, f, ctx)?.lift(g, ctx)
}

/// Membership of `v` in `M`.
pub fn module_membership<F: Field>(
    v: &ModuleVector<F>,
    m: &Submodule<F>,
    ctx: &Ctx,
) -> Result<bool> {
    m.contains(v, ctx)
}

/// `I^n · R^m`.
pub fn power_scale_submodule<F: Field>(
    i: &Ideal<F>,
    n: u32,
    rank: usize,
    ctx: &Ctx,
) -> Result<Submodule<F>> {
    let p = i.power(n, ctx)?;
    let base = i.base();
    let mut gens = Vec::with_capacity(p.ngens() * rank);
    for j in 0..rank {
        for g in p.gens() {
            gens.push(ModuleVector::unit(base, rank, j, g.clone()));
        }
    }
    Submodule::new(i.ring(), rank, gens)
}

pub fn submodule_intersect<F: Field>(
    a: &Submodule<F>,
    b: &Submodule<F>,
    ctx: &Ctx,
) -> Result<Submodule<F>> {
    a.intersect(b, ctx)
}

/// `A ⊆ B + C`.
pub fn inclusion_mod<F: Field>(
    a: &Submodule<F>,
    b: &Submodule<F>,
    c: &Submodule<F>,
    ctx: &Ctx,
) -> Result<bool> {
    a.is_subset(&b.sum(c)?, ctx)
}
