//! Ideals and Gröbner-basis arithmetic.

pub(crate) mod engine;

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::{Arc, RwLock};

use sha2::{Digest, Sha256};

use crate::context::Ctx;
use crate::error::{AlgebraError, Result};
use crate::field::Field;
use crate::monomial::Monomial;
use crate::order::MonomialOrder;
use crate::parse::parse_polynomial;
use crate::poly::Polynomial;
use crate::ring::{PolyRing, RingSpec};

use engine::{Buchberger, Reducer, Vector};

type BasisCache<F> = Arc<RwLock<HashMap<MonomialOrder, Arc<Vec<Polynomial<F>>>>>>;

pub(crate) fn to_vector<F: Field>(p: &Polynomial<F>, pos: u32) -> Vector<F> {
    p.terms()
        .iter()
        .map(|(m, c)| (pos, m.clone(), c.clone()))
        .collect()
}

pub(crate) fn from_vector<F: Field>(ring: &Arc<PolyRing>, v: Vector<F>) -> Polynomial<F> {
    Polynomial::from_sorted(ring, v.into_iter().map(|(_, m, c)| (m, c)).collect())
}

/// Reduced Gröbner basis of `gens` in `ring` (whose order is used).
pub(crate) fn reduced_basis<F: Field>(
    ring: &Arc<PolyRing>,
    gens: &[Polynomial<F>],
    ctx: &Ctx,
) -> Result<Vec<Polynomial<F>>> {
    let input: Vec<Vector<F>> = gens.iter().map(|g| to_vector(&g.with_ring(ring), 0)).collect();
    let out = Buchberger::new(ring.order(), ctx, ring.degree_cap(), 1).run(input)?;
    Ok(out.into_iter().map(|v| from_vector(ring, v)).collect())
}

/// Normal form of `f` modulo a reduced basis living in `f`'s ring and order.
pub(crate) fn reduce_by<F: Field>(
    f: &Polynomial<F>,
    basis: &[Polynomial<F>],
    ctx: &Ctx,
) -> Result<Polynomial<F>> {
    let ring = basis.first().map(|b| b.ring().clone()).unwrap_or_else(|| f.ring().clone());
    let vs: Vec<Vector<F>> = basis.iter().map(|b| to_vector(b, 0)).collect();
    let red = Reducer::new(ring.order(), &vs);
    let v = red.reduce(to_vector(&f.with_ring(&ring), 0), ctx)?;
    Ok(from_vector(&ring, v))
}

/// Project a polynomial free of the dropped variables onto the variables
/// `keep`.
pub(crate) fn project<F: Field>(
    p: &Polynomial<F>,
    target: &Arc<PolyRing>,
    keep: &[usize],
) -> Polynomial<F> {
    let terms = p
        .terms()
        .iter()
        .map(|(m, c)| {
            let ex: Vec<u32> = keep.iter().map(|&i| m.exponent(i)).collect();
            (Monomial::from_exponents(&ex).expect("exponents fit"), c.clone())
        })
        .collect();
    Polynomial::from_terms(target, terms)
}

/// Eliminate the variables `drop` from the ideal generated by `gens`.
/// Returns the ring on the remaining variables (degrevlex) and the reduced
/// basis of the elimination ideal in that ring.
pub(crate) fn eliminate_gens<F: Field>(
    ring: &Arc<PolyRing>,
    gens: &[Polynomial<F>],
    drop: &[usize],
    ctx: &Ctx,
) -> Result<(Arc<PolyRing>, Vec<usize>, Vec<Polynomial<F>>)> {
    let keep: Vec<usize> = (0..ring.nvars()).filter(|i| !drop.contains(i)).collect();
    if keep.is_empty() {
        return Err(AlgebraError::Precondition("cannot eliminate every variable".into()));
    }
    let sub = ring
        .with_order(MonomialOrder::DegRevLex)?
        .subring(&keep)?;
    if drop.is_empty() {
        let dr = ring.with_order(MonomialOrder::DegRevLex)?;
        let gb = reduced_basis(&dr, gens, ctx)?;
        return Ok((sub.clone(), keep, gb.iter().map(|g| g.with_ring(&sub)).collect()));
    }
    let block = ring.with_order(MonomialOrder::Block(drop.to_vec()))?;
    let gb = reduced_basis(&block, gens, ctx)?;
    let out = gb
        .iter()
        .filter(|g| {
            g.terms()
                .iter()
                .all(|(m, _)| drop.iter().all(|&i| m.exponent(i) == 0))
        })
        .map(|g| project(g, &sub, &keep))
        .collect();
    Ok((sub, keep, out))
}

/// Products of all pairs, deduplicated up to scalars.
fn pairwise_products<F: Field>(
    a: &[Polynomial<F>],
    b: &[Polynomial<F>],
    cap: usize,
) -> Result<Vec<Polynomial<F>>> {
    let needed = a.len().saturating_mul(b.len());
    if needed > cap {
        return Err(AlgebraError::GeneratorCap { cap, needed });
    }
    let mut seen: HashSet<Vec<(Monomial, F)>> = HashSet::new();
    let mut out = Vec::new();
    for f in a {
        for g in b {
            let p = f.checked_mul(g)?;
            if p.is_zero() {
                continue;
            }
            let key = p.monic().terms().to_vec();
            if seen.insert(key) {
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// An ideal of a ring `R/a`, stored through generators of its preimage in
/// `R` (the relations of `a` are implicit).
///
/// Reduced Gröbner bases are cached per monomial order. Clones share the
/// cache.
#[derive(Clone)]
pub struct Ideal<F: Field> {
    ring: RingSpec<F>,
    gens: Vec<Polynomial<F>>,
    cache: BasisCache<F>,
}

impl<F: Field> fmt::Debug for Ideal<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g: Vec<String> = self.gens.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", g.join(", "))
    }
}

impl<F: Field> Ideal<F> {
    pub fn new(ring: &RingSpec<F>, gens: Vec<Polynomial<F>>) -> Result<Self> {
        let base = ring.base();
        let mut out = Vec::with_capacity(gens.len());
        for g in gens {
            if !g.ring().same_variables(base) {
                return Err(AlgebraError::RingMismatch);
            }
            if !g.is_zero() {
                out.push(g.with_ring(base));
            }
        }
        Ok(Ideal {
            ring: ring.clone(),
            gens: out,
            cache: Default::default(),
        })
    }

    pub fn zero(ring: &RingSpec<F>) -> Self {
        Ideal {
            ring: ring.clone(),
            gens: Vec::new(),
            cache: Default::default(),
        }
    }

    pub fn unit(ring: &RingSpec<F>) -> Self {
        Ideal {
            ring: ring.clone(),
            gens: vec![Polynomial::one(ring.base())],
            cache: Default::default(),
        }
    }

    pub fn ring(&self) -> &RingSpec<F> {
        &self.ring
    }

    pub fn base(&self) -> &Arc<PolyRing> {
        self.ring.base()
    }

    pub fn gens(&self) -> &[Polynomial<F>] {
        &self.gens
    }

    pub fn ngens(&self) -> usize {
        self.gens.len()
    }

    /// Generators together with the relations of the quotient.
    pub fn preimage_gens(&self) -> Vec<Polynomial<F>> {
        let mut all = self.gens.clone();
        all.extend(self.ring.relations().iter().cloned());
        all
    }

    fn check_same(&self, other: &Ideal<F>) -> Result<()> {
        if self.ring.compatible(&other.ring) {
            Ok(())
        } else {
            Err(AlgebraError::RingMismatch)
        }
    }

    fn check_poly(&self, f: &Polynomial<F>) -> Result<()> {
        if f.ring().same_variables(self.base()) {
            Ok(())
        } else {
            Err(AlgebraError::RingMismatch)
        }
    }

    fn store_key(&self, order: &MonomialOrder) -> String {
        let mut h = Sha256::new();
        h.update(format!("{:?}|{:?}|{}\n", self.base().vars(), order, self.base().characteristic()));
        for g in self.preimage_gens() {
            h.update(g.to_string());
            h.update("\n");
        }
        hex::encode(h.finalize())
    }

    /// Reduced Gröbner basis (of the preimage) in the ring's own order,
    /// sorted ascending by leading monomial.
    pub fn groebner_basis(&self, ctx: &Ctx) -> Result<Arc<Vec<Polynomial<F>>>> {
        let order = self.base().order().clone();
        self.groebner_basis_in(&order, ctx)
    }

    /// Reduced Gröbner basis for another monomial order. The polynomials
    /// live in a copy of the ring carrying that order.
    pub fn groebner_basis_in(
        &self,
        order: &MonomialOrder,
        ctx: &Ctx,
    ) -> Result<Arc<Vec<Polynomial<F>>>> {
        if let Some(gb) = self.cache.read().expect("cache lock").get(order) {
            return Ok(gb.clone());
        }
        let ring = if order == self.base().order() {
            self.base().clone()
        } else {
            self.base().with_order(order.clone())?
        };
        let store_key = ctx.store().map(|_| self.store_key(order));
        let mut gb = None;
        if let (Some(store), Some(key)) = (ctx.store(), store_key.as_ref()) {
            if let Some(lines) = store.load(key) {
                let parsed: Result<Vec<Polynomial<F>>> =
                    lines.iter().map(|l| parse_polynomial(l, &ring)).collect();
                gb = parsed.ok();
            }
        }
        let gb = match gb {
            Some(gb) => gb,
            None => {
                let gb = reduced_basis(&ring, &self.preimage_gens(), ctx)?;
                if let (Some(store), Some(key)) = (ctx.store(), store_key.as_ref()) {
                    let lines: Vec<String> = gb.iter().map(|p| p.to_string()).collect();
                    store.save(key, &lines);
                }
                gb
            }
        };
        let gb = Arc::new(gb);
        let mut w = self.cache.write().expect("cache lock");
        Ok(w.entry(order.clone()).or_insert(gb).clone())
    }

    /// An ideal generated by a reduced basis already known for the ring's
    /// own order.
    pub(crate) fn from_reduced_basis(ring: &RingSpec<F>, gb: Vec<Polynomial<F>>) -> Result<Self> {
        let out = Ideal::new(ring, gb.clone())?;
        out.seed_cache(ring.base().order().clone(), gb);
        Ok(out)
    }

    fn seed_cache(&self, order: MonomialOrder, gb: Vec<Polynomial<F>>) {
        self.cache
            .write()
            .expect("cache lock")
            .entry(order)
            .or_insert_with(|| Arc::new(gb));
    }

    /// Remainder on division by the reduced basis, in the ring's order.
    pub fn normal_form(&self, f: &Polynomial<F>, ctx: &Ctx) -> Result<Polynomial<F>> {
        self.check_poly(f)?;
        let gb = self.groebner_basis(ctx)?;
        let r = reduce_by(&f.with_ring(self.base()), &gb, ctx)?;
        Ok(r.with_ring(self.base()))
    }

    pub fn contains(&self, f: &Polynomial<F>, ctx: &Ctx) -> Result<bool> {
        self.check_poly(f)?;
        if f.is_zero() {
            return Ok(true);
        }
        let gb = self.groebner_basis(ctx)?;
        let vs: Vec<Vector<F>> = gb.iter().map(|b| to_vector(b, 0)).collect();
        let red = Reducer::new(self.base().order(), &vs);
        red.reduces_to_zero(to_vector(&f.with_ring(self.base()), 0), ctx)
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &Ideal<F>, ctx: &Ctx) -> Result<bool> {
        self.check_same(other)?;
        for g in &self.gens {
            if !other.contains(g, ctx)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality through reduced bases.
    pub fn is_equal(&self, other: &Ideal<F>, ctx: &Ctx) -> Result<bool> {
        self.check_same(other)?;
        let a = self.groebner_basis(ctx)?;
        let b = other.groebner_basis(ctx)?;
        Ok(a.len() == b.len() && a.iter().zip(b.iter()).all(|(x, y)| x.terms() == y.terms()))
    }

    pub fn is_unit(&self, ctx: &Ctx) -> Result<bool> {
        let gb = self.groebner_basis(ctx)?;
        Ok(gb.len() == 1 && gb[0].is_constant())
    }

    /// Zero in `R/a`, i.e. contained in the quotient ideal.
    pub fn is_zero(&self, ctx: &Ctx) -> Result<bool> {
        if self.gens.is_empty() {
            return Ok(true);
        }
        let q = Ideal::zero(&self.ring);
        self.is_subset(&q, ctx)
    }

    /// Generators of `self + other`.
    pub fn sum(&self, other: &Ideal<F>) -> Result<Ideal<F>> {
        self.check_same(other)?;
        let mut g = self.gens.clone();
        g.extend(other.gens.iter().cloned());
        Ideal::new(&self.ring, g)
    }

    pub fn add_gens(&self, extra: &[Polynomial<F>]) -> Result<Ideal<F>> {
        let mut g = self.gens.clone();
        g.extend(extra.iter().cloned());
        Ideal::new(&self.ring, g)
    }

    /// The same ideal, generated by its reduced basis.
    pub fn with_basis_gens(&self, ctx: &Ctx) -> Result<Ideal<F>> {
        let gb = self.groebner_basis(ctx)?;
        let out = Ideal::new(&self.ring, gb.to_vec())?;
        out.seed_cache(self.base().order().clone(), gb.to_vec());
        Ok(out)
    }

    /// A generating set with members that lie in the ideal of the others
    /// removed, scanning from the end. The survivors keep their order.
    pub fn prune(&self, ctx: &Ctx) -> Result<Ideal<F>> {
        let mut keep: Vec<Polynomial<F>> = self.gens.clone();
        let mut i = keep.len();
        while i > 0 {
            i -= 1;
            let mut rest = keep.clone();
            let g = rest.remove(i);
            let others = Ideal::new(&self.ring, rest.clone())?;
            if others.contains(&g, ctx)? {
                keep = rest;
            }
        }
        Ideal::new(&self.ring, keep)
    }

    /// Intersection with the ring on the variables not in `drop`. The
    /// result lives in `k[remaining]` modulo the eliminated relations.
    pub fn eliminate(&self, drop: &[usize], ctx: &Ctx) -> Result<Ideal<F>> {
        for &d in drop {
            if d >= self.base().nvars() {
                return Err(AlgebraError::Precondition(format!(
                    "variable index {d} out of range"
                )));
            }
        }
        let (sub, _, gb) = eliminate_gens(self.base(), &self.preimage_gens(), drop, ctx)?;
        let ring = if self.ring.is_quotient() {
            let (_, _, rel) = eliminate_gens(self.base(), self.ring.relations(), drop, ctx)?;
            RingSpec::quotient(sub.clone(), rel)?
        } else {
            RingSpec::polynomial(sub.clone())
        };
        let out = Ideal::new(&ring, gb.clone())?;
        out.seed_cache(MonomialOrder::DegRevLex, gb);
        Ok(out)
    }

    pub fn eliminate_named(&self, names: &[&str], ctx: &Ctx) -> Result<Ideal<F>> {
        let mut drop = Vec::new();
        for n in names {
            drop.push(self.base().var_index(n).ok_or_else(|| {
                AlgebraError::Precondition(format!("no variable named `{n}`"))
            })?);
        }
        self.eliminate(&drop, ctx)
    }

    /// `self ∩ other` via `elim_t(t·A + (1 − t)·B)`.
    pub fn intersect(&self, other: &Ideal<F>, ctx: &Ctx) -> Result<Ideal<F>> {
        self.check_same(other)?;
        // containment is cheap to detect and common in truncated checks
        if self.is_subset(other, ctx)? {
            return Ok(self.clone());
        }
        if other.is_subset(self, ctx)? {
            return Ok(other.clone());
        }
        let gens = intersect_gens(self.base(), &self.preimage_gens(), &other.preimage_gens(), ctx)?;
        let out = Ideal::new(&self.ring, gens.clone())?;
        if self.base().order() == &MonomialOrder::DegRevLex {
            out.seed_cache(MonomialOrder::DegRevLex, gens);
        }
        Ok(out)
    }

    /// `(self : f)`.
    pub fn quotient_by(&self, f: &Polynomial<F>, ctx: &Ctx) -> Result<Ideal<F>> {
        self.check_poly(f)?;
        let f = f.with_ring(self.base());
        if f.is_zero() {
            return Ok(Ideal::unit(&self.ring));
        }
        let inter = intersect_gens(self.base(), &self.preimage_gens(), &[f.clone()], ctx)?;
        let mut q = Vec::with_capacity(inter.len());
        for g in &inter {
            q.push(g.exact_div(&f)?);
        }
        Ideal::new(&self.ring, q)
    }

    /// `(self : other) = ∩ (self : b)` over the generators `b` of `other`.
    pub fn quotient(&self, other: &Ideal<F>, ctx: &Ctx) -> Result<Ideal<F>> {
        self.check_same(other)?;
        let mut acc: Option<Ideal<F>> = None;
        for b in &other.gens {
            let c = self.quotient_by(b, ctx)?;
            acc = Some(match acc {
                None => c,
                Some(a) => a.intersect(&c, ctx)?,
            });
        }
        Ok(acc.unwrap_or_else(|| Ideal::unit(&self.ring)))
    }

    /// `(self : f^∞)` by iterating colons until the chain stabilizes.
    pub fn saturate(&self, f: &Polynomial<F>, ctx: &Ctx) -> Result<Ideal<F>> {
        self.check_poly(f)?;
        if f.is_zero() {
            return Err(AlgebraError::Precondition("saturation by zero".into()));
        }
        let mut cur = self.clone();
        loop {
            let next = cur.quotient_by(f, ctx)?;
            if next.is_subset(&cur, ctx)? {
                return Ok(cur);
            }
            cur = next;
        }
    }

    /// `self^n`: all n-fold products of generators, deduplicated.
    pub fn power(&self, n: u32, ctx: &Ctx) -> Result<Ideal<F>> {
        if n == 0 {
            return Ok(Ideal::unit(&self.ring));
        }
        let mut acc = self.gens.clone();
        for _ in 1..n {
            acc = pairwise_products(&acc, &self.gens, ctx.generator_cap)?;
        }
        Ideal::new(&self.ring, acc)
    }

    /// All pairwise products of generators, deduplicated.
    pub fn product(&self, other: &Ideal<F>, ctx: &Ctx) -> Result<Ideal<F>> {
        self.check_same(other)?;
        let g = pairwise_products(&self.gens, &other.gens, ctx.generator_cap)?;
        Ideal::new(&self.ring, g)
    }

    /// Krull dimension of `R/self` and height of `self`.
    ///
    /// The dimension is the size of a largest set of variables containing
    /// the support of no leading monomial. The unit ideal reports
    /// dimension −1. In a quotient `R/a` the height is
    /// `dim R/a − dim R/self`.
    pub fn dimension_height(&self, ctx: &Ctx) -> Result<(i64, i64)> {
        let n = self.base().nvars() as i64;
        let dim = krull_dimension(&self.groebner_basis(ctx)?, self.base().nvars());
        let ambient = if self.ring.is_quotient() {
            krull_dimension(
                &Ideal::zero(&self.ring).groebner_basis(ctx)?,
                self.base().nvars(),
            )
        } else {
            n
        };
        if dim < 0 {
            return Ok((-1, ambient));
        }
        Ok((dim, ambient - dim))
    }

    /// Height only.
    pub fn height(&self, ctx: &Ctx) -> Result<i64> {
        Ok(self.dimension_height(ctx)?.1)
    }
}

fn intersect_gens<F: Field>(
    base: &Arc<PolyRing>,
    a: &[Polynomial<F>],
    b: &[Polynomial<F>],
    ctx: &Ctx,
) -> Result<Vec<Polynomial<F>>> {
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    let (ext, _) = base.extend(&["t".to_string()])?;
    let t_idx = base.nvars();
    let t = Polynomial::var(&ext, t_idx);
    let one_minus_t = Polynomial::one(&ext).checked_sub(&t)?;
    let mut gens = Vec::with_capacity(a.len() + b.len());
    for g in a {
        gens.push(g.embed_prefix(&ext).checked_mul(&t)?);
    }
    for g in b {
        gens.push(g.embed_prefix(&ext).checked_mul(&one_minus_t)?);
    }
    let (_, _, gb) = eliminate_gens(&ext, &gens, &[t_idx], ctx)?;
    Ok(gb.into_iter().map(|g| Polynomial::from_terms(base, g.terms().to_vec())).collect())
}

/// Largest independent set of variables for the leading monomials of a
/// Gröbner basis; −1 for the unit ideal.
fn krull_dimension<F: Field>(gb: &[Polynomial<F>], nvars: usize) -> i64 {
    if gb.iter().any(|g| g.is_constant()) {
        return -1;
    }
    let supports: Vec<Vec<usize>> = gb
        .iter()
        .map(|g| {
            let m = g.leading_monomial().expect("nonzero");
            (0..nvars).filter(|&i| m.exponent(i) > 0).collect()
        })
        .collect();
    // branch and bound over variables in index order
    fn search(
        k: usize,
        nvars: usize,
        chosen: &mut Vec<bool>,
        size: usize,
        best: &mut usize,
        supports: &[Vec<usize>],
    ) {
        if size + (nvars - k) <= *best {
            return;
        }
        if k == nvars {
            *best = size;
            return;
        }
        chosen[k] = true;
        if !supports.iter().any(|s| s.iter().all(|&i| chosen[i])) {
            search(k + 1, nvars, chosen, size + 1, best, supports);
        }
        chosen[k] = false;
        search(k + 1, nvars, chosen, size, best, supports);
    }
    let mut best = 0;
    let mut chosen = vec![false; nvars];
    search(0, nvars, &mut chosen, 0, &mut best, &supports);
    best as i64
}

/// Kernel of `source → target` sending source variable `i` to `images[i]`.
/// The result is an ideal of `source` (its preimage in the polynomial ring
/// includes the source relations).
pub fn ring_map_kernel<F: Field>(
    source: &RingSpec<F>,
    target: &RingSpec<F>,
    images: &[Polynomial<F>],
    ctx: &Ctx,
) -> Result<Ideal<F>> {
    let m = source.nvars();
    if images.len() != m {
        return Err(AlgebraError::Precondition(format!(
            "{} images for {m} source variables",
            images.len()
        )));
    }
    for im in images {
        if !im.ring().same_variables(target.base()) {
            return Err(AlgebraError::RingMismatch);
        }
    }
    let n = target.nvars();
    let stems: Vec<String> = target.base().vars().to_vec();
    let (big, _) = source.base().extend(&stems)?;
    let tmap: Vec<usize> = (m..m + n).collect();
    let mut gens = Vec::with_capacity(m + target.relations().len());
    for (i, im) in images.iter().enumerate() {
        let y = Polynomial::var(&big, i);
        gens.push(y.checked_sub(&im.embed(&big, &tmap))?);
    }
    for r in target.relations() {
        gens.push(r.embed(&big, &tmap));
    }
    let (_, _, gb) = eliminate_gens(&big, &gens, &tmap, ctx)?;
    let base = source.base();
    let gb: Vec<Polynomial<F>> = gb
        .into_iter()
        .map(|g| Polynomial::from_terms(base, g.terms().to_vec()))
        .collect();
    let out = Ideal::new(source, gb.clone())?;
    if !source.is_quotient() && base.order() == &MonomialOrder::DegRevLex {
        out.seed_cache(MonomialOrder::DegRevLex, gb);
    }
    Ok(out)
}
