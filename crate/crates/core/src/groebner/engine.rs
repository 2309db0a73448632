//! Buchberger's algorithm over free modules `R^r`.
//!
//! Ideals are the rank-one case. Vectors are sparse lists of
//! `(position, monomial, coefficient)` kept strictly descending in the
//! position-over-term order: a smaller position index is larger, ties are
//! broken by the ring's monomial order.
//!
//! Pairs are pruned with the Gebauer–Möller criteria and selected by sugar,
//! then by the order of their lcm, then by generator index, so runs are
//! deterministic.

use std::cmp::Ordering;

use crate::context::Ctx;
use crate::error::{AlgebraError, Result};
use crate::field::Field;
use crate::monomial::Monomial;
use crate::order::MonomialOrder;

pub(crate) type VTerm<F> = (u32, Monomial, F);
pub(crate) type Vector<F> = Vec<VTerm<F>>;

#[inline]
pub(crate) fn cmp_pot(order: &MonomialOrder, a: (u32, &Monomial), b: (u32, &Monomial)) -> Ordering {
    b.0.cmp(&a.0).then_with(|| order.cmp(a.1, b.1))
}

/// `s·a − c·m·b` (with `s = 1` when absent); only `a[from..]` is merged,
/// the prefix is copied (and scaled).
fn sub_multiple<F: Field>(
    order: &MonomialOrder,
    a: &[VTerm<F>],
    from: usize,
    s: Option<&F>,
    b: &[VTerm<F>],
    m: &Monomial,
    c: &F,
) -> Vector<F> {
    let mut out: Vector<F> = Vec::with_capacity(a.len() + b.len());
    let scaled = |t: &VTerm<F>| -> VTerm<F> {
        match s {
            Some(s) => (t.0, t.1.clone(), t.2.mul_ref(s)),
            None => t.clone(),
        }
    };
    out.extend(a[..from].iter().map(scaled));
    let a = &a[from..];
    let (mut i, mut j) = (0, 0);
    let next_b = |j: usize| -> (u32, Monomial, F) {
        let (p, n, d) = &b[j];
        (*p, n.mul(m), -c.mul_ref(d))
    };
    let mut pending: Option<VTerm<F>> = if b.is_empty() { None } else { Some(next_b(0)) };
    while i < a.len() {
        let Some(bt) = pending.as_ref() else { break };
        match cmp_pot(order, (a[i].0, &a[i].1), (bt.0, &bt.1)) {
            Ordering::Greater => {
                out.push(scaled(&a[i]));
                i += 1;
            }
            Ordering::Less => {
                out.push(pending.take().unwrap());
                j += 1;
                pending = if j < b.len() { Some(next_b(j)) } else { None };
            }
            Ordering::Equal => {
                let bt = pending.take().unwrap();
                let v = match s {
                    Some(s) => a[i].2.mul_ref(s).add_ref(&bt.2),
                    None => a[i].2.add_ref(&bt.2),
                };
                if !v.is_zero() {
                    out.push((a[i].0, a[i].1.clone(), v));
                }
                i += 1;
                j += 1;
                pending = if j < b.len() { Some(next_b(j)) } else { None };
            }
        }
    }
    out.extend(a[i..].iter().map(scaled));
    if let Some(bt) = pending {
        out.push(bt);
        for k in j + 1..b.len() {
            out.push(next_b(k));
        }
    }
    out
}

/// Cancel the term `f[at]` against the leading term of `g`: returns
/// `a·f − b·q·g` and the factor `a`.
fn cancel_against<F: Field>(
    order: &MonomialOrder,
    f: &[VTerm<F>],
    at: usize,
    g: &[VTerm<F>],
    q: &Monomial,
) -> (Vector<F>, F) {
    let (a, b) = F::cancel_factors(&f[at].2, &g[0].2);
    let s = (!a.is_one()).then_some(&a);
    let out = sub_multiple(order, f, at, s, g, q, &b);
    (out, a)
}

/// Multiply by the field's content factor; returns the factor used.
fn rescale<F: Field>(v: &mut Vector<F>) -> F {
    let s = F::content_scale(v.iter().map(|t| &t.2));
    if !s.is_one() {
        for t in v.iter_mut() {
            t.2 = t.2.mul_ref(&s);
        }
    }
    s
}

pub(crate) fn make_monic<F: Field>(v: &mut Vector<F>) {
    if let Some(first) = v.first() {
        if !first.2.is_one() {
            let inv = first.2.inv();
            for t in v.iter_mut() {
                t.2 = t.2.mul_ref(&inv);
            }
        }
    }
}

fn max_degree<F: Field>(v: &Vector<F>) -> u32 {
    v.iter().map(|t| t.1.degree()).max().unwrap_or(0)
}

struct Elem<F: Field> {
    v: Vector<F>,
    mask: u64,
    sugar: u32,
    redundant: bool,
}

impl<F: Field> Elem<F> {
    fn pos(&self) -> u32 {
        self.v[0].0
    }
    fn lm(&self) -> &Monomial {
        &self.v[0].1
    }
}

#[derive(Clone)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Monomial,
    pos: u32,
    sugar: u32,
}

/// Divisor lookup over a fixed list of vectors.
pub(crate) struct Reducer<'a, F: Field> {
    order: &'a MonomialOrder,
    basis: Vec<(&'a Vector<F>, u64)>,
}

impl<'a, F: Field> Reducer<'a, F> {
    pub(crate) fn new(order: &'a MonomialOrder, basis: &'a [Vector<F>]) -> Self {
        Reducer {
            order,
            basis: basis
                .iter()
                .filter(|v| !v.is_empty())
                .map(|v| (v, v[0].1.support_mask()))
                .collect(),
        }
    }

    fn find(&self, pos: u32, m: &Monomial) -> Option<&'a Vector<F>> {
        let mm = m.support_mask();
        self.basis
            .iter()
            .find(|(v, mask)| v[0].0 == pos && mask & !mm == 0 && v[0].1.divides(m))
            .map(|(v, _)| *v)
    }

    /// Full reduction (every term). The result is the exact remainder:
    /// `f` minus a combination of the basis.
    pub(crate) fn reduce(&self, mut f: Vector<F>, ctx: &Ctx) -> Result<Vector<F>> {
        // the working vector is always `scale · (f − combination)`
        let mut scale = F::one();
        let mut done = 0;
        while done < f.len() {
            match self.find(f[done].0, &f[done].1) {
                Some(g) => {
                    let q = g[0].1.quotient_of(&f[done].1).expect("divisor");
                    let (next, a) = cancel_against(self.order, &f, done, g, &q);
                    f = next;
                    if !a.is_one() {
                        scale = scale.mul_ref(&a);
                    }
                    ctx.tick(1)?;
                }
                None => done += 1,
            }
        }
        if !scale.is_one() {
            let inv = scale.inv();
            for t in f.iter_mut() {
                t.2 = t.2.mul_ref(&inv);
            }
        }
        Ok(f)
    }

    /// Reduction that stops as soon as the leading term is irreducible.
    pub(crate) fn reduces_to_zero(&self, mut f: Vector<F>, ctx: &Ctx) -> Result<bool> {
        while let Some((pos, m, _)) = f.first() {
            match self.find(*pos, m) {
                Some(g) => {
                    let q = g[0].1.quotient_of(m).expect("divisor");
                    f = cancel_against(self.order, &f, 0, g, &q).0;
                    ctx.tick(1)?;
                }
                None => return Ok(false),
            }
        }
        Ok(true)
    }
}

pub(crate) struct Buchberger<'a, F: Field> {
    order: &'a MonomialOrder,
    ctx: &'a Ctx,
    degree_cap: u32,
    /// The product criterion is only valid for ideals.
    ideal_case: bool,
    elems: Vec<Elem<F>>,
    pairs: Vec<Pair>,
}

impl<'a, F: Field> Buchberger<'a, F> {
    pub(crate) fn new(order: &'a MonomialOrder, ctx: &'a Ctx, degree_cap: u32, rank: usize) -> Self {
        Buchberger {
            order,
            ctx,
            degree_cap,
            ideal_case: rank <= 1,
            elems: Vec::new(),
            pairs: Vec::new(),
        }
    }

    fn find_reducer(&self, pos: u32, m: &Monomial, mm: u64) -> Option<usize> {
        self.elems.iter().position(|e| {
            !e.redundant && e.pos() == pos && e.mask & !mm == 0 && e.lm().divides(m)
        })
    }

    /// Full reduction against the current non-redundant elements, tracking
    /// sugar.
    fn reduce(&self, mut f: Vector<F>, mut sugar: u32) -> Result<(Vector<F>, u32)> {
        let mut done = 0;
        while done < f.len() {
            let mm = f[done].1.support_mask();
            match self.find_reducer(f[done].0, &f[done].1, mm) {
                Some(k) => {
                    let g = &self.elems[k];
                    let q = g.lm().quotient_of(&f[done].1).expect("divisor");
                    sugar = sugar.max(g.sugar + q.degree());
                    f = cancel_against(self.order, &f, done, &g.v, &q).0;
                    self.ctx.tick(1)?;
                }
                None => done += 1,
            }
        }
        rescale(&mut f);
        Ok((f, sugar))
    }

    fn check_degree(&self, d: u32) -> Result<()> {
        if d > self.degree_cap {
            Err(AlgebraError::DegreeCap {
                cap: self.degree_cap,
            })
        } else {
            Ok(())
        }
    }

    /// Gebauer–Möller update after appending a new element.
    fn update(&mut self, h: usize) -> Result<()> {
        let (hpos, hlm) = {
            let e = &self.elems[h];
            (e.pos(), e.lm().clone())
        };
        let hsugar = self.elems[h].sugar;
        let hdeg = hlm.degree();

        // candidate pairs (g, h)
        let mut cands: Vec<(Pair, bool)> = Vec::new();
        for (g, e) in self.elems.iter().enumerate() {
            if g == h || e.redundant || e.pos() != hpos {
                continue;
            }
            let lcm = e.lm().lcm(&hlm);
            let coprime = self.ideal_case && e.lm().is_coprime(&hlm);
            let sugar = (e.sugar - e.lm().degree()).max(hsugar - hdeg) + lcm.degree();
            cands.push((
                Pair {
                    i: g,
                    j: h,
                    lcm,
                    pos: hpos,
                    sugar,
                },
                coprime,
            ));
        }

        // chain criterion inside the new pairs (criterion M and F)
        let mut kept: Vec<(Pair, bool)> = Vec::new();
        for idx in 0..cands.len() {
            let (p, coprime) = &cands[idx];
            if *coprime {
                kept.push(cands[idx].clone());
                continue;
            }
            let dominated_by_rest = cands[idx + 1..]
                .iter()
                .any(|(q, _)| q.lcm.divides(&p.lcm));
            let dominated_by_kept = kept.iter().any(|(q, _)| q.lcm.divides(&p.lcm));
            if !dominated_by_rest && !dominated_by_kept {
                kept.push(cands[idx].clone());
            }
        }
        let new_pairs: Vec<Pair> = kept
            .into_iter()
            .filter(|(_, coprime)| !coprime)
            .map(|(p, _)| p)
            .collect();

        // criterion B on the existing pairs
        let elems = &self.elems;
        self.pairs.retain(|p| {
            if p.pos != hpos || !hlm.divides(&p.lcm) {
                return true;
            }
            let l1 = elems[p.i].lm().lcm(&hlm);
            let l2 = elems[p.j].lm().lcm(&hlm);
            l1 == p.lcm || l2 == p.lcm
        });
        for p in &new_pairs {
            self.check_degree(p.lcm.degree())?;
        }
        self.pairs.extend(new_pairs);

        // elements whose leading term the new one divides
        for g in 0..self.elems.len() {
            if g != h
                && !self.elems[g].redundant
                && self.elems[g].pos() == hpos
                && hlm.divides(self.elems[g].lm())
            {
                self.elems[g].redundant = true;
            }
        }
        Ok(())
    }

    fn insert(&mut self, mut v: Vector<F>, sugar: u32) -> Result<()> {
        rescale(&mut v);
        let mask = v[0].1.support_mask();
        self.elems.push(Elem {
            v,
            mask,
            sugar,
            redundant: false,
        });
        let h = self.elems.len() - 1;
        self.update(h)
    }

    fn select_pair(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let order = self.order;
        let mut best = 0;
        for k in 1..self.pairs.len() {
            let (a, b) = (&self.pairs[k], &self.pairs[best]);
            let better = a
                .sugar
                .cmp(&b.sugar)
                .then_with(|| cmp_pot(order, (a.pos, &a.lcm), (b.pos, &b.lcm)))
                .then_with(|| (a.j, a.i).cmp(&(b.j, b.i)));
            if better == Ordering::Less {
                best = k;
            }
        }
        Some(self.pairs.swap_remove(best))
    }

    fn s_vector(&self, p: &Pair) -> Vector<F> {
        let (a, b) = (&self.elems[p.i], &self.elems[p.j]);
        let qa = a.lm().quotient_of(&p.lcm).expect("lcm");
        let qb = b.lm().quotient_of(&p.lcm).expect("lcm");
        let (x, y) = F::cancel_factors(&a.v[0].2, &b.v[0].2);
        let scaled: Vector<F> = a
            .v
            .iter()
            .map(|(s, m, c)| (*s, m.mul(&qa), if x.is_one() { c.clone() } else { c.mul_ref(&x) }))
            .collect();
        sub_multiple(self.order, &scaled, 0, None, &b.v, &qb, &y)
    }

    /// Run to completion and return the reduced basis, sorted ascending by
    /// leading term.
    pub(crate) fn run(mut self, input: Vec<Vector<F>>) -> Result<Vec<Vector<F>>> {
        let mut input: Vec<Vector<F>> = input.into_iter().filter(|v| !v.is_empty()).collect();
        for v in &input {
            self.check_degree(max_degree(v))?;
        }
        let order = self.order;
        input.sort_by(|a, b| cmp_pot(order, (a[0].0, &a[0].1), (b[0].0, &b[0].1)));
        for v in input {
            let s = max_degree(&v);
            let (r, sugar) = self.reduce(v, s)?;
            if !r.is_empty() {
                self.insert(r, sugar)?;
            }
        }
        while let Some(p) = self.select_pair() {
            self.ctx.check_time()?;
            let s = self.s_vector(&p);
            self.ctx.tick(1)?;
            if s.is_empty() {
                continue;
            }
            let (r, sugar) = self.reduce(s, p.sugar)?;
            if !r.is_empty() {
                self.check_degree(max_degree(&r))?;
                self.insert(r, sugar)?;
            }
        }
        let ctx = self.ctx;
        let mut basis: Vec<Vector<F>> = self
            .elems
            .into_iter()
            .filter(|e| !e.redundant)
            .map(|e| e.v)
            .collect();
        for v in basis.iter_mut() {
            make_monic(v);
        }
        interreduce(order, &mut basis, ctx)?;
        basis.sort_by(|a, b| cmp_pot(order, (a[0].0, &a[0].1), (b[0].0, &b[0].1)));
        Ok(basis)
    }
}

/// Tail-reduce each element of a minimal, monic-led basis by the others.
fn interreduce<F: Field>(order: &MonomialOrder, basis: &mut [Vector<F>], ctx: &Ctx) -> Result<()> {
    for k in 0..basis.len() {
        let head = basis[k][0].clone();
        let tail: Vector<F> = basis[k][1..].to_vec();
        let others: Vec<Vector<F>> = basis
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, v)| v.clone())
            .collect();
        let red = Reducer::new(order, &others);
        let mut reduced = red.reduce(tail, ctx)?;
        reduced.insert(0, head);
        debug_assert!(reduced[0].2.is_one());
        basis[k] = reduced;
    }
    Ok(())
}
