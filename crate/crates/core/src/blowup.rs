//! Presentations of blowup algebras as quotients of `R[T_1, ..., T_t]`.
//!
//! `T_j` stands for `f_j·t` where `f_1..f_t` are the chosen generators of
//! `I`. Base variables have T-degree 0, each `T_j` degree 1 and the
//! extended-Rees variable `u = t^{-1}` degree −1.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::context::Ctx;
use crate::error::{AlgebraError, Result};
use crate::field::Field;
use crate::groebner::{eliminate_gens, Ideal};
use crate::monomial::Monomial;
use crate::poly::Polynomial;
use crate::ring::{PolyRing, RingSpec};
use crate::syzygy::{syzygy_module, Lifter};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgebraKind {
    Rees,
    Symmetric,
    Aluffi,
    QuotientRees,
    ExtendedRees,
    AssociatedGraded,
}

/// `R[T] / K`, with `R` possibly a quotient ring whose relations are part
/// of `K`.
#[derive(Clone)]
pub struct PresentedAlgebra<F: Field> {
    kind: AlgebraKind,
    ring: RingSpec<F>,
    base: RingSpec<F>,
    f: Vec<Polynomial<F>>,
    t_vars: Vec<usize>,
    u_var: Option<usize>,
    defining: Ideal<F>,
}

impl<F: Field> fmt::Debug for PresentedAlgebra<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} over {:?}: {:?}", self.kind, self.ring.base(), self.defining)
    }
}

impl<F: Field> PresentedAlgebra<F> {
    pub fn kind(&self) -> AlgebraKind {
        self.kind
    }

    /// The polynomial ring `R[T]` (or `R[T, u]`).
    pub fn ring(&self) -> &RingSpec<F> {
        &self.ring
    }

    /// The coefficient ring `R` (or `R/a`).
    pub fn base(&self) -> &RingSpec<F> {
        &self.base
    }

    /// The generators of `I` that the `T` variables stand for.
    pub fn generators(&self) -> &[Polynomial<F>] {
        &self.f
    }

    pub fn t_vars(&self) -> &[usize] {
        &self.t_vars
    }

    pub fn u_var(&self) -> Option<usize> {
        self.u_var
    }

    pub fn defining(&self) -> &Ideal<F> {
        &self.defining
    }

    /// T-degree of every variable.
    pub fn t_degrees(&self) -> Vec<i64> {
        let mut w = vec![0; self.ring.nvars()];
        for &j in &self.t_vars {
            w[j] = 1;
        }
        if let Some(u) = self.u_var {
            w[u] = -1;
        }
        w
    }

    /// The image of a base-ring element in `R[T]`.
    pub fn embed(&self, f: &Polynomial<F>) -> Polynomial<F> {
        f.embed_prefix(self.ring.base())
    }

    /// `T_1^{a_1} ... T_t^{a_t}`.
    pub fn t_monomial(&self, exps: &[u32]) -> Result<Polynomial<F>> {
        let mut e = vec![0u32; self.ring.nvars()];
        for (k, &j) in self.t_vars.iter().enumerate() {
            e[j] = exps[k];
        }
        Ok(Polynomial::monomial(
            self.ring.base(),
            Monomial::from_exponents(&e)?,
            F::one(),
        ))
    }

    /// Substitute `T_j ↦ f_j` (and `u ↦ 1`), landing in `R`.
    pub fn evaluate(&self, h: &Polynomial<F>) -> Result<Polynomial<F>> {
        let base = self.base.base();
        let mut images: Vec<Polynomial<F>> = (0..base.nvars())
            .map(|i| Polynomial::var(base, i))
            .collect();
        images.extend(self.f.iter().map(|g| g.with_ring(base)));
        if self.u_var.is_some() {
            images.push(Polynomial::one(base));
        }
        h.substitute(&images)
    }

    /// Every generator of the defining ideal is T-homogeneous.
    pub fn is_t_homogeneous(&self) -> bool {
        let w = self.t_degrees();
        self.defining.gens().iter().all(|g| g.is_homogeneous(&w))
    }

    fn with_defining(&self, kind: AlgebraKind, defining: Ideal<F>) -> Self {
        PresentedAlgebra {
            kind,
            defining,
            ..self.clone()
        }
    }
}

/// `R[T_1..T_t, (u,) t]` plus the indices of the new variables.
struct GraphRing {
    ring: Arc<PolyRing>,
    t_vars: Vec<usize>,
    u_var: Option<usize>,
    t: usize,
}

fn graph_ring(base: &Arc<PolyRing>, ngens: usize, with_u: bool) -> Result<GraphRing> {
    let mut stems: Vec<String> = (1..=ngens).map(|j| format!("T{j}")).collect();
    if with_u {
        stems.push("u".into());
    }
    stems.push("t".into());
    let (ring, _) = base.extend(&stems)?;
    let n = base.nvars();
    Ok(GraphRing {
        ring,
        t_vars: (n..n + ngens).collect(),
        u_var: with_u.then_some(n + ngens),
        t: n + ngens + usize::from(with_u),
    })
}

/// Eliminate `t` from `(T_j − f_j t) + a + extra` (and `u t − 1` when the
/// ring carries `u`).
fn graph_kernel<F: Field>(
    kind: AlgebraKind,
    base: &RingSpec<F>,
    f: &[Polynomial<F>],
    extra: &[Polynomial<F>],
    with_u: bool,
    ctx: &Ctx,
) -> Result<PresentedAlgebra<F>> {
    if f.is_empty() {
        return Err(AlgebraError::Precondition("the ideal needs at least one generator".into()));
    }
    let g = graph_ring(base.base(), f.len(), with_u)?;
    let t = Polynomial::var(&g.ring, g.t);
    let mut gens = Vec::new();
    for (k, fj) in f.iter().enumerate() {
        let tj = Polynomial::var(&g.ring, g.t_vars[k]);
        gens.push(tj.checked_sub(&fj.embed_prefix(&g.ring).checked_mul(&t)?)?);
    }
    if let Some(u) = g.u_var {
        let ut = Polynomial::var(&g.ring, u).checked_mul(&t)?;
        gens.push(ut.checked_sub(&Polynomial::one(&g.ring))?);
    }
    for r in base.relations().iter().chain(extra) {
        gens.push(r.embed_prefix(&g.ring));
    }
    let (sub, _, gb) = eliminate_gens(&g.ring, &gens, &[g.t], ctx)?;
    let ring = RingSpec::polynomial(sub.clone());
    let defining = Ideal::from_reduced_basis(&ring, gb)?;
    Ok(PresentedAlgebra {
        kind,
        ring,
        base: base.clone(),
        f: f.iter().map(|p| p.with_ring(base.base())).collect(),
        t_vars: g.t_vars,
        u_var: g.u_var,
        defining,
    })
}

/// Rees algebra `R[It]`: the kernel of `T_j ↦ f_j t`.
pub fn rees_presentation<F: Field>(i: &Ideal<F>, ctx: &Ctx) -> Result<PresentedAlgebra<F>> {
    graph_kernel(AlgebraKind::Rees, i.ring(), i.gens(), &[], false, ctx)
}

/// Symmetric algebra: linear forms `Σ s_j T_j` over the syzygies `s` of the
/// generators.
pub fn sym_presentation<F: Field>(i: &Ideal<F>, ctx: &Ctx) -> Result<PresentedAlgebra<F>> {
    let f = i.gens();
    if f.is_empty() {
        return Err(AlgebraError::Precondition("the ideal needs at least one generator".into()));
    }
    let base = i.ring();
    let (ring, _) = base.base().extend(&(1..=f.len()).map(|j| format!("T{j}")).collect::<Vec<_>>())?;
    let n = base.nvars();
    let t_vars: Vec<usize> = (n..n + f.len()).collect();
    let z = syzygy_module(base, f, ctx)?;
    let mut gens: Vec<Polynomial<F>> = base.relations().iter().map(|r| r.embed_prefix(&ring)).collect();
    for s in z.gens() {
        let mut acc = Polynomial::zero(&ring);
        for (k, c) in s.coords().iter().enumerate() {
            let tk = Polynomial::var(&ring, t_vars[k]);
            acc = acc.checked_add(&c.embed_prefix(&ring).checked_mul(&tk)?)?;
        }
        gens.push(acc);
    }
    let spec = RingSpec::polynomial(ring);
    Ok(PresentedAlgebra {
        kind: AlgebraKind::Symmetric,
        defining: Ideal::new(&spec, gens)?,
        ring: spec,
        base: base.clone(),
        f: f.to_vec(),
        t_vars,
        u_var: None,
    })
}

/// Coefficients expressing each generator of `J` through those of `I`.
/// Fails with the first generator of `J` outside `I`.
pub fn lift_generators<F: Field>(
    j: &Ideal<F>,
    i: &Ideal<F>,
    ctx: &Ctx,
) -> Result<Vec<Vec<Polynomial<F>>>> {
    if !j.ring().compatible(i.ring()) {
        return Err(AlgebraError::RingMismatch);
    }
    if i.gens().is_empty() {
        if j.is_zero(ctx)? {
            return Ok(vec![Vec::new(); j.ngens()]);
        }
        return Err(AlgebraError::Precondition("J is not contained in I = (0)".into()));
    }
    let lifter = Lifter::new(i.ring(), i.gens(), ctx)?;
    let mut out = Vec::with_capacity(j.ngens());
    for g in j.gens() {
        match lifter.lift(g, ctx)? {
            Some(c) => out.push(c),
            None => {
                return Err(AlgebraError::Precondition(format!(
                    "J is not contained in I: {g} is not in I"
                )))
            }
        }
    }
    Ok(out)
}

/// Aluffi algebra: the Rees ideal of `I` plus `J` in degree 0 and the
/// degree-one lifts `Σ a_j T_j` of the generators of `J`.
pub fn aluffi_presentation<F: Field>(
    j: &Ideal<F>,
    i: &Ideal<F>,
    ctx: &Ctx,
) -> Result<PresentedAlgebra<F>> {
    let lifts = lift_generators(j, i, ctx)?;
    let rees = rees_presentation(i, ctx)?;
    aluffi_from_rees(&rees, j, &lifts)
}

pub(crate) fn aluffi_from_rees<F: Field>(
    rees: &PresentedAlgebra<F>,
    j: &Ideal<F>,
    lifts: &[Vec<Polynomial<F>>],
) -> Result<PresentedAlgebra<F>> {
    let ring = rees.ring.base();
    let mut extra = Vec::new();
    for (g, a) in j.gens().iter().zip(lifts) {
        extra.push(g.embed_prefix(ring));
        let mut lift = Polynomial::zero(ring);
        for (k, c) in a.iter().enumerate() {
            let tk = Polynomial::var(ring, rees.t_vars[k]);
            lift = lift.checked_add(&c.embed_prefix(ring).checked_mul(&tk)?)?;
        }
        extra.push(lift);
    }
    let defining = rees.defining.add_gens(&extra)?;
    Ok(rees.with_defining(AlgebraKind::Aluffi, defining))
}

/// Rees algebra of `I/J` over `R/J`.
pub fn quotient_rees_presentation<F: Field>(
    j: &Ideal<F>,
    i: &Ideal<F>,
    ctx: &Ctx,
) -> Result<PresentedAlgebra<F>> {
    lift_generators(j, i, ctx)?;
    quotient_rees_unchecked(j, i, ctx)
}

pub(crate) fn quotient_rees_unchecked<F: Field>(
    j: &Ideal<F>,
    i: &Ideal<F>,
    ctx: &Ctx,
) -> Result<PresentedAlgebra<F>> {
    graph_kernel(AlgebraKind::QuotientRees, i.ring(), i.gens(), j.gens(), false, ctx)
}

/// Extended Rees algebra `R[It, t^{-1}]` in `R[T, u]`.
pub fn extended_rees_presentation<F: Field>(
    i: &Ideal<F>,
    ctx: &Ctx,
) -> Result<PresentedAlgebra<F>> {
    graph_kernel(AlgebraKind::ExtendedRees, i.ring(), i.gens(), &[], true, ctx)
}

/// Set `u = 0` in a presentation over `R[T, u]`, producing an ideal of
/// `R[T]`.
fn restrict_u<F: Field>(
    ext: &PresentedAlgebra<F>,
    ideal: &Ideal<F>,
    target: &RingSpec<F>,
) -> Result<Ideal<F>> {
    let u = ext.u_var.expect("extended presentation");
    let keep: Vec<usize> = (0..ext.ring.nvars()).filter(|&k| k != u).collect();
    let gens = ideal
        .gens()
        .iter()
        .map(|g| {
            let terms = g
                .terms()
                .iter()
                .filter(|(m, _)| m.exponent(u) == 0)
                .cloned()
                .collect();
            crate::groebner::project(&Polynomial::from_terms(g.ring(), terms), target.base(), &keep)
        })
        .collect();
    Ideal::new(target, gens)
}

/// The associated graded ring `gr_I(R)` as `R[T]/G` together with the
/// extended Rees algebra it came from.
pub struct GradedRing<F: Field> {
    pub gr: PresentedAlgebra<F>,
    pub extended: PresentedAlgebra<F>,
}

pub fn associated_graded<F: Field>(i: &Ideal<F>, ctx: &Ctx) -> Result<GradedRing<F>> {
    let ext = extended_rees_presentation(i, ctx)?;
    let base = i.ring();
    let (ring, _) = base
        .base()
        .extend(&(1..=i.ngens()).map(|j| format!("T{j}")).collect::<Vec<_>>())?;
    let spec = RingSpec::polynomial(ring);
    let g = restrict_u(&ext, ext.defining(), &spec)?;
    let gr = PresentedAlgebra {
        kind: AlgebraKind::AssociatedGraded,
        ring: spec,
        base: base.clone(),
        f: ext.f.clone(),
        t_vars: ext.t_vars.clone(),
        u_var: None,
        defining: g,
    };
    Ok(GradedRing { gr, extended: ext })
}

/// The form ideal `J*` in `gr_I(R) = R[T]/G`, returned as the ideal
/// `G + J*` of `R[T]`.
///
/// `(K_ext + J) : u^∞` is obtained as the contraction of `K_ext + J` from
/// `R[T, u, u^{-1}]`, i.e. by eliminating `t` once more with `J` added.
pub fn form_ideal<F: Field>(
    j: &Ideal<F>,
    i: &Ideal<F>,
    gr: &GradedRing<F>,
    ctx: &Ctx,
) -> Result<Ideal<F>> {
    let sat = graph_kernel(AlgebraKind::ExtendedRees, i.ring(), i.gens(), j.gens(), true, ctx)?;
    let forms = restrict_u(&sat, sat.defining(), gr.gr.ring())?;
    forms.sum(gr.gr.defining())
}

/// The I-adic order of an element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum Valuation {
    Finite(u32),
    Infinity,
    /// Still a member of `I^cap`.
    Undecided(u32),
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(n) => write!(f, "{n}"),
            Valuation::Infinity => write!(f, "inf"),
            Valuation::Undecided(c) => write!(f, ">={c}"),
        }
    }
}

/// Largest `n ≤ cap` with `f ∈ I^n`.
pub fn nu_valuation<F: Field>(
    f: &Polynomial<F>,
    i: &Ideal<F>,
    cap: u32,
    ctx: &Ctx,
) -> Result<Valuation> {
    if Ideal::zero(i.ring()).contains(f, ctx)? {
        return Ok(Valuation::Infinity);
    }
    let mut power = Ideal::unit(i.ring());
    for n in 1..=cap {
        power = if n == 1 { i.clone() } else { power.product(i, ctx)? };
        if !power.contains(f, ctx)? {
            return Ok(Valuation::Finite(n - 1));
        }
    }
    Ok(Valuation::Undecided(cap))
}

/// Outcome of a standard-base test.
#[derive(Clone, Debug)]
pub struct StandardBaseReport<F: Field> {
    pub valuations: Vec<Valuation>,
    /// Representatives of the initial forms in `R[T]`; `None` for elements
    /// without a finite order.
    pub initial_forms: Vec<Option<Polynomial<F>>>,
    /// `None` when some valuation is undecided.
    pub holds: Option<bool>,
}

/// A T-degree-`n` representative of the initial form of `f`, from an
/// expression of `f` through the `n`-fold products of the generators of `I`.
pub fn initial_form<F: Field>(
    f: &Polynomial<F>,
    n: u32,
    i: &Ideal<F>,
    gr: &PresentedAlgebra<F>,
    ctx: &Ctx,
) -> Result<Polynomial<F>> {
    let t = i.ngens();
    // all exponent vectors of total degree n over t generators
    let mut exps: Vec<Vec<u32>> = Vec::new();
    let mut cur = vec![0u32; t];
    fn rec(k: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if k + 1 == cur.len() {
            cur[k] = left;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[k] = e;
            rec(k + 1, left - e, cur, out);
        }
        cur[k] = 0;
    }
    if t == 0 {
        return Err(AlgebraError::Precondition("I has no generators".into()));
    }
    rec(0, n, &mut cur, &mut exps);
    if exps.len() > ctx.generator_cap {
        return Err(AlgebraError::GeneratorCap {
            cap: ctx.generator_cap,
            needed: exps.len(),
        });
    }
    let base = i.base();
    let mut prods = Vec::with_capacity(exps.len());
    for e in &exps {
        let mut p = Polynomial::one(base);
        for (k, &a) in e.iter().enumerate() {
            if a > 0 {
                p = p.checked_mul(&i.gens()[k].checked_pow(a)?)?;
            }
        }
        prods.push(p);
    }
    let coeffs = Lifter::new(i.ring(), &prods, ctx)?
        .lift(f, ctx)?
        .ok_or_else(|| AlgebraError::Precondition(format!("{f} is not in I^{n}")))?;
    let ring = gr.ring().base();
    let mut acc = Polynomial::zero(ring);
    for (c, e) in coeffs.iter().zip(&exps) {
        if c.is_zero() {
            continue;
        }
        acc = acc.checked_add(&c.embed_prefix(ring).checked_mul(&gr.t_monomial(e)?)?)?;
    }
    Ok(acc)
}

/// Whether the initial forms of `gens` generate the form ideal of the
/// ideal they generate.
pub fn standard_base_test<F: Field>(
    gens: &[Polynomial<F>],
    i: &Ideal<F>,
    ctx: &Ctx,
) -> Result<StandardBaseReport<F>> {
    let j = Ideal::new(i.ring(), gens.to_vec())?;
    let gr = associated_graded(i, ctx)?;
    standard_base_test_in(&j, i, &gr, ctx)
}

pub(crate) fn standard_base_test_in<F: Field>(
    j: &Ideal<F>,
    i: &Ideal<F>,
    gr: &GradedRing<F>,
    ctx: &Ctx,
) -> Result<StandardBaseReport<F>> {
    let mut valuations = Vec::new();
    let mut forms = Vec::new();
    let mut decided = true;
    for g in j.gens() {
        let v = nu_valuation(g, i, ctx.nu_cap, ctx)?;
        valuations.push(v);
        match v {
            Valuation::Finite(n) => forms.push(Some(initial_form(g, n, i, &gr.gr, ctx)?)),
            Valuation::Infinity => forms.push(None),
            Valuation::Undecided(_) => {
                decided = false;
                forms.push(None);
            }
        }
    }
    if !decided {
        return Ok(StandardBaseReport {
            valuations,
            initial_forms: forms,
            holds: None,
        });
    }
    let star = form_ideal(j, i, gr, ctx)?;
    let generated = gr.gr.defining().add_gens(&forms.iter().flatten().cloned().collect::<Vec<_>>())?;
    let holds = generated.is_equal(&star, ctx)?;
    Ok(StandardBaseReport {
        valuations,
        initial_forms: forms,
        holds: Some(holds),
    })
}

/// One graded piece `(J ∩ I^n) / J I^{n−1}` of the Valabrega–Valla module.
#[derive(Clone, Debug)]
pub struct VVComponent<F: Field> {
    pub n: u32,
    /// Normal forms modulo `J I^{n−1}` of the generators of `J ∩ I^n` that
    /// do not lie in `J I^{n−1}`.
    pub residue_gens: Vec<Polynomial<F>>,
    /// Generators of `J ∩ I^n` outside `J I^{n−1}`, unreduced.
    pub witnesses: Vec<Polynomial<F>>,
    pub is_zero: bool,
}

pub fn vv_component<F: Field>(
    j: &Ideal<F>,
    i: &Ideal<F>,
    n: u32,
    ctx: &Ctx,
) -> Result<VVComponent<F>> {
    if n == 0 {
        return Err(AlgebraError::Precondition("degree must be at least 1".into()));
    }
    let inter = j.intersect(&i.power(n, ctx)?, ctx)?;
    let lower = j.product(&i.power(n - 1, ctx)?, ctx)?;
    let mut residue_gens = Vec::new();
    let mut witnesses = Vec::new();
    for g in inter.gens() {
        let r = lower.normal_form(g, ctx)?;
        if !r.is_zero() {
            residue_gens.push(r);
            witnesses.push(g.clone());
        }
    }
    Ok(VVComponent {
        n,
        is_zero: residue_gens.is_empty(),
        residue_gens,
        witnesses,
    })
}
