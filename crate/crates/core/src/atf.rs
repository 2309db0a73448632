//! Decision procedures for the Aluffi torsion-free property of a pair
//! `J ⊆ I` (`J ∩ I^n = J I^{n−1}` for all `n ≥ 1`) and the criteria that
//! relate it to sums, residuals, perturbations and generator orders.
//!
//! Every check returns a [`Certificate`]. Running out of budget is not an
//! error: the certificate comes back `UNDECIDED` with a note saying where
//! the computation stopped. Precondition violations are errors.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::blowup::{
    aluffi_from_rees, associated_graded, lift_generators, quotient_rees_unchecked,
    rees_presentation, standard_base_test_in, vv_component, PresentedAlgebra, Valuation,
};
use crate::context::Ctx;
use crate::error::{AlgebraError, Result};
use crate::field::Field;
use crate::groebner::Ideal;
use crate::order::MonomialOrder;
use crate::parse::parse_polynomials;
use crate::poly::Polynomial;
use crate::ring::{PolyRing, RingSpec};
use crate::syzygy::{inclusion_mod, power_scale_submodule, syzygy_module, Submodule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    True,
    False,
    Undecided,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::True => "TRUE",
            Verdict::False => "FALSE",
            Verdict::Undecided => "UNDECIDED",
        })
    }
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingRecord {
    pub vars: Vec<String>,
    pub characteristic: u64,
    pub order: MonomialOrder,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub quotient: Vec<String>,
}

impl RingRecord {
    pub fn of<F: Field>(ring: &RingSpec<F>) -> Self {
        RingRecord {
            vars: ring.base().vars().to_vec(),
            characteristic: ring.base().characteristic(),
            order: ring.base().order().clone(),
            quotient: ring.relations().iter().map(|p| p.to_string()).collect(),
        }
    }

    /// Rebuild the ring. `F` must have the recorded characteristic.
    pub fn to_ring<F: Field>(&self) -> Result<RingSpec<F>> {
        let base = PolyRing::from_names::<F>(self.vars.clone(), self.order.clone())?;
        if base.characteristic() != self.characteristic {
            return Err(AlgebraError::InvalidRing(format!(
                "recorded characteristic {} does not match the field",
                self.characteristic
            )));
        }
        let rel = parse_polynomials(&self.quotient, &base)?;
        RingSpec::quotient(base, rel)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealRecord {
    pub hash: String,
    pub gens: Vec<String>,
}

impl IdealRecord {
    pub fn of<F: Field>(ideal: &Ideal<F>) -> Self {
        IdealRecord {
            hash: ideal_hash(ideal),
            gens: ideal.gens().iter().map(|p| p.to_string()).collect(),
        }
    }

    pub fn to_ideal<F: Field>(&self, ring: &RingSpec<F>) -> Result<Ideal<F>> {
        Ideal::new(ring, parse_polynomials(&self.gens, ring.base())?)
    }
}

/// Content hash of an ideal: ring variables, characteristic, quotient
/// relations and generators in order.
pub fn ideal_hash<F: Field>(ideal: &Ideal<F>) -> String {
    let mut h = Sha256::new();
    h.update(format!("{:?}|{}\n", ideal.base().vars(), ideal.base().characteristic()));
    for r in ideal.ring().relations() {
        h.update(format!("rel {r}\n"));
    }
    for g in ideal.gens() {
        h.update(format!("gen {g}\n"));
    }
    hex::encode(h.finalize())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inputs {
    pub ring: RingRecord,
    pub ideals: BTreeMap<String, IdealRecord>,
}

impl Inputs {
    pub fn new<F: Field>(ring: &RingSpec<F>) -> Self {
        Inputs {
            ring: RingRecord::of(ring),
            ideals: BTreeMap::new(),
        }
    }

    pub fn with<F: Field>(mut self, name: &str, ideal: &Ideal<F>) -> Self {
        self.ideals.insert(name.to_string(), IdealRecord::of(ideal));
        self
    }
}

/// One per-degree record. Records without a `track` concern the pair
/// `J ⊆ I` of the certificate's inputs: `equal` says whether
/// `J ∩ I^n = J I^{n−1}`, and a failure carries a witness. Records with a
/// `track` belong to a criterion's side condition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub n: u32,
    pub equal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub track: Option<String>,
}

impl Evidence {
    fn degree(n: u32, equal: bool, witness: Option<String>) -> Self {
        Evidence {
            n,
            equal,
            witness,
            track: None,
        }
    }

    fn tracked(track: &str, n: u32, equal: bool) -> Self {
        Evidence {
            n,
            equal,
            witness: None,
            track: Some(track.to_string()),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stats {
    pub ms: u64,
    pub gb_steps: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub check: String,
    pub inputs: Inputs,
    pub verdict: Verdict,
    pub evidence: Vec<Evidence>,
    pub criterion: String,
    pub stats: Stats,
    /// For generator-order checks: the shortest prefix `(f_1..f_k)` that is
    /// not torsion-free. Witnesses without a track refer to that prefix.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failing_prefix: Option<usize>,
    /// Named side conditions that were decided along the way.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub facts: BTreeMap<String, bool>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub subchecks: Vec<Certificate>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Certificate {
    fn new(check: &str, inputs: Inputs) -> Self {
        Certificate {
            check: check.to_string(),
            inputs,
            verdict: Verdict::Undecided,
            evidence: Vec::new(),
            criterion: String::new(),
            stats: Stats::default(),
            failing_prefix: None,
            facts: BTreeMap::new(),
            subchecks: Vec::new(),
            notes: Vec::new(),
        }
    }

    /// The first untracked witness.
    pub fn witness(&self) -> Option<(u32, &str)> {
        self.evidence
            .iter()
            .filter(|e| e.track.is_none())
            .find_map(|e| e.witness.as_deref().map(|w| (e.n, w)))
    }

    pub fn fact(&self, name: &str) -> Option<bool> {
        self.facts.get(name).copied()
    }

    /// Subchecks with a given check name, in order.
    pub fn subchecks_named<'a>(&'a self, check: &'a str) -> impl Iterator<Item = &'a Certificate> {
        self.subchecks.iter().filter(move |c| c.check == check)
    }

    /// Drop timing so that certificates of identical runs compare equal.
    pub fn without_timing(mut self) -> Self {
        self.stats.ms = 0;
        self.subchecks = self.subchecks.into_iter().map(Certificate::without_timing).collect();
        self
    }
}

/// Runs a check body, turning resource exhaustion into `UNDECIDED`.
fn run_check(
    name: &str,
    inputs: Inputs,
    ctx: &Ctx,
    body: impl FnOnce(&mut Certificate) -> Result<()>,
) -> Result<Certificate> {
    let start = Instant::now();
    let steps = ctx.steps();
    let mut cert = Certificate::new(name, inputs);
    match body(&mut cert) {
        Ok(()) => {}
        Err(e) if e.is_resource_limit() => {
            cert.verdict = Verdict::Undecided;
            cert.notes.push(format!("stopped: {e}"));
        }
        Err(e) => return Err(e),
    }
    cert.stats = Stats {
        ms: start.elapsed().as_millis() as u64,
        gb_steps: ctx.steps().saturating_sub(steps),
    };
    Ok(cert)
}

fn same_ring<F: Field>(a: &Ideal<F>, b: &Ideal<F>) -> Result<()> {
    if a.ring().compatible(b.ring()) {
        Ok(())
    } else {
        Err(AlgebraError::RingMismatch)
    }
}

fn require_subset<F: Field>(a: &Ideal<F>, b: &Ideal<F>, what: &str, ctx: &Ctx) -> Result<()> {
    for g in a.gens() {
        if !b.contains(g, ctx)? {
            return Err(AlgebraError::Precondition(format!("{what}: {g} is not contained")));
        }
    }
    Ok(())
}

/// `w ∈ J ∩ I^n` and `w ∉ J I^{n−1}`.
pub fn check_witness<F: Field>(
    j: &Ideal<F>,
    i: &Ideal<F>,
    n: u32,
    w: &Polynomial<F>,
    ctx: &Ctx,
) -> Result<bool> {
    if n == 0 {
        return Ok(false);
    }
    Ok(j.contains(w, ctx)?
        && i.power(n, ctx)?.contains(w, ctx)?
        && !j.product(&i.power(n - 1, ctx)?, ctx)?.contains(w, ctx)?)
}

/// Compares `J ∩ I^n` with `J I^{n−1}` for `n = 1..N`. A `TRUE` verdict
/// only means the equality holds up to `N`.
pub fn atf_truncated<F: Field>(
    j: &Ideal<F>,
    i: &Ideal<F>,
    max_n: u32,
    ctx: &Ctx,
) -> Result<Certificate> {
    same_ring(j, i)?;
    if max_n == 0 {
        return Err(AlgebraError::Precondition("truncation degree must be at least 1".into()));
    }
    require_subset(j, i, "J ⊆ I", ctx)?;
    let inputs = Inputs::new(j.ring()).with("J", j).with("I", i);
    run_check("atf_truncated", inputs, ctx, |c| {
        c.criterion = format!("truncated comparison up to n = {max_n}");
        // J ⊆ I, so J ∩ I = J = J·I^0
        c.evidence.push(Evidence::degree(1, true, None));
        let mut power = i.clone();
        let mut lower = i.clone();
        for n in 2..=max_n {
            c.notes.retain(|s| !s.starts_with("working on"));
            c.notes.push(format!("working on n = {n}"));
            let prod = j.product(&lower, ctx)?;
            lower = power.clone();
            power = power.product(i, ctx)?;
            let inter = j.intersect(&power, ctx)?;
            let mut witness = None;
            for g in inter.gens() {
                if !prod.contains(g, ctx)? {
                    witness = Some(g.clone());
                    break;
                }
            }
            match witness {
                Some(w) => {
                    c.evidence.push(Evidence::degree(n, false, Some(w.to_string())));
                    c.verdict = Verdict::False;
                    c.criterion = format!("J ∩ I^{n} is not contained in J I^{}", n - 1);
                    c.notes.clear();
                    return Ok(());
                }
                None => c.evidence.push(Evidence::degree(n, true, None)),
            }
        }
        c.notes.clear();
        c.notes.push(format!("equality holds for n ≤ {max_n}; larger n not examined"));
        c.verdict = Verdict::True;
        Ok(())
    })
}

/// `I` with redundant generators removed and its Rees presentation, shared
/// by checks that decide several pairs with the same `I`.
struct PreparedI<F: Field> {
    pruned: Ideal<F>,
    rees: Option<PresentedAlgebra<F>>,
}

impl<F: Field> PreparedI<F> {
    fn new(i: &Ideal<F>, ctx: &Ctx) -> Result<Self> {
        let pruned = i.prune(ctx)?;
        let rees = if pruned.gens().is_empty() {
            None
        } else {
            Some(rees_presentation(&pruned, ctx)?)
        };
        Ok(PreparedI { pruned, rees })
    }
}

/// Decides the property for all `n` at once by comparing the Aluffi
/// algebra of `I/J` with the Rees algebra of `I/J` over `R/J`. On failure a
/// T-homogeneous element of the difference of degree `n` evaluates to an
/// element of `J ∩ I^n` outside `J I^{n−1}`.
pub fn atf_exact<F: Field>(j: &Ideal<F>, i: &Ideal<F>, ctx: &Ctx) -> Result<Certificate> {
    same_ring(j, i)?;
    require_subset(j, i, "J ⊆ I", ctx)?;
    let inputs = Inputs::new(j.ring()).with("J", j).with("I", i);
    run_check("atf_exact", inputs, ctx, |c| {
        let prep = PreparedI::new(i, ctx)?;
        exact_body(c, j, i, &prep, ctx)
    })
}

/// `atf_exact` for a pair whose containment is already known.
fn atf_exact_prepared<F: Field>(
    j: &Ideal<F>,
    i: &Ideal<F>,
    prep: &PreparedI<F>,
    ctx: &Ctx,
) -> Result<Certificate> {
    let inputs = Inputs::new(j.ring()).with("J", j).with("I", i);
    run_check("atf_exact", inputs, ctx, |c| exact_body(c, j, i, prep, ctx))
}

fn exact_body<F: Field>(
    c: &mut Certificate,
    j: &Ideal<F>,
    i: &Ideal<F>,
    prep: &PreparedI<F>,
    ctx: &Ctx,
) -> Result<()> {
    let ip = &prep.pruned;
    let Some(rees) = prep.rees.as_ref() else {
        c.verdict = Verdict::True;
        c.criterion = "I is zero, so J is zero".into();
        return Ok(());
    };
    if ip.ngens() < i.ngens() {
        c.notes.push(format!("I presented by {} of its {} generators", ip.ngens(), i.ngens()));
    }
    let lifts = lift_generators(j, ip, ctx)?;
    let aluffi = aluffi_from_rees(rees, j, &lifts)?;
    let qrees = quotient_rees_unchecked(j, ip, ctx)?;
    let a = aluffi.defining();
    let q = qrees.defining();
    // the Aluffi ideal always lies in the quotient Rees ideal
    let mut missing = None;
    for h in q.gens() {
        if !a.contains(h, ctx)? {
            missing = Some(h.clone());
            break;
        }
    }
    let Some(h) = missing else {
        c.verdict = Verdict::True;
        c.criterion = "Aluffi algebra equals the Rees algebra of I/J".into();
        return Ok(());
    };
    let w = qrees.t_degrees();
    for (deg, comp) in h.graded_components(&w) {
        if a.contains(&comp, ctx)? {
            continue;
        }
        let n = u32::try_from(deg)
            .map_err(|_| AlgebraError::Precondition(format!("unexpected T-degree {deg}")))?;
        let wit = qrees.evaluate(&comp)?.with_ring(j.base());
        if !check_witness(j, i, n, &wit, ctx)? {
            return Err(AlgebraError::Precondition(format!(
                "extracted witness {wit} failed re-verification at n = {n}"
            )));
        }
        c.evidence.push(Evidence::degree(n, false, Some(wit.to_string())));
        c.verdict = Verdict::False;
        c.criterion = "Aluffi algebra differs from the Rees algebra of I/J".into();
        return Ok(());
    }
    Err(AlgebraError::Precondition(
        "no homogeneous component outside the Aluffi ideal".into(),
    ))
}

fn prefix<F: Field>(j: &Ideal<F>, k: usize) -> Result<Ideal<F>> {
    Ideal::new(j.ring(), j.gens()[..k].to_vec())
}

/// Every prefix `(f_1..f_k)` of the given generators is torsion-free in `I`.
pub fn strongly_atf<F: Field>(j: &Ideal<F>, i: &Ideal<F>, ctx: &Ctx) -> Result<Certificate> {
    same_ring(j, i)?;
    require_subset(j, i, "J ⊆ I", ctx)?;
    let inputs = Inputs::new(j.ring()).with("J", j).with("I", i);
    run_check("strongly_atf", inputs, ctx, |c| {
        let prep = PreparedI::new(i, ctx)?;
        let mut undecided = false;
        for k in 1..=j.ngens() {
            let sub = atf_exact_prepared(&prefix(j, k)?, i, &prep, ctx)?;
            let v = sub.verdict;
            if v == Verdict::False {
                if let Some((n, w)) = sub.witness() {
                    c.evidence.push(Evidence::degree(n, false, Some(w.to_string())));
                }
                c.subchecks.push(sub);
                c.failing_prefix = Some(k);
                c.verdict = Verdict::False;
                c.criterion = format!("prefix of length {k} is not torsion-free");
                return Ok(());
            }
            undecided |= v == Verdict::Undecided;
            c.subchecks.push(sub);
        }
        if undecided {
            c.verdict = Verdict::Undecided;
            c.criterion = "some prefixes undecided".into();
        } else {
            c.verdict = Verdict::True;
            c.criterion = "every prefix is torsion-free".into();
        }
        Ok(())
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    fn heap(k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(cur.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, cur, out);
            if k % 2 == 0 {
                cur.swap(i, k - 1);
            } else {
                cur.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut cur, &mut out);
    out.sort();
    out
}

/// Runs the strongly torsion-free test for every ordering of at most six
/// generators. `TRUE` when some ordering works. Prefix ideals are decided
/// once per generator subset.
pub fn strongly_atf_orders<F: Field>(
    j: &Ideal<F>,
    i: &Ideal<F>,
    ctx: &Ctx,
) -> Result<Certificate> {
    same_ring(j, i)?;
    if j.ngens() > 6 {
        return Err(AlgebraError::Precondition(format!(
            "ordering search is limited to 6 generators, got {}",
            j.ngens()
        )));
    }
    require_subset(j, i, "J ⊆ I", ctx)?;
    let inputs = Inputs::new(j.ring()).with("J", j).with("I", i);
    run_check("strongly_atf_orders", inputs, ctx, |c| {
        let prep = PreparedI::new(i, ctx)?;
        let mut memo: HashMap<u64, Verdict> = HashMap::new();
        let mut any_true = false;
        let mut any_undecided = false;
        for order in permutations(j.ngens()) {
            let mut mask = 0u64;
            let mut outcome = Verdict::True;
            let mut failed_at = None;
            for (k, &g) in order.iter().enumerate() {
                mask |= 1 << g;
                let v = match memo.get(&mask) {
                    Some(v) => *v,
                    None => {
                        let gens: Vec<Polynomial<F>> =
                            order[..=k].iter().map(|&x| j.gens()[x].clone()).collect();
                        let mut sub = atf_exact_prepared(&Ideal::new(j.ring(), gens)?, i, &prep, ctx)?;
                        let mut idx: Vec<usize> = order[..=k].iter().map(|x| x + 1).collect();
                        idx.sort();
                        sub.notes.push(format!("generators {idx:?}"));
                        let v = sub.verdict;
                        c.subchecks.push(sub);
                        memo.insert(mask, v);
                        v
                    }
                };
                if v == Verdict::False {
                    outcome = Verdict::False;
                    failed_at = Some(k + 1);
                    break;
                }
                if v == Verdict::Undecided {
                    outcome = Verdict::Undecided;
                }
            }
            let shown: Vec<usize> = order.iter().map(|x| x + 1).collect();
            c.notes.push(match failed_at {
                Some(k) => format!("order {shown:?}: FALSE at prefix {k}"),
                None => format!("order {shown:?}: {outcome}"),
            });
            any_true |= outcome == Verdict::True;
            any_undecided |= outcome == Verdict::Undecided;
        }
        c.verdict = if any_true {
            Verdict::True
        } else if any_undecided {
            Verdict::Undecided
        } else {
            Verdict::False
        };
        c.criterion = match c.verdict {
            Verdict::True => "some generator order is strongly torsion-free".into(),
            Verdict::False => "no generator order is strongly torsion-free".into(),
            Verdict::Undecided => "no order verified; some undecided".into(),
        };
        Ok(())
    })
}

/// Sufficient condition for the strong property: the pair is torsion-free
/// and `(J_k : f_{k+1}) = J_k` for `k = 1..t−1`. `atf` may carry an
/// already computed exact certificate for the pair.
pub fn colon_criterion<F: Field>(
    j: &Ideal<F>,
    i: &Ideal<F>,
    atf: Option<&Certificate>,
    ctx: &Ctx,
) -> Result<Certificate> {
    same_ring(j, i)?;
    require_subset(j, i, "J ⊆ I", ctx)?;
    let inputs = Inputs::new(j.ring()).with("J", j).with("I", i);
    run_check("colon_criterion", inputs, ctx, |c| {
        let sub = match atf {
            Some(a) if a.check == "atf_exact" && a.inputs == c.inputs => a.clone(),
            _ => atf_exact(j, i, ctx)?,
        };
        let pair = sub.verdict;
        c.subchecks.push(sub);
        let mut all = true;
        for k in 1..j.ngens() {
            let jk = prefix(j, k)?;
            let col = jk.quotient_by(&j.gens()[k], ctx)?;
            let holds = col.is_subset(&jk, ctx)?;
            c.evidence.push(Evidence::tracked("colon", k as u32, holds));
            if !holds {
                c.notes.push(format!("(J_{k} : f_{}) is larger than J_{k}", k + 1));
            }
            all &= holds;
        }
        c.facts.insert("colons_hold".into(), all);
        match (pair, all) {
            (Verdict::False, _) => {
                c.verdict = Verdict::False;
                c.criterion = "the full pair is not torsion-free".into();
            }
            (Verdict::True, true) => {
                c.verdict = Verdict::True;
                c.criterion = "torsion-free pair with non-degenerate colons".into();
            }
            (Verdict::True, false) => {
                c.verdict = Verdict::Undecided;
                c.criterion = "colon condition fails; no claim".into();
            }
            (Verdict::Undecided, _) => {
                c.verdict = Verdict::Undecided;
                c.criterion = "pair undecided".into();
            }
        }
        Ok(())
    })
}

fn in_quotient<F: Field>(ideal: &Ideal<F>, ring: &RingSpec<F>) -> Result<Ideal<F>> {
    Ideal::new(ring, ideal.gens().to_vec())
}

/// `J1 + J2 ⊆ I` is torsion-free exactly when `J1 ⊆ I` is torsion-free
/// modulo `J2`, provided both pairs are torsion-free. Decides both sides
/// and records whether they agree. The verdict is the one for the sum.
pub fn sum_criterion<F: Field>(
    j1: &Ideal<F>,
    j2: &Ideal<F>,
    i: &Ideal<F>,
    ctx: &Ctx,
) -> Result<Certificate> {
    same_ring(j1, i)?;
    same_ring(j2, i)?;
    require_subset(j1, i, "J1 ⊆ I", ctx)?;
    require_subset(j2, i, "J2 ⊆ I", ctx)?;
    let inputs = Inputs::new(i.ring()).with("J1", j1).with("J2", j2).with("I", i);
    let mut hypotheses = Vec::new();
    for (name, jj) in [("J1", j1), ("J2", j2)] {
        let sub = atf_exact(jj, i, ctx)?;
        if sub.verdict == Verdict::False {
            return Err(AlgebraError::Precondition(format!(
                "{name} ⊆ I is not torsion-free"
            )));
        }
        hypotheses.push(sub);
    }
    run_check("sum_criterion", inputs, ctx, |c| {
        let decided = hypotheses.iter().all(|h| h.verdict == Verdict::True);
        c.subchecks.extend(hypotheses);
        if !decided {
            c.criterion = "hypotheses undecided".into();
            return Ok(());
        }
        let lhs = atf_exact(&j1.sum(j2)?, i, ctx)?;
        let q = i.ring().mod_out(j2.gens())?;
        let rhs = atf_exact(&in_quotient(j1, &q)?, &in_quotient(i, &q)?, ctx)?;
        let (lv, rv) = (lhs.verdict, rhs.verdict);
        c.subchecks.push(lhs);
        c.subchecks.push(rhs);
        c.verdict = lv;
        if lv != Verdict::Undecided && rv != Verdict::Undecided {
            c.facts.insert("sides_agree".into(), lv == rv);
            c.criterion = if lv == rv {
                "sum and quotient sides agree".into()
            } else {
                "sum and quotient sides disagree".into()
            };
        } else {
            c.criterion = "one side undecided".into();
        }
        Ok(())
    })
}

/// With `I = J1 + J2` and no generator of `J1` in `I^2`: the pair `J1 ⊆ I`
/// is torsion-free iff `J1 ∩ J2^n ⊆ J1 I^{n−1}` for all `n`. Both tracks
/// are run up to `N`; the standard-base test of the generators of `J1`
/// is recorded alongside.
pub fn residual_criterion<F: Field>(
    j1: &Ideal<F>,
    j2: &Ideal<F>,
    max_n: u32,
    ctx: &Ctx,
) -> Result<Certificate> {
    same_ring(j1, j2)?;
    let i = j1.sum(j2)?;
    for (k, g) in j1.gens().iter().enumerate() {
        let v = crate::blowup::nu_valuation(g, &i, 2, ctx)?;
        if v != Valuation::Finite(1) {
            return Err(AlgebraError::Precondition(format!(
                "generator {} of J1 ({g}) lies in I^2",
                k + 1
            )));
        }
    }
    let inputs = Inputs::new(i.ring()).with("J1", j1).with("J2", j2).with("I", &i);
    run_check("residual_criterion", inputs, ctx, |c| {
        let a = atf_truncated(j1, &i, max_n, ctx)?;
        let a_verdict = a.verdict;
        c.subchecks.push(a);
        let mut b_holds = true;
        let mut b_decided = true;
        let mut power = Ideal::unit(j2.ring());
        let mut lower = Ideal::unit(i.ring());
        for n in 1..=max_n {
            power = if n == 1 { j2.clone() } else { power.product(j2, ctx)? };
            if n >= 2 {
                lower = if n == 2 { i.clone() } else { lower.product(&i, ctx)? };
            }
            let lhs = j1.intersect(&power, ctx)?;
            let rhs = j1.product(&lower, ctx)?;
            let holds = lhs.is_subset(&rhs, ctx)?;
            c.evidence.push(Evidence::tracked("j1_cap_j2_power", n, holds));
            if !holds {
                b_holds = false;
                break;
            }
        }
        if a_verdict == Verdict::Undecided {
            b_decided = false;
        }
        let b_verdict = Verdict::from(b_holds);
        if b_decided {
            c.facts.insert("tracks_agree".into(), a_verdict == b_verdict);
        }
        let gr = associated_graded(&i, ctx)?;
        let sb = standard_base_test_in(j1, &i, &gr, ctx)?;
        if let Some(h) = sb.holds {
            c.facts.insert("standard_base".into(), h);
        }
        c.verdict = a_verdict;
        c.criterion = format!("residual intersection track up to n = {max_n}");
        Ok(())
    })
}

/// Perturbing the generators of a torsion-free `J1` by elements of `I^2`
/// keeps the property iff `Z1 ∩ I^n R^m ⊆ Z2 + I^{n+1} R^m` for all `n`,
/// where `Z1`, `Z2` are the syzygy modules. The inclusions are tested for
/// `n = 0..N` and paired with exact decisions for both pairs. The verdict
/// is the exact one for `J2 ⊆ I`.
pub fn perturbation_check<F: Field>(
    j1: &Ideal<F>,
    j2: &Ideal<F>,
    i: &Ideal<F>,
    max_n: u32,
    ctx: &Ctx,
) -> Result<Certificate> {
    same_ring(j1, i)?;
    same_ring(j2, i)?;
    let m = j1.ngens();
    if j2.ngens() != m {
        return Err(AlgebraError::Precondition(format!(
            "generator counts differ: {m} vs {}",
            j2.ngens()
        )));
    }
    if m == 0 {
        return Err(AlgebraError::Precondition("no generators".into()));
    }
    let i2 = i.power(2, ctx)?;
    for (k, (f, g)) in j1.gens().iter().zip(j2.gens()).enumerate() {
        if !i2.contains(&f.checked_sub(g)?, ctx)? {
            return Err(AlgebraError::Precondition(format!(
                "f_{0} − g_{0} is not in I^2",
                k + 1
            )));
        }
    }
    let inputs = Inputs::new(i.ring()).with("J1", j1).with("J2", j2).with("I", i);
    run_check("perturbation_check", inputs, ctx, |c| {
        let s1 = atf_exact(j1, i, ctx)?;
        let s2 = atf_exact(j2, i, ctx)?;
        let (v1, v2) = (s1.verdict, s2.verdict);
        c.subchecks.push(s1);
        c.subchecks.push(s2);
        let z1 = syzygy_module(i.ring(), j1.gens(), ctx)?;
        let z2 = syzygy_module(i.ring(), j2.gens(), ctx)?;
        let mut all = true;
        for n in 0..=max_n {
            let cut = if n == 0 {
                z1.clone()
            } else {
                z1.intersect(&power_scale_submodule(i, n, m, ctx)?, ctx)?
            };
            let next: Submodule<F> = power_scale_submodule(i, n + 1, m, ctx)?;
            let holds = inclusion_mod(&cut, &z2, &next, ctx)?;
            c.evidence.push(Evidence::tracked("syzygy_inclusion", n, holds));
            all &= holds;
            if !holds {
                break;
            }
        }
        c.facts.insert("inclusions_hold".into(), all);
        if v1 != Verdict::Undecided {
            c.facts.insert("j1_atf".into(), v1 == Verdict::True);
        }
        if v1 == Verdict::True && v2 != Verdict::Undecided {
            // a failed inclusion refutes J2; holding up to N proves nothing
            c.facts.insert("consistent".into(), !(v2 == Verdict::True && !all));
        }
        c.verdict = v2;
        c.criterion = format!("syzygy inclusions tested for n ≤ {max_n}; verdict from the exact check on J2");
        Ok(())
    })
}

/// For `J1 ⊆ J2 ⊆ I`: if `J1 ∩ J2^{n−1} = J1 J2^{n−1}` and
/// `I^n ⊆ J2^n + J1` for all `n`, then `J1 ⊆ I` is torsion-free. The
/// hypotheses are tested up to `N`; when they hold the exact verdict for
/// `J1 ⊆ I` is reported, otherwise no claim is made.
pub fn nested_sufficiency<F: Field>(
    j1: &Ideal<F>,
    j2: &Ideal<F>,
    i: &Ideal<F>,
    max_n: u32,
    ctx: &Ctx,
) -> Result<Certificate> {
    same_ring(j1, j2)?;
    same_ring(j2, i)?;
    require_subset(j1, j2, "J1 ⊆ J2", ctx)?;
    require_subset(j2, i, "J2 ⊆ I", ctx)?;
    let inputs = Inputs::new(i.ring()).with("J1", j1).with("J2", j2).with("I", i);
    run_check("nested_sufficiency", inputs, ctx, |c| {
        let mut cover = true;
        let mut ipow = Ideal::unit(i.ring());
        let mut j2pow = Ideal::unit(j2.ring());
        for n in 1..=max_n {
            ipow = if n == 1 { i.clone() } else { ipow.product(i, ctx)? };
            j2pow = if n == 1 { j2.clone() } else { j2pow.product(j2, ctx)? };
            let holds = ipow.is_subset(&j2pow.sum(j1)?, ctx)?;
            c.evidence.push(Evidence::tracked("power_cover", n, holds));
            if !holds {
                cover = false;
                c.notes.push(format!("I^{n} is not contained in J2^{n} + J1"));
                break;
            }
        }
        let mut meet = true;
        let mut j2pow = Ideal::unit(j2.ring());
        for n in 1..=max_n {
            if n >= 2 {
                j2pow = if n == 2 { j2.clone() } else { j2pow.product(j2, ctx)? };
            }
            let holds = n == 1 || j1.intersect(&j2pow, ctx)?.is_subset(&j1.product(&j2pow, ctx)?, ctx)?;
            c.evidence.push(Evidence::tracked("nested_meet", n, holds));
            if !holds {
                meet = false;
                c.notes.push(format!(
                    "J1 ∩ J2^{} differs from J1 J2^{}",
                    n - 1,
                    n - 1
                ));
                break;
            }
        }
        c.facts.insert("power_cover".into(), cover);
        c.facts.insert("nested_meet".into(), meet);
        if !(cover && meet) {
            c.criterion = "hypotheses fail; no claim".into();
            return Ok(());
        }
        let sub = atf_exact(j1, i, ctx)?;
        c.verdict = sub.verdict;
        if sub.verdict != Verdict::Undecided {
            c.facts.insert("conclusion_confirmed".into(), sub.verdict == Verdict::True);
        }
        c.subchecks.push(sub);
        c.criterion = format!("hypotheses hold for n ≤ {max_n}; conclusion checked exactly");
        Ok(())
    })
}

/// If `J2 ⊆ I` is torsion-free modulo `J1`, the minimal generators of `J1`
/// are strongly torsion-free in `I` and form a regular sequence modulo
/// `J2`, then `J2 ⊆ I` is torsion-free. Hypotheses are checked in that
/// order; the first failure ends the check with no claim.
pub fn transfer_criterion<F: Field>(
    j1: &Ideal<F>,
    j2: &Ideal<F>,
    i: &Ideal<F>,
    ctx: &Ctx,
) -> Result<Certificate> {
    same_ring(j1, i)?;
    same_ring(j2, i)?;
    require_subset(j1, i, "J1 ⊆ I", ctx)?;
    require_subset(j2, i, "J2 ⊆ I", ctx)?;
    let inputs = Inputs::new(i.ring()).with("J1", j1).with("J2", j2).with("I", i);
    run_check("transfer_criterion", inputs, ctx, |c| {
        let no_claim = |c: &mut Certificate, why: &str| {
            c.notes.push(why.to_string());
            c.criterion = format!("hypothesis fails: {why}; no claim");
        };
        let q = i.ring().mod_out(j1.gens())?;
        let quot = atf_exact(&in_quotient(j2, &q)?, &in_quotient(i, &q)?, ctx)?;
        let qv = quot.verdict;
        c.subchecks.push(quot);
        c.facts.insert("quotient_atf".into(), qv == Verdict::True);
        if qv != Verdict::True {
            no_claim(c, "J2 ⊆ I is not known to be torsion-free modulo J1");
            return Ok(());
        }
        let minimal = j1.prune(ctx)?.ngens() == j1.ngens();
        c.facts.insert("minimal_generators".into(), minimal);
        if !minimal {
            no_claim(c, "generators of J1 are not minimal");
            return Ok(());
        }
        let strong = strongly_atf(j1, i, ctx)?;
        let sv = strong.verdict;
        c.subchecks.push(strong);
        c.facts.insert("strongly_atf".into(), sv == Verdict::True);
        if sv != Verdict::True {
            no_claim(c, "J1 ⊆ I is not known to be strongly torsion-free");
            return Ok(());
        }
        let mut acc = j2.clone();
        let mut regular = true;
        for (k, f) in j1.gens().iter().enumerate() {
            let holds = acc.quotient_by(f, ctx)?.is_subset(&acc, ctx)? && !acc.add_gens(&[f.clone()])?.is_unit(ctx)?;
            c.evidence.push(Evidence::tracked("regular_sequence", k as u32 + 1, holds));
            if !holds {
                regular = false;
                break;
            }
            acc = acc.add_gens(&[f.clone()])?;
        }
        c.facts.insert("regular_sequence".into(), regular);
        if !regular {
            no_claim(c, "generators of J1 are not a regular sequence modulo J2");
            return Ok(());
        }
        let sub = atf_exact(j2, i, ctx)?;
        c.verdict = sub.verdict;
        if sub.verdict != Verdict::Undecided {
            c.facts.insert("conclusion_confirmed".into(), sub.verdict == Verdict::True);
        }
        c.subchecks.push(sub);
        c.criterion = "all hypotheses hold; conclusion checked exactly".into();
        Ok(())
    })
}

/// Whether the initial forms of the generators of `J` generate its form
/// ideal in `gr_I(R)`. When every generator has order one, `TRUE` implies
/// the pair is torsion-free; `FALSE` makes no statement about it.
pub fn standard_base_check<F: Field>(
    j: &Ideal<F>,
    i: &Ideal<F>,
    ctx: &Ctx,
) -> Result<Certificate> {
    same_ring(j, i)?;
    let inputs = Inputs::new(j.ring()).with("J", j).with("I", i);
    run_check("standard_base", inputs, ctx, |c| {
        let gr = associated_graded(i, ctx)?;
        let rep = standard_base_test_in(j, i, &gr, ctx)?;
        for (g, (v, form)) in j.gens().iter().zip(rep.valuations.iter().zip(&rep.initial_forms)) {
            match form {
                Some(f) => c.notes.push(format!("ν({g}) = {v}, initial form {f}")),
                None => c.notes.push(format!("ν({g}) = {v}")),
            }
        }
        let order_one = rep.valuations.iter().all(|v| *v == Valuation::Finite(1));
        c.facts.insert("order_one".into(), order_one);
        match rep.holds {
            Some(h) => {
                c.verdict = h.into();
                c.criterion = if h {
                    "initial forms generate the form ideal".into()
                } else {
                    "initial forms generate a smaller ideal than the form ideal".into()
                };
            }
            None => c.criterion = "some I-adic order exceeds the search cap".into(),
        }
        Ok(())
    })
}

/// The graded piece `(J ∩ I^n) / J I^{n−1}`: `TRUE` when it vanishes,
/// otherwise `FALSE` with a witness.
pub fn vv_check<F: Field>(j: &Ideal<F>, i: &Ideal<F>, n: u32, ctx: &Ctx) -> Result<Certificate> {
    same_ring(j, i)?;
    let inputs = Inputs::new(j.ring()).with("J", j).with("I", i);
    run_check("vv_component", inputs, ctx, |c| {
        let comp = vv_component(j, i, n, ctx)?;
        c.verdict = comp.is_zero.into();
        c.evidence.push(Evidence::degree(n, comp.is_zero, comp.witnesses.first().map(|w| w.to_string())));
        for r in &comp.residue_gens {
            c.notes.push(format!("residue {r}"));
        }
        c.criterion = if comp.is_zero {
            format!("component of degree {n} vanishes")
        } else {
            format!("component of degree {n} is nonzero")
        };
        Ok(())
    })
}

/// Re-checks every witness in a certificate tree by membership tests.
/// Returns human-readable problems; an empty list means the certificate is
/// consistent.
pub fn verify_certificate<F: Field>(cert: &Certificate, ctx: &Ctx) -> Result<Vec<String>> {
    let mut problems = Vec::new();
    verify_into::<F>(cert, ctx, "", &mut problems)?;
    Ok(problems)
}

const WITNESS_CHECKS: [&str; 4] = ["atf_truncated", "atf_exact", "strongly_atf", "vv_component"];

fn verify_into<F: Field>(
    cert: &Certificate,
    ctx: &Ctx,
    path: &str,
    problems: &mut Vec<String>,
) -> Result<()> {
    let here = if path.is_empty() {
        cert.check.clone()
    } else {
        format!("{path}/{}", cert.check)
    };
    let ring = cert.inputs.ring.to_ring::<F>()?;
    let mut ideals = BTreeMap::new();
    for (name, rec) in &cert.inputs.ideals {
        let ideal = rec.to_ideal(&ring)?;
        if ideal_hash(&ideal) != rec.hash {
            problems.push(format!("{here}: hash mismatch for ideal {name}"));
        }
        ideals.insert(name.clone(), ideal);
    }
    let witnessed: Vec<&Evidence> = cert
        .evidence
        .iter()
        .filter(|e| e.track.is_none() && e.witness.is_some())
        .collect();
    if WITNESS_CHECKS.contains(&cert.check.as_str()) {
        if cert.verdict == Verdict::False && witnessed.is_empty() {
            problems.push(format!("{here}: FALSE verdict without a witness"));
        }
        if !witnessed.is_empty() {
            match (ideals.get("J"), ideals.get("I")) {
                (Some(j), Some(i)) => {
                    let j = match cert.failing_prefix {
                        Some(k) if k <= j.ngens() => prefix(j, k)?,
                        Some(k) => {
                            problems.push(format!("{here}: failing prefix {k} out of range"));
                            j.clone()
                        }
                        None => j.clone(),
                    };
                    for e in witnessed {
                        let text = e.witness.as_deref().unwrap_or_default();
                        let w = crate::parse::parse_polynomial::<F>(text, ring.base())?;
                        if !check_witness(&j, i, e.n, &w, ctx)? {
                            problems.push(format!("{here}: witness {text} fails at n = {}", e.n));
                        }
                    }
                }
                _ => problems.push(format!("{here}: witness without ideals J and I")),
            }
        }
    }
    for sub in &cert.subchecks {
        verify_into::<F>(sub, ctx, &here, problems)?;
    }
    Ok(())
}
