//! Running one job over a concrete field.

use std::sync::Arc;
use std::time::Duration;

use atf_core::atf::{
    atf_exact, atf_truncated, colon_criterion, nested_sufficiency, perturbation_check,
    residual_criterion, standard_base_check, strongly_atf, strongly_atf_orders, sum_criterion,
    transfer_criterion, verify_certificate, vv_check,
};
use atf_core::blowup::{aluffi_presentation, rees_presentation, sym_presentation, PresentedAlgebra};
use atf_core::families::jacobian_ideal;
use atf_core::field::Fp;
use atf_core::{BasisStore, Certificate, Ctx, Field, Ideal, Rational, Verdict};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::job::{Command, CriterionKind, FieldDesc, JobSpec, Resolver};

/// Settings from the command line that apply to every job.
#[derive(Clone, Default)]
pub struct Options {
    pub max_n: Option<u32>,
    pub budget_ms: Option<u64>,
    pub timing: bool,
    pub store: Option<Arc<dyn BasisStore>>,
}

pub struct Outcome {
    pub doc: Value,
    pub code: u8,
    pub verdict: Option<Verdict>,
    pub witness_n: Option<u32>,
}

impl Outcome {
    fn plain(doc: Value) -> Self {
        Outcome {
            doc,
            code: 0,
            verdict: None,
            witness_n: None,
        }
    }

    fn certificate(cert: Certificate, timing: bool) -> Self {
        let cert = if timing { cert } else { cert.without_timing() };
        let code = exit_code(cert.verdict);
        let witness_n = cert.witness().map(|(n, _)| n);
        Outcome {
            verdict: Some(cert.verdict),
            witness_n,
            code,
            doc: serde_json::to_value(&cert).expect("certificates serialize"),
        }
    }
}

pub fn exit_code(v: Verdict) -> u8 {
    match v {
        Verdict::True => 0,
        Verdict::False => 1,
        Verdict::Undecided => 2,
    }
}

/// Primes accepted for the `field` entry.
pub const PRIMES: [u64; 18] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 101, 32003, 65521,
];

/// Calls `$run::<F>($args)` with `F` chosen by characteristic.
macro_rules! by_characteristic {
    ($p:expr, $run:ident ( $($arg:expr),* )) => {
        match $p {
            0 => $run::<Rational>($($arg),*),
            2 => $run::<Fp<2>>($($arg),*),
            3 => $run::<Fp<3>>($($arg),*),
            5 => $run::<Fp<5>>($($arg),*),
            7 => $run::<Fp<7>>($($arg),*),
            11 => $run::<Fp<11>>($($arg),*),
            13 => $run::<Fp<13>>($($arg),*),
            17 => $run::<Fp<17>>($($arg),*),
            19 => $run::<Fp<19>>($($arg),*),
            23 => $run::<Fp<23>>($($arg),*),
            29 => $run::<Fp<29>>($($arg),*),
            31 => $run::<Fp<31>>($($arg),*),
            37 => $run::<Fp<37>>($($arg),*),
            41 => $run::<Fp<41>>($($arg),*),
            43 => $run::<Fp<43>>($($arg),*),
            47 => $run::<Fp<47>>($($arg),*),
            101 => $run::<Fp<101>>($($arg),*),
            32003 => $run::<Fp<32003>>($($arg),*),
            65521 => $run::<Fp<65521>>($($arg),*),
            p => Err(CliError::Input(format!(
                "unsupported characteristic {p}; use QQ or one of {:?}",
                PRIMES
            ))),
        }
    };
}

fn characteristic(field: &FieldDesc) -> Result<u64, CliError> {
    match field {
        FieldDesc::Name(n) if n == "QQ" => Ok(0),
        FieldDesc::Name(n) => Err(CliError::Input(format!("unknown field `{n}`; use QQ or a prime"))),
        FieldDesc::Prime(p) if PRIMES.contains(p) => Ok(*p),
        FieldDesc::Prime(p) => Err(CliError::Input(format!(
            "unsupported field characteristic {p}; use QQ or one of {PRIMES:?}"
        ))),
    }
}

pub fn run_job(job: &JobSpec, cmd: Command, opts: &Options) -> Result<Outcome, CliError> {
    let p = characteristic(&job.field)?;
    by_characteristic!(p, execute(job, cmd, opts))
}

/// Re-checks a certificate over the field its ring records.
pub fn verify(cert: &Certificate, opts: &Options) -> Result<Vec<String>, CliError> {
    let ctx = context(opts.budget_ms, None, opts);
    by_characteristic!(cert.inputs.ring.characteristic, verify_in(cert, &ctx))
}

fn verify_in<F: Field>(cert: &Certificate, ctx: &Ctx) -> Result<Vec<String>, CliError> {
    Ok(verify_certificate::<F>(cert, ctx)?)
}

fn context(budget_ms: Option<u64>, steps: Option<u64>, opts: &Options) -> Ctx {
    let mut ctx = Ctx::unlimited();
    if let Some(ms) = budget_ms {
        ctx = ctx.with_time_limit(Duration::from_millis(ms));
    }
    if let Some(s) = steps {
        ctx = ctx.with_step_limit(s);
    }
    if let Some(store) = &opts.store {
        ctx = ctx.with_store(store.clone());
    }
    ctx
}

fn gens<F: Field>(i: &Ideal<F>) -> Vec<String> {
    i.gens().iter().map(|g| g.to_string()).collect()
}

fn presentation<F: Field>(p: &PresentedAlgebra<F>) -> Value {
    let base = p.ring().base();
    let t: Vec<&str> = p.t_vars().iter().map(|&k| base.var_name(k)).collect();
    json!({
        "kind": p.kind(),
        "vars": base.vars(),
        "t_vars": t,
        "defining": gens(p.defining()),
    })
}

fn execute<F: Field>(job: &JobSpec, cmd: Command, opts: &Options) -> Result<Outcome, CliError> {
    let ctx = context(opts.budget_ms.or(job.budget_ms), job.budget_steps, opts);
    let max_n = opts.max_n.or(job.max_n);
    let mut res = Resolver::<F>::new(job, &ctx)?;
    let cert = match cmd {
        Command::Check => {
            let (j, i) = (res.role("J", &ctx)?, res.role("I", &ctx)?);
            if job.truncated {
                atf_truncated(&j, &i, max_n.unwrap_or(5), &ctx)?
            } else {
                atf_exact(&j, &i, &ctx)?
            }
        }
        Command::Strong => {
            let (j, i) = (res.role("J", &ctx)?, res.role("I", &ctx)?);
            if job.all_orders {
                strongly_atf_orders(&j, &i, &ctx)?
            } else {
                strongly_atf(&j, &i, &ctx)?
            }
        }
        Command::Grform => {
            let (j, i) = (res.role("J", &ctx)?, res.role("I", &ctx)?);
            standard_base_check(&j, &i, &ctx)?
        }
        Command::Vv => {
            let (j, i) = (res.role("J", &ctx)?, res.role("I", &ctx)?);
            let n = job.degree.or(max_n).unwrap_or(2);
            if n < 2 {
                return Err(CliError::Input("vv needs a degree of at least 2".into()));
            }
            vv_check(&j, &i, n, &ctx)?
        }
        Command::Criterion => criterion(job, &mut res, max_n, &ctx)?,
        Command::Rees => {
            let i = res.role("I", &ctx)?;
            return Ok(Outcome::plain(presentation(&rees_presentation(&i, &ctx)?)));
        }
        Command::Sym => {
            let i = res.role("I", &ctx)?;
            return Ok(Outcome::plain(presentation(&sym_presentation(&i, &ctx)?)));
        }
        Command::Aluffi => {
            let (j, i) = (res.role("J", &ctx)?, res.role("I", &ctx)?);
            return Ok(Outcome::plain(presentation(&aluffi_presentation(&j, &i, &ctx)?)));
        }
        Command::Jacobian => {
            let j = res.role("J", &ctx)?;
            let jac = jacobian_ideal(&j, &ctx)?;
            return Ok(Outcome::plain(json!({
                "vars": res.ring().base().vars(),
                "height": j.height(&ctx)?,
                "jacobian": gens(&jac),
            })));
        }
        Command::Family => {
            let mut ideals = serde_json::Map::new();
            for name in job.ideals.keys() {
                ideals.insert(name.clone(), json!(gens(&res.ideal(name, &ctx)?)));
            }
            return Ok(Outcome::plain(json!({
                "vars": res.ring().base().vars(),
                "ideals": ideals,
                "notes": res.notes,
            })));
        }
    };
    let mut cert = cert;
    cert.notes.append(&mut res.notes);
    Ok(Outcome::certificate(cert, opts.timing))
}

fn criterion<F: Field>(
    job: &JobSpec,
    res: &mut Resolver<F>,
    max_n: Option<u32>,
    ctx: &Ctx,
) -> Result<Certificate, CliError> {
    let kind = job
        .criterion
        .ok_or_else(|| CliError::Input("the criterion command needs a `criterion` entry".into()))?;
    let n = max_n.unwrap_or(4);
    Ok(match kind {
        CriterionKind::Colon => colon_criterion(&res.role("J", ctx)?, &res.role("I", ctx)?, None, ctx)?,
        CriterionKind::Sum => sum_criterion(
            &res.role("J1", ctx)?,
            &res.role("J2", ctx)?,
            &res.role("I", ctx)?,
            ctx,
        )?,
        CriterionKind::Residual => residual_criterion(&res.role("J1", ctx)?, &res.role("J2", ctx)?, n, ctx)?,
        CriterionKind::Perturbation => perturbation_check(
            &res.role("J1", ctx)?,
            &res.role("J2", ctx)?,
            &res.role("I", ctx)?,
            n,
            ctx,
        )?,
        CriterionKind::Nested => nested_sufficiency(
            &res.role("J1", ctx)?,
            &res.role("J2", ctx)?,
            &res.role("I", ctx)?,
            n,
            ctx,
        )?,
        CriterionKind::Transfer => transfer_criterion(
            &res.role("J1", ctx)?,
            &res.role("J2", ctx)?,
            &res.role("I", ctx)?,
            ctx,
        )?,
    })
}
