//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Runs without the test harness so the lines are printed even when
//! everything passes. The process fails when a criterion fails, and also
//! when a check listed as known-red starts passing.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use atf_core::atf::{
    atf_exact, atf_truncated, nested_sufficiency, perturbation_check, residual_criterion,
    standard_base_check, strongly_atf, sum_criterion, transfer_criterion, verify_certificate,
};
use atf_core::families::{
    check_monomial_curve, generic_matrix_minors, jacobian_ideal, jacobian_matrix, minors,
    monomial_curve, monomial_curve_exponents, points_ideal, squarefree_veronese,
};
use atf_core::{ring_map_kernel, AlgebraError, Certificate, Ctx, Ideal, Monomial, Polynomial, Verdict};
use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<(bool, String), AlgebraError>;

const CASES: usize = 50;

/// Untracked evidence, i.e. the per-degree comparisons of the pair itself.
fn all_equal(c: &Certificate) -> bool {
    c.evidence.iter().filter(|e| e.track.is_none()).all(|e| e.equal)
}

fn q(v: i64) -> Q {
    Q::from_integer(v.into())
}

fn curve_one_one() -> Outcome {
    let ctx = Ctx::unlimited();
    let (j, i) = monomial_curve::<Q>(1, 1)?;
    let target = ring(&["u"]);
    let u = Polynomial::var(target.base(), 0);
    let images: Vec<_> = monomial_curve_exponents(1, 1).iter().map(|&e| u.pow(e)).collect();
    let toric = j.is_equal(&ring_map_kernel(j.ring(), &target, &images, &ctx)?, &ctx)?;
    let jac = jacobian_ideal(&j, &ctx)?.is_equal(&i, &ctx)?;
    let exact = atf_exact(&j, &i, &ctx)?.verdict;
    let t = atf_truncated(&j, &i, 5, &ctx)?;
    let ok = toric && jac && exact == Verdict::True && t.verdict == Verdict::True && all_equal(&t);
    Ok((
        ok,
        format!(
            "toric kernel {toric}, Jacobian closed form {jac}, exact {exact}, truncated N=5 {}",
            t.verdict
        ),
    ))
}

fn curve_grid() -> Outcome {
    let ctx = Ctx::unlimited();
    let mut ok = true;
    let mut parts = vec![];
    for p in 0..=2 {
        for qq in 0..=2 {
            if check_monomial_curve(p, qq).is_err() {
                parts.push(format!("({p},{qq}) degenerate"));
                continue;
            }
            let (j, i) = monomial_curve::<Q>(p, qq)?;
            let v = atf_exact(&j, &i, &ctx)?.verdict;
            ok &= v == Verdict::True;
            parts.push(format!("({p},{qq}) {v}"));
        }
    }
    Ok((ok, parts.join(", ")))
}

fn five_points(columns: [[i64; 3]; 5]) -> Result<Ideal<Q>, AlgebraError> {
    let cols: Vec<[Q; 3]> = columns.iter().map(|c| c.map(q)).collect();
    points_ideal(&cols, &Ctx::unlimited())
}

const SHOWN_POINTS: [[i64; 3]; 5] = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 1], [-1, 2, 1]];
const POINTS_J: [&str; 3] = ["x*y + 3*x*z - 4*y*z", "z*x^2 - 2*y*z^2 + x*z^2", "z*y^2 + 6*x*z^2 - 7*y*z^2"];

fn points_literal() -> Outcome {
    let ctx = Ctx::unlimited();
    let j = five_points(SHOWN_POINTS)?;
    let shown = ideal(j.ring(), &POINTS_J);
    let eq = j.is_equal(&shown, &ctx)?;
    let value = shown.gens()[0].evaluate(&[q(-1), q(2), q(1)]);
    Ok((
        eq,
        format!("points_ideal(displayed matrix) = displayed J is {eq}; first generator at (-1,2,1) is {value}"),
    ))
}

fn points_checks() -> Outcome {
    let ctx = Ctx::unlimited();
    let mut cols = SHOWN_POINTS;
    cols[4] = [2, 3, 1];
    let j = five_points(cols)?;
    let shown = ideal(j.ring(), &POINTS_J);
    let eq = j.is_equal(&shown, &ctx)?;
    let i = jacobian_ideal(&shown, &ctx)?;
    let exact = atf_exact(&shown, &i, &ctx)?.verdict;
    let s = strongly_atf(&shown, &i, &ctx)?;
    let sound = verify_certificate::<Q>(&s, &ctx)?.is_empty();
    let ok = eq && exact == Verdict::True && s.verdict == Verdict::False && s.failing_prefix.is_some() && sound;
    Ok((
        ok,
        format!(
            "corrected column (2,3,1) gives displayed J {eq}, exact {exact}, strong {} with failing prefix {:?}, certificate verified {sound}",
            s.verdict, s.failing_prefix
        ),
    ))
}

fn quartet() -> Outcome {
    let ctx = Ctx::unlimited();
    let r = xyz();
    let i = ideal(&r, &["x^2", "x*y", "x*z", "y^2", "y*z", "z^2"]);
    let mut ok = true;
    let mut parts = vec![];
    for (g, expected) in [("x*y", true), ("y*z", true), ("x*y^2*z", false), ("x*y*z", false)] {
        let j = ideal(&r, &[g]);
        let c = atf_exact(&j, &i, &ctx)?;
        let at = c.witness().map(|w| w.0);
        ok &= c.verdict == Verdict::from(expected);
        if !expected {
            ok &= at == Some(2) && witnesses_sound(&j, &i, &c, &ctx);
        }
        match at {
            Some(n) => parts.push(format!("({g}) {}@{n}", c.verdict)),
            None => parts.push(format!("({g}) {}", c.verdict)),
        }
    }
    Ok((ok, parts.join(", ")))
}

fn generic_matrix() -> Outcome {
    let ctx = Ctx::unlimited();
    let m = generic_matrix_minors::<Q>(3)?;
    let theta = jacobian_matrix(m.gens());
    let i2 = Ideal::new(m.ring(), minors(&theta, 2)?)?;
    let vars: Vec<_> = (0..6).map(|k| Polynomial::var(m.base(), k)).collect();
    let sq = Ideal::new(m.ring(), vars)?.power(2, &ctx)?;
    let eq = i2.is_equal(&sq, &ctx)?;
    Ok((eq, format!("I_2 of the 3×6 Jacobian matrix equals (x1..x6)^2: {eq}")))
}

fn veronese() -> Outcome {
    let ctx = Ctx::unlimited();
    let (j, i) = squarefree_veronese::<Q>(3, 3)?;
    let t = atf_truncated(&j, &i, 3, &ctx)?;
    let (j2, i2) = squarefree_veronese::<Q>(3, 2)?;
    let same = j2.is_equal(&i2, &ctx)?;
    let exact = atf_exact(&j2, &i2, &ctx)?.verdict;
    let ok = t.verdict != Verdict::False && all_equal(&t) && same && exact == Verdict::True;
    Ok((
        ok,
        format!("(3,3) truncated N=3 {}, (3,2) I = J {same} and exact {exact}", t.verdict),
    ))
}

fn quadrics() -> Outcome {
    let ctx = Ctx::unlimited();
    let r = ring(&["x1", "x2", "x3"]);
    let j = ideal(&r, &["x1*x2", "x1*x3", "x2*x3"]);
    let i = ideal(&r, &["x1*x2", "x1*x3", "x2*x3", "x1^2", "x2^2", "x3^2"]);
    let s = strongly_atf(&j, &i, &ctx)?;
    Ok((s.verdict == Verdict::True, format!("strongly torsion-free {}", s.verdict)))
}

/// `dim_k R / (a + m^{n+1})` for `R = k[x,y,z]`, counted as standard
/// monomials of a Gröbner basis.
fn colength(a: &Ideal<Q>, n: u32, ctx: &Ctx) -> Result<usize, AlgebraError> {
    let m = ideal(a.ring(), &["x", "y", "z"]);
    let gb = a.sum(&m.power(n + 1, ctx)?)?.groebner_basis(ctx)?;
    let leads: Vec<Monomial> = gb.iter().filter_map(|g| g.leading_monomial().cloned()).collect();
    let mut count = 0;
    for d in 0..=n {
        for e0 in 0..=d {
            for e1 in 0..=d - e0 {
                let mono = Monomial::from_exponents(&[e0, e1, d - e0 - e1])?;
                if !leads.iter().any(|l| l.divides(&mono)) {
                    count += 1;
                }
            }
        }
    }
    Ok(count)
}

/// Lowest-degree parts of the generators. In the maximal ideal of
/// `k[x,y,z]` these are the initial forms, and `gr` is the polynomial ring
/// itself, so the form ideal has the same Hilbert function as the tangent
/// cone of `R/J`. Equal colengths up to degree `d` mean the initial forms
/// generate the form ideal in degrees up to `d`.
fn tangent_cone_agrees(j: &Ideal<Q>, d: u32, ctx: &Ctx) -> Result<bool, AlgebraError> {
    let low: Vec<Polynomial<Q>> = j
        .gens()
        .iter()
        .map(|g| {
            g.graded_components(&[1, 1, 1])
                .into_iter()
                .min_by_key(|c| c.0)
                .expect("nonzero generator")
                .1
        })
        .collect();
    let forms = Ideal::new(j.ring(), low)?;
    for n in 1..=d {
        if colength(j, n, ctx)? != colength(&forms, n, ctx)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn standard_bases() -> Outcome {
    let ctx = Ctx::unlimited();
    let r = xyz();
    let m = ideal(&r, &["x", "y", "z"]);
    let short = ideal(&r, &["x^2 - y^3", "x*y - z^3"]);
    let long = ideal(&r, &["x^2 - y^3", "x*y - z^3", "x*z^3 - y^4"]);
    let a = standard_base_check(&short, &m, &ctx)?.verdict;
    let b = standard_base_check(&long, &m, &ctx)?.verdict;
    let oa = tangent_cone_agrees(&short, 8, &ctx)?;
    let ob = tangent_cone_agrees(&long, 8, &ctx)?;
    let ok = a == Verdict::False && b == Verdict::True && !oa && ob;
    Ok((
        ok,
        format!("two generators {a}, with x*z^3 - y^4 {b}; colength oracle up to degree 8: {oa}, {ob}"),
    ))
}

/// Counts for one randomized property: instances run, instances where the
/// statement's hypotheses held (so it made a claim), and violations.
#[derive(Default)]
struct Tally {
    run: usize,
    applied: usize,
    violations: Vec<String>,
}

impl Tally {
    fn line(&self, name: &str) -> String {
        format!("{name} {}/{} applied", self.applied, self.run)
    }
}

fn member_ideal(k: &Ideal<Q>, rng: &mut ChaCha8Rng) -> Ideal<Q> {
    Ideal::new(k.ring(), vec![random_member(k, rng)]).unwrap()
}

/// `J = (g h)` for two generators of `I` with `deg g + deg h ≤ 3`, so
/// `J ⊆ I^2`. Such pairs are usually refuted at `n = 2`.
fn square_pair(rng: &mut ChaCha8Rng) -> (Ideal<Q>, Ideal<Q>) {
    loop {
        let (_, i) = random_pair(rng);
        let g = &i.gens()[rng.gen_range(0..i.ngens())];
        let h = &i.gens()[rng.gen_range(0..i.ngens())];
        let gh = g.checked_mul(h).unwrap();
        if gh.total_degree().is_some_and(|d| d <= 3) {
            return (Ideal::new(i.ring(), vec![gh]).unwrap(), i);
        }
    }
}

/// `J1 = (x p) ⊆ J2 = I = (y) + I'` in `k[x,y,z]/(xy − x)`. There `y` acts
/// as `1` on `x`, so `J1 = J1 J2^m` and the nested hypotheses hold, which
/// no nonzero `J1` achieves in a domain.
fn nested_instance(rng: &mut ChaCha8Rng) -> (Ideal<Q>, Ideal<Q>, Ideal<Q>) {
    let (j, i) = random_pair(rng);
    let base = xyz();
    let x = ideal(&base, &["x"]);
    let p = random_member(&j, rng);
    let xp = x.gens()[0].checked_mul(&p).unwrap();
    let q = base.mod_out(&ideal(&base, &["x*y - x"]).gens().to_vec()).unwrap();
    let y = ideal(&base, &["y"]).gens()[0].clone();
    let mut i_gens = vec![y];
    i_gens.extend(i.gens().iter().cloned());
    let big = Ideal::new(&q, i_gens).unwrap();
    (Ideal::new(&q, vec![xp]).unwrap(), big.clone(), big)
}

/// Runs `body` on `CASES` seeded instances. `body` returns whether the
/// statement applied, or a violation message.
fn tally(seed: u64, mut body: impl FnMut(&mut ChaCha8Rng) -> Result<bool, String>) -> Tally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut t = Tally::default();
    for k in 0..CASES {
        t.run += 1;
        match body(&mut rng) {
            Ok(true) => t.applied += 1,
            Ok(false) => {}
            Err(e) => t.violations.push(format!("instance {k}: {e}")),
        }
    }
    t
}

/// `Ok(None)` for instances outside the statement's hypotheses or over the
/// time limit.
fn skip_precondition(r: Result<Certificate, AlgebraError>) -> Result<Option<Certificate>, String> {
    match r {
        Ok(c) => Ok(Some(c)),
        Err(AlgebraError::Precondition(_)) => Ok(None),
        Err(e) if e.is_resource_limit() => Ok(None),
        Err(e) => Err(e.to_string()),
    }
}

fn fact_holds(c: Option<Certificate>, name: &str) -> Result<bool, String> {
    match c.and_then(|c| c.fact(name)) {
        Some(true) => Ok(true),
        Some(false) => Err(format!("{name} is false")),
        None => Ok(false),
    }
}

fn properties() -> Outcome {
    let un = Ctx::unlimited();
    let mut report = vec![];
    let mut ok = true;
    let mut add = |name: &str, t: Tally| {
        if !t.violations.is_empty() {
            ok = false;
            report.push(format!("{name} violated: {}", t.violations.join("; ")));
        } else {
            report.push(t.line(name));
        }
    };

    add(
        "inclusion",
        tally(1, |rng| {
            let (j, i) = random_pair(rng);
            if inclusion_holds(&j, &i, 3, &un) {
                Ok(true)
            } else {
                Err("J I^{n-1} not inside J ∩ I^n".into())
            }
        }),
    );

    add(
        "witness soundness",
        tally(2, |rng| {
            let (j, i) = if rng.gen_bool(0.5) { square_pair(rng) } else { random_pair(rng) };
            let t = atf_truncated(&j, &i, 3, &case_ctx()).map_err(|e| e.to_string())?;
            let e = atf_exact(&j, &i, &case_ctx()).map_err(|e| e.to_string())?;
            if t.verdict == Verdict::False && e.verdict == Verdict::True {
                return Err("truncated refutes an exact TRUE".into());
            }
            let mut refuted = false;
            for c in [&t, &e] {
                if c.verdict == Verdict::False {
                    refuted = true;
                    if !witnesses_sound(&j, &i, c, &un) {
                        return Err(format!("unsound witness in {}", c.check));
                    }
                    if !verify_certificate::<Q>(c, &un).map_err(|e| e.to_string())?.is_empty() {
                        return Err(format!("{} certificate does not verify", c.check));
                    }
                }
            }
            Ok(refuted)
        }),
    );

    add(
        "standard base sufficiency",
        tally(3, |rng| {
            let (j, i) = random_pair(rng);
            let sb = standard_base_check(&j, &i, &case_ctx()).map_err(|e| e.to_string())?;
            if sb.verdict != Verdict::True || sb.fact("order_one") != Some(true) {
                return Ok(false);
            }
            match atf_exact(&j, &i, &case_ctx()).map_err(|e| e.to_string())?.verdict {
                Verdict::False => Err("order-one standard base but not torsion-free".into()),
                v => Ok(v == Verdict::True),
            }
        }),
    );

    add(
        "quotient transfer",
        tally(4, |rng| {
            let (j, i) = random_pair(rng);
            let a = random_member(&j, rng);
            if atf_exact(&j, &i, &case_ctx()).map_err(|e| e.to_string())?.verdict != Verdict::True {
                return Ok(false);
            }
            let (jq, iq) = modulo(&j, &i, &[a]);
            match atf_truncated(&jq, &iq, 3, &case_ctx()).map_err(|e| e.to_string())?.verdict {
                Verdict::False => Err("torsion lost modulo an element of J".into()),
                v => Ok(v == Verdict::True),
            }
        }),
    );

    add(
        "variable adjunction",
        tally(5, |rng| {
            let (j, i) = random_pair(rng);
            let before = atf_exact(&j, &i, &case_ctx()).map_err(|e| e.to_string())?.verdict;
            let (jw, iw) = adjoin_variable(&j, &i);
            let after = atf_exact(&jw, &iw, &case_ctx()).map_err(|e| e.to_string())?.verdict;
            if before == Verdict::Undecided || after == Verdict::Undecided {
                return Ok(false);
            }
            if before != after {
                return Err(format!("{before} before, {after} after"));
            }
            Ok(true)
        }),
    );

    add(
        "sum",
        tally(6, |rng| {
            let (j1, i) = random_pair(rng);
            let j2 = member_ideal(&i, rng);
            fact_holds(skip_precondition(sum_criterion(&j1, &j2, &i, &case_ctx()))?, "sides_agree")
        }),
    );

    add(
        "residual",
        tally(7, |rng| {
            let (j, i) = random_pair(rng);
            let r = i.ring();
            let split = rng.gen_range(1..=i.ngens());
            let j1 = Ideal::new(r, i.gens()[..split].to_vec()).unwrap();
            let j2 = if split < i.ngens() {
                Ideal::new(r, i.gens()[split..].to_vec()).unwrap()
            } else {
                member_ideal(&j, rng)
            };
            fact_holds(skip_precondition(residual_criterion(&j1, &j2, 3, &case_ctx()))?, "tracks_agree")
        }),
    );

    add(
        "perturbation",
        tally(8, |rng| {
            let (j1, i) = random_pair(rng);
            let sq = i.power(2, &un).unwrap();
            let shifted: Vec<Polynomial<Q>> = j1
                .gens()
                .iter()
                .map(|f| f.checked_add(&random_member(&sq, rng)).unwrap())
                .collect();
            if shifted.iter().any(|g| g.is_zero()) {
                return Ok(false);
            }
            let j2 = Ideal::new(i.ring(), shifted).unwrap();
            fact_holds(skip_precondition(perturbation_check(&j1, &j2, &i, 2, &case_ctx()))?, "consistent")
        }),
    );

    add(
        "nested, random",
        tally(9, |rng| {
            let (j2, i) = random_pair(rng);
            let j1 = member_ideal(&j2, rng);
            let c = skip_precondition(nested_sufficiency(&j1, &j2, &i, 3, &case_ctx()))?;
            fact_holds(c, "conclusion_confirmed")
        }),
    );

    add(
        "nested, quotient family",
        tally(11, |rng| {
            let (j1, j2, i) = nested_instance(rng);
            let c = skip_precondition(nested_sufficiency(&j1, &j2, &i, 3, &case_ctx()))?;
            fact_holds(c, "conclusion_confirmed")
        }),
    );

    add(
        "transfer",
        tally(10, |rng| {
            let (j1, i) = random_pair(rng);
            let j2 = member_ideal(&i, rng);
            let c = skip_precondition(transfer_criterion(&j1, &j2, &i, &case_ctx()))?;
            fact_holds(c, "conclusion_confirmed")
        }),
    );

    let mut corpus_ok = 0;
    let pairs = corpus_pairs();
    for p in &pairs {
        let e = atf_exact(&p.j, &p.i, &un)?;
        let (jw, iw) = adjoin_variable(&p.j, &p.i);
        let good = inclusion_holds(&p.j, &p.i, 3, &un)
            && witnesses_sound(&p.j, &p.i, &e, &un)
            && p.atf.is_none_or(|a| e.verdict == Verdict::from(a))
            && atf_exact(&jw, &iw, &un)?.verdict == e.verdict;
        if good {
            corpus_ok += 1;
        } else {
            ok = false;
            report.push(format!("corpus pair {} fails", p.name));
        }
    }
    report.push(format!("corpus pairs {corpus_ok}/{}", pairs.len()));
    Ok((ok, report.join(", ")))
}

struct Criterion {
    id: &'static str,
    title: &'static str,
    limit: Option<Duration>,
    /// The check is expected to fail; see the note printed with it.
    known_red: Option<&'static str>,
    run: fn() -> Outcome,
}

const CRITERIA: &[Criterion] = &[
    Criterion { id: "1", title: "monomial curve (1,1)", limit: Some(Duration::from_secs(60)), known_red: None, run: curve_one_one },
    Criterion { id: "2", title: "monomial curve grid", limit: Some(Duration::from_secs(600)), known_red: None, run: curve_grid },
    Criterion {
        id: "3a",
        title: "five points, displayed matrix",
        limit: None,
        known_red: Some("the displayed generators vanish at (2,3,1), not at the displayed fifth column (-1,2,1)"),
        run: points_literal,
    },
    Criterion { id: "3b", title: "five points", limit: None, known_red: None, run: points_checks },
    Criterion { id: "4", title: "monomial quartet", limit: None, known_red: None, run: quartet },
    Criterion { id: "5", title: "generic 2×3 matrix", limit: None, known_red: None, run: generic_matrix },
    Criterion { id: "6", title: "squarefree Veronese", limit: None, known_red: None, run: veronese },
    Criterion { id: "7", title: "quadrics, strong", limit: None, known_red: None, run: quadrics },
    Criterion { id: "8", title: "standard bases", limit: None, known_red: None, run: standard_bases },
    Criterion { id: "9", title: "property suites", limit: Some(Duration::from_secs(900)), known_red: None, run: properties },
];

fn main() {
    let mut unexpected = 0;
    for c in CRITERIA {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(c.run));
        let secs = start.elapsed();
        let (mut pass, mut detail) = match result {
            Ok(Ok((p, d))) => (p, d),
            Ok(Err(e)) => (false, format!("error: {e}")),
            Err(_) => (false, "panicked".to_string()),
        };
        if let Some(limit) = c.limit {
            if secs > limit {
                pass = false;
                detail.push_str(&format!("; over the {}s limit", limit.as_secs()));
            }
        }
        let status = if pass { "PASS" } else { "FAIL" };
        let mut line = format!("{status} criterion {:<3} {} ({:.1}s): {detail}", c.id, c.title, secs.as_secs_f64());
        match (c.known_red, pass) {
            (Some(why), false) => line.push_str(&format!(" [known red: {why}]")),
            (Some(_), true) => {
                unexpected += 1;
                line.push_str(" [listed as known red but passed]");
            }
            (None, false) => unexpected += 1,
            (None, true) => {}
        }
        println!("{line}");
    }
    let red = CRITERIA.iter().filter(|c| c.known_red.is_some()).count();
    println!(
        "{} checks, {unexpected} unexpected, {red} known red",
        CRITERIA.len()
    );
    if unexpected > 0 {
        std::process::exit(1);
    }
}
