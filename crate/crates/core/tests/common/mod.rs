//! Shared fixtures: the worked example pairs and small random pairs in
//! three variables.

#![allow(dead_code)]

use std::time::Duration;

use atf_core::families::{jacobian_ideal, monomial_curve, squarefree_veronese};
use atf_core::{
    parse_polynomial, parse_polynomials, Certificate, Ctx, Field, Ideal, Monomial, MonomialOrder, PolyRing, Polynomial, Rational,
    RingSpec,
};
use rand::Rng;

pub type Q = Rational;

/// Per-instance time limit for randomized checks; running out is reported
/// as UNDECIDED and the instance is skipped.
pub const CASE_LIMIT: Duration = Duration::from_secs(20);

pub fn case_ctx() -> Ctx {
    Ctx::unlimited().with_time_limit(CASE_LIMIT)
}

pub fn ring(vars: &[&str]) -> RingSpec<Q> {
    RingSpec::polynomial(PolyRing::new::<Q>(vars, MonomialOrder::DegRevLex).unwrap())
}

pub fn xyz() -> RingSpec<Q> {
    ring(&["x", "y", "z"])
}

pub fn ideal(r: &RingSpec<Q>, gens: &[&str]) -> Ideal<Q> {
    Ideal::new(r, parse_polynomials(gens, r.base()).unwrap()).unwrap()
}

pub struct Pair {
    pub name: &'static str,
    pub j: Ideal<Q>,
    pub i: Ideal<Q>,
    /// Whether the pair is torsion-free, when that is part of the example.
    pub atf: Option<bool>,
}

/// The worked examples that are cheap enough to run repeatedly.
pub fn corpus_pairs() -> Vec<Pair> {
    let ctx = Ctx::unlimited();
    let r = xyz();
    let max_sq = ideal(&r, &["x^2", "x*y", "x*z", "y^2", "y*z", "z^2"]);
    let mut out = vec![];
    for (name, g, atf) in [
        ("quartet xy", "x*y", true),
        ("quartet yz", "y*z", true),
        ("quartet xy2z", "x*y^2*z", false),
        ("quartet xyz", "x*y*z", false),
    ] {
        out.push(Pair {
            name,
            j: ideal(&r, &[g]),
            i: max_sq.clone(),
            atf: Some(atf),
        });
    }
    for (name, p, q) in [("curve (1,1)", 1, 1), ("curve (1,2)", 1, 2)] {
        let (j, i) = monomial_curve::<Q>(p, q).unwrap();
        out.push(Pair { name, j, i, atf: Some(true) });
    }
    let (j, i) = squarefree_veronese::<Q>(3, 2).unwrap();
    out.push(Pair {
        name: "veronese (3,2)",
        j,
        i,
        atf: Some(true),
    });
    let q = ring(&["x1", "x2", "x3"]);
    out.push(Pair {
        name: "quadrics",
        j: ideal(&q, &["x1*x2", "x1*x3", "x2*x3"]),
        i: ideal(&q, &["x1*x2", "x1*x3", "x2*x3", "x1^2", "x2^2", "x3^2"]),
        atf: Some(true),
    });
    let m = ideal(&r, &["x", "y", "z"]);
    out.push(Pair {
        name: "space curve in the maximal ideal",
        j: ideal(&r, &["x^2 - y^3", "x*y - z^3"]),
        i: m.clone(),
        atf: None,
    });
    out.push(Pair {
        name: "completed space curve",
        j: ideal(&r, &["x^2 - y^3", "x*y - z^3", "x*z^3 - y^4"]),
        i: m,
        atf: None,
    });
    let cusp = ideal(&ring(&["x", "y"]), &["y^2 - x^3"]);
    let i = jacobian_ideal(&cusp, &ctx).unwrap();
    out.push(Pair {
        name: "cusp in its Jacobian ideal",
        j: cusp,
        i,
        atf: None,
    });
    out
}

/// A term as a coefficient and an exponent vector in `x, y, z`.
pub type TermData = (i64, [u32; 3]);

pub fn poly(r: &RingSpec<Q>, terms: &[TermData]) -> Polynomial<Q> {
    let mut p = Polynomial::zero(r.base());
    for &(c, e) in terms {
        let m = Monomial::from_exponents(&e).unwrap();
        p = p
            .checked_add(&Polynomial::monomial(r.base(), m, Q::from_i64(c)))
            .unwrap();
    }
    p
}

/// `I` from its generators and `J` from multiplier rows: the k-th
/// generator of `J` is `Σ_l rows[k][l] · I_l`, so `J ⊆ I` by
/// construction. Zero generators are dropped; `None` when `I` or `J` ends
/// up without generators.
pub fn pair_from_data(
    r: &RingSpec<Q>,
    i_data: &[Vec<TermData>],
    j_rows: &[Vec<Vec<TermData>>],
) -> Option<(Ideal<Q>, Ideal<Q>)> {
    let igens: Vec<Polynomial<Q>> = i_data
        .iter()
        .map(|t| poly(r, t))
        .filter(|p| !p.is_zero() && !p.is_constant())
        .collect();
    if igens.is_empty() {
        return None;
    }
    let mut jgens = Vec::new();
    for row in j_rows {
        let mut g = Polynomial::zero(r.base());
        for (a, f) in row.iter().zip(&igens) {
            g = g.checked_add(&poly(r, a).checked_mul(f).unwrap()).unwrap();
        }
        if !g.is_zero() {
            jgens.push(g);
        }
    }
    if jgens.is_empty() {
        return None;
    }
    Some((Ideal::new(r, jgens).unwrap(), Ideal::new(r, igens).unwrap()))
}

fn random_term(rng: &mut impl Rng, max_deg: u32) -> TermData {
    let mut c = rng.gen_range(-3i64..=3);
    if c == 0 {
        c = 1;
    }
    let d = rng.gen_range(0..=max_deg);
    let mut e = [0u32; 3];
    for _ in 0..d {
        e[rng.gen_range(0..3)] += 1;
    }
    (c, e)
}

fn random_poly(rng: &mut impl Rng, max_terms: usize, max_deg: u32) -> Vec<TermData> {
    let n = rng.gen_range(1..=max_terms);
    (0..n).map(|_| random_term(rng, max_deg)).collect()
}

/// Generators of `I` of degree at most 2 and multipliers of degree at
/// most 1, so every generator has degree at most 3.
pub fn random_data(rng: &mut impl Rng) -> (Vec<Vec<TermData>>, Vec<Vec<Vec<TermData>>>) {
    let ni = rng.gen_range(1..=3);
    let i_data: Vec<Vec<TermData>> = (0..ni)
        .map(|_| {
            let mut p = random_poly(rng, 2, 2);
            // keep generators nonconstant
            if p.iter().all(|t| t.1 == [0, 0, 0]) {
                p.push((1, [1, 0, 0]));
            }
            p
        })
        .collect();
    let nj = rng.gen_range(1..=2);
    let j_rows = (0..nj)
        .map(|_| (0..ni).map(|_| random_poly(rng, 1, 1)).collect())
        .collect();
    (i_data, j_rows)
}

pub fn random_pair(rng: &mut impl Rng) -> (Ideal<Q>, Ideal<Q>) {
    let r = xyz();
    loop {
        let (i_data, j_rows) = random_data(rng);
        if let Some(p) = pair_from_data(&r, &i_data, &j_rows) {
            return p;
        }
    }
}

/// A random element of `J` with multipliers of degree at most 1.
pub fn random_member(j: &Ideal<Q>, rng: &mut impl Rng) -> Polynomial<Q> {
    let base = j.base().clone();
    let n = base.nvars();
    loop {
        let mut g = Polynomial::zero(&base);
        for f in j.gens() {
            let mut e = vec![0u32; n];
            if rng.gen_bool(0.5) {
                e[rng.gen_range(0..n)] = 1;
            }
            let c = Q::from_i64(rng.gen_range(-3i64..=3));
            let a = Polynomial::monomial(&base, Monomial::from_exponents(&e).unwrap(), c);
            g = g.checked_add(&a.checked_mul(f).unwrap()).unwrap();
        }
        if !g.is_zero() {
            return g;
        }
    }
}

/// The same pair after adjoining a fresh variable.
pub fn adjoin_variable(j: &Ideal<Q>, i: &Ideal<Q>) -> (Ideal<Q>, Ideal<Q>) {
    let (base, _) = j.base().extend(&["w".to_string()]).unwrap();
    let spec = RingSpec::polynomial(base.clone());
    let lift = |k: &Ideal<Q>| {
        Ideal::new(&spec, k.gens().iter().map(|g| g.embed_prefix(&base)).collect()).unwrap()
    };
    (lift(j), lift(i))
}

/// The pair in `R / a`.
pub fn modulo(j: &Ideal<Q>, i: &Ideal<Q>, a: &[Polynomial<Q>]) -> (Ideal<Q>, Ideal<Q>) {
    let q = j.ring().mod_out(a).unwrap();
    (
        Ideal::new(&q, j.gens().to_vec()).unwrap(),
        Ideal::new(&q, i.gens().to_vec()).unwrap(),
    )
}

/// `J I^{n−1} ⊆ J ∩ I^n`, tested as membership of every generator of the
/// product in `J` and in `I^n`.
pub fn inclusion_holds(j: &Ideal<Q>, i: &Ideal<Q>, max_n: u32, ctx: &Ctx) -> bool {
    (1..=max_n).all(|n| {
        let lower = j.product(&i.power(n - 1, ctx).unwrap(), ctx).unwrap();
        let power = i.power(n, ctx).unwrap();
        lower
            .gens()
            .iter()
            .all(|g| j.contains(g, ctx).unwrap() && power.contains(g, ctx).unwrap())
    })
}

/// Independent re-check of every untracked witness of a `FALSE` verdict.
pub fn witnesses_sound(j: &Ideal<Q>, i: &Ideal<Q>, cert: &Certificate, ctx: &Ctx) -> bool {
    cert.evidence
        .iter()
        .filter(|e| e.track.is_none())
        .filter_map(|e| e.witness.as_deref().map(|w| (e.n, w)))
        .all(|(n, w)| {
            let w = parse_polynomial::<Q>(w, j.base()).unwrap();
            let lower = j.product(&i.power(n - 1, ctx).unwrap(), ctx).unwrap();
            j.contains(&w, ctx).unwrap()
                && i.power(n, ctx).unwrap().contains(&w, ctx).unwrap()
                && !lower.contains(&w, ctx).unwrap()
        })
}
