//! Parametric ideal families and Jacobian ideals.

use std::collections::HashSet;
use std::sync::Arc;

use num::bigint::BigInt;
use num::integer::Integer;
use serde::{Deserialize, Serialize};

use crate::context::Ctx;
use crate::error::{AlgebraError, Result};
use crate::field::Field;
use crate::groebner::Ideal;
use crate::monomial::Monomial;
use crate::order::MonomialOrder;
use crate::parse::parse_polynomial;
use crate::poly::Polynomial;
use crate::ring::{PolyRing, RingSpec};

fn invalid(msg: impl Into<String>) -> AlgebraError {
    AlgebraError::InvalidFamily(msg.into())
}

fn mono<F: Field>(ring: &Arc<PolyRing>, exps: &[u32]) -> Result<Polynomial<F>> {
    Ok(Polynomial::monomial(ring, Monomial::from_exponents(exps)?, F::one()))
}

/// Exponents `(2q+1, 2q+p+1, 2q+2p+1)` of the curve `u ↦ (u^a, u^b, u^c)`.
pub fn monomial_curve_exponents(p: u32, q: u32) -> [u32; 3] {
    [2 * q + 1, 2 * q + p + 1, 2 * q + 2 * p + 1]
}

/// Rejects parameters for which the closed forms have negative exponents
/// or the exponents share a factor.
pub fn check_monomial_curve(p: u32, q: u32) -> Result<()> {
    if q == 0 {
        return Err(invalid("monomial curve needs q >= 1 (z^(q-1) occurs in I)"));
    }
    let n = monomial_curve_exponents(p, q);
    let g = n[0].gcd(&n[1]).gcd(&n[2]);
    if g != 1 {
        return Err(invalid(format!(
            "monomial curve exponents {n:?} have gcd {g}, not 1"
        )));
    }
    Ok(())
}

/// Closed forms of the curve ideal `J` and of its Jacobian ideal, in
/// `k[x, y, z]`.
pub fn monomial_curve<F: Field>(p: u32, q: u32) -> Result<(Ideal<F>, Ideal<F>)> {
    check_monomial_curve(p, q)?;
    let ring = RingSpec::polynomial(PolyRing::new::<F>(&["x", "y", "z"], MonomialOrder::DegRevLex)?);
    let r = ring.base();
    let m = |e: [u32; 3]| mono::<F>(r, &e);
    let s = p + q;
    let f1 = m([s + 1, 0, 0])?.checked_sub(&m([0, 1, q])?)?;
    let f2 = m([1, 0, 1])?.checked_sub(&m([0, 2, 0])?)?;
    let f3 = m([s, 1, 0])?.checked_sub(&m([0, 0, q + 1])?)?;
    let j = Ideal::new(&ring, vec![f1, f2.clone(), f3])?;
    let i = Ideal::new(
        &ring,
        vec![
            f2,
            m([s + 1, 0, 0])?,
            m([s, 1, 0])?,
            m([s - 1, 2, 0])?,
            m([0, 1, q])?,
            m([0, 2, q - 1])?,
            m([0, 0, q + 1])?,
        ],
    )?;
    Ok((j, i))
}

/// Determinant by Laplace expansion along the first row.
pub fn determinant<F: Field>(m: &[Vec<Polynomial<F>>]) -> Result<Polynomial<F>> {
    let n = m.len();
    assert!(n > 0 && m.iter().all(|r| r.len() == n), "square matrix");
    if n == 1 {
        return Ok(m[0][0].clone());
    }
    let ring = m[0][0].ring().clone();
    let mut acc = Polynomial::zero(&ring);
    for c in 0..n {
        if m[0][c].is_zero() {
            continue;
        }
        let sub: Vec<Vec<Polynomial<F>>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != c)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let term = m[0][c].checked_mul(&determinant(&sub)?)?;
        acc = if c % 2 == 0 {
            acc.checked_add(&term)?
        } else {
            acc.checked_sub(&term)?
        };
    }
    Ok(acc)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// All nonzero `r × r` minors, in row-subset-major order.
pub fn minors<F: Field>(m: &[Vec<Polynomial<F>>], r: usize) -> Result<Vec<Polynomial<F>>> {
    let rows = m.len();
    let cols = m.first().map_or(0, |row| row.len());
    let mut out = Vec::new();
    if r == 0 || r > rows || r > cols {
        return Ok(out);
    }
    for rs in subsets(rows, r) {
        for cs in subsets(cols, r) {
            let sub: Vec<Vec<Polynomial<F>>> = rs
                .iter()
                .map(|&i| cs.iter().map(|&j| m[i][j].clone()).collect())
                .collect();
            let d = determinant(&sub)?;
            if !d.is_zero() {
                out.push(d);
            }
        }
    }
    Ok(out)
}

/// Rows are generators, columns are variables.
pub fn jacobian_matrix<F: Field>(gens: &[Polynomial<F>]) -> Vec<Vec<Polynomial<F>>> {
    gens.iter()
        .map(|g| (0..g.ring().nvars()).map(|i| g.derivative(i)).collect())
        .collect()
}

/// `J + I_r(Θ)` with `r = ht J` and `Θ` the Jacobian matrix of the
/// generators of `J`.
///
/// The generators of `J` come first. Minors are kept in order, skipping
/// those already in the ideal generated so far.
pub fn jacobian_ideal<F: Field>(j: &Ideal<F>, ctx: &Ctx) -> Result<Ideal<F>> {
    if j.ring().is_quotient() {
        return Err(AlgebraError::Precondition(
            "Jacobian ideals are taken in polynomial rings".into(),
        ));
    }
    let p = F::characteristic();
    let maxdeg = j.gens().iter().filter_map(|g| g.total_degree()).max().unwrap_or(0);
    if p != 0 && p <= maxdeg as u64 {
        return Err(AlgebraError::Precondition(format!(
            "characteristic {p} does not exceed the generator degree {maxdeg}"
        )));
    }
    if j.is_zero(ctx)? {
        return Err(AlgebraError::Precondition("Jacobian ideal of the zero ideal".into()));
    }
    let r = j.height(ctx)?;
    if r <= 0 {
        return Err(AlgebraError::Precondition("Jacobian ideal of a height-0 ideal".into()));
    }
    let theta = jacobian_matrix(j.gens());
    let ms = minors(&theta, r as usize)?;
    let mut kept = j.gens().to_vec();
    let mut seen: HashSet<Vec<(Monomial, F)>> = HashSet::new();
    for m in ms {
        if !seen.insert(m.monic().terms().to_vec()) {
            continue;
        }
        let so_far = Ideal::new(j.ring(), kept.clone())?;
        if !so_far.contains(&m, ctx)? {
            kept.push(m);
        }
    }
    Ideal::new(j.ring(), kept)
}

/// Squarefree monomials of degree `r` in `x_0..x_n`, and the ideal
/// `J + (x_i^r x_j^r : i < j)`.
pub fn squarefree_veronese<F: Field>(n: u32, r: u32) -> Result<(Ideal<F>, Ideal<F>)> {
    if r < 2 || r > n {
        return Err(invalid(format!("squarefree Veronese needs 2 <= r <= n, got n={n}, r={r}")));
    }
    let names: Vec<String> = (0..=n).map(|i| format!("x{i}")).collect();
    let ring = RingSpec::polynomial(PolyRing::from_names::<F>(names, MonomialOrder::DegRevLex)?);
    let nv = (n + 1) as usize;
    let mut jg = Vec::new();
    for s in subsets(nv, r as usize) {
        let mut e = vec![0u32; nv];
        for i in s {
            e[i] = 1;
        }
        jg.push(mono::<F>(ring.base(), &e)?);
    }
    let mut ig = jg.clone();
    for s in subsets(nv, 2) {
        let mut e = vec![0u32; nv];
        e[s[0]] = r;
        e[s[1]] = r;
        ig.push(mono::<F>(ring.base(), &e)?);
    }
    Ok((Ideal::new(&ring, jg)?, Ideal::new(&ring, ig)?))
}

/// The 2×2 minors of the generic `2 × n` matrix with rows `x_1..x_n` and
/// `x_{n+1}..x_{2n}`.
pub fn generic_matrix_minors<F: Field>(n: u32) -> Result<Ideal<F>> {
    if n < 3 {
        return Err(invalid(format!("generic matrix needs n >= 3, got {n}")));
    }
    let names: Vec<String> = (1..=2 * n).map(|i| format!("x{i}")).collect();
    let ring = RingSpec::polynomial(PolyRing::from_names::<F>(names, MonomialOrder::DegRevLex)?);
    let b = ring.base();
    let n = n as usize;
    let row = |r: usize| -> Vec<Polynomial<F>> {
        (0..n).map(|c| Polynomial::var(b, r * n + c)).collect()
    };
    let m = vec![row(0), row(1)];
    Ideal::new(&ring, minors(&m, 2)?)
}

/// Linear forms vanishing at a point of `P^2`: two independent ones.
fn point_ideal<F: Field>(ring: &Arc<PolyRing>, c: &[F; 3]) -> Result<Vec<Polynomial<F>>> {
    let v = |i: usize| Polynomial::var(ring, i);
    let lin = |a: &F, i: usize, b: &F, j: usize| -> Result<Polynomial<F>> {
        v(i).scale(a).checked_sub(&v(j).scale(b))
    };
    if !c[0].is_zero() {
        // c0*y - c1*x, c0*z - c2*x
        Ok(vec![lin(&c[0], 1, &c[1], 0)?, lin(&c[0], 2, &c[2], 0)?])
    } else if !c[1].is_zero() {
        Ok(vec![v(0), lin(&c[1], 2, &c[2], 1)?])
    } else if !c[2].is_zero() {
        Ok(vec![v(0), v(1)])
    } else {
        Err(invalid("zero column does not define a projective point"))
    }
}

/// Vanishing ideal in `k[x, y, z]` of the points given by columns.
pub fn points_ideal<F: Field>(columns: &[[F; 3]], ctx: &Ctx) -> Result<Ideal<F>> {
    if columns.is_empty() {
        return Err(invalid("no points"));
    }
    let ring = RingSpec::polynomial(PolyRing::new::<F>(&["x", "y", "z"], MonomialOrder::DegRevLex)?);
    let mut acc: Option<Ideal<F>> = None;
    for c in columns {
        let p = Ideal::new(&ring, point_ideal(ring.base(), c)?)?;
        acc = Some(match acc {
            None => p,
            Some(a) => a.intersect(&p, ctx)?,
        });
    }
    acc.expect("nonempty").with_basis_gens(ctx)
}

/// Gradient ideal of the product of linear forms. Partials that vanish
/// identically are dropped and reported.
pub fn arrangement_gradient<F: Field>(
    forms: &[Polynomial<F>],
) -> Result<(Ideal<F>, Vec<String>)> {
    let Some(first) = forms.first() else {
        return Err(invalid("no linear forms"));
    };
    let ring = first.ring().clone();
    for (k, l) in forms.iter().enumerate() {
        if !l.ring().same_variables(&ring) {
            return Err(AlgebraError::RingMismatch);
        }
        if l.is_zero() || l.total_degree() != Some(1) || l.low_degree() != Some(1) {
            return Err(invalid(format!("form {} is not a nonzero linear form: {l}", k + 1)));
        }
    }
    for a in 0..forms.len() {
        for b in a + 1..forms.len() {
            if forms[a].monic() == forms[b].monic() {
                return Err(invalid(format!(
                    "forms {} and {} are proportional, so the divisor is not reduced",
                    a + 1,
                    b + 1
                )));
            }
        }
    }
    let mut f = Polynomial::one(&ring);
    for l in forms {
        f = f.checked_mul(&l.with_ring(&ring))?;
    }
    let mut gens = Vec::new();
    let mut warnings = Vec::new();
    for i in 0..ring.nvars() {
        let d = f.derivative(i);
        if d.is_zero() {
            warnings.push(format!(
                "partial derivative by {} vanishes identically",
                ring.var_name(i)
            ));
        } else {
            gens.push(d);
        }
    }
    Ok((Ideal::new(&RingSpec::polynomial(ring), gens)?, warnings))
}

/// A rational number written as an integer or as `"a/b"`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Scalar {
    Int(i64),
    Text(String),
}

impl Scalar {
    pub fn to_field<F: Field>(&self) -> Result<F> {
        match self {
            Scalar::Int(v) => Ok(F::from_i64(*v)),
            Scalar::Text(s) => {
                let (n, d) = match s.split_once('/') {
                    Some((n, d)) => (n.trim(), d.trim()),
                    None => (s.trim(), "1"),
                };
                let n: BigInt = n.parse().map_err(|_| invalid(format!("bad number `{s}`")))?;
                let d: BigInt = d.parse().map_err(|_| invalid(format!("bad number `{s}`")))?;
                F::from_fraction(&n, &d).ok_or_else(|| invalid(format!("bad number `{s}`")))
            }
        }
    }
}

/// A family member, as it appears in job files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    MonomialCurve { p: u32, q: u32 },
    SquarefreeVeronese { n: u32, r: u32 },
    GenericMatrix { n: u32 },
    /// Columns of a `3 × k` coordinate matrix.
    Points { columns: Vec<[Scalar; 3]> },
    /// Linear forms in the listed variables.
    Arrangement { vars: Vec<String>, forms: Vec<String> },
}

/// A constructed family member. `i` is the closed-form companion ideal when
/// the family has one.
#[derive(Clone, Debug)]
pub struct FamilyInstance<F: Field> {
    pub j: Ideal<F>,
    pub i: Option<Ideal<F>>,
    pub notes: Vec<String>,
}

impl FamilySpec {
    pub fn build<F: Field>(&self, ctx: &Ctx) -> Result<FamilyInstance<F>> {
        match self {
            FamilySpec::MonomialCurve { p, q } => {
                let (j, i) = monomial_curve(*p, *q)?;
                Ok(FamilyInstance {
                    j,
                    i: Some(i),
                    notes: vec![],
                })
            }
            FamilySpec::SquarefreeVeronese { n, r } => {
                let (j, i) = squarefree_veronese(*n, *r)?;
                let h = j.height(ctx)?;
                let mut notes = vec![];
                if h != i64::from(*r) - 1 {
                    notes.push(format!("ht J = {h}, not r - 1 = {}", r - 1));
                }
                Ok(FamilyInstance {
                    j,
                    i: Some(i),
                    notes,
                })
            }
            FamilySpec::GenericMatrix { n } => Ok(FamilyInstance {
                j: generic_matrix_minors(*n)?,
                i: None,
                notes: vec![],
            }),
            FamilySpec::Points { columns } => {
                let cols = columns
                    .iter()
                    .map(|c| Ok([c[0].to_field()?, c[1].to_field()?, c[2].to_field()?]))
                    .collect::<Result<Vec<[F; 3]>>>()?;
                Ok(FamilyInstance {
                    j: points_ideal(&cols, ctx)?,
                    i: None,
                    notes: vec![],
                })
            }
            FamilySpec::Arrangement { vars, forms } => {
                let ring = PolyRing::from_names::<F>(vars.clone(), MonomialOrder::DegRevLex)?;
                let fs = forms
                    .iter()
                    .map(|s| parse_polynomial(s, &ring))
                    .collect::<Result<Vec<_>>>()?;
                let (j, notes) = arrangement_gradient(&fs)?;
                Ok(FamilyInstance { j, i: None, notes })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Rational;
    use crate::groebner::ring_map_kernel;
    use crate::parse::parse_polynomials;

    type Q = Rational;

    fn ideal(r: &RingSpec<Q>, s: &[&str]) -> Ideal<Q> {
        Ideal::new(r, parse_polynomials(s, r.base()).unwrap()).unwrap()
    }

    #[test]
    fn degenerate_curves_rejected() {
        assert!(monomial_curve::<Q>(0, 0).is_err());
        assert!(monomial_curve::<Q>(1, 0).is_err());
        assert!(monomial_curve::<Q>(0, 1).is_err());
        assert!(monomial_curve::<Q>(3, 1).is_err());
        for (p, q) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            assert!(monomial_curve::<Q>(p, q).is_ok());
        }
    }

    #[test]
    fn curve_one_one() {
        let ctx = Ctx::unlimited();
        let (j, i) = monomial_curve::<Q>(1, 1).unwrap();
        let r = j.ring().clone();
        assert!(j.is_equal(&ideal(&r, &["x^3 - y*z", "x*z - y^2", "x^2*y - z^2"]), &ctx).unwrap());
        let closed = ideal(&r, &["x*z - y^2", "x^3", "x^2*y", "x*y^2", "y*z", "y^2", "z^2"]);
        assert!(i.is_equal(&closed, &ctx).unwrap());
        let u = RingSpec::polynomial(PolyRing::new::<Q>(&["u"], MonomialOrder::DegRevLex).unwrap());
        let ims = parse_polynomials(&["u^3", "u^4", "u^5"], u.base()).unwrap();
        assert!(ring_map_kernel(&r, &u, &ims, &ctx).unwrap().is_equal(&j, &ctx).unwrap());
        assert!(jacobian_ideal(&j, &ctx).unwrap().is_equal(&i, &ctx).unwrap());
    }

    #[test]
    fn jacobian_examples() {
        let ctx = Ctx::unlimited();
        let r = RingSpec::polynomial(PolyRing::new::<Q>(&["x", "y", "z"], MonomialOrder::DegRevLex).unwrap());
        let j = ideal(&r, &["y*z", "x*z", "x*y"]);
        let m2 = ideal(&r, &["x^2", "x*y", "x*z", "y^2", "y*z", "z^2"]);
        assert!(jacobian_ideal(&j, &ctx).unwrap().is_equal(&m2, &ctx).unwrap());
        let f = ideal(&r, &["x^3 + y^2*z"]);
        let expected = ideal(&r, &["x^3 + y^2*z", "3*x^2", "2*y*z", "y^2"]);
        assert!(jacobian_ideal(&f, &ctx).unwrap().is_equal(&expected, &ctx).unwrap());
        assert!(jacobian_ideal(&Ideal::zero(&r), &ctx).is_err());
    }

    #[test]
    fn veronese_shapes() {
        let ctx = Ctx::unlimited();
        let (j, i) = squarefree_veronese::<Q>(3, 3).unwrap();
        assert_eq!(j.ngens(), 4);
        assert_eq!(i.ngens(), 10);
        let (j, _) = squarefree_veronese::<Q>(2, 2).unwrap();
        assert_eq!(
            j.gens().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            vec!["x0*x1", "x0*x2", "x1*x2"]
        );
        let (j, i) = squarefree_veronese::<Q>(3, 2).unwrap();
        assert!(j.is_equal(&i, &ctx).unwrap());
        // squarefree degree-r monomials in n + 1 variables have height n - r + 2
        for (n, r) in [(2, 2), (3, 2), (3, 3), (4, 3)] {
            let (j, _) = squarefree_veronese::<Q>(n, r).unwrap();
            assert_eq!(j.height(&ctx).unwrap(), i64::from(n - r + 2), "({n},{r})");
        }
        let spec = FamilySpec::SquarefreeVeronese { n: 3, r: 3 };
        assert!(spec.build::<Q>(&ctx).unwrap().notes.is_empty());
        let spec = FamilySpec::SquarefreeVeronese { n: 3, r: 2 };
        assert_eq!(spec.build::<Q>(&ctx).unwrap().notes, vec!["ht J = 3, not r - 1 = 1".to_string()]);
        assert!(squarefree_veronese::<Q>(3, 4).is_err());
        assert!(squarefree_veronese::<Q>(3, 1).is_err());
    }

    #[test]
    fn generic_matrix() {
        let ctx = Ctx::unlimited();
        let j = generic_matrix_minors::<Q>(3).unwrap();
        let expected = parse_polynomials(
            &["x1*x5 - x2*x4", "x1*x6 - x3*x4", "x2*x6 - x3*x5"],
            j.base(),
        )
        .unwrap();
        assert_eq!(j.gens(), &expected[..]);
        assert_eq!(j.height(&ctx).unwrap(), 2);
        assert!(generic_matrix_minors::<Q>(2).is_err());
    }

    #[test]
    fn points() {
        let ctx = Ctx::unlimited();
        let q = |v: i64| Q::from_integer(v.into());
        let one = points_ideal(&[[q(1), q(0), q(0)]], &ctx).unwrap();
        assert!(one.is_equal(&ideal(one.ring(), &["y", "z"]), &ctx).unwrap());
        let two = points_ideal(&[[q(1), q(0), q(0)], [q(0), q(1), q(0)]], &ctx).unwrap();
        assert!(two.is_equal(&ideal(two.ring(), &["z", "x*y"]), &ctx).unwrap());
        assert!(points_ideal(&[[q(0), q(0), q(0)]], &ctx).is_err());
    }

    #[test]
    fn arrangements() {
        let r = PolyRing::new::<Q>(&["x", "y", "z"], MonomialOrder::DegRevLex).unwrap();
        let fs: Vec<Polynomial<Q>> = parse_polynomials(&["x", "y", "z"], &r).unwrap();
        let (j, notes) = arrangement_gradient(&fs).unwrap();
        assert_eq!(
            j.gens().iter().map(|g| g.to_string()).collect::<Vec<_>>(),
            vec!["y*z", "x*z", "x*y"]
        );
        assert!(notes.is_empty());
        let fs: Vec<Polynomial<Q>> = parse_polynomials(&["x", "y", "x + y"], &r).unwrap();
        let (j, notes) = arrangement_gradient(&fs).unwrap();
        assert_eq!(j.ngens(), 2);
        assert_eq!(notes.len(), 1);
        let fs: Vec<Polynomial<Q>> = parse_polynomials(&["x", "2*x"], &r).unwrap();
        assert!(arrangement_gradient(&fs).is_err());
        assert!(arrangement_gradient::<Q>(&parse_polynomials(&["x^2"], &r).unwrap()).is_err());
    }
}
