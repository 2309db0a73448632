//! Polynomial rings and quotient-ring descriptors.

use std::fmt;
use std::sync::Arc;

use crate::error::{AlgebraError, Result};
use crate::field::{is_prime, Field};
use crate::order::MonomialOrder;
use crate::poly::Polynomial;

/// Default bound on the total degree of any monomial produced by the
/// Gröbner engine.
pub const DEFAULT_DEGREE_CAP: u32 = 64;

/// `k[x_1, ..., x_n]` with a fixed monomial order. The coefficient field is
/// a type parameter of [`Polynomial`]; the ring remembers its
/// characteristic so that mixing fields is caught at construction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PolyRing {
    vars: Vec<String>,
    order: MonomialOrder,
    characteristic: u64,
    degree_cap: u32,
}

fn valid_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl PolyRing {
    pub fn new<F: Field>(vars: &[&str], order: MonomialOrder) -> Result<Arc<PolyRing>> {
        Self::from_names::<F>(vars.iter().map(|s| s.to_string()).collect(), order)
    }

    pub fn from_names<F: Field>(vars: Vec<String>, order: MonomialOrder) -> Result<Arc<PolyRing>> {
        let p = F::characteristic();
        if p != 0 && !is_prime(p) {
            return Err(AlgebraError::InvalidRing(format!(
                "characteristic {p} is not prime"
            )));
        }
        Self::build(vars, order, p, DEFAULT_DEGREE_CAP)
    }

    fn build(
        vars: Vec<String>,
        order: MonomialOrder,
        characteristic: u64,
        degree_cap: u32,
    ) -> Result<Arc<PolyRing>> {
        if vars.is_empty() {
            return Err(AlgebraError::InvalidRing("no variables".into()));
        }
        for (i, v) in vars.iter().enumerate() {
            if !valid_identifier(v) {
                return Err(AlgebraError::InvalidRing(format!(
                    "`{v}` is not a valid variable name"
                )));
            }
            if vars[..i].contains(v) {
                return Err(AlgebraError::InvalidRing(format!("duplicate variable `{v}`")));
            }
        }
        order.validate(vars.len())?;
        Ok(Arc::new(PolyRing {
            vars,
            order,
            characteristic,
            degree_cap,
        }))
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_name(&self, i: usize) -> &str {
        &self.vars[i]
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn characteristic(&self) -> u64 {
        self.characteristic
    }

    pub fn degree_cap(&self) -> u32 {
        self.degree_cap
    }

    pub fn with_order(&self, order: MonomialOrder) -> Result<Arc<PolyRing>> {
        Self::build(self.vars.clone(), order, self.characteristic, self.degree_cap)
    }

    pub fn with_degree_cap(&self, cap: u32) -> Arc<PolyRing> {
        Arc::new(PolyRing {
            degree_cap: cap,
            ..self.clone()
        })
    }

    /// A name derived from `stem` that does not clash with existing
    /// variables or with `taken`.
    pub fn fresh_name(&self, stem: &str, taken: &[String]) -> String {
        let mut name = stem.to_string();
        while self.vars.contains(&name) || taken.contains(&name) {
            name.push('_');
        }
        name
    }

    /// Append new variables (renamed if they clash) after the existing ones.
    /// The extended ring uses degrevlex unless the caller overrides it.
    pub fn extend(&self, stems: &[String]) -> Result<(Arc<PolyRing>, Vec<String>)> {
        let mut added: Vec<String> = Vec::with_capacity(stems.len());
        for s in stems {
            let n = self.fresh_name(s, &added);
            added.push(n);
        }
        let mut vars = self.vars.clone();
        vars.extend(added.iter().cloned());
        let ring = Self::build(
            vars,
            MonomialOrder::DegRevLex,
            self.characteristic,
            self.degree_cap,
        )?;
        Ok((ring, added))
    }

    /// The ring on the variables `keep` (indices into this ring, in order).
    pub fn subring(&self, keep: &[usize]) -> Result<Arc<PolyRing>> {
        let vars = keep.iter().map(|&i| self.vars[i].clone()).collect();
        Self::build(
            vars,
            self.order.restrict(keep),
            self.characteristic,
            self.degree_cap,
        )
    }

    /// Same variables and characteristic; orders may differ.
    pub fn same_variables(&self, other: &PolyRing) -> bool {
        self.vars == other.vars && self.characteristic == other.characteristic
    }
}

impl fmt::Debug for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = if self.characteristic == 0 {
            "QQ".to_string()
        } else {
            format!("GF({})", self.characteristic)
        };
        write!(f, "{field}[{}] ({:?})", self.vars.join(","), self.order)
    }
}

/// A ring `R/a`: a polynomial ring plus an optional defining ideal.
///
/// Ideals of `R/a` are represented by their preimages in `R`; every ideal
/// operation appends the generators of `a` before computing.
#[derive(Clone)]
pub struct RingSpec<F: Field> {
    base: Arc<PolyRing>,
    quotient: Arc<[Polynomial<F>]>,
}

impl<F: Field> RingSpec<F> {
    pub fn polynomial(base: Arc<PolyRing>) -> Self {
        RingSpec {
            base,
            quotient: Arc::from(Vec::new()),
        }
    }

    pub fn quotient(base: Arc<PolyRing>, relations: Vec<Polynomial<F>>) -> Result<Self> {
        for r in &relations {
            if !r.ring().same_variables(&base) {
                return Err(AlgebraError::RingMismatch);
            }
        }
        let rel: Vec<Polynomial<F>> = relations
            .into_iter()
            .filter(|p| !p.is_zero())
            .map(|p| p.with_ring(&base))
            .collect();
        Ok(RingSpec {
            base,
            quotient: Arc::from(rel),
        })
    }

    pub fn base(&self) -> &Arc<PolyRing> {
        &self.base
    }

    pub fn relations(&self) -> &[Polynomial<F>] {
        &self.quotient
    }

    pub fn is_quotient(&self) -> bool {
        !self.quotient.is_empty()
    }

    pub fn nvars(&self) -> usize {
        self.base.nvars()
    }

    /// Add relations to the quotient.
    pub fn mod_out(&self, extra: &[Polynomial<F>]) -> Result<Self> {
        let mut rel: Vec<Polynomial<F>> = self.quotient.to_vec();
        rel.extend(extra.iter().cloned());
        Self::quotient(self.base.clone(), rel)
    }

    /// Same underlying polynomial ring (ignoring the order) and the same
    /// relation list.
    pub fn compatible(&self, other: &RingSpec<F>) -> bool {
        self.base.same_variables(&other.base) && self.quotient == other.quotient
    }
}

impl<F: Field> fmt::Debug for RingSpec<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.base)?;
        if !self.quotient.is_empty() {
            let rel: Vec<String> = self.quotient.iter().map(|p| p.to_string()).collect();
            write!(f, " / ({})", rel.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rational};

    #[test]
    fn rejects_bad_variable_lists() {
        assert!(PolyRing::new::<Rational>(&[], MonomialOrder::Lex).is_err());
        assert!(PolyRing::new::<Rational>(&["x", "x"], MonomialOrder::Lex).is_err());
        assert!(PolyRing::new::<Rational>(&["2x"], MonomialOrder::Lex).is_err());
        assert!(PolyRing::new::<Rational>(&["x_1", "T2"], MonomialOrder::Lex).is_ok());
    }

    #[test]
    fn rejects_composite_characteristic() {
        assert!(PolyRing::new::<Fp<9>>(&["x"], MonomialOrder::Lex).is_err());
        assert!(PolyRing::new::<Fp<11>>(&["x"], MonomialOrder::Lex).is_ok());
    }

    #[test]
    fn fresh_names_avoid_clashes() {
        let r = PolyRing::new::<Rational>(&["t", "x"], MonomialOrder::DegRevLex).unwrap();
        let (ext, added) = r.extend(&["t".into(), "u".into()]).unwrap();
        assert_eq!(added, vec!["t_".to_string(), "u".to_string()]);
        assert_eq!(ext.nvars(), 4);
    }
}
