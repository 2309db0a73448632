//! Monomial orders.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{AlgebraError, Result};
use crate::monomial::Monomial;

/// A global monomial order on a fixed variable list.
///
/// Variables are ranked by index: variable 0 is the largest.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum MonomialOrder {
    Lex,
    DegLex,
    #[default]
    DegRevLex,
    /// Elimination order: the listed variables form a degrevlex block that
    /// dominates a degrevlex block on the remaining variables.
    Block(Vec<usize>),
    /// Weighted degree, ties broken by reverse lexicographic comparison.
    Weighted(Vec<u32>),
}

fn revlex(a: &[u16], b: &[u16]) -> Ordering {
    for (x, y) in a.iter().zip(b).rev() {
        match x.cmp(y) {
            Ordering::Equal => continue,
            // a smaller exponent on the last variable makes the monomial larger
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

fn revlex_on(a: &[u16], b: &[u16], idx: &[usize]) -> Ordering {
    for &i in idx.iter().rev() {
        match a[i].cmp(&b[i]) {
            Ordering::Equal => continue,
            o => return o.reverse(),
        }
    }
    Ordering::Equal
}

impl MonomialOrder {
    /// Validate the descriptor against a ring with `nvars` variables.
    pub fn validate(&self, nvars: usize) -> Result<()> {
        match self {
            MonomialOrder::Block(elim) => {
                let mut seen = vec![false; nvars];
                for &i in elim {
                    if i >= nvars || seen[i] {
                        return Err(AlgebraError::InvalidRing(format!(
                            "block order index {i} is out of range or repeated"
                        )));
                    }
                    seen[i] = true;
                }
                Ok(())
            }
            MonomialOrder::Weighted(w) => {
                if w.len() != nvars {
                    return Err(AlgebraError::InvalidRing(format!(
                        "weight vector has length {}, ring has {nvars} variables",
                        w.len()
                    )));
                }
                if w.iter().any(|&x| x == 0) {
                    return Err(AlgebraError::InvalidRing(
                        "weights must be strictly positive".into(),
                    ));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Compare two monomials of equal arity.
    pub fn cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let (ea, eb) = (a.raw(), b.raw());
        match self {
            MonomialOrder::Lex => ea.cmp(eb),
            MonomialOrder::DegLex => a.degree().cmp(&b.degree()).then_with(|| ea.cmp(eb)),
            MonomialOrder::DegRevLex => a
                .degree()
                .cmp(&b.degree())
                .then_with(|| revlex(ea, eb)),
            MonomialOrder::Block(elim) => {
                let da = a.partial_degree(elim);
                let db = b.partial_degree(elim);
                da.cmp(&db)
                    .then_with(|| revlex_on(ea, eb, elim))
                    .then_with(|| (a.degree() - da).cmp(&(b.degree() - db)))
                    .then_with(|| {
                        // elimination variables already agree, so plain revlex
                        // decides on the remaining block
                        revlex(ea, eb)
                    })
            }
            MonomialOrder::Weighted(w) => {
                let wa: u64 = ea.iter().zip(w).map(|(&e, &x)| e as u64 * x as u64).sum();
                let wb: u64 = eb.iter().zip(w).map(|(&e, &x)| e as u64 * x as u64).sum();
                wa.cmp(&wb).then_with(|| revlex(ea, eb))
            }
        }
    }

    /// Arity-checked comparison.
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Result<Ordering> {
        if a.nvars() != b.nvars() {
            return Err(AlgebraError::ArityMismatch {
                left: a.nvars(),
                right: b.nvars(),
            });
        }
        Ok(self.cmp(a, b))
    }

    /// Re-express the order for a ring whose variables are `keep` (indices
    /// into the current ring, in order). Block orders degrade to degrevlex.
    pub(crate) fn restrict(&self, keep: &[usize]) -> MonomialOrder {
        match self {
            MonomialOrder::Weighted(w) => {
                MonomialOrder::Weighted(keep.iter().map(|&i| w[i]).collect())
            }
            MonomialOrder::Block(_) => MonomialOrder::DegRevLex,
            o => o.clone(),
        }
    }
}
