//! Job files: a ring, named ideals and what to do with them.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use atf_core::families::{jacobian_ideal, FamilySpec};
use atf_core::{parse_polynomials, Ctx, Field, Ideal, MonomialOrder, PolyRing, RingSpec, Verdict};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    /// Exact torsion-free decision (or truncated with --truncated)
    Check,
    /// Strongly torsion-free test for the given generator order
    Strong,
    /// Rees algebra presentation of I
    Rees,
    /// Symmetric algebra presentation of I
    Sym,
    /// Aluffi algebra presentation of J ⊆ I
    Aluffi,
    /// Standard-base test of J in the associated graded ring of I
    Grform,
    /// Vanishing of one graded piece (J ∩ I^n) / J I^{n-1}
    Vv,
    /// Jacobian ideal of J
    Jacobian,
    /// Print every ideal the job defines
    Family,
    /// One of the named structural criteria
    Criterion,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionKind {
    Colon,
    Sum,
    Residual,
    Perturbation,
    Nested,
    Transfer,
}

/// `"QQ"` for the rationals or a prime for a prime field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldDesc {
    Prime(u64),
    Name(String),
}

impl Default for FieldDesc {
    fn default() -> Self {
        FieldDesc::Name("QQ".into())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RingDesc {
    pub vars: Vec<String>,
    #[serde(default)]
    pub order: MonomialOrder,
    #[serde(default)]
    pub quotient: Vec<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyPart {
    /// The family's main ideal.
    #[default]
    J,
    /// The closed-form companion ideal.
    Closed,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum IdealSpec {
    Gens {
        gens: Vec<String>,
    },
    Family {
        from_family: FamilySpec,
        #[serde(default)]
        part: FamilyPart,
    },
    Jacobian {
        jacobian_of: String,
    },
    Power {
        power_of: String,
        n: u32,
    },
    Sum {
        sum_of: Vec<String>,
    },
    Product {
        product_of: Vec<String>,
    },
}

impl IdealSpec {
    fn references(&self) -> Vec<&str> {
        match self {
            IdealSpec::Gens { .. } | IdealSpec::Family { .. } => vec![],
            IdealSpec::Jacobian { jacobian_of } => vec![jacobian_of],
            IdealSpec::Power { power_of, .. } => vec![power_of],
            IdealSpec::Sum { sum_of } => sum_of.iter().map(String::as_str).collect(),
            IdealSpec::Product { product_of } => product_of.iter().map(String::as_str).collect(),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    /// Used by corpus runs; on the command line the subcommand wins.
    #[serde(default)]
    pub command: Option<Command>,
    #[serde(default)]
    pub field: FieldDesc,
    #[serde(default)]
    pub ring: Option<RingDesc>,
    pub ideals: BTreeMap<String, IdealSpec>,
    /// Maps the roles `J`, `I`, `J1`, `J2` to ideal names. Unmapped roles
    /// use the ideal of the same name.
    #[serde(default)]
    pub roles: BTreeMap<String, String>,
    #[serde(default, rename = "N")]
    pub max_n: Option<u32>,
    /// Degree for `vv`.
    #[serde(default)]
    pub degree: Option<u32>,
    #[serde(default)]
    pub truncated: bool,
    #[serde(default)]
    pub all_orders: bool,
    #[serde(default)]
    pub criterion: Option<CriterionKind>,
    #[serde(default)]
    pub budget_ms: Option<u64>,
    #[serde(default)]
    pub budget_steps: Option<u64>,
    #[serde(default)]
    pub expect: Option<Verdict>,
    /// Expected degree of the first witness of a `FALSE` verdict.
    #[serde(default)]
    pub expect_n: Option<u32>,
}

pub const ROLES: [&str; 4] = ["J", "I", "J1", "J2"];

impl JobSpec {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
        let job: JobSpec = serde_json::from_str(&text)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        job.validate()?;
        Ok(job)
    }

    pub fn role(&self, role: &str) -> String {
        self.roles.get(role).cloned().unwrap_or_else(|| role.to_string())
    }

    /// Names referenced anywhere must be defined, `N` and budgets must be
    /// positive and there must be no definition cycles.
    pub fn validate(&self) -> Result<(), CliError> {
        for (role, name) in &self.roles {
            if !ROLES.contains(&role.as_str()) {
                return Err(CliError::Input(format!("unknown role `{role}`")));
            }
            if !self.ideals.contains_key(name) {
                return Err(CliError::Input(format!("role {role} refers to undefined ideal `{name}`")));
            }
        }
        for (name, spec) in &self.ideals {
            for r in spec.references() {
                if !self.ideals.contains_key(r) {
                    return Err(CliError::Input(format!("ideal `{name}` refers to undefined ideal `{r}`")));
                }
            }
        }
        if self.max_n == Some(0) {
            return Err(CliError::Input("N must be at least 1".into()));
        }
        if self.degree == Some(0) {
            return Err(CliError::Input("degree must be at least 1".into()));
        }
        if self.budget_ms == Some(0) || self.budget_steps == Some(0) {
            return Err(CliError::Input("budgets must be positive".into()));
        }
        let mut done = BTreeSet::new();
        for name in self.ideals.keys() {
            self.acyclic(name, &mut Vec::new(), &mut done)?;
        }
        Ok(())
    }

    fn acyclic<'a>(
        &'a self,
        name: &'a str,
        stack: &mut Vec<&'a str>,
        done: &mut BTreeSet<&'a str>,
    ) -> Result<(), CliError> {
        if done.contains(name) {
            return Ok(());
        }
        if stack.contains(&name) {
            return Err(CliError::Input(format!("ideal `{name}` is defined in terms of itself")));
        }
        stack.push(name);
        for r in self.ideals[name].references() {
            self.acyclic(r, stack, done)?;
        }
        stack.pop();
        done.insert(name);
        Ok(())
    }
}

/// Ideals of a job over a concrete field, built on demand.
pub struct Resolver<'a, F: Field> {
    job: &'a JobSpec,
    ring: RingSpec<F>,
    ideals: BTreeMap<String, Ideal<F>>,
    pub notes: Vec<String>,
}

impl<'a, F: Field> Resolver<'a, F> {
    /// The ring is the job's own, or else the ring of its first family
    /// ideal.
    pub fn new(job: &'a JobSpec, ctx: &Ctx) -> Result<Self, CliError> {
        let ring = match &job.ring {
            Some(r) => {
                let base = PolyRing::from_names::<F>(r.vars.clone(), r.order.clone())?;
                let rel = parse_polynomials(&r.quotient, &base)?;
                RingSpec::quotient(base, rel)?
            }
            None => {
                let family = job.ideals.values().find_map(|s| match s {
                    IdealSpec::Family { from_family, .. } => Some(from_family),
                    _ => None,
                });
                match family {
                    Some(f) => f.build::<F>(ctx)?.j.ring().clone(),
                    None => {
                        return Err(CliError::Input(
                            "the job needs a ring unless one of its ideals comes from a family".into(),
                        ))
                    }
                }
            }
        };
        Ok(Resolver {
            job,
            ring,
            ideals: BTreeMap::new(),
            notes: Vec::new(),
        })
    }

    pub fn ring(&self) -> &RingSpec<F> {
        &self.ring
    }

    pub fn role(&mut self, role: &str, ctx: &Ctx) -> Result<Ideal<F>, CliError> {
        let name = self.job.role(role);
        if !self.job.ideals.contains_key(&name) {
            return Err(CliError::Input(format!("the command needs an ideal `{name}`")));
        }
        self.ideal(&name, ctx)
    }

    pub fn ideal(&mut self, name: &str, ctx: &Ctx) -> Result<Ideal<F>, CliError> {
        if let Some(i) = self.ideals.get(name) {
            return Ok(i.clone());
        }
        let spec = self
            .job
            .ideals
            .get(name)
            .ok_or_else(|| CliError::Input(format!("undefined ideal `{name}`")))?;
        let ideal = match spec {
            IdealSpec::Gens { gens } => Ideal::new(&self.ring, parse_polynomials(gens, self.ring.base())?)?,
            IdealSpec::Family { from_family, part } => {
                let inst = from_family.build::<F>(ctx)?;
                self.notes.extend(inst.notes.iter().map(|n| format!("{name}: {n}")));
                let src = match part {
                    FamilyPart::J => inst.j,
                    FamilyPart::Closed => inst.i.ok_or_else(|| {
                        CliError::Input(format!("ideal `{name}`: this family has no closed-form companion"))
                    })?,
                };
                let text: Vec<String> = src.gens().iter().map(|g| g.to_string()).collect();
                Ideal::new(&self.ring, parse_polynomials(&text, self.ring.base())?)?
            }
            IdealSpec::Jacobian { jacobian_of } => {
                let j = self.ideal(jacobian_of, ctx)?;
                jacobian_ideal(&j, ctx)?
            }
            IdealSpec::Power { power_of, n } => self.ideal(power_of, ctx)?.power(*n, ctx)?,
            IdealSpec::Sum { sum_of } => {
                let mut acc = Ideal::zero(&self.ring);
                for s in sum_of {
                    acc = acc.sum(&self.ideal(s, ctx)?)?;
                }
                acc
            }
            IdealSpec::Product { product_of } => {
                let mut acc = Ideal::unit(&self.ring);
                for s in product_of {
                    acc = acc.product(&self.ideal(s, ctx)?, ctx)?;
                }
                acc
            }
        };
        self.ideals.insert(name.to_string(), ideal.clone());
        Ok(ideal)
    }
}
