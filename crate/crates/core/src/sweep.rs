//! Exhaustive lemma verification over a generated catalog of finite models.
//!
//! The catalog takes every group from the seed list, every chain of length at
//! most two (the whole group alone, or the whole group over one proper
//! subgroup), and every dense choice of γ. On each valid model the sweep
//! replays, exhaustively:
//!
//! - the equivalence of definitional bihomogeneity and the inverse criterion;
//! - bihomogeneity of every abelian model;
//! - the covering property of the V-sets wherever the criterion holds;
//! - bijectivity of the inclusion-induced component maps.
//!
//! Models are independent, so the sweep maps over them in parallel.

use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::error::Result;
use crate::exec::{self, ExecMode};
use crate::homsearch::MonPolicy;
use crate::model::FiniteSolenoidModel;

/// Everything the sweep measured on one model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelReportRow {
    pub group: String,
    pub chain_orders: Vec<usize>,
    pub gamma_order: usize,
    pub components: usize,
    pub mon_count: usize,
    pub abelian: bool,
    pub definitional: bool,
    pub inverse_criterion: bool,
    pub v_cover: Option<bool>,
    pub component_iso_all: bool,
}

impl ModelReportRow {
    /// The lemma statements this row must satisfy; `None` means all hold.
    pub fn violation(&self) -> Option<String> {
        if self.definitional != self.inverse_criterion {
            return Some(format!(
                "{}: definitional ({}) differs from inverse criterion ({})",
                self.group, self.definitional, self.inverse_criterion
            ));
        }
        if self.abelian && !self.definitional {
            return Some(format!("{}: abelian model not bihomogeneous", self.group));
        }
        if self.inverse_criterion && self.v_cover != Some(true) {
            return Some(format!("{}: V-sets fail to cover", self.group));
        }
        if !self.component_iso_all {
            return Some(format!("{}: component isomorphism fails", self.group));
        }
        None
    }
}

/// Summary of a full sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepOutcome {
    pub policy_label: String,
    pub models: usize,
    pub rows: Vec<ModelReportRow>,
    pub violations: Vec<String>,
}

impl SweepOutcome {
    pub fn all_pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Generates all valid models from the seed groups: chains of length ≤ 2 and
/// every dense γ. Deterministic order: seed order, then subgroup order.
pub fn generate_catalog_models(seed_names: &[&str]) -> Result<Vec<FiniteSolenoidModel>> {
    let mut models = Vec::new();
    for name in seed_names {
        let group = catalog::builtin(name)?.group;
        let subgroups = group.all_subgroups();
        let whole = group.whole_subgroup();
        let mut chains = vec![vec![whole.clone()]];
        for sub in &subgroups {
            if sub.len() < group.order() {
                chains.push(vec![whole.clone(), sub.clone()]);
            }
        }
        for chain in chains {
            for gamma in &subgroups {
                let model =
                    FiniteSolenoidModel::new(group.clone(), chain.clone(), gamma.clone())?;
                if model.is_valid() {
                    models.push(model);
                }
            }
        }
    }
    Ok(models)
}

/// Runs every check on one model.
pub fn check_model(model: &FiniteSolenoidModel, policy: MonPolicy) -> Result<ModelReportRow> {
    let (definitional, _) = model.is_algebraically_bihomogeneous_definitional(policy)?;
    let (inverse_criterion, _) = model.inverse_criterion_check(policy)?;
    let v_cover = if inverse_criterion {
        Some(model.v_sets_cover_check(policy)?)
    } else {
        None
    };
    let mut component_iso_all = true;
    for j in 1..model.chain().len() {
        for i in 0..j {
            component_iso_all &= model.component_iso_check(j, i)?;
        }
    }
    Ok(ModelReportRow {
        group: model.group().name().to_string(),
        chain_orders: model.chain().iter().map(|s| s.len()).collect(),
        gamma_order: model.gamma().len(),
        components: model.path_components().count(),
        mon_count: model.char_monomorphisms(policy).len(),
        abelian: model.group().is_abelian(),
        definitional,
        inverse_criterion,
        v_cover,
        component_iso_all,
    })
}

/// Sweeps a model list under one monomorphism policy.
pub fn run_sweep(
    models: &[FiniteSolenoidModel],
    policy: MonPolicy,
    mode: ExecMode,
) -> Result<SweepOutcome> {
    let rows: Vec<Result<ModelReportRow>> =
        exec::map_slice_with(mode, models, |m| check_model(m, policy));
    let rows: Vec<ModelReportRow> = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let violations = rows.iter().filter_map(ModelReportRow::violation).collect();
    Ok(SweepOutcome {
        policy_label: match policy {
            MonPolicy::ImageAnywhere => "image-anywhere".to_string(),
            MonPolicy::ImageInChain => "image-in-chain".to_string(),
        },
        models: models.len(),
        rows,
        violations,
    })
}
