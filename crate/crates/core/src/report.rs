//! Report assembly and emission.
//!
//! Reports serialize deterministically: struct field order fixes the JSON key
//! order, witness tables are plain vectors, and timing is `null` unless
//! explicitly requested, so identical configs and seeds produce byte-identical
//! output.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::analysis::{
    bihomogeneity_report, AbelianRoute, AnalysisOptions, LevelCertificate, Verdict,
    VerdictStatus, WitnessRoute,
};
use crate::catalog;
use crate::config::{CheckKind, Config};
use crate::error::{Error, Result};
use crate::model::{InverseWitness, ModelDiagnostics, SwapWitness};
use crate::tower::{fiber_action_check, RegularityReport, Tower};
use crate::words::Presentation;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputEcho {
    pub config: String,
    pub kind: String,
    pub depth: usize,
    pub limit: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub level: usize,
    pub u: String,
    pub v: String,
    pub route: String,
    pub target: Option<String>,
    pub generator_images: Vec<usize>,
    pub image_u: usize,
    pub image_v: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub kind: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelSummary {
    pub n: usize,
    pub order: usize,
    pub chain_image_orders: Vec<usize>,
    pub certificates: Vec<CertificateReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefinementReport {
    pub for_level: usize,
    pub target: String,
    pub generator_images: Vec<usize>,
    pub appended_index: usize,
    pub appended_generator_count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictReport {
    pub status: String,
    pub statement: String,
    pub witnesses: Vec<WitnessReport>,
    pub refinements: Vec<RefinementReport>,
}

impl VerdictReport {
    fn not_run() -> Self {
        Self {
            status: "NOT_RUN".into(),
            statement: "bihomogeneity was not among the requested checks".into(),
            witnesses: Vec::new(),
            refinements: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberActionRow {
    pub level: usize,
    pub order: usize,
    pub mode: String,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelWitnessReport {
    pub word: String,
    pub surviving_level: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChecksReport {
    pub status: String,
    pub regularity: Option<RegularityReport>,
    pub fiber_action: Option<Vec<FiberActionRow>>,
    pub kernel_witness: Option<KernelWitnessReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimingReport {
    pub total_ms: u64,
    pub stages: Vec<(String, u64)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerReport {
    pub input: InputEcho,
    pub levels: Vec<LevelSummary>,
    pub verdict: VerdictReport,
    pub checks: ChecksReport,
    pub timing: Option<TimingReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoRow {
    pub j: usize,
    pub i: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelChecks {
    pub component_iso: Vec<IsoRow>,
    pub definitional: Option<(bool, Vec<SwapWitness>)>,
    pub inverse_criterion: Option<(bool, Vec<InverseWitness>)>,
    pub v_cover: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelSummary {
    pub group: String,
    pub order: usize,
    pub chain_orders: Vec<usize>,
    pub gamma_order: usize,
    pub components: usize,
    pub mon_count: usize,
    pub policy: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelReport {
    pub input: InputEcho,
    pub model: ModelSummary,
    pub validation: ModelDiagnostics,
    pub checks: ModelChecks,
    pub timing: Option<TimingReport>,
}

/// Either kind of report, for uniform emission.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Report {
    Tower(Box<TowerReport>),
    Model(Box<ModelReport>),
}

/// Lemma verification over the generated model catalog, per policy.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub seeds: Vec<String>,
    pub models: usize,
    pub policies: Vec<crate::sweep::SweepOutcome>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Dot,
}

impl std::str::FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "dot" => Ok(Format::Dot),
            other => Err(Error::Config {
                line: 0,
                message: format!("unknown format {other:?} (expected text, json or dot)"),
            }),
        }
    }
}

struct StageClock {
    enabled: bool,
    start: Instant,
    last: Instant,
    stages: Vec<(String, u64)>,
}

impl StageClock {
    fn new(enabled: bool) -> Self {
        let now = Instant::now();
        Self {
            enabled,
            start: now,
            last: now,
            stages: Vec::new(),
        }
    }

    fn mark(&mut self, label: &str) {
        if self.enabled {
            let now = Instant::now();
            self.stages
                .push((label.to_string(), now.duration_since(self.last).as_millis() as u64));
            self.last = now;
        }
    }

    fn finish(self) -> Option<TimingReport> {
        if self.enabled {
            Some(TimingReport {
                total_ms: self.start.elapsed().as_millis() as u64,
                stages: self.stages,
            })
        } else {
            None
        }
    }
}

fn verdict_report(verdict: &Verdict, base: &Presentation) -> VerdictReport {
    let gens = base.generators();
    let mut witnesses = Vec::new();
    for level in &verdict.levels {
        if let LevelCertificate::Nonabelian(cert) = &level.certificate {
            let (route, target, generator_images) = match &cert.route {
                WitnessRoute::Transition { to_level } => {
                    (format!("transition to level {to_level}"), None, Vec::new())
                }
                WitnessRoute::Catalog { name, images } => (
                    format!("surjection onto {name}"),
                    Some(name.clone()),
                    images.clone(),
                ),
            };
            witnesses.push(WitnessReport {
                level: cert.level,
                u: cert.u.display(gens),
                v: cert.v.display(gens),
                route,
                target,
                generator_images,
                image_u: cert.image_u,
                image_v: cert.image_v,
            });
        }
    }
    let refinements = verdict
        .refinements
        .iter()
        .map(|r| RefinementReport {
            for_level: r.for_level,
            target: r.target_name.clone(),
            generator_images: r.images.clone(),
            appended_index: r.appended_index,
            appended_generator_count: r.appended_spec.generators.len(),
        })
        .collect();
    let (status, statement) = match &verdict.status {
        VerdictStatus::BihomogeneousCertified { level } => (
            format!("BIHOMOGENEOUS_CERTIFIED({level})"),
            format!(
                "level {level} carries an abelian certificate; every deeper chain subgroup \
                 embeds in it, so the tower is algebraically bihomogeneous"
            ),
        ),
        VerdictStatus::NotBihomogeneousCertified { through_level } => (
            format!("NOT_BIHOMOGENEOUS_CERTIFIED(0..{through_level})"),
            format!(
                "levels 0..={through_level} each carry a nonabelian certificate modulo the \
                 (refined) chain; this is a finite-prefix claim — failure of algebraic \
                 bihomogeneity additionally requires the pattern to persist at all deeper levels"
            ),
        ),
        VerdictStatus::Unknown { depth } => (
            format!("UNKNOWN({depth})"),
            format!(
                "through depth {depth}, no level earned an abelian certificate and at least \
                 one level lacks a nonabelian certificate"
            ),
        ),
    };
    VerdictReport {
        status,
        statement,
        witnesses,
        refinements,
    }
}

fn certificate_report(cert: &LevelCertificate) -> CertificateReport {
    let detail = match cert {
        LevelCertificate::Abelian(AbelianRoute::Derived { generators, relators }) => format!(
            "all pairwise generator commutators derived from the simplified subgroup \
             presentation ({generators} generators, {relators} relators)"
        ),
        LevelCertificate::Abelian(AbelianRoute::SubgroupOfAbelianLevel { level }) => {
            format!("subgroup of the abelian level {level}")
        }
        LevelCertificate::Nonabelian(c) => match &c.route {
            WitnessRoute::Transition { to_level } => {
                format!("non-commuting images at level {to_level}")
            }
            WitnessRoute::Catalog { name, .. } => {
                format!("non-commuting images under a surjection onto {name}")
            }
        },
        LevelCertificate::Unknown => "no certificate within budget".to_string(),
    };
    CertificateReport {
        kind: cert.kind().to_string(),
        detail,
    }
}

/// Builds and analyzes a tower per the config, running the requested checks
/// in declared order. Enumeration limits abort the remaining stages but the
/// report is still produced, with the failure recorded in `checks.status`.
pub fn run_tower(config: &Config, raw_config: &str, timing: bool) -> Result<TowerReport> {
    let mut clock = StageClock::new(timing);
    let spec = crate::config::resolve_tower(config)?;
    let input = InputEcho {
        config: raw_config.to_string(),
        kind: "tower".into(),
        depth: spec.depth,
        limit: spec.limit,
        seed: config.analysis.seed,
    };

    let tower = match Tower::build(&spec) {
        Ok(t) => t,
        Err(Error::LimitExceeded { limit }) => {
            return Ok(TowerReport {
                input,
                levels: Vec::new(),
                verdict: VerdictReport::not_run(),
                checks: ChecksReport {
                    status: format!("limit-exceeded: enumeration hit the {limit} row bound"),
                    regularity: None,
                    fiber_action: None,
                    kernel_witness: None,
                },
                timing: clock.finish(),
            });
        }
        Err(e) => return Err(e),
    };
    clock.mark("build");

    let mut checks = ChecksReport {
        status: "complete".into(),
        regularity: None,
        fiber_action: None,
        kernel_witness: None,
    };
    let mut verdict = VerdictReport::not_run();
    let mut certificates: Vec<Vec<CertificateReport>> =
        vec![Vec::new(); tower.levels().len()];

    for check in &config.analysis.checks {
        match check {
            CheckKind::Regularity => {
                checks.regularity = Some(tower.validate_regularity()?);
                clock.mark("regularity");
            }
            CheckKind::FiberAction => {
                // Non-normal levels have no deck group; regularity reports them.
                let mut rows = Vec::new();
                for level in tower.levels() {
                    let Some(q) = &level.quotient else { continue };
                    let order = q.group.order();
                    let pass = fiber_action_check(
                        &level.table,
                        &q.group,
                        config.analysis.samples,
                        config.analysis.seed,
                    )?;
                    rows.push(FiberActionRow {
                        level: level.level,
                        order,
                        mode: if order <= 64 { "exhaustive" } else { "sampled" }.into(),
                        pass,
                    });
                }
                checks.fiber_action = Some(rows);
                clock.mark("fiber-action");
            }
            CheckKind::Bihomogeneity if tower.levels().iter().any(|l| l.quotient.is_none()) => {
                verdict = VerdictReport {
                    status: format!("UNKNOWN({})", tower.depth()),
                    statement: "a chain member is not normal in the base group; \
                                bihomogeneity analysis needs a regular chain"
                        .into(),
                    witnesses: Vec::new(),
                    refinements: Vec::new(),
                };
                clock.mark("bihomogeneity");
            }
            CheckKind::Bihomogeneity => {
                let mut options = AnalysisOptions {
                    catalog: config
                        .analysis
                        .catalog
                        .iter()
                        .map(|n| catalog::builtin(n))
                        .collect::<Result<Vec<_>>>()?,
                    tietze_budget: config.analysis.budget,
                    search_depth: None,
                };
                options.search_depth = Some(tower.depth());
                let raw_verdict = bihomogeneity_report(&tower, tower.depth(), &options)?;
                for level in &raw_verdict.levels {
                    certificates[level.level].push(certificate_report(&level.certificate));
                }
                verdict = verdict_report(&raw_verdict, tower.base());
                clock.mark("bihomogeneity");
            }
        }
    }

    if let Some(word_text) = &config.analysis.witness {
        let word = tower.base().parse_word(word_text)?;
        let level = tower.kernel_nonmembership_witness(&word, tower.depth())?;
        checks.kernel_witness = Some(KernelWitnessReport {
            word: word_text.clone(),
            surviving_level: level,
        });
        clock.mark("kernel-witness");
    }

    let mut levels = Vec::new();
    for (n, level) in tower.levels().iter().enumerate() {
        let chain_image_orders = match &level.quotient {
            Some(q) => q.chain_images.iter().map(|s| s.len()).collect(),
            None => Vec::new(),
        };
        levels.push(LevelSummary {
            n,
            order: level.table.index(),
            chain_image_orders,
            certificates: certificates[n].clone(),
        });
    }

    Ok(TowerReport {
        input,
        levels,
        verdict,
        checks,
        timing: clock.finish(),
    })
}

/// Validates a finite model and runs its lemma checks.
pub fn run_model(config: &Config, raw_config: &str, timing: bool) -> Result<ModelReport> {
    let mut clock = StageClock::new(timing);
    let model = crate::config::resolve_model(config)?;
    clock.mark("build");
    let policy = config.analysis.policy;
    let validation = model.validate();
    let components = model.path_components().count();
    let mons = model.char_monomorphisms(policy);
    let summary = ModelSummary {
        group: model.group().name().to_string(),
        order: model.group().order(),
        chain_orders: model.chain().iter().map(|s| s.len()).collect(),
        gamma_order: model.gamma().len(),
        components,
        mon_count: mons.len(),
        policy: match policy {
            crate::homsearch::MonPolicy::ImageAnywhere => "image-anywhere".into(),
            crate::homsearch::MonPolicy::ImageInChain => "image-in-chain".into(),
        },
    };
    clock.mark("monomorphisms");

    let mut checks = ModelChecks {
        component_iso: Vec::new(),
        definitional: None,
        inverse_criterion: None,
        v_cover: None,
    };
    if validation.is_valid() {
        for j in 1..model.chain().len() {
            for i in 0..j {
                checks.component_iso.push(IsoRow {
                    j,
                    i,
                    pass: model.component_iso_check(j, i)?,
                });
            }
        }
        let (def, def_table) = model.is_algebraically_bihomogeneous_definitional(policy)?;
        let (inv, inv_table) = model.inverse_criterion_check(policy)?;
        checks.definitional = Some((def, def_table));
        checks.inverse_criterion = Some((inv, inv_table));
        if inv {
            checks.v_cover = Some(model.v_sets_cover_check(policy)?);
        }
        clock.mark("checks");
    }

    Ok(ModelReport {
        input: InputEcho {
            config: raw_config.to_string(),
            kind: "model".into(),
            depth: model.chain().len() - 1,
            limit: config.analysis.limit.unwrap_or(crate::tower::DEFAULT_ENUM_LIMIT),
            seed: config.analysis.seed,
        },
        model: summary,
        validation,
        checks,
        timing: clock.finish(),
    })
}

/// Generates the full model catalog from the seed groups and replays the
/// lemma checks under each requested policy.
pub fn run_catalog_sweep(
    seeds: &[&str],
    policies: &[crate::homsearch::MonPolicy],
) -> Result<SweepReport> {
    let models = crate::sweep::generate_catalog_models(seeds)?;
    let outcomes = policies
        .iter()
        .map(|&p| crate::sweep::run_sweep(&models, p, crate::exec::ExecMode::default()))
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepReport {
        seeds: seeds.iter().map(|s| s.to_string()).collect(),
        models: models.len(),
        policies: outcomes,
    })
}

pub fn emit_sweep(report: &SweepReport, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(report).expect("report serializes")),
        Format::Dot => Err(Error::Config {
            line: 0,
            message: "sweep reports have no dot form; use text or json".into(),
        }),
        Format::Text => {
            let mut out = String::new();
            out.push_str(&format!(
                "catalog sweep over {:?}: {} valid models\n",
                report.seeds, report.models
            ));
            for outcome in &report.policies {
                let bihom = outcome.rows.iter().filter(|r| r.definitional).count();
                out.push_str(&format!(
                    "policy {}: equivalence and component checks {}; {} of {} models \
                     algebraically bihomogeneous\n",
                    outcome.policy_label,
                    if outcome.all_pass() {
                        "all pass".to_string()
                    } else {
                        format!("{} VIOLATIONS", outcome.violations.len())
                    },
                    bihom,
                    outcome.rows.len(),
                ));
                for v in &outcome.violations {
                    out.push_str(&format!("  violation: {v}\n"));
                }
            }
            Ok(out)
        }
    }
}

pub fn emit_tower(report: &TowerReport, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("report serializes"),
        Format::Dot => {
            let mut out = String::from("digraph tower {\n");
            for level in &report.levels {
                out.push_str(&format!(
                    "  L{} [label=\"L{} (order {})\"];\n",
                    level.n, level.n, level.order
                ));
            }
            for pair in report.levels.windows(2) {
                let index = pair[1].order / pair[0].order.max(1);
                out.push_str(&format!(
                    "  L{} -> L{} [label=\"{}\"];\n",
                    pair[1].n, pair[0].n, index
                ));
            }
            out.push_str("}\n");
            out
        }
        Format::Text => {
            let mut out = String::new();
            out.push_str(&format!(
                "tower: depth {}, limit {}, seed {}\n",
                report.input.depth, report.input.limit, report.input.seed
            ));
            out.push_str(&format!("status: {}\n", report.checks.status));
            for level in &report.levels {
                let certs: Vec<String> = level
                    .certificates
                    .iter()
                    .map(|c| format!("{}: {}", c.kind, c.detail))
                    .collect();
                out.push_str(&format!(
                    "  level {}: order {}, chain image orders {:?}{}\n",
                    level.n,
                    level.order,
                    level.chain_image_orders,
                    if certs.is_empty() {
                        String::new()
                    } else {
                        format!(" — {}", certs.join("; "))
                    }
                ));
            }
            if let Some(reg) = &report.checks.regularity {
                out.push_str(&format!(
                    "regularity: {}\n",
                    if reg.is_regular() {
                        "ok".to_string()
                    } else {
                        format!("FAILED {:?}", reg.issues)
                    }
                ));
            }
            if let Some(rows) = &report.checks.fiber_action {
                for row in rows {
                    out.push_str(&format!(
                        "fiber action at level {} ({} elements, {}): {}\n",
                        row.level,
                        row.order,
                        row.mode,
                        if row.pass { "ok" } else { "FAILED" }
                    ));
                }
            }
            if let Some(kw) = &report.checks.kernel_witness {
                out.push_str(&format!(
                    "kernel witness for \"{}\": {}\n",
                    kw.word,
                    match kw.surviving_level {
                        Some(m) => format!("survives at level {m} (not in the kernel)"),
                        None => "no witness through the built depth (no claim)".to_string(),
                    }
                ));
            }
            out.push_str(&format!("verdict: {}\n", report.verdict.status));
            out.push_str(&format!("  {}\n", report.verdict.statement));
            for w in &report.verdict.witnesses {
                out.push_str(&format!(
                    "  level {}: [{}, {}] via {}\n",
                    w.level, w.u, w.v, w.route
                ));
            }
            if let Some(t) = &report.timing {
                out.push_str(&format!("timing: {} ms total\n", t.total_ms));
            }
            out
        }
    }
}

pub fn emit_model(report: &ModelReport, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string_pretty(report).expect("report serializes"),
        Format::Dot => {
            // The inverse-system diagram of the chain.
            let mut out = String::from("digraph chain {\n");
            for (i, order) in report.model.chain_orders.iter().enumerate() {
                out.push_str(&format!("  C{i} [label=\"C{i} (order {order})\"];\n"));
            }
            for i in 1..report.model.chain_orders.len() {
                let index = report.model.chain_orders[i - 1] / report.model.chain_orders[i].max(1);
                out.push_str(&format!("  C{} -> C{} [label=\"{}\"];\n", i, i - 1, index));
            }
            out.push_str("}\n");
            out
        }
        Format::Text => {
            let mut out = String::new();
            out.push_str(&format!(
                "model over {}: order {}, chain orders {:?}, gamma order {}, policy {}\n",
                report.model.group,
                report.model.order,
                report.model.chain_orders,
                report.model.gamma_order,
                report.model.policy,
            ));
            if report.validation.is_valid() {
                out.push_str("validation: ok\n");
            } else {
                for issue in &report.validation.issues {
                    out.push_str(&format!("validation: {issue}\n"));
                }
                return out;
            }
            out.push_str(&format!(
                "components: {}, monomorphisms: {}\n",
                report.model.components, report.model.mon_count
            ));
            for row in &report.checks.component_iso {
                out.push_str(&format!(
                    "component iso {} -> {}: {}\n",
                    row.j,
                    row.i,
                    if row.pass { "ok" } else { "FAILED" }
                ));
            }
            if let Some((holds, table)) = &report.checks.definitional {
                out.push_str(&format!(
                    "definitional bihomogeneity: {holds} ({} pairs checked)\n",
                    table.len()
                ));
                for w in table {
                    if let Some((trans, mon)) = w.witness {
                        out.push_str(&format!(
                            "  swap ({}, {}): w = {}, monomorphism #{}\n",
                            w.component_x, w.component_y, trans, mon
                        ));
                    } else {
                        out.push_str(&format!(
                            "  swap ({}, {}): NO WITNESS\n",
                            w.component_x, w.component_y
                        ));
                    }
                }
            }
            if let Some((holds, table)) = &report.checks.inverse_criterion {
                out.push_str(&format!(
                    "inverse criterion: {holds} ({} elements checked)\n",
                    table.len()
                ));
            }
            if let Some(cover) = report.checks.v_cover {
                out.push_str(&format!("V-sets cover: {cover}\n"));
            }
            if let Some(t) = &report.timing {
                out.push_str(&format!("timing: {} ms total\n", t.total_ms));
            }
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    const DYADIC: &str = "\
[group]
generators = a
relators =

[tower]
builder = cyclic
multipliers = 2, 2, 2

[analysis]
depth = 3
seed = 1
";

    #[test]
    fn dyadic_run_produces_a_certified_report() {
        let config = parse_config(DYADIC).unwrap();
        let report = run_tower(&config, DYADIC, false).unwrap();
        assert_eq!(report.checks.status, "complete");
        let orders: Vec<usize> = report.levels.iter().map(|l| l.order).collect();
        assert_eq!(orders, vec![1, 2, 4, 8]);
        assert_eq!(report.verdict.status, "BIHOMOGENEOUS_CERTIFIED(0)");
        assert!(report.checks.regularity.as_ref().unwrap().is_regular());
        assert!(report
            .checks
            .fiber_action
            .as_ref()
            .unwrap()
            .iter()
            .all(|r| r.pass));
    }

    #[test]
    fn json_emission_is_deterministic_and_round_trips() {
        let config = parse_config(DYADIC).unwrap();
        let r1 = run_tower(&config, DYADIC, false).unwrap();
        let r2 = run_tower(&config, DYADIC, false).unwrap();
        let j1 = emit_tower(&r1, Format::Json);
        let j2 = emit_tower(&r2, Format::Json);
        assert_eq!(j1, j2);
        let parsed: TowerReport = serde_json::from_str(&j1).unwrap();
        assert_eq!(parsed, r1);
    }

    #[test]
    fn dot_output_shape() {
        let config = parse_config(DYADIC).unwrap();
        let report = run_tower(&config, DYADIC, false).unwrap();
        let dot = emit_tower(&report, Format::Dot);
        // 4 nodes, 3 edges each labeled 2.
        assert_eq!(dot.matches("label=\"L").count(), 4);
        assert_eq!(dot.matches("->").count(), 3);
        assert_eq!(dot.matches("[label=\"2\"]").count(), 3);
    }

    #[test]
    fn limit_exceeded_is_recorded_not_fatal() {
        let text = "\
[group]
generators = a, b

[tower]
builder = explicit
level.1 = \"a a\"

[analysis]
limit = 40
";
        let config = parse_config(text).unwrap();
        let report = run_tower(&config, text, false).unwrap();
        assert!(report.checks.status.starts_with("limit-exceeded"));
        assert!(report.levels.is_empty());
    }

    #[test]
    fn model_report_for_the_s3_model() {
        let text = "\
[model]
group = s3
chain.1 = \"y\"
gamma = \"x\"
";
        let config = parse_config(text).unwrap();
        let report = run_model(&config, text, false).unwrap();
        assert!(report.validation.is_valid());
        assert_eq!(report.model.components, 3);
        assert_eq!(report.model.mon_count, 4);
        let (def, _) = report.checks.definitional.as_ref().unwrap();
        let (inv, _) = report.checks.inverse_criterion.as_ref().unwrap();
        assert_eq!(def, inv);
        let json = emit_model(&report, Format::Json);
        let parsed: ModelReport = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed, report);
    }

    #[test]
    fn empty_check_list_reports_input_echo_only() {
        let text = "\
[group]
generators = a
relators =

[tower]
builder = cyclic
multipliers = 2

[analysis]
checks =
";
        let config = parse_config(text).unwrap();
        assert!(config.analysis.checks.is_empty());
        let report = run_tower(&config, text, false).unwrap();
        assert_eq!(report.input.config, text);
        assert_eq!(report.verdict.status, "NOT_RUN");
        assert!(report.checks.regularity.is_none());
        assert!(report.checks.fiber_action.is_none());
        assert!(report.levels.iter().all(|l| l.certificates.is_empty()));
    }

    #[test]
    fn non_normal_chain_degrades_gracefully() {
        let text = "\
[group]
generators = x, y
relators = \"x x\", \"y y y\", \"x y x y\"

[tower]
builder = explicit
level.1 = \"x\"
";
        let config = parse_config(text).unwrap();
        let report = run_tower(&config, text, false).unwrap();
        let reg = report.checks.regularity.as_ref().unwrap();
        assert!(!reg.is_regular());
        assert_eq!(reg.normal, vec![true, false]);
        // Fiber rows cover only the normal levels; the verdict explains why
        // the analysis could not run.
        assert_eq!(report.checks.fiber_action.as_ref().unwrap().len(), 1);
        assert!(report.verdict.statement.contains("not normal"));
    }

    #[test]
    fn sweep_report_over_small_seeds() {
        use crate::homsearch::MonPolicy;
        let report = run_catalog_sweep(&["z4", "s3"], &[MonPolicy::ImageAnywhere]).unwrap();
        assert!(report.models > 0);
        assert!(report.policies[0].all_pass());
        let text = emit_sweep(&report, Format::Text).unwrap();
        assert!(text.contains("all pass"));
        assert!(emit_sweep(&report, Format::Dot).is_err());
        let json = emit_sweep(&report, Format::Json).unwrap();
        let parsed: SweepReport = serde_json::from_str(&json).unwrap();
        assert_eq!(parsed, report);
    }

    #[test]
    fn timing_is_null_by_default_and_present_on_request() {
        let config = parse_config(DYADIC).unwrap();
        let quiet = run_tower(&config, DYADIC, false).unwrap();
        assert!(quiet.timing.is_none());
        let timed = run_tower(&config, DYADIC, true).unwrap();
        assert!(timed.timing.is_some());
        let json = emit_tower(&quiet, Format::Json);
        assert!(json.contains("\"timing\": null"));
    }
}
