//! INI-style configuration for towers and finite models.
//!
//! Sections: `[group]`, `[tower]` or `[model]` (exactly one), `[analysis]`.
//! Values are comma-separated lists; words use the word grammar and are
//! quoted. Unknown sections and keys are rejected with line numbers.
//!
//! ```ini
//! [group]
//! generators = a
//! relators =
//!
//! [tower]
//! builder = cyclic
//! multipliers = 2, 2, 2
//!
//! [analysis]
//! depth = 3
//! checks = regularity, fiber-action, bihomogeneity
//! ```

use crate::catalog;
use crate::coset::{CosetTable, SubgroupSpec};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::homsearch::MonPolicy;
use crate::model::FiniteSolenoidModel;
use crate::schreier;
use crate::tower::{ChainBuilder, KernelTarget, TowerSpec, DEFAULT_ENUM_LIMIT};
use crate::words::Presentation;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupSection {
    pub generators: Vec<String>,
    pub relators: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BuilderSection {
    Cyclic { multipliers: Vec<u64> },
    Explicit { levels: Vec<Vec<String>> },
    HomKernel { targets: Vec<(String, Vec<String>)> },
    ModP { prime: u64, steps: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSection {
    pub group_name: Option<String>,
    /// chain.k values; Γ₀ (the whole group) is implicit.
    pub chain: Vec<Vec<String>>,
    pub gamma: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    Regularity,
    FiberAction,
    Bihomogeneity,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisSection {
    pub depth: Option<usize>,
    pub limit: Option<usize>,
    pub seed: u64,
    pub samples: usize,
    pub budget: usize,
    pub catalog: Vec<String>,
    pub checks: Vec<CheckKind>,
    /// Optional word whose kernel nonmembership is probed.
    pub witness: Option<String>,
    pub policy: MonPolicy,
}

impl Default for AnalysisSection {
    fn default() -> Self {
        Self {
            depth: None,
            limit: None,
            seed: 1,
            samples: 4096,
            budget: schreier::DEFAULT_TIETZE_BUDGET,
            catalog: crate::analysis::DEFAULT_CATALOG
                .iter()
                .map(|s| s.to_string())
                .collect(),
            checks: vec![
                CheckKind::Regularity,
                CheckKind::FiberAction,
                CheckKind::Bihomogeneity,
            ],
            witness: None,
            policy: MonPolicy::ImageAnywhere,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Job {
    Tower(BuilderSection),
    Model(ModelSection),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Config {
    pub group: Option<GroupSection>,
    pub job: Job,
    pub analysis: AnalysisSection,
}

fn err(line: usize, message: impl Into<String>) -> Error {
    Error::Config {
        line,
        message: message.into(),
    }
}

/// Splits a comma-separated value, honoring double quotes. Quoted items come
/// back without their quotes; a quoted empty string is a legal (empty) word.
fn split_list(line_no: usize, value: &str) -> Result<Vec<String>> {
    let mut items = Vec::new();
    let mut current = String::new();
    let mut in_quotes = false;
    let mut was_quoted = false;
    for c in value.chars() {
        match c {
            '"' => {
                in_quotes = !in_quotes;
                was_quoted = true;
            }
            ',' if !in_quotes => {
                let item = current.trim().to_string();
                if !item.is_empty() || was_quoted {
                    items.push(item);
                }
                current.clear();
                was_quoted = false;
            }
            _ => current.push(c),
        }
    }
    if in_quotes {
        return Err(err(line_no, "unterminated quote"));
    }
    let item = current.trim().to_string();
    if !item.is_empty() || was_quoted {
        items.push(item);
    }
    Ok(items)
}

struct RawSection {
    name: String,
    line: usize,
    entries: Vec<(usize, String, String)>,
}

fn tokenize(text: &str) -> Result<Vec<RawSection>> {
    let mut sections: Vec<RawSection> = Vec::new();
    for (i, raw_line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = match raw_line.find('#') {
            // Hash inside quotes is content, not a comment.
            Some(pos) if raw_line[..pos].matches('"').count() % 2 == 0 => &raw_line[..pos],
            _ => raw_line,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| err(line_no, "malformed section header"))?;
            sections.push(RawSection {
                name: name.trim().to_string(),
                line: line_no,
                entries: Vec::new(),
            });
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err(line_no, "expected key = value"))?;
        let section = sections
            .last_mut()
            .ok_or_else(|| err(line_no, "entry before any section header"))?;
        section
            .entries
            .push((line_no, key.trim().to_string(), value.trim().to_string()));
    }
    Ok(sections)
}

fn parse_usize(line: usize, value: &str) -> Result<usize> {
    value
        .parse()
        .map_err(|_| err(line, format!("expected an integer, got {value:?}")))
}

fn parse_u64(line: usize, value: &str) -> Result<u64> {
    value
        .parse()
        .map_err(|_| err(line, format!("expected an integer, got {value:?}")))
}

/// Parses and validates a config. Syntax errors and unknown keys carry line
/// numbers; semantic errors (unknown generators in relators, missing
/// sections) are raised here too.
pub fn parse_config(text: &str) -> Result<Config> {
    let sections = tokenize(text)?;
    let mut group: Option<GroupSection> = None;
    let mut job: Option<Job> = None;
    let mut analysis = AnalysisSection::default();

    for section in &sections {
        match section.name.as_str() {
            "group" => {
                let mut generators = Vec::new();
                let mut relators = Vec::new();
                for (line, key, value) in &section.entries {
                    match key.as_str() {
                        "generators" => generators = split_list(*line, value)?,
                        "relators" => relators = split_list(*line, value)?,
                        other => {
                            return Err(err(*line, format!("unknown key {other:?} in [group]")))
                        }
                    }
                }
                if generators.is_empty() {
                    return Err(err(section.line, "[group] needs at least one generator"));
                }
                group = Some(GroupSection { generators, relators });
            }
            "tower" => {
                if job.is_some() {
                    return Err(err(
                        section.line,
                        "config must hold exactly one of [tower] or [model]",
                    ));
                }
                job = Some(Job::Tower(parse_tower_section(section)?));
            }
            "model" => {
                if job.is_some() {
                    return Err(err(
                        section.line,
                        "config must hold exactly one of [tower] or [model]",
                    ));
                }
                job = Some(Job::Model(parse_model_section(section)?));
            }
            "analysis" => {
                for (line, key, value) in &section.entries {
                    match key.as_str() {
                        "depth" => analysis.depth = Some(parse_usize(*line, value)?),
                        "limit" => analysis.limit = Some(parse_usize(*line, value)?),
                        "seed" => analysis.seed = parse_u64(*line, value)?,
                        "samples" => analysis.samples = parse_usize(*line, value)?,
                        "budget" => analysis.budget = parse_usize(*line, value)?,
                        "catalog" => analysis.catalog = split_list(*line, value)?,
                        "witness" => analysis.witness = Some(value.trim_matches('"').to_string()),
                        "policy" => {
                            analysis.policy = match value.trim() {
                                "image-anywhere" => MonPolicy::ImageAnywhere,
                                "image-in-chain" => MonPolicy::ImageInChain,
                                other => {
                                    return Err(err(*line, format!("unknown policy {other:?}")))
                                }
                            }
                        }
                        "checks" => {
                            let mut checks = Vec::new();
                            for item in split_list(*line, value)? {
                                checks.push(match item.as_str() {
                                    "regularity" => CheckKind::Regularity,
                                    "fiber-action" => CheckKind::FiberAction,
                                    "bihomogeneity" => CheckKind::Bihomogeneity,
                                    other => {
                                        return Err(err(*line, format!("unknown check {other:?}")))
                                    }
                                });
                            }
                            analysis.checks = checks;
                        }
                        other => {
                            return Err(err(*line, format!("unknown key {other:?} in [analysis]")))
                        }
                    }
                }
            }
            other => return Err(err(section.line, format!("unknown section [{other}]"))),
        }
    }

    let job = job.ok_or_else(|| err(0, "config needs a [tower] or [model] section"))?;
    if matches!(job, Job::Tower(_)) && group.is_none() {
        return Err(err(0, "[tower] configs need a [group] section"));
    }
    let config = Config { group, job, analysis };
    // Semantic validation: parse the group eagerly so relator errors surface
    // at parse time with the offending name.
    if let Some(g) = &config.group {
        let p = Presentation::parse(g.generators.iter().map(String::as_str), &[])?;
        for r in &g.relators {
            p.parse_word(r)?;
        }
    }
    Ok(config)
}

fn parse_indexed(
    entries: &[(usize, String, String)],
    prefix: &str,
) -> Result<Vec<(usize, String)>> {
    // Collects prefix.1, prefix.2, ... in index order, rejecting gaps.
    let mut indexed: Vec<(usize, usize, String)> = Vec::new();
    for (line, key, value) in entries {
        if let Some(rest) = key.strip_prefix(prefix).and_then(|r| r.strip_prefix('.')) {
            let idx: usize = rest
                .parse()
                .map_err(|_| err(*line, format!("bad index in key {key:?}")))?;
            if idx == 0 {
                return Err(err(*line, "indices start at 1"));
            }
            indexed.push((idx, *line, value.clone()));
        }
    }
    indexed.sort_by_key(|(idx, _, _)| *idx);
    for (expected, (idx, line, _)) in indexed.iter().enumerate() {
        if *idx != expected + 1 {
            return Err(err(
                *line,
                format!("{prefix} indices must be 1..n without gaps"),
            ));
        }
    }
    Ok(indexed.into_iter().map(|(_, line, v)| (line, v)).collect())
}

fn parse_tower_section(section: &RawSection) -> Result<BuilderSection> {
    let mut builder_kind = None;
    for (line, key, value) in &section.entries {
        if key == "builder" {
            builder_kind = Some((*line, value.clone()));
        }
    }
    let (bline, kind) = builder_kind.ok_or_else(|| {
        err(
            section.line,
            "[tower] needs builder = cyclic | explicit | hom-kernel | mod-p-homology",
        )
    })?;
    let known_keys: &[&str] = match kind.as_str() {
        "cyclic" => &["builder", "multipliers"],
        "explicit" => &["builder", "level"],
        "hom-kernel" => &["builder", "target", "images"],
        "mod-p-homology" => &["builder", "prime", "steps"],
        other => return Err(err(bline, format!("unknown builder {other:?}"))),
    };
    for (line, key, _) in &section.entries {
        let base = key.split('.').next().unwrap_or(key);
        if !known_keys.contains(&base) {
            return Err(err(*line, format!("unknown key {key:?} for builder {kind}")));
        }
    }
    match kind.as_str() {
        "cyclic" => {
            let mut multipliers = Vec::new();
            for (line, key, value) in &section.entries {
                if key == "multipliers" {
                    for item in split_list(*line, value)? {
                        multipliers.push(parse_u64(*line, &item)?);
                    }
                }
            }
            if multipliers.is_empty() {
                return Err(err(bline, "cyclic builder needs multipliers"));
            }
            Ok(BuilderSection::Cyclic { multipliers })
        }
        "explicit" => {
            let levels = parse_indexed(&section.entries, "level")?
                .into_iter()
                .map(|(line, v)| split_list(line, &v))
                .collect::<Result<Vec<_>>>()?;
            if levels.is_empty() {
                return Err(err(bline, "explicit builder needs level.1, level.2, ..."));
            }
            Ok(BuilderSection::Explicit { levels })
        }
        "hom-kernel" => {
            let targets = parse_indexed(&section.entries, "target")?;
            let images = parse_indexed(&section.entries, "images")?;
            if targets.len() != images.len() || targets.is_empty() {
                return Err(err(
                    bline,
                    "hom-kernel builder needs matching target.k and images.k entries",
                ));
            }
            let mut out = Vec::new();
            for ((_, target), (iline, image_list)) in targets.into_iter().zip(images) {
                out.push((target.trim().to_string(), split_list(iline, &image_list)?));
            }
            Ok(BuilderSection::HomKernel { targets: out })
        }
        "mod-p-homology" => {
            let mut prime = None;
            let mut steps = None;
            for (line, key, value) in &section.entries {
                match key.as_str() {
                    "prime" => prime = Some(parse_u64(*line, value)?),
                    "steps" => steps = Some(parse_usize(*line, value)?),
                    _ => {}
                }
            }
            Ok(BuilderSection::ModP {
                prime: prime.ok_or_else(|| err(bline, "mod-p-homology needs prime"))?,
                steps: steps.ok_or_else(|| err(bline, "mod-p-homology needs steps"))?,
            })
        }
        _ => unreachable!(),
    }
}

fn parse_model_section(section: &RawSection) -> Result<ModelSection> {
    let mut group_name = None;
    let mut gamma = None;
    for (line, key, value) in &section.entries {
        let base = key.split('.').next().unwrap_or(key);
        match base {
            "group" => group_name = Some(value.trim().to_string()),
            "gamma" => gamma = Some(split_list(*line, value)?),
            "chain" => {}
            other => return Err(err(*line, format!("unknown key {other:?} in [model]"))),
        }
    }
    let chain = parse_indexed(&section.entries, "chain")?
        .into_iter()
        .map(|(line, v)| split_list(line, &v))
        .collect::<Result<Vec<_>>>()?;
    Ok(ModelSection {
        group_name,
        chain,
        gamma: gamma.ok_or_else(|| err(section.line, "[model] needs gamma"))?,
    })
}

/// The group presentation a config works over.
pub fn resolve_presentation(config: &Config) -> Result<Presentation> {
    match (&config.group, &config.job) {
        (Some(g), _) => Presentation::parse(
            g.generators.iter().map(String::as_str),
            &g.relators.iter().map(String::as_str).collect::<Vec<_>>(),
        ),
        (None, Job::Model(m)) => {
            let name = m.group_name.as_ref().ok_or_else(|| {
                err(0, "[model] needs either group = <name> or a [group] section")
            })?;
            Ok(catalog::builtin(name)?.presentation)
        }
        (None, Job::Tower(_)) => Err(err(0, "[tower] configs need a [group] section")),
    }
}

/// Resolves a tower config into a buildable spec. Hom-kernel targets are
/// looked up in the catalog; their image words are evaluated in the target.
pub fn resolve_tower(config: &Config) -> Result<TowerSpec> {
    let Job::Tower(builder) = &config.job else {
        return Err(err(0, "not a tower config"));
    };
    let base = resolve_presentation(config)?;
    let limit = config.analysis.limit.unwrap_or(DEFAULT_ENUM_LIMIT);
    let (builder, natural_depth) = match builder {
        BuilderSection::Cyclic { multipliers } => (
            ChainBuilder::Cyclic(multipliers.clone()),
            multipliers.len(),
        ),
        BuilderSection::Explicit { levels } => {
            let mut specs = Vec::new();
            for level in levels {
                let words = level
                    .iter()
                    .map(|w| base.parse_word(w))
                    .collect::<Result<Vec<_>>>()?;
                specs.push(SubgroupSpec::new(words));
            }
            let depth = specs.len();
            (ChainBuilder::Explicit(specs), depth)
        }
        BuilderSection::HomKernel { targets } => {
            let mut resolved = Vec::new();
            for (name, image_words) in targets {
                let cat = catalog::builtin(name)?;
                let images = image_words
                    .iter()
                    .map(|w| {
                        let word = cat.presentation.parse_word(w)?;
                        cat.group.eval_word(&word, cat.group.generators())
                    })
                    .collect::<Result<Vec<_>>>()?;
                resolved.push(KernelTarget {
                    name: cat.name.clone(),
                    group: cat.group,
                    images,
                });
            }
            let depth = resolved.len();
            (ChainBuilder::HomKernelChain(resolved), depth)
        }
        BuilderSection::ModP { prime, steps } => (
            ChainBuilder::ModPHomologyKernels {
                prime: *prime,
                depth: *steps,
            },
            *steps,
        ),
    };
    Ok(TowerSpec {
        base,
        builder,
        depth: config.analysis.depth.unwrap_or(natural_depth),
        limit,
    })
}

/// Resolves a model config into a finite model: the group from the catalog or
/// the `[group]` presentation, chain and γ generated by the listed words.
pub fn resolve_model(config: &Config) -> Result<FiniteSolenoidModel> {
    let Job::Model(section) = &config.job else {
        return Err(err(0, "not a model config"));
    };
    let limit = config.analysis.limit.unwrap_or(DEFAULT_ENUM_LIMIT);
    let (presentation, group): (Presentation, FiniteGroup) = match &section.group_name {
        Some(name) => {
            let cat = catalog::builtin(name)?;
            (cat.presentation, cat.group)
        }
        None => {
            let p = resolve_presentation(config)?;
            let table = CosetTable::enumerate(&p, &SubgroupSpec::trivial(), limit)?;
            let g = FiniteGroup::from_normal_coset_table("group", &table)?;
            (p, g)
        }
    };
    let eval = |words: &[String]| -> Result<Vec<usize>> {
        words
            .iter()
            .map(|w| {
                let word = presentation.parse_word(w)?;
                group.eval_word(&word, group.generators())
            })
            .collect()
    };
    let mut chain = vec![group.whole_subgroup()];
    for level in &section.chain {
        chain.push(group.subgroup_generated(&eval(level)?));
    }
    let gamma = group.subgroup_generated(&eval(&section.gamma)?);
    FiniteSolenoidModel::new(group, chain, gamma)
}

#[cfg(test)]
mod tests {
    use super::*;

    const DYADIC: &str = "\
# dyadic tower
[group]
generators = a
relators =

[tower]
builder = cyclic
multipliers = 2, 2, 2

[analysis]
depth = 3
checks = regularity, fiber-action, bihomogeneity
seed = 1
";

    #[test]
    fn minimal_dyadic_config_parses() {
        let config = parse_config(DYADIC).unwrap();
        let spec = resolve_tower(&config).unwrap();
        assert_eq!(spec.depth, 3);
        assert!(matches!(spec.builder, ChainBuilder::Cyclic(ref m) if m == &vec![2, 2, 2]));
    }

    #[test]
    fn unknown_generator_in_relator_is_a_semantic_error() {
        let text = "\
[group]
generators = a
relators = \"a e\"

[tower]
builder = cyclic
multipliers = 2
";
        assert!(matches!(parse_config(text), Err(Error::UnknownGenerator(_))));
    }

    #[test]
    fn unknown_keys_are_rejected_with_line_numbers() {
        let text = "\
[group]
generators = a
colour = blue
";
        match parse_config(text) {
            Err(Error::Config { line: 3, .. }) => {}
            other => panic!("expected a line-3 config error, got {other:?}"),
        }
    }

    #[test]
    fn genus2_hom_kernel_config_resolves() {
        let text = "\
[group]
generators = a, b, c, d
relators = \"a b a' b' c d c' d'\"

[tower]
builder = hom-kernel
target.1 = s3
images.1 = \"x\", \"y x\", \"y x\", \"x\"
";
        let config = parse_config(text).unwrap();
        let spec = resolve_tower(&config).unwrap();
        assert_eq!(spec.depth, 1);
        match &spec.builder {
            ChainBuilder::HomKernelChain(targets) => {
                assert_eq!(targets.len(), 1);
                assert_eq!(targets[0].name, "s3");
                assert_eq!(targets[0].images.len(), 4);
                // c = b and d = a as elements.
                assert_eq!(targets[0].images[1], targets[0].images[2]);
                assert_eq!(targets[0].images[0], targets[0].images[3]);
            }
            other => panic!("wrong builder {other:?}"),
        }
    }

    #[test]
    fn model_config_resolves_to_the_s3_model() {
        let text = "\
[model]
group = s3
chain.1 = \"y\"
gamma = \"x\"
";
        let config = parse_config(text).unwrap();
        let model = resolve_model(&config).unwrap();
        assert!(model.is_valid());
        assert_eq!(model.chain().len(), 2);
        assert_eq!(model.chain()[1].len(), 3);
        assert_eq!(model.gamma().len(), 2);
        assert_eq!(model.path_components().count(), 3);
    }

    #[test]
    fn tower_and_model_are_mutually_exclusive() {
        let text = "\
[group]
generators = a

[tower]
builder = cyclic
multipliers = 2

[model]
group = s3
gamma = \"x\"
";
        assert!(matches!(parse_config(text), Err(Error::Config { .. })));
    }

    #[test]
    fn empty_relator_list_is_fine() {
        let config = parse_config(DYADIC).unwrap();
        assert_eq!(config.group.unwrap().relators, Vec::<String>::new());
    }
}
