//! Certified abelianness per level and the bihomogeneity verdict.
//!
//! A tower is algebraically bihomogeneous exactly when some chain subgroup is
//! abelian modulo the kernel. Certificates here are sound in both directions
//! and never guessed:
//!
//! - ABELIAN: the Reidemeister–Schreier presentation of Nⱼ, after
//!   simplification, has every pairwise generator commutator derivable from
//!   its relators (then every deeper level is a subgroup of an abelian
//!   group);
//! - NONABELIAN: two Schreier generators of Nⱼ with non-commuting images
//!   under a homomorphism whose kernel provably contains the chain
//!   intersection — a transition to a deeper built level, or a surjection
//!   onto a catalog group that is then folded into the chain as a refinement
//!   so that the containment holds by construction.
//!
//! Negative verdicts are finite-prefix claims: they certify nonabelianness of
//! N₀..N_J modulo the (refined) chain, never the unverifiable statement about
//! all sufficiently large levels.

use serde::{Deserialize, Serialize};

use crate::catalog::CatalogGroup;
use crate::coset::SubgroupSpec;
use crate::error::{Error, Result};
use crate::homsearch;
use crate::schreier::{self, AbelianCertificate};
use crate::tower::{kernel_table, Tower};
use crate::words::Word;

pub const DEFAULT_CATALOG: [&str; 3] = ["s3", "s4", "a5"];

/// How a level earned its abelian certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum AbelianRoute {
    /// Commutators of the simplified subgroup presentation were derived
    /// from its relators.
    Derived { generators: usize, relators: usize },
    /// The level sits inside an already-certified abelian level.
    SubgroupOfAbelianLevel { level: usize },
}

/// How a nonabelian witness homomorphism was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum WitnessRoute {
    /// Images in the quotient at a deeper built level.
    Transition { to_level: usize },
    /// A surjection onto a catalog group, folded into the chain.
    Catalog { name: String, images: Vec<usize> },
}

/// A re-verifiable nonabelianness witness for one level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonabelianCert {
    pub level: usize,
    /// Schreier generators of N_level, as ambient words.
    pub u: Word,
    pub v: Word,
    pub route: WitnessRoute,
    pub image_u: usize,
    pub image_v: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum LevelCertificate {
    Abelian(AbelianRoute),
    Nonabelian(NonabelianCert),
    Unknown,
}

impl LevelCertificate {
    pub fn kind(&self) -> &'static str {
        match self {
            LevelCertificate::Abelian(_) => "ABELIAN",
            LevelCertificate::Nonabelian(_) => "NONABELIAN",
            LevelCertificate::Unknown => "UNKNOWN",
        }
    }
}

/// A chain extension recorded when a catalog quotient is used as a witness:
/// the appended subgroup is N_depth ∩ ker ψ, so the chain intersection lies
/// inside ker ψ for every tower refining through it.
#[derive(Debug, Clone)]
pub struct Refinement {
    pub for_level: usize,
    pub target_name: String,
    pub images: Vec<usize>,
    pub appended_index: usize,
    pub appended_spec: SubgroupSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictStatus {
    BihomogeneousCertified { level: usize },
    NotBihomogeneousCertified { through_level: usize },
    Unknown { depth: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelAnalysis {
    pub level: usize,
    pub order: usize,
    pub schreier_generators: usize,
    pub certificate: LevelCertificate,
}

/// The full analysis outcome for a tower prefix.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub status: VerdictStatus,
    pub levels: Vec<LevelAnalysis>,
    pub refinements: Vec<Refinement>,
}

/// Options for the verdict computation.
#[derive(Debug, Clone)]
pub struct AnalysisOptions {
    pub catalog: Vec<CatalogGroup>,
    pub tietze_budget: usize,
    /// Deepest level transitions may be taken to when hunting witnesses.
    pub search_depth: Option<usize>,
}

impl AnalysisOptions {
    pub fn with_default_catalog() -> Result<Self> {
        let catalog = DEFAULT_CATALOG
            .iter()
            .map(|n| crate::catalog::builtin(n))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            catalog,
            tietze_budget: schreier::DEFAULT_TIETZE_BUDGET,
            search_depth: None,
        })
    }
}

/// Abelianness certificate for one level of a built tower.
///
/// Witness routes are tried in order of how cheaply their soundness comes:
/// transitions to deeper built levels first (the kernel containment is free),
/// then catalog members where success is forced a priori (nonabelian simple
/// targets too large to factor through G/Nⱼ), then the rest of the catalog.
pub fn abelianness_verdict(
    tower: &Tower,
    j: usize,
    options: &AnalysisOptions,
) -> Result<(LevelCertificate, Option<Refinement>)> {
    let level = tower.level(j)?;
    let data = schreier::rewrite_subgroup_presentation(&level.table)?;
    let simplified = schreier::simplify_presentation(&data.presentation)?;

    if let AbelianCertificate::CertifiedAbelian =
        schreier::certify_abelian(&simplified, options.tietze_budget, &[])?
    {
        return Ok((
            LevelCertificate::Abelian(AbelianRoute::Derived {
                generators: simplified.arity(),
                relators: simplified.relators().len(),
            }),
            None,
        ));
    }

    let sgens: Vec<Word> = data.generators.iter().map(|s| s.word.clone()).collect();
    let search_depth = options.search_depth.unwrap_or_else(|| tower.depth());

    // Route 1: transitions to deeper built levels.
    for m in (j + 1)..=search_depth.min(tower.depth()) {
        let deeper = tower.level(m)?;
        let images: Vec<usize> = sgens
            .iter()
            .map(|w| deeper.table.trace(0, w))
            .collect::<Result<Vec<_>>>()?;
        let deeper_quotient = &tower.quotient(m)?.group;
        if let Some((i1, i2)) = first_noncommuting_pair(deeper_quotient, &images) {
            let cert = NonabelianCert {
                level: j,
                u: sgens[i1].clone(),
                v: sgens[i2].clone(),
                route: WitnessRoute::Transition { to_level: m },
                image_u: images[i1],
                image_v: images[i2],
            };
            verify_witness(tower, &cert)?;
            return Ok((LevelCertificate::Nonabelian(cert), None));
        }
    }

    // Routes 2 and 3: catalog quotients, guaranteed targets first.
    let index_j = level.table.index();
    let guaranteed: Vec<bool> = options
        .catalog
        .iter()
        .map(|c| !c.group.is_abelian() && c.group.order() > index_j && c.group.is_simple())
        .collect();
    for pass in [true, false] {
        for (cat, &is_guaranteed) in options.catalog.iter().zip(&guaranteed) {
            if is_guaranteed != pass {
                continue;
            }
            if let Some(cert) = search_catalog_witness(tower, j, &sgens, cat)? {
                verify_witness(tower, &cert)?;
                let refinement = fold_into_chain(tower, &cert, cat)?;
                return Ok((LevelCertificate::Nonabelian(cert), Some(refinement)));
            }
        }
    }
    Ok((LevelCertificate::Unknown, None))
}

fn first_noncommuting_pair(
    group: &crate::group::FiniteGroup,
    images: &[usize],
) -> Option<(usize, usize)> {
    for i1 in 0..images.len() {
        for i2 in (i1 + 1)..images.len() {
            if group.mul(images[i1], images[i2]) != group.mul(images[i2], images[i1]) {
                return Some((i1, i2));
            }
        }
    }
    None
}

/// Scans surjections of the base group onto a catalog target in lexicographic
/// image order, returning the first that separates two Schreier generators.
fn search_catalog_witness(
    tower: &Tower,
    j: usize,
    sgens: &[Word],
    cat: &CatalogGroup,
) -> Result<Option<NonabelianCert>> {
    let base = tower.base();
    let mut found: Option<NonabelianCert> = None;
    let mut failure: Option<Error> = None;
    homsearch::visit_homomorphisms(base, &cat.group, true, &mut |images| {
        let mapped: std::result::Result<Vec<usize>, Error> = sgens
            .iter()
            .map(|w| cat.group.eval_word(w, images))
            .collect();
        match mapped {
            Err(e) => {
                failure = Some(e);
                false
            }
            Ok(mapped) => match first_noncommuting_pair(&cat.group, &mapped) {
                Some((i1, i2)) => {
                    found = Some(NonabelianCert {
                        level: j,
                        u: sgens[i1].clone(),
                        v: sgens[i2].clone(),
                        route: WitnessRoute::Catalog {
                            name: cat.name.clone(),
                            images: images.to_vec(),
                        },
                        image_u: mapped[i1],
                        image_v: mapped[i2],
                    });
                    false
                }
                None => true,
            },
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(found)
}

/// Every emitted witness re-verifies from scratch: the homomorphism kills all
/// relators, u and v lie in N_level, and their images fail to commute.
pub fn verify_witness(tower: &Tower, cert: &NonabelianCert) -> Result<()> {
    let level = tower.level(cert.level)?;
    if !level.table.contains(&cert.u)? || !level.table.contains(&cert.v)? {
        return Err(Error::InvariantViolation(
            "witness words are not in the subgroup".into(),
        ));
    }
    match &cert.route {
        WitnessRoute::Transition { to_level } => {
            let deeper = tower.level(*to_level)?;
            let iu = deeper.table.trace(0, &cert.u)?;
            let iv = deeper.table.trace(0, &cert.v)?;
            if iu != cert.image_u || iv != cert.image_v {
                return Err(Error::InvariantViolation("witness images drifted".into()));
            }
            let q = &tower.quotient(*to_level)?.group;
            if q.mul(iu, iv) == q.mul(iv, iu) {
                return Err(Error::InvariantViolation(
                    "witness images commute after all".into(),
                ));
            }
        }
        WitnessRoute::Catalog { name, images } => {
            let cat = crate::catalog::builtin(name)?;
            for relator in tower.base().relators() {
                if cat.group.eval_word(relator, images)? != 0 {
                    return Err(Error::RelatorViolation {
                        relator: relator.display(tower.base().generators()),
                    });
                }
            }
            let iu = cat.group.eval_word(&cert.u, images)?;
            let iv = cat.group.eval_word(&cert.v, images)?;
            if iu != cert.image_u || iv != cert.image_v {
                return Err(Error::InvariantViolation("witness images drifted".into()));
            }
            if cat.group.mul(iu, iv) == cat.group.mul(iv, iu) {
                return Err(Error::InvariantViolation(
                    "witness images commute after all".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Folds a catalog witness kernel into the chain: appends
/// N_depth ∩ ker ψ, realized as the kernel of G → G/N_depth × Q.
fn fold_into_chain(
    tower: &Tower,
    cert: &NonabelianCert,
    cat: &CatalogGroup,
) -> Result<Refinement> {
    let WitnessRoute::Catalog { name, images } = &cert.route else {
        return Err(Error::InvariantViolation(
            "only catalog witnesses fold into the chain".into(),
        ));
    };
    let deepest = tower.quotient(tower.depth())?;
    let product = crate::group::FiniteGroup::direct_product(
        "refinement",
        &deepest.group,
        &cat.group,
    )?;
    let combined: Vec<usize> = deepest
        .group
        .generators()
        .iter()
        .zip(images)
        .map(|(&a, &b)| a * cat.group.order() + b)
        .collect();
    let table = kernel_table(tower.base(), &product, &combined)?;
    Ok(Refinement {
        for_level: cert.level,
        target_name: name.clone(),
        images: images.clone(),
        appended_index: table.index(),
        appended_spec: table.subgroup().clone(),
    })
}

/// Per-level certificates for levels 0..=depth plus the overall verdict.
///
/// Once a level is certified abelian, deeper levels inherit the certificate
/// (a subgroup of an abelian group is abelian). The negative verdict requires
/// a nonabelian certificate at every analyzed level; anything else with no
/// abelian level is reported unknown.
pub fn bihomogeneity_report(
    tower: &Tower,
    depth: usize,
    options: &AnalysisOptions,
) -> Result<Verdict> {
    let depth = depth.min(tower.depth());
    let mut levels = Vec::new();
    let mut refinements = Vec::new();
    let mut first_abelian: Option<usize> = None;
    for j in 0..=depth {
        let certificate = if let Some(a) = first_abelian {
            LevelCertificate::Abelian(AbelianRoute::SubgroupOfAbelianLevel { level: a })
        } else {
            let (cert, refinement) = abelianness_verdict(tower, j, options)?;
            if let Some(r) = refinement {
                refinements.push(r);
            }
            cert
        };
        if first_abelian.is_none() {
            if let LevelCertificate::Abelian(_) = certificate {
                first_abelian = Some(j);
            }
        }
        let level = tower.level(j)?;
        levels.push(LevelAnalysis {
            level: j,
            order: level.table.index(),
            schreier_generators: schreier::schreier_generators(&level.table).len(),
            certificate,
        });
    }
    let status = if let Some(j) = first_abelian {
        VerdictStatus::BihomogeneousCertified { level: j }
    } else if levels
        .iter()
        .all(|l| matches!(l.certificate, LevelCertificate::Nonabelian(_)))
    {
        VerdictStatus::NotBihomogeneousCertified {
            through_level: depth,
        }
    } else {
        VerdictStatus::Unknown { depth }
    };
    Ok(Verdict {
        status,
        levels,
        refinements,
    })
}
