//! Named standard groups with canonical presentations.
//!
//! Every catalog group is built by enumerating the trivial subgroup of its
//! presentation and turning the table into an explicit group, so generator
//! words are always available. Direct products get a combined presentation
//! with commuting relators between the factors.

use crate::coset::{CosetTable, SubgroupSpec};
use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::words::Presentation;

/// A named group together with the presentation it was built from.
#[derive(Debug, Clone)]
pub struct CatalogGroup {
    pub name: String,
    pub presentation: Presentation,
    pub group: FiniteGroup,
}

fn build(name: &str, presentation: Presentation) -> Result<CatalogGroup> {
    let table = CosetTable::enumerate(&presentation, &SubgroupSpec::trivial(), 100_000)?;
    let group = FiniteGroup::from_normal_coset_table(name, &table)?;
    Ok(CatalogGroup {
        name: name.to_string(),
        presentation,
        group,
    })
}

fn cyclic_presentation(n: usize) -> Result<Presentation> {
    let relator = "a ".repeat(n).trim().to_string();
    Presentation::parse(["a"], &[relator.as_str()])
}

fn power(token: &str, n: usize) -> String {
    vec![token; n].join(" ")
}

/// Looks up a group by its lowercase catalog name.
///
/// Supported: `z1..z64` (cyclic), `s3`, `s4`, `a4`, `a5`, `d3..d6` (dihedral
/// of order 2n), `q8`, `dic3`, `v4`, and the abelian products `z4xz2`,
/// `z2xz2xz2`, `z6xz2`.
pub fn builtin(name: &str) -> Result<CatalogGroup> {
    let lower = name.to_ascii_lowercase();
    if let Some(rest) = lower.strip_prefix('z') {
        if let Ok(n) = rest.parse::<usize>() {
            if (1..=64).contains(&n) {
                return build(&lower, cyclic_presentation(n)?);
            }
        }
    }
    if let Some(rest) = lower.strip_prefix('d') {
        if let Ok(n) = rest.parse::<usize>() {
            if (3..=6).contains(&n) {
                let rn = power("r", n);
                return build(
                    &lower,
                    Presentation::parse(["r", "s"], &[rn.as_str(), "s s", "r s r s"])?,
                );
            }
        }
    }
    match lower.as_str() {
        "s3" => build("s3", Presentation::parse(["x", "y"], &["x x", "y y y", "x y x y"])?),
        "s4" => build(
            "s4",
            Presentation::parse(["x", "y"], &["x x", "y y y", "x y x y x y x y"])?,
        ),
        "a4" => build(
            "a4",
            Presentation::parse(["s", "t"], &["s s", "t t t", "s t s t s t"])?,
        ),
        "a5" => build(
            "a5",
            Presentation::parse(["s", "t"], &["s s", "t t t", "s t s t s t s t s t"])?,
        ),
        "q8" => build(
            "q8",
            Presentation::parse(["i", "j"], &["i i i i", "i i j' j'", "j i j' i"])?,
        ),
        "dic3" => build(
            "dic3",
            Presentation::parse(["a", "b"], &["a a a a a a", "a a a b' b'", "b a b' a"])?,
        ),
        "v4" => product(&lower, &["z2", "z2"]),
        "z4xz2" => product(&lower, &["z4", "z2"]),
        "z2xz2xz2" => product(&lower, &["z2", "z2", "z2"]),
        "z6xz2" => product(&lower, &["z6", "z2"]),
        _ => Err(Error::UnknownGenerator(format!("unknown catalog group {name}"))),
    }
}

/// Direct product of named catalog groups, with a combined presentation.
fn product(name: &str, factors: &[&str]) -> Result<CatalogGroup> {
    let parts: Vec<CatalogGroup> = factors
        .iter()
        .map(|f| builtin(f))
        .collect::<Result<Vec<_>>>()?;
    // Combined presentation: relabeled factor generators, factor relators,
    // and commutators across factors.
    let mut names = Vec::new();
    let mut offsets = Vec::new();
    for (i, part) in parts.iter().enumerate() {
        offsets.push(names.len());
        for g in part.presentation.generators().names() {
            names.push(format!("{g}{}", i + 1));
        }
    }
    let gens = crate::words::GeneratorSet::new(names.clone())?;
    let arity = gens.len();
    let mut relators = Vec::new();
    for (i, part) in parts.iter().enumerate() {
        for rel in part.presentation.relators() {
            let shifted = crate::words::Word::reduce(
                arity,
                rel.letters()
                    .iter()
                    .map(|l| crate::words::Letter::new(l.gen + offsets[i], l.inv)),
            );
            relators.push(shifted);
        }
    }
    for i in 0..arity {
        for j in (i + 1)..arity {
            let same_factor = offsets
                .iter()
                .zip(parts.iter())
                .any(|(&off, part)| {
                    let span = off..off + part.presentation.arity();
                    span.contains(&i) && span.contains(&j)
                });
            if !same_factor {
                let wi = crate::words::Word::generator(arity, i)?;
                let wj = crate::words::Word::generator(arity, j)?;
                relators.push(wi.commutator(&wj)?);
            }
        }
    }
    let presentation = Presentation::new(gens, relators)?;
    let mut acc = parts[0].group.clone();
    for part in &parts[1..] {
        acc = FiniteGroup::direct_product(name, &acc, &part.group)?;
    }
    // Rebuild through the presentation so generator words line up with it.
    let built = build(name, presentation)?;
    if built.group.order() != acc.order()
        || built.group.element_order_multiset() != acc.element_order_multiset()
    {
        return Err(Error::InvariantViolation(format!(
            "product presentation for {name} disagrees with the direct product"
        )));
    }
    Ok(built)
}

/// Seed list for the finite-model catalog sweep: every group of order
/// 4, 6, 8 or 12 up to isomorphism.
pub fn sweep_seed_names() -> Vec<&'static str> {
    vec![
        "z4", "v4", "z6", "s3", "z8", "z4xz2", "z2xz2xz2", "d4", "q8", "z12", "z6xz2", "d6",
        "a4", "dic3",
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_orders() {
        for (name, order) in [
            ("z1", 1),
            ("z2", 2),
            ("z12", 12),
            ("s3", 6),
            ("s4", 24),
            ("a4", 12),
            ("a5", 60),
            ("d4", 8),
            ("d6", 12),
            ("q8", 8),
            ("dic3", 12),
            ("v4", 4),
            ("z4xz2", 8),
            ("z2xz2xz2", 8),
            ("z6xz2", 12),
        ] {
            let g = builtin(name).unwrap();
            assert_eq!(g.group.order(), order, "order of {name}");
        }
    }

    #[test]
    fn sweep_seeds_have_expected_orders() {
        let mut by_order = std::collections::BTreeMap::new();
        for name in sweep_seed_names() {
            let g = builtin(name).unwrap();
            by_order
                .entry(g.group.order())
                .or_insert_with(Vec::new)
                .push(name);
        }
        // All groups of each order, up to isomorphism.
        assert_eq!(by_order[&4].len(), 2);
        assert_eq!(by_order[&6].len(), 2);
        assert_eq!(by_order[&8].len(), 5);
        assert_eq!(by_order[&12].len(), 5);
    }

    #[test]
    fn distinct_order_twelve_groups() {
        let sets: Vec<Vec<usize>> = ["z12", "z6xz2", "d6", "a4", "dic3"]
            .iter()
            .map(|n| builtin(n).unwrap().group.element_order_multiset())
            .collect();
        for i in 0..sets.len() {
            for j in (i + 1)..sets.len() {
                assert_ne!(sets[i], sets[j], "order multisets must distinguish the five groups");
            }
        }
    }

    #[test]
    fn unknown_name_rejected() {
        assert!(builtin("zz").is_err());
        assert!(builtin("z0").is_err());
    }
}
