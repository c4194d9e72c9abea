//! Solenoid towers over finitely presented base groups.
//!
//! A tower is the base group G together with a descending chain of
//! finite-index normal subgroups N₀ = G ⊇ N₁ ⊇ … ⊇ N_depth. Levels carry the
//! coset table of Nₙ, the finite quotient G/Nₙ, and the images of the
//! shallower chain members inside it; transitions between levels realize the
//! bonding maps. The kernel is always understood as the intersection of the
//! whole chain, so nonmembership is semidecided by finding a level where an
//! element survives.

use serde::{Deserialize, Serialize};

use crate::coset::{CosetTable, SubgroupSpec};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupHom, Subgroup};
use crate::rng::SplitMix64;
use crate::schreier;
use crate::words::{Presentation, Word};

pub const DEFAULT_ENUM_LIMIT: usize = 1_000_000;

/// A finite quotient target with chosen generator images.
#[derive(Debug, Clone)]
pub struct KernelTarget {
    pub name: String,
    pub group: FiniteGroup,
    /// One element of `group` per base-group generator.
    pub images: Vec<usize>,
}

/// How the subgroup chain is produced.
#[derive(Debug, Clone)]
pub enum ChainBuilder {
    /// The chain below N₀, one spec per level.
    Explicit(Vec<SubgroupSpec>),
    /// For G = ℤ = ⟨a⟩: Nᵢ = ⟨a^(k₁···kᵢ)⟩.
    Cyclic(Vec<u64>),
    /// Nᵢ = kernel of the product map onto the first i targets.
    HomKernelChain(Vec<KernelTarget>),
    /// Nᵢ₊₁ = elements of Nᵢ that die in H₁(Nᵢ; ℤ/p).
    ModPHomologyKernels { prime: u64, depth: usize },
}

#[derive(Debug, Clone)]
pub struct TowerSpec {
    pub base: Presentation,
    pub builder: ChainBuilder,
    pub depth: usize,
    pub limit: usize,
}

/// One built level: the table of Nₙ and, when Nₙ is normal, the quotient.
#[derive(Debug, Clone)]
pub struct LevelData {
    pub level: usize,
    pub table: CosetTable,
    /// Absent exactly when the level subgroup is not normal in the base
    /// group, which regularity validation reports.
    pub quotient: Option<QuotientData>,
}

/// The finite quotient G/Nₙ with the images of the shallower chain members.
#[derive(Debug, Clone)]
pub struct QuotientData {
    pub group: FiniteGroup,
    /// `chain_images[i]` = image of Nᵢ in G/Nₙ, for i = 0..=n.
    pub chain_images: Vec<Subgroup>,
}

/// Regularity diagnostics; empty issues means the chain is regular.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub normal: Vec<bool>,
    pub nested: Vec<bool>,
    pub issues: Vec<String>,
}

impl RegularityReport {
    pub fn is_regular(&self) -> bool {
        self.issues.is_empty()
    }
}

/// Builds the subgroup chain N₀ (= G), N₁, …, N_depth from the spec.
pub fn build_chain(spec: &TowerSpec) -> Result<Vec<SubgroupSpec>> {
    let whole = SubgroupSpec::new(spec.base.generator_words());
    let mut chain = vec![whole];
    match &spec.builder {
        ChainBuilder::Explicit(levels) => {
            for level in levels.iter().take(spec.depth) {
                for w in &level.generators {
                    if w.arity() != spec.base.arity() {
                        return Err(Error::GeneratorSetMismatch {
                            left: spec.base.arity(),
                            right: w.arity(),
                        });
                    }
                }
                chain.push(level.clone());
            }
        }
        ChainBuilder::Cyclic(multipliers) => {
            if spec.base.arity() != 1 || !spec.base.relators().is_empty() {
                return Err(Error::InvariantViolation(
                    "cyclic towers need the free rank-one base".into(),
                ));
            }
            for &k in multipliers {
                if k < 2 {
                    return Err(Error::InvariantViolation(
                        "cyclic multipliers must be at least 2".into(),
                    ));
                }
            }
            let mut product: u64 = 1;
            let a = Word::generator(1, 0)?;
            for &k in multipliers.iter().take(spec.depth) {
                product = product.checked_mul(k).ok_or_else(|| {
                    Error::InvariantViolation("multiplier overflow".into())
                })?;
                chain.push(SubgroupSpec::new(vec![a.power(product as i64)]));
            }
        }
        ChainBuilder::HomKernelChain(targets) => {
            let mut acc: Option<(FiniteGroup, Vec<usize>)> = None;
            for target in targets.iter().take(spec.depth) {
                verify_images(&spec.base, &target.group, &target.images)?;
                acc = Some(match acc {
                    None => (target.group.clone(), target.images.clone()),
                    Some((g, imgs)) => {
                        let product = FiniteGroup::direct_product("product", &g, &target.group)?;
                        let combined: Vec<usize> = imgs
                            .iter()
                            .zip(&target.images)
                            .map(|(&a, &b)| a * target.group.order() + b)
                            .collect();
                        (product, combined)
                    }
                });
                let (g, imgs) = acc.as_ref().unwrap();
                let table = kernel_table(&spec.base, g, imgs)?;
                chain.push(table.subgroup().clone());
            }
        }
        ChainBuilder::ModPHomologyKernels { prime, depth } => {
            if !is_prime(*prime) {
                return Err(Error::InvariantViolation(format!(
                    "{prime} is not prime"
                )));
            }
            let steps = (*depth).min(spec.depth);
            let mut current = SubgroupSpec::new(spec.base.generator_words());
            for _ in 0..steps {
                let table = CosetTable::enumerate(&spec.base, &current, spec.limit)?;
                let next = mod_p_homology_kernel(&table, *prime, spec.limit)?;
                chain.push(next.subgroup().clone());
                current = next.subgroup().clone();
            }
        }
    }
    Ok(chain)
}

fn verify_images(base: &Presentation, target: &FiniteGroup, images: &[usize]) -> Result<()> {
    if images.len() != base.arity() {
        return Err(Error::MissingImage(images.len()));
    }
    for relator in base.relators() {
        if target.eval_word(relator, images)? != 0 {
            return Err(Error::RelatorViolation {
                relator: relator.display(base.generators()),
            });
        }
    }
    Ok(())
}

/// Coset table of ker(ψ) for ψ: G → target with the given generator images:
/// cosets are the elements of the image subgroup, acted on by right
/// multiplication. The subgroup spec holds the Schreier generators.
pub fn kernel_table(
    base: &Presentation,
    target: &FiniteGroup,
    images: &[usize],
) -> Result<CosetTable> {
    verify_images(base, target, images)?;
    let image = target.subgroup_generated(images);
    // Sorted members; identity 0 is coset 0.
    let index_of = |x: usize| image.members().binary_search(&x).expect("closed image");
    let action: Vec<Vec<usize>> = images
        .iter()
        .map(|&img| {
            image
                .members()
                .iter()
                .map(|&x| index_of(target.mul(x, img)))
                .collect()
        })
        .collect();
    let table = CosetTable::from_action(base, &action)?;
    let gens = schreier::schreier_generators(&table)
        .into_iter()
        .map(|s| s.word)
        .collect();
    table.attach_subgroup(SubgroupSpec::new(gens))
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

/// Row-echelon basis over F_p with pivot bookkeeping, for reducing vectors
/// modulo the relator row space.
struct FpRowSpace {
    p: u64,
    /// (pivot column, normalized row) pairs.
    rows: Vec<(usize, Vec<u64>)>,
}

impl FpRowSpace {
    fn new(p: u64, vectors: &[Vec<u64>]) -> Self {
        let mut space = Self { p, rows: Vec::new() };
        for v in vectors {
            space.insert(v.clone());
        }
        space
    }

    fn inv_mod(&self, a: u64) -> u64 {
        // p is prime and a ≠ 0 mod p.
        let mut result = 1u64;
        let mut base = a % self.p;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                result = result * base % self.p;
            }
            base = base * base % self.p;
            e >>= 1;
        }
        result
    }

    fn reduce(&self, mut v: Vec<u64>) -> Vec<u64> {
        for (pivot, row) in &self.rows {
            let coeff = v[*pivot] % self.p;
            if coeff != 0 {
                for (vi, ri) in v.iter_mut().zip(row) {
                    *vi = (*vi + (self.p - coeff) * ri) % self.p;
                }
            }
        }
        v
    }

    fn insert(&mut self, v: Vec<u64>) {
        let mut v = self.reduce(v);
        if let Some(pivot) = v.iter().position(|&x| x % self.p != 0) {
            let inv = self.inv_mod(v[pivot]);
            for x in v.iter_mut() {
                *x = *x * inv % self.p;
            }
            self.rows.push((pivot, v));
            self.rows.sort_by_key(|(c, _)| *c);
        }
    }

    fn rank(&self) -> usize {
        self.rows.len()
    }
}

/// The kernel of Nᵢ → H₁(Nᵢ; ℤ/p), as a coset table over the base group.
///
/// States of the covering action are (base coset, reduced exponent vector);
/// crossing a Schreier edge adds that generator's basis vector. The
/// stabilizer of (0, 0) is exactly the set of Nᵢ-elements with trivial mod-p
/// abelianization.
pub fn mod_p_homology_kernel(
    base_table: &CosetTable,
    p: u64,
    limit: usize,
) -> Result<CosetTable> {
    let presentation = base_table.presentation().clone();
    let data = schreier::rewrite_subgroup_presentation(base_table)?;
    let m = data.generator_count();
    // Exponent-sum vectors of the rewritten relators.
    let relator_vectors: Vec<Vec<u64>> = data
        .presentation
        .relators()
        .iter()
        .map(|r| {
            let mut v = vec![0u64; m];
            for l in r.letters() {
                v[l.gen] = (v[l.gen] + if l.inv { p - 1 } else { 1 }) % p;
            }
            v
        })
        .collect();
    let space = FpRowSpace::new(p, &relator_vectors);
    let _quotient_dim = m - space.rank();

    // BFS over (coset, vector) states, columns in order, assigning indices in
    // discovery order.
    type State = (usize, Vec<u64>);
    let mut index: std::collections::HashMap<State, usize> = std::collections::HashMap::new();
    let start: State = (0, space.reduce(vec![0; m]));
    index.insert(start.clone(), 0);
    let mut states = vec![start];
    let mut queue = std::collections::VecDeque::from([0usize]);
    let arity = presentation.arity();
    let mut action: Vec<Vec<usize>> = vec![Vec::new(); arity];
    let mut edges: Vec<Vec<Option<usize>>> = Vec::new();

    while let Some(si) = queue.pop_front() {
        let (coset, vector) = states[si].clone();
        let mut row = vec![None; arity];
        for (g, slot) in row.iter_mut().enumerate() {
            let target_coset = base_table.step(coset, crate::words::Letter::new(g, false));
            let mut v = vector.clone();
            if let Some(pair) = data.pair(coset, g) {
                v[pair] = (v[pair] + 1) % p;
            }
            let v = space.reduce(v);
            let next: State = (target_coset, v);
            let ni = match index.get(&next) {
                Some(&ni) => ni,
                None => {
                    let ni = states.len();
                    if ni >= limit {
                        return Err(Error::LimitExceeded { limit });
                    }
                    index.insert(next.clone(), ni);
                    states.push(next);
                    queue.push_back(ni);
                    ni
                }
            };
            *slot = Some(ni);
        }
        if edges.len() <= si {
            edges.resize(si + 1, vec![None; arity]);
        }
        edges[si] = row;
    }
    let n = states.len();
    for (g, slot) in action.iter_mut().enumerate() {
        let mut perm = vec![0usize; n];
        for (si, row) in edges.iter().enumerate() {
            perm[si] = row[g].ok_or_else(|| {
                Error::InvariantViolation("uncovered state in homology cover".into())
            })?;
        }
        *slot = perm;
    }
    let table = CosetTable::from_action(&presentation, &action)?;
    let gens = schreier::schreier_generators(&table)
        .into_iter()
        .map(|s| s.word)
        .collect();
    table.attach_subgroup(SubgroupSpec::new(gens))
}

/// A fully built tower: chain, levels 0..=depth, and cached tables.
#[derive(Debug, Clone)]
pub struct Tower {
    base: Presentation,
    limit: usize,
    chain: Vec<SubgroupSpec>,
    levels: Vec<LevelData>,
}

impl Tower {
    /// Builds every level of the spec; fails on the first level whose
    /// enumeration exceeds the limit.
    pub fn build(spec: &TowerSpec) -> Result<Tower> {
        let chain = build_chain(spec)?;
        let mut tower = Tower {
            base: spec.base.clone(),
            limit: spec.limit,
            chain,
            levels: Vec::new(),
        };
        for n in 0..tower.chain.len() {
            let level = tower.build_level(n)?;
            tower.levels.push(level);
        }
        Ok(tower)
    }

    fn build_level(&self, n: usize) -> Result<LevelData> {
        let table = CosetTable::enumerate(&self.base, &self.chain[n], self.limit)?;
        let quotient = if table.is_normal()? {
            let group = FiniteGroup::from_normal_coset_table(format!("level{n}"), &table)?;
            // Truncated density: the generator images generate the whole quotient.
            let generated = group.subgroup_generated(group.generators());
            if generated.len() != group.order() {
                return Err(Error::InvariantViolation(format!(
                    "generator images fail to generate level {n}"
                )));
            }
            let mut chain_images = Vec::new();
            for spec in self.chain.iter().take(n + 1) {
                let mut seeds = Vec::new();
                for w in &spec.generators {
                    seeds.push(table.trace(0, w)?);
                }
                chain_images.push(group.subgroup_generated(&seeds));
            }
            Some(QuotientData {
                group,
                chain_images,
            })
        } else {
            None
        };
        Ok(LevelData {
            level: n,
            table,
            quotient,
        })
    }

    pub fn base(&self) -> &Presentation {
        &self.base
    }

    pub fn chain(&self) -> &[SubgroupSpec] {
        &self.chain
    }

    pub fn depth(&self) -> usize {
        self.chain.len() - 1
    }

    pub fn level(&self, n: usize) -> Result<&LevelData> {
        self.levels.get(n).ok_or(Error::ChainIndexOutOfRange {
            index: n,
            len: self.levels.len(),
        })
    }

    /// The quotient data at a level; fails with [`Error::NotNormal`] when the
    /// level subgroup is not normal.
    pub fn quotient(&self, n: usize) -> Result<&QuotientData> {
        self.level(n)?.quotient.as_ref().ok_or(Error::NotNormal)
    }

    pub fn levels(&self) -> &[LevelData] {
        &self.levels
    }

    /// Verifies each Nᵢ is normal in G (which covers normality in every
    /// intermediate subgroup) and that the chain nests strictly.
    pub fn validate_regularity(&self) -> Result<RegularityReport> {
        let mut report = RegularityReport::default();
        for (i, level) in self.levels.iter().enumerate() {
            let normal = level.table.is_normal()?;
            report.normal.push(normal);
            if !normal {
                report
                    .issues
                    .push(format!("chain member {i} is not normal in the base group"));
            }
        }
        for i in 1..self.chain.len() {
            let mut contained = true;
            for w in &self.chain[i].generators {
                contained &= self.levels[i - 1].table.contains(w)?;
            }
            // Strictness: indices must grow.
            let strict = self.levels[i].table.index() > self.levels[i - 1].table.index();
            report.nested.push(contained && strict);
            if !contained {
                report
                    .issues
                    .push(format!("chain member {i} is not contained in member {}", i - 1));
            }
            if !strict {
                report
                    .issues
                    .push(format!("chain does not descend strictly at {i}"));
            }
        }
        Ok(report)
    }

    /// The bonding map G/Nₙ → G/Nₘ for n ≥ m: coset c ↦ trace of rep(c) in
    /// the level-m table. Verified multiplicative and surjective.
    pub fn transition(&self, n: usize, m: usize) -> Result<GroupHom> {
        if m > n {
            return Err(Error::ChainIndexOutOfRange {
                index: m,
                len: n + 1,
            });
        }
        let src = self.quotient(n)?;
        let src_table = &self.level(n)?.table;
        let tgt = self.quotient(m)?;
        let tgt_table = &self.level(m)?.table;
        let whole = src.group.whole_subgroup();
        let assignment: Vec<(usize, usize)> = (0..src.group.order())
            .map(|c| Ok((c, tgt_table.trace(0, src_table.rep(c))?)))
            .collect::<Result<Vec<_>>>()?;
        let hom = GroupHom::new(&src.group, &whole, &tgt.group, &assignment)?;
        let image = hom.image_set(&whole);
        if image.len() != tgt.group.order() {
            return Err(Error::InvariantViolation(format!(
                "transition {n} -> {m} is not surjective"
            )));
        }
        Ok(hom)
    }

    /// Least level m ≤ depth where the word has a nontrivial image,
    /// certifying that it lies outside the chain intersection. `None` makes
    /// no claim.
    pub fn kernel_nonmembership_witness(&self, w: &Word, depth: usize) -> Result<Option<usize>> {
        for m in 0..=depth.min(self.depth()) {
            if self.level(m)?.table.trace(0, w)? != 0 {
                return Ok(Some(m));
            }
        }
        Ok(None)
    }
}

/// Checks the deck-transformation identity on a level: with the fiber the
/// elements of G/Nₙ, left multiplication as deck transformations and
/// right word-tracing as the path-lifting action, (h·g)∘γ = h·(g∘γ).
///
/// Exhaustive over all triples when the fiber has at most 64 elements,
/// otherwise `samples` seeded random triples.
pub fn fiber_action_check(
    table: &CosetTable,
    quotient: &FiniteGroup,
    samples: usize,
    seed: u64,
) -> Result<bool> {
    let order = quotient.order();
    let check = |h: usize, g: usize, gamma: usize| -> Result<bool> {
        let word = table.rep(gamma);
        let lhs = table.trace(quotient.mul(h, g), word)?;
        let rhs = quotient.mul(h, table.trace(g, word)?);
        Ok(lhs == rhs)
    };
    if order <= 64 {
        for h in 0..order {
            for g in 0..order {
                for gamma in 0..order {
                    if !check(h, g, gamma)? {
                        return Ok(false);
                    }
                }
            }
        }
    } else {
        let mut rng = SplitMix64::new(seed);
        for _ in 0..samples {
            let h = rng.below(order);
            let g = rng.below(order);
            let gamma = rng.below(order);
            if !check(h, g, gamma)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn dyadic(depth: usize) -> TowerSpec {
        TowerSpec {
            base: Presentation::parse(["a"], &[]).unwrap(),
            builder: ChainBuilder::Cyclic(vec![2; depth]),
            depth,
            limit: DEFAULT_ENUM_LIMIT,
        }
    }

    fn klein_base() -> Presentation {
        Presentation::parse(["a", "b"], &["a b a' b"]).unwrap()
    }

    /// The closure chain ⟨a^(2^i), b^(2^i)⟩, already normal as written.
    fn klein_closure_tower(depth: usize) -> Tower {
        let base = klein_base();
        let levels = (1..=depth)
            .map(|i| {
                let k = 1i64 << i;
                SubgroupSpec::new(vec![
                    base.parse_word("a").unwrap().power(k),
                    base.parse_word("b").unwrap().power(k),
                ])
            })
            .collect();
        Tower::build(&TowerSpec {
            base,
            builder: ChainBuilder::Explicit(levels),
            depth,
            limit: DEFAULT_ENUM_LIMIT,
        })
        .unwrap()
    }

    #[test]
    fn dyadic_chain_indices() {
        let tower = Tower::build(&dyadic(3)).unwrap();
        let orders: Vec<usize> = tower.levels().iter().map(|l| l.table.index()).collect();
        assert_eq!(orders, vec![1, 2, 4, 8]);
        assert!(tower.validate_regularity().unwrap().is_regular());
        // Chain-image orders inside level 3: 8, 4, 2, 1.
        let images: Vec<usize> = tower
            .quotient(3)
            .unwrap()
            .chain_images
            .iter()
            .map(Subgroup::len)
            .collect();
        assert_eq!(images, vec![8, 4, 2, 1]);
    }

    #[test]
    fn mixed_multiplier_chain() {
        let spec = TowerSpec {
            base: Presentation::parse(["a"], &[]).unwrap(),
            builder: ChainBuilder::Cyclic(vec![2, 3, 4]),
            depth: 3,
            limit: DEFAULT_ENUM_LIMIT,
        };
        let tower = Tower::build(&spec).unwrap();
        let orders: Vec<usize> = tower.levels().iter().map(|l| l.table.index()).collect();
        assert_eq!(orders, vec![1, 2, 6, 24]);
    }

    #[test]
    fn klein_closure_chain_level_two_is_the_nonabelian_order_sixteen_group() {
        let tower = klein_closure_tower(2);
        let orders: Vec<usize> = tower.levels().iter().map(|l| l.table.index()).collect();
        assert_eq!(orders, vec![1, 4, 16]);
        assert!(tower.validate_regularity().unwrap().is_regular());
        let q = &tower.quotient(2).unwrap().group;
        assert!(!q.is_abelian());
        // a b a⁻¹ = b⁻¹ with b of order 4.
        let a = q.generators()[0];
        let b = q.generators()[1];
        assert_eq!(q.element_order(b), 4);
        assert_eq!(q.conjugate(a, b), q.inverse(b));
    }

    #[test]
    fn klein_closure_kernel_witness_for_the_commutator() {
        let tower = klein_closure_tower(2);
        let base = tower.base().clone();
        let a = base.parse_word("a").unwrap();
        let b = base.parse_word("b").unwrap();
        let comm = a.commutator(&b).unwrap();
        // [a,b] = b⁻² lies in N₁ = ⟨a², b²⟩ but survives at level 2.
        assert_eq!(tower.kernel_nonmembership_witness(&comm, 2).unwrap(), Some(2));
        let identity = base.parse_word("").unwrap();
        assert_eq!(tower.kernel_nonmembership_witness(&identity, 2).unwrap(), None);

        // Dyadic: "a" dies at level 0 and survives at level 1.
        let dy = Tower::build(&dyadic(1)).unwrap();
        let a = dy.base().parse_word("a").unwrap();
        assert_eq!(dy.kernel_nonmembership_witness(&a, 1).unwrap(), Some(1));
    }

    #[test]
    fn transitions_are_surjective_and_compatible() {
        let tower = Tower::build(&dyadic(3)).unwrap();
        let t31 = tower.transition(3, 1).unwrap();
        let t32 = tower.transition(3, 2).unwrap();
        let t21 = tower.transition(2, 1).unwrap();
        for c in 0..8 {
            assert_eq!(t31.apply(c), t21.apply(t32.apply(c)));
        }
        // n = m is the identity.
        let t22 = tower.transition(2, 2).unwrap();
        for c in 0..4 {
            assert_eq!(t22.apply(c), c);
        }
    }

    #[test]
    fn transition_triangles_commute_everywhere() {
        // Exhaustive over all n ≥ m ≥ i and all elements, on a tower whose
        // quotients are not all cyclic.
        let tower = klein_closure_tower(3);
        for n in 0..=3 {
            for m in 0..=n {
                for i in 0..=m {
                    let t_ni = tower.transition(n, i).unwrap();
                    let t_nm = tower.transition(n, m).unwrap();
                    let t_mi = tower.transition(m, i).unwrap();
                    let order = tower.level(n).unwrap().table.index();
                    for c in 0..order {
                        assert_eq!(t_ni.apply(c), t_mi.apply(t_nm.apply(c)));
                    }
                }
            }
        }
    }

    #[test]
    fn hom_kernel_chain_surface_group() {
        let base =
            Presentation::parse(["a", "b", "c", "d"], &["a b a' b' c d c' d'"]).unwrap();
        let cat = catalog::builtin("s3").unwrap();
        let s3 = cat.group;
        let x = s3.generators()[0];
        let y = s3.generators()[1];
        let yx = s3.mul(y, x);
        let spec = TowerSpec {
            base,
            builder: ChainBuilder::HomKernelChain(vec![KernelTarget {
                name: "s3".into(),
                group: s3.clone(),
                images: vec![x, yx, yx, x],
            }]),
            depth: 1,
            limit: DEFAULT_ENUM_LIMIT,
        };
        let tower = Tower::build(&spec).unwrap();
        assert_eq!(tower.level(1).unwrap().table.index(), 6);
        assert!(tower.validate_regularity().unwrap().is_regular());
        // The level-1 quotient behaves like S₃.
        let q = &tower.quotient(1).unwrap().group;
        assert!(!q.is_abelian());
        assert_eq!(q.element_order_multiset(), vec![1, 2, 2, 2, 3, 3]);
        let t = tower.transition(1, 0).unwrap();
        assert_eq!(t.image_set(&q.whole_subgroup()).len(), 1);
        // Membership in the kernel equals triviality of the S₃ image:
        // a ↦ a transposition, so a² dies but a survives.
        let table = &tower.level(1).unwrap().table;
        assert!(table.contains(&tower.base().parse_word("a a").unwrap()).unwrap());
        assert!(!table.contains(&tower.base().parse_word("a").unwrap()).unwrap());
    }

    #[test]
    fn two_target_kernel_chain_refines_and_projects() {
        // N₂ = N₁ ∩ ker(G → A₅): index 360, with a surjective transition
        // back onto the order-6 level.
        let base =
            Presentation::parse(["a", "b", "c", "d"], &["a b a' b' c d c' d'"]).unwrap();
        let s3 = catalog::builtin("s3").unwrap().group;
        let a5 = catalog::builtin("a5").unwrap().group;
        let images_s3 = {
            let x = s3.generators()[0];
            let yx = s3.mul(s3.generators()[1], x);
            vec![x, yx, yx, x]
        };
        let images_a5 = {
            let x = a5.generators()[0];
            let y = a5.generators()[1];
            vec![x, y, y, x]
        };
        let spec = TowerSpec {
            base,
            builder: ChainBuilder::HomKernelChain(vec![
                KernelTarget {
                    name: "s3".into(),
                    group: s3,
                    images: images_s3,
                },
                KernelTarget {
                    name: "a5".into(),
                    group: a5,
                    images: images_a5,
                },
            ]),
            depth: 2,
            limit: DEFAULT_ENUM_LIMIT,
        };
        let tower = Tower::build(&spec).unwrap();
        let orders: Vec<usize> = tower.levels().iter().map(|l| l.table.index()).collect();
        assert_eq!(orders, vec![1, 6, 360]);
        assert!(tower.validate_regularity().unwrap().is_regular());
        let t21 = tower.transition(2, 1).unwrap();
        let whole = tower.quotient(2).unwrap().group.whole_subgroup();
        assert_eq!(t21.image_set(&whole).len(), 6);
    }

    #[test]
    fn rejected_images_that_do_not_kill_relators() {
        let base = Presentation::parse(["a"], &["a a"]).unwrap();
        let z4 = catalog::builtin("z4").unwrap().group;
        let gen_of_order_4 = (1..4).find(|&x| z4.element_order(x) == 4).unwrap();
        let spec = TowerSpec {
            base,
            builder: ChainBuilder::HomKernelChain(vec![KernelTarget {
                name: "z4".into(),
                group: z4,
                images: vec![gen_of_order_4],
            }]),
            depth: 1,
            limit: DEFAULT_ENUM_LIMIT,
        };
        assert!(matches!(
            Tower::build(&spec),
            Err(Error::RelatorViolation { .. })
        ));
    }

    #[test]
    fn mod_two_homology_tower_over_z() {
        // H₁(ℤ; ℤ/2) = ℤ/2, so each step doubles: the dyadic tower again.
        let spec = TowerSpec {
            base: Presentation::parse(["a"], &[]).unwrap(),
            builder: ChainBuilder::ModPHomologyKernels { prime: 2, depth: 3 },
            depth: 3,
            limit: DEFAULT_ENUM_LIMIT,
        };
        let tower = Tower::build(&spec).unwrap();
        let orders: Vec<usize> = tower.levels().iter().map(|l| l.table.index()).collect();
        assert_eq!(orders, vec![1, 2, 4, 8]);
    }

    #[test]
    fn mod_two_homology_tower_over_klein() {
        // H₁(K; ℤ/2) = (ℤ/2)² gives index 4; the kernel ⟨a², b²⟩ is a torus
        // group, so the second step multiplies by |H₁(ℤ²; ℤ/2)| = 4 again.
        let spec = TowerSpec {
            base: klein_base(),
            builder: ChainBuilder::ModPHomologyKernels { prime: 2, depth: 2 },
            depth: 2,
            limit: DEFAULT_ENUM_LIMIT,
        };
        let tower = Tower::build(&spec).unwrap();
        let orders: Vec<usize> = tower.levels().iter().map(|l| l.table.index()).collect();
        assert_eq!(orders, vec![1, 4, 16]);
        assert!(tower.validate_regularity().unwrap().is_regular());
    }

    #[test]
    fn mod_three_homology_step_over_the_genus_two_group() {
        // H₁(Σ₂; ℤ/3) = (ℤ/3)⁴: the first level has index 81.
        let base =
            Presentation::parse(["a", "b", "c", "d"], &["a b a' b' c d c' d'"]).unwrap();
        let spec = TowerSpec {
            base,
            builder: ChainBuilder::ModPHomologyKernels { prime: 3, depth: 1 },
            depth: 1,
            limit: DEFAULT_ENUM_LIMIT,
        };
        let tower = Tower::build(&spec).unwrap();
        assert_eq!(tower.level(1).unwrap().table.index(), 81);
        assert!(tower.validate_regularity().unwrap().is_regular());
        let q = &tower.quotient(1).unwrap().group;
        assert!(q.is_abelian());
        assert!(q.element_order_multiset().iter().all(|&o| o == 1 || o == 3));
    }

    #[test]
    fn non_normal_chain_member_is_diagnosed() {
        let base = Presentation::parse(["x", "y"], &["x x", "y y y", "x y x y"]).unwrap();
        let spec = TowerSpec {
            base: base.clone(),
            builder: ChainBuilder::Explicit(vec![SubgroupSpec::new(vec![
                base.parse_word("x").unwrap(),
            ])]),
            depth: 1,
            limit: DEFAULT_ENUM_LIMIT,
        };
        let tower = Tower::build(&spec).unwrap();
        let report = tower.validate_regularity().unwrap();
        assert!(!report.is_regular());
        assert_eq!(report.normal, vec![true, false]);
    }

    #[test]
    fn fiber_action_identity_holds() {
        let tower = Tower::build(&dyadic(3)).unwrap();
        for level in tower.levels() {
            let q = &level.quotient.as_ref().unwrap().group;
            assert!(fiber_action_check(&level.table, q, 0, 0).unwrap());
        }
        let klein = klein_closure_tower(2);
        // Order 16 at level 2: exhaustive over all 16³ triples.
        let level2 = klein.level(2).unwrap();
        let q2 = &klein.quotient(2).unwrap().group;
        assert!(fiber_action_check(&level2.table, q2, 0, 0).unwrap());
    }

    #[test]
    fn fiber_action_sampling_above_the_exhaustive_bound() {
        let tower = Tower::build(&dyadic(7)).unwrap();
        let level = tower.level(7).unwrap();
        let q = &tower.quotient(7).unwrap().group;
        assert_eq!(q.order(), 128);
        assert!(fiber_action_check(&level.table, q, 2_000, 42).unwrap());
    }

    #[test]
    fn order_bookkeeping() {
        let tower = klein_closure_tower(2);
        // |G/N_n| equals the product of successive transition indices.
        let o1 = tower.level(1).unwrap().table.index();
        let o2 = tower.level(2).unwrap().table.index();
        assert_eq!(o2 % o1, 0);
        // [G/N_n : N_i/N_n] = [G : N_i].
        let level2 = tower.quotient(2).unwrap();
        for (i, image) in level2.chain_images.iter().enumerate() {
            let index_in_quotient = level2.group.order() / image.len();
            let index_of_ni = tower.level(i).unwrap().table.index();
            assert_eq!(index_in_quotient, index_of_ni);
        }
    }
}
