//! Finite analogs of a solenoid's structure-group data.
//!
//! A model is a finite group Γ₀, a descending chain Γ₀ ⊇ Γ₁ ⊇ … ⊇ Γₖ, and a
//! "dense" subgroup γ₀, where density means γ₀·Γᵢ = Γ₀ for every chain
//! member — exactly the property the component and bihomogeneity lemmas
//! consume. Every check here is an exhaustive finite search, so the lemma
//! statements can be replayed on each model with no analysis left over.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{CosetSpace, FiniteGroup, GroupHom, Subgroup};
use crate::homsearch::{enumerate_monomorphisms_filtered, MonPolicy};

#[derive(Debug, Clone)]
pub struct FiniteSolenoidModel {
    group: FiniteGroup,
    /// chain[0] is Γ₀ itself.
    chain: Vec<Subgroup>,
    gamma: Subgroup,
    /// gamma_levels[i] = γ₀ ∩ Γᵢ.
    gamma_levels: Vec<Subgroup>,
}

/// Validation outcome; an empty issue list means the model is valid.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelDiagnostics {
    pub issues: Vec<String>,
}

impl ModelDiagnostics {
    pub fn is_valid(&self) -> bool {
        self.issues.is_empty()
    }
}

/// A characteristic monomorphism: a filtered injective map Γᵢ → Γ₀ tagged
/// with its chain index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharMono {
    pub chain_index: usize,
    pub hom: GroupHom,
}

/// Per-pair witnesses from the definitional bihomogeneity search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwapWitness {
    pub component_x: usize,
    pub component_y: usize,
    /// (w, index into the monomorphism list), if found.
    pub witness: Option<(usize, usize)>,
}

/// Per-element witnesses from the inverse-criterion search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InverseWitness {
    pub element: usize,
    pub mon_index: Option<usize>,
}

impl FiniteSolenoidModel {
    /// Builds a model; subgroups are verified closed, but the chain and
    /// density invariants are the business of [`FiniteSolenoidModel::validate`].
    pub fn new(group: FiniteGroup, chain: Vec<Subgroup>, gamma: Subgroup) -> Result<Self> {
        if chain.is_empty() {
            return Err(Error::InvariantViolation("chain must be nonempty".into()));
        }
        for sub in chain.iter().chain([&gamma]) {
            Subgroup::checked(&group, sub.members().to_vec())?;
        }
        let gamma_levels = chain.iter().map(|g| gamma.intersect(g)).collect();
        Ok(Self {
            group,
            chain,
            gamma,
            gamma_levels,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn chain(&self) -> &[Subgroup] {
        &self.chain
    }

    pub fn gamma(&self) -> &Subgroup {
        &self.gamma
    }

    pub fn gamma_level(&self, i: usize) -> &Subgroup {
        &self.gamma_levels[i]
    }

    /// Checks the type invariants: Γ₀ is the whole group, the chain descends
    /// strictly, and γ₀ meets every left coset of every chain member.
    /// Density failures name the offending coset representative.
    pub fn validate(&self) -> ModelDiagnostics {
        let mut issues = Vec::new();
        if self.chain[0].len() != self.group.order() {
            issues.push("chain[0] must be the whole group".to_string());
        }
        for i in 1..self.chain.len() {
            if !self.chain[i].is_subset_of(&self.chain[i - 1]) {
                issues.push(format!(
                    "chain member {i} is not contained in member {}",
                    i - 1
                ));
            }
            if self.chain[i].len() >= self.chain[i - 1].len() {
                issues.push(format!("chain is not strictly descending at index {i}"));
            }
        }
        for (i, level) in self.chain.iter().enumerate() {
            for x in 0..self.group.order() {
                // γ₀ ∩ xΓᵢ ≠ ∅  ⟺  some g ∈ γ₀ has x⁻¹g ∈ Γᵢ.
                let meets = self
                    .gamma
                    .members()
                    .iter()
                    .any(|&g| level.contains(self.group.mul(self.group.inverse(x), g)));
                if !meets {
                    issues.push(format!(
                        "density fails at chain index {i}: coset of element {x} misses gamma"
                    ));
                    break;
                }
            }
        }
        ModelDiagnostics { issues }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    /// The path components: the left coset space Γ₀/γ₀. The component of the
    /// identity is γ₀ itself.
    pub fn path_components(&self) -> CosetSpace {
        self.group.left_coset_space(&self.gamma)
    }

    /// Whether the inclusion Γⱼ ⊆ Γᵢ induces a bijection Γⱼ/γⱼ → Γᵢ/γᵢ
    /// (coset x·γⱼ ↦ x·γᵢ), for chain indices j > i.
    pub fn component_iso_check(&self, j: usize, i: usize) -> Result<bool> {
        let len = self.chain.len();
        if j >= len || i >= len || j <= i {
            return Err(Error::ChainIndexOutOfRange { index: j.max(i), len });
        }
        let classes_j = cosets_within(&self.group, &self.chain[j], &self.gamma_levels[j]);
        let classes_i = cosets_within(&self.group, &self.chain[i], &self.gamma_levels[i]);
        // Well-definedness is automatic (γⱼ ⊆ γᵢ); check it anyway, then
        // injectivity and surjectivity of the induced map.
        let mut hit = vec![false; classes_i.reps.len()];
        let mut images = Vec::new();
        for class in &classes_j.classes {
            let mut targets: Vec<usize> = class.iter().map(|&x| classes_i.class_of(x)).collect();
            targets.dedup();
            if targets.len() != 1 {
                return Ok(false);
            }
            let target = targets[0];
            if images.contains(&target) {
                return Ok(false); // not injective
            }
            images.push(target);
            hit[target] = true;
        }
        Ok(hit.iter().all(|&h| h))
    }

    /// The finite Mon(Γ₀, γ₀): all filtered monomorphisms Γᵢ → Γ₀ over every
    /// chain index, in (chain index, image tuple) order.
    pub fn char_monomorphisms(&self, policy: MonPolicy) -> Vec<CharMono> {
        let mut out = Vec::new();
        for (i, level) in self.chain.iter().enumerate() {
            let mons = enumerate_monomorphisms_filtered(
                &self.group,
                level,
                &self.gamma_levels[i],
                &self.group,
                &self.gamma,
                policy,
                &self.chain,
            );
            out.extend(mons.into_iter().map(|hom| CharMono {
                chain_index: i,
                hom,
            }));
        }
        out
    }

    /// The map a monomorphism induces on components: x·γ₀ ↦ φ(r)·γ₀ for any
    /// representative r ∈ x·γ₀ ∩ Γᵢ (nonempty by density).
    ///
    /// Checks independence of the representative across all of them and
    /// injectivity; a violation means φ was not a filtered monomorphism.
    pub fn induced_component_map(&self, phi: &CharMono) -> Result<Vec<usize>> {
        let components = self.path_components();
        let mut map = vec![usize::MAX; components.count()];
        for (c, slot) in map.iter_mut().enumerate() {
            let mut image = usize::MAX;
            let mut any = false;
            for x in components.members_of(c) {
                if !phi.hom.is_defined_at(x) {
                    continue;
                }
                any = true;
                let target = components.coset_of(phi.hom.apply(x));
                if image == usize::MAX {
                    image = target;
                } else if image != target {
                    return Err(Error::WellDefinednessViolation(format!(
                        "component {c} has representatives mapping to components {image} and {target}"
                    )));
                }
            }
            if !any {
                return Err(Error::WellDefinednessViolation(format!(
                    "component {c} misses the domain; the model cannot be dense"
                )));
            }
            *slot = image;
        }
        let mut seen = vec![false; components.count()];
        for &t in &map {
            if seen[t] {
                return Err(Error::WellDefinednessViolation(
                    "induced component map is not injective".into(),
                ));
            }
            seen[t] = true;
        }
        Ok(map)
    }

    fn translated_component(&self, components: &CosetSpace, w: usize, component: usize) -> usize {
        let rep = components.reps()[component];
        components.coset_of(self.group.mul(w, rep))
    }

    /// Definitional algebraic bihomogeneity: for every pair of components
    /// there are w ∈ Γ₀ and φ ∈ Mon such that z ↦ w·φ̄(z) swaps them.
    /// Witnesses are searched in (w, monomorphism) order.
    pub fn is_algebraically_bihomogeneous_definitional(
        &self,
        policy: MonPolicy,
    ) -> Result<(bool, Vec<SwapWitness>)> {
        let components = self.path_components();
        let mons = self.char_monomorphisms(policy);
        let induced: Vec<Vec<usize>> = mons
            .iter()
            .map(|m| self.induced_component_map(m))
            .collect::<Result<Vec<_>>>()?;
        let mut table = Vec::new();
        let mut all = true;
        for cx in 0..components.count() {
            for cy in cx..components.count() {
                let mut witness = None;
                'search: for w in 0..self.group.order() {
                    for (mi, ind) in induced.iter().enumerate() {
                        let to_y = self.translated_component(&components, w, ind[cx]);
                        let to_x = self.translated_component(&components, w, ind[cy]);
                        if to_y == cy && to_x == cx {
                            witness = Some((w, mi));
                            break 'search;
                        }
                    }
                }
                all &= witness.is_some();
                table.push(SwapWitness {
                    component_x: cx,
                    component_y: cy,
                    witness,
                });
            }
        }
        Ok((all, table))
    }

    /// The inverse criterion: every z ∈ Γ₀ admits φ ∈ Mon with
    /// φ̄(z·γ₀) = z⁻¹·γ₀.
    pub fn inverse_criterion_check(
        &self,
        policy: MonPolicy,
    ) -> Result<(bool, Vec<InverseWitness>)> {
        let components = self.path_components();
        let mons = self.char_monomorphisms(policy);
        let induced: Vec<Vec<usize>> = mons
            .iter()
            .map(|m| self.induced_component_map(m))
            .collect::<Result<Vec<_>>>()?;
        let mut table = Vec::new();
        let mut all = true;
        for z in 0..self.group.order() {
            let from = components.coset_of(z);
            let to = components.coset_of(self.group.inverse(z));
            let found = induced.iter().position(|ind| ind[from] == to);
            all &= found.is_some();
            table.push(InverseWitness {
                element: z,
                mon_index: found,
            });
        }
        Ok((all, table))
    }

    /// The covering device: V(φ, g) = {z : z·φ̃(z) = g} with φ̃(z) = φ(z)
    /// where defined and φ(representative of z's component) otherwise.
    /// True iff the union over φ ∈ Mon and g ∈ γ₀ covers Γ₀.
    pub fn v_sets_cover_check(&self, policy: MonPolicy) -> Result<bool> {
        let components = self.path_components();
        let mons = self.char_monomorphisms(policy);
        let mut covered = vec![false; self.group.order()];
        for phi in &mons {
            // Least element of each component that lies in the domain.
            let mut component_rep = vec![usize::MAX; components.count()];
            for (c, slot) in component_rep.iter_mut().enumerate() {
                *slot = components
                    .members_of(c)
                    .into_iter()
                    .find(|&x| phi.hom.is_defined_at(x))
                    .ok_or_else(|| {
                        Error::WellDefinednessViolation(format!(
                            "component {c} misses the domain; the model cannot be dense"
                        ))
                    })?;
            }
            for z in 0..self.group.order() {
                let arg = if phi.hom.is_defined_at(z) {
                    z
                } else {
                    component_rep[components.coset_of(z)]
                };
                let product = self.group.mul(z, phi.hom.apply(arg));
                if self.gamma.contains(product) {
                    covered[z] = true;
                }
            }
        }
        Ok(covered.iter().all(|&c| c))
    }
}

/// Left cosets of `small` inside `big` (both subgroups of the same parent).
struct InnerCosets {
    reps: Vec<usize>,
    /// parent element → class index (usize::MAX outside `big`).
    assignment: Vec<usize>,
    classes: Vec<Vec<usize>>,
}

impl InnerCosets {
    fn class_of(&self, x: usize) -> usize {
        self.assignment[x]
    }
}

fn cosets_within(parent: &FiniteGroup, big: &Subgroup, small: &Subgroup) -> InnerCosets {
    let mut assignment = vec![usize::MAX; parent.order()];
    let mut reps = Vec::new();
    let mut classes = Vec::new();
    for &x in big.members() {
        if assignment[x] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(x);
        let mut class = Vec::new();
        for &m in small.members() {
            let y = parent.mul(x, m);
            assignment[y] = id;
            class.push(y);
        }
        class.sort_unstable();
        classes.push(class);
    }
    InnerCosets {
        reps,
        assignment,
        classes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn s3_model() -> FiniteSolenoidModel {
        let s3 = catalog::builtin("s3").unwrap().group;
        let transposition = (1..6).find(|&x| s3.element_order(x) == 2).unwrap();
        let three_cycle = (1..6).find(|&x| s3.element_order(x) == 3).unwrap();
        let gamma = s3.subgroup_generated(&[transposition]);
        let a3 = s3.subgroup_generated(&[three_cycle]);
        let whole = s3.whole_subgroup();
        FiniteSolenoidModel::new(s3, vec![whole, a3], gamma).unwrap()
    }

    #[test]
    fn s3_model_is_valid_and_a3_gamma_is_not_dense() {
        let m = s3_model();
        assert!(m.is_valid());

        // γ = A₃ fails density against the chain member A₃: A₃·A₃ ≠ S₃.
        let s3 = catalog::builtin("s3").unwrap().group;
        let three_cycle = (1..6).find(|&x| s3.element_order(x) == 3).unwrap();
        let a3 = s3.subgroup_generated(&[three_cycle]);
        let whole = s3.whole_subgroup();
        let bad = FiniteSolenoidModel::new(s3, vec![whole, a3.clone()], a3).unwrap();
        let diag = bad.validate();
        assert!(!diag.is_valid());
        assert!(diag.issues.iter().any(|i| i.contains("density")));
    }

    #[test]
    fn whole_gamma_model_is_valid() {
        let z4 = catalog::builtin("z4").unwrap().group;
        let whole = z4.whole_subgroup();
        let m = FiniteSolenoidModel::new(z4.clone(), vec![whole.clone()], whole).unwrap();
        assert!(m.is_valid());
        assert_eq!(m.path_components().count(), 1);
    }

    #[test]
    fn component_counts() {
        let m = s3_model();
        assert_eq!(m.path_components().count(), 3);

        let z8 = catalog::builtin("z8").unwrap().group;
        let four = (1..8).find(|&x| z8.element_order(x) == 2).unwrap();
        let gamma = z8.subgroup_generated(&[four]);
        let m = FiniteSolenoidModel::new(z8.clone(), vec![z8.whole_subgroup()], gamma).unwrap();
        assert_eq!(m.path_components().count(), 4);
    }

    #[test]
    fn s3_component_iso_between_levels() {
        let m = s3_model();
        // |A₃ / {e}| = 3 = |S₃ / γ|.
        assert!(m.component_iso_check(1, 0).unwrap());
        assert!(m.component_iso_check(0, 0).is_err());
        assert!(m.component_iso_check(2, 0).is_err());
    }

    #[test]
    fn repeated_chain_member_still_maps_isomorphically() {
        // With Γ₁ = Γ₀ the induced map is the identity; validation flags the
        // non-strict chain but the check itself holds.
        let s3 = catalog::builtin("s3").unwrap().group;
        let transposition = (1..6).find(|&x| s3.element_order(x) == 2).unwrap();
        let gamma = s3.subgroup_generated(&[transposition]);
        let whole = s3.whole_subgroup();
        let m = FiniteSolenoidModel::new(s3, vec![whole.clone(), whole], gamma).unwrap();
        assert!(!m.is_valid());
        assert!(m.component_iso_check(1, 0).unwrap());
    }

    #[test]
    fn the_two_policies_genuinely_differ() {
        // v4 with chain (v4, ⟨a⟩) and γ = ⟨b⟩: the level-1 monomorphism
        // a ↦ ab has image ⟨ab⟩, which is not a chain member, so the strict
        // policy drops it while the loose policy keeps it.
        let v4 = catalog::builtin("v4").unwrap().group;
        let order2: Vec<usize> = (1..4).collect();
        let a = order2[0];
        let b = order2[1];
        let chain1 = v4.subgroup_generated(&[a]);
        let gamma = v4.subgroup_generated(&[b]);
        let m = FiniteSolenoidModel::new(
            v4.clone(),
            vec![v4.whole_subgroup(), chain1],
            gamma,
        )
        .unwrap();
        assert!(m.is_valid());
        let loose = m.char_monomorphisms(MonPolicy::ImageAnywhere);
        let strict = m.char_monomorphisms(MonPolicy::ImageInChain);
        assert!(strict.len() < loose.len());
        // Every strict monomorphism is also a loose one.
        for s in &strict {
            assert!(loose
                .iter()
                .any(|l| l.chain_index == s.chain_index
                    && l.hom.image_tuple(&m.chain()[s.chain_index])
                        == s.hom.image_tuple(&m.chain()[s.chain_index])));
        }
        // The lemma equivalence holds under both regardless.
        for policy in [MonPolicy::ImageAnywhere, MonPolicy::ImageInChain] {
            let (d, _) = m.is_algebraically_bihomogeneous_definitional(policy).unwrap();
            let (i, _) = m.inverse_criterion_check(policy).unwrap();
            assert_eq!(d, i);
        }
    }

    #[test]
    fn abelian_whole_gamma_model_contains_the_inversion() {
        let z8 = catalog::builtin("z8").unwrap().group;
        let whole = z8.whole_subgroup();
        let m = FiniteSolenoidModel::new(z8.clone(), vec![whole.clone()], whole).unwrap();
        let mons = m.char_monomorphisms(MonPolicy::ImageAnywhere);
        assert!(mons
            .iter()
            .any(|cm| (0..8).all(|x| cm.hom.apply(x) == z8.inverse(x))));
    }

    #[test]
    fn s3_char_monomorphisms_count_four() {
        let m = s3_model();
        let mons = m.char_monomorphisms(MonPolicy::ImageAnywhere);
        assert_eq!(mons.len(), 4);
        assert_eq!(mons.iter().filter(|m| m.chain_index == 0).count(), 2);
        assert_eq!(mons.iter().filter(|m| m.chain_index == 1).count(), 2);
        // The identity is present.
        let id_present = mons
            .iter()
            .any(|cm| cm.chain_index == 0 && (0..6).all(|x| cm.hom.apply(x) == x));
        assert!(id_present);
    }

    #[test]
    fn inversion_on_a3_swaps_the_non_identity_components() {
        let m = s3_model();
        let mons = m.char_monomorphisms(MonPolicy::ImageAnywhere);
        let components = m.path_components();
        // Find the inversion on A₃ (chain index 1, not the inclusion).
        let inversion = mons
            .iter()
            .find(|cm| {
                cm.chain_index == 1
                    && m.chain()[1]
                        .members()
                        .iter()
                        .all(|&x| cm.hom.apply(x) == m.group().inverse(x))
                    && m.chain()[1]
                        .members()
                        .iter()
                        .any(|&x| x != m.group().inverse(x))
            })
            .expect("inversion on A3 is a filtered monomorphism");
        let induced = m.induced_component_map(inversion).unwrap();
        let id_component = components.coset_of(0);
        assert_eq!(induced[id_component], id_component);
        let others: Vec<usize> = (0..3).filter(|&c| c != id_component).collect();
        assert_eq!(induced[others[0]], others[1]);
        assert_eq!(induced[others[1]], others[0]);

        // The identity map induces the identity on components.
        let identity = mons
            .iter()
            .find(|cm| cm.chain_index == 0 && (0..6).all(|x| cm.hom.apply(x) == x))
            .unwrap();
        let induced_id = m.induced_component_map(identity).unwrap();
        assert_eq!(induced_id, vec![0, 1, 2]);
    }

    #[test]
    fn z8_model_is_bihomogeneous() {
        let z8 = catalog::builtin("z8").unwrap().group;
        let four = (1..8).find(|&x| z8.element_order(x) == 2).unwrap();
        let gamma = z8.subgroup_generated(&[four]);
        let m = FiniteSolenoidModel::new(z8.clone(), vec![z8.whole_subgroup()], gamma).unwrap();
        let (bihom, table) = m
            .is_algebraically_bihomogeneous_definitional(MonPolicy::ImageAnywhere)
            .unwrap();
        assert!(bihom);
        assert!(table.iter().all(|w| w.witness.is_some()));
        let (inv, _) = m.inverse_criterion_check(MonPolicy::ImageAnywhere).unwrap();
        assert!(inv);
        assert!(m.v_sets_cover_check(MonPolicy::ImageAnywhere).unwrap());
    }

    #[test]
    fn s3_model_definitional_equals_inverse_criterion() {
        let m = s3_model();
        let (bihom, _) = m
            .is_algebraically_bihomogeneous_definitional(MonPolicy::ImageAnywhere)
            .unwrap();
        let (inv, _) = m.inverse_criterion_check(MonPolicy::ImageAnywhere).unwrap();
        assert_eq!(bihom, inv);
        if inv {
            assert!(m.v_sets_cover_check(MonPolicy::ImageAnywhere).unwrap());
        }
    }

    #[test]
    fn single_component_model_is_trivially_bihomogeneous() {
        let s3 = catalog::builtin("s3").unwrap().group;
        let whole = s3.whole_subgroup();
        let m = FiniteSolenoidModel::new(s3, vec![whole.clone()], whole).unwrap();
        let (bihom, _) = m
            .is_algebraically_bihomogeneous_definitional(MonPolicy::ImageAnywhere)
            .unwrap();
        assert!(bihom);
    }

    #[test]
    fn induced_maps_compose_naturally() {
        // φ̄ then ψ̄ equals the map induced by ψ∘φ when im(φ) ⊆ dom(ψ).
        let m = s3_model();
        let mons = m.char_monomorphisms(MonPolicy::ImageAnywhere);
        let components = m.path_components();
        for phi in &mons {
            for psi in &mons {
                let dom_phi = &m.chain()[phi.chain_index];
                let dom_psi = &m.chain()[psi.chain_index];
                let image_in_domain = dom_phi
                    .members()
                    .iter()
                    .all(|&x| dom_psi.contains(phi.hom.apply(x)));
                if !image_in_domain {
                    continue;
                }
                let assignment: Vec<(usize, usize)> = dom_phi
                    .members()
                    .iter()
                    .map(|&x| (x, psi.hom.apply(phi.hom.apply(x))))
                    .collect();
                let composite =
                    GroupHom::new(m.group(), dom_phi, m.group(), &assignment).unwrap();
                let composite = CharMono {
                    chain_index: phi.chain_index,
                    hom: composite,
                };
                let lhs = m.induced_component_map(&composite).unwrap();
                let f = m.induced_component_map(phi).unwrap();
                let g = m.induced_component_map(psi).unwrap();
                let rhs: Vec<usize> = (0..components.count()).map(|c| g[f[c]]).collect();
                assert_eq!(lhs, rhs);
            }
        }
    }
}
