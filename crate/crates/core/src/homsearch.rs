//! Backtracking enumeration of homomorphisms, monomorphisms and
//! automorphisms between explicit finite groups.
//!
//! Search order is fixed everywhere: generators in presentation (or greedy
//! generating-sequence) order, candidate images in element order. Result
//! lists are sorted by image tuple, so enumeration is deterministic.

use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupHom, Subgroup};
use crate::words::Presentation;

/// A generator-image assignment for a presentation, with all relators
/// mapping to the identity of the target.
pub type GeneratorImages = Vec<usize>;

/// Enumerates assignments generator → element of `target` under which every
/// relator evaluates to the identity. With `surjective_only`, keeps only
/// assignments whose images generate the whole target.
///
/// A relator is checked as soon as all generators it mentions are assigned.
pub fn enumerate_homomorphisms(
    p: &Presentation,
    target: &FiniteGroup,
    surjective_only: bool,
) -> Vec<GeneratorImages> {
    let mut out = Vec::new();
    visit_homomorphisms(p, target, surjective_only, &mut |images| {
        out.push(images.to_vec());
        true
    });
    out
}

/// Visitor-driven variant of [`enumerate_homomorphisms`]; the visitor returns
/// `false` to stop the search early. Visits in lexicographic image order.
pub fn visit_homomorphisms(
    p: &Presentation,
    target: &FiniteGroup,
    surjective_only: bool,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) {
    let ngens = p.arity();
    // relators_by_depth[i]: relators whose highest generator index is i,
    // checkable once generators 0..=i are assigned.
    let mut relators_by_depth: Vec<Vec<&crate::words::Word>> = vec![Vec::new(); ngens.max(1)];
    let mut constant_relators = Vec::new();
    for r in p.relators() {
        match r.letters().iter().map(|l| l.gen).max() {
            Some(maxg) => relators_by_depth[maxg].push(r),
            None => constant_relators.push(r),
        }
    }
    if !constant_relators.is_empty() {
        // A presentation never stores identity relators, so this is unreachable;
        // kept as a guard for hand-built inputs.
        return;
    }
    if ngens == 0 {
        visit(&[]);
        return;
    }
    let mut images = vec![0usize; ngens];
    let mut stack_ok = true;
    #[allow(clippy::too_many_arguments)]
    fn descend(
        p: &Presentation,
        target: &FiniteGroup,
        relators_by_depth: &[Vec<&crate::words::Word>],
        surjective_only: bool,
        images: &mut Vec<usize>,
        depth: usize,
        visit: &mut dyn FnMut(&[usize]) -> bool,
        keep_going: &mut bool,
    ) {
        if !*keep_going {
            return;
        }
        if depth == p.arity() {
            if surjective_only {
                let generated = target.subgroup_generated(images);
                if generated.len() != target.order() {
                    return;
                }
            }
            if !visit(images) {
                *keep_going = false;
            }
            return;
        }
        for candidate in 0..target.order() {
            images[depth] = candidate;
            let consistent = relators_by_depth[depth]
                .iter()
                .all(|r| target.eval_word(r, images).is_ok_and(|v| v == 0));
            if consistent {
                descend(
                    p,
                    target,
                    relators_by_depth,
                    surjective_only,
                    images,
                    depth + 1,
                    visit,
                    keep_going,
                );
                if !*keep_going {
                    return;
                }
            }
        }
    }
    descend(
        p,
        target,
        &relators_by_depth,
        surjective_only,
        &mut images,
        0,
        visit,
        &mut stack_ok,
    );
}

/// Greedy generating sequence of a subgroup: elements in ascending order,
/// kept when they enlarge the generated subgroup.
pub fn generating_sequence(parent: &FiniteGroup, sub: &Subgroup) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut current = parent.trivial_subgroup();
    for &x in sub.members() {
        if !current.contains(x) {
            gens.push(x);
            let mut seeds = gens.clone();
            seeds.extend_from_slice(current.members());
            current = parent.subgroup_generated(&seeds);
            if current.len() == sub.len() {
                break;
            }
        }
    }
    gens
}

/// Enumerates all homomorphisms from a subgroup `dom` of `src` into `tgt`.
///
/// Backtracks over images of a generating sequence; each partial assignment
/// is closed under multiplication, and inconsistencies prune immediately.
/// Results are sorted by full image tuple over the sorted domain.
pub fn homs_from_subgroup(
    src: &FiniteGroup,
    dom: &Subgroup,
    tgt: &FiniteGroup,
) -> Vec<GroupHom> {
    let gens = generating_sequence(src, dom);
    let mut found: Vec<Vec<(usize, usize)>> = Vec::new();
    // partial: src element -> tgt element (usize::MAX = unset).
    let mut partial = vec![usize::MAX; src.order()];
    partial[0] = 0;

    fn close(
        src: &FiniteGroup,
        tgt: &FiniteGroup,
        partial: &mut [usize],
        known: &mut Vec<usize>,
        new_elt: usize,
        new_img: usize,
    ) -> bool {
        // Insert and propagate products with everything known, both orders.
        if partial[new_elt] != usize::MAX {
            return partial[new_elt] == new_img;
        }
        partial[new_elt] = new_img;
        known.push(new_elt);
        let mut queue = vec![new_elt];
        while let Some(x) = queue.pop() {
            let fx = partial[x];
            for i in 0..known.len() {
                let y = known[i];
                let fy = partial[y];
                for (prod, fprod) in [
                    (src.mul(x, y), tgt.mul(fx, fy)),
                    (src.mul(y, x), tgt.mul(fy, fx)),
                ] {
                    if partial[prod] == usize::MAX {
                        partial[prod] = fprod;
                        known.push(prod);
                        queue.push(prod);
                    } else if partial[prod] != fprod {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn descend(
        src: &FiniteGroup,
        tgt: &FiniteGroup,
        gens: &[usize],
        depth: usize,
        partial: &mut Vec<usize>,
        known: &mut Vec<usize>,
        found: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if depth == gens.len() {
            found.push(known.iter().map(|&x| (x, partial[x])).collect());
            return;
        }
        let snapshot_len = known.len();
        for candidate in 0..tgt.order() {
            if close(src, tgt, partial, known, gens[depth], candidate) {
                descend(src, tgt, gens, depth + 1, partial, known, found);
            }
            // rollback
            for &x in &known[snapshot_len..] {
                partial[x] = usize::MAX;
            }
            known.truncate(snapshot_len);
        }
    }

    let mut known = vec![0usize];
    descend(src, tgt, &gens, 0, &mut partial, &mut known, &mut found);

    let mut homs: Vec<GroupHom> = found
        .into_iter()
        .map(|assignment| {
            GroupHom::new(src, dom, tgt, &assignment)
                .expect("closure-built assignment is multiplicative")
        })
        .collect();
    homs.sort_by_key(|h| h.image_tuple(dom));
    homs.dedup_by_key(|h| h.image_tuple(dom));
    homs
}

/// How the image of a filtered monomorphism is constrained.
///
/// The loose policy only requires the image to be a subgroup (every subgroup
/// of a finite model is open); the strict variant additionally requires the
/// image to be one of the designated chain subgroups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MonPolicy {
    #[default]
    ImageAnywhere,
    ImageInChain,
}

/// All injective homomorphisms `f : dom → tgt` with `f(dom_char) = tgt_char ∩ f(dom)`.
///
/// `dom` and `dom_char` live in `src`; `tgt_char` lives in `tgt`. Under
/// [`MonPolicy::ImageInChain`], `chain_sets` lists the admissible image
/// subgroups.
#[allow(clippy::too_many_arguments)]
pub fn enumerate_monomorphisms_filtered(
    src: &FiniteGroup,
    dom: &Subgroup,
    dom_char: &Subgroup,
    tgt: &FiniteGroup,
    tgt_char: &Subgroup,
    policy: MonPolicy,
    chain_sets: &[Subgroup],
) -> Vec<GroupHom> {
    homs_from_subgroup(src, dom, tgt)
        .into_iter()
        .filter(|f| f.is_injective())
        .filter(|f| {
            let image: Vec<usize> = f.image_set(dom);
            let char_image: Vec<usize> = {
                let mut v: Vec<usize> =
                    dom_char.members().iter().map(|&m| f.apply(m)).collect();
                v.sort_unstable();
                v
            };
            let gamma_cap_image: Vec<usize> = image
                .iter()
                .copied()
                .filter(|&y| tgt_char.contains(y))
                .collect();
            if char_image != gamma_cap_image {
                return false;
            }
            match policy {
                MonPolicy::ImageAnywhere => true,
                MonPolicy::ImageInChain => {
                    chain_sets.iter().any(|s| s.members() == image.as_slice())
                }
            }
        })
        .collect()
}

/// Complete automorphism list, bounded to keep the search at desk scale.
pub fn automorphisms(g: &FiniteGroup, bound: usize) -> Result<Vec<GroupHom>> {
    if g.order() > bound {
        return Err(Error::OrderBoundExceeded {
            order: g.order(),
            bound,
        });
    }
    let whole = g.whole_subgroup();
    Ok(homs_from_subgroup(g, &whole, g)
        .into_iter()
        .filter(|f| f.is_injective())
        .collect())
}

pub const DEFAULT_AUTOMORPHISM_BOUND: usize = 64;
